//! Exact integer linear algebra: Smith and Hermite normal forms, lattice
//! quotients, saturation and rational membership tests.
//!
//! Everything here works over arbitrary-precision integers. Rational data
//! (torsion points) enters only through [`RatVector`], which carries a common
//! denominator; callers that need a rescaled lattice multiply through by that
//! denominator, since quotient invariants do not change under simultaneous
//! scaling.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`IntMatrix::from_rows`] but keeps the column count when there are no rows.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix { rows: nrows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len(), "dimension mismatch in vector-matrix product");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += c * &self[(i, j)];
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = &self[(i, j)] * &other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Stacks the rows of `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack needs equal column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = k * &self[(src, j)];
            self[(dst, j)] += delta;
        }
    }

    /// `col[dst] += k * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = k * &self[(i, src)];
            self[(i, dst)] += delta;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = idx.into_iter().map(|i| self.row(i).to_vec()).collect();
        IntMatrix::from_big_rows(rows, self.cols)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A rational vector stored as integer numerators over one positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatVector {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl RatVector {
    /// Normalizes so that `gcd(numerators, denominator) = 1` and the denominator is positive.
    pub fn new(numerators: Vec<BigInt>, denominator: BigInt) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        let mut g = denominator.abs();
        for n in &numerators {
            g = g.gcd(n);
        }
        let sign = if denominator.is_negative() { -BigInt::one() } else { BigInt::one() };
        let g = g * sign;
        RatVector {
            numerators: numerators.into_iter().map(|n| n / &g).collect(),
            denominator: denominator / g,
        }
    }

    pub fn from_i64(numerators: &[i64], denominator: i64) -> Self {
        Self::new(numerators.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(denominator))
    }

    pub fn integral(v: Vec<BigInt>) -> Self {
        RatVector { numerators: v, denominator: BigInt::one() }
    }

    pub fn zero(n: usize) -> Self {
        Self::integral(vec![BigInt::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    pub fn neg(&self) -> RatVector {
        RatVector {
            numerators: self.numerators.iter().map(|x| -x).collect(),
            denominator: self.denominator.clone(),
        }
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        let den = self.denominator.lcm(&other.denominator);
        let a = &den / &self.denominator;
        let b = &den / &other.denominator;
        let nums = self.numerators.iter().zip(&other.numerators).map(|(x, y)| x * &a + y * &b).collect();
        RatVector::new(nums, den)
    }

    pub fn scale(&self, k: &BigInt) -> RatVector {
        RatVector::new(self.numerators.iter().map(|x| x * k).collect(), self.denominator.clone())
    }

    /// `M · self`
    pub fn apply(&self, m: &IntMatrix) -> RatVector {
        RatVector::new(m.mul_vec(&self.numerators), self.denominator.clone())
    }

    /// Numerators over the requested denominator, if it is a multiple of the current one.
    pub fn numerators_over(&self, den: &BigInt) -> Option<Vec<BigInt>> {
        if !den.is_multiple_of(&self.denominator) {
            return None;
        }
        let k = den / &self.denominator;
        Some(self.numerators.iter().map(|x| x * &k).collect())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .numerators
            .iter()
            .map(|n| {
                let (n, d) = reduce_fraction(n, &self.denominator);
                if d.is_one() {
                    n.to_string()
                } else {
                    format!("{n}/{d}")
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn reduce_fraction(n: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
    let g = n.gcd(d);
    if g.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    (n / &g, d / &g)
}

/// Free rank plus invariant factors `d_1 | d_2 | …`, each at least 2.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_u64() {
            Some(u) => seq.serialize_element(&u)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => AbelianInvariants { free_rank: 1, torsion: vec![] },
            1 => Self::trivial(),
            n => AbelianInvariants { free_rank: 0, torsion: vec![BigInt::from(n)] },
        }
    }

    /// Invariants of `ℤ^ambient / ⟨d_i e_i⟩` for a Smith diagonal.
    pub fn from_diagonal(diag: &[BigInt], ambient: usize) -> Self {
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion = diag.iter().filter(|d| !d.is_zero() && !d.is_one()).map(|d| d.abs()).collect();
        AbelianInvariants { free_rank: ambient - nonzero, torsion }
    }

    /// Group order; `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion.len() <= 1
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        parts.extend(std::iter::repeat_n("Z".to_string(), self.free_rank));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smallest nonzero |entry| in the lower-right block starting at `t`; ties go to
/// the first entry in row-major order.
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with transforms, computed by repeated smallest-pivot
/// elimination. Deterministic for a fixed input.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = find_pivot(&d, t) else {
                return SnfResult { d, u, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut remainder = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                remainder |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                remainder |= !d[(t, j)].is_zero();
            }
            if remainder {
                continue;
            }

            // Divisibility: fold an offending row into row t and go again.
            let piv = d[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&piv)));
            if let Some(i) = offender {
                let one = BigInt::one();
                d.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            if piv.is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
    }
    SnfResult { d, u, v }
}

/// Row-style Hermite normal form: the nonzero rows of an echelon basis of the
/// row span, pivots positive, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = -h[(i, col)].div_floor(&h[(r, col)]);
                h.add_row_multiple(i, r, &q);
                done &= h[(i, col)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, col)].div_floor(&h[(r, col)]);
            h.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    h.select_rows(0..r)
}

/// A sublattice of `ℤ^n` held in Hermite form, for canonical reduction and
/// membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(gens: &IntMatrix) -> Self {
        let basis = hermite_normal_form(gens);
        let pivots = (0..basis.rows())
            .map(|i| (0..basis.cols()).find(|&j| !basis[(i, j)].is_zero()).expect("HNF rows are nonzero"))
            .collect();
        Lattice { basis, pivots }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let q = v[p].div_floor(&self.basis[(k, p)]);
            if q.is_zero() {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate() {
                *x -= &q * &self.basis[(k, j)];
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Index `[ℤ^n : L]` for a full-rank lattice, otherwise `None`.
    pub fn index(&self) -> Option<BigInt> {
        (self.rank() == self.ambient()).then(|| (0..self.rank()).map(|k| self.basis[(k, self.pivots[k])].clone()).product())
    }
}

/// Invariants of `ℤ^ambient_rank / rowspan(A)`.
pub fn cokernel_invariants(a: &IntMatrix, ambient_rank: usize) -> AbelianInvariants {
    assert_eq!(a.cols(), ambient_rank, "relation rows must live in the ambient lattice");
    let snf = smith_normal_form(a);
    AbelianInvariants::from_diagonal(&snf.diagonal(), ambient_rank)
}

/// Integer basis (as rows) of `{ k : k·A = 0 }`.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    snf.u.select_rows(r..a.rows())
}

/// Integer basis (as rows) of `{ x : A·x = 0 }`.
pub fn right_kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    snf.v.transpose().select_rows(r..a.cols())
}

/// Basis of `{ v ∈ ℤ^cols : k·v ∈ rowspan(A) for some k ≥ 1 }`, in Hermite form.
pub fn saturation(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let kernel = right_kernel(a);
    if kernel.rows() == 0 {
        return IntMatrix::identity(n);
    }
    hermite_normal_form(&left_kernel(&kernel.transpose()))
}

/// Decides `t ∈ A·ℚ^k + rowspan_ℤ(Λ)` exactly.
///
/// The rational column space of `a` is quotiented out with an integral left
/// kernel `K`; what is left is a lattice membership question for `K·t` against
/// the image lattice `K·Λ`.
pub fn membership(t: &RatVector, a: &IntMatrix, lattice: &IntMatrix) -> bool {
    let n = t.len();
    assert_eq!(a.rows(), n, "subspace generators must live in the ambient space");
    assert_eq!(lattice.cols(), n, "lattice generators must live in the ambient space");
    if t.is_zero() {
        return true;
    }
    let k = left_kernel(a);
    if k.rows() == 0 {
        return true;
    }
    let image_t = k.mul_vec(t.numerators());
    let den = t.denominator();
    let image_rows: Vec<Vec<BigInt>> =
        (0..lattice.rows()).map(|i| k.mul_vec(lattice.row(i)).into_iter().map(|x| x * den).collect()).collect();
    let image = IntMatrix::from_big_rows(image_rows, k.rows());
    Lattice::from_generators(&image).contains(&image_t)
}

/// Solves `c · B = v` over the integers; `None` when no integral solution exists.
/// With linearly independent rows the solution is unique.
pub fn coordinates(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(basis.cols(), v.len());
    let snf = smith_normal_form(basis);
    let diag = snf.diagonal();
    let w = snf.v.vec_mul(v);
    let mut y = vec![BigInt::zero(); basis.rows()];
    for (i, wi) in w.iter().enumerate() {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_zero() {
            if !wi.is_zero() {
                return None;
            }
        } else {
            let (q, r) = wi.div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.u.vec_mul(&y))
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = val;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Independent oracle: invariant factors from determinantal divisors
    /// (gcd of all k×k minors), only for tiny matrices.
    fn determinantal_invariants(a: &IntMatrix) -> Vec<BigInt> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let mut divisors = vec![BigInt::one()];
        for k in 1..=a.rows().min(a.cols()) {
            let mut g = BigInt::zero();
            for rs in subsets(a.rows(), k) {
                for cs in subsets(a.cols(), k) {
                    let minor: Vec<Vec<BigInt>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| a[(i, j)].clone()).collect()).collect();
                    g = g.gcd(&determinant(&IntMatrix::from_big_rows(minor, k)));
                }
            }
            if g.is_zero() {
                break;
            }
            divisors.push(g);
        }
        divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
    }

    #[test]
    fn snf_of_sum_difference_matrix() {
        let a = IntMatrix::from_rows(&[[1, 1], [1, -1]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), big(&[1, 2]));
        assert_eq!(determinantal_invariants(&a), big(&[1, 2]));
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_fixed_points() {
        let a = IntMatrix::from_rows(&[[2, 0], [0, 2]]);
        assert_eq!(smith_normal_form(&a).d, a);
        let b = IntMatrix::from_rows(&[[3]]);
        assert_eq!(smith_normal_form(&b).d, b);
    }

    #[test]
    fn snf_matches_determinantal_divisors() {
        let cases = [
            IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]),
            IntMatrix::from_rows(&[[0, 6], [4, 0], [0, 0]]),
            IntMatrix::from_rows(&[[6, 10, 15]]),
        ];
        for a in cases {
            let snf = smith_normal_form(&a);
            let diag: Vec<BigInt> = snf.diagonal().into_iter().filter(|d| !d.is_zero()).collect();
            assert_eq!(diag, determinantal_invariants(&a), "{a}");
        }
    }

    #[test]
    fn cokernel_examples() {
        let z = IntMatrix::zeros(0, 4);
        assert_eq!(cokernel_invariants(&z, 4), AbelianInvariants { free_rank: 4, torsion: vec![] });
        let a = IntMatrix::from_rows(&[[2, 0], [0, 3]]);
        assert_eq!(cokernel_invariants(&a, 2), AbelianInvariants::cyclic(6));
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(saturation(&IntMatrix::from_rows(&[[2, 0], [0, 2]])), IntMatrix::identity(2));
        assert_eq!(saturation(&IntMatrix::from_rows(&[[1, 1]])), IntMatrix::from_rows(&[[1, 1]]));
        let s = saturation(&IntMatrix::from_rows(&[[2, 4]]));
        assert_eq!(s, IntMatrix::from_rows(&[[1, 2]]));
        // (1,2) is in the rational span of (2,4) and the original lattice has index 2 in it
        assert!(membership(&RatVector::from_i64(&[1, 2], 1), &IntMatrix::zeros(2, 0), &s));
        assert!(!Lattice::from_generators(&IntMatrix::from_rows(&[[2, 4]])).contains(&big(&[1, 2])));
    }

    #[test]
    fn membership_examples() {
        let id = IntMatrix::identity(2);
        let none = IntMatrix::zeros(2, 1);
        assert!(!membership(&RatVector::from_i64(&[0, 1], 2), &none, &id));
        assert!(membership(&RatVector::from_i64(&[1, 0], 1), &none, &id));
        assert!(membership(&RatVector::zero(2), &IntMatrix::from_rows(&[[3], [5]]), &IntMatrix::zeros(0, 2)));
        // a half point on the line spanned by (1,1) is reachable
        assert!(membership(&RatVector::from_i64(&[1, 1], 2), &IntMatrix::from_rows(&[[1], [1]]), &id));
        // (1/2, 0) is not: it differs from the line by a non-lattice vector
        assert!(!membership(&RatVector::from_i64(&[1, 0], 2), &IntMatrix::from_rows(&[[1], [1]]), &id));
    }

    #[test]
    fn coordinates_solve_exactly() {
        let b = IntMatrix::from_rows(&[[2, 0, 0], [1, 1, 0]]);
        assert_eq!(coordinates(&b, &big(&[5, 1, 0])), Some(big(&[2, 1])));
        assert_eq!(coordinates(&b, &big(&[1, 0, 0])), None);
        assert_eq!(coordinates(&b, &big(&[0, 0, 1])), None);
    }

    #[test]
    fn hnf_and_lattice_reduction() {
        let l = Lattice::from_generators(&IntMatrix::from_rows(&[[4, 2], [2, 4]]));
        assert_eq!(l.index(), Some(BigInt::from(12)));
        assert!(l.contains(&big(&[6, 6])));
        assert!(!l.contains(&big(&[1, 0])));
        let r = l.reduce(&big(&[7, -3]));
        assert_eq!(l.reduce(&r), r);
    }

    #[test]
    fn bareiss_determinant() {
        let a = IntMatrix::from_rows(&[[0, 2, 1], [3, 1, 0], [1, 1, 1]]);
        assert_eq!(determinant(&a), BigInt::from(-4));
        assert_eq!(determinant(&IntMatrix::from_rows(&[[1, 2], [2, 4]])), BigInt::zero());
    }

    #[test]
    fn kronecker_matches_block_layout() {
        let k = IntMatrix::from_rows(&[[1, -1], [1, 1]]).kron(&IntMatrix::identity(2));
        assert_eq!(k, IntMatrix::from_rows(&[[1, 0, -1, 0], [0, 1, 0, -1], [1, 0, 1, 0], [0, 1, 0, 1]]));
    }
}
