//! Complex tori through their homology lattices.
//!
//! A torus `ℝ^{2g}/Λ` is stored by the ℤ-linear shadow of its structure: an
//! ordered basis of labels, a scaling denominator `N`, and the lattice `N·Λ`
//! in scaled coordinates. Torsion points of order dividing `N` then have
//! integral scaled coordinates. Maps are affine `x ↦ Mx + t` with `M` integral
//! in the label basis and `t` rational.

pub mod bitri;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::intlin::{
    cokernel_invariants, coordinates, determinant, hermite_normal_form, left_kernel, membership, right_kernel,
    smith_normal_form, AbelianInvariants, IntMatrix, Lattice, RatVector,
};
use crate::parallel;

/// Default cap on the size of finite groups generated by torus maps.
pub const DEFAULT_GROUP_CAP: usize = 512;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("order exceeds the cap of {cap}")]
    OrderExceedsCap { cap: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid torus: {0}")]
    InvalidTorus(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear part does not preserve the lattice")]
    NotAnEndomorphism,
    #[error("translation {0} is not a torsion point of the scaled lattice")]
    TranslationNotScaled(String),
    #[error("{value} is not divisible by the cover degree {degree}")]
    NotDivisible { value: BigInt, degree: BigInt },
}

/// A complex torus of complex dimension `rank / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusLattice {
    labels: Vec<String>,
    denominator: BigInt,
    lattice: Lattice,
}

/// An affine map `x ↦ linear·x + translation` in the label basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineTorusMap {
    pub linear: IntMatrix,
    pub translation: RatVector,
}

impl AffineTorusMap {
    pub fn new(linear: IntMatrix, translation: RatVector) -> Self {
        assert!(linear.is_square() && linear.rows() == translation.len(), "affine map dimensions disagree");
        AffineTorusMap { linear, translation }
    }

    pub fn linear(m: IntMatrix) -> Self {
        let n = m.rows();
        Self::new(m, RatVector::zero(n))
    }

    pub fn translation(t: RatVector) -> Self {
        Self::new(IntMatrix::identity(t.len()), t)
    }

    pub fn rank(&self) -> usize {
        self.linear.rows()
    }
}

/// A one-dimensional complex subtorus direction, stored as a basis of
/// `Λ ∩ span` in scaled coordinates together with its lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubtorusClass {
    rows: IntMatrix,
    coords: IntMatrix,
}

impl SubtorusClass {
    /// Basis rows in scaled ambient coordinates.
    pub fn lattice_rows(&self) -> &IntMatrix {
        &self.rows
    }

    /// Basis rows in coordinates of the ambient lattice basis.
    pub fn lattice_coords(&self) -> &IntMatrix {
        &self.coords
    }
}

/// A translate `offset + S` of a subtorus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubtorus {
    pub class: SubtorusClass,
    pub offset: RatVector,
}

/// A nonnegative formal combination of subtorus classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveClass {
    terms: Vec<(BigInt, SubtorusClass)>,
}

impl CurveClass {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(c: &SubtorusClass) -> Self {
        Self::new().plus(1, c)
    }

    pub fn plus(mut self, coefficient: i64, c: &SubtorusClass) -> Self {
        self.terms.push((BigInt::from(coefficient), c.clone()));
        self
    }

    pub fn times(mut self, k: i64) -> Self {
        for (c, _) in &mut self.terms {
            *c *= k;
        }
        self
    }

    pub fn terms(&self) -> &[(BigInt, SubtorusClass)] {
        &self.terms
    }
}

impl TorusLattice {
    /// `rows` generate the scaled lattice `N·Λ`; they must have full rank.
    pub fn new(labels: Vec<String>, denominator: BigInt, rows: &IntMatrix) -> Result<Self, TorusError> {
        let rank = labels.len();
        if rank < 2 || rank % 2 != 0 {
            return Err(TorusError::InvalidTorus(format!("rank {rank} is not even and at least 2")));
        }
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != rank {
            return Err(TorusError::InvalidTorus("basis labels repeat".into()));
        }
        if !denominator.is_positive() {
            return Err(TorusError::InvalidTorus("denominator must be positive".into()));
        }
        if rows.cols() != rank {
            return Err(TorusError::DimensionMismatch { expected: rank, found: rows.cols() });
        }
        let lattice = Lattice::from_generators(rows);
        if lattice.rank() != rank {
            return Err(TorusError::InvalidTorus("lattice generators do not have full rank".into()));
        }
        Ok(TorusLattice { labels, denominator, lattice })
    }

    /// The torus whose unscaled lattice is spanned by the label basis.
    pub fn standard(labels: &[&str], denominator: i64) -> Result<Self, TorusError> {
        let n = labels.len();
        let den = BigInt::from(denominator);
        Self::new(labels.iter().map(|s| s.to_string()).collect(), den.clone(), &IntMatrix::identity(n).scale(&den))
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Hermite basis of the scaled lattice.
    pub fn lattice_basis(&self) -> &IntMatrix {
        self.lattice.basis()
    }

    fn check_len(&self, n: usize) -> Result<(), TorusError> {
        if n == self.rank() {
            Ok(())
        } else {
            Err(TorusError::DimensionMismatch { expected: self.rank(), found: n })
        }
    }

    /// Scaled integral coordinates of a point.
    pub fn scale(&self, t: &RatVector) -> Result<Vec<BigInt>, TorusError> {
        self.check_len(t.len())?;
        t.numerators_over(&self.denominator).ok_or_else(|| TorusError::TranslationNotScaled(t.to_string()))
    }

    fn unscale(&self, v: Vec<BigInt>) -> RatVector {
        RatVector::new(v, self.denominator.clone())
    }

    /// Whether a point is zero on the torus.
    pub fn is_zero_point(&self, t: &RatVector) -> Result<bool, TorusError> {
        Ok(self.lattice.contains(&self.scale(t)?))
    }

    /// Checks dimensions, that the translation is a scaled torsion point and
    /// that the linear part maps the lattice into itself.
    pub fn check_map(&self, f: &AffineTorusMap) -> Result<(), TorusError> {
        self.check_len(f.rank())?;
        self.scale(&f.translation)?;
        let basis = self.lattice.basis();
        for i in 0..basis.rows() {
            if !self.lattice.contains(&f.linear.mul_vec(basis.row(i))) {
                return Err(TorusError::NotAnEndomorphism);
            }
        }
        Ok(())
    }

    pub fn identity_map(&self) -> AffineTorusMap {
        AffineTorusMap::linear(IntMatrix::identity(self.rank()))
    }

    /// Reduces the translation to its canonical representative modulo the lattice.
    pub fn normalize(&self, f: &AffineTorusMap) -> Result<AffineTorusMap, TorusError> {
        let t = self.lattice.reduce(&self.scale(&f.translation)?);
        Ok(AffineTorusMap { linear: f.linear.clone(), translation: self.unscale(t) })
    }

    pub fn is_identity(&self, f: &AffineTorusMap) -> Result<bool, TorusError> {
        Ok(f.linear == IntMatrix::identity(self.rank()) && self.is_zero_point(&f.translation)?)
    }

    /// `f ∘ g`, that is `x ↦ M(M′x + t′) + t`, normalized.
    pub fn compose(&self, f: &AffineTorusMap, g: &AffineTorusMap) -> Result<AffineTorusMap, TorusError> {
        self.check_len(f.rank())?;
        self.check_len(g.rank())?;
        let linear = f.linear.mul(&g.linear);
        let translation = g.translation.apply(&f.linear).add(&f.translation);
        self.normalize(&AffineTorusMap { linear, translation })
    }

    /// Least `n ≤ cap` with `fⁿ` the identity of the torus.
    pub fn map_order(&self, f: &AffineTorusMap, cap: usize) -> Result<u64, TorusError> {
        self.check_map(f)?;
        let mut g = self.normalize(f)?;
        for n in 1..=cap as u64 {
            if self.is_identity(&g)? {
                return Ok(n);
            }
            g = self.compose(f, &g)?;
        }
        Err(TorusError::OrderExceedsCap { cap })
    }

    /// All elements of the group generated by `gens`, identity first, in
    /// breadth-first order.
    pub fn group_closure(&self, gens: &[AffineTorusMap], cap: usize) -> Result<Vec<AffineTorusMap>, TorusError> {
        for g in gens {
            self.check_map(g)?;
        }
        let gens: Vec<AffineTorusMap> = gens.iter().map(|g| self.normalize(g)).collect::<Result<_, _>>()?;
        let id = self.identity_map();
        let mut seen: HashSet<AffineTorusMap> = HashSet::from([id.clone()]);
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            for g in &gens {
                let h = self.compose(g, &elements[i])?;
                if seen.insert(h.clone()) {
                    if elements.len() == cap {
                        return Err(TorusError::OrderExceedsCap { cap });
                    }
                    elements.push(h);
                }
            }
            i += 1;
        }
        Ok(elements)
    }

    /// `x = Mx + t` has a solution iff `-t ∈ (M − I)ℚ^n + Λ`.
    pub fn has_fixed_point(&self, f: &AffineTorusMap) -> Result<bool, TorusError> {
        let t = RatVector::integral(self.scale(&f.translation)?);
        let shift = f.linear.sub(&IntMatrix::identity(self.rank()));
        Ok(membership(&t.neg(), &shift, self.lattice.basis()))
    }

    /// True iff no non-identity element of the generated group has a fixed point.
    pub fn is_free_action(&self, gens: &[AffineTorusMap], cap: usize) -> Result<bool, TorusError> {
        let elements = self.group_closure(gens, cap)?;
        let others = &elements[1..];
        let fixed = parallel::map(others, |e| self.has_fixed_point(e));
        for r in &fixed {
            if *r.as_ref().map_err(Clone::clone)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of a scaled lattice vector in the lattice basis.
    pub fn lattice_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        coordinates(self.lattice.basis(), v)
    }

    /// The subtorus whose real tangent space is spanned by `direction`
    /// (rows in the label basis); its lattice is `Λ ∩ span`.
    pub fn subtorus(&self, direction: &IntMatrix) -> Result<SubtorusClass, TorusError> {
        self.check_len(direction.cols())?;
        let basis = self.lattice.basis();
        let normals = right_kernel(direction);
        let coords = if normals.rows() == 0 {
            IntMatrix::identity(self.rank())
        } else {
            hermite_normal_form(&left_kernel(&basis.mul(&normals.transpose())))
        };
        if coords.rows() != self.rank() / 2 {
            return Err(TorusError::InvalidParams(format!(
                "direction spans real dimension {}, expected {}",
                coords.rows(),
                self.rank() / 2
            )));
        }
        let rows = coords.mul(basis);
        Ok(SubtorusClass { rows, coords })
    }

    /// Image of a subtorus under the linear part of a map.
    pub fn image_class(&self, m: &IntMatrix, c: &SubtorusClass) -> Result<SubtorusClass, TorusError> {
        self.subtorus(&m.mul(&c.rows.transpose()).transpose())
    }

    /// Intersection number of two one-dimensional subtori of a complex
    /// surface: the index of their lattice sum, zero when parallel.
    pub fn intersection_number(&self, c1: &SubtorusClass, c2: &SubtorusClass) -> Result<BigInt, TorusError> {
        if self.rank() != 4 {
            return Err(TorusError::DimensionMismatch { expected: 4, found: self.rank() });
        }
        Ok(determinant(&c1.coords.vstack(&c2.coords)).abs())
    }

    /// Bilinear extension of [`TorusLattice::intersection_number`].
    pub fn intersect(&self, x: &CurveClass, y: &CurveClass) -> Result<BigInt, TorusError> {
        let mut total = BigInt::zero();
        for (a, c1) in &x.terms {
            for (b, c2) in &y.terms {
                total += a * b * self.intersection_number(c1, c2)?;
            }
        }
        Ok(total)
    }

    /// Whether two translates describe the same subset of the torus.
    pub fn same_translate(&self, a: &AffineSubtorus, b: &AffineSubtorus) -> Result<bool, TorusError> {
        if a.class.coords != b.class.coords {
            return Ok(false);
        }
        let diff = RatVector::integral(self.scale(&a.offset.add(&b.offset.neg()))?);
        Ok(membership(&diff, &a.class.rows.transpose(), self.lattice.basis()))
    }

    /// Image of a translate under an affine map.
    pub fn map_subtorus(&self, f: &AffineTorusMap, s: &AffineSubtorus) -> Result<AffineSubtorus, TorusError> {
        let class = self.image_class(&f.linear, &s.class)?;
        let offset = s.offset.apply(&f.linear).add(&f.translation);
        Ok(AffineSubtorus { class, offset })
    }

    /// Distinct translates reached from `s` under the group generated by `gens`.
    pub fn orbit(
        &self,
        s: &AffineSubtorus,
        gens: &[AffineTorusMap],
        cap: usize,
    ) -> Result<Vec<AffineSubtorus>, TorusError> {
        let mut orbit = vec![s.clone()];
        let mut i = 0;
        while i < orbit.len() {
            for g in gens {
                let image = self.map_subtorus(g, &orbit[i])?;
                let mut known = false;
                for o in &orbit {
                    if self.same_translate(o, &image)? {
                        known = true;
                        break;
                    }
                }
                if !known {
                    if orbit.len() == cap {
                        return Err(TorusError::OrderExceedsCap { cap });
                    }
                    orbit.push(image);
                }
            }
            i += 1;
        }
        Ok(orbit)
    }

    /// Invariants of `Λ / (sum of the lattices of the given subtori)`.
    pub fn cokernel_of_classes(&self, classes: &[SubtorusClass]) -> AbelianInvariants {
        let mut rows = IntMatrix::zeros(0, self.rank());
        for c in classes {
            rows = rows.vstack(&c.coords);
        }
        cokernel_invariants(&rows, self.rank())
    }

    /// Invariants of `Λ / ⟨gens⟩` for scaled generator rows that lie in `Λ`.
    pub fn cokernel_of_vectors(&self, gens: &IntMatrix) -> Result<AbelianInvariants, TorusError> {
        let mut rows = Vec::with_capacity(gens.rows());
        for i in 0..gens.rows() {
            let c = self
                .lattice_coordinates(gens.row(i))
                .ok_or_else(|| TorusError::InvalidParams(format!("row {i} is not a lattice vector")))?;
            rows.push(c);
        }
        Ok(cokernel_invariants(&IntMatrix::from_big_rows(rows, self.rank()), self.rank()))
    }
}

/// Number of solutions of `A·x ≡ t` on `ℝ^n/ℤ^n`; it equals `|det A|` for every `t`.
pub fn preimage_count(a: &IntMatrix, t: &RatVector) -> Result<BigInt, TorusError> {
    if !a.is_square() {
        return Err(TorusError::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    if t.len() != a.rows() {
        return Err(TorusError::DimensionMismatch { expected: a.rows(), found: t.len() });
    }
    let det = determinant(a).abs();
    if det.is_zero() {
        return Err(TorusError::SingularMatrix);
    }
    Ok(det)
}

/// Invariants of `ℤ^n / A·ℤ^n`.
pub fn isogeny_cokernel(a: &IntMatrix) -> Result<AbelianInvariants, TorusError> {
    if !a.is_square() {
        return Err(TorusError::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    let snf = smith_normal_form(a);
    if snf.rank() < a.rows() {
        return Err(TorusError::SingularMatrix);
    }
    Ok(AbelianInvariants::from_diagonal(&snf.diagonal(), a.rows()))
}

/// Downstairs intersection number from one computed on a degree-`degree`
/// cover; the division must be exact.
pub fn descend_intersection(upstairs: &BigInt, degree: &BigInt) -> Result<BigInt, TorusError> {
    let (q, r) = upstairs.div_rem(degree);
    if !r.is_zero() || degree.is_zero() {
        return Err(TorusError::NotDivisible { value: upstairs.clone(), degree: degree.clone() });
    }
    Ok(q)
}

/// `[[1,1],[1,-1]] ⊗ I₂`, the isogeny `(x, y) ↦ (x + y, x − y)` of a product of
/// elliptic curves.
pub fn sum_difference_isogeny() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 1], [1, -1]]).kron(&IntMatrix::identity(2))
}
