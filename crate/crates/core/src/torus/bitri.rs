//! Arithmetic of bi-tri-elliptic configurations built from an elliptic curve
//! `F` embedded in a product `D × D′` through isogenies of degrees `d`, `d′`.
//!
//! Coordinates are taken in the basis `(e₁, e₂, e₃, e₄)` of `H₁(D × D′)`, so
//! that `H₁(D × D′) = ℤ⁴` and the 2-torsion `D[2] × D′[2]` is `(½ℤ/ℤ)⁴`.
//! With a fixed non-real `τ` the basis vectors are
//!
//! * odd case (`d + d′ = 6`): `(2,0), (2d′τ,0), (0,2d), (0,2τ)`;
//! * even case (`d + d′ = 3`): `(2d′,0), (2τ,0), (0,2d), (0,2τ)`.
//!
//! In both cases `D/D[2]` has homology `½⟨e₁, e₂⟩`, so the generators `a`, `b`
//! of its fundamental group are `e₁/2` and `e₂/2`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{descend_intersection, CurveClass, TorusError, TorusLattice};
use crate::fpgroup::{Presentation, Word};
use crate::intlin::{coordinates, hermite_normal_form, right_kernel, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// Degrees of `φ: F → D` and `φ′: F → D′`, the parity case, and which
/// normalized glue subgroup to use in the even case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BiTriEllipticParams {
    pub d: u32,
    pub d_prime: u32,
    pub parity: Parity,
    pub g_choice: usize,
}

impl BiTriEllipticParams {
    pub fn new(d: u32, d_prime: u32, parity: Parity, g_choice: usize) -> Result<Self, TorusError> {
        let p = BiTriEllipticParams { d, d_prime, parity, g_choice };
        p.validate()?;
        Ok(p)
    }

    /// Odd case with `deg φ = d`.
    pub fn odd(d: u32) -> Result<Self, TorusError> {
        Self::new(d, 6u32.saturating_sub(d), Parity::Odd, 0)
    }

    /// Even case with `deg φ′ = d_prime` and the given normalized subgroup.
    pub fn even(d_prime: u32, g_choice: usize) -> Result<Self, TorusError> {
        Self::new(3u32.saturating_sub(d_prime), d_prime, Parity::Even, g_choice)
    }

    pub fn validate(&self) -> Result<(), TorusError> {
        let bad = |msg: String| Err(TorusError::InvalidParams(msg));
        if self.d == 0 || self.d_prime == 0 {
            return bad("isogeny degrees must be positive".into());
        }
        match self.parity {
            Parity::Odd => {
                if self.d + self.d_prime != 6 || self.d % 2 == 0 {
                    return bad(format!("odd case needs d + d' = 6 with d odd, got d={} d'={}", self.d, self.d_prime));
                }
                if self.g_choice != 0 {
                    return bad("odd case has a single glue subgroup".into());
                }
            }
            Parity::Even => {
                if self.d + self.d_prime != 3 {
                    return bad(format!("even case needs d + d' = 3, got d={} d'={}", self.d, self.d_prime));
                }
                if self.g_choice >= 2 {
                    return bad(format!("glue subgroup choice {} out of range", self.g_choice));
                }
            }
        }
        Ok(())
    }
}

/// An element of `(ℤ/2)⁴`, the class of `½·bits` in `D[2] × D′[2]`.
pub type Half = [u8; 4];

/// A subgroup of `D[2] × D′[2]`, listed by its sorted elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlueSubgroup {
    elements: Vec<Half>,
}

impl GlueSubgroup {
    /// Subgroup generated by the given elements.
    pub fn generated_by(gens: &[Half]) -> Self {
        let mut elements = vec![[0u8; 4]];
        for g in gens {
            if elements.contains(g) {
                continue;
            }
            let shifted: Vec<Half> = elements.iter().map(|e| add(e, g)).collect();
            elements.extend(shifted);
        }
        elements.sort();
        GlueSubgroup { elements }
    }

    pub fn elements(&self) -> &[Half] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, h: &Half) -> bool {
        self.elements.contains(h)
    }

    /// Scaled lifts (numerators over 2) of the nonzero elements.
    pub fn lifts(&self) -> IntMatrix {
        let rows: Vec<[i64; 4]> =
            self.elements.iter().filter(|e| **e != [0; 4]).map(|e| e.map(i64::from)).collect();
        IntMatrix::from_rows_with_cols(&rows, 4)
    }
}

impl fmt::Display for GlueSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.elements.iter().map(|e| e.iter().map(|b| b.to_string()).collect::<String>()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn add(a: &Half, b: &Half) -> Half {
    [a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2], a[3] ^ b[3]]
}

fn reduce_mod_2(v: &[BigInt]) -> Half {
    let mut h = [0u8; 4];
    for (slot, x) in h.iter_mut().zip(v) {
        *slot = u8::from(x.is_odd());
    }
    h
}

/// Lattice `H₁(F)` in the `e`-basis, one row per generator.
pub fn f_lattice(p: &BiTriEllipticParams) -> Result<IntMatrix, TorusError> {
    p.validate()?;
    let (d, dp) = (i64::from(p.d), i64::from(p.d_prime));
    Ok(match p.parity {
        // (2d, 2d) and (2d′τ, 2d′τ)
        Parity::Odd => IntMatrix::from_rows(&[[d, 0, 1, 0], [0, 1, 0, dp]]),
        // (4, 4) and (2τ, 2τ)
        Parity::Even => IntMatrix::from_rows(&[[2 / dp, 0, 2 / d, 0], [0, 1, 0, 1]]),
    })
}

/// The 2-torsion `F[2]` inside `D[2] × D′[2]`.
pub fn f_two_torsion(p: &BiTriEllipticParams) -> Result<GlueSubgroup, TorusError> {
    let f = f_lattice(p)?;
    Ok(GlueSubgroup::generated_by(&[reduce_mod_2(f.row(0)), reduce_mod_2(f.row(1))]))
}

/// The class `ξ` of `τ` in `F[2]`, that is `½(e₂ + e₄)`.
pub const XI: Half = [0, 1, 0, 1];

fn gl2_f2() -> Vec<[[u8; 2]; 2]> {
    let mut out = Vec::new();
    for bits in 0u8..16 {
        let m = [[bits & 1, (bits >> 1) & 1], [(bits >> 2) & 1, (bits >> 3) & 1]];
        if (m[0][0] * m[1][1] + m[0][1] * m[1][0]) % 2 == 1 {
            out.push(m);
        }
    }
    out
}

/// All order-4 subgroups `G ⊂ D[2] × D′[2]` meeting both factors trivially and
/// meeting `F` in a group of order 2, sorted by their element lists.
///
/// A subgroup of order 4 meeting both factors trivially is the graph of an
/// isomorphism `D[2] → D′[2]`, so the candidates are indexed by `GL₂(𝔽₂)`.
pub fn enumerate_glue_subgroups(p: &BiTriEllipticParams) -> Result<Vec<GlueSubgroup>, TorusError> {
    if p.parity != Parity::Even {
        return Err(TorusError::InvalidParams("glue subgroups are enumerated in the even case only".into()));
    }
    let mut out: Vec<GlueSubgroup> = gl2_f2()
        .into_iter()
        .map(|m| {
            let graph = |v: [u8; 2]| -> Half {
                let w0 = (m[0][0] * v[0] + m[0][1] * v[1]) % 2;
                let w1 = (m[1][0] * v[0] + m[1][1] * v[1]) % 2;
                [v[0], v[1], w0, w1]
            };
            GlueSubgroup::generated_by(&[graph([1, 0]), graph([0, 1])])
        })
        .filter(|g| meet_with_f(p, g) == Ok(2))
        .collect();
    out.sort();
    Ok(out)
}

/// The glue subgroups with `G ∩ F = ⟨ξ⟩`. The first is `⟨(τ,τ), (d′,d)⟩` and
/// the second `⟨(τ,τ), (d′+τ,d)⟩`.
pub fn normalized_glue_subgroups(p: &BiTriEllipticParams) -> Result<Vec<GlueSubgroup>, TorusError> {
    Ok(enumerate_glue_subgroups(p)?.into_iter().filter(|g| g.contains(&XI)).collect())
}

/// The subgroup `G` used to form `A = (D × D′)/G`.
pub fn glue_subgroup(p: &BiTriEllipticParams) -> Result<GlueSubgroup, TorusError> {
    match p.parity {
        Parity::Odd => f_two_torsion(p),
        Parity::Even => normalized_glue_subgroups(p)?
            .get(p.g_choice)
            .cloned()
            .ok_or_else(|| TorusError::InvalidParams(format!("no glue subgroup with index {}", p.g_choice))),
    }
}

/// `|G ∩ F|`, counted inside the 2-torsion of `F`.
fn meet_with_f(p: &BiTriEllipticParams, g: &GlueSubgroup) -> Result<usize, TorusError> {
    let f2 = f_two_torsion(p)?;
    Ok(g.elements().iter().filter(|e| f2.contains(e)).count())
}

/// `m = 4·deg φ / |G ∩ F|`.
pub fn twisting_number(p: &BiTriEllipticParams) -> Result<u32, TorusError> {
    let meet = meet_with_f(p, &glue_subgroup(p)?)? as u32;
    let num = 4 * p.d;
    if num % meet != 0 {
        return Err(TorusError::InvalidParams(format!("4·{} is not divisible by |G ∩ F| = {meet}", p.d)));
    }
    Ok(num / meet)
}

/// Scaled generators (numerators over 2) of `H₁(A)`: `2ℤ⁴` plus lifts of `G`.
pub fn h1_a_generators(p: &BiTriEllipticParams) -> Result<IntMatrix, TorusError> {
    let g = glue_subgroup(p)?;
    Ok(IntMatrix::identity(4).scale(&BigInt::from(2)).vstack(&g.lifts()))
}

/// The product torus `D × D′` in the `e`-basis.
pub fn product_torus() -> TorusLattice {
    TorusLattice::standard(&["e1", "e2", "e3", "e4"], 2).expect("standard rank-4 torus")
}

/// `Θ·F̄` on `A`, computed on `D × D′` and descended through the degree-`|G|`
/// quotient. There `Θ` pulls back to `2(D×{0} + {0}×D′)` and `F̄` to
/// `[G : G∩F]` translates of `F`.
pub fn theta_fbar(p: &BiTriEllipticParams) -> Result<BigInt, TorusError> {
    let t = product_torus();
    let horizontal = t.subtorus(&IntMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0]]))?;
    let vertical = t.subtorus(&IntMatrix::from_rows(&[[0, 0, 1, 0], [0, 0, 0, 1]]))?;
    let f = t.subtorus(&f_lattice(p)?)?;
    let g = glue_subgroup(p)?;
    let meet = meet_with_f(p, &g)?;
    let copies = (g.order() / meet) as i64;
    let theta = CurveClass::new().plus(2, &horizontal).plus(2, &vertical);
    let fbar = CurveClass::single(&f).times(copies);
    descend_intersection(&t.intersect(&theta, &fbar)?, &BigInt::from(g.order()))
}

/// `π₁(X) = ⟨a, b, α, β | [a,b], [α,β], π_*γ = q_*γ⟩`, one relation per
/// generator `γ` of `H₁(A)`.
///
/// `π_*` is the projection to `H₁(D/D[2]) = ½⟨e₁, e₂⟩`. `q_*` is the quotient
/// by the saturation of `H₁(F̄)`, realised as the image of `H₁(A)` under an
/// integral basis `K` of the annihilator of `F`; `α`, `β` are the Hermite
/// basis of that image.
pub fn eplus_presentation(p: &BiTriEllipticParams) -> Result<Presentation, TorusError> {
    let h1 = h1_a_generators(p)?;
    let k = right_kernel(&f_lattice(p)?);
    let images = h1.mul(&k.transpose());
    let q_basis = hermite_normal_form(&images);
    if q_basis.rows() != 2 {
        return Err(TorusError::InvalidParams("quotient torus does not have dimension one".into()));
    }
    let small = |x: &BigInt| -> Result<i64, TorusError> {
        x.to_i64().ok_or_else(|| TorusError::InvalidParams("coordinate out of range".into()))
    };
    let (a, b, alpha, beta) = (Word::generator(0), Word::generator(1), Word::generator(2), Word::generator(3));
    let mut relators = vec![Word::commutator(&a, &b), Word::commutator(&alpha, &beta)];
    for i in 0..h1.rows() {
        let pi = [small(&h1[(i, 0)])?, small(&h1[(i, 1)])?];
        let q = coordinates(&q_basis, images.row(i)).expect("image lies in its own span");
        let q = [small(&q[0])?, small(&q[1])?];
        let lhs = a.pow(pi[0]).concat(&b.pow(pi[1]));
        let rhs = alpha.pow(q[0]).concat(&beta.pow(q[1]));
        relators.push(lhs.concat(&rhs.inverse()));
    }
    Presentation::new(["a", "b", "alpha", "beta"].iter().map(|s| s.to_string()).collect(), relators)
        .map_err(|e| TorusError::InvalidParams(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{abelianization, AbelianInvariants};

    #[test]
    fn parameter_validation() {
        assert!(BiTriEllipticParams::odd(2).is_err());
        assert!(BiTriEllipticParams::new(1, 1, Parity::Even, 0).is_err());
        assert!(BiTriEllipticParams::even(1, 2).is_err());
        assert!(BiTriEllipticParams::odd(7).is_err());
    }

    #[test]
    fn twisting_numbers() {
        assert_eq!(twisting_number(&BiTriEllipticParams::odd(5).unwrap()), Ok(5));
        assert_eq!(twisting_number(&BiTriEllipticParams::odd(1).unwrap()), Ok(1));
        // deg φ = 1 in the even case means d′ = 2
        assert_eq!(twisting_number(&BiTriEllipticParams::even(2, 0).unwrap()), Ok(2));
    }

    #[test]
    fn four_choices_two_after_normalization() {
        for dp in [1, 2] {
            let p = BiTriEllipticParams::even(dp, 0).unwrap();
            assert_eq!(enumerate_glue_subgroups(&p).unwrap().len(), 4);
            let norm = normalized_glue_subgroups(&p).unwrap();
            let g1 = GlueSubgroup::generated_by(&[[0, 1, 0, 1], [1, 0, 1, 0]]);
            let g2 = GlueSubgroup::generated_by(&[[0, 1, 0, 1], [1, 1, 1, 0]]);
            assert_eq!(norm, vec![g1, g2]);
        }
        assert!(enumerate_glue_subgroups(&BiTriEllipticParams::odd(1).unwrap()).is_err());
    }

    #[test]
    fn theta_fbar_is_three() {
        for p in [
            BiTriEllipticParams::odd(1).unwrap(),
            BiTriEllipticParams::odd(3).unwrap(),
            BiTriEllipticParams::even(1, 0).unwrap(),
            BiTriEllipticParams::even(2, 1).unwrap(),
        ] {
            assert_eq!(theta_fbar(&p), Ok(BigInt::from(3)), "{p:?}");
        }
    }

    #[test]
    fn eplus_groups() {
        let ab = |p: BiTriEllipticParams| abelianization(&eplus_presentation(&p).unwrap());
        assert!(ab(BiTriEllipticParams::odd(1).unwrap()).is_trivial());
        assert_eq!(ab(BiTriEllipticParams::odd(3).unwrap()), AbelianInvariants::cyclic(3));
        assert_eq!(ab(BiTriEllipticParams::odd(5).unwrap()), AbelianInvariants::cyclic(5));
        assert_eq!(ab(BiTriEllipticParams::even(1, 0).unwrap()), AbelianInvariants::cyclic(4));
        assert_eq!(ab(BiTriEllipticParams::even(1, 1).unwrap()), AbelianInvariants::cyclic(4));
        assert_eq!(ab(BiTriEllipticParams::even(2, 0).unwrap()), AbelianInvariants::cyclic(2));
        assert_eq!(ab(BiTriEllipticParams::even(2, 1).unwrap()), AbelianInvariants::cyclic(2));
    }
}
