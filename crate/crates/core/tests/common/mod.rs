//! Helpers shared by the integration tests: strategies, direct-entry
//! presentations and independent oracles.

#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use stablepi1::fpgroup::{abelianization, todd_coxeter_order, Letter, Presentation, Word, DEFAULT_MAX_COSETS};
use stablepi1::intlin::{AbelianInvariants, IntMatrix};

/// Group order (when finite within the default limit) and abelianization.
pub fn invariants(p: &Presentation) -> (Option<u64>, AbelianInvariants) {
    (todd_coxeter_order(p, DEFAULT_MAX_COSETS).ok(), abelianization(p))
}

/// Hand-written presentations of the P-family groups, entered directly.
pub const DIRECT_ENTRY: [(&str, &[&str], &[&str]); 8] = [
    ("P1", &["A", "B", "G"], &["B^-1 A", "G A^-1", "G^2 B^2"]),
    ("P2", &["A", "B", "F", "G"], &["B A", "A F G", "F A B", "A G^-1 B"]),
    ("P3", &["A", "B", "F", "G"], &["B A", "A F G", "F B", "A G^-1 A B"]),
    ("X1.1", &["B", "F", "G"], &["F", "B^-1 G^2", "G^-1 F B"]),
    ("X1.2", &["B", "F", "G"], &["F", "B^-1 F^-1 G", "G^-2 B"]),
    ("X1.3", &["B", "F", "G"], &["B G G", "G^-1 F B F^-1", "B F^-1"]),
    ("X1.4", &["x", "y", "G"], &["G^-1 y", "y x^-1 G^2", "y x"]),
    ("X1.5", &["x", "y", "z"], &["x z y^-1 x", "x^-1 y z", "x y"]),
];

pub fn direct_entry(id: &str) -> Presentation {
    let (_, names, relators) = DIRECT_ENTRY.iter().find(|(i, _, _)| *i == id).expect("known P-case");
    Presentation::parse(names, relators).expect("well-formed")
}

/// Free reduction with an explicit stack, independent of the library.
pub fn stack_reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn signed(w: &Word) -> Vec<i32> {
    w.letters().iter().map(|l| if l.is_inverse() { -(l.generator() as i32 + 1) } else { l.generator() as i32 + 1 }).collect()
}

pub fn letter_of(s: i32) -> Letter {
    Letter::new(s.unsigned_abs() as usize - 1, s < 0)
}

/// Words over `generators` letters, as one-based signed indices.
pub fn word_strategy(generators: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=generators, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }), 0..=max_len)
}

/// Integer matrices up to 6×6 with entries in [−9, 9].
pub fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

/// Square matrices of size `1..=max` with entries in `[−k, k]`.
pub fn square_matrix(max: usize, k: i64) -> impl Strategy<Value = IntMatrix> {
    (1usize..=max).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(-k..=k, n), n).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

/// Elementary row operations `row_i += k·row_j` (i ≠ j), sign flips and swaps,
/// encoded as tuples and applied to the identity to give a unimodular matrix.
pub fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, 0u8..3), 0..12).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, k, kind) in ops {
            match kind {
                0 if i != j => u.add_row_multiple(i, j, &BigInt::from(k)),
                1 => u.negate_row(i),
                _ => u.swap_rows(i, j),
            }
        }
        u
    })
}

/// `⟨x₁..x_k | rows of A as exponent words, all commutators⟩`, a presentation
/// of `ℤ^k / rowspan(A)`.
pub fn abelian_presentation(a: &IntMatrix) -> Presentation {
    let k = a.cols();
    let mut relators = Vec::new();
    for i in 0..a.rows() {
        let mut w = Word::identity();
        for j in 0..k {
            let e: i64 = (&a[(i, j)]).try_into().expect("small entry");
            w = w.concat(&Word::generator(j).pow(e));
        }
        relators.push(w);
    }
    for i in 0..k {
        for j in i + 1..k {
            relators.push(Word::commutator(&Word::generator(i), &Word::generator(j)));
        }
    }
    Presentation::with_generator_count(k, relators).expect("indices in range")
}

/// Exact determinant by cofactor expansion, for small matrices.
pub fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

pub fn to_i64_rows(a: &IntMatrix) -> Vec<Vec<i64>> {
    a.row_vecs().iter().map(|r| r.iter().map(|x| x.try_into().expect("small entry")).collect()).collect()
}
