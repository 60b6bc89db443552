//! Finitely presented groups: words over indexed generators, presentations,
//! homomorphisms, quotients, amalgamated products and order computation.
//!
//! Generator names are carried for display only. Every algorithm works on
//! generator indices.

mod tietze;
mod todd_coxeter;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::intlin::{cokernel_invariants, IntMatrix};

pub use crate::intlin::AbelianInvariants;
pub use tietze::tietze_simplify;
pub use todd_coxeter::{coset_table, todd_coxeter_order, CosetTable};

/// Default live-coset limit for coset enumeration.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("coset enumeration did not close within {limit} live cosets")]
    CosetLimitExceeded { limit: usize },
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("homomorphism needs {expected} images, got {found}")]
    ImageCountMismatch { expected: usize, found: usize },
    #[error("homomorphism {what} has {found} generators, expected {expected}")]
    PresentationMismatch { what: &'static str, expected: usize, found: usize },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("malformed word token {0:?}")]
    BadToken(String),
}

/// One generator or its inverse, stored as `±(index + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        let v = i32::try_from(generator + 1).expect("generator index fits in i32");
        Letter(if inverse { -v } else { v })
    }

    pub fn gen(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn inv(generator: usize) -> Self {
        Self::new(generator, true)
    }

    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

/// A word in the free group, read left to right.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from signed one-based integers, `-2` meaning the inverse of generator 1.
    pub fn from_signed(v: &[i32]) -> Self {
        Word(
            v.iter()
                .map(|&x| {
                    assert_ne!(x, 0, "zero is not a letter");
                    Letter(x)
                })
                .collect(),
        )
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::gen(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Freely reduced form.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Freely and cyclically reduced form.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.reduce().0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == w[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word(w[lo..hi].to_vec())
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut v = vec![0; generators];
        for l in &self.0 {
            v[l.generator()] += l.sign();
        }
        v
    }

    /// Replaces every occurrence of each generator by its image word.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let img = &images[l.generator()];
            if l.is_inverse() {
                out.extend(img.inverse().0);
            } else {
                out.extend_from_slice(&img.0);
            }
        }
        Word(out).reduce()
    }

    /// Renders the word with the given generator names, grouping runs as powers.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let g = letters[i].generator();
            let name = self.names.get(g).cloned().unwrap_or_else(|| format!("x{g}"));
            let exp = (j - i) as i64 * letters[i].sign();
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Reduces a word freely. Idempotent.
pub fn reduce_word(w: &Word) -> Word {
    w.reduce()
}

/// Parses a whitespace-separated word such as `B^-1 A G^2`. The identity may be
/// written as `1` or as an empty string.
pub fn parse_word(s: &str, names: &[String]) -> Result<Word, FpError> {
    let mut letters = Vec::new();
    for tok in s.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.rsplit_once('^') {
            Some((n, e)) => (n, e.parse::<i64>().map_err(|_| FpError::BadToken(tok.to_string()))?),
            None => (tok, 1),
        };
        if name.is_empty() {
            return Err(FpError::BadToken(tok.to_string()));
        }
        let g = names.iter().position(|n| n == name).ok_or_else(|| FpError::UnknownGenerator(name.to_string()))?;
        let l = Letter::new(g, exp < 0);
        letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
    }
    Ok(Word(letters))
}

/// A group presentation. Relators are stored freely and cyclically reduced,
/// with trivial relators dropped.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, FpError> {
        let count = names.len();
        let mut kept = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(index) = r.max_generator().filter(|&i| i >= count) {
                return Err(FpError::GeneratorOutOfRange { index, count });
            }
            let r = r.cyclic_reduce();
            if !r.is_empty() {
                kept.push(r);
            }
        }
        Ok(Presentation { names, relators: kept })
    }

    /// Presentation with generators named `x0, x1, …`.
    pub fn with_generator_count(count: usize, relators: Vec<Word>) -> Result<Self, FpError> {
        Self::new((0..count).map(|i| format!("x{i}")).collect(), relators)
    }

    /// Parses relators written over the given generator names.
    pub fn parse(names: &[&str], relators: &[&str]) -> Result<Self, FpError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let words = relators.iter().map(|r| parse_word(r, &names)).collect::<Result<Vec<_>, _>>()?;
        Self::new(names, words)
    }

    pub fn trivial() -> Self {
        Presentation { names: Vec::new(), relators: Vec::new() }
    }

    pub fn free(count: usize) -> Self {
        Self::with_generator_count(count, Vec::new()).expect("no relators to validate")
    }

    /// `ℤ^n` as the free group modulo all commutators.
    pub fn free_abelian(names: &[&str]) -> Self {
        let n = names.len();
        let mut rels = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                rels.push(Word::commutator(&Word::generator(i), &Word::generator(j)));
            }
        }
        Self::new(names.iter().map(|s| s.to_string()).collect(), rels).expect("indices in range")
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        let rows: Vec<Vec<BigInt>> =
            self.relators.iter().map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect()).collect();
        IntMatrix::from_big_rows(rows, n)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), FpError> {
        match w.max_generator() {
            Some(index) if index >= self.generator_count() => {
                Err(FpError::GeneratorOutOfRange { index, count: self.generator_count() })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| r.display(&self.names).to_string()).collect();
        write!(f, "< {} | {} >", self.names.join(", "), rels.join(", "))
    }
}

/// A homomorphism given by the image of each source generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    source: Presentation,
    target: Presentation,
    images: Vec<Word>,
}

impl GroupHom {
    pub fn new(source: Presentation, target: Presentation, images: Vec<Word>) -> Result<Self, FpError> {
        if images.len() != source.generator_count() {
            return Err(FpError::ImageCountMismatch { expected: source.generator_count(), found: images.len() });
        }
        for w in &images {
            target.check_word(w)?;
        }
        let images = images.into_iter().map(|w| w.reduce()).collect();
        Ok(GroupHom { source, target, images })
    }

    pub fn identity(p: &Presentation) -> Self {
        let images = (0..p.generator_count()).map(Word::generator).collect();
        GroupHom { source: p.clone(), target: p.clone(), images }
    }

    /// The homomorphism sending every generator to the identity.
    pub fn trivial(source: Presentation, target: Presentation) -> Self {
        let images = vec![Word::identity(); source.generator_count()];
        GroupHom { source, target, images }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// Necessary condition for well-definedness: relator images vanish in the
    /// target abelianization.
    pub fn relators_vanish_in_abelianization(&self) -> bool {
        let n = self.target.generator_count();
        let rel = self.target.relation_matrix();
        self.source.relators.iter().all(|r| {
            let sums: Vec<BigInt> = self.apply(r).exponent_sums(n).into_iter().map(BigInt::from).collect();
            let row = IntMatrix::from_big_rows(vec![sums], n);
            cokernel_invariants(&rel.vstack(&row), n) == cokernel_invariants(&rel, n)
        })
    }

    /// Decides well-definedness exactly for a finite target by tracing every
    /// relator image through the regular coset table.
    pub fn relators_vanish(&self, max_cosets: usize) -> Result<bool, FpError> {
        let table = coset_table(&self.target, max_cosets)?;
        Ok(self.source.relators.iter().all(|r| table.is_identity(&self.apply(r))))
    }
}

/// Exponent-sum matrix, then Smith normal form.
pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    cokernel_invariants(&p.relation_matrix(), p.generator_count())
}

/// `p / ⟨⟨ws⟩⟩`, by appending relators.
pub fn quotient_by_normal_closure(p: &Presentation, ws: &[Word]) -> Result<Presentation, FpError> {
    for w in ws {
        p.check_word(w)?;
    }
    let mut relators = p.relators.clone();
    relators.extend(ws.iter().cloned());
    Presentation::new(p.names.clone(), relators)
}

/// `A ∗_C B` presented on the disjoint union of generators, with one extra
/// relator `f(c)·g(c)⁻¹` per generator `c` of `C`.
pub fn amalgamated_product(
    pa: &Presentation,
    pb: &Presentation,
    pc: &Presentation,
    f: &GroupHom,
    g: &GroupHom,
) -> Result<Presentation, FpError> {
    let check = |what, expected: usize, found: usize| {
        if expected == found {
            Ok(())
        } else {
            Err(FpError::PresentationMismatch { what, expected, found })
        }
    };
    check("f source", pc.generator_count(), f.source.generator_count())?;
    check("g source", pc.generator_count(), g.source.generator_count())?;
    check("f target", pa.generator_count(), f.target.generator_count())?;
    check("g target", pb.generator_count(), g.target.generator_count())?;

    let shift = pa.generator_count();
    let lift = |w: &Word| Word(w.0.iter().map(|l| Letter::new(l.generator() + shift, l.is_inverse())).collect());

    let mut names = pa.names.clone();
    for n in &pb.names {
        let mut name = n.clone();
        while names.contains(&name) {
            name.push('\'');
        }
        names.push(name);
    }
    let mut relators = pa.relators.clone();
    relators.extend(pb.relators.iter().map(lift));
    for c in 0..pc.generator_count() {
        relators.push(f.images[c].concat(&lift(&g.images[c]).inverse()));
    }
    Presentation::new(names, relators)
}

/// True iff the group has order `n` and abelianization `ℤ/n`. A group of
/// order `n` surjecting onto `ℤ/n` is that cyclic group.
pub fn is_cyclic_of_order(p: &Presentation, n: u64, max_cosets: usize) -> Result<bool, FpError> {
    let order = todd_coxeter_order(p, max_cosets)?;
    Ok(order == n && abelianization(p) == AbelianInvariants::cyclic(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(names: &[&str], rels: &[&str]) -> Presentation {
        Presentation::parse(names, rels).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let w = parse_word("a a^-1 b", &names).unwrap();
        assert_eq!(reduce_word(&w), parse_word("b", &names).unwrap());
        let w = parse_word("b a a^-1", &names).unwrap();
        assert_eq!(reduce_word(&w), parse_word("b", &names).unwrap());
        let names: Vec<String> = ["g2", "g1", "b2", "b1"].iter().map(|s| s.to_string()).collect();
        let w = parse_word("g2 g1 b2 b1", &names).unwrap();
        assert_eq!(reduce_word(&w), w);
    }

    #[test]
    fn relators_are_cyclically_reduced() {
        let q = p(&["A", "G"], &["A G^-1 A^-1", "A A^-1"]);
        assert_eq!(q.relators().len(), 1);
        assert_eq!(q.relators()[0], Word::from_signed(&[-2]));
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(abelianization(&p(&["A", "B", "G"], &["B^-1 A", "G A^-1", "G^2 B^2"])), AbelianInvariants::cyclic(4));
        assert_eq!(abelianization(&p(&["A", "F", "G"], &["A F G", "F A^-1", "A G^-1"])), AbelianInvariants::cyclic(3));
        assert_eq!(abelianization(&Presentation::free(2)), AbelianInvariants { free_rank: 2, torsion: vec![] });
    }

    #[test]
    fn quotient_examples() {
        let d = p(&["A", "B", "F", "G"], &["G F B A"]);
        let names = d.names().to_vec();
        let ws: Vec<Word> =
            ["B^-1 A", "G A^-1", "G^2 B^2"].iter().map(|s| parse_word(s, &names).unwrap()).collect();
        let q = quotient_by_normal_closure(&d, &ws).unwrap();
        assert_eq!(abelianization(&q), AbelianInvariants::cyclic(4));
        assert!(is_cyclic_of_order(&q, 4, DEFAULT_MAX_COSETS).unwrap());
        assert_eq!(quotient_by_normal_closure(&d, &[]).unwrap(), d);
        let x = Presentation::free(1);
        let q = quotient_by_normal_closure(&x, &[Word::generator(0).pow(5)]).unwrap();
        assert_eq!(abelianization(&q), AbelianInvariants::cyclic(5));
    }

    #[test]
    fn free_product_of_cyclic_groups() {
        let a = p(&["x"], &["x^2"]);
        let b = p(&["y"], &["y^3"]);
        let c = Presentation::trivial();
        let f = GroupHom::trivial(c.clone(), a.clone());
        let g = GroupHom::trivial(c.clone(), b.clone());
        let ab = amalgamated_product(&a, &b, &c, &f, &g).unwrap();
        assert_eq!(ab.generator_count(), 2);
        assert_eq!(abelianization(&ab), AbelianInvariants::cyclic(6));
    }

    #[test]
    fn amalgamation_with_trivial_side_is_a_quotient() {
        let d = p(&["A", "B", "F", "G"], &["G F B A"]);
        let dbar = Presentation::free(3);
        let names = d.names().to_vec();
        let imgs: Vec<Word> =
            ["B^-1 A", "G A^-1", "G^2 B^2"].iter().map(|s| parse_word(s, &names).unwrap()).collect();
        let g = GroupHom::new(dbar.clone(), d.clone(), imgs.clone()).unwrap();
        let f = GroupHom::trivial(dbar.clone(), Presentation::trivial());
        let glued = amalgamated_product(&Presentation::trivial(), &d, &dbar, &f, &g).unwrap();
        let quotient = quotient_by_normal_closure(&d, &imgs).unwrap();
        assert_eq!(abelianization(&glued), abelianization(&quotient));
        assert_eq!(
            todd_coxeter_order(&glued, DEFAULT_MAX_COSETS).unwrap(),
            todd_coxeter_order(&quotient, DEFAULT_MAX_COSETS).unwrap()
        );
    }

    #[test]
    fn cyclicity_examples() {
        let klein = p(&["x", "y"], &["x^2", "y^2", "x y x^-1 y^-1"]);
        assert!(!is_cyclic_of_order(&klein, 4, DEFAULT_MAX_COSETS).unwrap());
        assert!(is_cyclic_of_order(&p(&["x"], &["x"]), 1, 10).unwrap());
    }

    #[test]
    fn hom_well_definedness() {
        let z4 = p(&["x"], &["x^4"]);
        let z2 = p(&["y"], &["y^2"]);
        let good = GroupHom::new(z4.clone(), z2.clone(), vec![Word::generator(0)]).unwrap();
        assert!(good.relators_vanish(100).unwrap());
        assert!(good.relators_vanish_in_abelianization());
        let bad = GroupHom::new(z2, z4, vec![Word::generator(0)]).unwrap();
        assert!(!bad.relators_vanish(100).unwrap());
        assert!(!bad.relators_vanish_in_abelianization());
    }

    #[test]
    fn parse_errors() {
        let names = vec!["a".to_string()];
        assert_eq!(parse_word("b", &names), Err(FpError::UnknownGenerator("b".into())));
        assert!(matches!(parse_word("a^x", &names), Err(FpError::BadToken(_))));
        assert!(matches!(
            Presentation::with_generator_count(1, vec![Word::generator(3)]),
            Err(FpError::GeneratorOutOfRange { index: 3, count: 1 })
        ));
    }

    #[test]
    fn display_groups_powers() {
        let q = p(&["G", "B"], &["G^2 B^2"]);
        assert_eq!(q.to_string(), "< G, B | G^2 B^2 >");
    }
}
