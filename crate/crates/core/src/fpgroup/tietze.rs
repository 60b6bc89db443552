//! Heuristic presentation simplification by Tietze moves.
//!
//! Only short relators are used to eliminate generators: a relator `x^±1`
//! kills `x`, and a relator `x^±1 y^±1` with `x ≠ y` expresses one generator
//! through the other. When several eliminations are available the generator
//! with the highest index goes first. Trivial relators and relators that agree
//! up to rotation and inversion are removed in between.

use std::collections::HashSet;

use super::{Letter, Presentation, Word};

/// Canonical representative of a cyclic word up to rotation and inversion.
fn cyclic_key(w: &Word) -> Vec<Letter> {
    let mut best: Option<Vec<Letter>> = None;
    for cand in [w.clone(), w.inverse()] {
        let l = cand.letters();
        for k in 0..l.len() {
            let rot: Vec<Letter> = l[k..].iter().chain(&l[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

fn dedupe(relators: Vec<Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    relators
        .into_iter()
        .map(|r| r.cyclic_reduce())
        .filter(|r| !r.is_empty() && seen.insert(cyclic_key(r)))
        .collect()
}

/// Finds the elimination with the highest generator index. Returns the
/// generator and the word it equals.
fn pick_elimination(relators: &[Word]) -> Option<(usize, Word)> {
    let mut best: Option<(usize, Word)> = None;
    for r in relators {
        let l = r.letters();
        let cand = match l {
            [x] => Some((x.generator(), Word::identity())),
            [x, y] if x.generator() != y.generator() => {
                let (elim, other) = if x.generator() > y.generator() { (*x, *y) } else { (*y, *x) };
                // x y = 1 and y x = 1 are conjugate, so either way elim = other⁻¹.
                let value = Word::from_letters(vec![other.inverse()]);
                let value = if elim.is_inverse() { value.inverse() } else { value };
                Some((elim.generator(), value))
            }
            _ => None,
        };
        if let Some((g, v)) = cand {
            if best.as_ref().is_none_or(|(bg, _)| g > *bg) {
                best = Some((g, v));
            }
        }
    }
    best
}

/// Renumbers generators above the eliminated index `g`.
fn shift_down(w: &Word, g: usize) -> Word {
    let letters = w
        .letters()
        .iter()
        .map(|l| if l.generator() > g { Letter::new(l.generator() - 1, l.is_inverse()) } else { *l })
        .collect();
    Word::from_letters(letters)
}

/// Simplifies a presentation to one of an isomorphic group with no more
/// generators. Not a canonical form.
pub fn tietze_simplify(p: &Presentation) -> Presentation {
    let mut names = p.names().to_vec();
    let mut relators = dedupe(p.relators().to_vec());
    while let Some((g, value)) = pick_elimination(&relators) {
        let images: Vec<Word> =
            (0..names.len()).map(|i| if i == g { value.clone() } else { Word::generator(i) }).collect();
        relators = dedupe(relators.iter().map(|r| shift_down(&r.substitute(&images), g)).collect());
        names.remove(g);
    }
    Presentation::new(names, relators).expect("eliminations keep indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{abelianization, todd_coxeter_order, DEFAULT_MAX_COSETS};

    fn p(names: &[&str], rels: &[&str]) -> Presentation {
        Presentation::parse(names, rels).unwrap()
    }

    #[test]
    fn collapses_to_trivial() {
        let q = tietze_simplify(&p(&["A", "F", "G"], &["A F G", "F", "A G^-1 A^-1"]));
        assert_eq!(q.generator_count(), 0);
        assert!(q.relators().is_empty());
    }

    #[test]
    fn eliminates_a_generator() {
        let q = tietze_simplify(&p(&["x", "y"], &["y x^-1"]));
        assert_eq!(q, Presentation::parse(&["x"], &[]).unwrap());
    }

    #[test]
    fn minimal_presentations_are_fixed() {
        let q = p(&["x"], &["x^3"]);
        assert_eq!(tietze_simplify(&q), q);
    }

    #[test]
    fn duplicate_relators_collapse() {
        let q = tietze_simplify(&p(&["x", "y"], &["x y x^-1 y^-1", "y x y^-1 x^-1", "x^2", "x^-2"]));
        assert_eq!(q.relators().len(), 2);
    }

    #[test]
    fn invariants_survive_simplification() {
        let q = p(&["A", "B", "G"], &["B^-1 A", "G A^-1", "G^2 B^2"]);
        let s = tietze_simplify(&q);
        assert_eq!(s.generator_count(), 1);
        assert_eq!(abelianization(&s), abelianization(&q));
        assert_eq!(todd_coxeter_order(&s, DEFAULT_MAX_COSETS), todd_coxeter_order(&q, DEFAULT_MAX_COSETS));
    }
}
