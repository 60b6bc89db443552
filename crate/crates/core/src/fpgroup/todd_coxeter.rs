//! Coset enumeration over the trivial subgroup (HLT strategy with lookahead).
//!
//! Cosets are numbered in order of definition and processed lowest first, with
//! columns in declared generator order, so the finished table depends only on
//! the presentation. Coincidences are merged through a union-find forest that
//! always keeps the smaller coset number.

use super::{FpError, Letter, Presentation, Word};

const UNDEFINED: usize = usize::MAX;

/// A complete coset table for the trivial subgroup: the regular permutation
/// representation of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generators: usize,
    /// `rows[c][2g]` is `c·g` and `rows[c][2g+1]` is `c·g⁻¹`.
    rows: Vec<Vec<usize>>,
}

impl CosetTable {
    /// Number of cosets, equal to the group order.
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// Image of coset `start` under the word.
    pub fn trace(&self, start: usize, w: &Word) -> usize {
        w.letters().iter().fold(start, |c, &l| self.rows[c][column(l)])
    }

    /// Whether the word represents the identity element.
    pub fn is_identity(&self, w: &Word) -> bool {
        self.trace(0, w) == 0
    }

    /// Permutation of the cosets induced by a generator.
    pub fn permutation(&self, generator: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[2 * generator]).collect()
    }
}

fn column(l: Letter) -> usize {
    2 * l.generator() + usize::from(l.is_inverse())
}

/// Signals that a definition was needed while the live-coset limit was reached.
struct OutOfSpace;

struct Enumerator {
    cols: usize,
    max_cosets: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: usize,
    relators: Vec<Vec<usize>>,
}

impl Enumerator {
    fn new(p: &Presentation, max_cosets: usize) -> Self {
        let cols = 2 * p.generator_count();
        let relators = p.relators().iter().map(|r| r.letters().iter().map(|&l| column(l)).collect()).collect();
        Enumerator { cols, max_cosets, table: vec![vec![UNDEFINED; cols]], parent: vec![0], live: 1, relators }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = c;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), OutOfSpace> {
        if self.live >= self.max_cosets {
            return Err(OutOfSpace);
        }
        let d = self.table.len();
        self.table.push(vec![UNDEFINED; self.cols]);
        self.parent.push(d);
        self.live += 1;
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.parent[drop] = keep;
        self.live -= 1;
        queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.table[e][x];
                if f == UNDEFINED {
                    continue;
                }
                if self.table[f][x ^ 1] == e {
                    self.table[f][x ^ 1] = UNDEFINED;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != UNDEFINED {
                    let t = self.table[e1][x];
                    self.merge(f1, t, &mut queue);
                } else if self.table[f1][x ^ 1] != UNDEFINED {
                    let t = self.table[f1][x ^ 1];
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][x ^ 1] = e1;
                }
            }
        }
    }

    /// Scans relator `r` at coset `c`, defining new cosets when `define` is set.
    fn scan(&mut self, c: usize, r: usize, define: bool) -> Result<(), OutOfSpace> {
        let len = self.relators[r].len();
        if len == 0 {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let mut i = 0usize;
        let mut j = len as isize - 1;
        loop {
            while (i as isize) <= j {
                let next = self.table[f][self.relators[r][i]];
                if next == UNDEFINED {
                    break;
                }
                f = next;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                let next = self.table[b][self.relators[r][j as usize] ^ 1];
                if next == UNDEFINED {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                let x = self.relators[r][i];
                self.table[f][x] = b;
                self.table[b][x ^ 1] = f;
                return Ok(());
            }
            if !define {
                return Ok(());
            }
            self.define(f, self.relators[r][i])?;
        }
    }

    /// Scans every live coset against every relator without defining anything.
    fn lookahead(&mut self) {
        let mut c = 0;
        while c < self.table.len() {
            for r in 0..self.relators.len() {
                if !self.is_live(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
            c += 1;
        }
    }

    /// Renumbers live cosets consecutively, preserving their order. Returns the
    /// new position of old index `c` (or of the next live coset after it).
    fn compact(&mut self, c: usize) -> usize {
        let mut new_index = vec![UNDEFINED; self.table.len()];
        let mut next = 0;
        let mut resume = None;
        for (old, slot) in new_index.iter_mut().enumerate() {
            if old == c {
                resume = Some(next);
            }
            if self.parent[old] == old {
                *slot = next;
                next += 1;
            }
        }
        let resume = resume.unwrap_or(next);
        let canon: Vec<usize> = (0..self.table.len()).map(|i| self.rep(i)).collect();
        let old_table = std::mem::take(&mut self.table);
        self.table = old_table
            .into_iter()
            .enumerate()
            .filter(|(old, _)| self.parent[*old] == *old)
            .map(|(_, row)| row.into_iter().map(|t| if t == UNDEFINED { t } else { new_index[canon[t]] }).collect())
            .collect();
        self.parent = (0..self.table.len()).collect();
        resume
    }

    fn run(mut self) -> Result<CosetTable, FpError> {
        let mut c = 0;
        'cosets: while c < self.table.len() {
            if !self.is_live(c) {
                c += 1;
                continue;
            }
            let mut step = || -> Result<(), OutOfSpace> {
                for r in 0..self.relators.len() {
                    if !self.is_live(c) {
                        return Ok(());
                    }
                    self.scan(c, r, true)?;
                }
                for x in 0..self.cols {
                    if !self.is_live(c) {
                        return Ok(());
                    }
                    if self.table[c][x] == UNDEFINED {
                        self.define(c, x)?;
                    }
                }
                Ok(())
            };
            if step().is_err() {
                self.lookahead();
                c = self.compact(c);
                if self.live >= self.max_cosets {
                    return Err(FpError::CosetLimitExceeded { limit: self.max_cosets });
                }
                continue 'cosets;
            }
            c += 1;
            if self.table.len() > 2 * self.live + 4096 {
                c = self.compact(c);
            }
        }
        self.compact(0);
        Ok(CosetTable { generators: self.cols / 2, rows: self.table })
    }
}

/// Enumerates the cosets of the trivial subgroup, giving the regular
/// representation of the group.
pub fn coset_table(p: &Presentation, max_cosets: usize) -> Result<CosetTable, FpError> {
    assert!(max_cosets >= 1, "max_cosets must be at least 1");
    Enumerator::new(p, max_cosets).run()
}

/// Group order via coset enumeration.
pub fn todd_coxeter_order(p: &Presentation, max_cosets: usize) -> Result<u64, FpError> {
    Ok(coset_table(p, max_cosets)?.order() as u64)
}
