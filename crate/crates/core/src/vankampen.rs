//! Fundamental groups of 2-complexes given by a graph with attached 2-cells,
//! maps between them, and Seifert–van Kampen gluing.
//!
//! Edge paths are [`Word`]s whose generators are edge indices. A spanning tree
//! is grown breadth-first from the basepoint, scanning edges in declaration
//! order; the remaining edges generate the free group of the 1-skeleton.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::fpgroup::{amalgamated_product, parse_word, FpError, GroupHom, Letter, Presentation, Word};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VkError {
    #[error("complex {complex}: vertex {vertex} is not reachable from the basepoint")]
    DisconnectedComplex { complex: String, vertex: String },
    #[error("incompatible map: {0}")]
    IncompatibleMap(String),
    #[error("invalid complex {complex}: {reason}")]
    InvalidComplex { complex: String, reason: String },
    #[error(transparent)]
    Group(#[from] FpError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A connected graph with 2-cells attached along closed edge paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingComplex {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    cells: Vec<Word>,
    basepoint: usize,
}

impl GluingComplex {
    /// Edges are `(label, source, target)`; cells are written over edge labels
    /// as in `a1 b1^-1`.
    pub fn new(
        name: &str,
        vertices: &[&str],
        edges: &[(&str, &str, &str)],
        cells: &[&str],
        basepoint: &str,
    ) -> Result<Self, VkError> {
        let invalid = |reason: String| VkError::InvalidComplex { complex: name.to_string(), reason };
        let vertex_names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let mut index = HashMap::new();
        for (i, v) in vertex_names.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(invalid(format!("vertex {v} declared twice")));
            }
        }
        let lookup = |v: &str| index.get(v).copied().ok_or_else(|| invalid(format!("unknown vertex {v}")));
        let mut built = Vec::with_capacity(edges.len());
        for (label, s, t) in edges {
            if built.iter().any(|e: &Edge| e.label == *label) {
                return Err(invalid(format!("edge {label} declared twice")));
            }
            if label.is_empty() || label.contains('^') {
                return Err(invalid(format!("edge label {label:?} is not usable in words")));
            }
            built.push(Edge { label: label.to_string(), source: lookup(s)?, target: lookup(t)? });
        }
        let basepoint = lookup(basepoint)?;
        let labels: Vec<String> = built.iter().map(|e| e.label.clone()).collect();
        let mut words = Vec::with_capacity(cells.len());
        for c in cells {
            let w = parse_word(c, &labels).map_err(|e| invalid(format!("cell {c:?}: {e}")))?;
            words.push(w);
        }
        let complex = GluingComplex { name: name.to_string(), vertices: vertex_names, edges: built, cells: words, basepoint };
        for (w, text) in complex.cells.iter().zip(cells) {
            if !complex.is_closed_path(w) {
                return Err(invalid(format!("cell {text:?} is not a closed edge path")));
            }
        }
        Ok(complex)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cells(&self) -> &[Word] {
        &self.cells
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    fn endpoints(&self, l: Letter) -> (usize, usize) {
        let e = &self.edges[l.generator()];
        if l.is_inverse() {
            (e.target, e.source)
        } else {
            (e.source, e.target)
        }
    }

    /// Whether consecutive letters meet and the path returns to its start.
    pub fn is_closed_path(&self, w: &Word) -> bool {
        let l = w.letters();
        if l.is_empty() {
            return true;
        }
        let chained = l.windows(2).all(|p| self.endpoints(p[0]).1 == self.endpoints(p[1]).0);
        chained && self.endpoints(l[l.len() - 1]).1 == self.endpoints(l[0]).0
    }

    /// Same complex with edges declared in the order `perm` (a permutation of
    /// the current indices). Cells are rewritten accordingly.
    pub fn with_edge_order(&self, perm: &[usize]) -> GluingComplex {
        assert_eq!(perm.len(), self.edges.len(), "edge permutation has the wrong length");
        let mut new_index = vec![usize::MAX; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            new_index[old] = new;
        }
        let edges = perm.iter().map(|&old| self.edges[old].clone()).collect();
        let cells = self
            .cells
            .iter()
            .map(|w| {
                Word::from_letters(
                    w.letters().iter().map(|l| Letter::new(new_index[l.generator()], l.is_inverse())).collect(),
                )
            })
            .collect();
        GluingComplex { edges, cells, ..self.clone() }
    }

    /// Same complex based at another vertex.
    pub fn with_basepoint(&self, vertex: &str) -> Option<GluingComplex> {
        let basepoint = self.vertex_index(vertex)?;
        Some(GluingComplex { basepoint, ..self.clone() })
    }

    /// First Betti number of the 1-skeleton, `#edges − #vertices + 1`.
    pub fn graph_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }
}

/// Spanning-tree data used to rewrite edge paths as group words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi1Data {
    pub presentation: Presentation,
    /// Closed edge path `tree · edge · tree⁻¹` for each generator.
    pub loops: Vec<Word>,
    /// Generator index of each edge, `None` for tree edges.
    generator_of_edge: Vec<Option<usize>>,
}

impl Pi1Data {
    /// Rewrites an edge path as a word in the generators by dropping tree edges.
    pub fn rewrite(&self, path: &Word) -> Word {
        let letters = path
            .letters()
            .iter()
            .filter_map(|l| self.generator_of_edge[l.generator()].map(|g| Letter::new(g, l.is_inverse())))
            .collect();
        Word::from_letters(letters).reduce()
    }

    pub fn is_tree_edge(&self, edge: usize) -> bool {
        self.generator_of_edge[edge].is_none()
    }
}

/// `π₁` of the complex at its basepoint, with one generator per non-tree edge
/// and one relator per 2-cell.
pub fn pi1_presentation(c: &GluingComplex) -> Result<Pi1Data, VkError> {
    let n = c.vertices.len();
    // parent[v] = edge letter arriving at v along the tree
    let mut parent: Vec<Option<Option<Letter>>> = vec![None; n];
    parent[c.basepoint] = Some(None);
    let mut in_tree = vec![false; c.edges.len()];
    let mut queue = VecDeque::from([c.basepoint]);
    while let Some(v) = queue.pop_front() {
        for (i, e) in c.edges.iter().enumerate() {
            let step = if e.source == v && parent[e.target].is_none() {
                Some((e.target, Letter::gen(i)))
            } else if e.target == v && parent[e.source].is_none() {
                Some((e.source, Letter::inv(i)))
            } else {
                None
            };
            if let Some((w, l)) = step {
                parent[w] = Some(Some(l));
                in_tree[i] = true;
                queue.push_back(w);
            }
        }
    }
    if let Some(v) = parent.iter().position(Option::is_none) {
        return Err(VkError::DisconnectedComplex { complex: c.name.clone(), vertex: c.vertices[v].clone() });
    }

    let tree_path = |mut v: usize| -> Word {
        let mut rev = Vec::new();
        while let Some(Some(l)) = parent[v] {
            rev.push(l);
            v = c.endpoints(l).0;
        }
        rev.reverse();
        Word::from_letters(rev)
    };

    let mut generator_of_edge = vec![None; c.edges.len()];
    let mut names = Vec::new();
    let mut loops = Vec::new();
    for (i, e) in c.edges.iter().enumerate() {
        if in_tree[i] {
            continue;
        }
        generator_of_edge[i] = Some(names.len());
        names.push(e.label.clone());
        loops.push(tree_path(e.source).concat(&Word::generator(i)).concat(&tree_path(e.target).inverse()));
    }
    let mut data = Pi1Data { presentation: Presentation::trivial(), loops, generator_of_edge };
    let relators = c.cells.iter().map(|w| data.rewrite(w)).collect();
    data.presentation = Presentation::new(names, relators)?;
    Ok(data)
}

/// A cellular map given on vertices and on edges, each edge going to a target
/// edge traversed forwards (`+1`) or backwards (`-1`). Stored by label so it
/// survives re-ordering of either complex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GluingMap {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, (String, bool)>,
}

impl GluingMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, from: &str, to: &str) -> Self {
        self.vertex_map.insert(from.to_string(), to.to_string());
        self
    }

    /// Maps edge `from` onto `to`, reversed when `inverse` is set.
    pub fn edge(mut self, from: &str, to: &str, inverse: bool) -> Self {
        self.edge_map.insert(from.to_string(), (to.to_string(), inverse));
        self
    }

    /// Resolves the map against concrete complexes, checking that it is
    /// defined everywhere and respects incidence.
    pub fn resolve(&self, src: &GluingComplex, tgt: &GluingComplex) -> Result<Vec<Letter>, VkError> {
        let bad = |msg: String| VkError::IncompatibleMap(msg);
        let mut vmap = Vec::with_capacity(src.vertices.len());
        for v in &src.vertices {
            let image = self.vertex_map.get(v).ok_or_else(|| bad(format!("vertex {v} has no image")))?;
            vmap.push(tgt.vertex_index(image).ok_or_else(|| bad(format!("vertex {image} not in {}", tgt.name)))?);
        }
        for key in self.vertex_map.keys() {
            if src.vertex_index(key).is_none() {
                return Err(bad(format!("vertex {key} not in {}", src.name)));
            }
        }
        for key in self.edge_map.keys() {
            if src.edge_index(key).is_none() {
                return Err(bad(format!("edge {key} not in {}", src.name)));
            }
        }
        let mut letters = Vec::with_capacity(src.edges.len());
        for e in &src.edges {
            let (image, inverse) =
                self.edge_map.get(&e.label).ok_or_else(|| bad(format!("edge {} has no image", e.label)))?;
            let j = tgt.edge_index(image).ok_or_else(|| bad(format!("edge {image} not in {}", tgt.name)))?;
            let l = Letter::new(j, *inverse);
            let (s, t) = tgt.endpoints(l);
            if s != vmap[e.source] || t != vmap[e.target] {
                return Err(bad(format!(
                    "edge {} runs {}→{} but its image runs {}→{}",
                    e.label, src.vertices[e.source], src.vertices[e.target], tgt.vertices[s], tgt.vertices[t]
                )));
            }
            letters.push(l);
        }
        Ok(letters)
    }
}

/// The homomorphism on fundamental groups induced by a cellular map. Each
/// source generator loop is pushed forward edge by edge and rewritten over the
/// target spanning tree.
pub fn induced_hom(
    m: &GluingMap,
    src: &GluingComplex,
    src_pi1: &Pi1Data,
    tgt: &GluingComplex,
    tgt_pi1: &Pi1Data,
) -> Result<GroupHom, VkError> {
    let letters = m.resolve(src, tgt)?;
    let images: Vec<Word> = src_pi1
        .loops
        .iter()
        .map(|path| {
            let pushed = Word::from_letters(
                path.letters()
                    .iter()
                    .map(|l| if l.is_inverse() { letters[l.generator()].inverse() } else { letters[l.generator()] })
                    .collect(),
            );
            tgt_pi1.rewrite(&pushed)
        })
        .collect();
    Ok(GroupHom::new(src_pi1.presentation.clone(), tgt_pi1.presentation.clone(), images)?)
}

/// `π₁(X̄) ∗_{π₁(D̄)} π₁(D)` for two homomorphisms out of `π₁(D̄)`.
pub fn glue_fundamental_group(
    pi_xbar: &Presentation,
    dbar_to_xbar: &GroupHom,
    dbar_to_d: &GroupHom,
) -> Result<Presentation, VkError> {
    if dbar_to_xbar.source() != dbar_to_d.source() {
        return Err(VkError::IncompatibleMap("the two homomorphisms have different sources".into()));
    }
    if dbar_to_xbar.target() != pi_xbar {
        return Err(VkError::IncompatibleMap("first homomorphism does not land in the given group".into()));
    }
    Ok(amalgamated_product(pi_xbar, dbar_to_d.target(), dbar_to_d.source(), dbar_to_xbar, dbar_to_d)?)
}
