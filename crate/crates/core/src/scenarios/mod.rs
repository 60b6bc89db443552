//! The catalogue of configurations with their expected fundamental groups,
//! and the runner that recomputes each group and reports pass or fail.
//!
//! Scenarios are plain-text files (see [`format`] for the lexical rules). A
//! file has a `meta` section, an `expected` section and a payload:
//!
//! * kind `vankampen`: two `complex` sections and a `map` between them; the
//!   group is glued over the normalisation `P2`, which is simply connected.
//! * kind `torus-lattice`: a `torus` section whose `model` line selects a
//!   bielliptic quotient, a bi-tri-elliptic configuration or its reducible
//!   degeneration.
//! * kind `parametric`: a `torus` section holding an `isogeny` matrix.
//! * kind `cited`: no payload; the group is trivial by the given reference.

mod format;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{
    abelianization, amalgamated_product, is_cyclic_of_order, tietze_simplify, todd_coxeter_order, GroupHom,
    Presentation, Word, DEFAULT_MAX_COSETS,
};
use crate::intlin::{determinant, AbelianInvariants, IntMatrix, RatVector};
use crate::parallel;
use crate::torus::bitri::{eplus_presentation, theta_fbar, twisting_number, BiTriEllipticParams, Parity};
use crate::torus::{
    isogeny_cokernel, preimage_count, AffineSubtorus, AffineTorusMap, CurveClass, TorusLattice, DEFAULT_GROUP_CAP,
};
use crate::vankampen::{glue_fundamental_group, induced_hom, pi1_presentation, GluingComplex, GluingMap, VkError};
use format::{Line, Section, Token};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    #[serde(rename = "vankampen")]
    VanKampen,
    TorusLattice,
    Parametric,
    Cited,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::VanKampen => "vankampen",
            Kind::TorusLattice => "torus-lattice",
            Kind::Parametric => "parametric",
            Kind::Cited => "cited",
        })
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vankampen" => Ok(Kind::VanKampen),
            "torus-lattice" => Ok(Kind::TorusLattice),
            "parametric" => Ok(Kind::Parametric),
            "cited" => Ok(Kind::Cited),
            _ => Err(format!("unknown kind {s:?}")),
        }
    }
}

/// Descriptive columns carried alongside the computation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Metadata {
    pub family: String,
    pub normal: bool,
    /// Kept verbatim, since several rows are marked "unknown".
    pub smoothable: String,
    /// `μ̄`, the number of nodes of the preimage of the double curve.
    pub nodes: Option<u32>,
    /// `ρ`, the number of ramification points of the glueing involution.
    pub ramification: Option<u32>,
    /// `μ₁`, the number of degenerate cusps.
    pub cusps: Option<u32>,
    pub twisting: Option<u32>,
    pub normalisation: Option<String>,
    pub reference: Option<String>,
}

/// Expected group: its order and whether it is cyclic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub order: u64,
    pub cyclic: bool,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.cyclic) {
            (1, _) => write!(f, "1"),
            (n, true) => write!(f, "Z/{n}"),
            (n, false) => write!(f, "order {n}, not cyclic"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanKampenData {
    pub dbar: GluingComplex,
    pub d: GluingComplex,
    pub map: GluingMap,
}

/// A free quotient `A/G` of an abelian surface together with the data
/// certifying its fundamental group: a curve `Δ ⊂ A` whose orbit descends to
/// `D_min`, and an étale cover `Y` with deck transformation `σ` on which the
/// pullback of `D_min` splits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiellipticData {
    pub torus: TorusLattice,
    pub maps: BTreeMap<String, AffineTorusMap>,
    pub group: Vec<String>,
    pub curve: IntMatrix,
    pub transversal: IntMatrix,
    pub along: String,
    pub dmin_square: BigInt,
    pub dmin_nodes: BigInt,
    pub cover: TorusLattice,
    pub deck: String,
    pub component: IntMatrix,
}

impl BiellipticData {
    pub fn group_maps(&self) -> Vec<AffineTorusMap> {
        self.group.iter().map(|g| self.maps[g].clone()).collect()
    }

    pub fn deck_map(&self) -> &AffineTorusMap {
        &self.maps[&self.deck]
    }

    pub fn along_map(&self) -> &AffineTorusMap {
        &self.maps[&self.along]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    VanKampen(Box<VanKampenData>),
    Bielliptic(Box<BiellipticData>),
    BiTriElliptic(BiTriEllipticParams),
    /// Reducible polarisation: `D̄ = C₁ + C₂` with `φ: C₂ → C₁` given on `H₁`.
    ReducibleBiTriElliptic { phi: IntMatrix },
    Isogeny(IntMatrix),
    Cited,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub id: String,
    pub kind: Kind,
    pub meta: Metadata,
    pub payload: Payload,
    pub expected: Expected,
}

impl Scenario {
    /// The numeral in ids such as `E3` or `E3red`.
    pub fn id_numeral(&self) -> Option<u32> {
        let rest = self.id.strip_prefix('E')?;
        let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
        digits.parse().ok()
    }
}

/// Reads and validates one scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse(&text)
}

/// Parses and validates scenario text.
pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
    let sections = format::sections(text)?;
    let mut meta_section = None;
    let mut expected_section = None;
    let mut torus_section = None;
    let mut complexes: Vec<&Section> = Vec::new();
    let mut maps: Vec<&Section> = Vec::new();
    for s in &sections {
        let slot = match s.name() {
            "meta" => &mut meta_section,
            "expected" => &mut expected_section,
            "torus" => &mut torus_section,
            "complex" => {
                complexes.push(s);
                continue;
            }
            _ => {
                maps.push(s);
                continue;
            }
        };
        if slot.is_some() {
            return Err(s.header.keyword().error(format!("duplicate {} section", s.name())));
        }
        s.header.expect_args(0)?;
        *slot = Some(s);
    }
    let missing = |name: &str| ScenarioError::Parse { line: 1, column: 1, message: format!("missing {name} section") };
    let (id, kind, meta) = parse_meta(meta_section.ok_or_else(|| missing("meta"))?)?;
    let expected = parse_expected(expected_section.ok_or_else(|| missing("expected"))?)?;

    let payload = match kind {
        Kind::VanKampen => Payload::VanKampen(Box::new(parse_van_kampen(&complexes, &maps)?)),
        _ => {
            if let Some(s) = complexes.first().or(maps.first()) {
                return Err(s.header.keyword().error(format!("kind {kind} takes no {} section", s.name())));
            }
            match kind {
                Kind::Cited => {
                    if let Some(s) = torus_section {
                        return Err(s.header.keyword().error("kind cited takes no torus section"));
                    }
                    Payload::Cited
                }
                _ => parse_torus(kind, torus_section.ok_or_else(|| missing("torus"))?)?,
            }
        }
    };
    if kind == Kind::VanKampen {
        if let Some(s) = torus_section {
            return Err(s.header.keyword().error("kind vankampen takes no torus section"));
        }
    }
    let scenario = Scenario { id, kind, meta, payload, expected };
    validate(&scenario)?;
    Ok(scenario)
}

fn rest_of_line(line: &Line<'_>) -> Result<String, ScenarioError> {
    if line.args().is_empty() {
        return Err(line.missing("value"));
    }
    Ok(line.args().iter().map(|t| t.text).collect::<Vec<_>>().join(" "))
}

fn yes_no(t: &Token<'_>) -> Result<bool, ScenarioError> {
    match t.text {
        "yes" => Ok(true),
        "no" => Ok(false),
        _ => Err(t.error(format!("expected yes or no, found {:?}", t.text))),
    }
}

fn parse_meta(s: &Section<'_>) -> Result<(String, Kind, Metadata), ScenarioError> {
    let mut id = None;
    let mut kind = None;
    let mut normal = None;
    let mut m = Metadata::default();
    let mut seen = HashMap::new();
    for line in &s.lines {
        let key = line.keyword();
        if seen.insert(key.text, ()).is_some() {
            return Err(key.error(format!("duplicate key {}", key.text)));
        }
        match key.text {
            "id" => id = Some(line.single()?.text.to_string()),
            "kind" => {
                let t = line.single()?;
                kind = Some(t.text.parse::<Kind>().map_err(|e| t.error(e))?);
            }
            "family" => m.family = rest_of_line(line)?,
            "normal" => normal = Some(yes_no(line.single()?)?),
            "smoothable" => m.smoothable = rest_of_line(line)?,
            "nodes" => m.nodes = Some(line.single()?.parse("a count")?),
            "ramification" => m.ramification = Some(line.single()?.parse("a count")?),
            "cusps" => m.cusps = Some(line.single()?.parse("a count")?),
            "twisting" => m.twisting = Some(line.single()?.parse("a twisting number")?),
            "normalisation" => m.normalisation = Some(line.single()?.text.to_string()),
            "reference" => m.reference = Some(rest_of_line(line)?),
            other => return Err(key.error(format!("unknown meta key {other:?}"))),
        }
    }
    let need = |what: &str| s.header.missing(what);
    let id = id.ok_or_else(|| need("id"))?;
    let kind = kind.ok_or_else(|| need("kind"))?;
    m.normal = normal.ok_or_else(|| need("normal"))?;
    if m.family.is_empty() {
        return Err(need("family"));
    }
    if m.smoothable.is_empty() {
        return Err(need("smoothable"));
    }
    Ok((id, kind, m))
}

fn parse_expected(s: &Section<'_>) -> Result<Expected, ScenarioError> {
    let (mut order, mut cyclic) = (None, None);
    for line in &s.lines {
        match line.keyword().text {
            "order" => order = Some(line.single()?.parse("a positive order")?),
            "cyclic" => cyclic = Some(yes_no(line.single()?)?),
            other => return Err(line.keyword().error(format!("unknown expected key {other:?}"))),
        }
    }
    let order: u64 = order.ok_or_else(|| s.header.missing("order"))?;
    if order == 0 {
        return Err(invalid("expected order must be positive"));
    }
    Ok(Expected { order, cyclic: cyclic.ok_or_else(|| s.header.missing("cyclic"))? })
}

fn parse_complex(s: &Section<'_>) -> Result<GluingComplex, ScenarioError> {
    let name = s.header.single()?.text;
    let mut vertices: Vec<&str> = Vec::new();
    let mut edges = Vec::new();
    let mut cells = Vec::new();
    let mut base = None;
    for line in &s.lines {
        match line.keyword().text {
            "vertices" => vertices.extend(line.args().iter().map(|t| t.text)),
            "base" => base = Some(line.single()?.text),
            "edge" => {
                let a = line.expect_args(3)?;
                edges.push((a[0].text, a[1].text, a[2].text));
            }
            "cell" => cells.push(rest_of_line(line)?),
            other => return Err(line.keyword().error(format!("unknown complex key {other:?}"))),
        }
    }
    let base = base.ok_or_else(|| s.header.missing("base"))?;
    let cells: Vec<&str> = cells.iter().map(String::as_str).collect();
    GluingComplex::new(name, &vertices, &edges, &cells, base).map_err(|e| invalid(e.to_string()))
}

fn parse_map(s: &Section<'_>) -> Result<(String, String, GluingMap), ScenarioError> {
    let a = s.header.expect_args(2)?;
    let mut m = GluingMap::new();
    for line in &s.lines {
        let args = line.expect_args(3)?;
        if args[1].text != "->" {
            return Err(args[1].error("expected ->"));
        }
        match line.keyword().text {
            "vertex" => m = m.vertex(args[0].text, args[2].text),
            "edge" => {
                let target = args[2].text;
                let (name, inverse) = match target.as_bytes().first() {
                    Some(b'-') => (&target[1..], true),
                    Some(b'+') => (&target[1..], false),
                    _ => (target, false),
                };
                if name.is_empty() {
                    return Err(args[2].error("missing edge name"));
                }
                m = m.edge(args[0].text, name, inverse);
            }
            other => return Err(line.keyword().error(format!("unknown map key {other:?}"))),
        }
    }
    Ok((a[0].text.to_string(), a[1].text.to_string(), m))
}

fn parse_van_kampen(complexes: &[&Section<'_>], maps: &[&Section<'_>]) -> Result<VanKampenData, ScenarioError> {
    if complexes.len() != 2 || maps.len() != 1 {
        return Err(invalid(format!(
            "kind vankampen needs two complex sections and one map section, found {} and {}",
            complexes.len(),
            maps.len()
        )));
    }
    let parsed = [parse_complex(complexes[0])?, parse_complex(complexes[1])?];
    let (src, dst, map) = parse_map(maps[0])?;
    let find = |name: &str| {
        parsed
            .iter()
            .find(|c| c.name() == name)
            .cloned()
            .ok_or_else(|| invalid(format!("map refers to unknown complex {name}")))
    };
    let (dbar, d) = (find(&src)?, find(&dst)?);
    if dbar.name() == d.name() {
        return Err(invalid("map source and target must differ"));
    }
    Ok(VanKampenData { dbar, d, map })
}

/// `NAME linear ROWS shift NUMS`, with `linear id` for the identity.
fn parse_affine(line: &Line<'_>, rank: usize, den: &BigInt) -> Result<(String, AffineTorusMap), ScenarioError> {
    let args = line.args();
    let name = args.first().ok_or_else(|| line.missing("map name"))?;
    if args.get(1).map(|t| t.text) != Some("linear") {
        return Err(args.get(1).map_or_else(|| line.missing("linear"), |t| t.error("expected linear")));
    }
    let shift_at = args.iter().position(|t| t.text == "shift").ok_or_else(|| line.missing("shift"))?;
    let linear = match &args[2..shift_at] {
        [t] if t.text == "id" => IntMatrix::identity(rank),
        tokens => format::matrix(line, tokens)?,
    };
    let shift = format::vector(line, &args[shift_at + 1..])?;
    if linear.rows() != rank || linear.cols() != rank || shift.len() != rank {
        return Err(name.error(format!("map {} does not act on rank {rank}", name.text)));
    }
    Ok((name.text.to_string(), AffineTorusMap::new(linear, RatVector::new(shift, den.clone()))))
}

fn parse_torus(kind: Kind, s: &Section<'_>) -> Result<Payload, ScenarioError> {
    let mut keyed: BTreeMap<&str, &Line> = BTreeMap::new();
    let mut affine = Vec::new();
    for line in &s.lines {
        let key = line.keyword();
        if key.text == "affine" {
            affine.push(line);
        } else if keyed.insert(key.text, line).is_some() {
            return Err(key.error(format!("duplicate key {}", key.text)));
        }
    }
    let get = |key: &str| keyed.get(key).copied().ok_or_else(|| s.header.missing(key));
    let mat = |key: &str| get(key).and_then(|l| format::matrix(l, l.args()));
    let allow = |keys: &[&str]| -> Result<(), ScenarioError> {
        match keyed.iter().find(|(k, _)| !keys.contains(k)) {
            Some((k, l)) => Err(l.keyword().error(format!("unexpected torus key {k:?}"))),
            None if !affine.is_empty() && !keys.contains(&"affine") => Err(affine[0].keyword().error("unexpected affine map")),
            None => Ok(()),
        }
    };

    if kind == Kind::Parametric {
        allow(&["isogeny"])?;
        return Ok(Payload::Isogeny(mat("isogeny")?));
    }
    let model_line = get("model")?;
    match model_line.single()?.text {
        "bi-tri-elliptic" => {
            allow(&["model", "parity", "d", "d-prime", "g-choice"])?;
            let parity = match get("parity")?.single()? {
                t if t.text == "odd" => Parity::Odd,
                t if t.text == "even" => Parity::Even,
                t => return Err(t.error("expected odd or even")),
            };
            let d = get("d")?.single()?.parse("a degree")?;
            let d_prime = get("d-prime")?.single()?.parse("a degree")?;
            let g_choice = match keyed.get("g-choice") {
                Some(l) => l.single()?.parse("an index")?,
                None => 0,
            };
            let p = BiTriEllipticParams::new(d, d_prime, parity, g_choice).map_err(|e| invalid(e.to_string()))?;
            Ok(Payload::BiTriElliptic(p))
        }
        "reducible" => {
            allow(&["model", "phi"])?;
            Ok(Payload::ReducibleBiTriElliptic { phi: mat("phi")? })
        }
        "bielliptic" => {
            allow(&[
                "model", "basis", "denominator", "lattice", "affine", "group", "curve", "transversal", "dmin-square",
                "dmin-nodes", "cover", "deck", "component",
            ])?;
            let labels: Vec<String> = get("basis")?.args().iter().map(|t| t.text.to_string()).collect();
            let den: BigInt = get("denominator")?.single()?.parse("a denominator")?;
            let torus_err = |e: crate::torus::TorusError| invalid(e.to_string());
            let torus = TorusLattice::new(labels.clone(), den.clone(), &mat("lattice")?).map_err(torus_err)?;
            let cover = TorusLattice::new(labels.clone(), den.clone(), &mat("cover")?).map_err(torus_err)?;
            let mut maps = BTreeMap::new();
            for line in &affine {
                let (name, f) = parse_affine(line, labels.len(), &den)?;
                if maps.insert(name.clone(), f).is_some() {
                    return Err(line.args()[0].error(format!("map {name} defined twice")));
                }
            }
            let known = |t: &Token<'_>| -> Result<String, ScenarioError> {
                if maps.contains_key(t.text) {
                    Ok(t.text.to_string())
                } else {
                    Err(t.error(format!("unknown map {}", t.text)))
                }
            };
            let group = get("group")?.args().iter().map(known).collect::<Result<Vec<_>, _>>()?;
            let transversal_line = get("transversal")?;
            let targs = transversal_line.args();
            let along_at = targs.iter().position(|t| t.text == "along").ok_or_else(|| transversal_line.missing("along"))?;
            let along = known(targs.get(along_at + 1).ok_or_else(|| transversal_line.missing("map name"))?)?;
            Ok(Payload::Bielliptic(Box::new(BiellipticData {
                transversal: format::matrix(transversal_line, &targs[..along_at])?,
                along,
                curve: mat("curve")?,
                dmin_square: get("dmin-square")?.single()?.parse("an integer")?,
                dmin_nodes: get("dmin-nodes")?.single()?.parse("an integer")?,
                deck: known(get("deck")?.single()?)?,
                component: mat("component")?,
                group,
                maps,
                torus,
                cover,
            })))
        }
        _ => Err(model_line.args()[0].error("expected bielliptic, bi-tri-elliptic or reducible")),
    }
}

fn validate(s: &Scenario) -> Result<(), ScenarioError> {
    if s.kind != Kind::Parametric && !(1..=5).contains(&s.expected.order) {
        return Err(invalid(format!("expected order {} is outside 1..=5", s.expected.order)));
    }
    let kind_matches = matches!(
        (s.kind, &s.payload),
        (Kind::VanKampen, Payload::VanKampen(_))
            | (Kind::Parametric, Payload::Isogeny(_))
            | (Kind::Cited, Payload::Cited)
            | (Kind::TorusLattice, Payload::Bielliptic(_) | Payload::BiTriElliptic(_) | Payload::ReducibleBiTriElliptic { .. })
    );
    if !kind_matches {
        return Err(invalid(format!("payload does not match kind {}", s.kind)));
    }
    match &s.payload {
        Payload::VanKampen(v) => validate_van_kampen(s, v),
        Payload::Bielliptic(b) => validate_bielliptic(b),
        Payload::BiTriElliptic(p) => {
            let m = twisting_number(p).map_err(|e| invalid(e.to_string()))?;
            check_twisting(s, m)
        }
        Payload::ReducibleBiTriElliptic { phi } => {
            if phi.rows() != 2 || phi.cols() != 2 || !determinant(phi).abs().is_one() {
                return Err(invalid("phi must be a unimodular 2×2 matrix"));
            }
            let m = s.meta.twisting.ok_or_else(|| invalid("reducible configurations need a twisting number"))?;
            check_twisting(s, m)
        }
        Payload::Isogeny(a) => {
            if !a.is_square() {
                return Err(invalid("isogeny matrix must be square"));
            }
            let det = determinant(a).abs();
            if det != BigInt::from(s.expected.order) {
                return Err(invalid(format!("expected order {} differs from |det| = {det}", s.expected.order)));
            }
            Ok(())
        }
        Payload::Cited => {
            if s.meta.reference.is_none() {
                return Err(invalid("kind cited needs a reference"));
            }
            Ok(())
        }
    }
}

fn check_twisting(s: &Scenario, computed: u32) -> Result<(), ScenarioError> {
    let numeral = s.id_numeral().ok_or_else(|| invalid(format!("id {} carries no twisting numeral", s.id)))?;
    if let Some(declared) = s.meta.twisting {
        if declared != computed {
            return Err(invalid(format!("declared twisting {declared} differs from computed {computed}")));
        }
    }
    if numeral != computed {
        return Err(invalid(format!("twisting number {computed} differs from the id numeral {numeral}")));
    }
    Ok(())
}

fn validate_van_kampen(s: &Scenario, v: &VanKampenData) -> Result<(), ScenarioError> {
    if s.meta.normalisation.as_deref() != Some("P2") {
        return Err(invalid("kind vankampen needs normalisation P2"));
    }
    let vk = |e: VkError| invalid(e.to_string());
    pi1_presentation(&v.dbar).map_err(vk)?;
    pi1_presentation(&v.d).map_err(vk)?;
    v.map.resolve(&v.dbar, &v.d).map_err(vk)?;
    let (Some(nodes), Some(rho), Some(mu1)) = (s.meta.nodes, s.meta.ramification, s.meta.cusps) else {
        return Err(invalid("kind vankampen needs nodes, ramification and cusps"));
    };
    if rho % 2 != 0 || nodes != rho / 2 + 2 * mu1 + 2 {
        return Err(invalid(format!("node count {nodes} violates μ̄ = ρ/2 + 2μ₁ + 2 with ρ = {rho}, μ₁ = {mu1}")));
    }
    if nodes as usize != v.dbar.vertices().len() {
        return Err(invalid(format!(
            "node count {nodes} differs from the {} vertices of {}",
            v.dbar.vertices().len(),
            v.dbar.name()
        )));
    }
    Ok(())
}

fn validate_bielliptic(b: &BiellipticData) -> Result<(), ScenarioError> {
    let err = |e: crate::torus::TorusError| invalid(e.to_string());
    for name in b.group.iter().chain([&b.along]) {
        b.torus.check_map(&b.maps[name]).map_err(err)?;
    }
    b.cover.check_map(b.deck_map()).map_err(err)?;
    let n = b.torus.rank();
    if b.transversal.rows() != b.transversal.cols() || b.curve.cols() != n || b.component.cols() != n {
        return Err(invalid("curve, component and transversal dimensions do not match the basis"));
    }
    Ok(())
}

/// Tuning knobs for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub max_cosets: usize,
    pub group_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { max_cosets: DEFAULT_MAX_COSETS, group_cap: DEFAULT_GROUP_CAP }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A named fact established on the way to the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Abelian invariants in report form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianRecord {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

/// Outcome of one scenario. The verdict is `pass` exactly when the computed
/// order and cyclicity equal the expected ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub order: Option<u64>,
    pub cyclic: bool,
    pub abelianization: Option<AbelianRecord>,
    pub expected: Option<Expected>,
    pub verdict: Verdict,
    pub elapsed_ms: f64,
    pub presentation: Option<String>,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub kind: Option<Kind>,
    pub family: Option<String>,
    pub normal: Option<bool>,
    pub smoothable: Option<String>,
}

impl Report {
    fn failed(scenario: &str, error: String) -> Report {
        Report {
            scenario: scenario.to_string(),
            order: None,
            cyclic: false,
            abelianization: None,
            expected: None,
            verdict: Verdict::Fail,
            elapsed_ms: 0.0,
            presentation: None,
            checks: Vec::new(),
            error: Some(error),
            kind: None,
            family: None,
            normal: None,
            smoothable: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn record(&mut self, name: &str, passed: bool) -> Result<(), String> {
        self.0.push(Check { name: name.to_string(), passed });
        if passed {
            Ok(())
        } else {
            Err(format!("check failed: {name}"))
        }
    }
}

/// `π₁` of a glueing over a simply connected normalisation.
pub fn van_kampen_group(v: &VanKampenData) -> Result<Presentation, VkError> {
    let pdbar = pi1_presentation(&v.dbar)?;
    let pd = pi1_presentation(&v.d)?;
    let to_d = induced_hom(&v.map, &v.dbar, &pdbar, &v.d, &pd)?;
    let to_xbar = GroupHom::trivial(pdbar.presentation, Presentation::trivial());
    glue_fundamental_group(&Presentation::trivial(), &to_xbar, &to_d)
}

fn cyclic_presentation(n: u64) -> Presentation {
    Presentation::new(vec!["s".into()], vec![Word::generator(0).pow(n as i64)]).expect("one generator")
}

fn bielliptic_group(b: &BiellipticData, opts: &RunOptions, checks: &mut Checks) -> Result<Presentation, String> {
    let e = |e: crate::torus::TorusError| e.to_string();
    let (a, y) = (&b.torus, &b.cover);
    let gens = b.group_maps();
    let group_order = BigInt::from(a.group_closure(&gens, opts.group_cap).map_err(e)?.len());
    checks.record("group acts freely on the torus", a.is_free_action(&gens, opts.group_cap).map_err(e)?)?;

    let delta = a.subtorus(&b.curve).map_err(e)?;
    let moved = a.image_class(&b.along_map().linear, &delta).map_err(e)?;
    let transversal = preimage_count(&b.transversal, &RatVector::zero(b.transversal.rows())).map_err(e)?;
    checks.record(
        "transversal points equal the intersection of the curve with its translate",
        transversal == a.intersection_number(&delta, &moved).map_err(e)?,
    )?;

    let start = AffineSubtorus { class: delta, offset: RatVector::zero(a.rank()) };
    let gamma = a
        .orbit(&start, &gens, opts.group_cap)
        .map_err(e)?
        .iter()
        .fold(CurveClass::new(), |acc, s| acc.plus(1, &s.class));
    let gamma_sq = a.intersect(&gamma, &gamma).map_err(e)?;
    let dmin_sq = crate::torus::descend_intersection(&gamma_sq, &group_order).map_err(e)?;
    checks.record("D_min squared matches", dmin_sq == b.dmin_square)?;
    let nodes = crate::torus::descend_intersection(&(&gamma_sq / 2), &group_order).map_err(e)?;
    checks.record("nodes of D_min match", nodes == b.dmin_nodes)?;

    let deck = b.deck_map();
    let n = y.map_order(deck, opts.group_cap).map_err(e)?;
    checks.record("deck transformation acts freely on the cover", y.is_free_action(&[deck.clone()], opts.group_cap).map_err(e)?)?;
    let component = AffineSubtorus { class: y.subtorus(&b.component).map_err(e)?, offset: RatVector::zero(y.rank()) };
    let orbit = y.orbit(&component, &[deck.clone()], opts.group_cap).map_err(e)?;
    checks.record("pullback of D_min has one component per deck element", orbit.len() as u64 == n)?;
    let mut meetings = BigInt::from(0);
    for (i, s) in orbit.iter().enumerate() {
        for t in &orbit[i + 1..] {
            meetings += y.intersection_number(&s.class, &t.class).map_err(e)?;
        }
    }
    checks.record("components meet in the pulled back nodes", meetings == BigInt::from(n) * &b.dmin_nodes)?;
    let classes: Vec<_> = orbit.into_iter().map(|s| s.class).collect();
    checks.record("contracted curves generate the homology of the cover", y.cokernel_of_classes(&classes).is_trivial())?;
    Ok(cyclic_presentation(n))
}

/// `π₁(C₁) ∗_{π₁(C₁) ∗ π₁(C₂)} π₁(C₁)`, where `C₂` dies in the normalisation
/// and maps to `C₁` by `φ` in the double curve.
pub fn reducible_group(phi: &IntMatrix) -> Result<Presentation, String> {
    let torus = |a: &str, b: &str| Presentation::parse(&[a, b], &[&format!("{a} {b} {a}^-1 {b}^-1")]);
    let e = |e: crate::fpgroup::FpError| e.to_string();
    let c1 = torus("x", "y").map_err(e)?;
    let d = torus("u", "v").map_err(e)?;
    let dbar = Presentation::parse(&["a", "b", "c", "d"], &["a b a^-1 b^-1", "c d c^-1 d^-1"]).map_err(e)?;
    let entry = |i: usize, j: usize| phi[(i, j)].to_i64().ok_or("phi entry out of range");
    let image = |j: usize| -> Result<Word, String> {
        Ok(Word::generator(0).pow(entry(0, j)?).concat(&Word::generator(1).pow(entry(1, j)?)))
    };
    let (x, y) = (Word::generator(0), Word::generator(1));
    let one = Word::identity();
    let to_xbar = GroupHom::new(dbar.clone(), c1.clone(), vec![x.clone(), y.clone(), one.clone(), one]).map_err(e)?;
    let to_d = GroupHom::new(dbar.clone(), d.clone(), vec![x, y, image(0)?, image(1)?]).map_err(e)?;
    amalgamated_product(&c1, &d, &dbar, &to_xbar, &to_d).map_err(e)
}

fn abelian_presentation(inv: &AbelianInvariants) -> Result<Presentation, String> {
    let k = inv.torsion.len() + inv.free_rank;
    let mut relators = Vec::new();
    for (i, t) in inv.torsion.iter().enumerate() {
        relators.push(Word::generator(i).pow(t.to_i64().ok_or("invariant factor out of range")?));
    }
    for i in 0..k {
        for j in i + 1..k {
            relators.push(Word::commutator(&Word::generator(i), &Word::generator(j)));
        }
    }
    Presentation::with_generator_count(k, relators).map_err(|e| e.to_string())
}

fn scenario_group(s: &Scenario, opts: &RunOptions, checks: &mut Checks) -> Result<Presentation, String> {
    match &s.payload {
        Payload::VanKampen(v) => van_kampen_group(v).map_err(|e| e.to_string()),
        Payload::Bielliptic(b) => bielliptic_group(b, opts, checks),
        Payload::BiTriElliptic(p) => {
            let e = |e: crate::torus::TorusError| e.to_string();
            let m = twisting_number(p).map_err(e)?;
            checks.record("twisting number matches the id", Some(m) == s.id_numeral())?;
            checks.record("theta meets the image of F in 3 points", theta_fbar(p).map_err(e)? == BigInt::from(3))?;
            eplus_presentation(p).map_err(e)
        }
        Payload::ReducibleBiTriElliptic { phi } => reducible_group(phi),
        Payload::Isogeny(a) => {
            let inv = isogeny_cokernel(a).map_err(|e| e.to_string())?;
            let d = inv.order().unwrap_or_default();
            checks.record("torsion order lies between 3 and 5", d >= BigInt::from(3) && d <= BigInt::from(5))?;
            abelian_presentation(&inv)
        }
        Payload::Cited => Ok(Presentation::trivial()),
    }
}

fn abelian_record(a: &AbelianInvariants) -> Option<AbelianRecord> {
    let torsion = a.torsion.iter().map(|t| t.to_u64()).collect::<Option<Vec<_>>>()?;
    Some(AbelianRecord { free_rank: a.free_rank, torsion })
}

/// Recomputes the scenario's group and compares it with the expectation.
/// Computational failures end up in the report, never as a panic.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Report {
    let start = Instant::now();
    let mut report = Report::failed(&s.id, String::new());
    report.error = None;
    report.expected = Some(s.expected);
    report.kind = Some(s.kind);
    report.family = Some(s.meta.family.clone());
    report.normal = Some(s.meta.normal);
    report.smoothable = Some(s.meta.smoothable.clone());

    let mut checks = Checks(Vec::new());
    let group = scenario_group(s, opts, &mut checks);
    report.checks = checks.0;
    match group {
        Ok(p) => {
            let p = tietze_simplify(&p);
            let ab = abelianization(&p);
            report.abelianization = abelian_record(&ab);
            report.presentation = Some(p.to_string());
            match todd_coxeter_order(&p, opts.max_cosets) {
                Ok(n) => {
                    report.order = Some(n);
                    match is_cyclic_of_order(&p, n, opts.max_cosets) {
                        Ok(c) => report.cyclic = c,
                        Err(e) => report.error = Some(e.to_string()),
                    }
                }
                Err(e) => report.error = Some(e.to_string()),
            }
        }
        Err(e) => report.error = Some(e),
    }
    if report.order == Some(s.expected.order) && report.cyclic == s.expected.cyclic {
        report.verdict = Verdict::Pass;
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    report
}

/// Whether to run scenarios concurrently. Without the `parallel` feature both
/// modes run sequentially.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogueReport {
    pub reports: Vec<Report>,
    pub summary: Summary,
}

impl CatalogueReport {
    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }
}

/// A named scenario source: the file name and its text.
#[derive(Clone, Debug)]
pub struct Source {
    pub name: String,
    pub text: String,
}

/// Parses, runs and collects the given sources, ordered by scenario id. A
/// source that fails to load yields a failing report named after its file.
pub fn verify_sources(sources: &[Source], exec: Execution, opts: &RunOptions) -> CatalogueReport {
    let mut loaded: Vec<(String, Result<Scenario, ScenarioError>)> = sources
        .iter()
        .map(|src| {
            let stem = src.name.strip_suffix(".scn").unwrap_or(&src.name).to_string();
            (stem, parse(&src.text))
        })
        .collect();
    let mut seen: HashMap<String, String> = HashMap::new();
    for (stem, scenario) in loaded.iter_mut() {
        if let Ok(s) = scenario {
            if let Some(first) = seen.insert(s.id.clone(), stem.clone()) {
                let id = s.id.clone();
                *scenario = Err(invalid(format!("duplicate id {id}, already defined by {first}")));
                seen.insert(id, first);
            }
        }
    }
    let job = |(stem, scenario): &(String, Result<Scenario, ScenarioError>)| match scenario {
        Ok(s) => run_scenario(s, opts),
        Err(e) => Report::failed(stem, e.to_string()),
    };
    let mut reports = match exec {
        Execution::Parallel => parallel::map(&loaded, job),
        Execution::Sequential => loaded.iter().map(job).collect(),
    };
    reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    let passed = reports.iter().filter(|r| r.passed()).count();
    let total = reports.len();
    CatalogueReport { reports, summary: Summary { passed, total } }
}

/// Runs every `*.scn` file in `dir`.
pub fn verify_catalogue(dir: &Path, exec: Execution, opts: &RunOptions) -> Result<CatalogueReport, ScenarioError> {
    Ok(verify_sources(&read_sources(dir)?, exec, opts))
}

/// Every `*.scn` file in `dir`, sorted by name.
pub fn read_sources(dir: &Path) -> Result<Vec<Source>, ScenarioError> {
    let io = |e: std::io::Error| ScenarioError::Io { path: dir.display().to_string(), message: e.to_string() };
    let mut sources = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("scn") {
            continue;
        }
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        let text = String::from_utf8_lossy(&std::fs::read(&path).map_err(io)?).into_owned();
        sources.push(Source { name, text });
    }
    sources.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(sources)
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        /// The catalogue shipped with the crate, as `(file name, text)`.
        pub const BUNDLED: &[(&str, &str)] = &[$(($name, include_str!(concat!("../../catalogue/", $name)))),*];
    };
}

bundled!(
    "B1.scn", "B2.scn", "dP.scn", "E1.scn", "E2.scn", "E2red.scn", "E3.scn", "E3red.scn", "E4.scn", "E4red.scn",
    "E5.scn", "E5red.scn", "P1.scn", "P2.scn", "P3.scn", "R3.scn", "R4.scn", "R5.scn", "X1.1.scn", "X1.2.scn",
    "X1.3.scn", "X1.4.scn", "X1.5.scn",
);

pub fn bundled_sources() -> Vec<Source> {
    BUNDLED.iter().map(|(name, text)| Source { name: name.to_string(), text: text.to_string() }).collect()
}

/// The bundled scenario with the given id.
pub fn bundled_scenario(id: &str) -> Option<Scenario> {
    BUNDLED.iter().filter_map(|(_, text)| parse(text).ok()).find(|s| s.id == id)
}

/// Every bundled scenario, in id order.
pub fn bundled_scenarios() -> Result<Vec<Scenario>, ScenarioError> {
    let mut all = BUNDLED.iter().map(|(_, text)| parse(text)).collect::<Result<Vec<_>, _>>()?;
    all.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(all)
}

pub fn verify_bundled(exec: Execution, opts: &RunOptions) -> CatalogueReport {
    verify_sources(&bundled_sources(), exec, opts)
}
