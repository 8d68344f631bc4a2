//! Labelled 1-graphs and 2-graphs, axiom validation and structural views.
//!
//! A [`TwoGraph`] stores its data as index arrays over three label sets
//! (vertices, half-edges, strand sections) together with the maps
//! `nu: H -> V`, `mu: S -> H` and the involutions `iota`, `sigma1`, `sigma2`.
//! Everything else (edges, faces, vertex graphs, boundaries) is derived.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Errors raised by graph constructors and structural operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid 2-graph: {0}")]
    Invalid(String),
    #[error("invalid 1-graph: {0}")]
    InvalidOneGraph(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("iota is not an involution: {0}")]
    IotaNotInvolution(String),
    #[error("sigma is not a bijection: {0}")]
    SigmaNotBijection(String),
    #[error("colouring is not proper: {0}")]
    ImproperColouring(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("not a combinatorial map: {0}")]
    NotAMap(String),
    #[error("not a coloured 2-graph: {0}")]
    NotColoured(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("non-integer genus {0}")]
    NonIntegerGenus(String),
}

pub type GraphResult<T> = Result<T, GraphError>;

fn index_labels(kind: &str, labels: &[String]) -> GraphResult<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.clone(), i).is_some() {
            return Err(GraphError::Invalid(format!("duplicate {kind} label `{l}`")));
        }
    }
    Ok(map)
}

fn is_involution(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| j < p.len() && p[j] == i)
}

// ---------------------------------------------------------------------------
// 1-graphs
// ---------------------------------------------------------------------------

/// An ordinary graph with half-edges; fixed points of `pairing` are external legs.
///
/// Half-edges may carry a colour (0 means uncoloured); isomorphisms preserve it.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OneGraph {
    vertices: Vec<String>,
    half_edges: Vec<String>,
    attach: Vec<usize>,
    pairing: Vec<usize>,
    colour: Vec<u32>,
}

impl OneGraph {
    /// Builds a 1-graph from labels. `half_edges` lists `(id, vertex, colour)`,
    /// `pairs` lists the non-trivial orbits of the pairing.
    pub fn new(
        vertices: Vec<String>,
        half_edges: Vec<(String, String, u32)>,
        pairs: &[(String, String)],
    ) -> GraphResult<Self> {
        let vmap = index_labels("vertex", &vertices).map_err(|e| GraphError::InvalidOneGraph(e.to_string()))?;
        let labels: Vec<String> = half_edges.iter().map(|h| h.0.clone()).collect();
        let hmap = index_labels("half-edge", &labels).map_err(|e| GraphError::InvalidOneGraph(e.to_string()))?;
        let mut attach = Vec::with_capacity(half_edges.len());
        let mut colour = Vec::with_capacity(half_edges.len());
        for (id, v, c) in &half_edges {
            let vi = *vmap.get(v).ok_or_else(|| {
                GraphError::InvalidOneGraph(format!("half-edge `{id}` attached to unknown vertex `{v}`"))
            })?;
            attach.push(vi);
            colour.push(*c);
        }
        let mut pairing: Vec<usize> = (0..labels.len()).collect();
        for (a, b) in pairs {
            let ia = *hmap.get(a).ok_or_else(|| GraphError::InvalidOneGraph(format!("unknown half-edge `{a}`")))?;
            let ib = *hmap.get(b).ok_or_else(|| GraphError::InvalidOneGraph(format!("unknown half-edge `{b}`")))?;
            if ia == ib || pairing[ia] != ia || pairing[ib] != ib {
                return Err(GraphError::InvalidOneGraph(format!("pairing is not an involution at `{a}`/`{b}`")));
            }
            pairing[ia] = ib;
            pairing[ib] = ia;
        }
        Ok(OneGraph { vertices, half_edges: labels, attach, pairing, colour })
    }

    pub(crate) fn from_parts(
        vertices: Vec<String>,
        half_edges: Vec<String>,
        attach: Vec<usize>,
        pairing: Vec<usize>,
        colour: Vec<u32>,
    ) -> Self {
        debug_assert!(is_involution(&pairing));
        debug_assert!(attach.iter().all(|&v| v < vertices.len()));
        OneGraph { vertices, half_edges, attach, pairing, colour }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn half_edges(&self) -> &[String] {
        &self.half_edges
    }
    pub fn attach(&self) -> &[usize] {
        &self.attach
    }
    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }
    pub fn colours(&self) -> &[u32] {
        &self.colour
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_half_edges(&self) -> usize {
        self.half_edges.len()
    }

    /// Edges as index pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.pairing.len()).filter(|&h| self.pairing[h] > h).map(|h| (h, self.pairing[h])).collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    pub fn external_legs(&self) -> Vec<usize> {
        (0..self.pairing.len()).filter(|&h| self.pairing[h] == h).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.attach.iter().filter(|&&a| a == v).count()
    }

    /// Connected components as vertex index sets, ordered by smallest vertex.
    pub fn component_vertex_sets(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertices.len());
        for (a, b) in self.edges() {
            uf.union(self.attach[a], self.attach[b]);
        }
        uf.groups()
    }

    /// Number of connected components (K).
    pub fn num_components(&self) -> usize {
        self.component_vertex_sets().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// Splits into connected components, preserving labels and relative order.
    pub fn components(&self) -> Vec<OneGraph> {
        self.component_vertex_sets().into_iter().map(|vs| self.induced(&vs)).collect()
    }

    fn induced(&self, vs: &[usize]) -> OneGraph {
        let mut vpos = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in vs.iter().enumerate() {
            vpos[v] = i;
        }
        let hs: Vec<usize> = (0..self.half_edges.len()).filter(|&h| vpos[self.attach[h]] != usize::MAX).collect();
        let mut hpos = vec![usize::MAX; self.half_edges.len()];
        for (i, &h) in hs.iter().enumerate() {
            hpos[h] = i;
        }
        OneGraph {
            vertices: vs.iter().map(|&v| self.vertices[v].clone()).collect(),
            half_edges: hs.iter().map(|&h| self.half_edges[h].clone()).collect(),
            attach: hs.iter().map(|&h| vpos[self.attach[h]]).collect(),
            pairing: hs.iter().map(|&h| hpos[self.pairing[h]]).collect(),
            colour: hs.iter().map(|&h| self.colour[h]).collect(),
        }
    }

    /// Disjoint union; labels must already be distinct.
    pub fn disjoint_union(parts: &[OneGraph]) -> OneGraph {
        let mut out = OneGraph::default();
        for g in parts {
            let vo = out.vertices.len();
            let ho = out.half_edges.len();
            out.vertices.extend(g.vertices.iter().cloned());
            out.half_edges.extend(g.half_edges.iter().cloned());
            out.attach.extend(g.attach.iter().map(|&v| v + vo));
            out.pairing.extend(g.pairing.iter().map(|&h| h + ho));
            out.colour.extend(g.colour.iter().copied());
        }
        out
    }

    /// Same structure with every label prefixed.
    pub fn with_prefix(&self, prefix: &str) -> OneGraph {
        let mut g = self.clone();
        for l in g.vertices.iter_mut().chain(g.half_edges.iter_mut()) {
            *l = format!("{prefix}{l}");
        }
        g
    }

    /// Maximum colour appearing (0 if uncoloured).
    pub fn max_colour(&self) -> u32 {
        self.colour.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for OneGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OneGraph(V={}, E={}, legs={})", self.num_vertices(), self.num_edges(), self.external_legs().len())
    }
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

/// Axioms a candidate 2-graph can violate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    DuplicateLabel,
    HalfEdgeAttachment,
    StrandAttachment,
    IotaInvolution,
    Sigma1Involution,
    Sigma1FixedPoint,
    Sigma1VertexLocal,
    Sigma2Involution,
    Sigma2IotaCompatible,
}

impl Axiom {
    pub fn reason(self) -> &'static str {
        match self {
            Axiom::DuplicateLabel => "duplicate label",
            Axiom::HalfEdgeAttachment => "half-edge attachment not total",
            Axiom::StrandAttachment => "strand attachment not total",
            Axiom::IotaInvolution => "iota not an involution",
            Axiom::Sigma1Involution => "sigma1 not an involution",
            Axiom::Sigma1FixedPoint => "sigma1 fixed point",
            Axiom::Sigma1VertexLocal => "sigma1 not vertex-local",
            Axiom::Sigma2Involution => "sigma2 not an involution",
            Axiom::Sigma2IotaCompatible => "sigma2/iota incompatible",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub detail: String,
}

/// Result of checking a candidate against the 2-graph axioms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Whether the involution form and the set form (edges, vertex strands,
    /// edge strands) describe the same structure. Only meaningful if valid.
    pub presentations_agree: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn reasons(&self) -> Vec<&'static str> {
        let mut r: Vec<&'static str> = self.violations.iter().map(|v| v.axiom.reason()).collect();
        r.dedup();
        r
    }

    fn push(&mut self, axiom: Axiom, detail: impl Into<String>) {
        self.violations.push(Violation { axiom, detail: detail.into() });
    }
}

/// A strand section in a [`RawTwoGraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawStrand {
    pub id: String,
    pub half_edge: String,
    pub colour: u32,
}

/// Label-level candidate data, possibly violating the axioms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RawTwoGraph {
    pub vertices: Vec<String>,
    pub half_edges: Vec<(String, String)>,
    pub strands: Vec<RawStrand>,
    pub iota: Vec<(String, String)>,
    pub sigma1: Vec<(String, String)>,
    pub sigma2: Vec<(String, String)>,
}

fn pair_map(
    report: &mut ValidationReport,
    axiom: Axiom,
    attach_axiom: Axiom,
    name: &str,
    pairs: &[(String, String)],
    index: &HashMap<String, usize>,
    n: usize,
) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut seen = vec![false; n];
    for (a, b) in pairs {
        let (ia, ib) = match (index.get(a), index.get(b)) {
            (Some(&x), Some(&y)) => (x, y),
            _ => {
                let missing = if index.contains_key(a) { b } else { a };
                report.push(attach_axiom, format!("{name} refers to unknown label `{missing}`"));
                continue;
            }
        };
        if seen[ia] || seen[ib] || (ia == ib && seen[ia]) {
            report.push(axiom, format!("{name}: label in more than one pair (`{a}`, `{b}`)"));
            continue;
        }
        seen[ia] = true;
        seen[ib] = true;
        p[ia] = ib;
        p[ib] = ia;
    }
    p
}

impl RawTwoGraph {
    /// Checks every axiom and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        fn dup(kind: &str, labels: Vec<&String>, report: &mut ValidationReport) {
            let mut seen = HashSet::new();
            for l in labels {
                if !seen.insert(l.clone()) {
                    report.push(Axiom::DuplicateLabel, format!("duplicate {kind} `{l}`"));
                }
            }
        }
        dup("vertex", self.vertices.iter().collect(), &mut report);
        dup("half-edge", self.half_edges.iter().map(|h| &h.0).collect(), &mut report);
        dup("strand", self.strands.iter().map(|s| &s.id).collect(), &mut report);
        if !report.is_valid() {
            return report;
        }
        let vmap: HashMap<String, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let hmap: HashMap<String, usize> = self.half_edges.iter().enumerate().map(|(i, h)| (h.0.clone(), i)).collect();
        let smap: HashMap<String, usize> = self.strands.iter().enumerate().map(|(i, s)| (s.id.clone(), i)).collect();
        let nh = self.half_edges.len();
        let ns = self.strands.len();
        let mut nu = vec![usize::MAX; nh];
        for (i, (h, v)) in self.half_edges.iter().enumerate() {
            match vmap.get(v) {
                Some(&vi) => nu[i] = vi,
                None => {
                    report.push(Axiom::HalfEdgeAttachment, format!("half-edge `{h}` attached to unknown vertex `{v}`"))
                }
            }
        }
        let mut mu = vec![usize::MAX; ns];
        for (i, s) in self.strands.iter().enumerate() {
            match hmap.get(&s.half_edge) {
                Some(&hi) => mu[i] = hi,
                None => report.push(
                    Axiom::StrandAttachment,
                    format!("strand `{}` attached to unknown half-edge `{}`", s.id, s.half_edge),
                ),
            }
        }
        let iota = pair_map(&mut report, Axiom::IotaInvolution, Axiom::IotaInvolution, "iota", &self.iota, &hmap, nh);
        let sigma1 =
            pair_map(&mut report, Axiom::Sigma1Involution, Axiom::Sigma1Involution, "sigma1", &self.sigma1, &smap, ns);
        let sigma2 =
            pair_map(&mut report, Axiom::Sigma2Involution, Axiom::Sigma2Involution, "sigma2", &self.sigma2, &smap, ns);
        for s in 0..ns {
            if sigma1[s] == s {
                report.push(Axiom::Sigma1FixedPoint, format!("strand `{}` is fixed by sigma1", self.strands[s].id));
            }
        }
        let attach_ok = nu.iter().all(|&v| v != usize::MAX) && mu.iter().all(|&h| h != usize::MAX);
        if attach_ok {
            for s in 0..ns {
                let t = sigma1[s];
                if t > s && nu[mu[s]] != nu[mu[t]] {
                    report.push(
                        Axiom::Sigma1VertexLocal,
                        format!(
                            "sigma1 pairs `{}` and `{}` at different vertices",
                            self.strands[s].id, self.strands[t].id
                        ),
                    );
                }
            }
            for s in 0..ns {
                let t = sigma2[s];
                let h = mu[s];
                let ok = if t == s { iota[h] == h } else { iota[h] != h && mu[t] == iota[h] };
                if !ok {
                    report.push(
                        Axiom::Sigma2IotaCompatible,
                        format!("strand `{}` is not paired along its half-edge's edge", self.strands[s].id),
                    );
                }
            }
        }
        if report.is_valid() {
            report.presentations_agree = presentations_agree(&nu, &mu, &iota, &sigma1, &sigma2);
        }
        report
    }
}

/// Rebuilds the set presentation (edges, vertex strands, edge strands) and
/// checks its defining conditions independently of the involution form.
fn presentations_agree(nu: &[usize], mu: &[usize], iota: &[usize], sigma1: &[usize], sigma2: &[usize]) -> bool {
    let orbits =
        |p: &[usize]| -> Vec<(usize, usize)> { (0..p.len()).filter(|&x| p[x] > x).map(|x| (x, p[x])).collect() };
    let edges = orbits(iota);
    let vstrands = orbits(sigma1);
    let estrands = orbits(sigma2);
    let mut covered = vec![0u32; sigma1.len()];
    for &(a, b) in &vstrands {
        covered[a] += 1;
        covered[b] += 1;
        if nu[mu[a]] != nu[mu[b]] {
            return false;
        }
    }
    if covered.iter().any(|&c| c != 1) {
        return false;
    }
    let edge_set: HashSet<(usize, usize)> = edges.iter().copied().collect();
    for &(a, b) in &estrands {
        let (x, y) = (mu[a].min(mu[b]), mu[a].max(mu[b]));
        if !edge_set.contains(&(x, y)) {
            return false;
        }
    }
    let mut per_edge: HashMap<(usize, usize), usize> = HashMap::new();
    for &(a, b) in &estrands {
        *per_edge.entry((mu[a].min(mu[b]), mu[a].max(mu[b]))).or_default() += 1;
    }
    let mut deg = vec![0usize; nu.len()];
    for &h in mu {
        deg[h] += 1;
    }
    edges.iter().all(|&(a, b)| {
        let n = per_edge.get(&(a, b)).copied().unwrap_or(0);
        n == deg[a] && n == deg[b]
    })
}

// ---------------------------------------------------------------------------
// 2-graphs
// ---------------------------------------------------------------------------

/// A valid labelled 2-graph.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwoGraph {
    vertices: Vec<String>,
    half_edges: Vec<String>,
    strands: Vec<String>,
    nu: Vec<usize>,
    mu: Vec<usize>,
    iota: Vec<usize>,
    sigma1: Vec<usize>,
    sigma2: Vec<usize>,
    colour: Vec<u32>,
}

/// Internal or external face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceKind {
    Internal,
    External,
}

/// A face as a sequence of strand indices alternating sigma1 / sigma2 steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub kind: FaceKind,
    pub sections: Vec<usize>,
}

/// Cell of the complex associated with a 2-graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Vertex(usize),
    /// Internal edge given by its smaller half-edge index.
    Edge(usize),
    /// External edge given by its half-edge.
    ExternalEdge(usize),
    /// Face index into the combined internal-then-external face list.
    Face(usize),
}

impl Cell {
    pub fn dim(&self) -> u8 {
        match self {
            Cell::Vertex(_) => 0,
            Cell::Edge(_) | Cell::ExternalEdge(_) => 1,
            Cell::Face(_) => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    pub cells: Vec<Cell>,
    /// Strict order as pairs `(lower, upper)` of cell indices.
    pub order: Vec<(usize, usize)>,
    pub pure: bool,
    pub two_dimensional: bool,
    /// Whether every relation across a dimension gap of two factors through a 1-cell.
    pub intermediate_property: bool,
}

impl CellComplex {
    pub fn dim(&self, c: usize) -> u8 {
        self.cells[c].dim()
    }
}

impl TwoGraph {
    /// Builds a 2-graph from label-level data, rejecting invalid candidates.
    pub fn from_raw(raw: &RawTwoGraph) -> GraphResult<Self> {
        let report = raw.validate();
        if !report.is_valid() {
            let msg: Vec<String> =
                report.violations.iter().map(|v| format!("{}: {}", v.axiom.reason(), v.detail)).collect();
            return Err(GraphError::Invalid(msg.join("; ")));
        }
        let hmap: HashMap<&str, usize> = raw.half_edges.iter().enumerate().map(|(i, h)| (h.0.as_str(), i)).collect();
        let vmap: HashMap<&str, usize> = raw.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let smap: HashMap<&str, usize> = raw.strands.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
        let mut iota: Vec<usize> = (0..raw.half_edges.len()).collect();
        for (a, b) in &raw.iota {
            iota[hmap[a.as_str()]] = hmap[b.as_str()];
            iota[hmap[b.as_str()]] = hmap[a.as_str()];
        }
        let mut sigma1: Vec<usize> = (0..raw.strands.len()).collect();
        for (a, b) in &raw.sigma1 {
            sigma1[smap[a.as_str()]] = smap[b.as_str()];
            sigma1[smap[b.as_str()]] = smap[a.as_str()];
        }
        let mut sigma2: Vec<usize> = (0..raw.strands.len()).collect();
        for (a, b) in &raw.sigma2 {
            sigma2[smap[a.as_str()]] = smap[b.as_str()];
            sigma2[smap[b.as_str()]] = smap[a.as_str()];
        }
        Ok(TwoGraph {
            vertices: raw.vertices.clone(),
            half_edges: raw.half_edges.iter().map(|h| h.0.clone()).collect(),
            strands: raw.strands.iter().map(|s| s.id.clone()).collect(),
            nu: raw.half_edges.iter().map(|h| vmap[h.1.as_str()]).collect(),
            mu: raw.strands.iter().map(|s| hmap[s.half_edge.as_str()]).collect(),
            iota,
            sigma1,
            sigma2,
            colour: raw.strands.iter().map(|s| s.colour).collect(),
        })
    }

    /// Index-level constructor for internal use; the caller guarantees validity.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        vertices: Vec<String>,
        half_edges: Vec<String>,
        strands: Vec<String>,
        nu: Vec<usize>,
        mu: Vec<usize>,
        iota: Vec<usize>,
        sigma1: Vec<usize>,
        sigma2: Vec<usize>,
        colour: Vec<u32>,
    ) -> Self {
        let g = TwoGraph { vertices, half_edges, strands, nu, mu, iota, sigma1, sigma2, colour };
        debug_assert!(g.indices_consistent(), "from_parts built an invalid 2-graph");
        g
    }

    /// Cheap index-level form of the axioms, used by debug assertions.
    fn indices_consistent(&self) -> bool {
        let (nv, nh) = (self.vertices.len(), self.half_edges.len());
        self.nu.len() == nh
            && self.iota.len() == nh
            && self.nu.iter().all(|&v| v < nv)
            && self.mu.iter().all(|&h| h < nh)
            && is_involution(&self.iota)
            && is_involution(&self.sigma1)
            && is_involution(&self.sigma2)
            && (0..self.strands.len()).all(|s| {
                let t = self.sigma1[s];
                let u = self.sigma2[s];
                t != s
                    && self.nu[self.mu[t]] == self.nu[self.mu[s]]
                    && (u == s || (self.mu[u] == self.iota[self.mu[s]] && self.mu[u] != self.mu[s]))
            })
    }

    /// Index-level constructor that validates.
    #[allow(clippy::too_many_arguments)]
    pub fn from_indices(
        vertices: Vec<String>,
        half_edges: Vec<String>,
        strands: Vec<String>,
        nu: Vec<usize>,
        mu: Vec<usize>,
        iota: Vec<usize>,
        sigma1: Vec<usize>,
        sigma2: Vec<usize>,
        colour: Vec<u32>,
    ) -> GraphResult<Self> {
        let lens_ok = nu.len() == half_edges.len()
            && iota.len() == half_edges.len()
            && mu.len() == strands.len()
            && sigma1.len() == strands.len()
            && sigma2.len() == strands.len()
            && colour.len() == strands.len()
            && nu.iter().all(|&v| v < vertices.len())
            && mu.iter().all(|&h| h < half_edges.len())
            && is_involution(&iota)
            && is_involution(&sigma1)
            && is_involution(&sigma2);
        if !lens_ok {
            return Err(GraphError::Invalid("inconsistent index arrays".into()));
        }
        let g = TwoGraph { vertices, half_edges, strands, nu, mu, iota, sigma1, sigma2, colour };
        TwoGraph::from_raw(&g.to_raw())?;
        Ok(g)
    }

    /// Label-level view (fixed points omitted from pair lists).
    pub fn to_raw(&self) -> RawTwoGraph {
        let pairs = |p: &[usize], labels: &[String]| -> Vec<(String, String)> {
            (0..p.len()).filter(|&x| p[x] > x).map(|x| (labels[x].clone(), labels[p[x]].clone())).collect()
        };
        RawTwoGraph {
            vertices: self.vertices.clone(),
            half_edges: self
                .half_edges
                .iter()
                .zip(&self.nu)
                .map(|(h, &v)| (h.clone(), self.vertices[v].clone()))
                .collect(),
            strands: self
                .strands
                .iter()
                .zip(&self.mu)
                .zip(&self.colour)
                .map(|((s, &h), &c)| RawStrand { id: s.clone(), half_edge: self.half_edges[h].clone(), colour: c })
                .collect(),
            iota: pairs(&self.iota, &self.half_edges),
            sigma1: pairs(&self.sigma1, &self.strands),
            sigma2: pairs(&self.sigma2, &self.strands),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn half_edges(&self) -> &[String] {
        &self.half_edges
    }
    pub fn strands(&self) -> &[String] {
        &self.strands
    }
    pub fn nu(&self) -> &[usize] {
        &self.nu
    }
    pub fn mu(&self) -> &[usize] {
        &self.mu
    }
    pub fn iota(&self) -> &[usize] {
        &self.iota
    }
    pub fn sigma1(&self) -> &[usize] {
        &self.sigma1
    }
    pub fn sigma2(&self) -> &[usize] {
        &self.sigma2
    }
    pub fn colours(&self) -> &[u32] {
        &self.colour
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_half_edges(&self) -> usize {
        self.half_edges.len()
    }
    pub fn num_strands(&self) -> usize {
        self.strands.len()
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }
    pub fn half_edge_index(&self, label: &str) -> Option<usize> {
        self.half_edges.iter().position(|h| h == label)
    }
    pub fn strand_index(&self, label: &str) -> Option<usize> {
        self.strands.iter().position(|s| s == label)
    }

    /// Internal edges as `(h, iota(h))` with `h < iota(h)`, ordered by `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.iota.len()).filter(|&h| self.iota[h] > h).map(|h| (h, self.iota[h])).collect()
    }

    pub fn num_edges(&self) -> usize {
        self.iota.iter().enumerate().filter(|&(h, &j)| j > h).count()
    }

    pub fn external_half_edges(&self) -> Vec<usize> {
        (0..self.iota.len()).filter(|&h| self.iota[h] == h).collect()
    }

    pub fn external_strands(&self) -> Vec<usize> {
        (0..self.sigma2.len()).filter(|&s| self.sigma2[s] == s).collect()
    }

    /// Strand indices attached to each half-edge, in index order.
    pub fn strands_by_half_edge(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.half_edges.len()];
        for (s, &h) in self.mu.iter().enumerate() {
            out[h].push(s);
        }
        out
    }

    /// Half-edge indices attached to each vertex, in index order.
    pub fn half_edges_by_vertex(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (h, &v) in self.nu.iter().enumerate() {
            out[v].push(h);
        }
        out
    }

    /// Number of strands at half-edge `h` (d^h).
    pub fn half_edge_degree(&self, h: usize) -> usize {
        self.mu.iter().filter(|&&x| x == h).count()
    }

    pub fn is_edgeless(&self) -> bool {
        self.iota.iter().enumerate().all(|(h, &j)| h == j)
    }

    pub fn is_closed(&self) -> bool {
        self.iota.iter().enumerate().all(|(h, &j)| h != j)
    }

    /// Vertex graph of vertex `v`: half-edges become vertices, strands become
    /// half-edges paired by sigma1.
    pub fn vertex_graph(&self, v: usize) -> OneGraph {
        let hs: Vec<usize> = (0..self.nu.len()).filter(|&h| self.nu[h] == v).collect();
        let mut hpos = vec![usize::MAX; self.nu.len()];
        for (i, &h) in hs.iter().enumerate() {
            hpos[h] = i;
        }
        let ss: Vec<usize> = (0..self.mu.len()).filter(|&s| self.nu[self.mu[s]] == v).collect();
        let mut spos = vec![usize::MAX; self.mu.len()];
        for (i, &s) in ss.iter().enumerate() {
            spos[s] = i;
        }
        OneGraph::from_parts(
            hs.iter().map(|&h| self.half_edges[h].clone()).collect(),
            ss.iter().map(|&s| self.strands[s].clone()).collect(),
            ss.iter().map(|&s| hpos[self.mu[s]]).collect(),
            ss.iter().map(|&s| spos[self.sigma1[s]]).collect(),
            ss.iter().map(|&s| self.colour[s]).collect(),
        )
    }

    /// Vertex graph by label.
    pub fn vertex_graph_by_label(&self, v: &str) -> GraphResult<OneGraph> {
        let i = self.vertex_index(v).ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        Ok(self.vertex_graph(i))
    }

    /// One vertex graph per vertex, in vertex order.
    pub fn vertex_graphs_multiset(&self) -> Vec<OneGraph> {
        (0..self.vertices.len()).map(|v| self.vertex_graph(v)).collect()
    }

    /// Disjoint union of all vertex graphs (grouping by vertex is lost).
    pub fn vertex_graphs_union(&self) -> OneGraph {
        OneGraph::disjoint_union(&self.vertex_graphs_multiset())
    }

    /// Edge graph of the edge containing `h`: two vertices joined by one edge
    /// per strand pair, coloured as the strands.
    pub fn edge_graph(&self, h: usize) -> OneGraph {
        let j = self.iota[h];
        let by_he = self.strands_by_half_edge();
        let mut half_edges = Vec::new();
        let mut attach = Vec::new();
        let mut colour = Vec::new();
        let mut pairing = Vec::new();
        for (k, &s) in by_he[h].iter().enumerate() {
            let t = self.sigma2[s];
            half_edges.push(format!("a{k}"));
            half_edges.push(format!("b{k}"));
            attach.push(0);
            attach.push(1);
            colour.push(self.colour[s]);
            colour.push(self.colour[t]);
            let base = pairing.len();
            pairing.push(base + 1);
            pairing.push(base);
        }
        let _ = j;
        OneGraph::from_parts(vec!["a".into(), "b".into()], half_edges, attach, pairing, colour)
    }

    /// Internal faces and external faces.
    pub fn faces(&self) -> (Vec<Face>, Vec<Face>) {
        let n = self.strands.len();
        let mut visited = vec![false; n];
        let mut external = Vec::new();
        for s in 0..n {
            if self.sigma2[s] != s || visited[s] {
                continue;
            }
            let mut seq = Vec::new();
            let mut cur = s;
            loop {
                seq.push(cur);
                let t = self.sigma1[cur];
                seq.push(t);
                if self.sigma2[t] == t {
                    break;
                }
                cur = self.sigma2[t];
            }
            for &x in &seq {
                visited[x] = true;
            }
            if self.strands[*seq.last().unwrap()] < self.strands[seq[0]] {
                seq.reverse();
            }
            external.push(Face { kind: FaceKind::External, sections: seq });
        }
        let mut internal = Vec::new();
        for s in 0..n {
            if visited[s] {
                continue;
            }
            let mut seq = Vec::new();
            let mut cur = s;
            loop {
                seq.push(cur);
                let t = self.sigma1[cur];
                seq.push(t);
                visited[cur] = true;
                visited[t] = true;
                cur = self.sigma2[t];
                if cur == s {
                    break;
                }
            }
            internal.push(Face { kind: FaceKind::Internal, sections: self.canonical_cycle(&seq) });
        }
        let key = |f: &Face| -> Vec<String> { f.sections.iter().map(|&x| self.strands[x].clone()).collect() };
        internal.sort_by_key(key);
        external.sort_by_key(key);
        (internal, external)
    }

    /// Least representative of an internal face under rotations by two and reversal.
    fn canonical_cycle(&self, seq: &[usize]) -> Vec<usize> {
        let len = seq.len();
        let mut best: Option<Vec<usize>> = None;
        let lab = |v: &Vec<usize>| -> Vec<&String> { v.iter().map(|&x| &self.strands[x]).collect() };
        let mut consider = |cand: Vec<usize>| {
            let better = match &best {
                None => true,
                Some(b) => lab(&cand) < lab(b),
            };
            if better {
                best = Some(cand);
            }
        };
        for start in (0..len).step_by(2) {
            consider((0..len).map(|k| seq[(start + k) % len]).collect());
        }
        // Reverse traversal: s_{2n}, s_{2n-1}, ..., s_1 also starts with a sigma1 step.
        let rev: Vec<usize> = seq.iter().rev().copied().collect();
        for start in (0..len).step_by(2) {
            consider((0..len).map(|k| rev[(start + k) % len]).collect());
        }
        best.unwrap_or_default()
    }

    pub fn num_internal_faces(&self) -> usize {
        self.faces().0.len()
    }

    /// Skeleton: all internal edges removed, everything else kept.
    pub fn skeleton(&self) -> TwoGraph {
        let mut g = self.clone();
        g.iota = (0..g.iota.len()).collect();
        g.sigma2 = (0..g.sigma2.len()).collect();
        g
    }

    /// Materializes the subgraph keeping only the edges flagged in `keep`
    /// (indexed like [`TwoGraph::edges`]).
    pub fn edge_subgraph(&self, keep: &[bool]) -> TwoGraph {
        let edges = self.edges();
        assert_eq!(keep.len(), edges.len(), "edge mask length mismatch");
        let mut g = self.clone();
        for (k, &(a, b)) in edges.iter().enumerate() {
            if !keep[k] {
                g.iota[a] = a;
                g.iota[b] = b;
            }
        }
        for s in 0..g.sigma2.len() {
            if g.iota[g.mu[s]] == g.mu[s] {
                g.sigma2[s] = s;
            }
        }
        g
    }

    /// Contraction by the edge subset flagged in `keep` (indexed like
    /// [`TwoGraph::edges`]). Each connected piece of the subgraph becomes one
    /// vertex, labelled by its first vertex.
    pub fn contract_edge_mask(&self, keep: &[bool]) -> TwoGraph {
        let edges = self.edges();
        assert_eq!(keep.len(), edges.len(), "edge mask length mismatch");
        let mut uf = UnionFind::new(self.vertices.len());
        let mut contracted = vec![false; self.half_edges.len()];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if keep[k] {
                uf.union(self.nu[a], self.nu[b]);
                contracted[a] = true;
                contracted[b] = true;
            }
        }
        let groups = uf.groups();
        let mut new_vertex = vec![0usize; self.vertices.len()];
        for (i, grp) in groups.iter().enumerate() {
            for &v in grp {
                new_vertex[v] = i;
            }
        }
        let vertices: Vec<String> = groups.iter().map(|g| self.vertices[g[0]].clone()).collect();
        let hs: Vec<usize> = (0..self.half_edges.len()).filter(|&h| !contracted[h]).collect();
        let mut hpos = vec![usize::MAX; self.half_edges.len()];
        for (i, &h) in hs.iter().enumerate() {
            hpos[h] = i;
        }
        let ss: Vec<usize> = (0..self.strands.len()).filter(|&s| !contracted[self.mu[s]]).collect();
        let mut spos = vec![usize::MAX; self.strands.len()];
        for (i, &s) in ss.iter().enumerate() {
            spos[s] = i;
        }
        let sigma1: Vec<usize> = ss
            .iter()
            .map(|&s| {
                let mut t = self.sigma1[s];
                while contracted[self.mu[t]] {
                    t = self.sigma1[self.sigma2[t]];
                }
                spos[t]
            })
            .collect();
        TwoGraph::from_parts(
            vertices,
            hs.iter().map(|&h| self.half_edges[h].clone()).collect(),
            ss.iter().map(|&s| self.strands[s].clone()).collect(),
            hs.iter().map(|&h| new_vertex[self.nu[h]]).collect(),
            ss.iter().map(|&s| hpos[self.mu[s]]).collect(),
            hs.iter().map(|&h| hpos[self.iota[h]]).collect(),
            sigma1,
            ss.iter().map(|&s| spos[self.sigma2[s]]).collect(),
            ss.iter().map(|&s| self.colour[s]).collect(),
        )
    }

    /// Contraction of all edges: one vertex per connected component.
    pub fn residue(&self) -> TwoGraph {
        self.contract_edge_mask(&vec![true; self.num_edges()])
    }

    /// Boundary: disjoint union of the vertex graphs of the residue.
    pub fn boundary(&self) -> OneGraph {
        self.residue().vertex_graphs_union()
    }

    /// Boundary grouped by connected component.
    pub fn boundary_components(&self) -> Vec<OneGraph> {
        self.residue().vertex_graphs_multiset()
    }

    /// Connected components as vertex index sets, ordered by first vertex.
    pub fn component_vertex_sets(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertices.len());
        for (a, b) in self.edges() {
            uf.union(self.nu[a], self.nu[b]);
        }
        uf.groups()
    }

    pub fn num_components(&self) -> usize {
        self.component_vertex_sets().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// Sub-2-graph induced on a set of vertices that is a union of components.
    pub fn induced(&self, vs: &[usize]) -> TwoGraph {
        let mut vpos = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in vs.iter().enumerate() {
            vpos[v] = i;
        }
        let hs: Vec<usize> = (0..self.half_edges.len()).filter(|&h| vpos[self.nu[h]] != usize::MAX).collect();
        let mut hpos = vec![usize::MAX; self.half_edges.len()];
        for (i, &h) in hs.iter().enumerate() {
            hpos[h] = i;
        }
        let ss: Vec<usize> = (0..self.strands.len()).filter(|&s| hpos[self.mu[s]] != usize::MAX).collect();
        let mut spos = vec![usize::MAX; self.strands.len()];
        for (i, &s) in ss.iter().enumerate() {
            spos[s] = i;
        }
        TwoGraph::from_parts(
            vs.iter().map(|&v| self.vertices[v].clone()).collect(),
            hs.iter().map(|&h| self.half_edges[h].clone()).collect(),
            ss.iter().map(|&s| self.strands[s].clone()).collect(),
            hs.iter().map(|&h| vpos[self.nu[h]]).collect(),
            ss.iter().map(|&s| hpos[self.mu[s]]).collect(),
            hs.iter().map(|&h| hpos[self.iota[h]]).collect(),
            ss.iter().map(|&s| spos[self.sigma1[s]]).collect(),
            ss.iter().map(|&s| spos[self.sigma2[s]]).collect(),
            ss.iter().map(|&s| self.colour[s]).collect(),
        )
    }

    pub fn connected_components(&self) -> Vec<TwoGraph> {
        self.component_vertex_sets().into_iter().map(|vs| self.induced(&vs)).collect()
    }

    /// Disjoint union; labels must be distinct across parts.
    pub fn disjoint_union(parts: &[TwoGraph]) -> TwoGraph {
        let mut out = TwoGraph::default();
        for g in parts {
            let vo = out.vertices.len();
            let ho = out.half_edges.len();
            let so = out.strands.len();
            out.vertices.extend(g.vertices.iter().cloned());
            out.half_edges.extend(g.half_edges.iter().cloned());
            out.strands.extend(g.strands.iter().cloned());
            out.nu.extend(g.nu.iter().map(|&v| v + vo));
            out.mu.extend(g.mu.iter().map(|&h| h + ho));
            out.iota.extend(g.iota.iter().map(|&h| h + ho));
            out.sigma1.extend(g.sigma1.iter().map(|&s| s + so));
            out.sigma2.extend(g.sigma2.iter().map(|&s| s + so));
            out.colour.extend(g.colour.iter().copied());
        }
        out
    }

    /// Same structure with every label prefixed.
    pub fn with_prefix(&self, prefix: &str) -> TwoGraph {
        let mut g = self.clone();
        for l in g.vertices.iter_mut().chain(g.half_edges.iter_mut()).chain(g.strands.iter_mut()) {
            *l = format!("{prefix}{l}");
        }
        g
    }

    /// Same structure with new labels (given in index order).
    pub fn relabelled(&self, vertices: Vec<String>, half_edges: Vec<String>, strands: Vec<String>) -> TwoGraph {
        assert_eq!(vertices.len(), self.vertices.len());
        assert_eq!(half_edges.len(), self.half_edges.len());
        assert_eq!(strands.len(), self.strands.len());
        let mut g = self.clone();
        g.vertices = vertices;
        g.half_edges = half_edges;
        g.strands = strands;
        g
    }

    /// Relabels by permutations: element `i` moves to position `p[i]`.
    pub fn permuted(&self, pv: &[usize], ph: &[usize], ps: &[usize]) -> TwoGraph {
        let place = |labels: &[String], p: &[usize]| -> Vec<String> {
            let mut out = vec![String::new(); labels.len()];
            for (i, l) in labels.iter().enumerate() {
                out[p[i]] = l.clone();
            }
            out
        };
        let mut nu = vec![0; self.nu.len()];
        let mut iota = vec![0; self.iota.len()];
        for h in 0..self.nu.len() {
            nu[ph[h]] = pv[self.nu[h]];
            iota[ph[h]] = ph[self.iota[h]];
        }
        let mut mu = vec![0; self.mu.len()];
        let mut s1 = vec![0; self.mu.len()];
        let mut s2 = vec![0; self.mu.len()];
        let mut col = vec![0; self.mu.len()];
        for s in 0..self.mu.len() {
            mu[ps[s]] = ph[self.mu[s]];
            s1[ps[s]] = ps[self.sigma1[s]];
            s2[ps[s]] = ps[self.sigma2[s]];
            col[ps[s]] = self.colour[s];
        }
        TwoGraph {
            vertices: place(&self.vertices, pv),
            half_edges: place(&self.half_edges, ph),
            strands: place(&self.strands, ps),
            nu,
            mu,
            iota,
            sigma1: s1,
            sigma2: s2,
            colour: col,
        }
    }

    /// True if no internal edge disconnects its component when removed.
    pub fn is_bridgeless(&self) -> bool {
        let edges = self.edges();
        let base = self.num_components();
        (0..edges.len()).all(|k| {
            let mut uf = UnionFind::new(self.vertices.len());
            for (j, &(a, b)) in edges.iter().enumerate() {
                if j != k {
                    uf.union(self.nu[a], self.nu[b]);
                }
            }
            uf.groups().len() == base
        })
    }

    /// V - E + F with F the number of internal faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_internal_faces() as i64
    }

    /// Cell complex with vertices, internal and external edges, and all faces.
    pub fn to_complex(&self) -> CellComplex {
        let (internal, external) = self.faces();
        let faces: Vec<Face> = internal.into_iter().chain(external).collect();
        let mut cells = Vec::new();
        let mut vcell = vec![0usize; self.vertices.len()];
        for v in 0..self.vertices.len() {
            vcell[v] = cells.len();
            cells.push(Cell::Vertex(v));
        }
        let mut hcell = vec![0usize; self.half_edges.len()];
        for h in 0..self.half_edges.len() {
            let j = self.iota[h];
            if j == h {
                hcell[h] = cells.len();
                cells.push(Cell::ExternalEdge(h));
            } else if h < j {
                hcell[h] = cells.len();
                hcell[j] = cells.len();
                cells.push(Cell::Edge(h));
            }
        }
        let mut fcell = Vec::with_capacity(faces.len());
        for f in 0..faces.len() {
            fcell.push(cells.len());
            cells.push(Cell::Face(f));
        }
        let mut order: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
        for h in 0..self.half_edges.len() {
            order.insert((vcell[self.nu[h]], hcell[h]));
        }
        let mut ef: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
        for (fi, f) in faces.iter().enumerate() {
            for &s in &f.sections {
                ef.insert((hcell[self.mu[s]], fcell[fi]));
            }
        }
        let ve: Vec<(usize, usize)> = order.iter().copied().collect();
        for &(e, f) in &ef {
            order.insert((e, f));
            for &(v, e2) in &ve {
                if e2 == e {
                    order.insert((v, f));
                }
            }
        }
        let order: Vec<(usize, usize)> = order.into_iter().collect();
        let below = |c: usize, dim: u8| order.iter().any(|&(a, b)| b == c && cells[a].dim() == dim);
        let above = |c: usize| order.iter().any(|&(a, b)| a == c && cells[b].dim() == 2);
        let pure = (0..cells.len()).all(|c| cells[c].dim() == 0 || below(c, 0));
        let two_dimensional = (0..cells.len()).all(|c| cells[c].dim() == 2 || above(c));
        let rel: HashSet<(usize, usize)> = order.iter().copied().collect();
        let intermediate_property = order.iter().all(|&(a, b)| {
            cells[b].dim() - cells[a].dim() < 2
                || (0..cells.len()).any(|m| cells[m].dim() == 1 && rel.contains(&(a, m)) && rel.contains(&(m, b)))
        });
        CellComplex { cells, order, pure, two_dimensional, intermediate_property }
    }

    /// Rank `r` if this is an r-coloured 2-graph: every strand has a colour in
    /// `1..=r`, each half-edge carries each colour exactly once, and sigma1,
    /// sigma2 preserve colours.
    pub fn coloured_rank(&self) -> Option<u32> {
        if self.strands.is_empty() {
            return None;
        }
        let r = *self.colour.iter().max()?;
        if r == 0 || self.colour.contains(&0) {
            return None;
        }
        for ss in self.strands_by_half_edge() {
            let mut cs: Vec<u32> = ss.iter().map(|&s| self.colour[s]).collect();
            cs.sort_unstable();
            if cs != (1..=r).collect::<Vec<_>>() {
                return None;
            }
        }
        let ok = (0..self.strands.len())
            .all(|s| self.colour[self.sigma1[s]] == self.colour[s] && self.colour[self.sigma2[s]] == self.colour[s]);
        ok.then_some(r)
    }

    /// Single edgeless vertex whose vertex graph is `g` (which must have no legs).
    pub fn corolla(label: &str, g: &OneGraph) -> GraphResult<TwoGraph> {
        if !g.external_legs().is_empty() {
            return Err(GraphError::Invalid("a vertex graph cannot have external legs".into()));
        }
        let nh = g.num_vertices();
        let ns = g.num_half_edges();
        Ok(TwoGraph::from_parts(
            vec![label.to_string()],
            g.vertices().to_vec(),
            g.half_edges().to_vec(),
            vec![0; nh],
            g.attach().to_vec(),
            (0..nh).collect(),
            g.pairing().to_vec(),
            (0..ns).collect(),
            g.colours().to_vec(),
        ))
    }

    /// Glues the free half-edges `a` and `b` into an edge, pairing strands by
    /// `pairs` (a bijection between their strand sets).
    pub(crate) fn with_edge(&self, a: usize, b: usize, pairs: &[(usize, usize)]) -> TwoGraph {
        let mut g = self.clone();
        g.iota[a] = b;
        g.iota[b] = a;
        for &(s, t) in pairs {
            g.sigma2[s] = t;
            g.sigma2[t] = s;
        }
        g
    }

    /// True if every half-edge carries exactly two strands (combinatorial map class).
    pub fn is_map_class(&self) -> bool {
        self.strands_by_half_edge().iter().all(|s| s.len() == 2)
    }
}

impl fmt::Display for TwoGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TwoGraph(V={}, E={}, ext={}, S={})",
            self.num_vertices(),
            self.num_edges(),
            self.external_half_edges().len(),
            self.num_strands()
        )
    }
}

// ---------------------------------------------------------------------------
// conversions
// ---------------------------------------------------------------------------

/// A combinatorial map: permutation `sigma` (vertices are its cycles) and
/// involution `iota` on a labelled set of half-edges.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CombinatorialMap {
    pub labels: Vec<String>,
    pub sigma: Vec<usize>,
    pub iota: Vec<usize>,
}

impl CombinatorialMap {
    /// Parses cycle notation such as `"(1)(2 3 4)(5 7 6)"` over the labels
    /// appearing in `sigma`; `iota` cycles must have length one or two.
    pub fn parse_cycles(sigma: &str, iota: &str) -> GraphResult<Self> {
        let parse = |text: &str| -> GraphResult<Vec<Vec<String>>> {
            let mut cycles = Vec::new();
            let mut rest = text.trim();
            while !rest.is_empty() {
                let open =
                    rest.find('(').ok_or_else(|| GraphError::SigmaNotBijection(format!("cannot parse `{text}`")))?;
                let close =
                    rest.find(')').ok_or_else(|| GraphError::SigmaNotBijection(format!("cannot parse `{text}`")))?;
                if close < open {
                    return Err(GraphError::SigmaNotBijection(format!("cannot parse `{text}`")));
                }
                let inner = &rest[open + 1..close];
                let elems: Vec<String> = inner
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|x| !x.is_empty())
                    .map(str::to_string)
                    .collect();
                cycles.push(elems);
                rest = rest[close + 1..].trim();
            }
            Ok(cycles)
        };
        let scycles = parse(sigma)?;
        let mut labels: Vec<String> = Vec::new();
        let mut index = HashMap::new();
        for c in &scycles {
            for l in c {
                if index.insert(l.clone(), labels.len()).is_some() {
                    return Err(GraphError::SigmaNotBijection(format!("`{l}` appears twice")));
                }
                labels.push(l.clone());
            }
        }
        let n = labels.len();
        let mut sig = vec![usize::MAX; n];
        for c in &scycles {
            for (k, l) in c.iter().enumerate() {
                sig[index[l]] = index[&c[(k + 1) % c.len()]];
            }
        }
        let mut io: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for c in parse(iota)? {
            if c.is_empty() || c.len() > 2 {
                return Err(GraphError::IotaNotInvolution(format!("cycle of length {}", c.len())));
            }
            let mut idx = Vec::new();
            for l in &c {
                let i =
                    *index.get(l).ok_or_else(|| GraphError::IotaNotInvolution(format!("unknown half-edge `{l}`")))?;
                if seen[i] {
                    return Err(GraphError::IotaNotInvolution(format!("`{l}` appears twice")));
                }
                seen[i] = true;
                idx.push(i);
            }
            if idx.len() == 2 {
                io[idx[0]] = idx[1];
                io[idx[1]] = idx[0];
            }
        }
        CombinatorialMap::new(labels, sig, io)
    }

    pub fn new(labels: Vec<String>, sigma: Vec<usize>, iota: Vec<usize>) -> GraphResult<Self> {
        let n = labels.len();
        if sigma.len() != n || sigma.iter().any(|&x| x >= n) {
            return Err(GraphError::SigmaNotBijection("sigma has wrong length or range".into()));
        }
        let mut hit = vec![false; n];
        for &x in &sigma {
            if hit[x] {
                return Err(GraphError::SigmaNotBijection("sigma is not injective".into()));
            }
            hit[x] = true;
        }
        if iota.len() != n || !is_involution(&iota) {
            return Err(GraphError::IotaNotInvolution("iota does not square to the identity".into()));
        }
        Ok(CombinatorialMap { labels, sigma, iota })
    }

    /// Cycles of sigma, each starting from its first element in label order.
    pub fn sigma_cycles(&self) -> Vec<Vec<usize>> {
        perm_cycles(&self.sigma)
    }

    /// Number of cycles of sigma composed with iota.
    pub fn face_count(&self) -> usize {
        let comp: Vec<usize> = (0..self.sigma.len()).map(|h| self.sigma[self.iota[h]]).collect();
        perm_cycles(&comp).len()
    }

    /// The 2-graph of the map; strands at `h` are `s:h:1` towards `sigma(h)`
    /// and `s:h:0` towards the predecessor.
    pub fn to_two_graph(&self) -> TwoGraph {
        let n = self.labels.len();
        let cycles = self.sigma_cycles();
        let mut vertex_of = vec![0usize; n];
        let mut vertices = Vec::new();
        for (i, c) in cycles.iter().enumerate() {
            for &h in c {
                vertex_of[h] = i;
            }
            vertices.push(format!("v:{}", self.labels[c[0]]));
        }
        let mut strands = Vec::with_capacity(2 * n);
        let mut mu = Vec::with_capacity(2 * n);
        for h in 0..n {
            strands.push(format!("s:{}:0", self.labels[h]));
            strands.push(format!("s:{}:1", self.labels[h]));
            mu.push(h);
            mu.push(h);
        }
        let prev = |h: usize| 2 * h;
        let next = |h: usize| 2 * h + 1;
        let mut sigma1 = vec![0usize; 2 * n];
        for h in 0..n {
            let k = self.sigma[h];
            sigma1[next(h)] = prev(k);
            sigma1[prev(k)] = next(h);
        }
        let mut sigma2: Vec<usize> = (0..2 * n).collect();
        for h in 0..n {
            let j = self.iota[h];
            if j != h {
                sigma2[next(h)] = prev(j);
                sigma2[prev(j)] = next(h);
            }
        }
        TwoGraph::from_parts(
            vertices,
            self.labels.clone(),
            strands,
            vertex_of,
            mu,
            self.iota.clone(),
            sigma1,
            sigma2,
            vec![0; 2 * n],
        )
    }
}

/// Builds the 2-graph of a combinatorial map given as index permutations.
pub fn from_combinatorial_map(labels: Vec<String>, sigma: Vec<usize>, iota: Vec<usize>) -> GraphResult<TwoGraph> {
    Ok(CombinatorialMap::new(labels, sigma, iota)?.to_two_graph())
}

/// Orientation of a map-class 2-graph: for every half-edge, the strand that
/// points to the next half-edge of its trace. Each trace (cycle of a vertex
/// graph) is oriented independently; `None` if no consistent choice exists
/// along the edges, or the graph is not map-class.
pub fn trace_orientation(g: &TwoGraph) -> Option<Vec<usize>> {
    if !g.is_map_class() {
        return None;
    }
    let n = g.num_half_edges();
    let by_he = g.strands_by_half_edge();
    let other = |h: usize, s: usize| if by_he[h][0] == s { by_he[h][1] } else { by_he[h][0] };
    let mut next_strand: Vec<Option<usize>> = vec![None; n];
    // orients the whole trace through `start`; returns the half-edges newly set
    let orient = |start: usize, s_next: usize, next_strand: &mut Vec<Option<usize>>| -> Option<Vec<usize>> {
        let mut fresh = Vec::new();
        let mut h = start;
        let mut sn = s_next;
        loop {
            match next_strand[h] {
                Some(x) if x == sn => return Some(fresh),
                Some(_) => return None,
                None => {
                    next_strand[h] = Some(sn);
                    fresh.push(h);
                }
            }
            let t = g.sigma1()[sn];
            let k = g.mu()[t];
            sn = other(k, t);
            h = k;
        }
    };
    for start in 0..n {
        if next_strand[start].is_some() {
            continue;
        }
        let mut queue: std::collections::VecDeque<usize> = orient(start, by_he[start][1], &mut next_strand)?.into();
        while let Some(h) = queue.pop_front() {
            let j = g.iota()[h];
            if j == h {
                continue;
            }
            let sn = next_strand[h].expect("oriented");
            let back_j = g.sigma2()[sn];
            let fresh = orient(j, other(j, back_j), &mut next_strand)?;
            queue.extend(fresh);
        }
    }
    Some(next_strand.into_iter().map(|x| x.expect("all oriented")).collect())
}

/// True for map-class 2-graphs admitting a consistent orientation of all traces.
pub fn is_orientable(g: &TwoGraph) -> bool {
    trace_orientation(g).is_some()
}

/// True if the graph on half-edges whose edges are the sigma1 pairs and the
/// iota pairs is bipartite (for coloured 2-graphs: the coloured graph is bipartite).
pub fn is_bipartite(g: &TwoGraph) -> bool {
    let n = g.num_half_edges();
    let mut adj = vec![Vec::new(); n];
    for s in 0..g.num_strands() {
        adj[g.mu()[s]].push(g.mu()[g.sigma1()[s]]);
    }
    for h in 0..n {
        if g.iota()[h] != h {
            adj[h].push(g.iota()[h]);
        }
    }
    let mut side = vec![u8::MAX; n];
    for start in 0..n {
        if side[start] != u8::MAX {
            continue;
        }
        side[start] = 0;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if side[y] == u8::MAX {
                    side[y] = 1 - side[x];
                    stack.push(y);
                } else if side[y] == side[x] {
                    return false;
                }
            }
        }
    }
    true
}

/// Reads an oriented combinatorial map back from a map-class 2-graph whose
/// vertex graphs are single cycles. Fails for non-orientable gluings.
pub fn to_combinatorial_map(g: &TwoGraph) -> GraphResult<CombinatorialMap> {
    if !g.is_map_class() {
        return Err(GraphError::NotAMap("some half-edge does not carry exactly two strands".into()));
    }
    for v in 0..g.num_vertices() {
        let vg = g.vertex_graph(v);
        if vg.num_vertices() == 0 || !vg.is_connected() {
            return Err(GraphError::NotAMap(format!("vertex `{}` is not a single polygon", g.vertices()[v])));
        }
    }
    let next = trace_orientation(g).ok_or_else(|| GraphError::NotAMap("gluing is not orientable".into()))?;
    let sigma: Vec<usize> = (0..g.num_half_edges()).map(|h| g.mu()[g.sigma1()[next[h]]]).collect();
    CombinatorialMap::new(g.half_edges().to_vec(), sigma, g.iota().to_vec())
}

/// Cycles of a permutation, each starting at its smallest element, ordered by it.
pub fn perm_cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = i;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = p[x];
        }
        out.push(c);
    }
    out
}

/// An edge-coloured graph with colours `0..=rank`; colour-0 edges become
/// stranded edges, and `legs` lists nodes carrying an external colour-0 leg.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ColouredGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize, u32)>,
    pub legs: Vec<usize>,
    pub rank: u32,
}

impl ColouredGraph {
    /// Checks regularity and properness.
    pub fn check(&self) -> GraphResult<()> {
        let r = self.rank as usize;
        let mut seen = vec![vec![0u32; r + 1]; self.nodes.len()];
        for &(a, b, c) in &self.edges {
            if a >= self.nodes.len() || b >= self.nodes.len() || c as usize > r {
                return Err(GraphError::ImproperColouring(format!("edge ({a},{b}) colour {c} out of range")));
            }
            if a == b {
                return Err(GraphError::ImproperColouring(format!("loop at `{}`", self.nodes[a])));
            }
            seen[a][c as usize] += 1;
            seen[b][c as usize] += 1;
        }
        for &n in &self.legs {
            if n >= self.nodes.len() {
                return Err(GraphError::ImproperColouring("leg at unknown node".into()));
            }
            seen[n][0] += 1;
        }
        for (n, counts) in seen.iter().enumerate() {
            if counts.iter().any(|&k| k > 1) {
                return Err(GraphError::ImproperColouring(format!("node `{}` has a repeated colour", self.nodes[n])));
            }
            if counts.contains(&0) {
                return Err(GraphError::DegreeMismatch(format!(
                    "node `{}` does not have degree {}",
                    self.nodes[n],
                    r + 1
                )));
            }
        }
        Ok(())
    }

    /// The coloured 2-graph: vertices are the components after deleting
    /// colour-0 edges, half-edges are the nodes, and strand `node:c` carries colour `c`.
    pub fn to_two_graph(&self) -> GraphResult<TwoGraph> {
        self.check()?;
        let r = self.rank as usize;
        let n = self.nodes.len();
        let mut uf = UnionFind::new(n);
        for &(a, b, c) in &self.edges {
            if c != 0 {
                uf.union(a, b);
            }
        }
        let groups = uf.groups();
        let mut vertex_of = vec![0usize; n];
        for (i, grp) in groups.iter().enumerate() {
            for &x in grp {
                vertex_of[x] = i;
            }
        }
        let vertices: Vec<String> = (0..groups.len()).map(|i| format!("v{i}")).collect();
        let strand = |node: usize, c: usize| node * r + (c - 1);
        let mut strands = Vec::with_capacity(n * r);
        let mut mu = Vec::with_capacity(n * r);
        let mut colour = Vec::with_capacity(n * r);
        for node in 0..n {
            for c in 1..=r {
                strands.push(format!("{}:{c}", self.nodes[node]));
                mu.push(node);
                colour.push(c as u32);
            }
        }
        let mut iota: Vec<usize> = (0..n).collect();
        let mut sigma1: Vec<usize> = (0..n * r).collect();
        let mut sigma2: Vec<usize> = (0..n * r).collect();
        for &(a, b, c) in &self.edges {
            if c == 0 {
                iota[a] = b;
                iota[b] = a;
                for k in 1..=r {
                    sigma2[strand(a, k)] = strand(b, k);
                    sigma2[strand(b, k)] = strand(a, k);
                }
            } else {
                let c = c as usize;
                sigma1[strand(a, c)] = strand(b, c);
                sigma1[strand(b, c)] = strand(a, c);
            }
        }
        TwoGraph::from_indices(vertices, self.nodes.clone(), strands, vertex_of, mu, iota, sigma1, sigma2, colour)
    }

    /// Reads a coloured graph back from an r-coloured 2-graph.
    pub fn from_two_graph(g: &TwoGraph) -> GraphResult<ColouredGraph> {
        let rank = g
            .coloured_rank()
            .ok_or_else(|| GraphError::NotColoured("strand colours are not a proper r-colouring".into()))?;
        let mut edges = Vec::new();
        for s in 0..g.num_strands() {
            let t = g.sigma1()[s];
            let (a, b) = (g.mu()[s], g.mu()[t]);
            if a < b {
                edges.push((a, b, g.colours()[s]));
            } else if a == b {
                return Err(GraphError::NotColoured("sigma1 pairs two strands of one half-edge".into()));
            }
        }
        for (a, b) in g.edges() {
            edges.push((a, b, 0));
        }
        edges.sort_unstable();
        Ok(ColouredGraph { nodes: g.half_edges().to_vec(), edges, legs: g.external_half_edges(), rank })
    }
}

// ---------------------------------------------------------------------------
// union-find
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    /// Groups in order of their smallest element, members ascending.
    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn fish_is_valid_and_has_expected_counts() {
        for same in [true, false] {
            let g = fixtures::fish(same);
            assert!(g.to_raw().validate().is_valid());
            assert_eq!(g.num_vertices(), 2);
            assert_eq!(g.num_edges(), 2);
            assert_eq!(g.external_half_edges().len(), 4);
            assert_eq!(g.coloured_rank(), Some(4));
        }
    }

    #[test]
    fn sigma1_fixed_point_is_reported() {
        let mut raw = fixtures::fish(true).to_raw();
        let (a, _) = raw.sigma1.pop().unwrap();
        let rep = raw.validate();
        assert!(!rep.is_valid());
        assert!(rep.reasons().contains(&"sigma1 fixed point"));
        assert!(rep.violations.iter().any(|v| v.detail.contains(&a)));
    }

    #[test]
    fn unequal_half_edge_degrees_are_incompatible() {
        let raw = RawTwoGraph {
            vertices: vec![s("u"), s("w")],
            half_edges: vec![(s("h1"), s("u")), (s("h2"), s("w"))],
            strands: vec![
                RawStrand { id: s("a1"), half_edge: s("h1"), colour: 0 },
                RawStrand { id: s("a2"), half_edge: s("h1"), colour: 0 },
                RawStrand { id: s("b1"), half_edge: s("h2"), colour: 0 },
                RawStrand { id: s("b2"), half_edge: s("h2"), colour: 0 },
                RawStrand { id: s("b3"), half_edge: s("h2"), colour: 0 },
                RawStrand { id: s("b4"), half_edge: s("h2"), colour: 0 },
            ],
            iota: vec![(s("h1"), s("h2"))],
            sigma1: vec![(s("a1"), s("a2")), (s("b1"), s("b2")), (s("b3"), s("b4"))],
            sigma2: vec![(s("a1"), s("b1")), (s("a2"), s("b2"))],
        };
        let rep = raw.validate();
        assert_eq!(rep.reasons(), vec!["sigma2/iota incompatible"]);
    }

    #[test]
    fn vertex_graph_of_quartic_matrix_vertex_is_a_four_cycle() {
        let g = fixtures::polygon_vertex(4);
        let vg = g.vertex_graph(0);
        assert_eq!(vg.num_vertices(), 4);
        assert_eq!(vg.num_edges(), 4);
        assert!(vg.is_connected());
        assert!((0..4).all(|v| vg.degree(v) == 2));
    }

    #[test]
    fn degree_zero_vertex_has_empty_vertex_graph() {
        let g = fixtures::empty_vertex();
        let vg = g.vertex_graph(0);
        assert_eq!(vg.num_vertices(), 0);
        assert_eq!(vg.num_half_edges(), 0);
    }

    #[test]
    fn faces_partition_strands() {
        for g in fixtures::corpus().into_iter().map(|(_, g)| g) {
            let (i, e) = g.faces();
            let total: usize = i.iter().chain(&e).map(|f| f.sections.len()).sum();
            assert_eq!(total, g.num_strands());
        }
    }

    #[test]
    fn edgeless_faces_are_sigma1_pairs() {
        let g = fixtures::polygon_vertex(5);
        let (i, e) = g.faces();
        assert!(i.is_empty());
        assert_eq!(e.len(), 5);
        assert!(e.iter().all(|f| f.sections.len() == 2));
    }

    #[test]
    fn closed_map_faces_match_sigma_iota_cycles() {
        let m = CombinatorialMap::parse_cycles("(1 2 3 4)", "(1 2)(3 4)").unwrap();
        let g = m.to_two_graph();
        assert_eq!(g.num_internal_faces(), m.face_count());
        let m = CombinatorialMap::parse_cycles("(1 2 3 4)", "(1 3)(2 4)").unwrap();
        assert_eq!(m.to_two_graph().num_internal_faces(), m.face_count());
    }

    /// Closed (0, c)-bicoloured cycles of the coloured graph, counted directly.
    fn bicoloured_internal_cycles(cg: &ColouredGraph) -> usize {
        let mut count = 0;
        for c in 1..=cg.rank {
            let partner = |n: usize, col: u32| -> Option<usize> {
                cg.edges
                    .iter()
                    .find_map(|&(a, b, x)| (x == col && (a == n || b == n)).then_some(if a == n { b } else { a }))
            };
            let mut seen = vec![false; cg.nodes.len()];
            for start in 0..cg.nodes.len() {
                if seen[start] {
                    continue;
                }
                let mut n = start;
                let mut closed = true;
                loop {
                    seen[n] = true;
                    let Some(m) = partner(n, 0) else {
                        closed = false;
                        break;
                    };
                    seen[m] = true;
                    n = partner(m, c).unwrap();
                    if n == start {
                        break;
                    }
                }
                if closed {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn fish_faces_match_bicoloured_cycles() {
        for same in [true, false] {
            let g = fixtures::fish(same);
            let (i, e) = g.faces();
            assert_eq!(e.len(), 8);
            let cg = ColouredGraph::from_two_graph(&g).unwrap();
            assert_eq!(i.len(), bicoloured_internal_cycles(&cg));
            assert_eq!(i.len(), if same { 3 } else { 2 });
        }
    }

    #[test]
    fn figure_one_map() {
        let g = fixtures::figure_one_map();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.external_half_edges().len(), 1);
        assert_eq!(g.half_edges()[g.external_half_edges()[0]], "7");
    }

    #[test]
    fn univalent_map() {
        let g = CombinatorialMap::parse_cycles("(1)", "(1)").unwrap().to_two_graph();
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.num_strands(), 2);
        assert_eq!(g.sigma1()[0], 1);
        assert_eq!(g.external_half_edges().len(), 1);
    }

    #[test]
    fn empty_map() {
        let g = CombinatorialMap::parse_cycles("", "").unwrap().to_two_graph();
        assert_eq!(g, TwoGraph::default());
    }

    #[test]
    fn map_round_trip_reproduces_cycles() {
        let m = CombinatorialMap::parse_cycles("(1)(2 3 4)(5 7 6)", "(1 2)(3 5)(4 6)").unwrap();
        let back = to_combinatorial_map(&m.to_two_graph()).unwrap();
        assert_eq!(back.iota, m.iota);
        let same = back.sigma == m.sigma;
        let inv: Vec<usize> = {
            let mut p = vec![0; m.sigma.len()];
            for (i, &j) in m.sigma.iter().enumerate() {
                p[j] = i;
            }
            p
        };
        assert!(same || back.sigma == inv);
    }

    #[test]
    fn orientability() {
        assert!(is_orientable(&fixtures::crossing_double_loop()));
        assert!(is_orientable(&fixtures::pinched_torus()));
        // a single twisted self-loop on a bivalent vertex is a Moebius band
        let g = fixtures::polygon_vertex(2);
        let mut raw = g.to_raw();
        raw.iota.push(("1".into(), "2".into()));
        raw.sigma2.push(("s:1:0".into(), "s:2:0".into()));
        raw.sigma2.push(("s:1:1".into(), "s:2:1".into()));
        let twisted = TwoGraph::from_raw(&raw).unwrap();
        assert!(!is_orientable(&twisted));
        let mut raw = g.to_raw();
        raw.iota.push(("1".into(), "2".into()));
        raw.sigma2.push(("s:1:1".into(), "s:2:0".into()));
        raw.sigma2.push(("s:1:0".into(), "s:2:1".into()));
        assert!(is_orientable(&TwoGraph::from_raw(&raw).unwrap()));
    }

    #[test]
    fn bad_maps_are_rejected() {
        assert!(matches!(
            CombinatorialMap::new(vec![s("a"), s("b")], vec![0, 0], vec![0, 1]),
            Err(GraphError::SigmaNotBijection(_))
        ));
        assert!(matches!(
            CombinatorialMap::new(vec![s("a"), s("b")], vec![1, 0], vec![1, 1]),
            Err(GraphError::IotaNotInvolution(_))
        ));
    }

    #[test]
    fn coloured_dipole_is_one_edgeless_vertex() {
        let cg = ColouredGraph {
            nodes: vec![s("w"), s("b")],
            edges: (1..=3).map(|c| (0, 1, c)).collect(),
            legs: vec![0, 1],
            rank: 3,
        };
        let g = cg.to_two_graph().unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert!(g.is_edgeless());
        assert_eq!(ColouredGraph::from_two_graph(&g).unwrap(), cg);
    }

    #[test]
    fn improper_colouring_is_rejected() {
        let cg =
            ColouredGraph { nodes: vec![s("w"), s("b")], edges: vec![(0, 1, 1), (0, 1, 1)], legs: vec![0, 1], rank: 2 };
        assert!(matches!(cg.to_two_graph(), Err(GraphError::ImproperColouring(_))));
        let cg = ColouredGraph { nodes: vec![s("w"), s("b")], edges: vec![(0, 1, 1)], legs: vec![0, 1], rank: 2 };
        assert!(matches!(cg.to_two_graph(), Err(GraphError::DegreeMismatch(_))));
    }

    #[test]
    fn residue_and_skeleton() {
        let g = fixtures::fish(false);
        let r = g.residue();
        assert_eq!(r.num_vertices(), 1);
        assert!(r.is_edgeless());
        assert_eq!(r.vertex_graph(0).num_components(), 2);
        assert_eq!(r.residue(), r);
        let sk = g.skeleton();
        assert_eq!(sk.skeleton(), sk);
        assert_eq!(sk.num_vertices(), 2);
        assert!(sk.is_edgeless());
        let same = fixtures::fish(true).residue();
        assert_eq!(same.vertex_graph(0).num_components(), 1);
        assert_eq!(same.vertex_graph(0).num_vertices(), 4);
    }

    #[test]
    fn boundary_of_two_fish_copies() {
        let g = fixtures::fish(false);
        let two = TwoGraph::disjoint_union(&[g.with_prefix("a."), g.with_prefix("b.")]);
        assert_eq!(two.boundary().num_components(), 4);
        let grouped = two.boundary_components();
        assert_eq!(grouped.len(), 2);
        assert!(grouped.iter().all(|b| b.num_components() == 2));
        let union = OneGraph::disjoint_union(&grouped);
        assert_eq!(union, two.boundary());
    }

    #[test]
    fn complex_flags() {
        let c = fixtures::fish(true).to_complex();
        assert!(c.pure && c.two_dimensional && c.intermediate_property);
        let g = TwoGraph::disjoint_union(&[fixtures::fish(true), fixtures::empty_vertex().with_prefix("z")]);
        let c = g.to_complex();
        assert!(c.pure);
        assert!(!c.two_dimensional);
        let c = TwoGraph::default().to_complex();
        assert!(c.cells.is_empty() && c.pure);
    }

    #[test]
    fn euler_characteristic_examples() {
        let (_, pinched) = fixtures::torus_and_pinched();
        assert_eq!(pinched.num_vertices(), 3);
        assert_eq!(pinched.num_edges(), 4);
        assert_eq!(pinched.num_internal_faces(), 2);
        assert_eq!(pinched.euler_characteristic(), 1);
        let v = fixtures::polygon_vertex(3);
        assert_eq!(v.euler_characteristic(), 1);
        let g = fixtures::fish(true);
        let two = TwoGraph::disjoint_union(&[g.with_prefix("a."), g.with_prefix("b.")]);
        assert_eq!(two.euler_characteristic(), 2 * g.euler_characteristic());
    }

    #[test]
    fn bridges() {
        assert!(fixtures::fish(true).is_bridgeless());
        let chain = fixtures::matrix_chain();
        assert!(!chain.is_bridgeless());
    }
}
