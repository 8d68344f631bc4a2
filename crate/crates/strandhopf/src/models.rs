//! Field theories on 2-graphs: weights, superficial degree of divergence,
//! genus and Gurau degrees, closed-form power counting and divergent sets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::fixtures;
use crate::graph_core::{GraphError, GraphResult, OneGraph, TwoGraph, UnionFind};
use crate::iso::{self, CanonicalCode};
use crate::series::{self, ClassGraph, GluingClass};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// How weights of vertex graphs missing from the explicit table are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightRule {
    /// Only listed graphs have weights.
    Explicit,
    /// Matrix theories: every non-propagator vertex graph has weight 0.
    Matrix,
    /// Tensorial theories: `d_r - (d^v/2)(d_r - ζ)` for a vertex of degree `d^v`.
    Tensorial,
}

/// A combinatorial field theory.
#[derive(Clone, Debug)]
pub struct Theory {
    pub name: String,
    /// Propagator graphs (two vertices each) with their weights.
    pub propagators: Vec<(OneGraph, BigRational)>,
    /// Interaction vertex graphs, with an explicit weight or `None` for the rule.
    pub vertices: Vec<(OneGraph, Option<BigRational>)>,
    pub dimension: u32,
    pub zeta: BigRational,
    pub rank: Option<u32>,
    pub rule: WeightRule,
    /// Only orientable gluings (ribbon graphs without twists) belong to the theory.
    pub orientable_only: bool,
}

/// Vertex graph of an edge with `strands` strands; colours `1..=strands` if coloured.
pub fn propagator_graph(strands: usize, coloured: bool) -> OneGraph {
    let mut half_edges = Vec::new();
    let mut pairs = Vec::new();
    for k in 0..strands {
        let c = if coloured { k as u32 + 1 } else { 0 };
        half_edges.push((format!("a{k}"), "a".to_string(), c));
        half_edges.push((format!("b{k}"), "b".to_string(), c));
        pairs.push((format!("a{k}"), format!("b{k}")));
    }
    OneGraph::new(vec!["a".into(), "b".into()], half_edges, &pairs).expect("propagator graph")
}

impl Theory {
    fn matrix(name: &str, orientable_only: bool) -> Theory {
        Theory {
            name: name.into(),
            propagators: vec![(propagator_graph(2, false), int(1))],
            vertices: vec![(fixtures::polygon(4), None)],
            dimension: 2,
            zeta: int(1),
            rank: None,
            rule: WeightRule::Matrix,
            orientable_only,
        }
    }

    /// Quartic matrix theory with orientable ribbon graphs, `d = 2` (`D = 4`).
    pub fn gw4() -> Theory {
        Theory::matrix("gw4", true)
    }

    /// Quartic matrix theory allowing twisted edges, `d = 2`.
    pub fn phi4() -> Theory {
        Theory::matrix("phi4", false)
    }

    fn tensorial(name: &str, rank: u32, vertices: Vec<OneGraph>) -> Theory {
        Theory {
            name: name.into(),
            propagators: vec![(propagator_graph(rank as usize, true), int(1))],
            vertices: vertices.into_iter().map(|g| (g, None)).collect(),
            dimension: 1,
            zeta: int(1),
            rank: Some(rank),
            rule: WeightRule::Tensorial,
            orientable_only: false,
        }
    }

    /// Rank-3 coloured quartic melonic theory, `d = 1`, `ζ = 1`.
    pub fn quartic3() -> Theory {
        Theory::tensorial("quartic3", 3, (1..=3).map(|c| fixtures::pillow(3, c)).collect())
    }

    /// Rank-4 tensorial theory, `d = 1`, `ζ = 1`, with the quartic melonic
    /// vertices and the double-trace vertex.
    pub fn bgr() -> Theory {
        let mut vs: Vec<OneGraph> = (1..=4).map(|c| fixtures::pillow(4, c)).collect();
        vs.push(fixtures::double_dipole(4));
        Theory::tensorial("bgr", 4, vs)
    }

    pub fn preset(name: &str) -> GraphResult<Theory> {
        match name {
            "gw4" => Ok(Theory::gw4()),
            "phi4" => Ok(Theory::phi4()),
            "quartic3" => Ok(Theory::quartic3()),
            "bgr" => Ok(Theory::bgr()),
            _ => Err(GraphError::Invalid(format!("unknown theory preset `{name}`"))),
        }
    }

    pub const PRESETS: [&'static str; 4] = ["gw4", "phi4", "quartic3", "bgr"];

    /// Checks that propagators have two vertices and no legs.
    pub fn check(&self) -> GraphResult<()> {
        for (p, _) in &self.propagators {
            if p.num_vertices() != 2 {
                return Err(GraphError::Invalid("propagator graphs must have exactly two vertices".into()));
            }
        }
        for g in self.propagators.iter().map(|p| &p.0).chain(self.vertices.iter().map(|v| &v.0)) {
            if !g.external_legs().is_empty() {
                return Err(GraphError::Invalid("theory graphs cannot have external legs".into()));
            }
        }
        if self.rule == WeightRule::Tensorial && self.rank.is_none() {
            return Err(GraphError::Invalid("the tensorial weight rule needs a rank".into()));
        }
        Ok(())
    }

    /// Gluing class of the interaction vertices.
    pub fn gluing_class(&self) -> GluingClass {
        GluingClass::new(self.vertices.iter().map(|v| v.0.clone()).collect()).orientable(self.orientable_only)
    }

    /// `d_r = d(r-1)` for tensorial theories.
    pub fn effective_dimension(&self) -> Option<i64> {
        self.rank.map(|r| self.dimension as i64 * (r as i64 - 1))
    }

    /// `D = 2d` for matrix theories.
    pub fn spacetime_dimension(&self) -> Option<i64> {
        (self.rank.is_none() && self.rule == WeightRule::Matrix).then_some(2 * self.dimension as i64)
    }

    /// Largest renormalizable interaction degree `⌊2d_r/(d_r-ζ)⌋`; `None` when `d_r ≤ ζ`.
    pub fn max_renormalizable_order(&self) -> Option<i64> {
        let dr = int(self.effective_dimension()?);
        if dr <= self.zeta {
            return None;
        }
        (int(2) * &dr / (&dr - &self.zeta)).floor().to_integer().to_i64()
    }

    /// `d_r - (d^v/2)(d_r - ζ)`.
    pub fn vertex_weight_tensorial(&self, g: &OneGraph) -> GraphResult<BigRational> {
        let dr = int(self.effective_dimension().ok_or_else(|| GraphError::Invalid("theory has no rank".into()))?);
        Ok(&dr - ratio(g.num_vertices() as i64, 2) * (&dr - &self.zeta))
    }

    /// Weight of a vertex or edge graph: propagators first, then the explicit
    /// table, then the rule.
    pub fn weight(&self, g: &OneGraph) -> GraphResult<BigRational> {
        let code = iso::canonical_form_one(g);
        for (p, w) in &self.propagators {
            if iso::canonical_form_one(p) == code {
                return Ok(w.clone());
            }
        }
        for (v, w) in &self.vertices {
            if let Some(w) = w {
                if iso::canonical_form_one(v) == code {
                    return Ok(w.clone());
                }
            }
        }
        match self.rule {
            WeightRule::Matrix => Ok(BigRational::zero()),
            WeightRule::Tensorial => self.vertex_weight_tensorial(g),
            WeightRule::Explicit => Err(GraphError::Invalid(format!("missing weight for vertex graph {g}"))),
        }
    }

    /// Weight of an edge graph; a single propagator weight is the default.
    pub fn edge_weight(&self, g: &OneGraph) -> GraphResult<BigRational> {
        let code = iso::canonical_form_one(g);
        for (p, w) in &self.propagators {
            if iso::canonical_form_one(p) == code {
                return Ok(w.clone());
            }
        }
        match self.propagators.as_slice() {
            [(_, w)] => Ok(w.clone()),
            _ => Err(GraphError::Invalid(format!("missing weight for edge graph {g}"))),
        }
    }
}

/// `ω^sd = Σ_v ω(γ_v) - Σ_e ω(γ_e) + d·F`.
pub fn superficial_degree(t: &Theory, g: &TwoGraph) -> GraphResult<BigRational> {
    let mut w = int(t.dimension as i64 * g.num_internal_faces() as i64);
    for v in 0..g.num_vertices() {
        w += t.weight(&g.vertex_graph(v))?;
    }
    for (a, _) in g.edges() {
        w -= t.edge_weight(&g.edge_graph(a))?;
    }
    Ok(w)
}

/// Genus `(2 - K_∂ - V + E - F)/2` of a connected map-class 2-graph.
pub fn genus(g: &TwoGraph) -> GraphResult<i64> {
    if !g.is_map_class() {
        return Err(GraphError::NotAMap("every half-edge must carry two strands".into()));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let twice = 2 - g.boundary().num_components() as i64 - g.num_vertices() as i64 + g.num_edges() as i64
        - g.num_internal_faces() as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(GraphError::NonIntegerGenus(format!("{twice}/2")));
    }
    Ok(twice / 2)
}

// ---------------------------------------------------------------------------
// Gurau degrees
// ---------------------------------------------------------------------------

/// Number of `(i, j)`-bicoloured cycles of a coloured 1-graph (legs ignored).
fn bicoloured_cycles(g: &OneGraph, i: u32, j: u32) -> usize {
    let mut uf = UnionFind::new(g.num_vertices());
    for h in 0..g.num_half_edges() {
        let c = g.colours()[h];
        let p = g.pairing()[h];
        if (c == i || c == j) && p != h {
            uf.union(g.attach()[h], g.attach()[p]);
        }
    }
    uf.groups().len()
}

/// Cyclic orders of `items` up to rotation and reversal, each starting with `items[0]`.
fn cyclic_orders(items: &[u32]) -> Vec<Vec<u32>> {
    fn perms(xs: &[u32]) -> Vec<Vec<u32>> {
        if xs.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for k in 0..xs.len() {
            let mut rest = xs.to_vec();
            let x = rest.remove(k);
            for mut p in perms(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    perms(&items[1..])
        .into_iter()
        .filter(|p| p.len() < 2 || p[0] < p[p.len() - 1])
        .map(|p| {
            let mut c = vec![items[0]];
            c.extend(p);
            c
        })
        .collect()
}

fn adjacent_pairs(order: &[u32]) -> Vec<(u32, u32)> {
    (0..order.len()).map(|k| (order[k], order[(k + 1) % order.len()])).collect()
}

fn rank_of(g: &TwoGraph) -> GraphResult<(u32, bool)> {
    if let Some(r) = g.coloured_rank() {
        if r >= 2 {
            return Ok((r, true));
        }
    }
    if g.is_map_class() && !g.strands().is_empty() {
        return Ok((2, false));
    }
    Err(GraphError::NotColoured("expected a coloured 2-graph of rank at least 2 or a combinatorial map".into()))
}

/// Degree of an `r`-coloured 1-graph (each node carries colours `1..=r`): the
/// sum over its jackets of `(2K - V + E - F)/2`.
pub fn coloured_one_graph_degree(g: &OneGraph, r: u32) -> BigRational {
    if g.num_vertices() == 0 || r < 2 {
        return BigRational::zero();
    }
    let colours: Vec<u32> = (1..=r).collect();
    let k = g.num_components() as i64;
    let v = g.num_vertices() as i64;
    let e = g.edges().len() as i64;
    let mut total = BigRational::zero();
    for order in cyclic_orders(&colours) {
        let f: i64 = adjacent_pairs(&order).iter().map(|&(a, b)| bicoloured_cycles(g, a, b) as i64).sum();
        total += ratio(2 * k - v + e - f, 2);
    }
    total
}

struct ColourCounts {
    r: u32,
    nodes: i64,
    edges: i64,
    /// bubble cycles per colour pair, indexed `[i][j]` for `1 ≤ i, j ≤ r`
    bubble: Vec<Vec<i64>>,
    boundary: Vec<Vec<i64>>,
    internal: Vec<i64>,
    external: Vec<i64>,
    boundary_nodes: i64,
    /// components of the coloured graph (half-edges joined by sigma1 and iota pairs)
    components: i64,
}

/// Components of the coloured graph on half-edges. A multi-trace vertex can
/// leave it disconnected even when the 2-graph is connected.
pub fn coloured_components(g: &TwoGraph) -> usize {
    let mut uf = UnionFind::new(g.num_half_edges());
    for s in 0..g.num_strands() {
        uf.union(g.mu()[s], g.mu()[g.sigma1()[s]]);
    }
    for h in 0..g.num_half_edges() {
        uf.union(h, g.iota()[h]);
    }
    uf.groups().len()
}

fn colour_counts(g: &TwoGraph) -> GraphResult<ColourCounts> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let (r, coloured) = rank_of(g)?;
    let ru = r as usize;
    let mut bubble = vec![vec![0; ru + 1]; ru + 1];
    let mut boundary = vec![vec![0; ru + 1]; ru + 1];
    let mut internal = vec![0; ru + 1];
    let mut external = vec![0; ru + 1];
    let vg = g.vertex_graphs_union();
    let bd = g.boundary();
    let (int_faces, ext_faces) = g.faces();
    if coloured {
        for i in 1..=r {
            for j in 1..=r {
                if i != j {
                    bubble[i as usize][j as usize] = bicoloured_cycles(&vg, i, j) as i64;
                    boundary[i as usize][j as usize] = bicoloured_cycles(&bd, i, j) as i64;
                }
            }
        }
        for f in &int_faces {
            internal[g.colours()[f.sections[0]] as usize] += 1;
        }
        for f in &ext_faces {
            external[g.colours()[f.sections[0]] as usize] += 1;
        }
    } else {
        // rank 2 has a single jacket containing every colour pair, so only totals matter
        bubble[1][2] = vg.num_components() as i64;
        bubble[2][1] = bubble[1][2];
        boundary[1][2] = bd.num_components() as i64;
        boundary[2][1] = boundary[1][2];
        internal[1] = int_faces.len() as i64;
        external[1] = ext_faces.len() as i64;
    }
    Ok(ColourCounts {
        r,
        nodes: g.num_half_edges() as i64,
        edges: g.num_edges() as i64,
        bubble,
        boundary,
        internal,
        external,
        boundary_nodes: bd.num_vertices() as i64,
        components: coloured_components(g) as i64,
    })
}

fn jacket_sum(c: &ColourCounts, capped: bool) -> BigRational {
    let colours: Vec<u32> = (0..=c.r).collect();
    let mut total = BigRational::zero();
    for order in cyclic_orders(&colours) {
        let (a, b) = (order[1] as usize, order[order.len() - 1] as usize);
        let mut f = 0;
        for (x, y) in adjacent_pairs(&order) {
            if x != 0 && y != 0 {
                f += c.bubble[x as usize][y as usize];
                if capped {
                    f += c.boundary[x as usize][y as usize];
                }
            }
        }
        let (nodes, edges) = if capped {
            f += c.internal[a] + c.external[a] + c.internal[b] + c.external[b];
            let n = c.nodes + c.boundary_nodes;
            (n, c.edges + c.boundary_nodes + n * c.r as i64 / 2)
        } else {
            f += c.internal[a] + c.internal[b] + c.boundary[a][b];
            (c.nodes, c.edges + c.nodes * c.r as i64 / 2)
        };
        total += ratio(2 * c.components - nodes + edges - f, 2);
    }
    total
}

/// Gurau degree of a closed connected coloured 2-graph (or map, as rank 2).
pub fn gurau_degree(g: &TwoGraph) -> GraphResult<BigRational> {
    if !g.is_closed() {
        return Err(GraphError::Invalid("the closed Gurau degree needs a graph without external half-edges".into()));
    }
    Ok(jacket_sum(&colour_counts(g)?, false))
}

/// Open Gurau degree from pinched jackets: external legs are removed and the
/// faces through them are closed along the boundary graph.
pub fn gurau_degree_pinched(g: &TwoGraph) -> GraphResult<BigRational> {
    Ok(jacket_sum(&colour_counts(g)?, false))
}

/// Open Gurau degree of the capped closure: one new vertex per boundary
/// component carrying that component, glued along the external half-edges.
pub fn gurau_degree_open(g: &TwoGraph) -> GraphResult<BigRational> {
    Ok(jacket_sum(&colour_counts(g)?, true))
}

/// Gurau degree of the boundary graph (an `(r-1)`-dimensional coloured graph).
pub fn boundary_gurau_degree(g: &TwoGraph) -> GraphResult<BigRational> {
    let (r, coloured) = rank_of(g)?;
    Ok(if coloured { coloured_one_graph_degree(&g.boundary(), r) } else { BigRational::zero() })
}

/// Degrees of an open coloured 2-graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GurauDegrees {
    pub pinched: String,
    pub capped: String,
    pub boundary: String,
}

pub fn gurau_degrees(g: &TwoGraph) -> GraphResult<GurauDegrees> {
    Ok(GurauDegrees {
        pinched: gurau_degree_pinched(g)?.to_string(),
        capped: gurau_degree_open(g)?.to_string(),
        boundary: boundary_gurau_degree(g)?.to_string(),
    })
}

/// Build an independent 2-graph copy of the capped closure (used by tests and `info`).
pub fn capped_closure(g: &TwoGraph) -> GraphResult<TwoGraph> {
    let ext = g.external_half_edges();
    if ext.is_empty() {
        return Ok(g.clone());
    }
    let bd = g.boundary();
    let mut parts = vec![g.clone()];
    for (k, comp) in bd.components().into_iter().enumerate() {
        let cap = TwoGraph::corolla(&format!("cap{k}"), &comp.with_prefix(&format!("cap{k}:")))?;
        parts.push(cap);
    }
    let mut u = TwoGraph::disjoint_union(&parts);
    // boundary node labels are half-edge labels of g; boundary edge labels are strand labels
    for &h in &ext {
        let lh = &g.half_edges()[h];
        let copy = u
            .half_edges()
            .iter()
            .position(|l| l.strip_prefix("cap").and_then(|x| x.split_once(':')).map(|x| x.1) == Some(lh.as_str()))
            .ok_or_else(|| GraphError::Invalid("capping failed".into()))?;
        let sa = u.strands_by_half_edge()[h].clone();
        let sb = u.strands_by_half_edge()[copy].clone();
        let mut pairs = Vec::new();
        for &s in &sa {
            let ls = &u.strands()[s];
            let t = sb
                .iter()
                .copied()
                .find(|&t| u.strands()[t].split_once(':').map(|x| x.1) == Some(ls.as_str()))
                .ok_or_else(|| GraphError::Invalid("capping failed".into()))?;
            pairs.push((s, t));
        }
        u = u.with_edge(h, copy, &pairs);
    }
    Ok(u)
}

// ---------------------------------------------------------------------------
// closed forms
// ---------------------------------------------------------------------------

/// `-d(V-1) + (d-1)/2 (Σ k V^(k) - V_∂) - d(2g + K_∂ - 1) + Σ_v ω(γ_v)`.
pub fn matrix_degree_closed_form(t: &Theory, g: &TwoGraph) -> GraphResult<BigRational> {
    let gen = genus(g)?;
    let d = t.dimension as i64;
    let v = g.num_vertices() as i64;
    let n = g.num_half_edges() as i64;
    let bd = g.boundary();
    let vb = bd.num_vertices() as i64;
    let k = bd.num_components() as i64;
    let mut w = int(-d * (v - 1)) + ratio((d - 1) * (n - vb), 2) - int(d * (2 * gen + k - 1));
    for x in 0..g.num_vertices() {
        w += t.weight(&g.vertex_graph(x))?;
    }
    Ok(w)
}

/// Tensorial closed form with pinched Gurau degrees:
/// `(d_r-ζ)/2 (Σ k V^(k) - V_∂) - d_r(V-1) - d(2(ω^G-ω^G_∂)/(r-1)! + K_∂-1) + Σ_v ω(γ_v) + c`,
/// where the bubble term `c = d((r-1)(V - Σ_v K_v) + r(K_c - 1) + 2 Σ_v ω^G(γ_v)/(r-2)!)`
/// vanishes when all vertices are single-trace melonic bubbles (`K_v` counts the
/// traces of vertex `v`, `K_c` the components of the coloured graph).
pub fn tensorial_degree_closed_form(t: &Theory, g: &TwoGraph) -> GraphResult<BigRational> {
    let r = g.coloured_rank().ok_or_else(|| GraphError::NotColoured("expected a coloured 2-graph".into()))?;
    let d = t.dimension as i64;
    let dr = int(d * (r as i64 - 1));
    let v = g.num_vertices() as i64;
    let n = g.num_half_edges() as i64;
    let bd = g.boundary();
    let vb = bd.num_vertices() as i64;
    let k = bd.num_components() as i64;
    let delta = gurau_degree_pinched(g)? - boundary_gurau_degree(g)?;
    let mut w = (&dr - &t.zeta) * ratio(n - vb, 2)
        - &dr * int(v - 1)
        - int(d) * (int(2) * delta / int(factorial(r - 1)) + int(k - 1));
    let mut traces = 0;
    let mut bubbles = BigRational::zero();
    for x in 0..g.num_vertices() {
        let vg = g.vertex_graph(x);
        w += t.weight(&vg)?;
        traces += vg.num_components() as i64;
        bubbles += coloured_one_graph_degree(&vg, r);
    }
    let kc = coloured_components(g) as i64;
    w += int(d) * (int((r as i64 - 1) * (v - traces) + r as i64 * (kc - 1)) + int(2) * bubbles / int(factorial(r - 2)));
    Ok(w)
}

/// The rank-4 formula `6 - V_∂ - (ω^G - ω^G_∂)/3 - (K_∂ - 1)` as stated for
/// the `d = 1`, `ζ = 1` model.
pub fn bgr_stated_formula(g: &TwoGraph) -> GraphResult<BigRational> {
    let bd = g.boundary();
    let delta = gurau_degree_pinched(g)? - boundary_gurau_degree(g)?;
    Ok(int(6) - int(bd.num_vertices() as i64) - delta / int(3) - int(bd.num_components() as i64 - 1))
}

/// The generic closed form specialised to single-trace melonic vertices:
/// `d_r - (d_r-ζ)/2 V_∂ - d(2(ω^G-ω^G_∂)/(r-1)! + K_∂ - 1)`.
pub fn tensorial_vertex_free_form(t: &Theory, g: &TwoGraph) -> GraphResult<BigRational> {
    let r = g.coloured_rank().ok_or_else(|| GraphError::NotColoured("expected a coloured 2-graph".into()))?;
    let d = t.dimension as i64;
    let dr = int(d * (r as i64 - 1));
    let bd = g.boundary();
    let delta = gurau_degree_pinched(g)? - boundary_gurau_degree(g)?;
    Ok(&dr
        - (&dr - &t.zeta) * ratio(bd.num_vertices() as i64, 2)
        - int(d) * (int(2) * delta / int(factorial(r - 1)) + int(bd.num_components() as i64 - 1)))
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

/// Power-counting data of one connected component.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub omega_sd: String,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
    pub boundary_vertices: usize,
    pub boundary_edges: usize,
    pub boundary_components: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gurau: Option<GurauDegrees>,
    pub bridgeless: bool,
    pub divergent: bool,
    pub boundary_code: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    pub theory: String,
    pub components: Vec<ComponentReport>,
}

/// Divergent: has edges and external legs, is bridgeless and `ω^sd ≥ 0`.
pub fn is_divergent(t: &Theory, g: &TwoGraph) -> GraphResult<bool> {
    if g.num_edges() == 0 || g.is_closed() || !g.is_bridgeless() {
        return Ok(false);
    }
    Ok(!superficial_degree(t, g)?.is_negative())
}

pub fn classify(t: &Theory, g: &TwoGraph) -> GraphResult<DivergenceReport> {
    let mut components = Vec::new();
    for c in g.connected_components() {
        let bd = c.boundary();
        let omega = superficial_degree(t, &c)?;
        let genus = if c.is_map_class() { genus(&c).ok() } else { None };
        let gurau = if c.coloured_rank().is_some_and(|r| r >= 2) { Some(gurau_degrees(&c)?) } else { None };
        components.push(ComponentReport {
            omega_sd: omega.to_string(),
            faces: c.num_internal_faces(),
            edges: c.num_edges(),
            vertices: c.num_vertices(),
            boundary_vertices: bd.num_vertices(),
            boundary_edges: bd.num_edges(),
            boundary_components: bd.num_components(),
            genus,
            gurau,
            bridgeless: c.is_bridgeless(),
            divergent: is_divergent(t, &c)?,
            boundary_code: iso::canonical_form_one(&bd).to_hex(),
        });
    }
    Ok(DivergenceReport { theory: t.name.clone(), components })
}

/// Connected superficially divergent graphs with at most `max_edges` edges;
/// the divergent set consists of their disjoint unions and the residues.
pub fn divergent_set(t: &Theory, max_edges: usize) -> GraphResult<Vec<ClassGraph>> {
    let mut out = Vec::new();
    for c in series::enumerate(t, max_edges, true, None) {
        if is_divergent(t, &c.graph)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// A contraction of a divergent graph by a divergent subgraph that left the set.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureViolation {
    pub graph: String,
    pub subgraph_edges: Vec<usize>,
    pub quotient: String,
}

/// Contracts every member by every subgraph whose non-trivial components are
/// divergent and reports quotients that are neither divergent nor residues.
pub fn divergent_set_closure_violations(t: &Theory, set: &[ClassGraph]) -> GraphResult<Vec<ClosureViolation>> {
    let mut out = Vec::new();
    for c in set {
        let e = c.graph.num_edges();
        for m in 1..(1u64 << e) {
            let mask: Vec<bool> = (0..e).map(|k| m >> k & 1 == 1).collect();
            let theta = c.graph.edge_subgraph(&mask);
            let mut ok = true;
            for comp in theta.connected_components() {
                if comp.num_edges() > 0 && !is_divergent(t, &comp)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let q = c.graph.contract_edge_mask(&mask);
            if q.num_edges() > 0 && !is_divergent(t, &q)? {
                out.push(ClosureViolation {
                    graph: c.code.to_hex(),
                    subgraph_edges: (0..e).filter(|&k| mask[k]).collect(),
                    quotient: iso::canonical_form(&q).to_hex(),
                });
            }
        }
    }
    Ok(out)
}

/// A graph on which two ways of computing `ω^sd` disagree.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub code: String,
    pub face_count: String,
    pub closed_form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RenormalizabilityReport {
    pub theory: String,
    pub max_edges: usize,
    pub checked: usize,
    pub divergent: usize,
    pub counterexamples: Vec<Counterexample>,
    pub closure_violations: Vec<ClosureViolation>,
    pub ok: bool,
}

/// Compares face counting with the closed form on every enumerated connected
/// graph and checks that the divergent set is contraction closed.
pub fn renormalizability_check(t: &Theory, max_edges: usize) -> GraphResult<RenormalizabilityReport> {
    let all = series::enumerate(t, max_edges, true, None);
    let mut counterexamples = Vec::new();
    for c in &all {
        let fc = superficial_degree(t, &c.graph)?;
        let cf = if c.graph.coloured_rank().is_some_and(|r| r >= 2) && t.rank.is_some() {
            Some(tensorial_degree_closed_form(t, &c.graph)?)
        } else if c.graph.is_map_class() && t.rule == WeightRule::Matrix {
            matrix_degree_closed_form(t, &c.graph).ok()
        } else {
            None
        };
        if let Some(cf) = cf {
            if cf != fc {
                counterexamples.push(Counterexample {
                    code: c.code.to_hex(),
                    face_count: fc.to_string(),
                    closed_form: cf.to_string(),
                });
            }
        }
    }
    let div = divergent_set(t, max_edges)?;
    let closure_violations = divergent_set_closure_violations(t, &div)?;
    Ok(RenormalizabilityReport {
        theory: t.name.clone(),
        max_edges,
        checked: all.len(),
        divergent: div.len(),
        ok: counterexamples.is_empty() && closure_violations.is_empty(),
        counterexamples,
        closure_violations,
    })
}

/// Boundary code of a graph (convenience for reports).
pub fn boundary_code(g: &TwoGraph) -> CanonicalCode {
    iso::canonical_form_one(&g.boundary())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::CombinatorialMap;

    /// Jacket genus from an explicit ribbon-graph face walk on the coloured
    /// graph (closed graphs only): corners between cyclically adjacent colours.
    fn jacket_oracle(g: &TwoGraph) -> BigRational {
        let r = g.coloured_rank().unwrap();
        let n = g.num_half_edges();
        // neighbour of node x along colour c (0 = edges of g)
        let mut nb = vec![vec![usize::MAX; r as usize + 1]; n];
        for x in 0..n {
            nb[x][0] = g.iota()[x];
        }
        for s in 0..g.num_strands() {
            nb[g.mu()[s]][g.colours()[s] as usize] = g.mu()[g.sigma1()[s]];
        }
        let colours: Vec<u32> = (0..=r).collect();
        let mut total = BigRational::zero();
        for order in cyclic_orders(&colours) {
            let mut f = 0i64;
            for (a, b) in adjacent_pairs(&order) {
                let mut seen = vec![false; n];
                for x in 0..n {
                    if seen[x] {
                        continue;
                    }
                    f += 1;
                    let mut y = x;
                    let mut col = a;
                    loop {
                        seen[y] = true;
                        y = nb[y][col as usize];
                        seen[y] = true;
                        col = if col == a { b } else { a };
                        if y == x && col == a {
                            break;
                        }
                    }
                }
            }
            let e = (n * (r as usize + 1) / 2) as i64;
            total += ratio(2 - n as i64 + e - f, 2);
        }
        total
    }

    #[test]
    fn presets_are_valid() {
        for name in Theory::PRESETS {
            Theory::preset(name).unwrap().check().unwrap();
        }
        assert_eq!(Theory::gw4().spacetime_dimension(), Some(4));
        assert_eq!(Theory::quartic3().max_renormalizable_order(), Some(4));
        assert_eq!(Theory::bgr().max_renormalizable_order(), Some(3));
    }

    #[test]
    fn gw_examples() {
        let t = Theory::gw4();
        let fish = fixtures::matrix_fish();
        assert_eq!(fish.num_internal_faces(), 1);
        assert_eq!(superficial_degree(&t, &fish).unwrap(), int(0));
        assert_eq!(matrix_degree_closed_form(&t, &fish).unwrap(), int(0));
        let v = fixtures::polygon_vertex(4);
        assert_eq!(superficial_degree(&t, &v).unwrap(), int(0));
        // planar 2-point: one quartic vertex with an adjacent self-loop
        let two = CombinatorialMap::parse_cycles("(1 2 3 4)", "(1 2)").unwrap().to_two_graph();
        assert_eq!(superficial_degree(&t, &two).unwrap(), int(1));
        assert_eq!(matrix_degree_closed_form(&t, &two).unwrap(), int(1));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&fixtures::planar_double_loop()).unwrap(), 0);
        assert_eq!(genus(&fixtures::crossing_double_loop()).unwrap(), 1);
        let (torus, pinched) = fixtures::torus_and_pinched();
        assert_eq!(genus(&torus).unwrap(), 1);
        assert!(matches!(genus(&pinched), Err(GraphError::NonIntegerGenus(_))));
        assert_eq!(pinched.euler_characteristic(), 1);
        assert!(genus(&fixtures::fish(true)).is_err());
    }

    #[test]
    fn melon_degree_zero() {
        let m = fixtures::melon_rank3();
        assert_eq!(gurau_degree(&m).unwrap(), int(0));
        assert_eq!(jacket_oracle(&m), int(0));
    }

    #[test]
    fn rank_two_degree_is_genus() {
        for (_, g) in fixtures::corpus() {
            if g.is_map_class() && g.is_connected() && g.num_strands() > 0 {
                if let Ok(gen) = genus(&g) {
                    assert_eq!(gurau_degree_pinched(&g).unwrap(), int(gen));
                }
            }
        }
    }

    #[test]
    fn closed_degrees_match_face_walk() {
        let t = Theory::quartic3();
        for c in series::enumerate(&t, 3, true, None) {
            if c.graph.is_closed() {
                assert_eq!(gurau_degree(&c.graph).unwrap(), jacket_oracle(&c.graph));
            }
        }
    }

    #[test]
    fn capped_degree_matches_explicit_capping() {
        for g in [fixtures::fish(true), fixtures::fish(false), fixtures::bgr_melonic_two_point()] {
            let capped = capped_closure(&g).unwrap();
            assert!(capped.is_closed());
            assert_eq!(gurau_degree_open(&g).unwrap(), jacket_oracle(&capped));
        }
    }

    #[test]
    fn fish_degrees() {
        for same in [true, false] {
            let g = fixtures::fish(same);
            let p = gurau_degree_pinched(&g).unwrap();
            let b = boundary_gurau_degree(&g).unwrap();
            assert!(p >= b);
        }
    }

    #[test]
    fn bgr_melonic_two_point() {
        let t = Theory::bgr();
        let g = fixtures::bgr_melonic_two_point();
        let w = superficial_degree(&t, &g).unwrap();
        assert_eq!(w, int(1));
        assert_eq!(tensorial_degree_closed_form(&t, &g).unwrap(), w);
        assert_eq!(tensorial_vertex_free_form(&t, &g).unwrap(), w);
        assert!(is_divergent(&t, &g).unwrap());
    }

    #[test]
    fn very_negative_weights_give_nothing() {
        let mut t = Theory::phi4();
        t.vertices[0].1 = Some(int(-100));
        assert!(divergent_set(&t, 2).unwrap().is_empty());
    }

    #[test]
    fn explicit_rule_reports_missing_weight() {
        let mut t = Theory::phi4();
        t.rule = WeightRule::Explicit;
        assert!(superficial_degree(&t, &fixtures::polygon_vertex(4)).is_err());
    }

    #[test]
    fn edge_vertex_relation() {
        for (_, g) in fixtures::corpus() {
            let n: usize = (0..g.num_vertices()).map(|v| g.vertex_graph(v).num_vertices()).sum();
            assert_eq!(2 * g.num_edges() + g.boundary().num_vertices(), n);
        }
    }
}
