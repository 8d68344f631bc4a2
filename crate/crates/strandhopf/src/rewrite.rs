//! Subgraphs, contraction, component-sensitive insertion, the
//! contraction/insertion counting identity and bounded contraction closure.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;

use crate::graph_core::{GraphError, GraphResult, OneGraph, TwoGraph};
use crate::iso::{self, CanonicalCode};
use crate::series::{self, GluingClass};

/// A subgraph: the parent with a subset of its internal edges (indexed like
/// [`TwoGraph::edges`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph<'a> {
    parent: &'a TwoGraph,
    kept: Vec<bool>,
}

impl<'a> Subgraph<'a> {
    pub fn new(parent: &'a TwoGraph, kept: Vec<bool>) -> GraphResult<Self> {
        if kept.len() != parent.num_edges() {
            return Err(GraphError::Invalid(format!(
                "edge mask has {} entries but the graph has {} edges",
                kept.len(),
                parent.num_edges()
            )));
        }
        Ok(Subgraph { parent, kept })
    }

    /// Subgraph from a bit mask (bit `k` keeps edge `k`).
    pub fn from_mask(parent: &'a TwoGraph, mask: u64) -> Self {
        let e = parent.num_edges();
        Subgraph { parent, kept: (0..e).map(|k| mask >> k & 1 == 1).collect() }
    }

    /// Subgraph from edge identifiers (`e<k>`, 1-based, or a half-edge label).
    pub fn from_edge_ids(parent: &'a TwoGraph, ids: &[&str]) -> GraphResult<Self> {
        let edges = parent.edges();
        let mut kept = vec![false; edges.len()];
        for id in ids {
            kept[edge_index(parent, &edges, id)?] = true;
        }
        Ok(Subgraph { parent, kept })
    }

    pub fn parent(&self) -> &TwoGraph {
        self.parent
    }

    pub fn kept_edges(&self) -> &[bool] {
        &self.kept
    }

    pub fn num_edges(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }

    /// The subgraph as a 2-graph (all vertices, half-edges and strands kept).
    pub fn materialize(&self) -> TwoGraph {
        self.parent.edge_subgraph(&self.kept)
    }
}

fn edge_index(g: &TwoGraph, edges: &[(usize, usize)], id: &str) -> GraphResult<usize> {
    if let Some(k) = id.strip_prefix('e').and_then(|x| x.parse::<usize>().ok()) {
        if g.half_edge_index(id).is_none() {
            if k >= 1 && k <= edges.len() {
                return Ok(k - 1);
            }
            return Err(GraphError::UnknownEdge(id.to_string()));
        }
    }
    let h = g.half_edge_index(id).ok_or_else(|| GraphError::UnknownEdge(id.to_string()))?;
    edges
        .iter()
        .position(|&(a, b)| a == h || b == h)
        .ok_or_else(|| GraphError::UnknownEdge(format!("{id} (external half-edge)")))
}

/// All `2^E` subgraphs in mask order.
pub fn subgraphs(g: &TwoGraph) -> impl Iterator<Item = Subgraph<'_>> + '_ {
    let e = g.num_edges();
    assert!(e < 64, "too many edges for exhaustive subgraph enumeration");
    (0..1u64 << e).map(move |m| Subgraph::from_mask(g, m))
}

/// Contraction of `h` in `g`.
pub fn contract(g: &TwoGraph, h: &Subgraph<'_>) -> GraphResult<TwoGraph> {
    if h.parent != g {
        return Err(GraphError::Invalid("subgraph does not belong to this graph".into()));
    }
    Ok(g.contract_edge_mask(&h.kept))
}

/// Contraction by edge identifiers.
pub fn contract_edges(g: &TwoGraph, ids: &[&str]) -> GraphResult<TwoGraph> {
    let h = Subgraph::from_edge_ids(g, ids)?;
    contract(g, &h)
}

/// A component-sensitive isomorphism from the boundary of `H` onto the vertex
/// graphs of `G'`: external half-edges of `H` to half-edges of `G'`, external
/// strands of `H` to strands of `G'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InsertionMap {
    /// `(half-edge of H, half-edge of G')`, sorted by the first entry.
    pub half_edges: Vec<(usize, usize)>,
    /// `(strand of H, strand of G')`, sorted by the first entry.
    pub strands: Vec<(usize, usize)>,
}

/// Boundary entries of `h`, one per connected component, each with the index
/// maps from entry labels back to `h`'s half-edges and strands.
fn boundary_entries(h: &TwoGraph) -> Vec<(OneGraph, Vec<usize>, Vec<usize>)> {
    let hidx: HashMap<&str, usize> = h.half_edges().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let sidx: HashMap<&str, usize> = h.strands().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    h.boundary_components()
        .into_iter()
        .map(|b| {
            let hv = b.vertices().iter().map(|l| hidx[l.as_str()]).collect();
            let sv = b.half_edges().iter().map(|l| sidx[l.as_str()]).collect();
            (b, hv, sv)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// All component-sensitive insertion maps of `h` into `gp`.
pub fn insertions(h: &TwoGraph, gp: &TwoGraph) -> Vec<InsertionMap> {
    let entries = boundary_entries(h);
    if entries.len() != gp.num_vertices() {
        return Vec::new();
    }
    let vgs: Vec<OneGraph> = gp.vertex_graphs_multiset();
    let gp_h: HashMap<&str, usize> = gp.half_edges().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let gp_s: HashMap<&str, usize> = gp.strands().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let entry_codes: Vec<CanonicalCode> = entries.iter().map(|e| iso::canonical_form_one(&e.0)).collect();
    let vg_codes: Vec<CanonicalCode> = vgs.iter().map(iso::canonical_form_one).collect();
    let mut classes: BTreeMap<&CanonicalCode, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, c) in entry_codes.iter().enumerate() {
        classes.entry(c).or_default().0.push(i);
    }
    for (v, c) in vg_codes.iter().enumerate() {
        match classes.get_mut(c) {
            Some(cl) => cl.1.push(v),
            None => return Vec::new(),
        }
    }
    if classes.values().any(|(a, b)| a.len() != b.len()) {
        return Vec::new();
    }
    // all bijections entries -> vertices respecting codes
    let mut assignments: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for (ents, verts) in classes.values() {
        let mut next = Vec::new();
        for a in &assignments {
            for p in permutations(ents.len()) {
                let mut b = a.clone();
                for (k, &e) in ents.iter().enumerate() {
                    b.push((e, verts[p[k]]));
                }
                next.push(b);
            }
        }
        assignments = next;
    }
    let mut iso_cache: HashMap<(usize, usize), Vec<(Vec<usize>, Vec<usize>)>> = HashMap::new();
    let mut out = Vec::new();
    for assign in assignments {
        let mut partial: Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)> = vec![(vec![], vec![])];
        for &(e, v) in &assign {
            let isos =
                iso_cache.entry((e, v)).or_insert_with(|| iso::one_graph_isomorphisms(&entries[e].0, &vgs[v])).clone();
            let mut next = Vec::with_capacity(partial.len() * isos.len());
            for (ph, ps) in &partial {
                for (jv, jh) in &isos {
                    let mut nh = ph.clone();
                    let mut ns = ps.clone();
                    for (k, &x) in jv.iter().enumerate() {
                        nh.push((entries[e].1[k], gp_h[vgs[v].vertices()[x].as_str()]));
                    }
                    for (k, &x) in jh.iter().enumerate() {
                        ns.push((entries[e].2[k], gp_s[vgs[v].half_edges()[x].as_str()]));
                    }
                    next.push((nh, ns));
                }
            }
            partial = next;
        }
        for (mut hs, mut ss) in partial {
            hs.sort_unstable();
            ss.sort_unstable();
            out.push(InsertionMap { half_edges: hs, strands: ss });
        }
    }
    out.sort();
    out
}

/// Inserts `h` into `gp` along `i`: the data of `h` plus the edges and edge
/// strands of `gp` pulled back through `i`.
pub fn insert(gp: &TwoGraph, i: &InsertionMap, h: &TwoGraph) -> GraphResult<TwoGraph> {
    let ext_h = h.external_half_edges();
    if i.half_edges.len() != ext_h.len() || i.half_edges.len() != gp.num_half_edges() {
        return Err(GraphError::Invalid("insertion map does not match the graphs".into()));
    }
    let mut back_h = vec![usize::MAX; gp.num_half_edges()];
    for &(a, b) in &i.half_edges {
        if b >= back_h.len() || back_h[b] != usize::MAX || h.iota()[a] != a {
            return Err(GraphError::Invalid("insertion map is not a bijection onto the vertex graphs".into()));
        }
        back_h[b] = a;
    }
    let mut back_s = vec![usize::MAX; gp.num_strands()];
    for &(a, b) in &i.strands {
        if b >= back_s.len() || back_s[b] != usize::MAX {
            return Err(GraphError::Invalid("insertion map is not a bijection on strands".into()));
        }
        back_s[b] = a;
    }
    if back_s.contains(&usize::MAX) {
        return Err(GraphError::Invalid("insertion map misses strands".into()));
    }
    let mut iota = h.iota().to_vec();
    for (a, b) in gp.edges() {
        iota[back_h[a]] = back_h[b];
        iota[back_h[b]] = back_h[a];
    }
    let mut sigma2 = h.sigma2().to_vec();
    for s in 0..gp.num_strands() {
        let t = gp.sigma2()[s];
        if t != s {
            sigma2[back_s[s]] = back_s[t];
        }
    }
    TwoGraph::from_indices(
        h.vertices().to_vec(),
        h.half_edges().to_vec(),
        h.strands().to_vec(),
        h.nu().to_vec(),
        h.mu().to_vec(),
        iota,
        h.sigma1().to_vec(),
        sigma2,
        h.colours().to_vec(),
    )
}

/// One row of the contraction/insertion counting identity for a fixed `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityRow {
    pub subgraph: CanonicalCode,
    pub quotient: CanonicalCode,
    /// Number of subgraphs `H' ⊑ G` with `H' ≅ H` and `G/H' ≅ G̃`.
    pub subgraph_count: u64,
    /// Number of insertions `i` of `H` into `G̃` with `G̃ ∘_i H ≅ G`.
    pub insertion_count: u64,
    /// Total number of insertions of `H` into `G̃`.
    pub all_insertions: u64,
    /// Sum over result classes of the insertion counts (must equal `all_insertions`).
    pub partitioned_insertions: u64,
    pub lhs: BigUint,
    pub rhs: BigUint,
}

/// Evaluates `|{H'}|·|Aut H|·|Aut G̃| = |{i}|·|Aut G|` for every pair of
/// classes `(H, G̃)` arising from subgraphs of `g`.
pub fn duality_rows(g: &TwoGraph) -> Vec<DualityRow> {
    let (gcode, gaut) = iso::canonical_form_with_aut(g);
    let mut groups: BTreeMap<(CanonicalCode, CanonicalCode), (u64, TwoGraph, TwoGraph)> = BTreeMap::new();
    for s in subgraphs(g) {
        let hs = s.materialize();
        let q = g.contract_edge_mask(s.kept_edges());
        let key = (iso::canonical_form(&hs), iso::canonical_form(&q));
        groups.entry(key).or_insert_with(|| (0, hs, q)).0 += 1;
    }
    groups
        .into_iter()
        .map(|((hc, qc), (n, hs, q))| {
            let ins = insertions(&hs, &q);
            let mut by_class: BTreeMap<CanonicalCode, u64> = BTreeMap::new();
            for i in &ins {
                let r = insert(&q, i, &hs).expect("insertion of a listed map");
                *by_class.entry(iso::canonical_form(&r)).or_default() += 1;
            }
            let hit = by_class.get(&gcode).copied().unwrap_or(0);
            let lhs = BigUint::from(n) * iso::automorphism_count(&hs) * iso::automorphism_count(&q);
            let rhs = BigUint::from(hit) * &gaut;
            DualityRow {
                subgraph: hc,
                quotient: qc,
                subgraph_count: n,
                insertion_count: hit,
                all_insertions: ins.len() as u64,
                partitioned_insertions: by_class.values().sum(),
                lhs,
                rhs,
            }
        })
        .collect()
}

/// Result of a bounded contraction-closure computation.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    /// Vertex types in the closure (input types first, then new ones in order found).
    pub types: Vec<OneGraph>,
    /// True if a round produced no new type.
    pub reached_fixpoint: bool,
    pub rounds: usize,
}

/// Iterates "enumerate connected graphs over the current types, add their
/// boundaries as types" until nothing new appears (or `max_rounds` is hit).
pub fn contraction_closure_bounded(v: &[OneGraph], max_boundary_vertices: usize, max_edges: usize) -> ClosureReport {
    contraction_closure_with_rounds(v, max_boundary_vertices, max_edges, 8)
}

pub fn contraction_closure_with_rounds(
    v: &[OneGraph],
    max_boundary_vertices: usize,
    max_edges: usize,
    max_rounds: usize,
) -> ClosureReport {
    let mut types: Vec<OneGraph> = Vec::new();
    let mut codes: Vec<CanonicalCode> = Vec::new();
    for g in v {
        let c = iso::canonical_form_one(g);
        if !codes.contains(&c) {
            codes.push(c);
            types.push(g.clone());
        }
    }
    let mut rounds = 0;
    loop {
        if rounds == max_rounds {
            return ClosureReport { types, reached_fixpoint: false, rounds };
        }
        rounds += 1;
        let class = GluingClass::new(types.clone());
        let mut added = false;
        for e in series::enumerate_connected_class(&class, max_edges) {
            let b = e.graph.boundary();
            if b.num_vertices() > max_boundary_vertices {
                continue;
            }
            let c = iso::canonical_form_one(&b);
            if !codes.contains(&c) {
                codes.push(c);
                types.push(b);
                added = true;
            }
        }
        if !added {
            return ClosureReport { types, reached_fixpoint: true, rounds };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fish_has_four_subgraphs() {
        assert_eq!(subgraphs(&fixtures::fish(true)).count(), 4);
        assert_eq!(subgraphs(&fixtures::polygon_vertex(4)).count(), 1);
    }

    #[test]
    fn contracting_nothing_or_everything() {
        for (_, g) in fixtures::corpus() {
            let none = Subgraph::new(&g, vec![false; g.num_edges()]).unwrap();
            assert_eq!(contract(&g, &none).unwrap(), g);
            let all = Subgraph::new(&g, vec![true; g.num_edges()]).unwrap();
            assert_eq!(contract(&g, &all).unwrap(), g.residue());
        }
    }

    #[test]
    fn edge_ids() {
        let g = fixtures::fish(false);
        let a = contract_edges(&g, &["e1", "e2"]).unwrap();
        assert_eq!(a, g.residue());
        let b = contract_edges(&g, &["w2"]).unwrap();
        assert_eq!(b.num_edges(), 1);
        assert!(contract_edges(&g, &["e3"]).is_err());
        assert!(contract_edges(&g, &["w1"]).is_err());
    }

    #[test]
    fn staged_contraction_agrees() {
        for (_, g) in fixtures::corpus() {
            let e = g.num_edges();
            for m1 in 0..1u64 << e {
                for m2 in 0..1u64 << e {
                    if m1 & m2 != m1 {
                        continue;
                    }
                    let first = g.contract_edge_mask(&Subgraph::from_mask(&g, m1).kept);
                    // the edges of m2 \ m1 survive in the quotient under their half-edge labels
                    let edges = g.edges();
                    let ids: Vec<&str> = (0..e)
                        .filter(|&k| m2 >> k & 1 == 1 && m1 >> k & 1 == 0)
                        .map(|k| g.half_edges()[edges[k].0].as_str())
                        .collect();
                    let staged = contract_edges(&first, &ids).unwrap();
                    let direct = g.contract_edge_mask(&Subgraph::from_mask(&g, m2).kept);
                    assert!(iso::are_isomorphic(&staged, &direct));
                }
            }
        }
    }

    #[test]
    fn insertion_count_matches_boundary_automorphisms() {
        for same in [true, false] {
            let h = fixtures::fish(same);
            let r = h.residue();
            let ins = insertions(&h, &r);
            assert_eq!(BigUint::from(ins.len()), iso::boundary_multiset_aut_count(&h.boundary_components()));
            for i in &ins {
                let g = insert(&r, i, &h).unwrap();
                assert!(iso::are_isomorphic(&g, &h));
            }
        }
    }

    #[test]
    fn incompatible_insertions_are_empty() {
        // a 2-point graph cannot go into a quartic vertex
        let h = fixtures::bgr_melonic_two_point();
        let gp = TwoGraph::corolla("v", &fixtures::pillow(4, 1)).unwrap();
        assert!(insertions(&h, &gp).is_empty());
        // a double-trace boundary cannot be split over two vertices
        let h = fixtures::fish(false);
        let parts = h.residue().vertex_graph(0).components();
        let two = TwoGraph::disjoint_union(&[
            TwoGraph::corolla("x", &parts[0]).unwrap().with_prefix("x"),
            TwoGraph::corolla("y", &parts[1]).unwrap().with_prefix("y"),
        ]);
        assert!(insertions(&h, &two).is_empty());
    }

    #[test]
    fn insert_then_contract_round_trips() {
        for same in [true, false] {
            let g = fixtures::fish(same);
            for s in subgraphs(&g) {
                let hs = s.materialize();
                let q = g.contract_edge_mask(s.kept_edges());
                for i in insertions(&hs, &q) {
                    let r = insert(&q, &i, &hs).unwrap();
                    let keep: Vec<bool> = r.edges().iter().map(|&(a, _)| hs.iota()[a] != a).collect();
                    let back = r.contract_edge_mask(&keep);
                    assert!(iso::are_isomorphic(&back, &q));
                }
            }
        }
    }

    #[test]
    fn two_point_insertion_into_propagator_vertex() {
        // contracting the tadpole of the melonic 2-point graph gives a 2-valent
        // dipole vertex; inserting the graph back into that vertex reproduces it
        let h = fixtures::bgr_melonic_two_point();
        let r = h.residue();
        assert_eq!(r.vertex_graph(0).num_vertices(), 2);
        let ins = insertions(&h, &r);
        assert!(!ins.is_empty());
        assert!(iso::are_isomorphic(&insert(&r, &ins[0], &h).unwrap(), &h));
    }

    #[test]
    fn duality_holds_on_fixtures() {
        for (name, g) in fixtures::corpus() {
            if g.num_edges() > 3 {
                continue;
            }
            for row in duality_rows(&g) {
                assert_eq!(row.lhs, row.rhs, "fixture {name}");
                assert_eq!(row.partitioned_insertions, row.all_insertions);
            }
        }
    }

    #[test]
    fn closure_examples() {
        let pillows: Vec<OneGraph> = (1..=4).map(|c| fixtures::pillow(4, c)).collect();
        let rep = contraction_closure_bounded(&pillows, 4, 2);
        let dd = iso::canonical_form_one(&fixtures::double_dipole(4));
        assert!(rep.types.iter().any(|t| iso::canonical_form_one(t) == dd));
        let empty = contraction_closure_bounded(&[], 4, 2);
        assert!(empty.types.is_empty() && empty.reached_fixpoint);
    }
}
