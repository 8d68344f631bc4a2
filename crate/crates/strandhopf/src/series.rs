//! Bounded enumeration of unlabelled 2-graphs over a set of vertex graphs,
//! truncated symmetry-weighted series and the coproduct identity for them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::graph_core::{is_orientable, GraphError, GraphResult, OneGraph, TwoGraph};
use crate::iso::{self, CanonicalCode};
use crate::models::Theory;

/// Largest edge budget accepted by [`check_central_identity`].
pub const MAX_CENTRAL_EDGES: usize = 4;

/// The graphs that may be built from a list of vertex types.
///
/// Edges glue two free half-edges of equal degree with every colour-preserving
/// strand bijection. A graph costs its edge count plus the cost of each vertex type.
#[derive(Clone, Debug)]
pub struct GluingClass {
    pub types: Vec<OneGraph>,
    pub costs: Vec<usize>,
    pub orientable_only: bool,
}

impl GluingClass {
    pub fn new(types: Vec<OneGraph>) -> Self {
        let costs = vec![0; types.len()];
        GluingClass { types, costs, orientable_only: false }
    }

    pub fn with_costs(mut self, costs: Vec<usize>) -> Self {
        assert_eq!(costs.len(), self.types.len());
        self.costs = costs;
        self
    }

    pub fn orientable(mut self, yes: bool) -> Self {
        self.orientable_only = yes;
        self
    }
}

/// An enumerated isomorphism class with its representative.
#[derive(Clone, Debug)]
pub struct ClassGraph {
    pub graph: TwoGraph,
    pub code: CanonicalCode,
    pub automorphisms: BigUint,
    pub edges: usize,
    pub cost: usize,
}

#[derive(Clone)]
struct Seed {
    graph: TwoGraph,
    cost: usize,
}

fn corolla_of(class: &GluingClass, t: usize, k: usize) -> TwoGraph {
    let label = format!("v{k}");
    TwoGraph::corolla(&label, &class.types[t].with_prefix(&format!("{label}:"))).expect("vertex types have no legs")
}

/// Colour-preserving bijections between two strand lists of equal length.
fn strand_bijections(g: &TwoGraph, xs: &[usize], ys: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut used = vec![false; ys.len()];
    let mut cur = Vec::with_capacity(xs.len());
    fn rec(
        g: &TwoGraph,
        xs: &[usize],
        ys: &[usize],
        used: &mut [bool],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let i = cur.len();
        if i == xs.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..ys.len() {
            if !used[j] && g.colours()[xs[i]] == g.colours()[ys[j]] {
                used[j] = true;
                cur.push((xs[i], ys[j]));
                rec(g, xs, ys, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(g, xs, ys, &mut used, &mut cur, &mut out);
    out
}

/// All ways to add one edge between free half-edges of `g`.
fn close_edges(g: &TwoGraph, out: &mut Vec<TwoGraph>) {
    let by_h = g.strands_by_half_edge();
    let free = g.external_half_edges();
    for (i, &a) in free.iter().enumerate() {
        for &b in &free[i + 1..] {
            if by_h[a].len() != by_h[b].len() {
                continue;
            }
            for p in strand_bijections(g, &by_h[a], &by_h[b]) {
                out.push(g.with_edge(a, b, &p));
            }
        }
    }
}

fn children(class: &GluingClass, seed: &Seed, budget: usize) -> Vec<Seed> {
    let mut out = Vec::new();
    if seed.cost + 1 > budget {
        return out;
    }
    let mut glued = Vec::new();
    close_edges(&seed.graph, &mut glued);
    out.extend(glued.into_iter().map(|graph| Seed { graph, cost: seed.cost + 1 }));
    let free = seed.graph.external_half_edges();
    let k = seed.graph.num_vertices();
    for t in 0..class.types.len() {
        let cost = seed.cost + 1 + class.costs[t];
        if cost > budget {
            continue;
        }
        let vertex = corolla_of(class, t, k);
        let g = TwoGraph::disjoint_union(&[seed.graph.clone(), vertex]);
        let by_h = g.strands_by_half_edge();
        let nh = seed.graph.num_half_edges();
        for &a in &free {
            for b in nh..g.num_half_edges() {
                if by_h[a].len() != by_h[b].len() {
                    continue;
                }
                for p in strand_bijections(&g, &by_h[a], &by_h[b]) {
                    out.push(Seed { graph: g.with_edge(a, b, &p), cost });
                }
            }
        }
    }
    out
}

fn finish(seeds: Vec<Seed>, orientable_only: bool) -> Vec<(CanonicalCode, BigUint, Seed)> {
    let found: Vec<(CanonicalCode, BigUint, Seed)> = seeds
        .into_par_iter()
        .filter(|s| !orientable_only || is_orientable(&s.graph))
        .map(|s| {
            let (c, a) = iso::canonical_form_with_aut(&s.graph);
            (c, a, s)
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out: Vec<_> = found.into_iter().filter(|(c, _, _)| seen.insert(c.clone())).collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// All connected classes with cost at most `budget`, ordered by edge count
/// then canonical code.
///
/// Every connected graph with `E + 1` edges arises from one with `E` edges by
/// closing a non-bridge edge or by attaching a leaf vertex, so growing level by
/// level is exhaustive. Orientability is inherited by these subgraphs, so the
/// filter can prune at every level.
pub fn enumerate_connected_class(class: &GluingClass, budget: usize) -> Vec<ClassGraph> {
    let mut level: Vec<Seed> = (0..class.types.len())
        .filter(|&t| class.costs[t] <= budget)
        .map(|t| Seed { graph: corolla_of(class, t, 0), cost: class.costs[t] })
        .collect();
    let mut out = Vec::new();
    let mut edges = 0;
    while !level.is_empty() {
        let found = finish(level, class.orientable_only);
        let next: Vec<Seed> = found.par_iter().flat_map_iter(|(_, _, s)| children(class, s, budget)).collect();
        out.extend(found.into_iter().map(|(code, automorphisms, s)| ClassGraph {
            graph: s.graph,
            code,
            automorphisms,
            edges,
            cost: s.cost,
        }));
        level = next;
        edges += 1;
    }
    out
}

/// All classes (connected or not) with at most `max_components` components and
/// total cost at most `budget`. Disconnected classes are multisets of connected
/// ones; their automorphism groups include the wreath factor.
pub fn enumerate_class(class: &GluingClass, budget: usize, max_components: usize) -> Vec<ClassGraph> {
    let conn = enumerate_connected_class(class, budget);
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(0, Vec::new(), 0)];
    while let Some((start, parts, cost)) = stack.pop() {
        if !parts.is_empty() {
            out.push(parts.clone());
        }
        if parts.len() == max_components {
            continue;
        }
        for (i, c) in conn.iter().enumerate().skip(start) {
            if cost + c.cost <= budget {
                let mut p = parts.clone();
                p.push(i);
                stack.push((i, p, cost + c.cost));
            }
        }
    }
    let mut res: Vec<ClassGraph> = out
        .into_par_iter()
        .map(|parts| {
            if parts.len() == 1 {
                return conn[parts[0]].clone();
            }
            let gs: Vec<TwoGraph> =
                parts.iter().enumerate().map(|(k, &i)| conn[i].graph.with_prefix(&format!("c{k}:"))).collect();
            let graph = TwoGraph::disjoint_union(&gs);
            let (code, automorphisms) = iso::canonical_form_with_aut(&graph);
            ClassGraph {
                edges: graph.num_edges(),
                cost: parts.iter().map(|&i| conn[i].cost).sum(),
                graph,
                code,
                automorphisms,
            }
        })
        .collect();
    res.sort_by(|a, b| (a.edges, &a.code).cmp(&(b.edges, &b.code)));
    res
}

/// Number of components allowed by default when disconnected graphs are requested.
pub const DEFAULT_MAX_COMPONENTS: usize = 2;

/// Classes of 2-graphs over the theory's interaction vertices with at most
/// `max_edges` edges, optionally connected and optionally with a fixed boundary.
pub fn enumerate(theory: &Theory, max_edges: usize, connected: bool, boundary: Option<&OneGraph>) -> Vec<ClassGraph> {
    enumerate_with_components(theory, max_edges, connected, boundary, DEFAULT_MAX_COMPONENTS)
}

pub fn enumerate_with_components(
    theory: &Theory,
    max_edges: usize,
    connected: bool,
    boundary: Option<&OneGraph>,
    max_components: usize,
) -> Vec<ClassGraph> {
    let class = theory.gluing_class();
    let all = if connected {
        enumerate_connected_class(&class, max_edges)
    } else {
        enumerate_class(&class, max_edges, max_components)
    };
    match boundary {
        None => all,
        Some(b) => {
            let want = iso::canonical_form_one(b);
            all.into_iter().filter(|c| iso::canonical_form_one(&c.graph.boundary()) == want).collect()
        }
    }
}

/// A truncated series `Σ Γ/|Aut Γ|` over enumerated classes.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    pub boundary: Option<OneGraph>,
    pub connected: bool,
    pub max_edges: usize,
    pub terms: BTreeMap<CanonicalCode, BigRational>,
}

impl TruncatedSeries {
    pub fn new(theory: &Theory, max_edges: usize, connected: bool, boundary: Option<&OneGraph>) -> Self {
        let terms = enumerate(theory, max_edges, connected, boundary)
            .into_iter()
            .map(|c| (c.code, inverse(&c.automorphisms)))
            .collect();
        TruncatedSeries { boundary: boundary.cloned(), connected, max_edges, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, code: &CanonicalCode) -> BigRational {
        self.terms.get(code).cloned().unwrap_or_else(BigRational::zero)
    }
}

pub(crate) fn inverse(n: &BigUint) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n.clone()))
}

fn big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Options for [`check_central_identity_with`].
#[derive(Clone, Copy, Debug)]
pub struct CentralOptions {
    pub max_edges: usize,
    /// Components of the graphs on the left-hand side (1 = connected only).
    pub max_components: usize,
    /// Restrict to bridgeless graphs and subgraphs with bridgeless components.
    pub bridgeless: bool,
}

/// One coefficient comparison.
#[derive(Clone, Debug, Serialize)]
pub struct PairRow {
    pub code_left: String,
    pub code_right: String,
    pub lhs_coeff: String,
    pub rhs_coeff: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Outcome of a central identity check.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub theory: String,
    pub max_edges: usize,
    pub max_components: usize,
    pub bridgeless: bool,
    pub pass: bool,
    /// Number of right-hand factors whose graph has a vertex with a disconnected vertex graph.
    pub multi_trace_right_factors: usize,
    pub pairs: Vec<PairRow>,
}

impl Report {
    pub fn mismatches(&self) -> impl Iterator<Item = &PairRow> {
        self.pairs.iter().filter(|p| !p.matches)
    }
}

/// Checks `ΔX = Σ_Γ̃ (Π_v |Aut γ_v| X^{γ_v}) ⊗ Γ̃/|Aut Γ̃|` truncated at
/// `max_edges` total edges, over connected graphs.
pub fn check_central_identity(theory: &Theory, max_edges: usize) -> GraphResult<Report> {
    check_central_identity_with(theory, CentralOptions { max_edges, max_components: 1, bridgeless: false })
}

pub fn check_central_identity_with(theory: &Theory, opts: CentralOptions) -> GraphResult<Report> {
    let n = opts.max_edges;
    if n > MAX_CENTRAL_EDGES {
        return Err(GraphError::Invalid(format!(
            "central identity check supports at most {MAX_CENTRAL_EDGES} edges, got {n}"
        )));
    }
    if opts.max_components == 0 {
        return Err(GraphError::Invalid("max_components must be at least 1".into()));
    }
    let class = theory.gluing_class();
    let keep = |g: &TwoGraph| !opts.bridgeless || g.is_bridgeless();

    // left-hand side: Σ_Γ Σ_Θ Θ ⊗ Γ/Θ / |Aut Γ|
    let gammas: Vec<ClassGraph> =
        enumerate_class(&class, n, opts.max_components).into_iter().filter(|c| keep(&c.graph)).collect();
    let lhs_parts: Vec<Vec<((CanonicalCode, CanonicalCode), BigRational)>> = gammas
        .par_iter()
        .map(|c| {
            let w = inverse(&c.automorphisms);
            let e = c.graph.num_edges();
            (0..1u64 << e)
                .filter_map(|m| {
                    let mask: Vec<bool> = (0..e).map(|k| m >> k & 1 == 1).collect();
                    let theta = c.graph.edge_subgraph(&mask);
                    if opts.bridgeless && !theta.is_bridgeless() {
                        return None;
                    }
                    let q = c.graph.contract_edge_mask(&mask);
                    Some(((iso::canonical_form(&theta), iso::canonical_form(&q)), w.clone()))
                })
                .collect()
        })
        .collect();
    let mut lhs: BTreeMap<(CanonicalCode, CanonicalCode), BigRational> = BTreeMap::new();
    for part in lhs_parts {
        for (k, w) in part {
            *lhs.entry(k).or_insert_with(BigRational::zero) += w;
        }
    }

    // insertable pieces: connected graphs grouped by boundary
    let mut pieces: BTreeMap<CanonicalCode, Vec<ClassGraph>> = BTreeMap::new();
    for c in enumerate_connected_class(&class, n) {
        if keep(&c.graph) {
            pieces.entry(iso::canonical_form_one(&c.graph.boundary())).or_default().push(c);
        }
    }
    let type_codes: Vec<CanonicalCode> = pieces.keys().cloned().collect();
    let types: Vec<OneGraph> = pieces.values().map(|v| v[0].graph.boundary()).collect();
    let costs: Vec<usize> = pieces.values().map(|v| v.iter().map(|c| c.edges).min().unwrap_or(0)).collect();
    let type_index: HashMap<CanonicalCode, usize> =
        type_codes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let tilde_class = GluingClass { types, costs, orientable_only: class.orientable_only };

    // right-hand side
    let tildes: Vec<ClassGraph> =
        enumerate_class(&tilde_class, n, opts.max_components).into_iter().filter(|c| keep(&c.graph)).collect();
    let mut multi_trace = 0;
    let rhs_parts: Vec<(bool, Vec<((CanonicalCode, CanonicalCode), BigRational)>)> = tildes
        .par_iter()
        .map(|t| {
            let vgs: Vec<OneGraph> = (0..t.graph.num_vertices()).map(|v| t.graph.vertex_graph(v)).collect();
            let multi = vgs.iter().any(|g| g.num_components() > 1);
            let mut weight = inverse(&t.automorphisms);
            let mut slots = Vec::new();
            for g in &vgs {
                let (code, aut) = iso::canonical_form_one_with_aut(g);
                weight *= big(&aut);
                slots.push(&pieces[&code]);
                debug_assert!(type_index.contains_key(&code));
            }
            let room = n - t.edges;
            let mut rows = Vec::new();
            let mut choice: Vec<usize> = Vec::new();
            expand(&slots, room, &mut choice, &mut |picked: &[usize]| {
                let parts: Vec<CanonicalCode> =
                    picked.iter().enumerate().map(|(v, &i)| slots[v][i].code.clone()).collect();
                let mut w = weight.clone();
                for (v, &i) in picked.iter().enumerate() {
                    w /= big(&slots[v][i].automorphisms);
                }
                rows.push(((CanonicalCode::union(&parts), t.code.clone()), w));
            });
            (multi, rows)
        })
        .collect();
    let mut rhs: BTreeMap<(CanonicalCode, CanonicalCode), BigRational> = BTreeMap::new();
    for (multi, part) in rhs_parts {
        if multi {
            multi_trace += 1;
        }
        for (k, w) in part {
            *rhs.entry(k).or_insert_with(BigRational::zero) += w;
        }
    }

    let keys: BTreeSet<&(CanonicalCode, CanonicalCode)> = lhs.keys().chain(rhs.keys()).collect();
    let zero = BigRational::zero();
    let pairs: Vec<PairRow> = keys
        .into_iter()
        .map(|k| {
            let l = lhs.get(k).unwrap_or(&zero);
            let r = rhs.get(k).unwrap_or(&zero);
            PairRow {
                code_left: k.0.to_hex(),
                code_right: k.1.to_hex(),
                lhs_coeff: l.to_string(),
                rhs_coeff: r.to_string(),
                matches: l == r,
            }
        })
        .collect();
    Ok(Report {
        theory: theory.name.clone(),
        max_edges: n,
        max_components: opts.max_components,
        bridgeless: opts.bridgeless,
        pass: pairs.iter().all(|p| p.matches),
        multi_trace_right_factors: multi_trace,
        pairs,
    })
}

/// Calls `f` with every choice of one piece per slot whose edge total fits in `room`.
fn expand(slots: &[&Vec<ClassGraph>], room: usize, choice: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    let v = choice.len();
    if v == slots.len() {
        f(choice);
        return;
    }
    for (i, c) in slots[v].iter().enumerate() {
        if c.edges <= room {
            choice.push(i);
            expand(slots, room - c.edges, choice, f);
            choice.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::iso::brute_force;
    use crate::models::Theory;

    fn factorial(n: usize) -> BigUint {
        (1..=n).fold(BigUint::one(), |a, k| a * BigUint::from(k))
    }

    /// Σ 1/|Aut Γ| over classes with a fixed vertex multiset equals the number
    /// of labelled gluings divided by `Π m_t! |Aut γ_t|^{m_t}` (orbit counting).
    fn labelled_gluings(types: &[OneGraph], mult: &[usize], edges: usize, connected: bool) -> (BigRational, usize) {
        let mut parts = Vec::new();
        for (t, &m) in mult.iter().enumerate() {
            for _ in 0..m {
                let k = parts.len();
                parts.push(TwoGraph::corolla(&format!("v{k}"), &types[t].with_prefix(&format!("v{k}:"))).unwrap());
            }
        }
        let g = TwoGraph::disjoint_union(&parts);
        let mut count = 0usize;
        let mut reps = BTreeSet::new();
        fn rec(
            g: &TwoGraph,
            left: usize,
            start: usize,
            connected: bool,
            count: &mut usize,
            reps: &mut BTreeSet<CanonicalCode>,
        ) {
            if left == 0 {
                if !connected || g.is_connected() {
                    *count += 1;
                    reps.insert(iso::canonical_form(g));
                }
                return;
            }
            let by_h = g.strands_by_half_edge();
            let free = g.external_half_edges();
            // pair the first free half-edge at index ≥ start with a later one, or leave it free
            for (i, &a) in free.iter().enumerate() {
                if a < start {
                    continue;
                }
                for &b in &free[i + 1..] {
                    if by_h[a].len() != by_h[b].len() {
                        continue;
                    }
                    for p in strand_bijections(g, &by_h[a], &by_h[b]) {
                        rec(&g.with_edge(a, b, &p), left - 1, a + 1, connected, count, reps);
                    }
                }
            }
        }
        rec(&g, edges, 0, connected, &mut count, &mut reps);
        let mut denom = BigUint::one();
        for (t, &m) in mult.iter().enumerate() {
            denom *= factorial(m) * BigUint::from(brute_force::one_graph_automorphism_count(&types[t])).pow(m as u32);
        }
        (BigRational::new(BigInt::from(count), BigInt::from(denom)), reps.len())
    }

    fn burnside_check(types: Vec<OneGraph>, max_edges: usize) {
        let class = GluingClass::new(types.clone());
        let found = enumerate_class(&class, max_edges, 3);
        let conn = enumerate_connected_class(&class, max_edges);
        // group enumerated classes by (vertex multiset, edges)
        let type_codes: Vec<CanonicalCode> = types.iter().map(iso::canonical_form_one).collect();
        let key = |g: &TwoGraph| -> Vec<usize> {
            let mut m = vec![0; types.len()];
            for v in 0..g.num_vertices() {
                let c = iso::canonical_form_one(&g.vertex_graph(v));
                m[type_codes.iter().position(|x| *x == c).unwrap()] += 1;
            }
            m
        };
        for (list, connected) in [(&found, false), (&conn, true)] {
            let mut sums: BTreeMap<(Vec<usize>, usize), (BigRational, usize)> = BTreeMap::new();
            for c in list.iter() {
                let e = sums.entry((key(&c.graph), c.edges)).or_insert((BigRational::zero(), 0));
                e.0 += inverse(&c.automorphisms);
                e.1 += 1;
            }
            for ((mult, edges), (sum, n)) in sums {
                if !connected && mult.iter().sum::<usize>() > 3 {
                    continue;
                }
                let (oracle, classes) = labelled_gluings(&types, &mult, edges, connected);
                assert_eq!(sum, oracle, "multiset {mult:?}, {edges} edges, connected {connected}");
                if connected || mult.iter().sum::<usize>() <= 3 {
                    assert_eq!(n, classes);
                }
            }
        }
    }

    #[test]
    fn burnside_matrix_quartic() {
        burnside_check(vec![fixtures::polygon(4)], 2);
    }

    #[test]
    fn burnside_mixed_polygons() {
        burnside_check(vec![fixtures::polygon(1), fixtures::polygon(2), fixtures::polygon(3)], 2);
    }

    #[test]
    fn burnside_coloured_rank3() {
        burnside_check((1..=3).map(|c| fixtures::pillow(3, c)).collect(), 2);
    }

    #[test]
    fn matrix_phi4_one_edge() {
        let t = Theory::phi4();
        let one: Vec<ClassGraph> = enumerate(&t, 1, true, None).into_iter().filter(|c| c.edges == 1).collect();
        // a self-loop on adjacent or opposite corners, straight or twisted, plus
        // one bridge between two vertices (a vertex reflection untwists it)
        assert_eq!(one.len(), 5);
        assert_eq!(one.iter().filter(|c| c.graph.num_vertices() == 1).count(), 4);
        for c in &one {
            assert_eq!(BigUint::from(brute_force::automorphism_count(&c.graph)), c.automorphisms);
        }
    }

    #[test]
    fn zero_edges_is_the_vertex_set() {
        let t = Theory::phi4();
        let conn = enumerate(&t, 0, true, None);
        assert_eq!(conn.len(), 1);
        assert_eq!(conn[0].automorphisms, BigUint::from(8u32));
        let all = enumerate(&t, 0, false, None);
        assert_eq!(all.len(), 2);
        assert_eq!(all[1].automorphisms, BigUint::from(128u32));
    }

    #[test]
    fn coloured_quartic_boundary_filter_finds_fish() {
        let t = Theory::bgr();
        for same in [true, false] {
            let fish = fixtures::fish(same);
            let b = fish.boundary();
            let found = enumerate(&t, 2, true, Some(&b));
            assert!(found.iter().any(|c| c.code == iso::canonical_form(&fish)));
            assert!(found.iter().all(|c| iso::are_isomorphic_one(&c.graph.boundary(), &b)));
        }
    }

    #[test]
    fn series_coefficients() {
        let s = TruncatedSeries::new(&Theory::phi4(), 2, true, None);
        for (code, coeff) in &s.terms {
            let g = code.decode_two_graph().unwrap();
            assert_eq!(*coeff, inverse(&BigUint::from(brute_force::automorphism_count(&g))));
        }
    }

    #[test]
    fn orientable_filter() {
        let t = Theory::gw4();
        for c in enumerate(&t, 2, false, None) {
            assert!(is_orientable(&c.graph));
        }
    }

    #[test]
    fn central_identity_small() {
        let r = check_central_identity(&Theory::phi4(), 0).unwrap();
        assert!(r.pass);
        assert_eq!(r.pairs.len(), 1);
        let r = check_central_identity(&Theory::phi4(), 1).unwrap();
        assert!(r.pass, "{:?}", r.mismatches().collect::<Vec<_>>());
        assert!(check_central_identity(&Theory::phi4(), 5).is_err());
    }
}
