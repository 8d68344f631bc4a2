//! Canonical forms, isomorphism tests and automorphism counts for 1-graphs and
//! 2-graphs.
//!
//! A graph is turned into a typed incidence structure (vertices, half-edges and
//! strands as node classes; `nu`, `mu`, `iota`, `sigma1`, `sigma2` as typed
//! relations). Colour refinement followed by individualization explores a
//! search tree whose leaves are orderings of the nodes; the least leaf
//! encoding is the canonical code and the number of leaves attaining it is the
//! order of the automorphism group.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::graph_core::{GraphError, GraphResult, OneGraph, TwoGraph};

const TAG_TWO: u32 = 2;
const TAG_ONE: u32 = 1;

/// Total-ordered structural encoding; equal iff the graphs are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CanonicalCode(Vec<u32>);

impl CanonicalCode {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn from_words(words: Vec<u32>) -> Self {
        CanonicalCode(words)
    }

    /// Compact hexadecimal form (LEB128 words).
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.0.len() * 2);
        for &w in &self.0 {
            let mut x = w;
            loop {
                let mut byte = (x & 0x7f) as u8;
                x >>= 7;
                if x != 0 {
                    byte |= 0x80;
                }
                out.push_str(&format!("{byte:02x}"));
                if x == 0 {
                    break;
                }
            }
        }
        out
    }

    pub fn from_hex(s: &str) -> GraphResult<Self> {
        let bad = || GraphError::Invalid(format!("malformed canonical code `{s}`"));
        if !s.len().is_multiple_of(2) {
            return Err(bad());
        }
        let mut words = Vec::new();
        let mut acc: u64 = 0;
        let mut shift = 0;
        for i in (0..s.len()).step_by(2) {
            let byte = u8::from_str_radix(&s[i..i + 2], 16).map_err(|_| bad())?;
            acc |= u64::from(byte & 0x7f) << shift;
            shift += 7;
            if shift > 35 {
                return Err(bad());
            }
            if byte & 0x80 == 0 {
                words.push(u32::try_from(acc).map_err(|_| bad())?);
                acc = 0;
                shift = 0;
            }
        }
        if shift != 0 {
            return Err(bad());
        }
        Ok(CanonicalCode(words))
    }

    /// True for codes of 2-graphs.
    pub fn is_two_graph(&self) -> bool {
        self.0.first() == Some(&TAG_TWO)
    }

    /// Number of connected components recorded in the code.
    pub fn num_components(&self) -> usize {
        self.0.get(1).copied().unwrap_or(0) as usize
    }

    /// Codes of the connected components (each a one-component code).
    pub fn components(&self) -> Vec<CanonicalCode> {
        let tag = self.0[0];
        split_components(&self.0)
            .into_iter()
            .map(|body| {
                let mut w = vec![tag, 1, body.len() as u32];
                w.extend_from_slice(body);
                CanonicalCode(w)
            })
            .collect()
    }

    /// Number of internal edges of a 2-graph code.
    pub fn num_edges(&self) -> usize {
        if !self.is_two_graph() {
            return 0;
        }
        split_components(&self.0)
            .into_iter()
            .map(|body| {
                let nh = body[1] as usize;
                (0..nh).filter(|&h| body[3 + 2 * h + 1] as usize > h).count()
            })
            .sum()
    }

    /// Number of vertices of a 2-graph code.
    pub fn num_vertices(&self) -> usize {
        split_components(&self.0).into_iter().map(|body| body[0] as usize).sum()
    }

    /// Joins component codes into the code of their disjoint union.
    pub fn union(parts: &[CanonicalCode]) -> CanonicalCode {
        let tag = parts.first().map(|p| p.0[0]).unwrap_or(TAG_TWO);
        let mut bodies: Vec<&[u32]> = parts.iter().flat_map(|p| split_components(&p.0)).collect();
        bodies.sort();
        assemble(tag, &bodies)
    }

    /// Rebuilds a representative 2-graph (labels `v<i>`, `h<i>`, `s<i>`).
    pub fn decode_two_graph(&self) -> GraphResult<TwoGraph> {
        if !self.is_two_graph() {
            return Err(GraphError::Invalid("not a 2-graph code".into()));
        }
        let parts: Vec<TwoGraph> = split_components(&self.0).into_iter().map(decode_two_body).collect();
        let g = TwoGraph::disjoint_union(&parts);
        let nv = g.num_vertices();
        let nh = g.num_half_edges();
        let ns = g.num_strands();
        let mut g = g;
        relabel_sequential(&mut g, nv, nh, ns);
        Ok(g)
    }

    /// Rebuilds a representative 1-graph (labels `n<i>`, `h<i>`).
    pub fn decode_one_graph(&self) -> GraphResult<OneGraph> {
        if self.0.first() != Some(&TAG_ONE) {
            return Err(GraphError::Invalid("not a 1-graph code".into()));
        }
        let mut vertices = Vec::new();
        let mut half_edges = Vec::new();
        let mut attach = Vec::new();
        let mut pairing = Vec::new();
        let mut colour = Vec::new();
        for body in split_components(&self.0) {
            let (nv, nh) = (body[0] as usize, body[1] as usize);
            let vo = vertices.len();
            let ho = half_edges.len();
            for i in 0..nv {
                vertices.push(format!("n{}", vo + i));
            }
            for i in 0..nh {
                let w = &body[2 + 3 * i..5 + 3 * i];
                half_edges.push(format!("h{}", ho + i));
                attach.push(vo + w[0] as usize);
                pairing.push(ho + w[1] as usize);
                colour.push(w[2]);
            }
        }
        Ok(OneGraph::from_parts(vertices, half_edges, attach, pairing, colour))
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn split_components(words: &[u32]) -> Vec<&[u32]> {
    let n = words[1] as usize;
    let mut out = Vec::with_capacity(n);
    let mut i = 2;
    for _ in 0..n {
        let len = words[i] as usize;
        out.push(&words[i + 1..i + 1 + len]);
        i += 1 + len;
    }
    out
}

fn assemble(tag: u32, bodies: &[&[u32]]) -> CanonicalCode {
    let mut w = vec![tag, bodies.len() as u32];
    for b in bodies {
        w.push(b.len() as u32);
        w.extend_from_slice(b);
    }
    CanonicalCode(w)
}

fn decode_two_body(body: &[u32]) -> TwoGraph {
    let (nv, nh, ns) = (body[0] as usize, body[1] as usize, body[2] as usize);
    let mut nu = Vec::with_capacity(nh);
    let mut iota = Vec::with_capacity(nh);
    for i in 0..nh {
        nu.push(body[3 + 2 * i] as usize);
        iota.push(body[4 + 2 * i] as usize);
    }
    let base = 3 + 2 * nh;
    let mut mu = Vec::with_capacity(ns);
    let mut s1 = Vec::with_capacity(ns);
    let mut s2 = Vec::with_capacity(ns);
    let mut col = Vec::with_capacity(ns);
    for i in 0..ns {
        let w = &body[base + 4 * i..base + 4 * i + 4];
        mu.push(w[0] as usize);
        s1.push(w[1] as usize);
        s2.push(w[2] as usize);
        col.push(w[3]);
    }
    TwoGraph::from_parts(
        (0..nv).map(|i| format!("v{i}")).collect(),
        (0..nh).map(|i| format!("h{i}")).collect(),
        (0..ns).map(|i| format!("s{i}")).collect(),
        nu,
        mu,
        iota,
        s1,
        s2,
        col,
    )
}

fn relabel_sequential(g: &mut TwoGraph, nv: usize, nh: usize, ns: usize) {
    *g = g.relabelled(
        (0..nv).map(|i| format!("v{i}")).collect(),
        (0..nh).map(|i| format!("h{i}")).collect(),
        (0..ns).map(|i| format!("s{i}")).collect(),
    );
}

// ---------------------------------------------------------------------------
// search engine
// ---------------------------------------------------------------------------

/// Typed incidence structure with symmetric adjacency in CSR form.
struct Structure {
    init: Vec<u64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    tags: Vec<u8>,
}

impl Structure {
    fn new(init: Vec<u64>, edges: &[(usize, usize, u8)]) -> Self {
        let n = init.len();
        let mut deg = vec![0usize; n + 1];
        for &(a, _, _) in edges {
            deg[a + 1] += 1;
        }
        for i in 0..n {
            deg[i + 1] += deg[i];
        }
        let mut fill = deg.clone();
        let mut targets = vec![0u32; edges.len()];
        let mut tags = vec![0u8; edges.len()];
        for &(a, b, t) in edges {
            targets[fill[a]] = b as u32;
            tags[fill[a]] = t;
            fill[a] += 1;
        }
        Structure { init, offsets: deg, targets, tags }
    }

    fn len(&self) -> usize {
        self.init.len()
    }

    fn initial_colours(&self) -> Vec<u32> {
        dense_ranks(&self.init)
    }

    /// Refines until stable. Colours are dense ranks; the order of existing
    /// classes is preserved, so the refinement is label-invariant.
    fn refine(&self, colours: &mut Vec<u32>) {
        let n = self.len();
        let mut classes = count_classes(colours);
        let mut sig: Vec<(u32, u64)> = vec![(0, 0); n];
        loop {
            if classes == n {
                return;
            }
            for x in 0..n {
                let mut acc: u64 = 0;
                for k in self.offsets[x]..self.offsets[x + 1] {
                    let y = self.targets[k] as usize;
                    acc = acc.wrapping_add(mix((u64::from(self.tags[k]) << 32) | u64::from(colours[y])));
                }
                sig[x] = (colours[x], acc);
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_unstable_by_key(|&x| sig[x]);
            let mut rank = 0u32;
            for i in 0..n {
                if i > 0 && sig[order[i]] != sig[order[i - 1]] {
                    rank += 1;
                }
                colours[order[i]] = rank;
            }
            let new_classes = rank as usize + 1;
            if new_classes == classes {
                return;
            }
            classes = new_classes;
        }
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn dense_ranks(keys: &[u64]) -> Vec<u32> {
    let mut sorted: Vec<u64> = keys.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
}

fn count_classes(colours: &[u32]) -> usize {
    colours.iter().copied().max().map_or(0, |m| m as usize + 1)
}

struct SearchResult {
    code: Vec<u32>,
    /// Leaf labellings (node -> position) attaining the best code.
    best_leaves: Vec<Vec<u32>>,
    count: u64,
}

fn search(st: &Structure, encode: &dyn Fn(&[u32]) -> Vec<u32>, keep_all: bool) -> SearchResult {
    let mut colours = st.initial_colours();
    st.refine(&mut colours);
    let mut res = SearchResult { code: Vec::new(), best_leaves: Vec::new(), count: 0 };
    let mut have = false;
    descend(st, colours, encode, keep_all, &mut res, &mut have);
    res
}

fn descend(
    st: &Structure,
    colours: Vec<u32>,
    encode: &dyn Fn(&[u32]) -> Vec<u32>,
    keep_all: bool,
    res: &mut SearchResult,
    have: &mut bool,
) {
    let n = st.len();
    if count_classes(&colours) == n {
        let code = encode(&colours);
        if !*have || code < res.code {
            *have = true;
            res.code = code;
            res.count = 1;
            res.best_leaves.clear();
            res.best_leaves.push(colours);
        } else if code == res.code {
            res.count += 1;
            if keep_all {
                res.best_leaves.push(colours);
            }
        }
        return;
    }
    // first non-singleton cell
    let mut size = vec![0u32; n];
    for &c in &colours {
        size[c as usize] += 1;
    }
    let target = (0..n).find(|&c| size[c] > 1).unwrap() as u32;
    let members: Vec<usize> = (0..n).filter(|&x| colours[x] == target).collect();
    for &x in &members {
        let mut c: Vec<u32> = colours.iter().map(|&k| 2 * k + u32::from(k == target)).collect();
        c[x] = 2 * target;
        let mut c = dense_ranks(&c.iter().map(|&k| u64::from(k)).collect::<Vec<_>>());
        st.refine(&mut c);
        descend(st, c, encode, keep_all, res, have);
    }
}

// ---------------------------------------------------------------------------
// 2-graphs
// ---------------------------------------------------------------------------

fn two_structure(g: &TwoGraph) -> Structure {
    let (nv, nh, ns) = (g.num_vertices(), g.num_half_edges(), g.num_strands());
    let mut init = Vec::with_capacity(nv + nh + ns);
    let by_v = g.half_edges_by_vertex();
    let by_h = g.strands_by_half_edge();
    let mut strands_at_v = vec![0u64; nv];
    for &h in g.mu() {
        strands_at_v[g.nu()[h]] += 1;
    }
    for v in 0..nv {
        init.push((by_v[v].len() as u64) << 24 | strands_at_v[v]);
    }
    for h in 0..nh {
        init.push(1 << 56 | u64::from(g.iota()[h] == h) << 40 | by_h[h].len() as u64);
    }
    for s in 0..ns {
        init.push(2 << 56 | u64::from(g.colours()[s]) << 8 | u64::from(g.sigma2()[s] == s));
    }
    let hb = nv;
    let sb = nv + nh;
    let mut edges = Vec::with_capacity(4 * (nh + ns));
    for h in 0..nh {
        edges.push((hb + h, g.nu()[h], 1));
        edges.push((g.nu()[h], hb + h, 2));
        if g.iota()[h] != h {
            edges.push((hb + h, hb + g.iota()[h], 5));
        }
    }
    for s in 0..ns {
        edges.push((sb + s, hb + g.mu()[s], 3));
        edges.push((hb + g.mu()[s], sb + s, 4));
        edges.push((sb + s, sb + g.sigma1()[s], 6));
        if g.sigma2()[s] != s {
            edges.push((sb + s, sb + g.sigma2()[s], 7));
        }
    }
    Structure::new(init, &edges)
}

fn two_encoder(g: &TwoGraph) -> impl Fn(&[u32]) -> Vec<u32> + '_ {
    move |pos: &[u32]| {
        let (nv, nh, ns) = (g.num_vertices(), g.num_half_edges(), g.num_strands());
        let hb = nv;
        let sb = nv + nh;
        let mut inv_h = vec![0usize; nh];
        for h in 0..nh {
            inv_h[pos[hb + h] as usize - hb] = h;
        }
        let mut inv_s = vec![0usize; ns];
        for s in 0..ns {
            inv_s[pos[sb + s] as usize - sb] = s;
        }
        let mut w = Vec::with_capacity(3 + 2 * nh + 4 * ns);
        w.extend_from_slice(&[nv as u32, nh as u32, ns as u32]);
        for &h in &inv_h {
            w.push(pos[g.nu()[h]]);
            w.push(pos[hb + g.iota()[h]] - hb as u32);
        }
        for &s in &inv_s {
            w.push(pos[hb + g.mu()[s]] - hb as u32);
            w.push(pos[sb + g.sigma1()[s]] - sb as u32);
            w.push(pos[sb + g.sigma2()[s]] - sb as u32);
            w.push(g.colours()[s]);
        }
        w
    }
}

/// Canonical code body and automorphism count of a (connected) 2-graph.
fn two_search(g: &TwoGraph, keep_all: bool) -> SearchResult {
    let st = two_structure(g);
    let enc = two_encoder(g);
    search(&st, &enc, keep_all)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Canonical form and automorphism count of a 2-graph, computed per component.
pub fn canonical_form_with_aut(g: &TwoGraph) -> (CanonicalCode, BigUint) {
    if g.num_components() == 1 {
        let r = two_search(g, false);
        return (assemble(TAG_TWO, &[&r.code]), BigUint::from(r.count));
    }
    let comps = g.connected_components();
    let mut bodies: Vec<(Vec<u32>, u64)> = comps
        .iter()
        .map(|c| {
            let r = two_search(c, false);
            (r.code, r.count)
        })
        .collect();
    bodies.sort();
    let aut = wreath_order(&bodies);
    let refs: Vec<&[u32]> = bodies.iter().map(|b| b.0.as_slice()).collect();
    (assemble(TAG_TWO, &refs), aut)
}

fn wreath_order(bodies: &[(Vec<u32>, u64)]) -> BigUint {
    let mut aut = BigUint::one();
    let mut i = 0;
    while i < bodies.len() {
        let mut j = i;
        while j < bodies.len() && bodies[j].0 == bodies[i].0 {
            aut *= BigUint::from(bodies[j].1);
            j += 1;
        }
        aut *= factorial(j - i);
        i = j;
    }
    aut
}

pub fn canonical_form(g: &TwoGraph) -> CanonicalCode {
    canonical_form_with_aut(g).0
}

pub fn are_isomorphic(a: &TwoGraph, b: &TwoGraph) -> bool {
    a.num_vertices() == b.num_vertices()
        && a.num_half_edges() == b.num_half_edges()
        && a.num_strands() == b.num_strands()
        && canonical_form(a) == canonical_form(b)
}

pub fn automorphism_count(g: &TwoGraph) -> BigUint {
    canonical_form_with_aut(g).1
}

/// Canonical representative (decoded from the canonical code).
pub fn canonical_graph(g: &TwoGraph) -> TwoGraph {
    canonical_form(g).decode_two_graph().expect("own code decodes")
}

/// All isomorphisms `a -> b` as index maps `(vertices, half-edges, strands)`.
pub fn two_graph_isomorphisms(a: &TwoGraph, b: &TwoGraph) -> Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    if a.num_vertices() != b.num_vertices()
        || a.num_half_edges() != b.num_half_edges()
        || a.num_strands() != b.num_strands()
    {
        return Vec::new();
    }
    let ra = two_search(a, true);
    let rb = two_search(b, false);
    if ra.code != rb.code {
        return Vec::new();
    }
    let lb = &rb.best_leaves[0];
    let mut inv_b = vec![0usize; lb.len()];
    for (x, &p) in lb.iter().enumerate() {
        inv_b[p as usize] = x;
    }
    let (nv, nh) = (a.num_vertices(), a.num_half_edges());
    ra.best_leaves
        .iter()
        .map(|la| {
            let m: Vec<usize> = la.iter().map(|&p| inv_b[p as usize]).collect();
            let jv = m[..nv].to_vec();
            let jh = m[nv..nv + nh].iter().map(|&x| x - nv).collect();
            let js = m[nv + nh..].iter().map(|&x| x - nv - nh).collect();
            (jv, jh, js)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// 1-graphs
// ---------------------------------------------------------------------------

fn one_structure(g: &OneGraph) -> Structure {
    let (nv, nh) = (g.num_vertices(), g.num_half_edges());
    let mut init = Vec::with_capacity(nv + nh);
    for v in 0..nv {
        init.push(g.degree(v) as u64);
    }
    for h in 0..nh {
        init.push(1 << 56 | u64::from(g.colours()[h]) << 8 | u64::from(g.pairing()[h] == h));
    }
    let mut edges = Vec::new();
    for h in 0..nh {
        edges.push((nv + h, g.attach()[h], 1));
        edges.push((g.attach()[h], nv + h, 2));
        if g.pairing()[h] != h {
            edges.push((nv + h, nv + g.pairing()[h], 5));
        }
    }
    Structure::new(init, &edges)
}

fn one_encoder(g: &OneGraph) -> impl Fn(&[u32]) -> Vec<u32> + '_ {
    move |pos: &[u32]| {
        let (nv, nh) = (g.num_vertices(), g.num_half_edges());
        let mut inv = vec![0usize; nh];
        for h in 0..nh {
            inv[pos[nv + h] as usize - nv] = h;
        }
        let mut w = Vec::with_capacity(2 + 3 * nh);
        w.extend_from_slice(&[nv as u32, nh as u32]);
        for &h in &inv {
            w.push(pos[g.attach()[h]]);
            w.push(pos[nv + g.pairing()[h]] - nv as u32);
            w.push(g.colours()[h]);
        }
        w
    }
}

fn one_search(g: &OneGraph, keep_all: bool) -> SearchResult {
    let st = one_structure(g);
    let enc = one_encoder(g);
    search(&st, &enc, keep_all)
}

pub fn canonical_form_one_with_aut(g: &OneGraph) -> (CanonicalCode, BigUint) {
    let mut bodies: Vec<(Vec<u32>, u64)> = g
        .components()
        .iter()
        .map(|c| {
            let r = one_search(c, false);
            (r.code, r.count)
        })
        .collect();
    bodies.sort();
    let aut = wreath_order(&bodies);
    let refs: Vec<&[u32]> = bodies.iter().map(|b| b.0.as_slice()).collect();
    (assemble(TAG_ONE, &refs), aut)
}

pub fn canonical_form_one(g: &OneGraph) -> CanonicalCode {
    canonical_form_one_with_aut(g).0
}

pub fn are_isomorphic_one(a: &OneGraph, b: &OneGraph) -> bool {
    canonical_form_one(a) == canonical_form_one(b)
}

pub fn one_graph_automorphism_count(g: &OneGraph) -> BigUint {
    canonical_form_one_with_aut(g).1
}

/// All isomorphisms `a -> b` as index maps `(vertices, half-edges)`.
pub fn one_graph_isomorphisms(a: &OneGraph, b: &OneGraph) -> Vec<(Vec<usize>, Vec<usize>)> {
    if a.num_vertices() != b.num_vertices() || a.num_half_edges() != b.num_half_edges() {
        return Vec::new();
    }
    let ra = one_search(a, true);
    let rb = one_search(b, false);
    if ra.code != rb.code {
        return Vec::new();
    }
    let lb = &rb.best_leaves[0];
    let mut inv_b = vec![0usize; lb.len()];
    for (x, &p) in lb.iter().enumerate() {
        inv_b[p as usize] = x;
    }
    let nv = a.num_vertices();
    ra.best_leaves
        .iter()
        .map(|la| {
            let m: Vec<usize> = la.iter().map(|&p| inv_b[p as usize]).collect();
            (m[..nv].to_vec(), m[nv..].iter().map(|&x| x - nv).collect())
        })
        .collect()
}

/// Order of the automorphism group of a multiset of 1-graphs permuting equal
/// entries: product of multiplicity factorials times the entry orders.
pub fn boundary_multiset_aut_count(entries: &[OneGraph]) -> BigUint {
    let mut mult: BTreeMap<CanonicalCode, usize> = BTreeMap::new();
    let mut total = BigUint::one();
    for e in entries {
        let (code, aut) = canonical_form_one_with_aut(e);
        total *= aut;
        *mult.entry(code).or_default() += 1;
    }
    for m in mult.values() {
        total *= factorial(*m);
    }
    total
}

// ---------------------------------------------------------------------------
// brute-force reference
// ---------------------------------------------------------------------------

/// Exhaustive reference implementations, usable for small graphs only.
pub mod brute_force {
    use super::*;

    /// Number of isomorphisms `a -> b` by backtracking over half-edge and
    /// strand bijections.
    pub fn count_isomorphisms(a: &TwoGraph, b: &TwoGraph) -> u64 {
        if a.num_vertices() != b.num_vertices()
            || a.num_half_edges() != b.num_half_edges()
            || a.num_strands() != b.num_strands()
        {
            return 0;
        }
        let nh = a.num_half_edges();
        let mut jh = vec![usize::MAX; nh];
        let mut used_h = vec![false; nh];
        let mut jv = vec![usize::MAX; a.num_vertices()];
        let mut used_v_count = vec![0usize; b.num_vertices()];
        let mut total = 0u64;
        assign_half_edges(a, b, 0, &mut jh, &mut used_h, &mut jv, &mut used_v_count, &mut total);
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_half_edges(
        a: &TwoGraph,
        b: &TwoGraph,
        h: usize,
        jh: &mut Vec<usize>,
        used_h: &mut Vec<bool>,
        jv: &mut Vec<usize>,
        used_v: &mut Vec<usize>,
        total: &mut u64,
    ) {
        if h == a.num_half_edges() {
            let isolated_a = (0..a.num_vertices()).filter(|&v| jv[v] == usize::MAX).count();
            let isolated_b = (0..b.num_vertices()).filter(|&v| used_v[v] == 0).count();
            if isolated_a != isolated_b {
                return;
            }
            let strands = count_strand_maps(a, b, jh);
            let mut f = 1u64;
            for k in 1..=isolated_a as u64 {
                f *= k;
            }
            *total += strands * f;
            return;
        }
        for t in 0..b.num_half_edges() {
            if used_h[t] {
                continue;
            }
            if (a.iota()[h] == h) != (b.iota()[t] == t) || a.half_edge_degree(h) != b.half_edge_degree(t) {
                continue;
            }
            let va = a.nu()[h];
            let vb = b.nu()[t];
            let fresh_v = jv[va] == usize::MAX;
            if fresh_v {
                if used_v[vb] > 0 {
                    continue;
                }
            } else if jv[va] != vb {
                continue;
            }
            let ia = a.iota()[h];
            if ia < h && b.iota()[t] != jh[ia] {
                continue;
            }
            if ia > h && ia != h {
                // partner assigned later; make sure the target partner is free
                let it = b.iota()[t];
                if it != t && used_h[it] {
                    continue;
                }
            }
            jh[h] = t;
            used_h[t] = true;
            if fresh_v {
                jv[va] = vb;
            }
            used_v[vb] += 1;
            assign_half_edges(a, b, h + 1, jh, used_h, jv, used_v, total);
            used_v[vb] -= 1;
            if fresh_v {
                jv[va] = usize::MAX;
            }
            used_h[t] = false;
            jh[h] = usize::MAX;
        }
    }

    fn count_strand_maps(a: &TwoGraph, b: &TwoGraph, jh: &[usize]) -> u64 {
        let ns = a.num_strands();
        let mut js = vec![usize::MAX; ns];
        let mut used = vec![false; ns];
        let mut total = 0u64;
        fn rec(
            a: &TwoGraph,
            b: &TwoGraph,
            jh: &[usize],
            s: usize,
            js: &mut Vec<usize>,
            used: &mut Vec<bool>,
            total: &mut u64,
        ) {
            if s == a.num_strands() {
                let ok = (0..a.num_strands())
                    .all(|x| js[a.sigma1()[x]] == b.sigma1()[js[x]] && js[a.sigma2()[x]] == b.sigma2()[js[x]]);
                if ok {
                    *total += 1;
                }
                return;
            }
            for t in 0..b.num_strands() {
                if used[t] || b.mu()[t] != jh[a.mu()[s]] || b.colours()[t] != a.colours()[s] {
                    continue;
                }
                let p1 = a.sigma1()[s];
                if p1 < s && b.sigma1()[t] != js[p1] {
                    continue;
                }
                let p2 = a.sigma2()[s];
                if p2 < s && b.sigma2()[t] != js[p2] {
                    continue;
                }
                if (p2 == s) != (b.sigma2()[t] == t) {
                    continue;
                }
                js[s] = t;
                used[t] = true;
                rec(a, b, jh, s + 1, js, used, total);
                used[t] = false;
                js[s] = usize::MAX;
            }
        }
        rec(a, b, jh, 0, &mut js, &mut used, &mut total);
        total
    }

    pub fn automorphism_count(g: &TwoGraph) -> u64 {
        count_isomorphisms(g, g)
    }

    pub fn are_isomorphic(a: &TwoGraph, b: &TwoGraph) -> bool {
        count_isomorphisms(a, b) > 0
    }

    /// Automorphisms of a 1-graph by backtracking over half-edge bijections.
    pub fn one_graph_automorphism_count(g: &OneGraph) -> u64 {
        count_one_isomorphisms(g, g)
    }

    pub fn count_one_isomorphisms(a: &OneGraph, b: &OneGraph) -> u64 {
        if a.num_vertices() != b.num_vertices() || a.num_half_edges() != b.num_half_edges() {
            return 0;
        }
        let n = a.num_half_edges();
        let mut jh = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut jv = vec![usize::MAX; a.num_vertices()];
        let mut vused = vec![0usize; b.num_vertices()];
        let mut total = 0;
        #[allow(clippy::too_many_arguments)]
        fn rec(
            a: &OneGraph,
            b: &OneGraph,
            h: usize,
            jh: &mut Vec<usize>,
            used: &mut Vec<bool>,
            jv: &mut Vec<usize>,
            vused: &mut Vec<usize>,
            total: &mut u64,
        ) {
            if h == a.num_half_edges() {
                let ok = (0..h).all(|x| jh[a.pairing()[x]] == b.pairing()[jh[x]]);
                let ia = (0..a.num_vertices()).filter(|&v| jv[v] == usize::MAX).count();
                let ib = (0..b.num_vertices()).filter(|&v| vused[v] == 0).count();
                if ok && ia == ib {
                    *total += (1..=ia as u64).product::<u64>();
                }
                return;
            }
            for t in 0..b.num_half_edges() {
                if used[t] || a.colours()[h] != b.colours()[t] {
                    continue;
                }
                let (va, vb) = (a.attach()[h], b.attach()[t]);
                let fresh = jv[va] == usize::MAX;
                if (fresh && vused[vb] > 0) || (!fresh && jv[va] != vb) {
                    continue;
                }
                let p = a.pairing()[h];
                if p < h && b.pairing()[t] != jh[p] {
                    continue;
                }
                if (p == h) != (b.pairing()[t] == t) {
                    continue;
                }
                jh[h] = t;
                used[t] = true;
                if fresh {
                    jv[va] = vb;
                }
                vused[vb] += 1;
                rec(a, b, h + 1, jh, used, jv, vused, total);
                vused[vb] -= 1;
                if fresh {
                    jv[va] = usize::MAX;
                }
                used[t] = false;
                jh[h] = usize::MAX;
            }
        }
        rec(a, b, 0, &mut jh, &mut used, &mut jv, &mut vused, &mut total);
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_relabel(g: &TwoGraph, rng: &mut ChaCha8Rng) -> TwoGraph {
        let mut pv: Vec<usize> = (0..g.num_vertices()).collect();
        let mut ph: Vec<usize> = (0..g.num_half_edges()).collect();
        let mut ps: Vec<usize> = (0..g.num_strands()).collect();
        pv.shuffle(rng);
        ph.shuffle(rng);
        ps.shuffle(rng);
        g.permuted(&pv, &ph, &ps)
    }

    #[test]
    fn code_is_invariant_under_relabelling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (name, g) in fixtures::corpus() {
            let c = canonical_form(&g);
            for _ in 0..100 {
                let h = random_relabel(&g, &mut rng);
                assert_eq!(canonical_form(&h), c, "fixture {name}");
            }
        }
    }

    #[test]
    fn code_round_trips_through_decoding() {
        for (name, g) in fixtures::corpus() {
            let c = canonical_form(&g);
            let d = c.decode_two_graph().unwrap();
            assert!(d.to_raw().validate().is_valid(), "{name}");
            assert_eq!(canonical_form(&d), c, "{name}");
            assert_eq!(CanonicalCode::from_hex(&c.to_hex()).unwrap(), c);
        }
    }

    #[test]
    fn polygon_automorphisms_are_dihedral() {
        for n in 1..=7 {
            let p = fixtures::polygon(n);
            let expected = if n == 1 { 2 } else { 2 * n as u64 };
            assert_eq!(brute_force::one_graph_automorphism_count(&p), expected);
            assert_eq!(one_graph_automorphism_count(&p), BigUint::from(expected));
        }
    }

    #[test]
    fn empty_graph_has_trivial_group() {
        assert_eq!(automorphism_count(&TwoGraph::default()), BigUint::one());
        assert_eq!(one_graph_automorphism_count(&OneGraph::default()), BigUint::one());
    }

    #[test]
    fn disjoint_copies_give_wreath_order() {
        let g = fixtures::planar_double_loop();
        let a = automorphism_count(&g);
        let two = TwoGraph::disjoint_union(&[g.with_prefix("x"), g.with_prefix("y")]);
        assert_eq!(automorphism_count(&two), BigUint::from(2u32) * &a * &a);
        let h = fixtures::crossing_double_loop();
        let mixed = TwoGraph::disjoint_union(&[g.with_prefix("x"), h.with_prefix("y")]);
        assert_eq!(automorphism_count(&mixed), a * automorphism_count(&h));
    }

    #[test]
    fn boundary_multiset_of_two_squares() {
        let sq = fixtures::polygon(4);
        assert_eq!(boundary_multiset_aut_count(&[sq.clone(), sq.with_prefix("b")]), BigUint::from(128u32));
        assert_eq!(boundary_multiset_aut_count(std::slice::from_ref(&sq)), BigUint::from(8u32));
        assert_eq!(boundary_multiset_aut_count(&[]), BigUint::one());
    }

    #[test]
    fn fish_variants_are_not_isomorphic() {
        let a = fixtures::fish(true);
        let b = fixtures::fish(false);
        assert!(!are_isomorphic(&a, &b));
        assert_eq!(brute_force::count_isomorphisms(&a, &b), 0);
    }

    #[test]
    fn refinement_matches_brute_force_on_small_fixtures() {
        for (name, g) in fixtures::corpus() {
            if g.num_half_edges() <= 8 {
                assert_eq!(
                    automorphism_count(&g),
                    BigUint::from(brute_force::automorphism_count(&g)),
                    "fixture {name}"
                );
            }
        }
    }

    #[test]
    fn isomorphism_lists_have_group_size() {
        let g = fixtures::planar_double_loop();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_relabel(&g, &mut rng);
        let isos = two_graph_isomorphisms(&g, &h);
        assert_eq!(BigUint::from(isos.len()), automorphism_count(&g));
        let p = fixtures::pillow(4, 1);
        let q = p.with_prefix("z");
        assert_eq!(BigUint::from(one_graph_isomorphisms(&p, &q).len()), one_graph_automorphism_count(&p));
    }
}
