//! Standard small 1-graphs and 2-graphs: polygons, coloured bubbles, the fish
//! graph, map examples and the torus / pinched torus pair.

use crate::graph_core::{ColouredGraph, CombinatorialMap, OneGraph, TwoGraph};

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// 1-graph on named nodes with coloured edges; half-edge `node:c` carries colour `c`.
pub fn coloured_one_graph(nodes: &[&str], edges: &[(usize, usize, u32)]) -> OneGraph {
    let mut half_edges = Vec::new();
    let mut pairs = Vec::new();
    for &(a, b, c) in edges {
        let ha = format!("{}:{c}", nodes[a]);
        let hb = format!("{}:{c}", nodes[b]);
        half_edges.push((ha.clone(), nodes[a].to_string(), c));
        half_edges.push((hb.clone(), nodes[b].to_string(), c));
        pairs.push((ha, hb));
    }
    OneGraph::new(labels(nodes), half_edges, &pairs).expect("well-formed coloured 1-graph")
}

/// Cycle on `n` vertices labelled `1..=n`, as the vertex graph of a map vertex.
pub fn polygon(n: usize) -> OneGraph {
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut half_edges = Vec::new();
    let mut pairs = Vec::new();
    for i in 1..=n {
        half_edges.push((format!("s:{i}:0"), i.to_string(), 0));
        half_edges.push((format!("s:{i}:1"), i.to_string(), 0));
        let j = i % n + 1;
        pairs.push((format!("s:{i}:1"), format!("s:{j}:0")));
    }
    OneGraph::new(vertices, half_edges, &pairs).expect("polygon")
}

/// Two nodes joined by one edge of each colour `1..=rank`.
pub fn dipole(rank: u32) -> OneGraph {
    let edges: Vec<(usize, usize, u32)> = (1..=rank).map(|c| (0, 1, c)).collect();
    coloured_one_graph(&["w", "b"], &edges)
}

/// Quartic melonic bubble: two dipoles of all colours but `c`, crossed by colour `c`.
pub fn pillow(rank: u32, c: u32) -> OneGraph {
    let mut edges = Vec::new();
    for k in (1..=rank).filter(|&k| k != c) {
        edges.push((0, 1, k));
        edges.push((2, 3, k));
    }
    edges.push((0, 3, c));
    edges.push((1, 2, c));
    coloured_one_graph(&["w1", "b1", "w2", "b2"], &edges)
}

/// Disjoint union of two dipoles, the multi-trace quartic vertex graph.
pub fn double_dipole(rank: u32) -> OneGraph {
    let mut edges = Vec::new();
    for k in 1..=rank {
        edges.push((0, 1, k));
        edges.push((2, 3, k));
    }
    coloured_one_graph(&["w1", "b1", "w2", "b2"], &edges)
}

/// Sextic melonic bubble: a pillow of colour `c` whose colour-`k` edge
/// between w2 and b2 is replaced by a colour-`k` dipole insertion.
pub fn sextic_melonic(rank: u32, c: u32, k: u32) -> OneGraph {
    let mut edges = Vec::new();
    for x in (1..=rank).filter(|&x| x != c) {
        edges.push((0, 1, x));
    }
    for x in (1..=rank).filter(|&x| x != c && x != k) {
        edges.push((2, 3, x));
    }
    for x in (1..=rank).filter(|&x| x != k) {
        edges.push((4, 5, x));
    }
    edges.push((0, 3, c));
    edges.push((1, 2, c));
    edges.push((2, 5, k));
    edges.push((4, 3, k));
    coloured_one_graph(&["w1", "b1", "w2", "b2", "w3", "b3"], &edges)
}

/// Single map vertex with an `n`-gon vertex graph.
pub fn polygon_vertex(n: usize) -> TwoGraph {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let sigma: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    CombinatorialMap::new(labels, sigma, (0..n).collect()).expect("polygon map").to_two_graph()
}

/// A vertex without half-edges.
pub fn empty_vertex() -> TwoGraph {
    TwoGraph::corolla("v", &OneGraph::default()).expect("empty corolla")
}

/// The 4-coloured fish graph: two pillow vertices (colours `c1`, `c2`) joined
/// by two edges, four external half-edges. `same_colour` selects `c1 = c2`.
pub fn fish(same_colour: bool) -> TwoGraph {
    let (c1, c2) = if same_colour { (1, 1) } else { (1, 2) };
    let nodes = labels(&["w1", "b1", "w2", "b2", "w3", "b3", "w4", "b4"]);
    let mut edges = Vec::new();
    for k in (1..=4).filter(|&k| k != c1) {
        edges.push((0, 1, k));
        edges.push((2, 3, k));
    }
    edges.push((0, 3, c1));
    edges.push((1, 2, c1));
    for k in (1..=4).filter(|&k| k != c2) {
        edges.push((4, 5, k));
        edges.push((6, 7, k));
    }
    edges.push((4, 7, c2));
    edges.push((5, 6, c2));
    edges.push((2, 5, 0));
    edges.push((4, 3, 0));
    ColouredGraph { nodes, edges, legs: vec![0, 1, 6, 7], rank: 4 }.to_two_graph().expect("fish")
}

/// Map with half-edges 1..7, sigma = (1)(234)(576), iota = (12)(35)(46).
pub fn figure_one_map() -> TwoGraph {
    CombinatorialMap::parse_cycles("(1)(2 3 4)(5 7 6)", "(1 2)(3 5)(4 6)").expect("map").to_two_graph()
}

/// Quartic vertex with two nested (planar) self-loops.
pub fn planar_double_loop() -> TwoGraph {
    CombinatorialMap::parse_cycles("(1 2 3 4)", "(1 2)(3 4)").expect("map").to_two_graph()
}

/// Quartic vertex with two crossing self-loops (torus).
pub fn crossing_double_loop() -> TwoGraph {
    CombinatorialMap::parse_cycles("(1 2 3 4)", "(1 3)(2 4)").expect("map").to_two_graph()
}

/// Planar one-loop 4-point map of two quartic vertices (one internal face).
pub fn matrix_fish() -> TwoGraph {
    CombinatorialMap::parse_cycles("(1 2 3 4)(5 6 7 8)", "(3 5)(4 8)").expect("map").to_two_graph()
}

/// Two quartic vertices joined by a single edge (a bridge).
pub fn matrix_chain() -> TwoGraph {
    CombinatorialMap::parse_cycles("(1 2 3 4)(5 6 7 8)", "(1 5)").expect("map").to_two_graph()
}

/// Closed rank-3 melon: two coloured nodes joined by all four colours.
pub fn melon_rank3() -> TwoGraph {
    ColouredGraph { nodes: labels(&["w", "b"]), edges: (0..=3).map(|c| (0, 1, c)).collect(), legs: vec![], rank: 3 }
        .to_two_graph()
        .expect("melon")
}

/// Rank-4 melonic 2-point graph: a pillow vertex with one tadpole edge.
pub fn bgr_melonic_two_point() -> TwoGraph {
    let mut edges = Vec::new();
    for k in 2..=4 {
        edges.push((0, 1, k));
        edges.push((2, 3, k));
    }
    edges.push((0, 3, 1));
    edges.push((1, 2, 1));
    edges.push((2, 3, 0));
    ColouredGraph { nodes: labels(&["w1", "b1", "w2", "b2"]), edges, legs: vec![0, 1], rank: 4 }
        .to_two_graph()
        .expect("melonic 2-point")
}

fn perfect_matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let mut out = Vec::new();
    for k in 1..items.len() {
        let rest: Vec<usize> = items[1..].iter().copied().filter(|&x| x != items[k]).collect();
        for mut m in perfect_matchings(&rest) {
            m.insert(0, (first, items[k]));
            out.push(m);
        }
    }
    out
}

/// A closed genus-one map Γ with two quartic vertices A, B joined by a
/// cylinder of two edges and two bivalent vertices, together with Γ/Θ for Θ the
/// cylinder: three vertices (one double-trace), four edges, two faces.
pub fn torus_and_pinched() -> (TwoGraph, TwoGraph) {
    let names = ["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "c1", "c2", "d1", "d2"];
    let lab = labels(&names);
    for b_reversed in [false, true] {
        let mut sigma = vec![1, 2, 3, 0, 5, 6, 7, 4, 9, 8, 11, 10];
        if b_reversed {
            sigma[4] = 7;
            sigma[7] = 6;
            sigma[6] = 5;
            sigma[5] = 4;
        }
        for m in perfect_matchings(&[1, 3, 5, 7, 8, 9, 10, 11]) {
            let mut iota: Vec<usize> = (0..12).collect();
            for &(a, b) in m.iter().chain([(0usize, 4usize), (2, 6)].iter()) {
                iota[a] = b;
                iota[b] = a;
            }
            let g = CombinatorialMap::new(lab.clone(), sigma.clone(), iota).expect("map").to_two_graph();
            if !g.is_connected() || g.euler_characteristic() != 0 {
                continue;
            }
            let mask: Vec<bool> = g.edges().iter().map(|&(a, b)| (a == 0 && b == 4) || (a == 2 && b == 6)).collect();
            let q = g.contract_edge_mask(&mask);
            let double_trace = (0..q.num_vertices()).any(|v| q.vertex_graph(v).num_components() == 2);
            if q.num_vertices() == 3 && q.num_edges() == 4 && q.num_internal_faces() == 2 && double_trace {
                return (g, q);
            }
        }
    }
    panic!("no torus fixture found")
}

/// The contracted torus: three vertices, one of them double-trace.
pub fn pinched_torus() -> TwoGraph {
    torus_and_pinched().1
}

/// Named 2-graphs used as a test corpus.
pub fn corpus() -> Vec<(&'static str, TwoGraph)> {
    let (torus, pinched) = torus_and_pinched();
    vec![
        ("empty", TwoGraph::default()),
        ("empty_vertex", empty_vertex()),
        ("univalent", CombinatorialMap::parse_cycles("(1)", "(1)").unwrap().to_two_graph()),
        ("bivalent_loop", CombinatorialMap::parse_cycles("(1 2)", "(1 2)").unwrap().to_two_graph()),
        ("polygon3", polygon_vertex(3)),
        ("polygon4", polygon_vertex(4)),
        ("figure_one", figure_one_map()),
        ("planar_double_loop", planar_double_loop()),
        ("crossing_double_loop", crossing_double_loop()),
        ("matrix_fish", matrix_fish()),
        ("matrix_chain", matrix_chain()),
        ("torus", torus),
        ("pinched_torus", pinched),
        ("fish_same", fish(true)),
        ("fish_distinct", fish(false)),
        ("fish_same_residue", fish(true).residue()),
        ("fish_distinct_residue", fish(false).residue()),
        ("melon_rank3", melon_rank3()),
        ("bgr_melonic_two_point", bgr_melonic_two_point()),
        ("pillow_vertex", TwoGraph::corolla("v", &pillow(4, 1)).unwrap()),
        ("double_dipole_vertex", TwoGraph::corolla("v", &double_dipole(4)).unwrap()),
        ("dipole_vertex", TwoGraph::corolla("v", &dipole(3)).unwrap()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bubbles_are_regular() {
        for g in [pillow(4, 2), double_dipole(4), dipole(4), sextic_melonic(4, 1, 2)] {
            let r = g.max_colour() as usize;
            for v in 0..g.num_vertices() {
                assert_eq!(g.degree(v), r);
            }
            assert!(g.external_legs().is_empty());
        }
        assert_eq!(sextic_melonic(4, 1, 2).num_vertices(), 6);
        assert!(sextic_melonic(4, 1, 2).is_connected());
        assert!(pillow(4, 1).is_connected());
        assert_eq!(double_dipole(4).num_components(), 2);
    }

    #[test]
    fn torus_fixture_exists() {
        let (g, q) = torus_and_pinched();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.num_edges(), 6);
        assert!(g.is_closed());
        assert_eq!(q.euler_characteristic(), 1);
    }

    #[test]
    fn matrix_fish_has_one_internal_face() {
        assert_eq!(matrix_fish().num_internal_faces(), 1);
    }
}
