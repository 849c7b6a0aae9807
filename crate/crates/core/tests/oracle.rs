use gsketch::generate;
use gsketch::oracle::{Distance, ExplicitGraph, Property};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph(n: u32, edges: &[(u32, u32)]) -> ExplicitGraph {
    ExplicitGraph::from_edges(n, edges.iter().copied()).unwrap()
}

fn random_graph(n: u32, p: f64, r: &mut ChaCha8Rng) -> ExplicitGraph {
    let mut g = ExplicitGraph::empty(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if r.gen::<f64>() < p {
                g.add_edge(u, v, 1).unwrap();
            }
        }
    }
    g
}

fn triangles(k: u32) -> ExplicitGraph {
    let edges: Vec<(u32, u32)> = (0..k).flat_map(|t| [(3 * t + 1, 3 * t + 2), (3 * t + 2, 3 * t + 3), (3 * t + 1, 3 * t + 3)]).collect();
    graph(3 * k, &edges)
}

fn k(n: u32) -> ExplicitGraph {
    let edges: Vec<(u32, u32)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    graph(n, &edges)
}

#[test]
fn component_examples() {
    assert_eq!(ExplicitGraph::empty(7).cc_count(), 7);
    let p = ExplicitGraph::from_stream(&generate::path(9)).unwrap();
    assert_eq!(p.cc_count(), 1);
    assert_eq!(triangles(3).scc_count(3), 3);
    assert_eq!(triangles(3).scc_count(2), 0);
}

#[test]
fn mst_examples() {
    let tree = ExplicitGraph::from_stream(&generate::path(10)).unwrap();
    assert_eq!(tree.mst_weight().unwrap(), 9);
    let tri = ExplicitGraph::from_weighted(3, [(1, 2, 1), (2, 3, 2), (1, 3, 3)]).unwrap();
    assert_eq!(tri.mst_weight().unwrap(), 3);
    assert_eq!(tri.cc_per_level(3)[..2], [2, 1]);
    assert!(graph(4, &[(1, 2)]).mst_weight().is_err());
}

#[test]
fn connectivity_examples() {
    let c = ExplicitGraph::from_stream(&generate::cycle(9)).unwrap();
    assert_eq!((c.edge_connectivity().unwrap(), c.vertex_connectivity().unwrap()), (2, 2));
    let t = ExplicitGraph::from_stream(&generate::star(9)).unwrap();
    assert_eq!((t.edge_connectivity().unwrap(), t.vertex_connectivity().unwrap()), (1, 1));
    let k5 = k(5);
    assert_eq!((k5.edge_connectivity().unwrap(), k5.vertex_connectivity().unwrap()), (4, 4));
}

#[test]
fn distance_examples() {
    let forest = ExplicitGraph::from_stream(&generate::random_forest(30, 4, 1)).unwrap();
    assert_eq!(forest.distance(Property::CycleFree), Distance::Exact(0));
    let tri = triangles(5);
    assert_eq!(tri.distance(Property::CycleFree), Distance::Exact(5));
    assert_eq!(tri.distance(Property::Connectivity), Distance::Exact(4));
    let c5 = ExplicitGraph::from_stream(&generate::cycle(5)).unwrap();
    assert_eq!(c5.distance(Property::Bipartite), Distance::Exact(1));
    assert_eq!(c5.distance(Property::KEdge), Distance::Unavailable);
}

#[test]
fn degree_examples() {
    let c = ExplicitGraph::from_stream(&generate::cycle(8)).unwrap();
    assert!(c.odd_degree_vertices().is_empty() && c.is_eulerian());
    let p = ExplicitGraph::from_stream(&generate::path(8)).unwrap();
    assert_eq!(p.odd_degree_vertices(), vec![1, 8]);
    assert!(p.is_eulerian());
    let k4 = k(4);
    assert_eq!(k4.odd_degree_vertices().len(), 4);
    assert!(!k4.is_eulerian());
}

#[test]
fn mst_level_identity() {
    let mut r = ChaCha8Rng::seed_from_u64(41);
    for i in 0..1000u64 {
        let n = r.gen_range(2..=50);
        let w = r.gen_range(1..=8);
        let s = generate::random_connected(n, r.gen_range(0..=2 * n as usize), w, i);
        let g = ExplicitGraph::from_stream(&s).unwrap();
        let levels: i64 = g.cc_per_level(w).iter().take(w as usize - 1).map(|&c| c as i64).sum();
        assert_eq!(g.mst_weight().unwrap() as i64, n as i64 - w as i64 + levels, "instance {i}");
    }
}

#[test]
fn forest_identity() {
    let mut r = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..1000 {
        let n = r.gen_range(1..=40);
        let g = random_graph(n, r.gen_range(0.0..4.0) / n as f64, &mut r);
        assert_eq!(g.is_forest(), g.cc_count() + g.m() == n as usize);
        assert_eq!(g.cyclomatic_number(), g.m() + g.cc_count() - n as usize);
    }
}

fn cut(g: &ExplicitGraph, mask: u32) -> usize {
    g.edges()
        .filter(|&(u, v, _)| (mask >> (u - 1) & 1) != (mask >> (v - 1) & 1))
        .count()
}

/// Sets `C` with cut exactly `l` whose every proper nonempty subset has a larger cut.
fn extreme_sets(g: &ExplicitGraph, l: usize) -> Vec<u32> {
    let n = g.n();
    let full = (1u32 << n) - 1;
    let cuts: Vec<usize> = (0..=full).map(|m| cut(g, m)).collect();
    (1..full)
        .filter(|&c| cuts[c as usize] == l)
        .filter(|&c| {
            let mut sub = (c - 1) & c;
            while sub > 0 {
                if cuts[sub as usize] <= l {
                    return false;
                }
                sub = (sub - 1) & c;
            }
            true
        })
        .collect()
}

#[test]
fn extreme_sets_by_brute_force() {
    let mut r = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..60 {
        let n = r.gen_range(3..=11);
        let g = random_graph(n, r.gen_range(0.2..0.7), &mut r);
        let full = (1u32 << n) - 1;
        let min_cut = (1..full).map(|m| cut(&g, m)).min().unwrap();
        assert_eq!(g.edge_connectivity().unwrap(), min_cut);
        for l in 0..=min_cut + 1 {
            let sets = extreme_sets(&g, l);
            for (i, &a) in sets.iter().enumerate() {
                for &b in &sets[i + 1..] {
                    assert_eq!(a & b, 0, "extreme sets with cut {l} overlap");
                }
            }
            if l == min_cut {
                assert!(!sets.is_empty());
            }
        }
    }
}

fn connected_without(g: &ExplicitGraph, removed: &[u32]) -> bool {
    let keep: Vec<u32> = (1..=g.n()).filter(|v| !removed.contains(v)).collect();
    keep.len() <= 1 || g.induced_components(&keep).len() == 1
}

fn brute_vertex_connectivity(g: &ExplicitGraph) -> usize {
    let n = g.n() as usize;
    fn search(g: &ExplicitGraph, size: usize, start: u32, chosen: &mut Vec<u32>) -> bool {
        if chosen.len() == size {
            return !connected_without(g, chosen);
        }
        for v in start..=g.n() {
            chosen.push(v);
            if search(g, size, v + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    (0..n - 1).find(|&s| search(g, s, 1, &mut Vec::new())).unwrap_or(n - 1)
}

#[test]
fn vertex_connectivity_matches_brute_force_above_the_cutoff() {
    let mut r = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..40 {
        let n = r.gen_range(17..=24);
        let base = generate::circulant(n, &[1, r.gen_range(2..n / 2)]);
        let mut g = ExplicitGraph::from_stream(&base).unwrap();
        for _ in 0..r.gen_range(0..10) {
            let (a, b) = (r.gen_range(1..=n), r.gen_range(1..=n));
            if a != b && !g.has_edge(a, b) {
                g.add_edge(a, b, 1).unwrap();
            }
        }
        assert_eq!(g.vertex_connectivity().unwrap(), brute_vertex_connectivity(&g));
    }
}

#[test]
fn bipartite_distance_small_cases() {
    assert_eq!(k(4).bipartite_distance(), Some(2));
    assert_eq!(triangles(4).bipartite_distance(), Some(4));
    assert_eq!(ExplicitGraph::from_stream(&generate::grid(3, 3)).unwrap().bipartite_distance(), Some(0));
    assert_eq!(k(9).bipartite_distance(), None);
}
