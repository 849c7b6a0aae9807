use gsketch::generate::{
    self, gen_bhh_base, gen_bhh_variant, gen_planted, shuffle_with_deletions, BhhInstance, BhhLabel, BhhVariant,
    PlantedKind, Promise,
};
use gsketch::oracle::ExplicitGraph;
use gsketch::Stream;
use proptest::prelude::*;

fn oracle(s: &Stream) -> ExplicitGraph {
    ExplicitGraph::from_stream(s).unwrap()
}

#[test]
fn instances_keep_their_promise() {
    for seed in 0..20 {
        for promise in [Promise::AllZeros, Promise::AllOnes] {
            let inst = BhhInstance::random(24, 3, promise, seed).unwrap();
            assert_eq!(inst.blocks.len(), 8);
            for i in 0..inst.blocks.len() {
                assert_eq!(inst.mx(i) ^ inst.w[i], promise.bit());
            }
            let mut all: Vec<usize> = inst.blocks.concat();
            all.sort();
            assert_eq!(all, (1..=24).collect::<Vec<_>>());
        }
    }
    assert!(BhhInstance::random(10, 3, Promise::AllZeros, 0).is_err());
}

#[test]
fn base_graph_is_paths() {
    let inst = BhhInstance::random(32, 4, Promise::AllOnes, 3).unwrap();
    let g = oracle(&gen_bhh_base(&inst).unwrap());
    assert_eq!(g.n(), 128);
    assert!(g.is_forest());
    assert!((1..=g.n()).all(|v| g.degree(v) <= 2));
    // One path per (block, parity) pair.
    assert_eq!(g.cc_count(), 2 * 32 / 4);
}

#[test]
fn closed_forms_hold() {
    for seed in 0..50u64 {
        for promise in [Promise::AllZeros, Promise::AllOnes] {
            let t = 2 + (seed as usize % 3);
            let nb = 2 * t * (1 + seed as usize % 9);
            let inst = BhhInstance::random(nb, t, promise, seed).unwrap();
            let zeros = promise == Promise::AllZeros;

            let (s, label) = gen_bhh_variant(&inst, BhhVariant::Connectivity).unwrap();
            assert_eq!(label, BhhLabel::Components(if zeros { nb / t + 1 } else { 1 }));
            assert_eq!(BhhLabel::Components(oracle(&s).cc_count()), label);

            let (s, label) = gen_bhh_variant(&inst, BhhVariant::Mst { max_weight: 5 }).unwrap();
            assert_eq!(BhhLabel::MstWeight(oracle(&s).mst_weight().unwrap()), label);

            let (s, label) = gen_bhh_variant(&inst, BhhVariant::CycleFree).unwrap();
            assert_eq!(BhhLabel::Cycles(oracle(&s).cyclomatic_number()), label);
        }
    }
}

#[test]
fn bipartite_gadget() {
    for seed in 0..50u64 {
        for promise in [Promise::AllZeros, Promise::AllOnes] {
            let t = 1 + 2 * (seed as usize % 3);
            let nb = 2 * t * (1 + seed as usize % 5);
            let inst = BhhInstance::random(nb, t, promise, seed).unwrap();
            let (s, label) = gen_bhh_variant(&inst, BhhVariant::Bipartite).unwrap();
            let g = oracle(&s);
            assert_eq!(g.n() as usize, 4 * nb + 2);
            match (promise, label) {
                (Promise::AllZeros, BhhLabel::OddCycles { count, length }) => {
                    assert_eq!((count, length), (2 * nb / t, 2 * t + 1));
                    assert!(!g.is_bipartite());
                }
                (Promise::AllOnes, BhhLabel::OddCycles { count: 0, .. }) => assert!(g.is_bipartite()),
                other => panic!("unexpected label {other:?}"),
            }
        }
    }
    let even = BhhInstance::random(8, 2, Promise::AllZeros, 1).unwrap();
    assert!(gen_bhh_variant(&even, BhhVariant::Bipartite).is_err());
}

#[test]
fn connectivity_gadget_is_far() {
    let t = 2;
    let inst = BhhInstance::random(64, t, Promise::AllZeros, 9).unwrap();
    let (s, _) = gen_bhh_variant(&inst, BhhVariant::Connectivity).unwrap();
    let g = oracle(&s);
    let eps = 1.0 / (8.0 * t as f64 + 1.0);
    assert!((g.cc_count() - 1) as f64 >= eps * g.m() as f64);
}

#[test]
fn planted_components() {
    let (s, cert) = gen_planted(PlantedKind::Components { count: 300, max_size: 3 }, 2000, 4).unwrap();
    let g = oracle(&s);
    assert_eq!(g.cc_count(), 301);
    assert_eq!(g.scc_count(3), 300);
    assert_eq!(cert.sets.len(), 300);
}

#[test]
fn planted_kedge_sets_have_small_cuts() {
    let (s, cert) = gen_planted(PlantedKind::FarFromKEdge { k: 3, gadgets: 20 }, 0, 5).unwrap();
    let g = oracle(&s);
    assert_eq!(g.edge_connectivity().unwrap(), 2);
    for (set, &c) in cert.sets.iter().zip(&cert.set_cuts) {
        assert_eq!(g.boundary(set).len(), c);
        assert!(c < 3);
    }
    assert_eq!(cert.distance_lower_bound, Some(10));
}

#[test]
fn planted_pendant_cliques() {
    let (s, cert) = gen_planted(PlantedKind::PendantCliques { k: 3, gadgets: 12, clique: 4 }, 0, 6).unwrap();
    let g = oracle(&s);
    assert!(g.vertex_connectivity().unwrap() < 3);
    for (set, &c) in cert.sets.iter().zip(&cert.set_cuts) {
        assert_eq!(g.induced_components(set).len(), 1);
        assert_eq!(g.open_neighborhood(set).len(), c);
        assert!(c < 3);
    }
}

#[test]
fn planted_triangles_and_odd_degrees() {
    let (s, cert) = gen_planted(PlantedKind::TriangleSoup, 300, 7).unwrap();
    let g = oracle(&s);
    assert_eq!(g.cyclomatic_number() as u64, cert.distance_lower_bound.unwrap());
    assert_eq!(g.cyclomatic_number(), 100);

    let (s, cert) = gen_planted(PlantedKind::OddDegree { fraction: 0.25 }, 400, 8).unwrap();
    let g = oracle(&s);
    assert!(g.is_connected());
    let mut odd = g.odd_degree_vertices();
    odd.sort();
    let mut claimed = cert.odd_vertices.clone();
    claimed.sort();
    assert_eq!(odd, claimed);
    assert_eq!(cert.distance_lower_bound, Some((odd.len() as u64 - 2) / 2));
}

#[test]
fn random_families() {
    let g = oracle(&generate::random_tree(50, 1));
    assert!(g.is_forest() && g.is_connected());
    let g = oracle(&generate::random_forest(60, 7, 2));
    assert!(g.is_forest());
    assert_eq!(g.cc_count(), 7);
    let g = oracle(&generate::random_connected(80, 40, 6, 3));
    assert!(g.is_connected() && g.max_weight() <= 6);
    assert_eq!(g.m(), 79 + 40);
    let g = oracle(&generate::grid(4, 5));
    assert_eq!((g.n(), g.m()), (20, 31));
    assert!(g.is_bipartite());
    let g = oracle(&generate::circulant(12, &[1, 3]));
    assert!((1..=12).all(|v| g.degree(v) == 4));
}

#[test]
fn generation_is_reproducible() {
    let a = gen_planted(PlantedKind::OddDegree { fraction: 0.3 }, 500, 11).unwrap();
    let b = gen_planted(PlantedKind::OddDegree { fraction: 0.3 }, 500, 11).unwrap();
    assert_eq!(a, b);
    assert_eq!(generate::erdos_renyi(300, 0.02, 4), generate::erdos_renyi(300, 0.02, 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn churn_keeps_the_final_graph(n in 3u32..60, extra in 0usize..60, churn in 0.0f64..3.0, seed in any::<u64>()) {
        let base = generate::random_connected(n, extra.min((n as usize * (n as usize - 1)) / 2 - (n as usize - 1)), 3, seed);
        let churned = shuffle_with_deletions(&base, churn, seed ^ 1).unwrap();
        prop_assert!(churned.validate().is_ok());
        let mut a = base.final_edges().unwrap();
        let mut b = churned.final_edges().unwrap();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        prop_assert!(churned.updates.len() >= base.updates.len());
    }
}
