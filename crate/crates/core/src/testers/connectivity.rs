//! Connectivity, k-edge-connectivity and k-vertex-connectivity testers.
//!
//! All three sample vertices, recover a spanning forest of the sampled induced
//! subgraph and inspect each tree as a candidate set `C`: a far graph has many
//! small sets with a small boundary (or small neighborhood), and a small set is
//! entirely sampled with reasonable probability.

use super::{Decision, TesterConfig, Verdict, VerdictStats, Witness};
use crate::estimators::clamp_p;
use crate::probe::{build_probe, ComponentProbe, ProbeSpec, Recovery};
use crate::sketch::hash::derive;
use crate::stream::{exceeds_sample_budget, replay, sample_vertices, EdgeCounter, Stream, UpdateSink, Vertex};
use crate::Result;

pub(super) struct Plan<'a> {
    pub p: f64,
    pub spec: ProbeSpec,
    /// The violated bound, if `(λ, n)` fails the edge-count precheck.
    pub precheck: &'a dyn Fn(u64, u32) -> Option<f64>,
    pub max_size: usize,
    pub examine: &'a dyn Fn(&dyn ComponentProbe, &[Vertex], u32) -> Option<Witness>,
}

pub(super) fn run(stream: &Stream, cfg: &TesterConfig, plan: Plan, extra: &mut [&mut dyn UpdateSink]) -> Result<Verdict> {
    cfg.validate()?;
    let n = stream.n();
    let p = plan.p;
    let sample = sample_vertices(n, p, derive(cfg.seed, 1));
    let mut counter = EdgeCounter::default();
    let mut stats = VerdictStats {
        samples: sample.len(),
        seed: cfg.seed,
        p,
        ..VerdictStats::default()
    };
    let aborted = exceeds_sample_budget(n, p, sample.len());
    let probe = if aborted {
        let mut sinks: Vec<&mut dyn UpdateSink> = vec![&mut counter];
        for e in extra.iter_mut() {
            sinks.push(&mut **e);
        }
        replay(stream, &mut sinks)?;
        None
    } else {
        let mut sinks: Vec<&mut dyn UpdateSink> = vec![&mut counter];
        for e in extra.iter_mut() {
            sinks.push(&mut **e);
        }
        let (probe, _) = build_probe(stream, &sample, plan.spec, cfg.backend, derive(cfg.seed, 2), &mut sinks)?;
        Some(probe)
    };
    let lambda = counter.lambda as u64;
    stats.lambda = lambda;
    if let Some(bound) = (plan.precheck)(lambda, n) {
        return Ok(Verdict::new(Decision::Reject, "edge-count precheck", stats)
            .with_witness(Witness::EdgeCount { lambda, bound }));
    }
    let Some(probe) = probe else {
        return Ok(Verdict::new(Decision::Fail, "sample exceeded 16np", stats));
    };
    stats.sketch_words = probe.words();
    let forest = match probe.forest() {
        Ok(f) => f,
        Err(e) => return Ok(Verdict::new(Decision::Fail, e.to_string(), stats)),
    };
    for comp in &forest.components {
        if comp.len() > plan.max_size || comp.len() == n as usize {
            continue;
        }
        if let Some(w) = (plan.examine)(probe.as_ref(), comp, n) {
            return Ok(Verdict::new(Decision::Reject, "small set with a small cut", stats).with_witness(w));
        }
    }
    Ok(Verdict::new(Decision::Accept, "no witness among sampled components", stats))
}

fn default_delta(cfg: &TesterConfig, n: u32) -> f64 {
    cfg.delta.unwrap_or_else(|| (1.0 / (n as f64 * n as f64)).clamp(1e-12, 0.25))
}

/// Connectivity: reject on `λ < n − 1`, or when some sampled tree has an empty boundary.
pub fn test_connectivity(stream: &Stream, cfg: &TesterConfig) -> Result<Verdict> {
    connectivity_with(stream, cfg, &mut [])
}

pub(super) fn connectivity_with(stream: &Stream, cfg: &TesterConfig, extra: &mut [&mut dyn UpdateSink]) -> Result<Verdict> {
    let n = stream.n();
    let p = cfg
        .p
        .map(clamp_p)
        .unwrap_or_else(|| clamp_p((cfg.eps * n as f64 / 10.0).powf(-cfg.eps)));
    let plan = Plan {
        p,
        spec: ProbeSpec {
            ams_delta: Some(default_delta(cfg, n)),
            ..ProbeSpec::default()
        },
        precheck: &|lambda, n| {
            let bound = n as f64 - 1.0;
            ((lambda as f64) < bound).then_some(bound)
        },
        max_size: usize::MAX,
        examine: &|probe, comp, _| {
            probe.boundary_is_zero(comp).then(|| Witness::Cut {
                vertices: comp.to_vec(),
                boundary: Vec::new(),
            })
        },
    };
    run(stream, cfg, plan, extra)
}

/// k-edge-connectivity: reject on `λ < nk/2`, or when some sampled tree's
/// boundary decodes from a `(k−1)`-sparse recovery sketch.
pub fn test_k_edge_connectivity(stream: &Stream, cfg: &TesterConfig) -> Result<Verdict> {
    let n = stream.n();
    let k = cfg.k.max(1);
    let p = cfg
        .p
        .map(clamp_p)
        .unwrap_or_else(|| clamp_p((cfg.eps * n as f64 / (4.0 * k as f64)).powf(-cfg.eps)));
    let plan = Plan {
        p,
        spec: ProbeSpec {
            boundary: Some(((k as usize).saturating_sub(1).max(1), default_delta(cfg, n))),
            ..ProbeSpec::default()
        },
        precheck: &|lambda, n| {
            let bound = n as f64 * k as f64 / 2.0;
            ((lambda as f64) < bound).then_some(bound)
        },
        max_size: usize::MAX,
        examine: &|probe, comp, _| match probe.boundary(comp) {
            Recovery::Zero => Some(Witness::Cut {
                vertices: comp.to_vec(),
                boundary: Vec::new(),
            }),
            Recovery::Recovered(edges) if edges.len() < k as usize => Some(Witness::Cut {
                vertices: comp.to_vec(),
                boundary: edges,
            }),
            _ => None,
        },
    };
    let mut v = run(stream, cfg, plan, &mut [])?;
    if k as f64 > 0.1 / p {
        v.warnings.push(format!("k = {k} exceeds 0.1/p = {:.2}; soundness is not guaranteed", 0.1 / p));
    }
    Ok(v)
}

/// k-vertex-connectivity: reject on `λ < nk/2`, or when some sampled tree `C` with
/// `|C| ≤ ⌊4/ε⌋` has fewer than `k` outside neighbors.
pub fn test_k_vertex_connectivity(stream: &Stream, cfg: &TesterConfig) -> Result<Verdict> {
    let n = stream.n();
    let k = cfg.k.max(1);
    let size_cap = (4.0 / cfg.eps + 1e-9).floor() as usize;
    let budget = (4.0 / cfg.eps).ceil() as usize + k as usize;
    let p = cfg
        .p
        .map(clamp_p)
        .unwrap_or_else(|| clamp_p((cfg.eps * n as f64 / (16.0 * k as f64)).powf(-cfg.eps / 4.0)));
    let plan = Plan {
        p,
        spec: ProbeSpec {
            neighborhood: Some((budget, default_delta(cfg, n))),
            ..ProbeSpec::default()
        },
        precheck: &|lambda, n| {
            let bound = n as f64 * k as f64 / 2.0;
            ((lambda as f64) < bound).then_some(bound)
        },
        max_size: size_cap,
        examine: &|probe, comp, n| match probe.closed_neighborhood(comp) {
            Recovery::Recovered(closed) => {
                if closed.len() == n as usize {
                    return None;
                }
                let gamma: Vec<Vertex> = closed.into_iter().filter(|v| comp.binary_search(v).is_err()).collect();
                (gamma.len() < k as usize).then(|| Witness::Separator {
                    vertices: comp.to_vec(),
                    neighborhood: gamma,
                })
            }
            _ => None,
        },
    };
    run(stream, cfg, plan, &mut [])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probe::Backend;

    fn cycle(n: u32) -> Stream {
        Stream::from_edges(n, (1..=n).map(|i| (i, i % n + 1))).unwrap()
    }

    #[test]
    fn sparse_graph_rejected_by_precheck() {
        let s = Stream::from_edges(10, [(1, 2), (3, 4)]).unwrap();
        let v = test_connectivity(&s, &TesterConfig::new(0.25, 1)).unwrap();
        assert_eq!(v.decision, Decision::Reject);
        assert!(matches!(v.witness, Some(Witness::EdgeCount { .. })));
    }

    #[test]
    fn path_accepted() {
        let n = 300;
        let s = Stream::from_edges(n, (1..n).map(|i| (i, i + 1))).unwrap();
        let acc = (0..30)
            .filter(|&seed| test_connectivity(&s, &TesterConfig::new(0.25, seed)).unwrap().decision == Decision::Accept)
            .count();
        assert!(acc >= 25, "{acc}");
        let exact = TesterConfig::new(0.25, 0).with_backend(Backend::Exact);
        assert_eq!(test_connectivity(&s, &exact).unwrap().decision, Decision::Accept);
    }

    #[test]
    fn cycle_is_two_edge_connected() {
        let s = cycle(200);
        let cfg = TesterConfig::new(0.25, 4).with_k(2);
        assert_eq!(test_k_edge_connectivity(&s, &cfg).unwrap().decision, Decision::Accept);
        assert_eq!(test_k_vertex_connectivity(&s, &cfg).unwrap().decision, Decision::Accept);
    }

    #[test]
    fn disjoint_triangles_rejected_with_valid_witness() {
        let edges: Vec<_> = (0..50u32)
            .flat_map(|g| {
                let b = 3 * g;
                [(b + 1, b + 2), (b + 2, b + 3), (b + 1, b + 3)]
            })
            .collect();
        let s = Stream::from_edges(150, edges).unwrap();
        let cfg = TesterConfig::new(0.25, 9).with_k(2);
        let v = test_k_edge_connectivity(&s, &cfg).unwrap();
        assert_eq!(v.decision, Decision::Reject);
        match v.witness {
            Some(Witness::Cut { vertices, boundary }) => {
                assert!(boundary.is_empty());
                assert_eq!(vertices.len(), 3);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }
}
