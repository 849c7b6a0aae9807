//! Cycle-freeness tester.
//!
//! A forest satisfies `cc = n − m`. When few vertices have positive degree, their
//! forest-sketch blocks are recovered exactly and the identity is checked on them.
//! Otherwise the small-component estimator is compared against a slackened form of
//! the identity.

use super::{Decision, TesterConfig, Verdict, VerdictStats, Witness};
use crate::estimators::{clamp_p, estimate_num_scc_with, SccConfig};
use crate::graph_sketch::{AgmLayout, BlockDecode, BlockSparseRecovery};
use crate::oracle::ExplicitGraph;
use crate::probe::Backend;
use crate::sketch::hash::derive;
use crate::stream::{EdgeCounter, Stream};
use crate::Result;

/// `η = ε/(1 + ε + ε²)`.
pub fn cycle_free_eta(eps: f64) -> f64 {
    eps / (1.0 + eps + eps * eps)
}

/// Recovery branch outcome: `Some(components, vertices)` or `None` when the
/// positive-degree part is too large to recover.
type Exact = Option<(usize, usize)>;

pub fn test_cycle_freeness(stream: &Stream, cfg: &TesterConfig) -> Result<Verdict> {
    cfg.validate()?;
    let n = stream.n();
    let eps = cfg.eps;
    let eta = cycle_free_eta(eps);
    let t = cfg.t.max(1);
    let k_blocks = cfg
        .k_blocks
        .unwrap_or_else(|| (n as f64).powf(1.0 - eta).ceil() as usize)
        .max(1);
    let p = cfg.p.map(clamp_p).unwrap_or_else(|| {
        clamp_p((2f64.powi(2 * t as i32) * (n as f64).powf(1.0 - eta) / 16.0).powf(-eta))
    });
    let est_cfg = SccConfig {
        eps: eta,
        t,
        p: Some(p),
        max_size: Some((1.0 / eta + 1e-9).floor() as usize),
        seed: derive(cfg.seed, 21),
        backend: cfg.backend,
    };
    let mut counter = EdgeCounter::default();
    let (report, exact, block_words): (_, Exact, usize) = match cfg.backend {
        Backend::Sketch => {
            let layout = AgmLayout::new(n, derive(cfg.seed, 20));
            let delta = cfg.delta.unwrap_or(1.0 / 16.0);
            let mut blocks = BlockSparseRecovery::new(layout, k_blocks, delta, derive(cfg.seed, 22))?;
            let report = estimate_num_scc_with(stream, &est_cfg, true, &mut [&mut counter, &mut blocks])?;
            let words = blocks.words();
            let exact = match blocks.decode() {
                BlockDecode::Zero => Some((0, 0)),
                BlockDecode::Fail => None,
                BlockDecode::Recovered(map) => {
                    let forest = match blocks.forest_sketch(&map)?.recover_forest() {
                        Ok(f) => f,
                        Err(e) => {
                            let stats = VerdictStats {
                                samples: report.samples,
                                sketch_words: report.sketch_words + words,
                                seed: cfg.seed,
                                p,
                                lambda: counter.lambda as u64,
                            };
                            return Ok(Verdict::new(Decision::Fail, e.to_string(), stats));
                        }
                    };
                    Some((forest.component_count(), map.len()))
                }
            };
            (report, exact, words)
        }
        Backend::Exact => {
            let report = estimate_num_scc_with(stream, &est_cfg, true, &mut [&mut counter])?;
            let g = ExplicitGraph::from_stream(stream)?;
            let active: Vec<u32> = (1..=n).filter(|&v| g.degree(v) > 0).collect();
            let exact = (active.len() <= k_blocks).then(|| (g.induced_components(&active).len(), active.len()));
            (report, exact, 0)
        }
    };
    let lambda = counter.lambda as u64;
    let stats = VerdictStats {
        samples: report.samples,
        sketch_words: report.sketch_words + block_words,
        seed: cfg.seed,
        p,
        lambda,
    };
    let bound = n as f64 - 1.0;
    if lambda as f64 > bound {
        return Ok(Verdict::new(Decision::Reject, "edge-count precheck", stats)
            .with_witness(Witness::EdgeCount { lambda, bound }));
    }
    if let Some((components, vertices)) = exact {
        let threshold = vertices as f64 - lambda as f64;
        let decision = if components as f64 == threshold {
            Decision::Accept
        } else {
            Decision::Reject
        };
        let mut v = Verdict::new(decision, "exact recovery of the positive-degree part", stats);
        if decision == Decision::Reject {
            v.witness = Some(Witness::ComponentCount {
                components: components as f64,
                threshold,
            });
        }
        return Ok(v);
    }
    let Some(estimate) = report.value.filter(|_| !report.aborted) else {
        return Ok(Verdict::new(
            Decision::Fail,
            report.abort_reason.unwrap_or_else(|| "estimator aborted".into()),
            stats,
        ));
    };
    let threshold = n as f64 - (1.0 - eps - eps.powi(3) / 4.0) * lambda as f64;
    if estimate <= threshold {
        Ok(Verdict::new(Decision::Accept, "component estimate within forest bound", stats))
    } else {
        Ok(Verdict::new(Decision::Reject, "component estimate exceeds forest bound", stats).with_witness(
            Witness::ComponentCount {
                components: estimate,
                threshold,
            },
        ))
    }
}
