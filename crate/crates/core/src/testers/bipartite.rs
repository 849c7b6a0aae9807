//! Bipartiteness tester for planar graphs: keep a hash-sampled subset of the edges
//! and look for an odd cycle in it.

use std::collections::BTreeSet;

use super::{Decision, TesterConfig, Verdict, VerdictStats, Witness};
use crate::oracle::two_coloring_of;
use crate::sketch::hash::{derive, keyed};
use crate::stream::{encode_edge_unchecked, probability_threshold, replay, EdgeUpdate, Stream, UpdateSink, Vertex};
use crate::Result;

/// `min(1, (εm/(16q))^{−2/q})` with `q = c/ε²`.
pub fn bipartite_edge_probability(eps: f64, c: f64, m: f64) -> f64 {
    let q = c / (eps * eps);
    let base = eps * m / (16.0 * q);
    if base <= 1.0 {
        1.0
    } else {
        base.powf(-2.0 / q).min(1.0)
    }
}

struct EdgeSampler {
    n: u32,
    seed: u64,
    threshold: u64,
    edges: BTreeSet<(Vertex, Vertex)>,
    lambda: i64,
    peak: usize,
}

impl EdgeSampler {
    fn hash(&self, u: Vertex, v: Vertex) -> u64 {
        keyed(self.seed, encode_edge_unchecked(self.n, u, v))
    }
}

impl UpdateSink for EdgeSampler {
    fn apply(&mut self, upd: &EdgeUpdate) {
        self.lambda += upd.delta as i64;
        if self.hash(upd.u, upd.v) >= self.threshold {
            return;
        }
        if upd.is_insert() {
            self.edges.insert((upd.u, upd.v));
            self.peak = self.peak.max(self.edges.len());
        } else {
            self.edges.remove(&(upd.u, upd.v));
        }
    }
}

/// The edge count is unknown while streaming, so edges are kept at the rate for
/// `m = n/2` and thinned to the rate for the final `λ` (the rates are nested
/// because both use the same hash).
pub fn test_planar_bipartiteness(stream: &Stream, cfg: &TesterConfig) -> Result<Verdict> {
    cfg.validate()?;
    let n = stream.n();
    let rate = |m: f64| match cfg.p {
        Some(p) => p.min(1.0),
        None => bipartite_edge_probability(cfg.eps, cfg.bipartite_c, m),
    };
    let store_p = rate(n as f64 / 2.0);
    let mut sampler = EdgeSampler {
        n,
        seed: derive(cfg.seed, 40),
        threshold: probability_threshold(store_p),
        edges: BTreeSet::new(),
        lambda: 0,
        peak: 0,
    };
    replay(stream, &mut [&mut sampler])?;
    let lambda = sampler.lambda as u64;
    let final_p = if (lambda as f64) >= n as f64 / 2.0 {
        rate(lambda as f64).min(store_p)
    } else {
        store_p
    };
    let keep = probability_threshold(final_p);
    let kept: Vec<(Vertex, Vertex)> = sampler
        .edges
        .iter()
        .copied()
        .filter(|&(u, v)| sampler.hash(u, v) < keep)
        .collect();
    let stats = VerdictStats {
        samples: kept.len(),
        sketch_words: 2 * sampler.peak,
        seed: cfg.seed,
        p: final_p,
        lambda,
    };
    let expected = final_p * lambda as f64;
    if kept.len() as f64 > 16.0 * expected.max(1.0) {
        return Ok(Verdict::new(Decision::Fail, "sampled subgraph exceeds 16x its expectation", stats));
    }
    let mut adj = vec![Vec::new(); n as usize + 1];
    for &(u, v) in &kept {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    match two_coloring_of(n, |v| adj[v as usize].clone()) {
        Ok(_) => Ok(Verdict::new(Decision::Accept, "sampled subgraph is bipartite", stats)),
        Err(cycle) => Ok(Verdict::new(Decision::Reject, "odd cycle in sampled subgraph", stats)
            .with_witness(Witness::OddCycle { cycle })),
    }
}
