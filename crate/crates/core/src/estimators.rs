//! Component-count and MST-weight estimators from vertex sampling.
//!
//! Each vertex is sampled with probability `p`. A component `C` of the graph with
//! `|C| ≤ ⌊1/ε⌋` shows up as a component of the sampled induced subgraph with an
//! empty boundary exactly when all of its vertices are sampled, which happens with
//! probability `p^{|C|}`. Summing `1/p^{|C|}` over such observations gives an
//! unbiased estimate of the number of small components.

use serde::{Deserialize, Serialize};

pub use crate::probe::Backend;
use crate::error::{Error, Result};
use crate::probe::{build_probe, ProbeSpec};
use crate::sketch::hash::derive;
use crate::stream::{exceeds_sample_budget, replay, sample_vertices, Stream, UpdateSink};

/// Configuration of the small-component estimator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SccConfig {
    pub eps: f64,
    /// Moment parameter; controls the default sampling rate.
    pub t: u32,
    /// Sampling probability override; `None` uses [`SccConfig::default_p`].
    pub p: Option<f64>,
    /// Size cutoff override; `None` uses `⌊1/ε⌋`.
    pub max_size: Option<usize>,
    pub seed: u64,
    pub backend: Backend,
}

impl SccConfig {
    pub fn new(eps: f64, t: u32, seed: u64) -> Self {
        SccConfig {
            eps,
            t,
            p: None,
            max_size: None,
            seed,
            backend: Backend::Sketch,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    /// `(ε^{2t} n / 16)^{-ε}`, clamped to at most 1.
    pub fn default_p(&self, n: u32) -> f64 {
        clamp_p((self.eps.powi(2 * self.t as i32) * n as f64 / 16.0).powf(-self.eps))
    }

    pub fn sampling_p(&self, n: u32) -> f64 {
        self.p.map(clamp_p).unwrap_or_else(|| self.default_p(n))
    }

    pub fn size_cutoff(&self) -> usize {
        self.max_size.unwrap_or((1.0 / self.eps + 1e-9).floor() as usize)
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if self.t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        if let Some(p) = self.p {
            if !(p > 0.0) {
                return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn clamp_p(p: f64) -> f64 {
    if p.is_nan() || p >= 1.0 {
        1.0
    } else {
        p
    }
}

/// Estimator output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    /// Absent iff `aborted`.
    pub value: Option<f64>,
    pub aborted: bool,
    pub abort_reason: Option<String>,
    pub samples: usize,
    pub sketch_words: usize,
    pub p: f64,
    pub seed: u64,
}

impl EstimateReport {
    fn aborted(reason: impl Into<String>, samples: usize, words: usize, p: f64, seed: u64) -> Self {
        EstimateReport {
            value: None,
            aborted: true,
            abort_reason: Some(reason.into()),
            samples,
            sketch_words: words,
            p,
            seed,
        }
    }
}

/// Estimates the number of components with at most `⌊1/ε⌋` vertices.
///
/// With `ignore_singletons`, sampled isolated vertices contribute nothing.
pub fn estimate_num_scc(stream: &Stream, cfg: &SccConfig, ignore_singletons: bool) -> Result<EstimateReport> {
    estimate_num_scc_with(stream, cfg, ignore_singletons, &mut [])
}

/// As [`estimate_num_scc`], also feeding `extra` sinks during the single replay.
pub fn estimate_num_scc_with(
    stream: &Stream,
    cfg: &SccConfig,
    ignore_singletons: bool,
    extra: &mut [&mut dyn UpdateSink],
) -> Result<EstimateReport> {
    cfg.validate()?;
    let n = stream.n();
    let p = cfg.sampling_p(n);
    let sample = sample_vertices(n, p, derive(cfg.seed, 1));
    if exceeds_sample_budget(n, p, sample.len()) {
        replay(stream, extra)?;
        return Ok(EstimateReport::aborted(
            format!("sampled {} vertices, more than 16np = {:.1}", sample.len(), 16.0 * n as f64 * p),
            sample.len(),
            0,
            p,
            cfg.seed,
        ));
    }
    let spec = ProbeSpec {
        ams_delta: Some(1.0 / (16.0 * n as f64)),
        ..ProbeSpec::default()
    };
    let (probe, _) = build_probe(stream, &sample, spec, cfg.backend, derive(cfg.seed, 2), extra)?;
    let words = probe.words();
    let forest = match probe.forest() {
        Ok(f) => f,
        Err(e) => return Ok(EstimateReport::aborted(e.to_string(), sample.len(), words, p, cfg.seed)),
    };
    let cutoff = cfg.size_cutoff();
    let mut y = 0.0;
    for comp in &forest.components {
        let size = comp.len();
        if size > cutoff || (ignore_singletons && size == 1) {
            continue;
        }
        if probe.boundary_is_zero(comp) {
            y += p.powi(-(size as i32));
        }
    }
    Ok(EstimateReport {
        value: Some(y),
        aborted: false,
        abort_reason: None,
        samples: sample.len(),
        sketch_words: words,
        p,
        seed: cfg.seed,
    })
}

/// Parameters `(ε', t)` of the small-component run used to count all components.
pub fn cc_parameters(eps: f64, q: u32) -> (f64, u32) {
    ((1.0 - eps.powi(q as i32)) * eps, q + 1)
}

/// Estimates the total number of components within additive `εn`.
pub fn estimate_num_cc(stream: &Stream, eps: f64, q: u32, seed: u64) -> Result<EstimateReport> {
    estimate_num_cc_cfg(stream, eps, q, seed, None, Backend::Sketch)
}

pub fn estimate_num_cc_cfg(
    stream: &Stream,
    eps: f64,
    q: u32,
    seed: u64,
    p: Option<f64>,
    backend: Backend,
) -> Result<EstimateReport> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    let (eps_small, t) = cc_parameters(eps, q);
    let cfg = SccConfig {
        eps: eps_small,
        t,
        p,
        max_size: None,
        seed,
        backend,
    };
    estimate_num_scc(stream, &cfg, false)
}

/// Estimates the MST weight of a connected graph with weights in `[W]` as
/// `n − W + Σ_{ℓ<W} cc(G_ℓ)`, where `G_ℓ` keeps edges of weight at most `ℓ`.
pub fn estimate_mst_weight(stream: &Stream, eps: f64, q: u32, seed: u64) -> Result<EstimateReport> {
    estimate_mst_weight_cfg(stream, eps, q, seed, None, Backend::Sketch)
}

pub fn estimate_mst_weight_cfg(
    stream: &Stream,
    eps: f64,
    q: u32,
    seed: u64,
    p: Option<f64>,
    backend: Backend,
) -> Result<EstimateReport> {
    let n = stream.n();
    let w = stream.header.max_weight;
    stream.validate()?;
    if w <= 1 {
        return Ok(EstimateReport {
            value: Some(n as f64 - 1.0),
            aborted: false,
            abort_reason: None,
            samples: 0,
            sketch_words: 0,
            p: 1.0,
            seed,
        });
    }
    let level_eps = eps / (w - 1) as f64;
    let mut total = n as f64 - w as f64;
    let mut samples = 0;
    let mut words = 0;
    let mut used_p = 1.0f64;
    for level in 1..w {
        let sub = stream.weight_prefix(level);
        let r = estimate_num_cc_cfg(&sub, level_eps, q, derive(seed, level as u64), p, backend)?;
        samples += r.samples;
        words += r.sketch_words;
        used_p = used_p.min(r.p);
        match r.value {
            Some(v) if !r.aborted => total += v,
            _ => {
                let reason = format!("level {level}: {}", r.abort_reason.unwrap_or_default());
                return Ok(EstimateReport::aborted(reason, samples, words, used_p, seed));
            }
        }
    }
    Ok(EstimateReport {
        value: Some(total),
        aborted: false,
        abort_reason: None,
        samples,
        sketch_words: words,
        p: used_p,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::EdgeUpdate;

    #[test]
    fn isolated_vertices_counted_exactly() {
        let s = Stream::from_edges(5, []).unwrap();
        let cfg = SccConfig::new(0.5, 1, 3).with_p(1.0);
        assert_eq!(estimate_num_scc(&s, &cfg, false).unwrap().value, Some(5.0));
        assert_eq!(estimate_num_scc(&s, &cfg, true).unwrap().value, Some(0.0));
    }

    #[test]
    fn large_clique_not_counted() {
        let edges: Vec<_> = (1..=10u32).flat_map(|i| (i + 1..=10).map(move |j| (i, j))).collect();
        let s = Stream::from_edges(10, edges).unwrap();
        let cfg = SccConfig::new(0.5, 1, 3).with_p(1.0);
        assert_eq!(estimate_num_scc(&s, &cfg, false).unwrap().value, Some(0.0));
    }

    #[test]
    fn empty_graph_cc_equals_n() {
        let s = Stream::from_edges(30, []).unwrap();
        let r = estimate_num_cc_cfg(&s, 0.4, 1, 1, Some(1.0), Backend::Sketch).unwrap();
        assert_eq!(r.value, Some(30.0));
    }

    #[test]
    fn path_cc_within_eps_n() {
        let s = Stream::from_edges(20, (1..20).map(|i| (i, i + 1))).unwrap();
        let r = estimate_num_cc_cfg(&s, 0.4, 1, 1, Some(1.0), Backend::Sketch).unwrap();
        assert!((r.value.unwrap() - 1.0).abs() <= 0.4 * 20.0);
    }

    #[test]
    fn weighted_triangle_mst() {
        let s = Stream::from_updates(
            3,
            3,
            vec![
                EdgeUpdate::insert_weighted(1, 2, 1),
                EdgeUpdate::insert_weighted(2, 3, 2),
                EdgeUpdate::insert_weighted(1, 3, 3),
            ],
        )
        .unwrap();
        let r = estimate_mst_weight_cfg(&s, 0.5, 1, 9, Some(1.0), Backend::Sketch).unwrap();
        assert_eq!(r.value, Some(3.0));
    }

    #[test]
    fn unit_weights_give_n_minus_one() {
        let s = Stream::from_edges(7, (1..7).map(|i| (i, i + 1))).unwrap();
        assert_eq!(estimate_mst_weight(&s, 0.5, 1, 1).unwrap().value, Some(6.0));
    }

    #[test]
    fn deterministic_reports() {
        let s = Stream::from_edges(200, (1..100).map(|i| (2 * i - 1, 2 * i))).unwrap();
        let cfg = SccConfig::new(0.5, 1, 77);
        assert_eq!(estimate_num_scc(&s, &cfg, false).unwrap(), estimate_num_scc(&s, &cfg, false).unwrap());
    }
}
