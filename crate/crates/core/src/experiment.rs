//! Monte-Carlo harness: repeated estimator/tester runs against oracle ground
//! truth, stream verification, and sketch-size sweeps.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate_mst_weight_cfg, estimate_num_cc_cfg, estimate_num_scc, EstimateReport, SccConfig};
use crate::generate::{
    gen_bhh_variant, gen_planted, random_connected, random_forest, shuffle_with_deletions, BhhInstance, BhhLabel,
    BhhVariant, Certificate, PlantedKind, Promise,
};
use crate::oracle::{Distance, ExplicitGraph, Property};
use crate::probe::Backend;
use crate::sketch::hash::derive;
use crate::stream::Stream;
use crate::testers::{
    test_connectivity, test_cycle_freeness, test_eulerianity, test_k_edge_connectivity,
    test_k_vertex_connectivity, test_planar_bipartiteness, Decision, TesterConfig, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    EstimateScc,
    EstimateCc,
    EstimateMst,
    TestConnectivity,
    TestKEdge,
    TestKVertex,
    TestCycleFree,
    TestBipartite,
    TestEuler,
}

impl Algorithm {
    pub fn is_tester(self) -> bool {
        !matches!(self, Algorithm::EstimateScc | Algorithm::EstimateCc | Algorithm::EstimateMst)
    }
}

/// Where trial graphs come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "source")]
pub enum InstanceSource {
    File { path: PathBuf },
    Bhh { variant: BhhVariant, nb: usize, t: usize, promise: Promise },
    Planted { kind: PlantedKind, n: u32 },
    RandomForest { n: u32, trees: u32 },
    RandomConnected { n: u32, extra: usize, max_weight: u32 },
}

fn default_one() -> u32 {
    1
}

fn default_trials() -> usize {
    1
}

/// A JSON experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub algorithm: Algorithm,
    pub eps: f64,
    #[serde(default = "default_one")]
    pub k: u32,
    #[serde(default = "default_one")]
    pub t: u32,
    #[serde(default = "default_one")]
    pub q: u32,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub backend: Backend,
    pub instance: InstanceSource,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Trial `i` uses seed `base_seed + i`.
    #[serde(default)]
    pub base_seed: u64,
    /// Explicit seed list; overrides `trials` and `base_seed`.
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    /// Draw a fresh generated instance for every trial.
    #[serde(default)]
    pub fresh_instances: bool,
    /// Insert/delete churn applied to every instance.
    #[serde(default)]
    pub churn: f64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }

    pub fn seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.trials as u64).map(|i| self.base_seed.wrapping_add(i)).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.seeds().is_empty() {
            return Err(Error::InvalidParameter("an experiment needs at least one trial".into()));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        Ok(())
    }
}

/// Ground truth for one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Truth {
    Decision(Decision),
    Value(f64),
    /// Neither satisfying nor certified far, or too large for the oracle.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub decision: Option<Decision>,
    pub estimate: Option<f64>,
    pub truth: Truth,
    pub success: Option<bool>,
    pub sketch_words: usize,
    pub samples: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub trials: Vec<TrialResult>,
    /// Successes over trials with known ground truth.
    pub success_rate: Option<f64>,
    pub accept_rate: Option<f64>,
    pub mean_sketch_words: f64,
    pub max_sketch_words: usize,
    pub wall_ms: f64,
}

/// Builds the instance for `seed` and its ground truth.
pub fn build_instance(spec: &ExperimentSpec, seed: u64) -> Result<(Stream, Truth)> {
    let gen_seed = if spec.fresh_instances { derive(seed, 0x6765_6e00) } else { derive(spec.base_seed, 0x6765_6e00) };
    let mut label = None;
    let mut cert = None;
    let stream = match &spec.instance {
        InstanceSource::File { path } => Stream::load(path)?,
        InstanceSource::Bhh { variant, nb, t, promise } => {
            let inst = BhhInstance::random(*nb, *t, *promise, gen_seed)?;
            let (s, l) = gen_bhh_variant(&inst, *variant)?;
            label = Some(l);
            s
        }
        InstanceSource::Planted { kind, n } => {
            let (s, c) = gen_planted(*kind, *n, gen_seed)?;
            cert = Some(c);
            s
        }
        InstanceSource::RandomForest { n, trees } => random_forest(*n, *trees, gen_seed),
        InstanceSource::RandomConnected { n, extra, max_weight } => random_connected(*n, *extra, *max_weight, gen_seed),
    };
    let stream = shuffle_with_deletions(&stream, spec.churn, derive(gen_seed, 1))?;
    let truth = ground_truth(spec, &stream, label.as_ref(), cert.as_ref())?;
    Ok((stream, truth))
}

fn far(distance: u64, eps: f64, m: usize) -> bool {
    distance as f64 > eps * m as f64
}

/// Oracle ground truth. Tester truth is `Accept` when the property holds, `Reject`
/// when the instance is certified ε-far, and `Unknown` otherwise.
pub fn ground_truth(
    spec: &ExperimentSpec,
    stream: &Stream,
    label: Option<&BhhLabel>,
    cert: Option<&Certificate>,
) -> Result<Truth> {
    let g = ExplicitGraph::from_stream(stream)?;
    let m = g.m();
    let eps = spec.eps;
    let cert_far = cert.and_then(|c| c.distance_lower_bound).is_some_and(|d| far(d, eps, m));
    let decide = |holds: bool, is_far: bool| {
        if holds {
            Truth::Decision(Decision::Accept)
        } else if is_far {
            Truth::Decision(Decision::Reject)
        } else {
            Truth::Unknown
        }
    };
    Ok(match spec.algorithm {
        Algorithm::EstimateScc => Truth::Value(g.scc_count((1.0 / eps + 1e-9).floor() as usize) as f64),
        Algorithm::EstimateCc => Truth::Value(g.cc_count() as f64),
        Algorithm::EstimateMst => match g.mst_weight() {
            Ok(w) => Truth::Value(w as f64),
            Err(_) => Truth::Unknown,
        },
        Algorithm::TestConnectivity => {
            let d = (g.cc_count() - 1) as u64;
            decide(d == 0, far(d, eps, m))
        }
        Algorithm::TestCycleFree => {
            let d = g.cyclomatic_number() as u64;
            decide(d == 0, far(d, eps, m))
        }
        Algorithm::TestBipartite => {
            let bip = g.is_bipartite();
            let lower = match label {
                Some(BhhLabel::OddCycles { count, .. }) => Some(*count as u64),
                _ => match g.distance(Property::Bipartite) {
                    Distance::Exact(d) => Some(d),
                    Distance::Unavailable => None,
                },
            };
            decide(bip, lower.is_some_and(|d| far(d, eps, m)))
        }
        Algorithm::TestKEdge => {
            let holds = if g.n() <= 1500 { Some(g.edge_connectivity()? >= spec.k as usize) } else { None };
            match holds {
                Some(h) => decide(h, cert_far),
                None if cert_far => Truth::Decision(Decision::Reject),
                None => Truth::Unknown,
            }
        }
        Algorithm::TestKVertex => {
            let holds = if g.n() <= 600 { Some(g.vertex_connectivity()? >= spec.k as usize) } else { None };
            match holds {
                Some(h) => decide(h, cert_far),
                None if cert_far => Truth::Decision(Decision::Reject),
                None => Truth::Unknown,
            }
        }
        Algorithm::TestEuler => {
            let odd = g.odd_degree_vertices().len() as u64;
            let conn_d = (g.cc_count() - 1) as u64;
            // Each added or removed edge changes the parity of two vertices.
            let d = conn_d.max(odd.saturating_sub(2) / 2);
            decide(g.is_eulerian(), far(d, eps, m))
        }
    })
}

fn tester_config(spec: &ExperimentSpec, seed: u64) -> TesterConfig {
    let mut cfg = TesterConfig::new(spec.eps, seed).with_k(spec.k).with_backend(spec.backend);
    cfg.p = spec.p;
    cfg.t = spec.t;
    cfg
}

/// Runs the configured algorithm once on `stream`.
pub fn run_once(spec: &ExperimentSpec, stream: &Stream, seed: u64) -> Result<(Option<Verdict>, Option<EstimateReport>)> {
    let cfg = tester_config(spec, seed);
    let verdict = match spec.algorithm {
        Algorithm::TestConnectivity => test_connectivity(stream, &cfg)?,
        Algorithm::TestKEdge => test_k_edge_connectivity(stream, &cfg)?,
        Algorithm::TestKVertex => test_k_vertex_connectivity(stream, &cfg)?,
        Algorithm::TestCycleFree => test_cycle_freeness(stream, &cfg)?,
        Algorithm::TestBipartite => test_planar_bipartiteness(stream, &cfg)?,
        Algorithm::TestEuler => test_eulerianity(stream, &cfg)?,
        Algorithm::EstimateScc => {
            let c = SccConfig {
                eps: spec.eps,
                t: spec.t,
                p: spec.p,
                max_size: None,
                seed,
                backend: spec.backend,
            };
            return Ok((None, Some(estimate_num_scc(stream, &c, false)?)));
        }
        Algorithm::EstimateCc => {
            return Ok((None, Some(estimate_num_cc_cfg(stream, spec.eps, spec.q, seed, spec.p, spec.backend)?)));
        }
        Algorithm::EstimateMst => {
            return Ok((None, Some(estimate_mst_weight_cfg(stream, spec.eps, spec.q, seed, spec.p, spec.backend)?)));
        }
    };
    Ok((Some(verdict), None))
}

/// Additive tolerance used to score an estimate against the truth.
fn tolerance(spec: &ExperimentSpec, n: u32, truth: f64) -> f64 {
    match spec.algorithm {
        Algorithm::EstimateMst => spec.eps * truth,
        _ => spec.eps * n as f64,
    }
}

fn run_trial(spec: &ExperimentSpec, seed: u64, shared: Option<&(Stream, Truth)>) -> Result<TrialResult> {
    let owned;
    let (stream, truth) = match shared {
        Some((s, t)) => (s, t),
        None => {
            owned = build_instance(spec, seed)?;
            (&owned.0, &owned.1)
        }
    };
    let start = Instant::now();
    let (verdict, report) = run_once(spec, stream, seed)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut r = TrialResult {
        seed,
        decision: None,
        estimate: None,
        truth: truth.clone(),
        success: None,
        sketch_words: 0,
        samples: 0,
        elapsed_ms,
    };
    if let Some(v) = verdict {
        r.decision = Some(v.decision);
        r.sketch_words = v.stats.sketch_words;
        r.samples = v.stats.samples;
        if let Truth::Decision(d) = truth {
            r.success = Some(v.decision == *d);
        }
    }
    if let Some(e) = report {
        r.estimate = e.value;
        r.sketch_words = e.sketch_words;
        r.samples = e.samples;
        if let Truth::Value(t) = truth {
            r.success = Some(e.value.is_some_and(|v| (v - t).abs() <= tolerance(spec, stream.n(), *t)));
        }
    }
    Ok(r)
}

/// Runs all trials on the current rayon pool; results are ordered by seed.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let start = Instant::now();
    let mut seeds = spec.seeds();
    seeds.sort_unstable();
    let fresh = spec.fresh_instances && !matches!(spec.instance, InstanceSource::File { .. });
    let shared = if fresh { None } else { Some(build_instance(spec, spec.base_seed)?) };
    let trials: Vec<TrialResult> = seeds
        .par_iter()
        .map(|&s| run_trial(spec, s, shared.as_ref()))
        .collect::<Result<_>>()?;
    let known: Vec<bool> = trials.iter().filter_map(|t| t.success).collect();
    let decided: Vec<Decision> = trials.iter().filter_map(|t| t.decision).collect();
    let report = ExperimentReport {
        spec: spec.clone(),
        success_rate: (!known.is_empty()).then(|| known.iter().filter(|&&b| b).count() as f64 / known.len() as f64),
        accept_rate: (!decided.is_empty())
            .then(|| decided.iter().filter(|&&d| d == Decision::Accept).count() as f64 / decided.len() as f64),
        mean_sketch_words: trials.iter().map(|t| t.sketch_words as f64).sum::<f64>() / trials.len() as f64,
        max_sketch_words: trials.iter().map(|t| t.sketch_words).max().unwrap_or(0),
        trials,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if let Some(path) = &spec.output {
        std::fs::write(path, serde_json::to_vec_pretty(&report)?)?;
    }
    Ok(report)
}

/// Outcome of checking a stream file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub n: Option<u32>,
    pub updates: usize,
    pub edges: Option<u64>,
    /// 1-based index of the offending update.
    pub index: Option<usize>,
    /// Line number in a text file, when known.
    pub line: Option<usize>,
    pub error: Option<String>,
}

/// Line number of the `index`-th (1-based) update record of a text stream.
fn record_line(text: &str, index: usize) -> Option<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let c = l.split('#').next().unwrap_or("").trim_start();
            c.starts_with('a') || c.starts_with('d')
        })
        .nth(index.checked_sub(1)?)
        .map(|(i, _)| i + 1)
}

pub fn verify_stream(path: impl AsRef<Path>) -> Result<VerifyReport> {
    let bytes = std::fs::read(path.as_ref())?;
    let mut report = VerifyReport {
        ok: false,
        n: None,
        updates: 0,
        edges: None,
        index: None,
        line: None,
        error: None,
    };
    let stream = match Stream::load(path.as_ref()) {
        Ok(s) => s,
        Err(Error::Parse { line, msg }) => {
            report.line = (line > 0).then_some(line);
            report.error = Some(msg);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.n = Some(stream.n());
    report.updates = stream.updates.len();
    match stream.validate() {
        Ok(summary) => {
            report.ok = true;
            report.edges = Some(summary.lambda);
        }
        Err(Error::IllegalStream { index, reason }) => {
            report.index = Some(index);
            report.line = std::str::from_utf8(&bytes).ok().and_then(|t| record_line(t, index));
            report.error = Some(reason);
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// One row of a sketch-size sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceRow {
    pub n: u32,
    pub sketch_words: usize,
    pub samples: usize,
    pub p: f64,
    /// `words(n) / words(previous n)`.
    pub ratio: Option<f64>,
}

/// Sketch words of the connectivity tester on a cycle of each size.
pub fn space_sweep(eps: f64, ns: &[u32], seed: u64) -> Result<Vec<SpaceRow>> {
    let mut rows: Vec<SpaceRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let s = crate::generate::cycle(n);
        let v = test_connectivity(&s, &TesterConfig::new(eps, seed))?;
        let ratio = rows.last().map(|prev| v.stats.sketch_words as f64 / prev.sketch_words as f64);
        rows.push(SpaceRow {
            n,
            sketch_words: v.stats.sketch_words,
            samples: v.stats.samples,
            p: v.stats.p,
            ratio,
        });
    }
    Ok(rows)
}
