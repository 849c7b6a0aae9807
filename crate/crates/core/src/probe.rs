//! Component-level queries shared by the estimators and testers, answered either
//! from sketches or exactly from the final graph.
//!
//! The exact backend is a test hook: it keeps the same vertex sampling and the same
//! sparsity budgets as the sketch backend but replaces every sketch answer with the
//! true one, which isolates the algorithmic logic from sketch error.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph_sketch::agm::Dsu;
use crate::graph_sketch::{AgmLayout, AgmSketch, EdgeVectorBank, ForestError, SpanningForest, VertexVectorBank};
use crate::oracle::ExplicitGraph;
use crate::sketch::hash::derive;
use crate::sketch::{AmsParams, AmsSketch, SparseRecoverySketch, SrDecode, SrParams};
use crate::stream::{decode_edge, edge_dimension, replay, ReplaySummary, Stream, UpdateSink, Vertex, VertexSample};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Sketch,
    Exact,
}

/// Which per-vertex summaries to keep alongside the forest sketch.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProbeSpec {
    /// AMS zero test over boundary vectors, with this failure probability.
    pub ams_delta: Option<f64>,
    /// Sparse recovery of boundary vectors: `(k, δ)`.
    pub boundary: Option<(usize, f64)>,
    /// Sparse recovery of closed-neighborhood vectors: `(k, δ)`.
    pub neighborhood: Option<(usize, f64)>,
}

/// Outcome of a recovery query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovery<T> {
    Zero,
    Recovered(T),
    Fail,
}

pub trait ComponentProbe {
    /// Spanning forest of the subgraph induced by the sampled vertices.
    fn forest(&self) -> std::result::Result<SpanningForest, ForestError>;
    /// Whether `E(C, V∖C)` is empty.
    fn boundary_is_zero(&self, set: &[Vertex]) -> bool;
    /// `E(C, V∖C)` if it has at most the configured number of edges.
    fn boundary(&self, set: &[Vertex]) -> Recovery<Vec<(Vertex, Vertex)>>;
    /// `C ∪ Γ(C)` if it has at most the configured number of vertices.
    fn closed_neighborhood(&self, set: &[Vertex]) -> Recovery<Vec<Vertex>>;
    /// Sketch storage in 64-bit words (zero for the exact backend).
    fn words(&self) -> usize;
}

/// Replays `stream` once into the probe's state and any `extra` sinks.
pub fn build_probe(
    stream: &Stream,
    sample: &VertexSample,
    spec: ProbeSpec,
    backend: Backend,
    seed: u64,
    extra: &mut [&mut dyn UpdateSink],
) -> Result<(Box<dyn ComponentProbe>, ReplaySummary)> {
    match backend {
        Backend::Sketch => {
            let (p, s) = SketchProbe::build(stream, sample, spec, seed, extra)?;
            Ok((Box::new(p), s))
        }
        Backend::Exact => {
            let summary = replay(stream, extra)?;
            let g = ExplicitGraph::from_stream(stream)?;
            Ok((Box::new(ExactProbe::new(g, sample.clone(), spec)), summary))
        }
    }
}

pub struct SketchProbe {
    n: u32,
    agm: AgmSketch,
    ams: Option<EdgeVectorBank<AmsSketch>>,
    boundary: Option<EdgeVectorBank<SparseRecoverySketch>>,
    neighborhood: Option<VertexVectorBank<SparseRecoverySketch>>,
}

impl SketchProbe {
    pub fn build(
        stream: &Stream,
        sample: &VertexSample,
        spec: ProbeSpec,
        seed: u64,
        extra: &mut [&mut dyn UpdateSink],
    ) -> Result<(Self, ReplaySummary)> {
        let n = stream.n();
        let dim = edge_dimension(n).max(1);
        let mut agm = AgmSketch::new(AgmLayout::new(n, derive(seed, 10)), sample.clone());
        let mut ams = match spec.ams_delta {
            Some(d) => {
                let proto = AmsSketch::new(AmsParams::new(dim, d, derive(seed, 11))?);
                Some(EdgeVectorBank::new(n, sample.clone(), &proto))
            }
            None => None,
        };
        let mut boundary = match spec.boundary {
            Some((k, d)) => {
                let proto = SparseRecoverySketch::new(SrParams::new(dim, k, d, derive(seed, 12))?);
                Some(EdgeVectorBank::new(n, sample.clone(), &proto))
            }
            None => None,
        };
        let mut neighborhood = match spec.neighborhood {
            Some((k, d)) => {
                let proto = SparseRecoverySketch::new(SrParams::new(n as u64, k, d, derive(seed, 13))?);
                Some(VertexVectorBank::new(sample.clone(), &proto))
            }
            None => None,
        };
        let summary = {
            let mut sinks: Vec<&mut dyn UpdateSink> = vec![&mut agm];
            if let Some(a) = ams.as_mut() {
                sinks.push(a);
            }
            if let Some(b) = boundary.as_mut() {
                sinks.push(b);
            }
            if let Some(b) = neighborhood.as_mut() {
                sinks.push(b);
            }
            for e in extra.iter_mut() {
                sinks.push(&mut **e);
            }
            replay(stream, &mut sinks)?
        };
        Ok((
            SketchProbe {
                n,
                agm,
                ams,
                boundary,
                neighborhood,
            },
            summary,
        ))
    }
}

impl ComponentProbe for SketchProbe {
    fn forest(&self) -> std::result::Result<SpanningForest, ForestError> {
        self.agm.recover_forest()
    }

    fn boundary_is_zero(&self, set: &[Vertex]) -> bool {
        let bank = self.ams.as_ref().expect("probe built without AMS sketches");
        bank.sum_over(set).expect("set within the sample").is_zero()
    }

    fn boundary(&self, set: &[Vertex]) -> Recovery<Vec<(Vertex, Vertex)>> {
        let bank = self.boundary.as_ref().expect("probe built without boundary recovery");
        match bank.sum_over(set).expect("set within the sample").decode() {
            SrDecode::Zero => Recovery::Zero,
            SrDecode::Fail => Recovery::Fail,
            SrDecode::Recovered(entries) => {
                let mut edges = Vec::with_capacity(entries.len());
                for (idx, val) in entries {
                    match decode_edge(self.n, idx) {
                        Ok(e) if val.abs() == 1 => edges.push(e),
                        _ => return Recovery::Fail,
                    }
                }
                Recovery::Recovered(edges)
            }
        }
    }

    fn closed_neighborhood(&self, set: &[Vertex]) -> Recovery<Vec<Vertex>> {
        let bank = self.neighborhood.as_ref().expect("probe built without neighborhood recovery");
        match bank.sum_over(set).expect("set within the sample").decode() {
            SrDecode::Zero => Recovery::Zero,
            SrDecode::Fail => Recovery::Fail,
            SrDecode::Recovered(entries) => {
                if entries.iter().any(|&(_, v)| v <= 0) {
                    return Recovery::Fail;
                }
                Recovery::Recovered(entries.into_iter().map(|(i, _)| i as Vertex + 1).collect())
            }
        }
    }

    fn words(&self) -> usize {
        self.agm.words()
            + self.ams.as_ref().map_or(0, |b| b.words())
            + self.boundary.as_ref().map_or(0, |b| b.words())
            + self.neighborhood.as_ref().map_or(0, |b| b.words())
    }
}

pub struct ExactProbe {
    graph: ExplicitGraph,
    sample: VertexSample,
    spec: ProbeSpec,
}

impl ExactProbe {
    pub fn new(graph: ExplicitGraph, sample: VertexSample, spec: ProbeSpec) -> Self {
        ExactProbe { graph, sample, spec }
    }
}

impl ComponentProbe for ExactProbe {
    fn forest(&self) -> std::result::Result<SpanningForest, ForestError> {
        let s = self.sample.as_slice();
        let mut dsu = Dsu::new(s.len());
        let mut edges = Vec::new();
        for (i, &u) in s.iter().enumerate() {
            for w in self.graph.neighbors(u) {
                if let Some(j) = self.sample.slot(w) {
                    if dsu.union(i, j) {
                        edges.push((u.min(w), u.max(w)));
                    }
                }
            }
        }
        let components = dsu
            .groups()
            .into_iter()
            .map(|g| g.into_iter().map(|i| s[i]).collect())
            .collect();
        Ok(SpanningForest {
            edges,
            components,
            complete: true,
        })
    }

    fn boundary_is_zero(&self, set: &[Vertex]) -> bool {
        self.graph.boundary(set).is_empty()
    }

    fn boundary(&self, set: &[Vertex]) -> Recovery<Vec<(Vertex, Vertex)>> {
        let k = self.spec.boundary.map_or(usize::MAX, |(k, _)| k);
        let b = self.graph.boundary(set);
        if b.is_empty() {
            Recovery::Zero
        } else if b.len() <= k {
            Recovery::Recovered(b)
        } else {
            Recovery::Fail
        }
    }

    fn closed_neighborhood(&self, set: &[Vertex]) -> Recovery<Vec<Vertex>> {
        let k = self.spec.neighborhood.map_or(usize::MAX, |(k, _)| k);
        let mut all: Vec<Vertex> = set.to_vec();
        all.extend(self.graph.open_neighborhood(set));
        all.sort_unstable();
        all.dedup();
        if all.is_empty() {
            Recovery::Zero
        } else if all.len() <= k {
            Recovery::Recovered(all)
        } else {
            Recovery::Fail
        }
    }

    fn words(&self) -> usize {
        0
    }
}
