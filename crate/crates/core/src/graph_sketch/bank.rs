//! Per-vertex banks of linear sketches, fed by stream replay.

use crate::error::Result;
use crate::sketch::LinearSketch;
use crate::stream::{encode_edge_unchecked, EdgeUpdate, UpdateSink, Vertex, VertexSample};

/// Passes an update iff both endpoints are in `sample`.
pub fn induced_filter(sample: &VertexSample, upd: &EdgeUpdate) -> Option<EdgeUpdate> {
    (sample.contains(upd.u) && sample.contains(upd.v)).then_some(*upd)
}

/// Sketches of the boundary vector for every sampled vertex.
#[derive(Clone, Debug)]
pub struct EdgeVectorBank<S> {
    n: u32,
    sample: VertexSample,
    sketches: Vec<S>,
}

impl<S: LinearSketch> EdgeVectorBank<S> {
    pub fn new(n: u32, sample: VertexSample, proto: &S) -> Self {
        let sketches = vec![proto.clone(); sample.len()];
        EdgeVectorBank { n, sample, sketches }
    }

    pub fn sample(&self) -> &VertexSample {
        &self.sample
    }

    pub fn get(&self, v: Vertex) -> Option<&S> {
        self.sample.slot(v).map(|s| &self.sketches[s])
    }

    /// Sketch of the summed boundary vector of `set`; every member must be sampled.
    pub fn sum_over(&self, set: &[Vertex]) -> Result<S> {
        sum_slots(&self.sample, &self.sketches, set)
    }

    pub fn words(&self) -> usize {
        self.sketches.iter().map(S::words).sum()
    }
}

impl<S: LinearSketch> UpdateSink for EdgeVectorBank<S> {
    fn apply(&mut self, upd: &EdgeUpdate) {
        let su = self.sample.slot(upd.u);
        let sv = self.sample.slot(upd.v);
        if su.is_none() && sv.is_none() {
            return;
        }
        let idx = encode_edge_unchecked(self.n, upd.u, upd.v);
        let d = upd.delta as i64;
        if let Some(s) = su {
            self.sketches[s].update(idx, d).expect("edge index within dimension");
        }
        if let Some(s) = sv {
            self.sketches[s].update(idx, -d).expect("edge index within dimension");
        }
    }
}

/// Sketches of the closed-neighborhood vector for every sampled vertex.
#[derive(Clone, Debug)]
pub struct VertexVectorBank<S> {
    sample: VertexSample,
    sketches: Vec<S>,
}

impl<S: LinearSketch> VertexVectorBank<S> {
    /// Installs the diagonal entry of each sampled vertex.
    pub fn new(sample: VertexSample, proto: &S) -> Self {
        let sketches = sample
            .iter()
            .map(|v| {
                let mut s = proto.clone();
                s.update(v as u64 - 1, 1).expect("vertex within dimension");
                s
            })
            .collect();
        VertexVectorBank { sample, sketches }
    }

    pub fn sample(&self) -> &VertexSample {
        &self.sample
    }

    pub fn sum_over(&self, set: &[Vertex]) -> Result<S> {
        sum_slots(&self.sample, &self.sketches, set)
    }

    pub fn words(&self) -> usize {
        self.sketches.iter().map(S::words).sum()
    }
}

impl<S: LinearSketch> UpdateSink for VertexVectorBank<S> {
    fn apply(&mut self, upd: &EdgeUpdate) {
        let d = upd.delta as i64;
        if let Some(s) = self.sample.slot(upd.u) {
            self.sketches[s].update(upd.v as u64 - 1, d).expect("vertex within dimension");
        }
        if let Some(s) = self.sample.slot(upd.v) {
            self.sketches[s].update(upd.u as u64 - 1, d).expect("vertex within dimension");
        }
    }
}

fn sum_slots<S: LinearSketch>(sample: &VertexSample, sketches: &[S], set: &[Vertex]) -> Result<S> {
    let slot = |v: Vertex| {
        sample.slot(v).ok_or_else(|| {
            crate::Error::InvalidParameter(format!("vertex {v} is not in the sampled set"))
        })
    };
    let (first, rest) = set
        .split_first()
        .ok_or_else(|| crate::Error::InvalidParameter("empty vertex set".into()))?;
    let mut acc = sketches[slot(*first)?].clone();
    for &v in rest {
        acc.merge(&sketches[slot(v)?])?;
    }
    Ok(acc)
}
