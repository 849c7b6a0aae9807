//! Single-pass property testers.
//!
//! Every tester accepts graphs with the property and rejects graphs that are
//! ε-far from it, each with constant probability. `Fail` is reserved for abort
//! rules and sketch failures.

mod bipartite;
mod connectivity;
mod cycle_free;
mod euler;

use serde::{Deserialize, Serialize};

pub use crate::probe::Backend;
pub use bipartite::{bipartite_edge_probability, test_planar_bipartiteness};
pub use connectivity::{test_connectivity, test_k_edge_connectivity, test_k_vertex_connectivity};
pub use cycle_free::{cycle_free_eta, test_cycle_freeness};
pub use euler::{euler_sample_size, test_eulerianity};

use crate::stream::Vertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
    Fail,
}

impl Decision {
    /// Process exit code: 0 accept, 1 reject, 2 fail.
    pub fn exit_code(self) -> i32 {
        match self {
            Decision::Accept => 0,
            Decision::Reject => 1,
            Decision::Fail => 2,
        }
    }
}

/// Evidence attached to a rejection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Witness {
    /// A vertex set and its full boundary, which is smaller than required.
    Cut {
        vertices: Vec<Vertex>,
        boundary: Vec<(Vertex, Vertex)>,
    },
    /// A vertex set whose open neighborhood is smaller than required.
    Separator {
        vertices: Vec<Vertex>,
        neighborhood: Vec<Vertex>,
    },
    /// An odd cycle in the final graph.
    OddCycle { cycle: Vec<Vertex> },
    /// Sampled vertices of odd degree.
    OddDegree { vertices: Vec<Vertex> },
    /// The edge count alone decides.
    EdgeCount { lambda: u64, bound: f64 },
    /// Component count compared with the forest identity.
    ComponentCount { components: f64, threshold: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerdictStats {
    pub samples: usize,
    pub sketch_words: usize,
    pub seed: u64,
    pub p: f64,
    pub lambda: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub witness: Option<Witness>,
    pub stats: VerdictStats,
    /// Which rule decided, for reports.
    pub reason: String,
    pub warnings: Vec<String>,
}

impl Verdict {
    fn new(decision: Decision, reason: impl Into<String>, stats: VerdictStats) -> Self {
        Verdict {
            decision,
            witness: None,
            stats,
            reason: reason.into(),
            warnings: Vec::new(),
        }
    }

    fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }
}

/// Tester configuration. Unset fields take the per-tester defaults.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterConfig {
    pub eps: f64,
    /// Connectivity order for the k-edge and k-vertex testers.
    pub k: u32,
    pub p: Option<f64>,
    pub seed: u64,
    /// Failure probability of the per-vertex sketches.
    pub delta: Option<f64>,
    pub backend: Backend,
    /// Moment parameter of the estimator inside the cycle-freeness tester.
    pub t: u32,
    /// Block budget of the cycle-freeness recovery sketch.
    pub k_blocks: Option<usize>,
    /// Constant `c` in `q = c/ε²` for the bipartiteness tester.
    pub bipartite_c: f64,
}

impl TesterConfig {
    pub fn new(eps: f64, seed: u64) -> Self {
        TesterConfig {
            eps,
            k: 1,
            p: None,
            seed,
            delta: None,
            backend: Backend::Sketch,
            t: 1,
            k_blocks: None,
            bipartite_c: 1.0,
        }
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = k;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_backend(mut self, b: Backend) -> Self {
        self.backend = b;
        self
    }

    fn validate(&self) -> crate::Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(crate::Error::InvalidParameter(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if let Some(p) = self.p {
            if !(p > 0.0) {
                return Err(crate::Error::InvalidParameter(format!("p must be positive, got {p}")));
            }
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(crate::Error::InvalidParameter(format!("delta must lie in (0, 1), got {d}")));
            }
        }
        Ok(())
    }
}
