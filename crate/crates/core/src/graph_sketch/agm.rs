//! Spanning-forest sketch: per vertex, one ℓ0 sampler over its boundary vector per
//! Borůvka round. Samplers of the same round share all randomness across vertices,
//! so summing the samplers of a supernode sketches the supernode's boundary.

use std::sync::Arc;

use thiserror::Error;

use crate::sketch::hash::derive;
use crate::sketch::{L0Params, OneSparseCell};
use crate::stream::{decode_edge, edge_dimension, encode_edge_unchecked, EdgeUpdate, UpdateSink, Vertex, VertexSample};

/// Shape and randomness of a spanning-forest sketch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgmLayout {
    pub n: u32,
    pub rounds: usize,
    pub seed: u64,
    round_params: Vec<L0Params>,
}

/// Extra rounds beyond `⌈log₂ n⌉`.
pub const EXTRA_ROUNDS: usize = 2;
/// Independent sampler chains per round.
pub const DEFAULT_REPS: usize = 2;

impl AgmLayout {
    pub fn new(n: u32, seed: u64) -> Arc<Self> {
        let rounds = ceil_log2(n as u64) + EXTRA_ROUNDS;
        Self::with_shape(n, rounds, DEFAULT_REPS, seed)
    }

    pub fn with_shape(n: u32, rounds: usize, reps: usize, seed: u64) -> Arc<Self> {
        let dim = edge_dimension(n).max(1);
        let round_params = (0..rounds as u64)
            .map(|r| L0Params::build(dim, reps, derive(seed, 0x4147_0000 + r)))
            .collect();
        Arc::new(AgmLayout {
            n,
            rounds,
            seed,
            round_params,
        })
    }

    pub fn round(&self, r: usize) -> &L0Params {
        &self.round_params[r]
    }

    pub fn cells_per_round(&self) -> usize {
        self.round_params.first().map_or(0, L0Params::cells)
    }

    /// Cells held for one vertex.
    pub fn block_len(&self) -> usize {
        self.rounds * self.cells_per_round()
    }

    /// Writes the per-vertex cell deltas caused by adding `value` at edge `index`.
    pub fn block_deltas(&self, index: u64, value: i64, out: &mut Vec<(usize, OneSparseCell)>) {
        out.clear();
        let per = self.cells_per_round();
        for (r, p) in self.round_params.iter().enumerate() {
            let start = out.len();
            p.deltas(index, value, out);
            for d in &mut out[start..] {
                d.0 += r * per;
            }
        }
    }

    /// Adds `value` at edge `index` to a single vertex block.
    pub fn apply_block(&self, block: &mut [OneSparseCell], index: u64, value: i64) {
        let per = self.cells_per_round();
        for (r, p) in self.round_params.iter().enumerate() {
            p.apply(&mut block[r * per..(r + 1) * per], index, value);
        }
    }
}

pub(crate) fn ceil_log2(x: u64) -> usize {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as usize
    }
}

/// A spanning forest of the sketched vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningForest {
    pub edges: Vec<(Vertex, Vertex)>,
    /// Vertex sets of the forest's trees, each sorted, ordered by smallest member.
    pub components: Vec<Vec<Vertex>>,
    /// False if some tree still had a nonempty boundary when the rounds ran out;
    /// such trees are subsets of true components.
    pub complete: bool,
}

impl SpanningForest {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("round {round}: sampled coordinate failed verification")]
    InconsistentSample { round: usize },
}

/// Spanning-forest sketch of the subgraph induced by a fixed vertex set.
#[derive(Clone, Debug)]
pub struct AgmSketch {
    layout: Arc<AgmLayout>,
    vertices: VertexSample,
    cells: Vec<OneSparseCell>,
    scratch: Vec<(usize, OneSparseCell)>,
}

impl AgmSketch {
    pub fn new(layout: Arc<AgmLayout>, vertices: VertexSample) -> Self {
        let cells = vec![OneSparseCell::default(); vertices.len() * layout.block_len()];
        AgmSketch {
            layout,
            vertices,
            cells,
            scratch: Vec::new(),
        }
    }

    /// Rebuilds a sketch from per-vertex blocks, concatenated in sorted vertex order.
    pub fn from_blocks(layout: Arc<AgmLayout>, vertices: VertexSample, cells: Vec<OneSparseCell>) -> crate::Result<Self> {
        if cells.len() != vertices.len() * layout.block_len() {
            return Err(crate::Error::Codec(format!(
                "expected {} cells for {} vertices, got {}",
                vertices.len() * layout.block_len(),
                vertices.len(),
                cells.len()
            )));
        }
        Ok(AgmSketch {
            layout,
            vertices,
            cells,
            scratch: Vec::new(),
        })
    }

    pub fn layout(&self) -> &Arc<AgmLayout> {
        &self.layout
    }

    pub fn vertices(&self) -> &VertexSample {
        &self.vertices
    }

    pub fn block(&self, v: Vertex) -> Option<&[OneSparseCell]> {
        let len = self.layout.block_len();
        self.vertices.slot(v).map(|s| &self.cells[s * len..(s + 1) * len])
    }

    pub fn words(&self) -> usize {
        self.cells.len() * OneSparseCell::WORDS
    }

    pub fn merge(&mut self, other: &Self) -> crate::Result<()> {
        if *self.layout != *other.layout || self.vertices != other.vertices {
            return Err(crate::Error::IncompatibleSketches("forest sketch layout differs".into()));
        }
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.add(b);
        }
        Ok(())
    }

    pub fn state_eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.vertices == other.vertices && self.cells == other.cells
    }

    /// Borůvka over supernodes. Each round sums the members' round samplers per
    /// supernode, samples one boundary edge each and merges along the sampled edges.
    pub fn recover_forest(&self) -> Result<SpanningForest, ForestError> {
        let s = self.vertices.len();
        let len = self.layout.block_len();
        let per = self.layout.cells_per_round();
        let n = self.layout.n;
        let mut dsu = Dsu::new(s);
        let mut edges = Vec::new();
        let mut complete = false;
        let mut sum = vec![OneSparseCell::default(); per];
        for r in 0..self.layout.rounds {
            let params = self.layout.round(r);
            let groups = dsu.groups();
            let mut any_boundary = false;
            let mut found = Vec::new();
            for members in &groups {
                sum.iter_mut().for_each(|c| *c = OneSparseCell::default());
                for &m in members {
                    let base = m * len + r * per;
                    for (acc, c) in sum.iter_mut().zip(&self.cells[base..base + per]) {
                        acc.add(c);
                    }
                }
                if params.is_zero(&sum) {
                    continue;
                }
                any_boundary = true;
                let Some((idx, val)) = params.sample(&sum) else {
                    continue;
                };
                let root = dsu.find(members[0]);
                let (j, k) = decode_edge(n, idx).map_err(|_| ForestError::InconsistentSample { round: r })?;
                let sj = self.vertices.slot(j);
                let sk = self.vertices.slot(k);
                let (Some(sj), Some(sk)) = (sj, sk) else {
                    return Err(ForestError::InconsistentSample { round: r });
                };
                let j_in = dsu.find(sj) == root;
                let k_in = dsu.find(sk) == root;
                let ok = match (j_in, k_in) {
                    (true, false) => val == 1,
                    (false, true) => val == -1,
                    _ => false,
                };
                if !ok {
                    return Err(ForestError::InconsistentSample { round: r });
                }
                found.push((sj, sk));
            }
            if !any_boundary {
                complete = true;
                break;
            }
            for (a, b) in found {
                if dsu.union(a, b) {
                    edges.push((self.vertices.vertex(a), self.vertices.vertex(b)));
                }
            }
        }
        if !complete {
            complete = self.all_boundaries_zero(&mut dsu);
        }
        let components = dsu
            .groups()
            .into_iter()
            .map(|g| g.into_iter().map(|m| self.vertices.vertex(m)).collect())
            .collect();
        Ok(SpanningForest {
            edges,
            components,
            complete,
        })
    }

    fn all_boundaries_zero(&self, dsu: &mut Dsu) -> bool {
        let len = self.layout.block_len();
        dsu.groups().iter().all(|members| {
            let mut acc = OneSparseCell::default();
            for &m in members {
                acc.add(&self.cells[m * len]);
            }
            acc.is_zero()
        })
    }
}

impl UpdateSink for AgmSketch {
    fn apply(&mut self, upd: &EdgeUpdate) {
        let (Some(su), Some(sv)) = (self.vertices.slot(upd.u), self.vertices.slot(upd.v)) else {
            return;
        };
        let idx = encode_edge_unchecked(self.layout.n, upd.u, upd.v);
        let d = upd.delta as i64;
        let len = self.layout.block_len();
        let mut scratch = std::mem::take(&mut self.scratch);
        self.layout.block_deltas(idx, d, &mut scratch);
        for &(off, c) in &scratch {
            self.cells[su * len + off].add(&c);
            self.cells[sv * len + off].sub(&c);
        }
        self.scratch = scratch;
    }
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Members of each set in increasing order, sets ordered by smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut index = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(x);
        }
        out
    }
}
