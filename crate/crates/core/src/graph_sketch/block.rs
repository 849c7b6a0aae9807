//! Exact sparse recovery over a vector of per-vertex forest-sketch blocks.
//!
//! Every bucket stores the sum of the blocks routed to it together with three
//! field scalars `Σh(B_u)`, `Σu·h(B_u)` and `Σz^u·h(B_u)`, where `h` is a random
//! linear form on blocks. A bucket holding exactly one nonzero block is detected
//! from the scalars and the block is read off the bucket's cells.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::agm::{AgmLayout, AgmSketch};
use crate::error::{Error, Result};
use crate::sketch::field;
use crate::sketch::hash::{bounded, derive, field_point, keyed, keyed2};
use crate::sketch::OneSparseCell;
use crate::stream::{encode_edge_unchecked, EdgeUpdate, UpdateSink, Vertex, VertexSample};

type Scalars = [u64; 3];

#[derive(Clone, Debug)]
pub struct BlockSparseRecovery {
    layout: Arc<AgmLayout>,
    k: usize,
    rows: usize,
    buckets: usize,
    seed: u64,
    z: u64,
    form: Vec<u64>,
    tables: Vec<OneSparseCell>,
    scalars: Vec<Scalars>,
    global: Scalars,
    scratch: Vec<(usize, OneSparseCell)>,
}

/// Decoder outcome: the nonzero blocks, keyed by vertex.
#[derive(Clone, Debug)]
pub enum BlockDecode {
    Zero,
    Recovered(BTreeMap<Vertex, Vec<OneSparseCell>>),
    Fail,
}

impl BlockSparseRecovery {
    /// Up to `k` nonzero blocks; `⌈log₂(1/δ)⌉ + 2` rows of `2k` buckets.
    pub fn new(layout: Arc<AgmLayout>, k: usize, delta: f64, seed: u64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "block recovery failure probability must lie in (0, 1), got {delta}"
            )));
        }
        let rows = (1.0 / delta).log2().ceil() as usize + 2;
        let buckets = 2 * k.max(1);
        let len = layout.block_len();
        let form_seed = derive(seed, 0x464F_524D);
        let form = (0..len * 3)
            .map(|j| field::reduce(keyed(form_seed, j as u64) >> 3))
            .collect();
        Ok(BlockSparseRecovery {
            k,
            rows,
            buckets,
            seed,
            z: field_point(derive(seed, 0x424C_4B5A)),
            form,
            tables: vec![OneSparseCell::default(); rows * buckets * len],
            scalars: vec![[0; 3]; rows * buckets],
            global: [0; 3],
            scratch: Vec::new(),
            layout,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn words(&self) -> usize {
        self.tables.len() * OneSparseCell::WORDS + (self.scalars.len() + 1) * 3
    }

    #[inline]
    fn bucket(&self, row: usize, v: Vertex) -> usize {
        row * self.buckets + bounded(keyed2(self.seed, row as u64 + 1, v as u64), self.buckets as u64) as usize
    }

    fn form_of_cell(&self, off: usize, c: &OneSparseCell) -> u64 {
        let f = &self.form[off * 3..off * 3 + 3];
        let s = field::mul(f[0], field::from_i64(c.count));
        let s = field::add(s, field::mul(f[1], field::from_i64(c.weighted)));
        field::add(s, field::mul(f[2], c.fingerprint))
    }

    fn scalars_for(&self, v: Vertex, h: u64) -> Scalars {
        [h, field::mul(v as u64, h), field::mul(field::pow(self.z, v as u64), h)]
    }

    fn add_block_delta(&mut self, v: Vertex, deltas: &[(usize, OneSparseCell)], negate: bool) {
        let len = self.layout.block_len();
        let mut h = 0;
        for (off, c) in deltas {
            h = field::add(h, self.form_of_cell(*off, c));
        }
        if negate {
            h = field::sub(0, h);
        }
        let sc = self.scalars_for(v, h);
        for row in 0..self.rows {
            let b = self.bucket(row, v);
            let base = b * len;
            for (off, c) in deltas {
                if negate {
                    self.tables[base + off].sub(c);
                } else {
                    self.tables[base + off].add(c);
                }
            }
            add_scalars(&mut self.scalars[b], &sc);
        }
        add_scalars(&mut self.global, &sc);
    }

    pub fn decode(&self) -> BlockDecode {
        if self.global == [0; 3] {
            return BlockDecode::Zero;
        }
        let len = self.layout.block_len();
        let n = self.layout.n as u64;
        let mut tables = self.tables.clone();
        let mut scalars = self.scalars.clone();
        let mut global = self.global;
        let mut found: BTreeMap<Vertex, Vec<OneSparseCell>> = BTreeMap::new();
        loop {
            let mut progress = false;
            for b in 0..scalars.len() {
                let [s0, s1, s2] = scalars[b];
                if s0 == 0 {
                    continue;
                }
                let u = field::mul(s1, field::inv(s0));
                if u == 0 || u > n {
                    continue;
                }
                let v = u as Vertex;
                if field::mul(field::pow(self.z, u), s0) != s2 || self.bucket(b / self.buckets, v) != b {
                    continue;
                }
                let block: Vec<OneSparseCell> = tables[b * len..(b + 1) * len].to_vec();
                let h = block
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (off, c)| field::add(acc, self.form_of_cell(off, c)));
                if h != s0 || found.contains_key(&v) {
                    continue;
                }
                let sc = self.scalars_for(v, s0);
                for row in 0..self.rows {
                    let bb = self.bucket(row, v);
                    for (cell, c) in tables[bb * len..(bb + 1) * len].iter_mut().zip(&block) {
                        cell.sub(c);
                    }
                    sub_scalars(&mut scalars[bb], &sc);
                }
                sub_scalars(&mut global, &sc);
                found.insert(v, block);
                progress = true;
                if found.len() > self.k {
                    return BlockDecode::Fail;
                }
            }
            if global == [0; 3] || !progress {
                break;
            }
        }
        if global == [0; 3] && !found.is_empty() {
            BlockDecode::Recovered(found)
        } else {
            BlockDecode::Fail
        }
    }

    /// Forest sketch over the recovered vertices.
    pub fn forest_sketch(&self, blocks: &BTreeMap<Vertex, Vec<OneSparseCell>>) -> Result<AgmSketch> {
        let vertices = VertexSample::from_vec(blocks.keys().copied().collect());
        let cells = blocks.values().flat_map(|b| b.iter().copied()).collect();
        AgmSketch::from_blocks(self.layout.clone(), vertices, cells)
    }
}

fn add_scalars(a: &mut Scalars, b: &Scalars) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = field::add(*x, *y);
    }
}

fn sub_scalars(a: &mut Scalars, b: &Scalars) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = field::sub(*x, *y);
    }
}

impl UpdateSink for BlockSparseRecovery {
    fn apply(&mut self, upd: &EdgeUpdate) {
        let idx = encode_edge_unchecked(self.layout.n, upd.u, upd.v);
        let mut scratch = std::mem::take(&mut self.scratch);
        self.layout.block_deltas(idx, upd.delta as i64, &mut scratch);
        self.add_block_delta(upd.u, &scratch, false);
        self.add_block_delta(upd.v, &scratch, true);
        self.scratch = scratch;
    }
}
