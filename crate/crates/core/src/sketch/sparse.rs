//! Exact k-sparse recovery with failure detection, by hashing into buckets of
//! one-sparse detectors and peeling.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::cell::{CellDecode, OneSparseCell};
use super::field;
use super::hash::{bounded, derive, field_point, keyed2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SrParams {
    pub dim: u64,
    pub k: usize,
    pub rows: usize,
    pub buckets: usize,
    pub delta: f64,
    pub seed: u64,
    z: u64,
}

impl SrParams {
    /// `⌈log₂(1/δ)⌉ + 2` rows of `2k` buckets.
    pub fn new(dim: u64, k: usize, delta: f64, seed: u64) -> Result<Arc<Self>> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "recovery failure probability must lie in (0, 1), got {delta}"
            )));
        }
        let rows = (1.0 / delta).log2().ceil() as usize + 2;
        Ok(Arc::new(Self::with_shape(dim, k, rows, 2 * k.max(1), delta, seed)))
    }

    pub fn with_shape(dim: u64, k: usize, rows: usize, buckets: usize, delta: f64, seed: u64) -> Self {
        SrParams {
            dim,
            k,
            rows,
            buckets,
            delta,
            seed,
            z: field_point(derive(seed, 0x5352)),
        }
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn cells(&self) -> usize {
        self.rows * self.buckets
    }

    #[inline]
    pub fn bucket(&self, row: usize, index: u64) -> usize {
        row * self.buckets + bounded(keyed2(self.seed, row as u64 + 1, index), self.buckets as u64) as usize
    }

    /// Adds `value·e_index` to a table of `rows × buckets` cells plus the global cell.
    #[inline]
    pub fn apply(&self, cells: &mut [OneSparseCell], global: &mut OneSparseCell, index: u64, value: i64) {
        let zpow = field::pow(self.z, index);
        for row in 0..self.rows {
            cells[self.bucket(row, index)].update(index, value, zpow);
        }
        global.update(index, value, zpow);
    }

    /// Peeling decoder over a table and its global cell.
    pub fn decode(&self, cells: &[OneSparseCell], global: &OneSparseCell) -> SrDecode {
        if global.is_zero() {
            return SrDecode::Zero;
        }
        let mut table = cells.to_vec();
        let mut residual = *global;
        let mut found: BTreeMap<u64, i64> = BTreeMap::new();
        loop {
            let mut progress = false;
            for pos in 0..table.len() {
                let row = pos / self.buckets;
                if let CellDecode::One { index, value } = table[pos].decode(self.z, self.dim) {
                    if self.bucket(row, index) != pos {
                        continue;
                    }
                    let single = OneSparseCell::singleton(index, value, self.z);
                    for r in 0..self.rows {
                        table[self.bucket(r, index)].sub(&single);
                    }
                    residual.sub(&single);
                    let e = found.entry(index).or_insert(0);
                    *e += value;
                    if *e == 0 {
                        found.remove(&index);
                    }
                    progress = true;
                    if found.len() > self.k {
                        return SrDecode::Fail;
                    }
                }
            }
            if residual.is_zero() || !progress {
                break;
            }
        }
        if residual.is_zero() && found.len() <= self.k && !found.is_empty() {
            SrDecode::Recovered(found.into_iter().collect())
        } else {
            SrDecode::Fail
        }
    }
}

/// Decoder outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SrDecode {
    /// The sketched vector is zero.
    Zero,
    /// The full support, sorted by index.
    Recovered(Vec<(u64, i64)>),
    /// The vector is not k-sparse, or the decoder could not certify it.
    Fail,
}

impl SrDecode {
    pub fn is_fail(&self) -> bool {
        matches!(self, SrDecode::Fail)
    }
}

/// Linear sketch supporting exact recovery of k-sparse integer vectors.
#[derive(Clone, Debug)]
pub struct SparseRecoverySketch {
    params: Arc<SrParams>,
    cells: Vec<OneSparseCell>,
    global: OneSparseCell,
}

impl PartialEq for SparseRecoverySketch {
    fn eq(&self, other: &Self) -> bool {
        *self.params == *other.params && self.cells == other.cells && self.global == other.global
    }
}

impl SparseRecoverySketch {
    pub fn new(params: Arc<SrParams>) -> Self {
        let cells = vec![OneSparseCell::default(); params.cells()];
        SparseRecoverySketch {
            params,
            cells,
            global: OneSparseCell::default(),
        }
    }

    pub fn from_parts(params: Arc<SrParams>, cells: Vec<OneSparseCell>, global: OneSparseCell) -> Result<Self> {
        if cells.len() != params.cells() {
            return Err(Error::Codec(format!(
                "expected {} recovery cells, got {}",
                params.cells(),
                cells.len()
            )));
        }
        Ok(SparseRecoverySketch { params, cells, global })
    }

    pub fn params(&self) -> &Arc<SrParams> {
        &self.params
    }

    pub fn cells(&self) -> &[OneSparseCell] {
        &self.cells
    }

    pub fn global(&self) -> &OneSparseCell {
        &self.global
    }

    pub fn update(&mut self, index: u64, value: i64) -> Result<()> {
        if index >= self.params.dim {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.params.dim,
            });
        }
        self.params.apply(&mut self.cells, &mut self.global, index, value);
        Ok(())
    }

    pub fn decode(&self) -> SrDecode {
        self.params.decode(&self.cells, &self.global)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        if *self.params != *other.params {
            return Err(Error::IncompatibleSketches("recovery shape or seed differs".into()));
        }
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.add(b);
        }
        self.global.add(&other.global);
        Ok(())
    }

    pub fn words(&self) -> usize {
        (self.cells.len() + 1) * OneSparseCell::WORDS
    }
}
