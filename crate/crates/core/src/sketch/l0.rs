//! ℓ0 sampler: nested subsampling levels, one one-sparse detector per level.

use std::sync::Arc;

use super::cell::{CellDecode, OneSparseCell};
use super::field;
use super::hash::{derive, field_point, keyed2};
use crate::error::{Error, Result};

/// Shape, level hash and evaluation points for a family of ℓ0 samplers.
///
/// Index `i` belongs to levels `0..=depth(rep, i)` of chain `rep`, where the depth is
/// the number of trailing zeros of a keyed hash, so level `l` keeps each index with
/// probability `2^-l`. Nothing here depends on which vertex owns the sketch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L0Params {
    pub dim: u64,
    pub levels: usize,
    pub reps: usize,
    pub seed: u64,
    z: Vec<u64>,
}

impl L0Params {
    pub fn new(dim: u64, reps: usize, seed: u64) -> Arc<Self> {
        Arc::new(Self::build(dim, reps, seed))
    }

    pub(crate) fn build(dim: u64, reps: usize, seed: u64) -> Self {
        let levels = levels_for(dim);
        let reps = reps.max(1);
        let z = (0..reps as u64)
            .map(|r| field_point(derive(seed, 0x5A00 + r)))
            .collect();
        L0Params {
            dim,
            levels,
            reps,
            seed,
            z,
        }
    }

    /// Cells per sampler: `reps × levels`.
    pub fn cells(&self) -> usize {
        self.reps * self.levels
    }

    #[inline]
    pub fn depth(&self, rep: usize, index: u64) -> usize {
        let h = keyed2(self.seed, rep as u64, index);
        (h.trailing_zeros() as usize).min(self.levels - 1)
    }

    pub fn z(&self, rep: usize) -> u64 {
        self.z[rep]
    }

    /// Adds `value·e_index` to a sampler laid out as `reps` consecutive chains of `levels` cells.
    #[inline]
    pub fn apply(&self, cells: &mut [OneSparseCell], index: u64, value: i64) {
        for rep in 0..self.reps {
            let zpow = field::pow(self.z[rep], index);
            let base = rep * self.levels;
            for cell in &mut cells[base..=base + self.depth(rep, index)] {
                cell.update(index, value, zpow);
            }
        }
    }

    /// Same as [`apply`](Self::apply) but reports the touched cell offsets and deltas
    /// instead of writing them, so one computation can be applied to many copies.
    pub fn deltas(&self, index: u64, value: i64, out: &mut Vec<(usize, OneSparseCell)>) {
        for rep in 0..self.reps {
            let mut d = OneSparseCell::default();
            d.update(index, value, field::pow(self.z[rep], index));
            let base = rep * self.levels;
            for l in 0..=self.depth(rep, index) {
                out.push((base + l, d));
            }
        }
    }

    /// Scans chains in order and levels bottom-up; returns the first verified entry.
    pub fn sample(&self, cells: &[OneSparseCell]) -> Option<(u64, i64)> {
        for rep in 0..self.reps {
            let base = rep * self.levels;
            for l in 0..self.levels {
                if let CellDecode::One { index, value } = cells[base + l].decode(self.z[rep], self.dim) {
                    if self.depth(rep, index) >= l {
                        return Some((index, value));
                    }
                }
            }
        }
        None
    }

    /// True iff the level-0 cell of the first chain is identically zero. Level 0 sees
    /// every index, so this is an exact test up to fingerprint collision.
    pub fn is_zero(&self, cells: &[OneSparseCell]) -> bool {
        cells[0].is_zero()
    }
}

/// `⌈log₂ D⌉ + 1` levels.
pub fn levels_for(dim: u64) -> usize {
    let lg = if dim <= 1 {
        0
    } else {
        64 - (dim - 1).leading_zeros() as usize
    };
    lg + 1
}

/// A standalone ℓ0 sampler over dimension `D`.
#[derive(Clone, Debug)]
pub struct L0Sampler {
    params: Arc<L0Params>,
    cells: Vec<OneSparseCell>,
}

impl PartialEq for L0Sampler {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.cells == other.cells
    }
}

impl L0Sampler {
    pub fn new(params: Arc<L0Params>) -> Self {
        let cells = vec![OneSparseCell::default(); params.cells()];
        L0Sampler { params, cells }
    }

    pub fn from_cells(params: Arc<L0Params>, cells: Vec<OneSparseCell>) -> Result<Self> {
        if cells.len() != params.cells() {
            return Err(Error::Codec(format!(
                "expected {} sampler cells, got {}",
                params.cells(),
                cells.len()
            )));
        }
        Ok(L0Sampler { params, cells })
    }

    pub fn params(&self) -> &Arc<L0Params> {
        &self.params
    }

    pub fn cells(&self) -> &[OneSparseCell] {
        &self.cells
    }

    pub fn update(&mut self, index: u64, value: i64) -> Result<()> {
        if index >= self.params.dim {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.params.dim,
            });
        }
        self.params.apply(&mut self.cells, index, value);
        Ok(())
    }

    pub fn sample(&self) -> Option<(u64, i64)> {
        self.params.sample(&self.cells)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        if *self.params != *other.params {
            return Err(Error::IncompatibleSketches("sampler shape or seed differs".into()));
        }
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.add(b);
        }
        Ok(())
    }

    pub fn words(&self) -> usize {
        self.cells.len() * OneSparseCell::WORDS
    }
}
