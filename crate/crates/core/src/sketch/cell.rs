//! One-sparse detector: the cell type shared by the ℓ0 sampler and sparse recovery.

use serde::{Deserialize, Serialize};

use super::field;

/// Sums `Σ x_i`, `Σ i·x_i` and `Σ x_i·z^i mod P` over the vector routed to this cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneSparseCell {
    pub count: i64,
    pub weighted: i64,
    pub fingerprint: u64,
}

/// Outcome of inspecting a single cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellDecode {
    Zero,
    One { index: u64, value: i64 },
    Many,
}

impl OneSparseCell {
    pub const WORDS: usize = 3;

    /// Adds `value` at `index`; `zpow` must be `z^index mod P`.
    #[inline]
    pub fn update(&mut self, index: u64, value: i64, zpow: u64) {
        self.count = self.count.wrapping_add(value);
        self.weighted = self
            .weighted
            .wrapping_add((index as i64).wrapping_mul(value));
        self.fingerprint = field::add(self.fingerprint, field::mul(field::from_i64(value), zpow));
    }

    #[inline]
    pub fn add(&mut self, other: &Self) {
        self.count = self.count.wrapping_add(other.count);
        self.weighted = self.weighted.wrapping_add(other.weighted);
        self.fingerprint = field::add(self.fingerprint, other.fingerprint);
    }

    #[inline]
    pub fn sub(&mut self, other: &Self) {
        self.count = self.count.wrapping_sub(other.count);
        self.weighted = self.weighted.wrapping_sub(other.weighted);
        self.fingerprint = field::sub(self.fingerprint, other.fingerprint);
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.count == 0 && self.weighted == 0 && self.fingerprint == 0
    }

    /// The cell a single entry `value·e_index` would produce.
    pub fn singleton(index: u64, value: i64, z: u64) -> Self {
        let mut c = Self::default();
        c.update(index, value, field::pow(z, index));
        c
    }

    /// Recovers the entry if the cell holds exactly one nonzero coordinate in `[0, dim)`.
    /// The fingerprint check rejects non-1-sparse contents except with probability `≤ dim/P`.
    pub fn decode(&self, z: u64, dim: u64) -> CellDecode {
        if self.is_zero() {
            return CellDecode::Zero;
        }
        if self.count == 0 || self.weighted % self.count != 0 {
            return CellDecode::Many;
        }
        let index = self.weighted / self.count;
        if index < 0 || index as u64 >= dim {
            return CellDecode::Many;
        }
        let index = index as u64;
        let expect = field::mul(field::from_i64(self.count), field::pow(z, index));
        if expect != self.fingerprint {
            return CellDecode::Many;
        }
        CellDecode::One {
            index,
            value: self.count,
        }
    }

    pub fn field_words(&self) -> [u64; 3] {
        [self.count as u64, self.weighted as u64, self.fingerprint]
    }
}
