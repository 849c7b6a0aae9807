//! AMS second-moment sketch used as a zero test.

use std::sync::Arc;

use super::hash::{derive, powers, FourWise};
use crate::error::{Error, Result};

/// Shared shape and hash functions of a family of AMS sketches.
#[derive(Debug, PartialEq)]
pub struct AmsParams {
    pub dim: u64,
    pub rows: usize,
    pub cols: usize,
    pub delta: f64,
    pub seed: u64,
    signs: Vec<FourWise>,
}

impl AmsParams {
    /// Counter count `⌈48 ln(1/δ)⌉`, rounded up to whole groups of six;
    /// each group of six is averaged and the median of the group means is taken.
    pub fn new(dim: u64, delta: f64, seed: u64) -> Result<Arc<Self>> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "AMS failure probability must lie in (0, 1), got {delta}"
            )));
        }
        let total = (48.0 * (1.0 / delta).ln()).ceil().max(1.0) as usize;
        let cols = 6;
        let rows = total.div_ceil(cols);
        Ok(Self::with_shape(dim, rows, cols, delta, seed))
    }

    pub fn with_shape(dim: u64, rows: usize, cols: usize, delta: f64, seed: u64) -> Arc<Self> {
        let signs = (0..rows * cols)
            .map(|c| FourWise::new(derive(seed, c as u64)))
            .collect();
        Arc::new(AmsParams {
            dim,
            rows,
            cols,
            delta,
            seed,
            signs,
        })
    }

    pub fn counters(&self) -> usize {
        self.rows * self.cols
    }

    /// Words held by the shared hash coefficients.
    pub fn param_words(&self) -> usize {
        self.signs.len() * 4
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.rows == other.rows
            && self.cols == other.cols
            && self.seed == other.seed
    }

    /// Adds `c·σ_j(index)` to every counter `j`.
    #[inline]
    pub fn apply(&self, counters: &mut [i64], index: u64, c: i64) {
        let (x, x2, x3) = powers(index);
        for (ctr, h) in counters.iter_mut().zip(&self.signs) {
            *ctr = ctr.wrapping_add(h.sign_powers(x, x2, x3).wrapping_mul(c));
        }
    }

    /// Median over rows of the row-mean of squared counters.
    pub fn estimate(&self, counters: &[i64]) -> f64 {
        let mut means: Vec<f64> = counters
            .chunks(self.cols)
            .map(|row| row.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>() / self.cols as f64)
            .collect();
        means.sort_by(|a, b| a.total_cmp(b));
        let r = means.len();
        if r == 0 {
            0.0
        } else if r % 2 == 1 {
            means[r / 2]
        } else {
            (means[r / 2 - 1] + means[r / 2]) / 2.0
        }
    }
}

/// Linear sketch `Π x` with random ±1 entries; `F2(x) = Σ x_i²` is estimated from it.
#[derive(Clone, Debug)]
pub struct AmsSketch {
    params: Arc<AmsParams>,
    counters: Vec<i64>,
}

impl PartialEq for AmsSketch {
    fn eq(&self, other: &Self) -> bool {
        self.params.compatible(&other.params) && self.counters == other.counters
    }
}

impl AmsSketch {
    pub fn new(params: Arc<AmsParams>) -> Self {
        let counters = vec![0; params.counters()];
        AmsSketch { params, counters }
    }

    pub fn from_counters(params: Arc<AmsParams>, counters: Vec<i64>) -> Result<Self> {
        if counters.len() != params.counters() {
            return Err(Error::Codec(format!(
                "expected {} AMS counters, got {}",
                params.counters(),
                counters.len()
            )));
        }
        Ok(AmsSketch { params, counters })
    }

    pub fn params(&self) -> &Arc<AmsParams> {
        &self.params
    }

    pub fn counters(&self) -> &[i64] {
        &self.counters
    }

    pub fn update(&mut self, index: u64, c: i64) -> Result<()> {
        if index >= self.params.dim {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.params.dim,
            });
        }
        self.params.apply(&mut self.counters, index, c);
        Ok(())
    }

    pub fn estimate_f2(&self) -> f64 {
        self.params.estimate(&self.counters)
    }

    /// True iff the F2 estimate is below 1/2. Exact for the zero vector.
    pub fn is_zero(&self) -> bool {
        self.estimate_f2() < 0.5
    }

    /// Adds another sketch's counters in place; shapes must agree.
    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        if !self.params.compatible(&other.params) {
            return Err(Error::IncompatibleSketches("AMS shape or seed differs".into()));
        }
        add_counters(&mut self.counters, &other.counters);
        Ok(())
    }

    pub fn words(&self) -> usize {
        self.counters.len()
    }
}

#[inline]
pub(crate) fn add_counters(acc: &mut [i64], other: &[i64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a = a.wrapping_add(*b);
    }
}
