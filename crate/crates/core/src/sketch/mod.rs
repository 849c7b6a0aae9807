//! Linear sketch primitives.

pub mod ams;
pub mod cell;
pub mod codec;
pub mod field;
pub mod hash;
pub mod l0;
pub mod sparse;

use std::sync::Arc;

pub use ams::{AmsParams, AmsSketch};
pub use cell::{CellDecode, OneSparseCell};
pub use l0::{L0Params, L0Sampler};
pub use sparse::{SparseRecoverySketch, SrDecode, SrParams};

use crate::error::Result;
use codec::{Reader, SketchTag, Writer};

const MAX_SHAPE: usize = 1 << 28;

/// Operations common to every linear sketch: `S(x) + S(y) = S(x + y)`.
pub trait LinearSketch: Sized + Clone {
    /// Adds `value` at coordinate `index`.
    fn update(&mut self, index: u64, value: i64) -> Result<()>;
    /// Entrywise sum; fails unless both sketches share shape and seed.
    fn merge(&mut self, other: &Self) -> Result<()>;
    /// Counter storage in 64-bit words, excluding shared hash state.
    fn words(&self) -> usize;
    fn to_bytes(&self) -> Vec<u8>;
    fn from_bytes(buf: &[u8]) -> Result<Self>;
}

/// Returns `a + b` without modifying either input.
pub fn sketch_merge<S: LinearSketch>(a: &S, b: &S) -> Result<S> {
    let mut out = a.clone();
    out.merge(b)?;
    Ok(out)
}

impl LinearSketch for AmsSketch {
    fn update(&mut self, index: u64, value: i64) -> Result<()> {
        AmsSketch::update(self, index, value)
    }

    fn merge(&mut self, other: &Self) -> Result<()> {
        self.add_assign(other)
    }

    fn words(&self) -> usize {
        AmsSketch::words(self)
    }

    fn to_bytes(&self) -> Vec<u8> {
        let p = self.params();
        let mut w = Writer::new(SketchTag::Ams);
        w.u64(p.dim).u64(p.rows as u64).u64(p.cols as u64).f64(p.delta).u64(p.seed);
        for &c in self.counters() {
            w.i64(c);
        }
        w.finish()
    }

    fn from_bytes(buf: &[u8]) -> Result<Self> {
        let mut r = Reader::new(buf, SketchTag::Ams)?;
        let dim = r.u64()?;
        let rows = r.usize(MAX_SHAPE)?;
        let cols = r.usize(MAX_SHAPE)?;
        let delta = r.f64()?;
        let seed = r.u64()?;
        let n = rows
            .checked_mul(cols)
            .filter(|&n| n <= MAX_SHAPE)
            .ok_or_else(|| crate::Error::Codec("AMS shape too large".into()))?;
        let counters = (0..n).map(|_| r.i64()).collect::<Result<Vec<_>>>()?;
        r.finish()?;
        AmsSketch::from_counters(AmsParams::with_shape(dim, rows, cols, delta, seed), counters)
    }
}

fn write_cells(w: &mut Writer, cells: &[OneSparseCell]) {
    for c in cells {
        w.i64(c.count).i64(c.weighted).u64(c.fingerprint);
    }
}

fn read_cells(r: &mut Reader, n: usize) -> Result<Vec<OneSparseCell>> {
    (0..n)
        .map(|_| {
            Ok(OneSparseCell {
                count: r.i64()?,
                weighted: r.i64()?,
                fingerprint: r.u64()?,
            })
        })
        .collect()
}

impl LinearSketch for L0Sampler {
    fn update(&mut self, index: u64, value: i64) -> Result<()> {
        L0Sampler::update(self, index, value)
    }

    fn merge(&mut self, other: &Self) -> Result<()> {
        self.add_assign(other)
    }

    fn words(&self) -> usize {
        L0Sampler::words(self)
    }

    fn to_bytes(&self) -> Vec<u8> {
        let p = self.params();
        let mut w = Writer::new(SketchTag::L0);
        w.u64(p.dim).u64(p.reps as u64).u64(p.levels as u64).u64(p.seed);
        write_cells(&mut w, self.cells());
        w.finish()
    }

    fn from_bytes(buf: &[u8]) -> Result<Self> {
        let mut r = Reader::new(buf, SketchTag::L0)?;
        let dim = r.u64()?;
        let reps = r.usize(MAX_SHAPE)?;
        let levels = r.usize(65)?;
        let seed = r.u64()?;
        let params = L0Params::new(dim, reps, seed);
        if params.levels != levels || params.reps != reps {
            return Err(crate::Error::Codec("sampler shape inconsistent with dimension".into()));
        }
        let cells = read_cells(&mut r, params.cells())?;
        r.finish()?;
        L0Sampler::from_cells(params, cells)
    }
}

impl LinearSketch for SparseRecoverySketch {
    fn update(&mut self, index: u64, value: i64) -> Result<()> {
        SparseRecoverySketch::update(self, index, value)
    }

    fn merge(&mut self, other: &Self) -> Result<()> {
        self.add_assign(other)
    }

    fn words(&self) -> usize {
        SparseRecoverySketch::words(self)
    }

    fn to_bytes(&self) -> Vec<u8> {
        let p = self.params();
        let mut w = Writer::new(SketchTag::SparseRecovery);
        w.u64(p.dim)
            .u64(p.k as u64)
            .u64(p.rows as u64)
            .u64(p.buckets as u64)
            .f64(p.delta)
            .u64(p.seed);
        write_cells(&mut w, self.cells());
        write_cells(&mut w, std::slice::from_ref(self.global()));
        w.finish()
    }

    fn from_bytes(buf: &[u8]) -> Result<Self> {
        let mut r = Reader::new(buf, SketchTag::SparseRecovery)?;
        let dim = r.u64()?;
        let k = r.usize(MAX_SHAPE)?;
        let rows = r.usize(MAX_SHAPE)?;
        let buckets = r.usize(MAX_SHAPE)?;
        let delta = r.f64()?;
        let seed = r.u64()?;
        if rows.checked_mul(buckets).is_none_or(|c| c > MAX_SHAPE) {
            return Err(crate::Error::Codec("recovery shape too large".into()));
        }
        let params = Arc::new(SrParams::with_shape(dim, k, rows, buckets, delta, seed));
        let cells = read_cells(&mut r, params.cells())?;
        let global = read_cells(&mut r, 1)?[0];
        r.finish()?;
        SparseRecoverySketch::from_parts(params, cells, global)
    }
}
