//! Versioned little-endian serialization shared by all sketch types.
//!
//! Layout: magic `GSK`, version byte, type tag byte, then type-specific shape
//! fields, the seed, and the counters. Shared hash state is rebuilt from the
//! seed, so two blobs merge iff their headers are byte-identical.

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 3] = b"GSK";
pub const VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum SketchTag {
    Ams = 1,
    L0 = 2,
    SparseRecovery = 3,
}

impl SketchTag {
    fn from_u8(b: u8) -> Result<Self> {
        match b {
            1 => Ok(SketchTag::Ams),
            2 => Ok(SketchTag::L0),
            3 => Ok(SketchTag::SparseRecovery),
            t => Err(Error::Codec(format!("unknown sketch type tag {t}"))),
        }
    }
}

pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new(tag: SketchTag) -> Self {
        let mut buf = Vec::with_capacity(64);
        buf.extend_from_slice(MAGIC);
        buf.push(VERSION);
        buf.push(tag as u8);
        Writer { buf }
    }

    pub fn u64(&mut self, x: u64) -> &mut Self {
        self.buf.extend_from_slice(&x.to_le_bytes());
        self
    }

    pub fn i64(&mut self, x: i64) -> &mut Self {
        self.buf.extend_from_slice(&x.to_le_bytes());
        self
    }

    pub fn f64(&mut self, x: f64) -> &mut Self {
        self.u64(x.to_bits())
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8], expect: SketchTag) -> Result<Self> {
        if buf.len() < 5 || &buf[..3] != MAGIC {
            return Err(Error::Codec("bad magic".into()));
        }
        if buf[3] != VERSION {
            return Err(Error::Codec(format!("unsupported version {}", buf[3])));
        }
        let tag = SketchTag::from_u8(buf[4])?;
        if tag != expect {
            return Err(Error::Codec(format!("expected {expect:?} blob, found {tag:?}")));
        }
        Ok(Reader { buf, pos: 5 })
    }

    pub fn u64(&mut self) -> Result<u64> {
        let end = self.pos + 8;
        let bytes = self
            .buf
            .get(self.pos..end)
            .ok_or_else(|| Error::Codec("truncated blob".into()))?;
        self.pos = end;
        Ok(u64::from_le_bytes(bytes.try_into().unwrap()))
    }

    pub fn i64(&mut self) -> Result<i64> {
        self.u64().map(|x| x as i64)
    }

    pub fn f64(&mut self) -> Result<f64> {
        self.u64().map(f64::from_bits)
    }

    pub fn usize(&mut self, limit: usize) -> Result<usize> {
        let x = self.u64()?;
        if x > limit as u64 {
            return Err(Error::Codec(format!("shape field {x} exceeds limit {limit}")));
        }
        Ok(x as usize)
    }

    pub fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Codec(format!(
                "{} trailing bytes",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

/// Peeks at the type tag of a blob.
pub fn tag_of(buf: &[u8]) -> Result<SketchTag> {
    if buf.len() < 5 || &buf[..3] != MAGIC {
        return Err(Error::Codec("bad magic".into()));
    }
    SketchTag::from_u8(buf[4])
}
