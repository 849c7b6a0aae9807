//! Dynamic edge-update streams over a fixed vertex set `[n]`.
//!
//! A stream is a header (`n`, maximum weight class `W`) followed by edge
//! insertions and deletions. At every prefix the graph is simple: each edge
//! is present at most once and carries a single weight class. [`replay`]
//! enforces that and feeds every update, in order, to a set of sinks.

use std::collections::HashMap;
use std::io::{BufRead, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sketch::hash::keyed;

/// Vertex identifier in `[n]`, 1-based.
pub type Vertex = u32;

/// One stream element: insertion (`delta = +1`) or deletion (`delta = -1`)
/// of an undirected edge. Endpoints are stored canonically with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeUpdate {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: u32,
    pub delta: i8,
}

impl EdgeUpdate {
    pub fn new(u: Vertex, v: Vertex, weight: u32, delta: i8) -> Self {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        EdgeUpdate { u, v, weight, delta }
    }

    pub fn insert(u: Vertex, v: Vertex) -> Self {
        Self::new(u, v, 1, 1)
    }

    pub fn delete(u: Vertex, v: Vertex) -> Self {
        Self::new(u, v, 1, -1)
    }

    pub fn insert_weighted(u: Vertex, v: Vertex, weight: u32) -> Self {
        Self::new(u, v, weight, 1)
    }

    pub fn is_insert(&self) -> bool {
        self.delta > 0
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }
}

/// Stream header: vertex count, maximum weight class and an optional accuracy hint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamHeader {
    pub n: u32,
    pub max_weight: u32,
    pub declared_eps: Option<f64>,
}

impl StreamHeader {
    pub fn new(n: u32, max_weight: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if max_weight == 0 {
            return Err(Error::InvalidParameter("W must be at least 1".into()));
        }
        Ok(StreamHeader {
            n,
            max_weight,
            declared_eps: None,
        })
    }
}

/// Dimension of the edge-index space, `C(n, 2)`.
pub fn edge_dimension(n: u32) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Maps a canonical pair `1 <= j < k <= n` to its row-major upper-triangular index.
pub fn encode_edge(n: u32, j: Vertex, k: Vertex) -> Result<u64> {
    if j == 0 || j >= k || k > n {
        return Err(Error::InvalidEdge { n, u: j, v: k });
    }
    let (n64, j64, k64) = (n as u64, j as u64, k as u64);
    Ok((j64 - 1) * (2 * n64 - j64) / 2 + (k64 - j64 - 1))
}

#[inline]
pub(crate) fn encode_edge_unchecked(n: u32, j: Vertex, k: Vertex) -> u64 {
    let (n64, j64, k64) = (n as u64, j as u64, k as u64);
    (j64 - 1) * (2 * n64 - j64) / 2 + (k64 - j64 - 1)
}

fn row_start(n: u64, j: u64) -> u64 {
    (j - 1) * (2 * n - j) / 2
}

/// Inverse of [`encode_edge`].
pub fn decode_edge(n: u32, idx: u64) -> Result<(Vertex, Vertex)> {
    let dim = edge_dimension(n);
    if idx >= dim {
        return Err(Error::IndexOutOfRange { index: idx, dim });
    }
    let n64 = n as u64;
    let b = (2 * n64 - 1) as f64;
    let disc = (b * b - 8.0 * idx as f64).max(0.0);
    let mut j = (((b - disc.sqrt()) / 2.0).floor() as u64 + 1).clamp(1, n64 - 1);
    while j > 1 && row_start(n64, j) > idx {
        j -= 1;
    }
    while j + 1 < n64 && row_start(n64, j + 1) <= idx {
        j += 1;
    }
    let k = idx - row_start(n64, j) + j + 1;
    Ok((j as Vertex, k as Vertex))
}

/// A consumer of stream updates.
pub trait UpdateSink {
    fn apply(&mut self, upd: &EdgeUpdate);
}

impl<F: FnMut(&EdgeUpdate)> UpdateSink for F {
    fn apply(&mut self, upd: &EdgeUpdate) {
        self(upd)
    }
}

/// Exact edge counter `λ`.
#[derive(Clone, Debug, Default)]
pub struct EdgeCounter {
    pub lambda: i64,
}

impl UpdateSink for EdgeCounter {
    fn apply(&mut self, upd: &EdgeUpdate) {
        self.lambda += upd.delta as i64;
    }
}

/// Exact degree counters for a fixed set of tracked vertices.
#[derive(Clone, Debug)]
pub struct DegreeTracker {
    tracked: VertexSample,
    degrees: Vec<i64>,
}

impl DegreeTracker {
    pub fn new(tracked: VertexSample) -> Self {
        let degrees = vec![0; tracked.len()];
        DegreeTracker { tracked, degrees }
    }

    pub fn degree(&self, v: Vertex) -> Option<i64> {
        self.tracked.slot(v).map(|s| self.degrees[s])
    }

    pub fn odd_vertices(&self) -> Vec<Vertex> {
        self.tracked
            .iter()
            .zip(&self.degrees)
            .filter(|(_, d)| *d % 2 != 0)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn words(&self) -> usize {
        self.tracked.len() * 2
    }
}

impl UpdateSink for DegreeTracker {
    fn apply(&mut self, upd: &EdgeUpdate) {
        for x in [upd.u, upd.v] {
            if let Some(s) = self.tracked.slot(x) {
                self.degrees[s] += upd.delta as i64;
            }
        }
    }
}

/// A sorted set of sampled vertices with `O(log |S|)` membership lookups.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSample(Vec<Vertex>);

impl VertexSample {
    pub fn from_vec(mut vs: Vec<Vertex>) -> Self {
        vs.sort_unstable();
        vs.dedup();
        VertexSample(vs)
    }

    pub fn all(n: u32) -> Self {
        VertexSample((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    #[inline]
    pub fn slot(&self, v: Vertex) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn vertex(&self, slot: usize) -> Vertex {
        self.0[slot]
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }
}

/// Samples each vertex independently with probability `p`, keyed by `seed`.
///
/// Vertex `v` is kept iff `hash64(seed, v) / 2^64 < p`, so the result is a
/// pure function of `(n, p, seed)`.
pub fn sample_vertices(n: u32, p: f64, seed: u64) -> VertexSample {
    if p >= 1.0 {
        return VertexSample::all(n);
    }
    let threshold = probability_threshold(p);
    VertexSample(
        (1..=n)
            .filter(|&v| keyed(seed, v as u64) < threshold)
            .collect(),
    )
}

/// `floor(p * 2^64)` saturated to `u64`; `hash < threshold` happens with probability `p`.
pub(crate) fn probability_threshold(p: f64) -> u64 {
    if p <= 0.0 {
        0
    } else if p >= 1.0 {
        u64::MAX
    } else {
        (p * 18446744073709551616.0) as u64
    }
}

/// The abort rule: more than `16np` sampled vertices. Vacuous when `16np >= n`.
pub fn exceeds_sample_budget(n: u32, p: f64, sampled: usize) -> bool {
    let budget = 16.0 * n as f64 * p;
    budget < n as f64 && sampled as f64 > budget
}

/// A header plus an ordered sequence of updates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stream {
    pub header: StreamHeader,
    pub updates: Vec<EdgeUpdate>,
}

/// Result of a successful replay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplaySummary {
    /// Final edge count.
    pub lambda: u64,
    pub updates: usize,
}

impl Stream {
    pub fn new(header: StreamHeader) -> Self {
        Stream {
            header,
            updates: Vec::new(),
        }
    }

    pub fn from_updates(n: u32, max_weight: u32, updates: Vec<EdgeUpdate>) -> Result<Self> {
        Ok(Stream {
            header: StreamHeader::new(n, max_weight)?,
            updates,
        })
    }

    /// Builds an insert-only stream from an edge list.
    pub fn from_edges(n: u32, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let updates = edges
            .into_iter()
            .map(|(u, v)| EdgeUpdate::insert(u, v))
            .collect();
        Self::from_updates(n, 1, updates)
    }

    pub fn n(&self) -> u32 {
        self.header.n
    }

    pub fn push(&mut self, upd: EdgeUpdate) {
        self.updates.push(upd);
    }

    /// Checks the multiplicity invariant without feeding any sink.
    pub fn validate(&self) -> Result<ReplaySummary> {
        replay(self, &mut [])
    }

    /// Final edge set as canonical `(u, v) -> weight`, sorted.
    pub fn final_edges(&self) -> Result<Vec<(Vertex, Vertex, u32)>> {
        let mut live: HashMap<(Vertex, Vertex), u32> = HashMap::new();
        replay_with(self, &mut [], &mut live)?;
        let mut edges: Vec<_> = live.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        edges.sort_unstable();
        Ok(edges)
    }

    /// Keeps only updates whose weight is at most `level`; the result is again a valid stream.
    pub fn weight_prefix(&self, level: u32) -> Stream {
        Stream {
            header: StreamHeader {
                max_weight: level.min(self.header.max_weight).max(1),
                ..self.header
            },
            updates: self
                .updates
                .iter()
                .filter(|u| u.weight <= level)
                .copied()
                .collect(),
        }
    }

    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        parse_text(reader)
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        match self.header.declared_eps {
            Some(eps) => writeln!(w, "H {} {} {}", self.header.n, self.header.max_weight, eps)?,
            None => writeln!(w, "H {} {}", self.header.n, self.header.max_weight)?,
        }
        for upd in &self.updates {
            let op = if upd.is_insert() { 'a' } else { 'd' };
            if upd.weight == 1 {
                writeln!(w, "{} {} {}", op, upd.u, upd.v)?;
            } else {
                writeln!(w, "{} {} {} {}", op, upd.u, upd.v, upd.weight)?;
            }
        }
        Ok(())
    }

    /// Binary layout: magic `GSB1`, `n: u32`, `W: u32`, then 11-byte records
    /// `(u: u32, v: u32, w: u16, delta: i8)`, all little-endian.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&self.header.n.to_le_bytes())?;
        w.write_all(&self.header.max_weight.to_le_bytes())?;
        for upd in &self.updates {
            let weight = u16::try_from(upd.weight).map_err(|_| {
                Error::InvalidParameter(format!("weight {} does not fit in u16", upd.weight))
            })?;
            w.write_all(&upd.u.to_le_bytes())?;
            w.write_all(&upd.v.to_le_bytes())?;
            w.write_all(&weight.to_le_bytes())?;
            w.write_all(&upd.delta.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() < 12 || &buf[..4] != BINARY_MAGIC {
            return Err(Error::Parse {
                line: 0,
                msg: "missing binary stream header".into(),
            });
        }
        let n = u32::from_le_bytes(buf[4..8].try_into().unwrap());
        let max_weight = u32::from_le_bytes(buf[8..12].try_into().unwrap());
        let body = &buf[12..];
        if body.len() % 11 != 0 {
            return Err(Error::Parse {
                line: 0,
                msg: "truncated binary record".into(),
            });
        }
        let updates = body
            .chunks_exact(11)
            .map(|c| {
                let u = u32::from_le_bytes(c[0..4].try_into().unwrap());
                let v = u32::from_le_bytes(c[4..8].try_into().unwrap());
                let w = u16::from_le_bytes(c[8..10].try_into().unwrap());
                EdgeUpdate::new(u, v, w as u32, c[10] as i8)
            })
            .collect();
        Self::from_updates(n, max_weight, updates)
    }

    /// Reads a stream file; binary if it starts with the binary magic, text otherwise.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        if bytes.starts_with(BINARY_MAGIC) {
            Self::read_binary(&bytes[..])
        } else {
            Self::read_text(&bytes[..])
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_text(f)
    }
}

const BINARY_MAGIC: &[u8; 4] = b"GSB1";

fn parse_text<R: BufRead>(reader: R) -> Result<Stream> {
    let mut header: Option<StreamHeader> = None;
    let mut updates = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let perr = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        let int = |s: &str| -> Result<u32> {
            s.parse::<u32>()
                .map_err(|_| perr(&format!("expected a non-negative integer, got `{s}`")))
        };
        match fields[0] {
            "H" => {
                if header.is_some() {
                    return Err(perr("duplicate header"));
                }
                if fields.len() < 3 || fields.len() > 4 {
                    return Err(perr("header must be `H <n> <W> [eps]`"));
                }
                let mut h = StreamHeader::new(int(fields[1])?, int(fields[2])?)
                    .map_err(|e| perr(&e.to_string()))?;
                if let Some(e) = fields.get(3) {
                    h.declared_eps = Some(e.parse().map_err(|_| perr("bad eps"))?);
                }
                header = Some(h);
            }
            "a" | "d" => {
                if header.is_none() {
                    return Err(perr("record before header"));
                }
                if fields.len() < 3 || fields.len() > 4 {
                    return Err(perr("record must be `a|d <u> <v> [<w>]`"));
                }
                let weight = match fields.get(3) {
                    Some(w) => int(w)?,
                    None => 1,
                };
                let delta = if fields[0] == "a" { 1 } else { -1 };
                updates.push(EdgeUpdate::new(int(fields[1])?, int(fields[2])?, weight, delta));
            }
            other => return Err(perr(&format!("unknown record type `{other}`"))),
        }
    }
    let header = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing `H <n> <W>` header".into(),
    })?;
    Ok(Stream { header, updates })
}

/// Feeds every update to every sink, in order, checking the simple-graph
/// invariant first. Fails fast with the 1-based index of the offending update.
pub fn replay(stream: &Stream, sinks: &mut [&mut dyn UpdateSink]) -> Result<ReplaySummary> {
    let mut live = HashMap::new();
    replay_with(stream, sinks, &mut live)
}

fn replay_with(
    stream: &Stream,
    sinks: &mut [&mut dyn UpdateSink],
    live: &mut HashMap<(Vertex, Vertex), u32>,
) -> Result<ReplaySummary> {
    let StreamHeader { n, max_weight, .. } = stream.header;
    let mut lambda: i64 = 0;
    for (i, upd) in stream.updates.iter().enumerate() {
        let index = i + 1;
        let illegal = |reason: String| Error::IllegalStream { index, reason };
        let (u, v) = (upd.u.min(upd.v), upd.u.max(upd.v));
        if u == v {
            return Err(illegal(format!("self-loop on vertex {u}")));
        }
        if u == 0 || v > n {
            return Err(illegal(format!("edge ({u}, {v}) outside [1, {n}]")));
        }
        if upd.weight == 0 || upd.weight > max_weight {
            return Err(illegal(format!(
                "weight {} outside [1, {max_weight}]",
                upd.weight
            )));
        }
        match upd.delta {
            1 => {
                if let Some(w) = live.get(&(u, v)) {
                    return Err(illegal(format!(
                        "duplicate insert of ({u}, {v}) (present with weight {w})"
                    )));
                }
                live.insert((u, v), upd.weight);
                lambda += 1;
            }
            -1 => match live.get(&(u, v)) {
                Some(&w) if w == upd.weight => {
                    live.remove(&(u, v));
                    lambda -= 1;
                }
                Some(&w) => {
                    return Err(illegal(format!(
                        "delete of ({u}, {v}) with weight {} but present with weight {w}",
                        upd.weight
                    )))
                }
                None => return Err(illegal(format!("delete of absent edge ({u}, {v})"))),
            },
            d => return Err(illegal(format!("delta must be +1 or -1, got {d}"))),
        }
        let canon = EdgeUpdate::new(u, v, upd.weight, upd.delta);
        for sink in sinks.iter_mut() {
            sink.apply(&canon);
        }
    }
    Ok(ReplaySummary {
        lambda: lambda as u64,
        updates: stream.updates.len(),
    })
}
