//! C ABI for `gsketch`.
//!
//! Every object crosses the boundary as an opaque pointer created by a `*_new`
//! or `*_load` function and released by the matching `*_free`. Functions return a
//! [`GsStatus`]; on failure [`gs_last_error`] describes what went wrong. Panics are
//! caught and reported as [`GsStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use gsketch::estimators::{self, EstimateReport, SccConfig};
use gsketch::oracle::ExplicitGraph;
use gsketch::probe::Backend;
use gsketch::sketch::{
    AmsParams, AmsSketch, L0Params, L0Sampler, LinearSketch, SparseRecoverySketch, SrDecode, SrParams,
};
use gsketch::testers::{self, Decision, TesterConfig};
use gsketch::{EdgeUpdate, Error, Stream};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IllegalStream = 3,
    Parse = 4,
    Io = 5,
    IncompatibleSketches = 6,
    /// The output buffer is too small; the required length was written.
    BufferTooSmall = 7,
    /// The graph is disconnected (MST oracle).
    Disconnected = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsDecision {
    Accept = 0,
    Reject = 1,
    Fail = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsTester {
    Connectivity = 0,
    KEdge = 1,
    KVertex = 2,
    CycleFree = 3,
    Bipartite = 4,
    Euler = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsDecodeKind {
    Zero = 0,
    Recovered = 1,
    Fail = 2,
}

/// Estimator output. `value` is NaN when `aborted` is set.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GsEstimate {
    pub value: f64,
    pub aborted: bool,
    pub samples: size_t,
    pub sketch_words: size_t,
    pub p: f64,
}

/// Tester parameters. `p <= 0` and `delta <= 0` select the defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GsTesterConfig {
    pub eps: f64,
    pub k: u32,
    pub seed: u64,
    pub p: f64,
    pub delta: f64,
    /// Use exact answers in place of sketches.
    pub exact: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GsVerdict {
    pub decision: GsDecision,
    pub samples: size_t,
    pub sketch_words: size_t,
    /// Final edge count.
    pub lambda: u64,
}

/// Opaque edge-update stream.
pub struct GsStream(Stream);
/// Opaque AMS sketch.
pub struct GsAms(AmsSketch);
/// Opaque ℓ0 sampler.
pub struct GsL0(L0Sampler);
/// Opaque sparse recovery sketch.
pub struct GsSparse(SparseRecoverySketch);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        Error::IllegalStream { .. } | Error::InvalidEdge { .. } => GsStatus::IllegalStream,
        Error::Parse { .. } | Error::Json(_) | Error::Codec(_) => GsStatus::Parse,
        Error::Io(_) => GsStatus::Io,
        Error::IncompatibleSketches(_) => GsStatus::IncompatibleSketches,
        Error::IndexOutOfRange { .. } | Error::InvalidParameter(_) | Error::Gen(_) => GsStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), GsStatus>) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GsStatus::Ok,
        Ok(Err(s)) => s,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            GsStatus::Internal
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, GsStatus>;
}

impl<T> OrStatus<T> for gsketch::Result<T> {
    fn or_status(self) -> Result<T, GsStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, GsStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null pointer argument");
        GsStatus::NullPointer
    })
}

unsafe fn borrow_mut<'a, T>(p: *mut T) -> Result<&'a mut T, GsStatus> {
    p.as_mut().ok_or_else(|| {
        set_error("null pointer argument");
        GsStatus::NullPointer
    })
}

unsafe fn path_arg(path: *const c_char) -> Result<String, GsStatus> {
    if path.is_null() {
        set_error("null path");
        return Err(GsStatus::NullPointer);
    }
    CStr::from_ptr(path).to_str().map(str::to_owned).map_err(|_| {
        set_error("path is not valid UTF-8");
        GsStatus::InvalidArgument
    })
}

fn invalid(msg: &str) -> GsStatus {
    set_error(msg);
    GsStatus::InvalidArgument
}

/// Message for the most recent failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- streams ----

/// Creates an empty stream on `n` vertices with weights in `[1, max_weight]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_stream_new(n: u32, max_weight: u32, out: *mut *mut GsStream) -> GsStatus {
    guard(|| {
        let out = borrow_mut(out)?;
        let s = Stream::from_updates(n, max_weight, Vec::new()).or_status()?;
        *out = Box::into_raw(Box::new(GsStream(s)));
        Ok(())
    })
}

/// Reads a text or binary stream file.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_stream_load(path: *const c_char, out: *mut *mut GsStream) -> GsStatus {
    guard(|| {
        let out = borrow_mut(out)?;
        let s = Stream::load(path_arg(path)?).or_status()?;
        *out = Box::into_raw(Box::new(GsStream(s)));
        Ok(())
    })
}

/// Writes the stream in the text format.
///
/// # Safety
/// `stream` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gs_stream_save(stream: *const GsStream, path: *const c_char) -> GsStatus {
    guard(|| borrow(stream)?.0.save(path_arg(path)?).or_status())
}

/// Appends an update: `delta = 1` inserts, `delta = -1` deletes. Legality is
/// checked when the stream is consumed.
///
/// # Safety
/// `stream` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn gs_stream_push(stream: *mut GsStream, u: u32, v: u32, weight: u32, delta: i8) -> GsStatus {
    guard(|| {
        let s = borrow_mut(stream)?;
        if delta != 1 && delta != -1 {
            return Err(invalid("delta must be +1 or -1"));
        }
        s.0.push(EdgeUpdate::new(u, v, weight, delta));
        Ok(())
    })
}

/// Number of updates in the stream.
///
/// # Safety
/// `stream` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn gs_stream_len(stream: *const GsStream) -> size_t {
    stream.as_ref().map_or(0, |s| s.0.updates.len())
}

/// Replays the stream and reports the final edge count.
///
/// # Safety
/// `stream` and `edges` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_stream_validate(stream: *const GsStream, edges: *mut u64) -> GsStatus {
    guard(|| {
        let summary = borrow(stream)?.0.validate().or_status()?;
        *borrow_mut(edges)? = summary.lambda;
        Ok(())
    })
}

/// # Safety
/// `stream` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn gs_stream_free(stream: *mut GsStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

// ---- estimators ----

fn write_estimate(r: EstimateReport, out: &mut GsEstimate) {
    *out = GsEstimate {
        value: r.value.unwrap_or(f64::NAN),
        aborted: r.aborted,
        samples: r.samples,
        sketch_words: r.sketch_words,
        p: r.p,
    };
}

/// Number of components with at most `⌊1/eps⌋` vertices.
///
/// # Safety
/// `stream` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_estimate_scc(
    stream: *const GsStream,
    eps: f64,
    t: u32,
    seed: u64,
    out: *mut GsEstimate,
) -> GsStatus {
    guard(|| {
        let s = borrow(stream)?;
        let r = estimators::estimate_num_scc(&s.0, &SccConfig::new(eps, t, seed), false).or_status()?;
        write_estimate(r, borrow_mut(out)?);
        Ok(())
    })
}

/// Number of connected components within additive `eps·n`.
///
/// # Safety
/// `stream` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_estimate_cc(
    stream: *const GsStream,
    eps: f64,
    q: u32,
    seed: u64,
    out: *mut GsEstimate,
) -> GsStatus {
    guard(|| {
        let s = borrow(stream)?;
        let r = estimators::estimate_num_cc(&s.0, eps, q, seed).or_status()?;
        write_estimate(r, borrow_mut(out)?);
        Ok(())
    })
}

/// Weight of a minimum spanning tree within a factor `1 ± eps`.
///
/// # Safety
/// `stream` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_estimate_mst(
    stream: *const GsStream,
    eps: f64,
    q: u32,
    seed: u64,
    out: *mut GsEstimate,
) -> GsStatus {
    guard(|| {
        let s = borrow(stream)?;
        let r = estimators::estimate_mst_weight(&s.0, eps, q, seed).or_status()?;
        write_estimate(r, borrow_mut(out)?);
        Ok(())
    })
}

// ---- testers ----

fn run_tester(stream: &Stream, which: GsTester, cfg: &GsTesterConfig) -> gsketch::Result<testers::Verdict> {
    let mut c = TesterConfig::new(cfg.eps, cfg.seed).with_k(cfg.k.max(1));
    if cfg.p > 0.0 {
        c.p = Some(cfg.p);
    }
    if cfg.delta > 0.0 {
        c.delta = Some(cfg.delta);
    }
    if cfg.exact {
        c = c.with_backend(Backend::Exact);
    }
    match which {
        GsTester::Connectivity => testers::test_connectivity(stream, &c),
        GsTester::KEdge => testers::test_k_edge_connectivity(stream, &c),
        GsTester::KVertex => testers::test_k_vertex_connectivity(stream, &c),
        GsTester::CycleFree => testers::test_cycle_freeness(stream, &c),
        GsTester::Bipartite => testers::test_planar_bipartiteness(stream, &c),
        GsTester::Euler => testers::test_eulerianity(stream, &c),
    }
}

/// Runs one tester. If `json` is non-NULL it receives the full verdict, witness
/// included, as a string to release with [`gs_string_free`].
///
/// # Safety
/// `stream`, `cfg` and `out` must be valid; `json` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn gs_test(
    stream: *const GsStream,
    which: GsTester,
    cfg: *const GsTesterConfig,
    out: *mut GsVerdict,
    json: *mut *mut c_char,
) -> GsStatus {
    guard(|| {
        let s = borrow(stream)?;
        let v = run_tester(&s.0, which, borrow(cfg)?).or_status()?;
        *borrow_mut(out)? = GsVerdict {
            decision: match v.decision {
                Decision::Accept => GsDecision::Accept,
                Decision::Reject => GsDecision::Reject,
                Decision::Fail => GsDecision::Fail,
            },
            samples: v.stats.samples,
            sketch_words: v.stats.sketch_words,
            lambda: v.stats.lambda,
        };
        if let Some(slot) = json.as_mut() {
            let text = serde_json::to_string(&v).map_err(Error::from).or_status()?;
            *slot = CString::new(text).map_err(|_| GsStatus::Internal)?.into_raw();
        }
        Ok(())
    })
}

// ---- oracle ----

/// Exact number of connected components.
///
/// # Safety
/// `stream` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_components(stream: *const GsStream, out: *mut size_t) -> GsStatus {
    guard(|| {
        let g = ExplicitGraph::from_stream(&borrow(stream)?.0).or_status()?;
        *borrow_mut(out)? = g.cc_count();
        Ok(())
    })
}

/// Exact MST weight; `Disconnected` if there is no spanning tree.
///
/// # Safety
/// `stream` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_mst(stream: *const GsStream, out: *mut u64) -> GsStatus {
    guard(|| {
        let g = ExplicitGraph::from_stream(&borrow(stream)?.0).or_status()?;
        match g.mst_weight() {
            Ok(w) => {
                *borrow_mut(out)? = w;
                Ok(())
            }
            Err(_) => {
                set_error("graph is disconnected");
                Err(GsStatus::Disconnected)
            }
        }
    })
}

// ---- sketches ----

unsafe fn write_bytes(bytes: &[u8], buf: *mut u8, cap: size_t, len: *mut size_t) -> Result<(), GsStatus> {
    *borrow_mut(len)? = bytes.len();
    if buf.is_null() || cap < bytes.len() {
        set_error(format!("buffer needs {} bytes", bytes.len()));
        return Err(GsStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf, bytes.len());
    Ok(())
}

/// update / merge / serialize / deserialize / free for one sketch handle type.
macro_rules! sketch_common {
    ($handle:ident, $inner:ty, $update:ident, $merge:ident, $ser:ident, $de:ident, $free:ident) => {
        /// Adds `value` at coordinate `index`.
        ///
        /// # Safety
        /// `s` must come from this library.
        #[no_mangle]
        pub unsafe extern "C" fn $update(s: *mut $handle, index: u64, value: i64) -> GsStatus {
            guard(|| borrow_mut(s)?.0.update(index, value).or_status())
        }

        /// `dst += src`; both must share shape and seed.
        ///
        /// # Safety
        /// Both pointers must come from this library.
        #[no_mangle]
        pub unsafe extern "C" fn $merge(dst: *mut $handle, src: *const $handle) -> GsStatus {
            guard(|| {
                let other = borrow(src)?.0.clone();
                borrow_mut(dst)?.0.merge(&other).or_status()
            })
        }

        /// Serializes into `buf`. Always writes the needed size to `len`; returns
        /// `BufferTooSmall` if `cap` is short (pass NULL/0 to query).
        ///
        /// # Safety
        /// `buf` must hold `cap` bytes or be NULL; `len` must be valid.
        #[no_mangle]
        pub unsafe extern "C" fn $ser(s: *const $handle, buf: *mut u8, cap: size_t, len: *mut size_t) -> GsStatus {
            guard(|| write_bytes(&borrow(s)?.0.to_bytes(), buf, cap, len))
        }

        /// # Safety
        /// `buf` must hold `len` bytes; `out` must be valid.
        #[no_mangle]
        pub unsafe extern "C" fn $de(buf: *const u8, len: size_t, out: *mut *mut $handle) -> GsStatus {
            guard(|| {
                let out = borrow_mut(out)?;
                if buf.is_null() {
                    return Err(invalid("null buffer"));
                }
                let bytes = std::slice::from_raw_parts(buf, len);
                let s = <$inner as LinearSketch>::from_bytes(bytes).or_status()?;
                *out = Box::into_raw(Box::new($handle(s)));
                Ok(())
            })
        }

        /// # Safety
        /// `s` must come from this library or be NULL.
        #[no_mangle]
        pub unsafe extern "C" fn $free(s: *mut $handle) {
            if !s.is_null() {
                drop(Box::from_raw(s));
            }
        }
    };
}

sketch_common!(GsAms, AmsSketch, gs_ams_update, gs_ams_merge, gs_ams_serialize, gs_ams_deserialize, gs_ams_free);
sketch_common!(GsL0, L0Sampler, gs_l0_update, gs_l0_merge, gs_l0_serialize, gs_l0_deserialize, gs_l0_free);
sketch_common!(
    GsSparse,
    SparseRecoverySketch,
    gs_sparse_update,
    gs_sparse_merge,
    gs_sparse_serialize,
    gs_sparse_deserialize,
    gs_sparse_free
);

/// AMS sketch over `[0, dim)` with zero-test failure probability `delta`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_ams_new(dim: u64, delta: f64, seed: u64, out: *mut *mut GsAms) -> GsStatus {
    guard(|| {
        let out = borrow_mut(out)?;
        let p = AmsParams::new(dim, delta, seed).or_status()?;
        *out = Box::into_raw(Box::new(GsAms(AmsSketch::new(p))));
        Ok(())
    })
}

/// # Safety
/// `s` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_ams_estimate_f2(s: *const GsAms, out: *mut f64) -> GsStatus {
    guard(|| {
        *borrow_mut(out)? = borrow(s)?.0.estimate_f2();
        Ok(())
    })
}

/// # Safety
/// `s` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_ams_is_zero(s: *const GsAms, out: *mut bool) -> GsStatus {
    guard(|| {
        *borrow_mut(out)? = borrow(s)?.0.is_zero();
        Ok(())
    })
}

/// ℓ0 sampler over `[0, dim)` with `reps` independent repetitions.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_l0_new(dim: u64, reps: u32, seed: u64, out: *mut *mut GsL0) -> GsStatus {
    guard(|| {
        let out = borrow_mut(out)?;
        if dim == 0 || reps == 0 {
            return Err(invalid("dim and reps must be positive"));
        }
        *out = Box::into_raw(Box::new(GsL0(L0Sampler::new(L0Params::new(dim, reps as usize, seed)))));
        Ok(())
    })
}

/// Writes one nonzero coordinate and sets `found`, or clears `found`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_l0_sample(s: *const GsL0, found: *mut bool, index: *mut u64, value: *mut i64) -> GsStatus {
    guard(|| {
        let sample = borrow(s)?.0.sample();
        *borrow_mut(found)? = sample.is_some();
        if let Some((i, v)) = sample {
            *borrow_mut(index)? = i;
            *borrow_mut(value)? = v;
        }
        Ok(())
    })
}

/// Sparse recovery sketch for `k`-sparse vectors over `[0, dim)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_sparse_new(dim: u64, k: u32, delta: f64, seed: u64, out: *mut *mut GsSparse) -> GsStatus {
    guard(|| {
        let out = borrow_mut(out)?;
        let p = SrParams::new(dim, k as usize, delta, seed).or_status()?;
        *out = Box::into_raw(Box::new(GsSparse(SparseRecoverySketch::new(p))));
        Ok(())
    })
}

/// Decodes into caller arrays of capacity `cap`. On `Recovered`, `len` holds the
/// support size; if it exceeds `cap` the call returns `BufferTooSmall`.
///
/// # Safety
/// `indices` and `values` must hold `cap` entries (or be NULL with `cap = 0`).
#[no_mangle]
pub unsafe extern "C" fn gs_sparse_decode(
    s: *const GsSparse,
    kind: *mut GsDecodeKind,
    indices: *mut u64,
    values: *mut i64,
    cap: size_t,
    len: *mut size_t,
) -> GsStatus {
    guard(|| {
        let decoded = borrow(s)?.0.decode();
        let kind = borrow_mut(kind)?;
        let len = borrow_mut(len)?;
        *len = 0;
        match decoded {
            SrDecode::Zero => *kind = GsDecodeKind::Zero,
            SrDecode::Fail => *kind = GsDecodeKind::Fail,
            SrDecode::Recovered(entries) => {
                *kind = GsDecodeKind::Recovered;
                *len = entries.len();
                if entries.len() > cap || (cap > 0 && (indices.is_null() || values.is_null())) {
                    set_error(format!("support has {} entries", entries.len()));
                    return Err(GsStatus::BufferTooSmall);
                }
                for (j, (i, v)) in entries.into_iter().enumerate() {
                    *indices.add(j) = i;
                    *values.add(j) = v;
                }
            }
        }
        Ok(())
    })
}
