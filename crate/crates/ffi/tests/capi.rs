use std::ffi::{CStr, CString};
use std::ptr;

use gsketch_ffi::*;

unsafe fn path_stream(n: u32) -> *mut GsStream {
    let mut s = ptr::null_mut();
    assert_eq!(gs_stream_new(n, 1, &mut s), GsStatus::Ok);
    for v in 1..n {
        assert_eq!(gs_stream_push(s, v, v + 1, 1, 1), GsStatus::Ok);
    }
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(gs_last_error()).to_string_lossy().into_owned()
}

#[test]
fn stream_oracle_and_estimates() {
    unsafe {
        let s = path_stream(200);
        assert_eq!(gs_stream_len(s), 199);
        let mut m = 0;
        assert_eq!(gs_stream_validate(s, &mut m), GsStatus::Ok);
        assert_eq!(m, 199);
        let mut cc = 0;
        assert_eq!(gs_oracle_components(s, &mut cc), GsStatus::Ok);
        assert_eq!(cc, 1);
        let mut w = 0;
        assert_eq!(gs_oracle_mst(s, &mut w), GsStatus::Ok);
        assert_eq!(w, 199);

        let mut est = GsEstimate { value: 0.0, aborted: false, samples: 0, sketch_words: 0, p: 0.0 };
        assert_eq!(gs_estimate_cc(s, 0.3, 1, 5, &mut est), GsStatus::Ok);
        assert!(!est.aborted && est.sketch_words > 0);
        assert!((est.value - 1.0).abs() <= 0.3 * 200.0);
        assert_eq!(gs_estimate_mst(s, 0.5, 1, 5, &mut est), GsStatus::Ok);
        assert_eq!(gs_estimate_scc(s, 0.5, 1, 5, &mut est), GsStatus::Ok);
        gs_stream_free(s);
    }
}

#[test]
fn tester_verdict_and_json() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gs_stream_new(100, 1, &mut s), GsStatus::Ok);
        for i in 0..50 {
            gs_stream_push(s, 2 * i + 1, 2 * i + 2, 1, 1);
        }
        let cfg = GsTesterConfig { eps: 0.25, k: 1, seed: 1, p: 0.0, delta: 0.0, exact: false };
        let mut v = GsVerdict { decision: GsDecision::Fail, samples: 0, sketch_words: 0, lambda: 0 };
        let mut json = ptr::null_mut();
        assert_eq!(gs_test(s, GsTester::Connectivity, &cfg, &mut v, &mut json), GsStatus::Ok);
        assert_eq!(v.decision, GsDecision::Reject);
        assert_eq!(v.lambda, 50);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        gs_string_free(json);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["decision"], "reject");

        assert_eq!(gs_test(s, GsTester::Euler, &cfg, &mut v, ptr::null_mut()), GsStatus::Ok);
        assert_eq!(v.decision, GsDecision::Reject);
        gs_stream_free(s);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gs_stream_new(3, 1, &mut s), GsStatus::Ok);
        gs_stream_push(s, 1, 2, 1, 1);
        gs_stream_push(s, 2, 1, 1, 1);
        let mut m = 0;
        assert_eq!(gs_stream_validate(s, &mut m), GsStatus::IllegalStream);
        assert!(!last_error().is_empty());
        assert_eq!(gs_stream_push(s, 1, 2, 1, 3), GsStatus::InvalidArgument);
        gs_stream_free(s);

        let mut w = 0;
        assert_eq!(gs_oracle_mst(ptr::null(), &mut w), GsStatus::NullPointer);
        let missing = CString::new("/nonexistent/stream.txt").unwrap();
        assert_eq!(gs_stream_load(missing.as_ptr(), &mut s), GsStatus::Io);

        let disconnected = {
            let mut d = ptr::null_mut();
            gs_stream_new(4, 1, &mut d);
            gs_stream_push(d, 1, 2, 1, 1);
            d
        };
        assert_eq!(gs_oracle_mst(disconnected, &mut w), GsStatus::Disconnected);
        gs_stream_free(disconnected);
        gs_stream_free(ptr::null_mut());
    }
}

#[test]
fn stream_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let file = CString::new(dir.path().join("p.txt").to_str().unwrap()).unwrap();
    unsafe {
        let s = path_stream(30);
        assert_eq!(gs_stream_save(s, file.as_ptr()), GsStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(gs_stream_load(file.as_ptr(), &mut back), GsStatus::Ok);
        assert_eq!(gs_stream_len(back), 29);
        gs_stream_free(s);
        gs_stream_free(back);
    }
}

#[test]
fn sketch_handles() {
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(gs_sparse_new(1 << 16, 8, 0.01, 3, &mut a), GsStatus::Ok);
        assert_eq!(gs_sparse_new(1 << 16, 8, 0.01, 3, &mut b), GsStatus::Ok);
        gs_sparse_update(a, 10, 4);
        gs_sparse_update(a, 900, -2);
        gs_sparse_update(b, 900, 2);
        gs_sparse_update(b, 4000, 7);
        assert_eq!(gs_sparse_merge(a, b), GsStatus::Ok);

        let mut kind = GsDecodeKind::Fail;
        let (mut idx, mut val, mut len) = ([0u64; 8], [0i64; 8], 0);
        assert_eq!(gs_sparse_decode(a, &mut kind, idx.as_mut_ptr(), val.as_mut_ptr(), 8, &mut len), GsStatus::Ok);
        assert_eq!(kind, GsDecodeKind::Recovered);
        let mut got: Vec<_> = idx[..len].iter().copied().zip(val[..len].iter().copied()).collect();
        got.sort();
        assert_eq!(got, vec![(10, 4), (4000, 7)]);
        assert_eq!(
            gs_sparse_decode(a, &mut kind, idx.as_mut_ptr(), val.as_mut_ptr(), 1, &mut len),
            GsStatus::BufferTooSmall
        );

        let mut need = 0;
        assert_eq!(gs_sparse_serialize(a, ptr::null_mut(), 0, &mut need), GsStatus::BufferTooSmall);
        let mut buf = vec![0u8; need];
        assert_eq!(gs_sparse_serialize(a, buf.as_mut_ptr(), buf.len(), &mut need), GsStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(gs_sparse_deserialize(buf.as_ptr(), buf.len(), &mut c), GsStatus::Ok);
        assert_eq!(gs_sparse_decode(c, &mut kind, idx.as_mut_ptr(), val.as_mut_ptr(), 8, &mut len), GsStatus::Ok);
        assert_eq!(len, 2);
        assert_eq!(gs_sparse_deserialize(buf.as_ptr(), 3, &mut c), GsStatus::Parse);
        for s in [a, b, c] {
            gs_sparse_free(s);
        }

        let mut other = ptr::null_mut();
        let mut l0 = ptr::null_mut();
        assert_eq!(gs_l0_new(1000, 2, 9, &mut l0), GsStatus::Ok);
        assert_eq!(gs_l0_new(1000, 2, 10, &mut other), GsStatus::Ok);
        assert_eq!(gs_l0_merge(l0, other), GsStatus::IncompatibleSketches);
        gs_l0_update(l0, 77, 5);
        let (mut found, mut i, mut v) = (false, 0, 0);
        assert_eq!(gs_l0_sample(l0, &mut found, &mut i, &mut v), GsStatus::Ok);
        assert!(found && i == 77 && v == 5);
        gs_l0_free(l0);
        gs_l0_free(other);

        let mut ams = ptr::null_mut();
        assert_eq!(gs_ams_new(1000, 0.01, 4, &mut ams), GsStatus::Ok);
        let mut zero = false;
        gs_ams_is_zero(ams, &mut zero);
        assert!(zero);
        gs_ams_update(ams, 3, 2);
        gs_ams_is_zero(ams, &mut zero);
        assert!(!zero);
        let mut f2 = 0.0;
        gs_ams_estimate_f2(ams, &mut f2);
        assert!(f2 > 0.0);
        gs_ams_free(ams);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(gs_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
