//! Eulerianity tester: connectivity plus two independent vertex samples with
//! exact degree counters.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::connectivity::connectivity_with;
use super::{Decision, TesterConfig, Verdict, Witness};
use crate::sketch::hash::derive;
use crate::stream::{DegreeTracker, Stream, VertexSample};
use crate::Result;

/// `⌈32/ε⌉`.
pub fn euler_sample_size(eps: f64) -> usize {
    (32.0 / eps).ceil() as usize
}

fn uniform_sample(n: u32, s: usize, seed: u64) -> VertexSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VertexSample::from_vec(sample(&mut rng, n as usize, s).into_iter().map(|i| i as u32 + 1).collect())
}

/// Rejects if the connectivity tester rejects, or if the two samples together hold
/// at least three distinct odd-degree vertices. When a sample would cover the
/// graph, all degrees are tracked instead.
pub fn test_eulerianity(stream: &Stream, cfg: &TesterConfig) -> Result<Verdict> {
    cfg.validate()?;
    let n = stream.n();
    let s = euler_sample_size(cfg.eps);
    let exhaustive = s >= n as usize;
    let (first, second) = if exhaustive {
        (VertexSample::all(n), VertexSample::default())
    } else {
        (
            uniform_sample(n, s, derive(cfg.seed, 50)),
            uniform_sample(n, s, derive(cfg.seed, 51)),
        )
    };
    let mut d1 = DegreeTracker::new(first);
    let mut d2 = DegreeTracker::new(second);
    let conn_cfg = TesterConfig {
        seed: derive(cfg.seed, 52),
        ..*cfg
    };
    let mut verdict = connectivity_with(stream, &conn_cfg, &mut [&mut d1, &mut d2])?;
    verdict.stats.seed = cfg.seed;
    verdict.stats.sketch_words += d1.words() + d2.words();
    if verdict.decision != Decision::Accept {
        return Ok(verdict);
    }
    let mut odd = d1.odd_vertices();
    odd.extend(d2.odd_vertices());
    odd.sort_unstable();
    odd.dedup();
    // A graph with at most two odd vertices can never show three distinct ones.
    if odd.len() >= 3 {
        verdict.decision = Decision::Reject;
        verdict.reason = "sampled odd-degree vertices".into();
        verdict.witness = Some(Witness::OddDegree { vertices: odd });
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_accepted() {
        let n = 400;
        let s = Stream::from_edges(n, (1..=n).map(|i| (i, i % n + 1))).unwrap();
        let acc = (0..20)
            .filter(|&seed| test_eulerianity(&s, &TesterConfig::new(0.25, seed)).unwrap().decision == Decision::Accept)
            .count();
        assert!(acc >= 15, "{acc}");
    }

    #[test]
    fn path_never_rejected_for_parity() {
        let n = 300;
        let s = Stream::from_edges(n, (1..n).map(|i| (i, i + 1))).unwrap();
        for seed in 0..30 {
            let cfg = TesterConfig::new(0.25, seed).with_backend(crate::probe::Backend::Exact);
            assert_eq!(test_eulerianity(&s, &cfg).unwrap().decision, Decision::Accept);
        }
    }

    #[test]
    fn matching_rejected_by_precheck() {
        let s = Stream::from_edges(20, (0..10).map(|i| (2 * i + 1, 2 * i + 2))).unwrap();
        assert_eq!(test_eulerianity(&s, &TesterConfig::new(0.25, 0)).unwrap().decision, Decision::Reject);
    }

    #[test]
    fn small_graph_uses_exact_rule() {
        // K4 is connected with four odd vertices.
        let s = Stream::from_edges(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        let v = test_eulerianity(&s, &TesterConfig::new(0.25, 0).with_p(1.0)).unwrap();
        assert_eq!(v.decision, Decision::Reject);
        assert!(matches!(v.witness, Some(Witness::OddDegree { .. })));
    }
}
