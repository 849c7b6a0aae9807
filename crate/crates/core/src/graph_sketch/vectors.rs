//! Explicit per-vertex vectors, used as ground truth for the sketched versions.
//!
//! * The boundary vector of `i` lives in the edge index space: entry `(j, k)` is
//!   `+1` if `i = j < k` and `(j, k)` is an edge, `-1` if `j < k = i`, else `0`.
//!   Summed over a set `C`, internal edges cancel and the support is `E(C, V∖C)`.
//! * The neighborhood vector of `i` lives in `[n]` (0-based index `v - 1`): entry
//!   `j` is `1` iff `j = i` or `j ∈ Γ(i)`. Summed over `C`, the support is `C ∪ Γ(C)`.

use std::collections::BTreeMap;

use crate::stream::{encode_edge_unchecked, Vertex};

pub type SparseVector = BTreeMap<u64, i64>;

pub fn boundary_vector(n: u32, i: Vertex, neighbors: impl IntoIterator<Item = Vertex>) -> SparseVector {
    let mut x = SparseVector::new();
    for w in neighbors {
        let (j, k) = if i < w { (i, w) } else { (w, i) };
        x.insert(encode_edge_unchecked(n, j, k), if i == j { 1 } else { -1 });
    }
    x
}

pub fn neighborhood_vector(i: Vertex, neighbors: impl IntoIterator<Item = Vertex>) -> SparseVector {
    let mut x = SparseVector::new();
    x.insert(i as u64 - 1, 1);
    for w in neighbors {
        x.insert(w as u64 - 1, 1);
    }
    x
}

/// Entrywise sum, dropping coordinates that cancel.
pub fn add_into(acc: &mut SparseVector, x: &SparseVector) {
    for (&i, &v) in x {
        let e = acc.entry(i).or_insert(0);
        *e += v;
        if *e == 0 {
            acc.remove(&i);
        }
    }
}
