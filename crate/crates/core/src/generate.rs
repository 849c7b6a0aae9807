//! Instance generators: hidden-hypermatching gadget graphs, planted far families,
//! plain random families, and insert/delete churn.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::{EdgeUpdate, Stream, Vertex};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which side of the promise an instance lies on: `Mx ⊕ w` is all zeros or all ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Promise {
    AllZeros,
    AllOnes,
}

impl Promise {
    pub fn bit(self) -> bool {
        matches!(self, Promise::AllOnes)
    }
}

/// A hidden-hypermatching instance: a bit vector `x`, a partition of `[nb]` into
/// blocks of size `t`, and a bit per block `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhhInstance {
    pub nb: usize,
    pub t: usize,
    /// `x[i]` for `i` in `0..nb` (element `i + 1`).
    pub x: Vec<bool>,
    /// Blocks of 1-based elements, each of length `t`, in path order.
    pub blocks: Vec<Vec<usize>>,
    pub w: Vec<bool>,
    pub promise: Promise,
}

impl BhhInstance {
    /// Draws `x` and the hypermatching uniformly, then sets `w` to meet the promise.
    pub fn random(nb: usize, t: usize, promise: Promise, seed: u64) -> Result<Self> {
        if t == 0 || nb == 0 || !nb.is_multiple_of(2 * t) {
            return Err(Error::Gen(format!("nb = {nb} must be a positive multiple of 2t = {}", 2 * t)));
        }
        let mut r = rng(seed);
        let x: Vec<bool> = (0..nb).map(|_| r.gen()).collect();
        let mut perm: Vec<usize> = (1..=nb).collect();
        perm.shuffle(&mut r);
        let blocks: Vec<Vec<usize>> = perm.chunks(t).map(|c| c.to_vec()).collect();
        let mut inst = BhhInstance {
            nb,
            t,
            x,
            blocks,
            w: Vec::new(),
            promise,
        };
        inst.w = (0..inst.blocks.len()).map(|i| inst.mx(i) ^ promise.bit()).collect();
        Ok(inst)
    }

    /// `(Mx)_i`: parity of `x` over block `i`.
    pub fn mx(&self, i: usize) -> bool {
        self.blocks[i].iter().fold(false, |acc, &e| acc ^ self.x[e - 1])
    }

    pub fn u(&self, i: usize) -> Vertex {
        i as Vertex
    }

    pub fn v(&self, i: usize) -> Vertex {
        (2 * self.nb + i) as Vertex
    }

    pub fn xi(&self, which: usize) -> Vertex {
        (4 * self.nb + which) as Vertex
    }

    pub fn base_vertices(&self) -> u32 {
        4 * self.nb as u32
    }

    fn check(&self) -> Result<()> {
        let mut seen = vec![false; self.nb + 1];
        for b in &self.blocks {
            if b.len() != self.t {
                return Err(Error::Gen("block of wrong size".into()));
            }
            for &e in b {
                if e == 0 || e > self.nb || std::mem::replace(&mut seen[e], true) {
                    return Err(Error::Gen("blocks must partition [nb]".into()));
                }
            }
        }
        if self.x.len() != self.nb || self.w.len() != self.blocks.len() {
            return Err(Error::Gen("x or w has the wrong length".into()));
        }
        for i in 0..self.blocks.len() {
            if self.mx(i) ^ self.w[i] != self.promise.bit() {
                return Err(Error::Gen(format!("block {} violates the promise", i + 1)));
            }
        }
        Ok(())
    }
}

/// Gadget augmentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant")]
pub enum BhhVariant {
    Connectivity,
    Mst { max_weight: u32 },
    CycleFree,
    Bipartite,
}

/// Ground truth predicted for a gadget instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BhhLabel {
    Components(usize),
    MstWeight(u64),
    Cycles(usize),
    /// Number of odd cycles of length `2t + 1`; zero means bipartite.
    OddCycles { count: usize, length: usize },
}

fn push(edges: &mut Vec<(Vertex, Vertex, u32)>, a: Vertex, b: Vertex, w: u32) {
    edges.push((a.min(b), a.max(b), w));
}

fn base_edges(inst: &BhhInstance) -> Vec<(Vertex, Vertex, u32)> {
    let mut edges = Vec::new();
    for i in 1..=inst.nb {
        let (a, b) = (2 * i - 1, 2 * i);
        if inst.x[i - 1] {
            push(&mut edges, inst.u(a), inst.v(b), 1);
            push(&mut edges, inst.u(b), inst.v(a), 1);
        } else {
            push(&mut edges, inst.u(a), inst.v(a), 1);
            push(&mut edges, inst.u(b), inst.v(b), 1);
        }
    }
    for block in &inst.blocks {
        for j in 0..inst.t - 1 {
            let (m, m2) = (block[j], block[j + 1]);
            push(&mut edges, inst.u(2 * m - 1), inst.v(2 * m2 - 1), 1);
            push(&mut edges, inst.u(2 * m), inst.v(2 * m2), 1);
        }
    }
    edges
}

fn to_stream(n: u32, max_weight: u32, edges: &[(Vertex, Vertex, u32)]) -> Result<Stream> {
    let mut seen = BTreeSet::new();
    for &(u, v, _) in edges {
        if u == v || !seen.insert((u, v)) {
            return Err(Error::Gen(format!("construction produced a repeated edge ({u}, {v})")));
        }
    }
    let updates = edges.iter().map(|&(u, v, w)| EdgeUpdate::insert_weighted(u, v, w)).collect();
    Stream::from_updates(n, max_weight, updates)
}

/// Matching edges followed by the per-block path edges: `2nb/t` disjoint paths.
pub fn gen_bhh_base(inst: &BhhInstance) -> Result<Stream> {
    inst.check()?;
    to_stream(inst.base_vertices(), 1, &base_edges(inst))
}

/// Base graph plus the closing and connecting edges of a variant, with the
/// predicted ground truth.
pub fn gen_bhh_variant(inst: &BhhInstance, variant: BhhVariant) -> Result<(Stream, BhhLabel)> {
    inst.check()?;
    let mut edges = base_edges(inst);
    let nb = inst.nb;
    let t = inst.t;
    let blocks = nb / t;
    let first = |i: usize| inst.blocks[i][0];
    let last = |i: usize| inst.blocks[i][t - 1];
    let zeros = inst.promise == Promise::AllZeros;
    if t < 2 && variant != BhhVariant::Bipartite {
        return Err(Error::Gen("closing edges would repeat matching edges when t = 1".into()));
    }
    let closing_pair = |edges: &mut Vec<_>, i: usize, w: u32| {
        let (mt, m1) = (last(i), first(i));
        if inst.w[i] {
            push(edges, inst.u(2 * mt - 1), inst.v(2 * m1), w);
            push(edges, inst.u(2 * mt), inst.v(2 * m1 - 1), w);
        } else {
            push(edges, inst.u(2 * mt - 1), inst.v(2 * m1 - 1), w);
            push(edges, inst.u(2 * mt), inst.v(2 * m1), w);
        }
    };
    let connecting = |edges: &mut Vec<_>| {
        for i in 0..blocks - 1 {
            push(edges, inst.v(2 * last(i)), inst.v(2 * first(i + 1)), 1);
        }
    };
    match variant {
        BhhVariant::Connectivity => {
            for i in 0..blocks {
                closing_pair(&mut edges, i, 1);
            }
            connecting(&mut edges);
            let label = BhhLabel::Components(if zeros { blocks + 1 } else { 1 });
            Ok((to_stream(inst.base_vertices(), 1, &edges)?, label))
        }
        BhhVariant::Mst { max_weight } => {
            if max_weight < 2 {
                return Err(Error::Gen("the MST gadget needs W >= 2".into()));
            }
            for i in 0..blocks {
                closing_pair(&mut edges, i, 1);
                push(&mut edges, inst.v(2 * first(i) - 1), inst.v(2 * first(i)), max_weight);
            }
            connecting(&mut edges);
            let (nb64, t64, w64) = (nb as u64, t as u64, max_weight as u64);
            let weight = if zeros {
                nb64 * w64 / t64 + 4 * nb64 - nb64 / t64 - 1
            } else {
                4 * nb64 - 1
            };
            Ok((to_stream(inst.base_vertices(), max_weight, &edges)?, BhhLabel::MstWeight(weight)))
        }
        BhhVariant::CycleFree => {
            for i in 0..blocks {
                let (mt, m1) = (last(i), first(i));
                let target = if inst.w[i] { inst.v(2 * m1) } else { inst.v(2 * m1 - 1) };
                push(&mut edges, inst.u(2 * mt - 1), target, 1);
            }
            let label = BhhLabel::Cycles(if zeros { blocks } else { 0 });
            Ok((to_stream(inst.base_vertices(), 1, &edges)?, label))
        }
        BhhVariant::Bipartite => {
            if t.is_multiple_of(2) {
                return Err(Error::Gen("the bipartiteness gadget needs odd t".into()));
            }
            let (x1, x2) = (inst.xi(1), inst.xi(2));
            for i in 0..blocks {
                let (mt, m1) = (last(i), first(i));
                push(&mut edges, inst.v(2 * m1 - 1), x1, 1);
                push(&mut edges, inst.v(2 * m1), x2, 1);
                if inst.w[i] {
                    push(&mut edges, inst.u(2 * mt - 1), x2, 1);
                    push(&mut edges, inst.u(2 * mt), x1, 1);
                } else {
                    push(&mut edges, inst.u(2 * mt - 1), x1, 1);
                    push(&mut edges, inst.u(2 * mt), x2, 1);
                }
            }
            let label = BhhLabel::OddCycles {
                count: if zeros { 2 * blocks } else { 0 },
                length: 2 * t + 1,
            };
            Ok((to_stream(inst.base_vertices() + 2, 1, &edges)?, label))
        }
    }
}

/// Planted families with checkable structure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PlantedKind {
    /// `count` small trees of sizes in `1..=max_size`; the remaining vertices form one tree.
    Components { count: usize, max_size: usize },
    /// A ring of `K_{k+1}` gadgets, each with exactly `k − 1` edges leaving it.
    FarFromKEdge { k: u32, gadgets: usize },
    /// `gadgets` cliques of `clique` vertices, each attached to its own `k − 1` hub
    /// vertices; hubs form a circulant host.
    PendantCliques { k: u32, gadgets: usize, clique: usize },
    /// `n/3` disjoint triangles.
    TriangleSoup,
    /// A Hamiltonian cycle plus chords making about `fraction·n` vertices odd.
    OddDegree { fraction: f64 },
}

/// Oracle-checkable facts about a generated instance.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub description: String,
    /// Planted vertex sets (components, gadgets, cliques).
    pub sets: Vec<Vec<Vertex>>,
    /// Claimed boundary size (edge cut or open-neighborhood size) of each set.
    pub set_cuts: Vec<usize>,
    /// Planted odd-degree vertices.
    pub odd_vertices: Vec<Vertex>,
    /// Certified lower bound on the number of edge modifications to reach the property.
    pub distance_lower_bound: Option<u64>,
}

/// Random relabeling of `[n]`.
fn relabel(n: u32, edges: &mut [(Vertex, Vertex, u32)], cert: &mut Certificate, r: &mut ChaCha8Rng) {
    let mut perm: Vec<Vertex> = (1..=n).collect();
    perm.shuffle(r);
    let map = |v: Vertex| perm[v as usize - 1];
    for e in edges.iter_mut() {
        let (a, b) = (map(e.0), map(e.1));
        *e = (a.min(b), a.max(b), e.2);
    }
    edges.shuffle(r);
    for s in cert.sets.iter_mut() {
        for v in s.iter_mut() {
            *v = map(*v);
        }
        s.sort_unstable();
    }
    for v in cert.odd_vertices.iter_mut() {
        *v = map(*v);
    }
    cert.odd_vertices.sort_unstable();
}

fn random_tree_on(vertices: &[Vertex], r: &mut ChaCha8Rng, edges: &mut Vec<(Vertex, Vertex, u32)>) {
    for i in 1..vertices.len() {
        let parent = vertices[r.gen_range(0..i)];
        push(edges, parent, vertices[i], 1);
    }
}

pub fn gen_planted(kind: PlantedKind, n: u32, seed: u64) -> Result<(Stream, Certificate)> {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    let mut cert = Certificate::default();
    let n_out;
    match kind {
        PlantedKind::Components { count, max_size } => {
            if max_size == 0 {
                return Err(Error::Gen("max_size must be positive".into()));
            }
            let mut next: Vertex = 1;
            for _ in 0..count {
                let size = r.gen_range(1..=max_size) as u32;
                if next + size - 1 > n {
                    return Err(Error::Gen(format!("{count} components of size <= {max_size} do not fit in n = {n}")));
                }
                let vs: Vec<Vertex> = (next..next + size).collect();
                random_tree_on(&vs, &mut r, &mut edges);
                cert.set_cuts.push(0);
                cert.sets.push(vs);
                next += size;
            }
            let rest: Vec<Vertex> = (next..=n).collect();
            random_tree_on(&rest, &mut r, &mut edges);
            cert.description = format!("{count} planted components of size <= {max_size}, remainder one tree");
            n_out = n;
        }
        PlantedKind::FarFromKEdge { k, gadgets } => {
            if k < 2 || gadgets < 2 || ((k - 1) % 2 == 1 && gadgets % 2 == 1) {
                return Err(Error::Gen("need k >= 2, at least two gadgets, and an even gadget count when k is even".into()));
            }
            let size = k + 1;
            let g = gadgets as u32;
            for i in 0..g {
                let base = i * size;
                for a in 1..=size {
                    for b in a + 1..=size {
                        push(&mut edges, base + a, base + b, 1);
                    }
                }
                cert.sets.push((base + 1..=base + size).collect());
                cert.set_cuts.push((k - 1) as usize);
            }
            // Link i joins gadget i to i+1; link sizes alternate so each gadget has k−1 boundary edges.
            for i in 0..g {
                let links = if (k - 1) % 2 == 0 {
                    (k - 1) / 2
                } else if i % 2 == 0 {
                    k / 2
                } else {
                    (k - 1) / 2
                };
                let j = (i + 1) % g;
                for l in 0..links {
                    push(&mut edges, i * size + 1 + l, j * size + size - l, 1);
                }
            }
            cert.distance_lower_bound = Some(gadgets.div_ceil(2) as u64);
            cert.description = format!("ring of {gadgets} K_{size} gadgets with {} boundary edges each", k - 1);
            n_out = g * size;
        }
        PlantedKind::PendantCliques { k, gadgets, clique } => {
            if k < 2 || gadgets < 3 || clique == 0 {
                return Err(Error::Gen("need k >= 2, at least three gadgets and a nonempty clique".into()));
            }
            let hubs_per = k - 1;
            let hubs = gadgets as u32 * hubs_per;
            let reach = k.div_ceil(2).max(1);
            if hubs <= 2 * reach {
                return Err(Error::Gen("too few hubs for a circulant host".into()));
            }
            let mut host = BTreeSet::new();
            for h in 0..hubs {
                for d in 1..=reach {
                    let o = (h + d) % hubs;
                    host.insert((h.min(o) + 1, h.max(o) + 1));
                }
            }
            for (a, b) in host {
                push(&mut edges, a, b, 1);
            }
            let c = clique as u32;
            for i in 0..gadgets as u32 {
                let base = hubs + i * c;
                let members: Vec<Vertex> = (base + 1..=base + c).collect();
                for (x, &a) in members.iter().enumerate() {
                    for &b in &members[x + 1..] {
                        push(&mut edges, a, b, 1);
                    }
                    for h in 0..hubs_per {
                        push(&mut edges, a, i * hubs_per + h + 1, 1);
                    }
                }
                cert.sets.push(members);
                cert.set_cuts.push(hubs_per as usize);
            }
            cert.distance_lower_bound = Some(gadgets.div_ceil(2) as u64);
            cert.description = format!("{gadgets} cliques of size {clique}, each separated by {} hubs", k - 1);
            n_out = hubs + gadgets as u32 * c;
        }
        PlantedKind::TriangleSoup => {
            if !n.is_multiple_of(3) || n == 0 {
                return Err(Error::Gen(format!("triangle soup needs n divisible by 3, got {n}")));
            }
            for i in 0..n / 3 {
                let b = 3 * i;
                push(&mut edges, b + 1, b + 2, 1);
                push(&mut edges, b + 2, b + 3, 1);
                push(&mut edges, b + 1, b + 3, 1);
                cert.sets.push(vec![b + 1, b + 2, b + 3]);
                cert.set_cuts.push(0);
            }
            cert.distance_lower_bound = Some(n as u64 / 3);
            cert.description = format!("{} disjoint triangles", n / 3);
            n_out = n;
        }
        PlantedKind::OddDegree { fraction } => {
            if n < 4 || !(0.0..=1.0).contains(&fraction) {
                return Err(Error::Gen("odd-degree family needs n >= 4 and a fraction in [0, 1]".into()));
            }
            for i in 1..=n {
                push(&mut edges, i, i % n + 1, 1);
            }
            let chords = ((fraction * n as f64) / 2.0).floor() as usize;
            let mut order: Vec<Vertex> = (1..=n).collect();
            order.shuffle(&mut r);
            let mut used = 0;
            let mut idx = 0;
            while used < chords && idx + 1 < order.len() {
                let (a, b) = (order[idx], order[idx + 1]);
                idx += 2;
                let adjacent = a.abs_diff(b) == 1 || a.abs_diff(b) == n - 1;
                if adjacent {
                    continue;
                }
                push(&mut edges, a, b, 1);
                cert.odd_vertices.extend([a, b]);
                used += 1;
            }
            cert.odd_vertices.sort_unstable();
            cert.distance_lower_bound = Some((cert.odd_vertices.len() as u64).saturating_sub(2) / 2);
            cert.description = format!("cycle plus {used} chords");
            n_out = n;
        }
    }
    relabel(n_out, &mut edges, &mut cert, &mut r);
    Ok((to_stream(n_out, 1, &edges)?, cert))
}

/// Uniform random labelled tree (random attachment), relabeled.
pub fn random_tree(n: u32, seed: u64) -> Stream {
    let mut r = rng(seed);
    let vs: Vec<Vertex> = (1..=n).collect();
    let mut edges = Vec::new();
    random_tree_on(&vs, &mut r, &mut edges);
    let mut cert = Certificate::default();
    relabel(n, &mut edges, &mut cert, &mut r);
    to_stream(n, 1, &edges).expect("tree edges are simple")
}

/// Random forest with `trees` trees of near-equal size.
pub fn random_forest(n: u32, trees: u32, seed: u64) -> Stream {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    let trees = trees.clamp(1, n.max(1));
    let mut start = 1;
    for i in 0..trees {
        let size = n / trees + u32::from(i < n % trees);
        let vs: Vec<Vertex> = (start..start + size).collect();
        random_tree_on(&vs, &mut r, &mut edges);
        start += size;
    }
    let mut cert = Certificate::default();
    relabel(n, &mut edges, &mut cert, &mut r);
    to_stream(n, 1, &edges).expect("forest edges are simple")
}

/// Random connected graph: a random tree plus `extra` distinct random edges,
/// weights uniform in `[W]`.
pub fn random_connected(n: u32, extra: usize, max_weight: u32, seed: u64) -> Stream {
    let mut r = rng(seed);
    let vs: Vec<Vertex> = (1..=n).collect();
    let mut edges = Vec::new();
    random_tree_on(&vs, &mut r, &mut edges);
    let mut seen: BTreeSet<(Vertex, Vertex)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let cap = (n as usize * (n as usize - 1) / 2).saturating_sub(edges.len());
    let target = extra.min(cap);
    let mut added = 0;
    while added < target {
        let a = r.gen_range(1..=n);
        let b = r.gen_range(1..=n);
        if a != b && seen.insert((a.min(b), a.max(b))) {
            push(&mut edges, a, b, 1);
            added += 1;
        }
    }
    for e in edges.iter_mut() {
        e.2 = r.gen_range(1..=max_weight.max(1));
    }
    let mut cert = Certificate::default();
    relabel(n, &mut edges, &mut cert, &mut r);
    to_stream(n, max_weight.max(1), &edges).expect("distinct edges")
}

/// `G(n, p)` with geometric skipping.
pub fn erdos_renyi(n: u32, p: f64, seed: u64) -> Stream {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    if p > 0.0 {
        let total = n as u64 * (n as u64).saturating_sub(1) / 2;
        let mut idx: i64 = -1;
        let lq = (1.0 - p.min(1.0 - 1e-12)).ln();
        loop {
            let u: f64 = r.gen();
            let skip = if p >= 1.0 { 0 } else { ((1.0 - u).ln() / lq).floor() as i64 };
            idx += 1 + skip;
            if idx as u64 >= total {
                break;
            }
            let (a, b) = crate::stream::decode_edge(n, idx as u64).expect("index in range");
            edges.push((a, b, 1));
        }
    }
    to_stream(n, 1, &edges).expect("distinct edges")
}

pub fn cycle(n: u32) -> Stream {
    Stream::from_edges(n, (1..=n).map(|i| (i, i % n + 1))).expect("cycle on n >= 3")
}

pub fn path(n: u32) -> Stream {
    Stream::from_edges(n, (1..n).map(|i| (i, i + 1))).expect("path")
}

pub fn star(n: u32) -> Stream {
    Stream::from_edges(n, (2..=n).map(|v| (1, v))).expect("star")
}

/// `rows × cols` grid.
pub fn grid(rows: u32, cols: u32) -> Stream {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c + 1;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Stream::from_edges(rows * cols, edges).expect("grid")
}

/// Circulant graph: `i ~ i ± d` for each offset `d`.
pub fn circulant(n: u32, offsets: &[u32]) -> Stream {
    let mut set = BTreeSet::new();
    for i in 0..n {
        for &d in offsets {
            let j = (i + d) % n;
            if i != j {
                set.insert((i.min(j) + 1, i.max(j) + 1));
            }
        }
    }
    Stream::from_edges(n, set).expect("circulant")
}

/// Re-emits the final graph of `stream` with insert/delete noise.
///
/// Each final edge gets on average `churn` extra delete/reinsert pairs, and
/// `churn·m` non-edges are inserted and later deleted. Events of each edge are
/// placed at sorted random times and alternate insert/delete, so every prefix is
/// a simple graph and the final graph is unchanged. `churn = 0` returns the input.
pub fn shuffle_with_deletions(stream: &Stream, churn: f64, seed: u64) -> Result<Stream> {
    if churn < 0.0 || !churn.is_finite() {
        return Err(Error::Gen(format!("churn must be a finite non-negative number, got {churn}")));
    }
    if churn == 0.0 {
        return Ok(stream.clone());
    }
    let final_edges = stream.final_edges()?;
    let n = stream.n();
    let wmax = stream.header.max_weight;
    let mut r = rng(seed);
    let mut events: Vec<(f64, EdgeUpdate)> = Vec::new();
    let whole = churn.floor() as usize;
    let frac = churn - churn.floor();
    let schedule = |r: &mut ChaCha8Rng, u: Vertex, v: Vertex, w: u32, count: usize, events: &mut Vec<(f64, EdgeUpdate)>| {
        let mut times: Vec<f64> = (0..count).map(|_| r.gen()).collect();
        times.sort_by(|a, b| a.total_cmp(b));
        for (i, t) in times.into_iter().enumerate() {
            let delta = if i % 2 == 0 { 1 } else { -1 };
            events.push((t, EdgeUpdate::new(u, v, w, delta)));
        }
    };
    let present: BTreeSet<(Vertex, Vertex)> = final_edges.iter().map(|&(u, v, _)| (u, v)).collect();
    for &(u, v, w) in &final_edges {
        let pairs = whole + usize::from(r.gen::<f64>() < frac);
        schedule(&mut r, u, v, w, 1 + 2 * pairs, &mut events);
    }
    let transients = (churn * final_edges.len() as f64).round() as usize;
    let capacity = edge_capacity(n).saturating_sub(present.len() as u64);
    let mut used: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut made = 0;
    let mut attempts = 0;
    while made < transients && (used.len() as u64) < capacity && attempts < 50 * transients + 100 {
        attempts += 1;
        let a = r.gen_range(1..=n);
        let b = r.gen_range(1..=n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if present.contains(&key) || !used.insert(key) {
            continue;
        }
        let w = r.gen_range(1..=wmax);
        schedule(&mut r, key.0, key.1, w, 2, &mut events);
        made += 1;
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(Stream {
        header: stream.header,
        updates: events.into_iter().map(|(_, u)| u).collect(),
    })
}

fn edge_capacity(n: u32) -> u64 {
    crate::stream::edge_dimension(n)
}
