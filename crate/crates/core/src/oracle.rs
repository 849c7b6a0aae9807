//! Exact, deliberately simple reference algorithms on explicit graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_sketch::agm::Dsu;
use crate::stream::{Stream, Vertex};

/// Simple undirected graph on `[n]` with a weight class per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    n: u32,
    adj: Vec<BTreeSet<Vertex>>,
    weights: BTreeMap<(Vertex, Vertex), u32>,
}

/// Properties whose edit distance the oracle can report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Connectivity,
    CycleFree,
    Bipartite,
    KEdge,
    KVertex,
}

/// An exact distance, or a marker that the oracle does not compute it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distance {
    Exact(u64),
    Unavailable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Disconnected;

impl ExplicitGraph {
    pub fn empty(n: u32) -> Self {
        ExplicitGraph {
            n,
            adj: vec![BTreeSet::new(); n as usize + 1],
            weights: BTreeMap::new(),
        }
    }

    pub fn from_edges(n: u32, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        Self::from_weighted(n, edges.into_iter().map(|(u, v)| (u, v, 1)))
    }

    pub fn from_weighted(n: u32, edges: impl IntoIterator<Item = (Vertex, Vertex, u32)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Final graph of a replayed stream.
    pub fn from_stream(stream: &Stream) -> Result<Self> {
        Self::from_weighted(stream.n(), stream.final_edges()?)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex, w: u32) -> Result<()> {
        let (a, b) = (u.min(v), u.max(v));
        if a == 0 || a == b || b > self.n {
            return Err(Error::InvalidEdge { n: self.n, u, v });
        }
        if self.weights.insert((a, b), w).is_some() {
            return Err(Error::InvalidParameter(format!("duplicate edge ({a}, {b})")));
        }
        self.adj[a as usize].insert(b);
        self.adj[b as usize].insert(a);
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.weights.len()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v as usize].iter().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.weights.contains_key(&(u.min(v), u.max(v)))
    }

    /// Canonical edges `(u, v, w)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, u32)> + '_ {
        self.weights.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.values().copied().max().unwrap_or(1)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        self.components_where(|_, _, _| true)
    }

    fn components_where(&self, keep: impl Fn(Vertex, Vertex, u32) -> bool) -> Vec<Vec<Vertex>> {
        let mut dsu = Dsu::new(self.n as usize);
        for (u, v, w) in self.edges() {
            if keep(u, v, w) {
                dsu.union(u as usize - 1, v as usize - 1);
            }
        }
        dsu.groups()
            .into_iter()
            .map(|g| g.into_iter().map(|x| x as Vertex + 1).collect())
            .collect()
    }

    pub fn cc_count(&self) -> usize {
        self.components().len()
    }

    /// Number of components with at most `max_size` vertices.
    pub fn scc_count(&self, max_size: usize) -> usize {
        self.components().iter().filter(|c| c.len() <= max_size).count()
    }

    /// Components of the subgraph induced by `set`.
    pub fn induced_components(&self, set: &[Vertex]) -> Vec<Vec<Vertex>> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let slot = |v: Vertex| sorted.binary_search(&v).ok();
        let mut dsu = Dsu::new(sorted.len());
        for (i, &u) in sorted.iter().enumerate() {
            for w in self.neighbors(u) {
                if let Some(j) = slot(w) {
                    dsu.union(i, j);
                }
            }
        }
        dsu.groups()
            .into_iter()
            .map(|g| g.into_iter().map(|i| sorted[i]).collect())
            .collect()
    }

    /// `E(C, V∖C)` as canonical pairs.
    pub fn boundary(&self, set: &[Vertex]) -> Vec<(Vertex, Vertex)> {
        let inside: BTreeSet<Vertex> = set.iter().copied().collect();
        let mut out = Vec::new();
        for &u in &inside {
            for w in self.neighbors(u) {
                if !inside.contains(&w) {
                    out.push((u.min(w), u.max(w)));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `Γ(C)`: vertices outside `C` adjacent to some member.
    pub fn open_neighborhood(&self, set: &[Vertex]) -> Vec<Vertex> {
        let inside: BTreeSet<Vertex> = set.iter().copied().collect();
        let mut out = BTreeSet::new();
        for &u in &inside {
            for w in self.neighbors(u) {
                if !inside.contains(&w) {
                    out.insert(w);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Subgraph of edges with weight at most `level`.
    pub fn level_subgraph(&self, level: u32) -> ExplicitGraph {
        let mut g = Self::empty(self.n);
        for (u, v, w) in self.edges() {
            if w <= level {
                g.add_edge(u, v, w).expect("edges of a simple graph");
            }
        }
        g
    }

    /// Component count of every level subgraph `ℓ = 1..=W`.
    pub fn cc_per_level(&self, max_weight: u32) -> Vec<usize> {
        (1..=max_weight)
            .map(|l| self.components_where(|_, _, w| w <= l).len())
            .collect()
    }

    /// Kruskal.
    pub fn mst_weight(&self) -> std::result::Result<u64, Disconnected> {
        let mut edges: Vec<_> = self.edges().collect();
        edges.sort_by_key(|&(u, v, w)| (w, u, v));
        let mut dsu = Dsu::new(self.n as usize);
        let mut total = 0u64;
        let mut used = 0;
        for (u, v, w) in edges {
            if dsu.union(u as usize - 1, v as usize - 1) {
                total += w as u64;
                used += 1;
            }
        }
        if used + 1 == self.n as usize || self.n <= 1 {
            Ok(total)
        } else {
            Err(Disconnected)
        }
    }

    pub fn is_connected(&self) -> bool {
        self.cc_count() <= 1
    }

    pub fn is_forest(&self) -> bool {
        self.m() + self.cc_count() == self.n as usize
    }

    /// Global minimum cut by Stoer–Wagner, `O(n³)`. Zero when disconnected.
    pub fn edge_connectivity(&self) -> Result<usize> {
        let n = self.n as usize;
        if n > 1500 {
            return Err(Error::InvalidParameter(format!(
                "edge connectivity oracle limited to n <= 1500, got {n}"
            )));
        }
        if n <= 1 {
            return Ok(0);
        }
        if !self.is_connected() {
            return Ok(0);
        }
        let mut w = vec![vec![0i64; n]; n];
        for (u, v, _) in self.edges() {
            w[u as usize - 1][v as usize - 1] = 1;
            w[v as usize - 1][u as usize - 1] = 1;
        }
        let mut alive: Vec<usize> = (0..n).collect();
        let mut best = i64::MAX;
        while alive.len() > 1 {
            let mut used = vec![false; n];
            let mut key = vec![0i64; n];
            let mut prev = usize::MAX;
            let mut last = alive[0];
            for _ in 0..alive.len() {
                let mut sel = usize::MAX;
                for &v in &alive {
                    if !used[v] && (sel == usize::MAX || key[v] > key[sel]) {
                        sel = v;
                    }
                }
                used[sel] = true;
                prev = last;
                last = sel;
                for &v in &alive {
                    if !used[v] {
                        key[v] += w[sel][v];
                    }
                }
            }
            best = best.min(key[last]);
            for &v in &alive {
                let x = w[last][v];
                w[prev][v] += x;
                w[v][prev] = w[prev][v];
            }
            w[prev][prev] = 0;
            alive.retain(|&v| v != last);
        }
        Ok(best as usize)
    }

    /// Minimum number of vertices whose removal disconnects the graph (or leaves
    /// one vertex). Brute force for `n ≤ 16`, unit-capacity flows otherwise.
    pub fn vertex_connectivity(&self) -> Result<usize> {
        let n = self.n as usize;
        if n <= 1 {
            return Ok(0);
        }
        if !self.is_connected() {
            return Ok(0);
        }
        if self.m() == n * (n - 1) / 2 {
            return Ok(n - 1);
        }
        if n <= 16 {
            return Ok(self.vertex_connectivity_brute());
        }
        if n > 600 {
            return Err(Error::InvalidParameter(format!(
                "vertex connectivity oracle limited to n <= 600, got {n}"
            )));
        }
        // Some vertex among any κ+1 lies outside a minimum separator, so trying
        // sources in order and stopping past the running minimum is exact.
        let mut best = n - 1;
        let mut s = 1;
        while s <= best + 1 && s <= n {
            for t in s as Vertex + 1..=self.n {
                if !self.has_edge(s as Vertex, t) {
                    best = best.min(self.local_vertex_connectivity(s as Vertex, t, best));
                }
            }
            s += 1;
        }
        Ok(best)
    }

    fn vertex_connectivity_brute(&self) -> usize {
        let n = self.n as usize;
        let mut best = n - 1;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size >= best || n - size < 2 {
                continue;
            }
            if !self.connected_without(mask) {
                best = size;
            }
        }
        best
    }

    fn connected_without(&self, removed: u32) -> bool {
        let n = self.n as usize;
        let start = (0..n).find(|&i| removed & (1 << i) == 0).unwrap();
        let mut seen = removed | (1 << start);
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for w in self.neighbors(x as Vertex + 1) {
                let bit = 1u32 << (w - 1);
                if seen & bit == 0 {
                    seen |= bit;
                    queue.push(w as usize - 1);
                }
            }
        }
        seen.count_ones() as usize == n
    }

    /// Maximum number of internally vertex-disjoint `s`–`t` paths, capped at `cap`.
    fn local_vertex_connectivity(&self, s: Vertex, t: Vertex, cap: usize) -> usize {
        // Split each vertex x into x_in = 2x, x_out = 2x+1 with capacity 1 between.
        let n = self.n as usize + 1;
        let mut flow: BTreeMap<(usize, usize), i32> = BTreeMap::new();
        let cap_of = |a: usize, b: usize| -> i32 {
            if a / 2 == b / 2 && a.is_multiple_of(2) && b == a + 1 {
                let x = a / 2;
                if x == s as usize || x == t as usize {
                    i32::MAX / 2
                } else {
                    1
                }
            } else if a % 2 == 1 && b.is_multiple_of(2) && self.has_edge((a / 2) as Vertex, (b / 2) as Vertex) {
                1
            } else {
                0
            }
        };
        let src = 2 * s as usize + 1;
        let dst = 2 * t as usize;
        let mut total = 0;
        while total < cap {
            let mut prev = vec![usize::MAX; 2 * n];
            prev[src] = src;
            let mut queue = VecDeque::from([src]);
            while let Some(a) = queue.pop_front() {
                if a == dst {
                    break;
                }
                let x = a / 2;
                let mut cands: Vec<usize> = Vec::new();
                if a % 2 == 0 {
                    cands.push(a + 1);
                    for w in self.neighbors(x as Vertex) {
                        cands.push(2 * w as usize + 1);
                    }
                } else {
                    cands.push(a - 1);
                    for w in self.neighbors(x as Vertex) {
                        cands.push(2 * w as usize);
                    }
                }
                for b in cands {
                    if prev[b] != usize::MAX {
                        continue;
                    }
                    let f = flow.get(&(a, b)).copied().unwrap_or(0);
                    if cap_of(a, b) - f > 0 {
                        prev[b] = a;
                        queue.push_back(b);
                    }
                }
            }
            if prev[dst] == usize::MAX {
                break;
            }
            let mut b = dst;
            while b != src {
                let a = prev[b];
                *flow.entry((a, b)).or_insert(0) += 1;
                *flow.entry((b, a)).or_insert(0) -= 1;
                b = a;
            }
            total += 1;
        }
        total
    }

    pub fn odd_degree_vertices(&self) -> Vec<Vertex> {
        (1..=self.n).filter(|&v| self.degree(v) % 2 == 1).collect()
    }

    /// Connected with zero or two odd-degree vertices.
    pub fn is_eulerian(&self) -> bool {
        self.is_connected() && matches!(self.odd_degree_vertices().len(), 0 | 2)
    }

    /// `Ok(coloring)` with colors in `{0, 1}` (index 0 unused), or an odd cycle.
    pub fn two_coloring(&self) -> std::result::Result<Vec<u8>, Vec<Vertex>> {
        two_coloring_of(self.n, |v| self.adj[v as usize].iter().copied().collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_ok()
    }

    /// Biconnected blocks as edge lists (Hopcroft–Tarjan, iterative).
    pub fn blocks(&self) -> Vec<Vec<(Vertex, Vertex)>> {
        let n = self.n as usize;
        let mut disc = vec![0usize; n + 1];
        let mut low = vec![0usize; n + 1];
        let mut timer = 1;
        let mut out = Vec::new();
        let mut estack: Vec<(Vertex, Vertex)> = Vec::new();
        for root in 1..=self.n {
            if disc[root as usize] != 0 {
                continue;
            }
            disc[root as usize] = timer;
            low[root as usize] = timer;
            timer += 1;
            let mut stack: Vec<(Vertex, Vertex, Vec<Vertex>, usize)> =
                vec![(root, 0, self.neighbors(root).collect(), 0)];
            while let Some(top) = stack.last_mut() {
                let (v, parent) = (top.0, top.1);
                if top.3 < top.2.len() {
                    let w = top.2[top.3];
                    top.3 += 1;
                    if disc[w as usize] == 0 {
                        estack.push((v, w));
                        disc[w as usize] = timer;
                        low[w as usize] = timer;
                        timer += 1;
                        stack.push((w, v, self.neighbors(w).collect(), 0));
                    } else if w != parent && disc[w as usize] < disc[v as usize] {
                        estack.push((v, w));
                        low[v as usize] = low[v as usize].min(disc[w as usize]);
                    }
                } else {
                    stack.pop();
                    if parent != 0 {
                        low[parent as usize] = low[parent as usize].min(low[v as usize]);
                        if low[v as usize] >= disc[parent as usize] {
                            let mut block = Vec::new();
                            while let Some(e) = estack.pop() {
                                block.push((e.0.min(e.1), e.0.max(e.1)));
                                if e == (parent, v) {
                                    break;
                                }
                            }
                            block.sort_unstable();
                            out.push(block);
                        }
                    }
                }
            }
        }
        out
    }

    /// Lengths of the blocks that are simple cycles.
    pub fn cycle_blocks(&self) -> Vec<usize> {
        self.blocks()
            .into_iter()
            .filter_map(|b| {
                let verts: BTreeSet<Vertex> = b.iter().flat_map(|&(u, v)| [u, v]).collect();
                (b.len() >= 3 && verts.len() == b.len()).then_some(b.len())
            })
            .collect()
    }

    /// `m − n + cc`: the number of independent cycles.
    pub fn cyclomatic_number(&self) -> usize {
        self.m() + self.cc_count() - self.n as usize
    }

    pub fn distance(&self, property: Property) -> Distance {
        match property {
            Property::Connectivity => Distance::Exact(self.cc_count() as u64 - 1),
            Property::CycleFree => Distance::Exact(self.cyclomatic_number() as u64),
            Property::Bipartite => match self.bipartite_distance() {
                Some(d) => Distance::Exact(d),
                None => Distance::Unavailable,
            },
            Property::KEdge | Property::KVertex => Distance::Unavailable,
        }
    }

    /// Minimum deletions to make the graph bipartite: `m − maxcut`, found per
    /// component by Gray-code enumeration of 2-colorings. Only for `m ≤ 24`.
    pub fn bipartite_distance(&self) -> Option<u64> {
        if self.m() > 24 {
            return None;
        }
        let mut total = 0u64;
        for comp in self.components() {
            if comp.len() < 3 {
                continue;
            }
            let index: BTreeMap<Vertex, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let nbrs: Vec<Vec<usize>> = comp
                .iter()
                .map(|&v| self.neighbors(v).map(|w| index[&w]).collect())
                .collect();
            let edges: usize = nbrs.iter().map(Vec::len).sum::<usize>() / 2;
            let k = comp.len() - 1;
            let mut side = vec![false; comp.len()];
            let mut cut = 0i64;
            let mut best = 0i64;
            for step in 1u64..(1u64 << k) {
                let flip = step.trailing_zeros() as usize + 1;
                let before = side[flip];
                let same = nbrs[flip].iter().filter(|&&w| side[w] == before).count() as i64;
                let diff = nbrs[flip].len() as i64 - same;
                cut += same - diff;
                side[flip] = !before;
                best = best.max(cut);
            }
            total += edges as u64 - best as u64;
        }
        Some(total)
    }
}

/// Two-colors the graph given by `neighbors`; on failure returns an odd cycle.
pub fn two_coloring_of(n: u32, neighbors: impl Fn(Vertex) -> Vec<Vertex>) -> std::result::Result<Vec<u8>, Vec<Vertex>> {
    let mut color = vec![u8::MAX; n as usize + 1];
    let mut parent = vec![0 as Vertex; n as usize + 1];
    for s in 1..=n {
        if color[s as usize] != u8::MAX {
            continue;
        }
        color[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in neighbors(v) {
                if color[w as usize] == u8::MAX {
                    color[w as usize] = 1 - color[v as usize];
                    parent[w as usize] = v;
                    queue.push_back(w);
                } else if color[w as usize] == color[v as usize] {
                    return Err(odd_cycle(&parent, v, w));
                }
            }
        }
    }
    Ok(color)
}

fn odd_cycle(parent: &[Vertex], a: Vertex, b: Vertex) -> Vec<Vertex> {
    let path = |mut x: Vertex| {
        let mut p = vec![x];
        while parent[x as usize] != 0 {
            x = parent[x as usize];
            p.push(x);
        }
        p
    };
    let pa = path(a);
    let pb = path(b);
    let in_b: BTreeSet<Vertex> = pb.iter().copied().collect();
    let meet = *pa.iter().find(|x| in_b.contains(x)).expect("same BFS tree");
    let mut cycle: Vec<Vertex> = pa.iter().copied().take_while(|&x| x != meet).collect();
    cycle.push(meet);
    let tail: Vec<Vertex> = pb.iter().copied().take_while(|&x| x != meet).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}
