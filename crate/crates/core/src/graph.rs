//! Bitset graphs on at most 64 vertices and the Ramsey-property primitives.
//!
//! Every row of the adjacency matrix is a single `u64`, so neighbourhood
//! intersections, clique searches and induced subgraphs are plain word
//! operations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: usize = 64;

/// Mask with the lowest `n` bits set.
#[inline]
pub const fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Iterator over the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

/// Undirected simple graph with adjacency stored as one bitset per vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "graph order {n} exceeds {MAX_ORDER}");
        Graph {
            n,
            adj: vec![0; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        let m = full_mask(n);
        for v in 0..n {
            g.adj[v] = m & !bit(v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for v in 0..n {
                g.add_edge(v, (v + 1) % n);
            }
        } else if n == 2 {
            g.add_edge(0, 1);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    /// Star `K_{1,leaves}` with the centre at vertex 0.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    /// Paley graph on a prime `q ≡ 1 (mod 4)`: `x ~ y` iff `x - y` is a
    /// nonzero square.
    pub fn paley(q: usize) -> Self {
        assert!(q % 4 == 1, "Paley graphs need q = 1 mod 4");
        let mut square = vec![false; q];
        for x in 1..q {
            square[(x * x) % q] = true;
        }
        let mut g = Graph::empty(q);
        for x in 0..q {
            for y in (x + 1)..q {
                if square[(y - x) % q] {
                    g.add_edge(x, y);
                }
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n));
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    order: n,
                });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from raw rows, validating symmetry, loops and range.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n));
        }
        let m = full_mask(n);
        for (v, &row) in rows.iter().enumerate() {
            if row & !m != 0 {
                return Err(Error::InvalidGraph(format!("row {v} has bits past n")));
            }
            if row & bit(v) != 0 {
                return Err(Error::InvalidGraph(format!("loop at vertex {v}")));
            }
            for u in Bits(row) {
                if rows[u] & bit(v) == 0 {
                    return Err(Error::InvalidGraph(format!("asymmetric pair {u},{v}")));
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    /// Trusted constructor for rows already known to be valid.
    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        Graph {
            n: rows.len(),
            adj: rows,
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).max()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    pub fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        if on {
            self.add_edge(u, v)
        } else {
            self.remove_edge(u, v)
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in Bits(self.adj[u] & !full_mask(u + 1)) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let m = self.vertex_mask();
        let adj = (0..self.n).map(|v| !self.adj[v] & m & !bit(v)).collect();
        Graph { n: self.n, adj }
    }

    /// Complement rows restricted to the vertex set, without building a graph.
    #[inline]
    pub(crate) fn complement_row(&self, v: usize) -> u64 {
        !self.adj[v] & self.vertex_mask() & !bit(v)
    }

    /// Induced subgraph on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let k = vertices.len();
        let mut adj = vec![0u64; k];
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &w) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, w) {
                    adj[i] |= bit(j);
                    adj[j] |= bit(i);
                }
            }
        }
        Graph { n: k, adj }
    }

    /// Induced subgraph on the vertices of `mask`, in increasing order.
    pub fn induced_mask(&self, mask: u64) -> Graph {
        let verts: Vec<usize> = Bits(mask & self.vertex_mask()).collect();
        self.induced(&verts)
    }

    /// Relabels so that input vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u64; self.n];
        for v in 0..self.n {
            let mut row = 0u64;
            for u in Bits(self.adj[v]) {
                row |= bit(perm[u]);
            }
            adj[perm[v]] = row;
        }
        Graph { n: self.n, adj }
    }

    /// Graph on `n + 1` vertices whose new last vertex is adjacent to `nbrs`.
    pub fn with_vertex(&self, nbrs: u64) -> Graph {
        assert!(self.n < MAX_ORDER);
        let nbrs = nbrs & self.vertex_mask();
        let v = self.n;
        let mut adj = Vec::with_capacity(v + 1);
        for u in 0..v {
            adj.push(self.adj[u] | if nbrs & bit(u) != 0 { bit(v) } else { 0 });
        }
        adj.push(nbrs);
        Graph { n: v + 1, adj }
    }

    /// Number of edges inside the vertex set `mask`.
    pub fn edges_within(&self, mask: u64) -> usize {
        Bits(mask)
            .map(|v| (self.adj[v] & mask).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Number of edges with one end in `a` and the other in `b` (disjoint sets).
    pub fn edges_between(&self, a: u64, b: u64) -> usize {
        Bits(a).map(|v| (self.adj[v] & b).count_ones() as usize).sum()
    }

    pub fn is_regular(&self) -> bool {
        match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => lo == hi,
            _ => true,
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Clique bound `s` and independent-set bound `t` of a Ramsey class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RamseyType {
    pub s: usize,
    pub t: usize,
}

impl RamseyType {
    pub fn new(s: usize, t: usize) -> Result<Self> {
        if s < 2 || t < 2 {
            return Err(Error::InvalidRamseyType { s, t });
        }
        Ok(RamseyType { s, t })
    }

    /// The type with clique and independence bounds swapped.
    pub fn dual(self) -> RamseyType {
        RamseyType {
            s: self.t,
            t: self.s,
        }
    }
}

impl fmt::Display for RamseyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

/// Greedy colouring upper bound on the clique number of `adj[cand]`.
fn colour_bound(adj: &[u64], cand: u64) -> usize {
    let mut uncoloured = cand;
    let mut colours = 0;
    while uncoloured != 0 {
        colours += 1;
        let mut avail = uncoloured;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !adj[v] & !bit(v);
            uncoloured &= !bit(v);
        }
    }
    colours
}

/// Colouring is only worth its cost on wider candidate sets.
const COLOUR_BOUND_MIN_WIDTH: u32 = 12;

/// Whether the subgraph induced on `cand` has a clique of size `k`.
pub fn clique_in(adj: &[u64], mut cand: u64, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let width = cand.count_ones();
    if (width as usize) < k {
        return false;
    }
    match k {
        1 => return true,
        2 => return Bits(cand).any(|v| adj[v] & cand != 0),
        _ => {}
    }
    if width >= COLOUR_BOUND_MIN_WIDTH && colour_bound(adj, cand) < k {
        return false;
    }
    while cand.count_ones() as usize >= k {
        let v = cand.trailing_zeros() as usize;
        cand &= !bit(v);
        if clique_in(adj, cand & adj[v], k - 1) {
            return true;
        }
    }
    false
}

/// Like [`clique_in`] but returns the vertices of one clique found.
pub fn find_clique_in(adj: &[u64], cand: u64, k: usize) -> Option<Vec<usize>> {
    fn go(adj: &[u64], mut cand: u64, k: usize, acc: &mut Vec<usize>) -> bool {
        if k == 0 {
            return true;
        }
        if (cand.count_ones() as usize) < k {
            return false;
        }
        if cand.count_ones() >= COLOUR_BOUND_MIN_WIDTH && colour_bound(adj, cand) < k {
            return false;
        }
        while cand.count_ones() as usize >= k {
            let v = cand.trailing_zeros() as usize;
            cand &= !bit(v);
            acc.push(v);
            if go(adj, cand & adj[v], k - 1, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::with_capacity(k);
    go(adj, cand, k, &mut acc).then_some(acc)
}

/// Whether the vertex set `cand` contains `k` mutually non-adjacent vertices.
pub(crate) fn independent_in(g: &Graph, cand: u64, k: usize) -> bool {
    let comp: Vec<u64> = (0..g.n).map(|v| g.complement_row(v)).collect();
    clique_in(&comp, cand, k)
}

/// True iff `g` contains `k` mutually adjacent vertices.
pub fn has_clique(g: &Graph, k: usize) -> bool {
    clique_in(&g.adj, g.vertex_mask(), k)
}

/// True iff `g` has `k` mutually non-adjacent vertices.
pub fn has_independent_set(g: &Graph, k: usize) -> bool {
    independent_in(g, g.vertex_mask(), k)
}

/// Raw form of the Ramsey test that also accepts degenerate bounds below 2.
pub fn is_ramsey_st(g: &Graph, s: usize, t: usize) -> bool {
    !has_clique(g, s) && !has_independent_set(g, t)
}

pub fn is_ramsey(g: &Graph, rt: RamseyType) -> bool {
    is_ramsey_st(g, rt.s, rt.t)
}

/// Neighbourhood and non-neighbourhood of a vertex as induced subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSplit {
    pub plus: Graph,
    pub minus: Graph,
    pub plus_map: Vec<usize>,
    pub minus_map: Vec<usize>,
}

pub fn vertex_split(g: &Graph, v: usize) -> Result<VertexSplit> {
    if v >= g.n {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: g.n,
        });
    }
    let plus_map: Vec<usize> = Bits(g.adj[v]).collect();
    let minus_map: Vec<usize> = Bits(g.complement_row(v)).collect();
    Ok(VertexSplit {
        plus: g.induced(&plus_map),
        minus: g.induced(&minus_map),
        plus_map,
        minus_map,
    })
}

/// True iff some vertex subset of `g` induces a graph isomorphic to `h`.
pub fn contains_induced(g: &Graph, h: &Graph) -> bool {
    find_induced(g, h).is_some()
}

/// An embedding `h -> g` whose image induces a copy of `h`, if one exists.
pub fn find_induced(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let (n, k) = (g.n, h.n);
    if k > n {
        return None;
    }
    if k == 0 {
        return Some(Vec::new());
    }
    // Place h's vertices so each one (after the first) is adjacent to the
    // prefix when possible, highest degree first.
    let mut order = Vec::with_capacity(k);
    let mut placed = 0u64;
    while order.len() < k {
        let remaining = full_mask(k) & !placed;
        let touching = Bits(remaining).filter(|&u| h.adj[u] & placed != 0);
        let pick = touching
            .max_by_key(|&u| ((h.adj[u] & placed).count_ones(), h.degree(u), std::cmp::Reverse(u)))
            .or_else(|| Bits(remaining).max_by_key(|&u| (h.degree(u), std::cmp::Reverse(u))))
            .expect("remaining vertex");
        order.push(pick);
        placed |= bit(pick);
    }
    let g_deg: Vec<usize> = g.degrees();
    let h_deg: Vec<usize> = h.degrees();
    let mut map = vec![usize::MAX; k];

    fn go(
        g: &Graph,
        h: &Graph,
        order: &[usize],
        depth: usize,
        used: u64,
        map: &mut [usize],
        g_deg: &[usize],
        h_deg: &[usize],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let u = order[depth];
        let mut cand = g.vertex_mask() & !used;
        for &w in &order[..depth] {
            let img = map[w];
            cand &= if h.has_edge(u, w) {
                g.adj[img]
            } else {
                g.complement_row(img)
            };
        }
        let (hn, gn) = (h.n, g.n);
        for x in Bits(cand) {
            if g_deg[x] < h_deg[u] || gn - 1 - g_deg[x] < hn - 1 - h_deg[u] {
                continue;
            }
            map[u] = x;
            if go(g, h, order, depth + 1, used | bit(x), map, g_deg, h_deg) {
                return true;
            }
        }
        map[u] = usize::MAX;
        false
    }

    go(g, h, &order, 0, 0, &mut map, &g_deg, &h_deg).then_some(map)
}
