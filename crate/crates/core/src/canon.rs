//! Canonical labelling, isomorphism and automorphism groups.
//!
//! The search is the usual individualisation-refinement tree. Every node is
//! an ordered partition refined to equitability; its target cell is the
//! first non-singleton cell and children individualise its vertices in
//! increasing order. Each refinement leaves a label-invariant trace, and the
//! canonical leaf is the one maximising (trace sequence, relabelled rows).
//! Subtrees whose trace prefix is already smaller than the best are cut, and
//! automorphisms found along the way prune children lying in the same orbit.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{bit, Bits, Graph, MAX_ORDER};
use crate::graph6;

const QUEUE_CAP: usize = 2 * MAX_ORDER + 8;
const MAX_STORED_GENERATORS: usize = 128;

/// Groups up to this order are listed element by element.
pub const FULL_GROUP_LIMIT: u128 = 100_000;

/// Largest graph accepted by [`automorphisms`].
pub const AUTOMORPHISM_ORDER_LIMIT: usize = 16;

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let h = (h ^ x).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    h ^ (h >> 31)
}

#[derive(Clone, Copy)]
struct Partition {
    cells: [u64; MAX_ORDER],
    len: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut cells = [0u64; MAX_ORDER];
        let len = if n == 0 {
            0
        } else {
            cells[0] = crate::graph::full_mask(n);
            1
        };
        Partition { cells, len }
    }

    fn from_colours(colours: &[u32]) -> Self {
        let mut distinct: Vec<u32> = colours.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let mut cells = [0u64; MAX_ORDER];
        for (v, c) in colours.iter().enumerate() {
            let idx = distinct.binary_search(c).unwrap();
            cells[idx] |= bit(v);
        }
        Partition {
            cells,
            len: distinct.len(),
        }
    }

    #[inline]
    fn is_discrete(&self, n: usize) -> bool {
        self.len == n
    }

    fn target_cell(&self) -> Option<usize> {
        (0..self.len).find(|&i| self.cells[i] & (self.cells[i] - 1) != 0)
    }

    /// Splits `v` off the front of cell `ci`.
    fn individualise(&mut self, ci: usize, v: usize) {
        let rest = self.cells[ci] & !bit(v);
        self.cells.copy_within(ci + 1..self.len, ci + 2);
        self.cells[ci] = bit(v);
        self.cells[ci + 1] = rest;
        self.len += 1;
    }

    /// Refines to the coarsest equitable partition finer than `self`,
    /// starting from the given splitter cells. Returns the refinement trace.
    fn refine(&mut self, adj: &[u64], init: &[u64]) -> u64 {
        let mut queue = [0u64; QUEUE_CAP];
        let mut head = 0;
        let mut tail = 0;
        for &w in init {
            queue[tail] = w;
            tail += 1;
        }
        let mut trace = mix(0x5EED, self.len as u64);
        let mut scratch = [(0u8, 0u8); MAX_ORDER];
        while head < tail {
            let w = queue[head];
            head += 1;
            let mut i = 0;
            while i < self.len {
                let x = self.cells[i];
                if x & (x - 1) == 0 {
                    i += 1;
                    continue;
                }
                let mut m = 0;
                let (mut lo, mut hi) = (u8::MAX, 0u8);
                for v in Bits(x) {
                    let c = (adj[v] & w).count_ones() as u8;
                    scratch[m] = (c, v as u8);
                    m += 1;
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
                if lo == hi {
                    i += 1;
                    continue;
                }
                // Fragments ordered by count, ascending.
                let items = &mut scratch[..m];
                items.sort_unstable();
                let mut frags = [0u64; MAX_ORDER];
                let mut r = 0;
                let mut prev = items[0].0;
                for &(c, v) in items.iter() {
                    if c != prev {
                        trace = mix(trace, ((i as u64) << 16) | ((prev as u64) << 8) | frags[r].count_ones() as u64);
                        r += 1;
                        prev = c;
                    }
                    frags[r] |= bit(v as usize);
                }
                trace = mix(trace, ((i as u64) << 16) | ((prev as u64) << 8) | frags[r].count_ones() as u64);
                r += 1;

                self.cells.copy_within(i + 1..self.len, i + r);
                self.cells[i..i + r].copy_from_slice(&frags[..r]);
                self.len += r - 1;

                if let Some(pos) = queue[head..tail].iter().position(|&q| q == x) {
                    queue[head + pos] = frags[0];
                    for &f in &frags[1..r] {
                        queue[tail] = f;
                        tail += 1;
                    }
                } else {
                    let mut largest = 0;
                    for k in 1..r {
                        if frags[k].count_ones() > frags[largest].count_ones() {
                            largest = k;
                        }
                    }
                    for (k, &f) in frags[..r].iter().enumerate() {
                        if k != largest {
                            queue[tail] = f;
                            tail += 1;
                        }
                    }
                }
                i += r;
            }
        }
        trace
    }

    /// Labelling of a discrete partition: `lab[i]` is the vertex in position `i`.
    fn labelling(&self, n: usize) -> [u8; MAX_ORDER] {
        let mut lab = [0u8; MAX_ORDER];
        for i in 0..n {
            lab[i] = self.cells[i].trailing_zeros() as u8;
        }
        lab
    }
}

/// Rows of the graph relabelled so that `lab[i]` becomes vertex `i`.
fn certificate(adj: &[u64], n: usize, lab: &[u8; MAX_ORDER]) -> [u64; MAX_ORDER] {
    let mut pos = [0u8; MAX_ORDER];
    for i in 0..n {
        pos[lab[i] as usize] = i as u8;
    }
    let mut cert = [0u64; MAX_ORDER];
    for i in 0..n {
        let mut row = 0u64;
        for u in Bits(adj[lab[i] as usize]) {
            row |= bit(pos[u] as usize);
        }
        cert[i] = row;
    }
    cert
}

fn cmp_cert(a: &[u64; MAX_ORDER], b: &[u64; MAX_ORDER], n: usize) -> Ordering {
    a[..n].cmp(&b[..n])
}

type Perm = [u8; MAX_ORDER];

struct Best {
    traces: Vec<u64>,
    cert: [u64; MAX_ORDER],
    lab: [u8; MAX_ORDER],
}

struct CanonSearch<'a> {
    adj: &'a [u64],
    n: usize,
    traces: [u64; MAX_ORDER + 1],
    path: [u8; MAX_ORDER],
    best: Option<Best>,
    gens: Vec<Perm>,
}

impl CanonSearch<'_> {
    fn cmp_prefix(&self, depth: usize) -> Ordering {
        let Some(best) = &self.best else {
            return Ordering::Greater;
        };
        let last = best.traces.len() - 1;
        for k in 0..=depth.min(last) {
            match self.traces[k].cmp(&best.traces[k]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        if depth > last {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    fn in_explored_orbit(&self, depth: usize, v: usize, explored: u64) -> bool {
        if explored == 0 || self.gens.is_empty() {
            return false;
        }
        let fixing: Vec<&Perm> = self
            .gens
            .iter()
            .filter(|g| (0..depth).all(|k| g[self.path[k] as usize] == self.path[k]))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut orbit = bit(v);
        let mut frontier = bit(v);
        while frontier != 0 {
            let mut next = 0u64;
            for x in Bits(frontier) {
                for g in &fixing {
                    let y = g[x] as usize;
                    if orbit & bit(y) == 0 {
                        orbit |= bit(y);
                        next |= bit(y);
                    }
                }
            }
            if orbit & explored != 0 {
                return true;
            }
            frontier = next;
        }
        false
    }

    fn visit(&mut self, p: &Partition, depth: usize) {
        let order = self.cmp_prefix(depth);
        if order == Ordering::Less {
            return;
        }
        if p.is_discrete(self.n) {
            let lab = p.labelling(self.n);
            let cert = certificate(self.adj, self.n, &lab);
            let replace = match (&self.best, order) {
                (None, _) | (_, Ordering::Greater) => true,
                (Some(best), _) => {
                    if depth + 1 < best.traces.len() {
                        return;
                    }
                    match cmp_cert(&cert, &best.cert, self.n) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        Ordering::Equal => {
                            if self.gens.len() < MAX_STORED_GENERATORS {
                                let mut g = [0u8; MAX_ORDER];
                                for i in 0..self.n {
                                    g[lab[i] as usize] = best.lab[i];
                                }
                                if (0..self.n).any(|v| g[v] as usize != v) {
                                    self.gens.push(g);
                                }
                            }
                            false
                        }
                    }
                }
            };
            if replace {
                self.best = Some(Best {
                    traces: self.traces[..=depth].to_vec(),
                    cert,
                    lab,
                });
            }
            return;
        }
        let ci = p.target_cell().expect("non-discrete partition has a target cell");
        let cell = p.cells[ci];
        let size = cell.count_ones() as u64;
        let mut explored = 0u64;
        for v in Bits(cell) {
            if self.in_explored_orbit(depth, v, explored) {
                continue;
            }
            let mut child = *p;
            child.individualise(ci, v);
            let t = child.refine(self.adj, &[bit(v)]);
            self.traces[depth + 1] = mix(mix(t, ci as u64), size);
            self.path[depth] = v as u8;
            self.visit(&child, depth + 1);
            explored |= bit(v);
        }
    }
}

/// Canonical key and the labelling that produces it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    /// graph6 bytes of the canonically relabelled graph. Coloured forms
    /// append `|colour:size,...` for each colour class.
    pub key: Vec<u8>,
    /// `perm[v]` is the canonical position of input vertex `v`.
    pub perm: Vec<usize>,
}

impl CanonicalForm {
    pub fn key_str(&self) -> &str {
        std::str::from_utf8(&self.key).unwrap_or("<non-ascii>")
    }
}

struct RawCanon {
    cert: [u64; MAX_ORDER],
    lab: [u8; MAX_ORDER],
}

fn canon_raw(adj: &[u64], n: usize, start: Partition) -> RawCanon {
    let mut root = start;
    let init: Vec<u64> = root.cells[..root.len].to_vec();
    let t = root.refine(adj, &init);
    let mut search = CanonSearch {
        adj,
        n,
        traces: [0; MAX_ORDER + 1],
        path: [0; MAX_ORDER],
        best: None,
        gens: Vec::new(),
    };
    search.traces[0] = t;
    search.visit(&root, 0);
    let best = search.best.expect("search reaches a leaf");
    RawCanon {
        cert: best.cert,
        lab: best.lab,
    }
}

fn finish(g: &Graph, raw: &RawCanon, colour_sizes: Option<&[(u32, usize)]>) -> CanonicalForm {
    let n = g.order();
    let canon = Graph::from_rows_unchecked(raw.cert[..n].to_vec());
    let mut key = graph6::encode(&canon);
    if let Some(sizes) = colour_sizes {
        key.push(b'|');
        for (i, (c, s)) in sizes.iter().enumerate() {
            if i > 0 {
                key.push(b',');
            }
            key.extend_from_slice(format!("{c}:{s}").as_bytes());
        }
    }
    let mut perm = vec![0usize; n];
    for i in 0..n {
        perm[raw.lab[i] as usize] = i;
    }
    CanonicalForm { key, perm }
}

/// Canonical form of an uncoloured graph.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.order();
    let raw = canon_raw(g.rows(), n, Partition::unit(n));
    finish(g, &raw, None)
}

/// Canonical graph6 key only.
pub fn canonical_key(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let raw = canon_raw(g.rows(), n, Partition::unit(n));
    graph6::encode(&Graph::from_rows_unchecked(raw.cert[..n].to_vec()))
}

/// Canonical graph6 key of the graph with the given (valid) adjacency rows.
pub fn canonical_key_of_rows(rows: &[u64]) -> Vec<u8> {
    let n = rows.len();
    let raw = canon_raw(rows, n, Partition::unit(n));
    graph6::encode(&Graph::from_rows_unchecked(raw.cert[..n].to_vec()))
}

/// The canonically relabelled graph.
pub fn canonical_graph(g: &Graph) -> Graph {
    let n = g.order();
    let raw = canon_raw(g.rows(), n, Partition::unit(n));
    Graph::from_rows_unchecked(raw.cert[..n].to_vec())
}

/// Canonical form of a vertex-coloured graph. Isomorphisms must preserve
/// colours, and colour classes are ordered by colour value.
pub fn canonical_form_coloured(g: &Graph, colours: &[u32]) -> CanonicalForm {
    assert_eq!(colours.len(), g.order());
    let n = g.order();
    let start = Partition::from_colours(colours);
    let mut distinct: Vec<u32> = colours.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let sizes: Vec<(u32, usize)> = distinct
        .iter()
        .zip(&start.cells[..start.len])
        .map(|(&c, cell)| (c, cell.count_ones() as usize))
        .collect();
    let raw = canon_raw(g.rows(), n, start);
    finish(g, &raw, Some(&sizes))
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.order() == h.order()
        && g.edge_count() == h.edge_count()
        && canonical_key(g) == canonical_key(h)
}

/// An isomorphism `g -> h` as a vertex map, if one exists.
pub fn isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return None;
    }
    let cg = canonical_form(g);
    let ch = canonical_form(h);
    if cg.key != ch.key {
        return None;
    }
    let mut inv_h = vec![0usize; h.order()];
    for (v, &p) in ch.perm.iter().enumerate() {
        inv_h[p] = v;
    }
    Some(cg.perm.iter().map(|&p| inv_h[p]).collect())
}

/// Generators and order of a (coloured) automorphism group.
#[derive(Clone, Debug)]
pub struct GroupInfo {
    pub generators: Vec<Vec<usize>>,
    pub order: u128,
}

struct LeafMatch<'a> {
    adj: &'a [u64],
    n: usize,
    traces: &'a [u64],
    cert: &'a [u64; MAX_ORDER],
}

impl LeafMatch<'_> {
    /// Finds a leaf below `p` with the reference traces and certificate.
    fn find(&self, p: &Partition, depth: usize) -> Option<[u8; MAX_ORDER]> {
        if p.is_discrete(self.n) {
            if depth + 1 != self.traces.len() {
                return None;
            }
            let lab = p.labelling(self.n);
            let cert = certificate(self.adj, self.n, &lab);
            return (cmp_cert(&cert, self.cert, self.n) == Ordering::Equal).then_some(lab);
        }
        if depth + 1 >= self.traces.len() {
            return None;
        }
        let ci = p.target_cell()?;
        let cell = p.cells[ci];
        let size = cell.count_ones() as u64;
        for v in Bits(cell) {
            let mut child = *p;
            child.individualise(ci, v);
            let t = mix(mix(child.refine(self.adj, &[bit(v)]), ci as u64), size);
            if t != self.traces[depth + 1] {
                continue;
            }
            if let Some(lab) = self.find(&child, depth + 1) {
                return Some(lab);
            }
        }
        None
    }
}

fn orbit_of(v: usize, gens: &[&Vec<usize>]) -> u64 {
    let mut orbit = bit(v);
    let mut frontier = bit(v);
    while frontier != 0 {
        let mut next = 0;
        for x in Bits(frontier) {
            for g in gens {
                let y = g[x];
                if orbit & bit(y) == 0 {
                    orbit |= bit(y);
                    next |= bit(y);
                }
            }
        }
        frontier = next;
    }
    orbit
}

/// Strong generating set and exact order of the automorphism group of a
/// vertex-coloured graph (pass equal colours for the plain group).
pub fn automorphism_group(g: &Graph, colours: &[u32]) -> GroupInfo {
    let n = g.order();
    assert_eq!(colours.len(), n);
    if n == 0 {
        return GroupInfo {
            generators: Vec::new(),
            order: 1,
        };
    }
    let adj = g.rows();
    // First path: always individualise the first vertex of the target cell.
    let mut nodes = Vec::new();
    let mut traces = Vec::new();
    let mut path = Vec::new();
    let mut p = Partition::from_colours(colours);
    let init: Vec<u64> = p.cells[..p.len].to_vec();
    traces.push(p.refine(adj, &init));
    while !p.is_discrete(n) {
        let ci = p.target_cell().unwrap();
        let cell = p.cells[ci];
        let v = cell.trailing_zeros() as usize;
        nodes.push((p, ci));
        path.push(v);
        let mut child = p;
        child.individualise(ci, v);
        let t = child.refine(adj, &[bit(v)]);
        traces.push(mix(mix(t, ci as u64), cell.count_ones() as u64));
        p = child;
    }
    let lab0 = p.labelling(n);
    let cert0 = certificate(adj, n, &lab0);
    let matcher = LeafMatch {
        adj,
        n,
        traces: &traces,
        cert: &cert0,
    };

    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut order: u128 = 1;
    for level in (0..nodes.len()).rev() {
        let (node, ci) = nodes[level];
        let target = path[level];
        let fixes_prefix = |g: &Vec<usize>| path[..level].iter().all(|&x| g[x] == x);
        let mut orbit = {
            let stab: Vec<&Vec<usize>> = gens.iter().filter(|g| fixes_prefix(g)).collect();
            orbit_of(target, &stab)
        };
        for w in Bits(node.cells[ci]) {
            if orbit & bit(w) != 0 {
                continue;
            }
            let mut child = node;
            child.individualise(ci, w);
            let t = mix(
                mix(child.refine(adj, &[bit(w)]), ci as u64),
                node.cells[ci].count_ones() as u64,
            );
            if t != traces[level + 1] {
                continue;
            }
            if let Some(lab) = matcher.find(&child, level + 1) {
                let mut perm = vec![0usize; n];
                for i in 0..n {
                    perm[lab[i] as usize] = lab0[i] as usize;
                }
                debug_assert_eq!(perm[w], target);
                gens.push(perm);
                let stab: Vec<&Vec<usize>> = gens.iter().filter(|g| fixes_prefix(g)).collect();
                orbit = orbit_of(target, &stab);
            }
        }
        order *= orbit.count_ones() as u128;
    }
    GroupInfo {
        generators: gens,
        order,
    }
}

/// Automorphisms of a small graph: the whole group when its order is at
/// most [`FULL_GROUP_LIMIT`], otherwise a generating set (`complete == false`).
#[derive(Clone, Debug)]
pub struct AutomorphismSet {
    pub perms: Vec<Vec<usize>>,
    pub complete: bool,
    pub order: u128,
}

pub fn automorphisms(k: &Graph) -> Result<AutomorphismSet> {
    if k.order() > AUTOMORPHISM_ORDER_LIMIT {
        return Err(Error::SizeLimit {
            order: k.order(),
            limit: AUTOMORPHISM_ORDER_LIMIT,
        });
    }
    let info = automorphism_group(k, &vec![0; k.order()]);
    let identity: Vec<usize> = (0..k.order()).collect();
    if info.order > FULL_GROUP_LIMIT {
        let mut perms = vec![identity];
        perms.extend(info.generators);
        return Ok(AutomorphismSet {
            perms,
            complete: false,
            order: info.order,
        });
    }
    let perms = group_closure(&info.generators, k.order());
    debug_assert_eq!(perms.len() as u128, info.order);
    Ok(AutomorphismSet {
        perms,
        complete: true,
        order: info.order,
    })
}

/// All elements of the group generated by `gens`, identity first, sorted.
pub fn group_closure(gens: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let identity: Vec<usize> = (0..n).collect();
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
        if g.order() != h.order() || g.edge_count() != h.edge_count() {
            return false;
        }
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        fn next_perm(p: &mut [usize]) -> bool {
            let n = p.len();
            if n < 2 {
                return false;
            }
            let mut i = n - 1;
            while i > 0 && p[i - 1] >= p[i] {
                i -= 1;
            }
            if i == 0 {
                return false;
            }
            let mut j = n - 1;
            while p[j] <= p[i - 1] {
                j -= 1;
            }
            p.swap(i - 1, j);
            p[i..].reverse();
            true
        }
        loop {
            if g.permuted(&perm) == *h {
                return true;
            }
            if !next_perm(&mut perm) {
                return false;
            }
        }
    }

    #[test]
    fn relabelled_cycle_has_same_key() {
        let a = Graph::cycle(5);
        let b = Graph::from_edges(5, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(canonical_form(&a).key, canonical_form(&b).key);
    }

    #[test]
    fn triangle_plus_vertex_differs_from_path() {
        let k3k1 = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_ne!(canonical_key(&k3k1), canonical_key(&Graph::path(4)));
    }

    #[test]
    fn perm_reproduces_key() {
        let g = Graph::paley(13);
        let cf = canonical_form(&g);
        assert_eq!(graph6::encode(&g.permuted(&cf.perm)), cf.key);
    }

    #[test]
    fn small_groups() {
        let a = automorphisms(&Graph::complete(3)).unwrap();
        assert_eq!(a.perms.len(), 6);
        assert!(a.complete);
        let p = automorphisms(&Graph::path(3)).unwrap();
        assert_eq!(p.perms, vec![vec![0, 1, 2], vec![2, 1, 0]]);
        assert_eq!(automorphisms(&Graph::cycle(5)).unwrap().perms.len(), 10);
        assert_eq!(automorphism_group(&Graph::paley(17), &[0; 17]).order, 136);
        assert_eq!(automorphism_group(&Graph::petersen(), &[0; 10]).order, 120);
    }

    #[test]
    fn large_groups_are_flagged() {
        let e = automorphisms(&Graph::empty(12)).unwrap();
        assert!(!e.complete);
        assert_eq!(e.order, 479_001_600);
        assert!(automorphisms(&Graph::empty(17)).is_err());
    }

    #[test]
    fn every_listed_perm_is_an_automorphism() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)]).unwrap();
        let a = automorphisms(&g).unwrap();
        assert_eq!(a.order, 8);
        for p in &a.perms {
            assert_eq!(g.permuted(p), g);
        }
    }

    #[test]
    fn coloured_forms_respect_colours() {
        let star = Graph::star(3);
        let centre = canonical_form_coloured(&star, &[1, 0, 0, 0]);
        let leaf = canonical_form_coloured(&star, &[0, 1, 0, 0]);
        let leaf2 = canonical_form_coloured(&star, &[0, 0, 0, 1]);
        assert_ne!(centre.key, leaf.key);
        assert_eq!(leaf.key, leaf2.key);
    }

    #[test]
    fn isomorphism_maps_edges() {
        let g = Graph::paley(13);
        let perm = [3, 0, 7, 1, 12, 5, 9, 2, 11, 4, 6, 10, 8];
        let h = g.permuted(&perm);
        let iso = isomorphism(&g, &h).unwrap();
        assert_eq!(g.permuted(&iso), h);
        assert!(isomorphism(&g, &g.complement().complement().with_vertex(0)).is_none());
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        let mut x = 0x1234_5678_9abc_def1u64;
        let mut rnd = move || {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            x
        };
        for _ in 0..400 {
            let n = (rnd() % 7 + 2) as usize;
            let mk = |r: &mut dyn FnMut() -> u64| {
                let mut g = Graph::empty(n);
                for u in 0..n {
                    for v in u + 1..n {
                        if r() % 2 == 0 {
                            g.add_edge(u, v);
                        }
                    }
                }
                g
            };
            let g = mk(&mut rnd);
            let h = mk(&mut rnd);
            assert_eq!(are_isomorphic(&g, &h), brute_isomorphic(&g, &h), "{g:?} {h:?}");
        }
    }
}
