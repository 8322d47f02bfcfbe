//! Counting identities and structural queries over Ramsey graphs.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::Catalog;
use crate::census::with_workers;
use crate::error::{Error, Result};
use crate::graph::{bit, contains_induced, vertex_split, Bits, Graph, RamseyType};
use crate::graph6;

/// One vertex's term of the excess sum. `doubled` is twice the value
/// `e(F_v^-) - e(F_v^+) - d(n - 2d)/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexExcess {
    pub v: usize,
    pub degree: usize,
    pub minus_edges: usize,
    pub plus_edges: usize,
    pub doubled: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcessReport {
    /// Twice the total.
    pub total_doubled: i64,
    pub per_vertex: Vec<VertexExcess>,
}

impl ExcessReport {
    pub fn is_zero(&self) -> bool {
        self.total_doubled == 0
    }
}

pub fn excess(f: &Graph) -> ExcessReport {
    let n = f.order() as i64;
    let per_vertex: Vec<VertexExcess> = (0..f.order())
        .map(|v| {
            let nb = f.neighbors(v);
            let non = f.vertex_mask() & !nb & !bit(v);
            let d = nb.count_ones() as i64;
            let plus = f.edges_within(nb);
            let minus = f.edges_within(non);
            VertexExcess {
                v,
                degree: d as usize,
                minus_edges: minus,
                plus_edges: plus,
                doubled: 2 * (minus as i64 - plus as i64) - d * (n - 2 * d),
            }
        })
        .collect();
    ExcessReport {
        total_doubled: per_vertex.iter().map(|x| x.doubled).sum(),
        per_vertex,
    }
}

/// Reference neighbourhood edge counts for one degree class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceCounts {
    pub co_edge_ref: i64,
    pub edge_ref: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub v: usize,
    pub degree: usize,
    pub value: i64,
}

/// Checks `co_edge_ref - edge_ref - d(n - 2d)/2 = 1`, the condition under
/// which the per-vertex rewrite sums to the excess.
pub fn check_reference(n: usize, degree: usize, r: ReferenceCounts) -> Result<()> {
    let (n, d) = (n as i64, degree as i64);
    let lhs2 = 2 * r.co_edge_ref - 2 * r.edge_ref - d * (n - 2 * d);
    if lhs2 == 2 {
        return Ok(());
    }
    Err(Error::InconsistentReference {
        degree,
        detail: format!(
            "co_edge_ref - edge_ref - d(n-2d)/2 = {} for n={n}, expected 1",
            lhs2 as f64 / 2.0
        ),
    })
}

/// Per-vertex values `(e(F_v^-) - co_edge_ref) + (edge_ref - e(F_v^+)) + 1`.
/// The references for each degree present are validated first; the values
/// are then checked to sum to the excess.
pub fn excess_contributions(
    f: &Graph,
    offsets: &BTreeMap<usize, ReferenceCounts>,
) -> Result<Vec<Contribution>> {
    let report = excess(f);
    let mut out = Vec::with_capacity(f.order());
    for x in &report.per_vertex {
        let r = offsets
            .get(&x.degree)
            .ok_or_else(|| Error::Precondition(format!("no reference counts for degree {}", x.degree)))?;
        check_reference(f.order(), x.degree, *r)?;
        out.push(Contribution {
            v: x.v,
            degree: x.degree,
            value: (x.minus_edges as i64 - r.co_edge_ref) + (r.edge_ref - x.plus_edges as i64) + 1,
        });
    }
    let sum: i64 = out.iter().map(|c| c.value).sum();
    if 2 * sum != report.total_doubled {
        return Err(Error::Invariant(format!(
            "contributions sum to {sum}, excess is {}/2",
            report.total_doubled
        )));
    }
    Ok(out)
}

/// Known two-colour Ramsey numbers, looked up symmetrically.
#[derive(Clone, Debug, Default)]
pub struct RamseyTable(BTreeMap<(usize, usize), usize>);

impl RamseyTable {
    pub fn empty() -> Self {
        RamseyTable::default()
    }

    /// `R(1,t) = 1`, `R(2,t) = t` and the classical exact values.
    pub fn known() -> Self {
        let mut t = RamseyTable::default();
        for k in 1..=64 {
            t.set(1, k, 1);
            t.set(2, k, k);
        }
        for &(s, u, r) in &[
            (3, 3, 6),
            (3, 4, 9),
            (3, 5, 14),
            (3, 6, 18),
            (3, 7, 23),
            (3, 8, 28),
            (3, 9, 36),
            (4, 4, 18),
            (4, 5, 25),
        ] {
            t.set(s, u, r);
        }
        t
    }

    pub fn set(&mut self, s: usize, t: usize, value: usize) {
        self.0.insert((s.min(t), s.max(t)), value);
    }

    pub fn get(&self, s: usize, t: usize) -> Option<usize> {
        self.0.get(&(s.min(t), s.max(t))).copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBounds {
    pub lo: usize,
    pub hi: usize,
}

/// Degree window for any vertex of a graph in `R(s,t,m)`.
pub fn degree_bounds(rt: RamseyType, m: usize, table: &RamseyTable) -> Result<DegreeBounds> {
    let (s, t) = (rt.s, rt.t);
    let r_minus = table.get(s, t - 1).ok_or(Error::MissingTableEntry(s, t - 1))?;
    let r_plus = table.get(s - 1, t).ok_or(Error::MissingTableEntry(s - 1, t))?;
    Ok(DegreeBounds {
        lo: m.saturating_sub(r_minus),
        hi: (r_plus - 1).min(m.saturating_sub(1)),
    })
}

/// Whether `A_i` collects neighbours or non-neighbours of clique vertex `w_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeighborMode {
    Neighbors,
    NonNeighbors,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueNeighborReport {
    pub clique: Vec<usize>,
    pub sets: Vec<Vec<usize>>,
    /// `((i, j), |A_i ∩ A_j|)` for `i < j`.
    pub pairs: Vec<((usize, usize), usize)>,
    /// `((i, j, k), |A_i ∩ A_j ∩ A_k|)` for `i < j < k`.
    pub triples: Vec<((usize, usize, usize), usize)>,
    /// `intersection_sums[j-1]` is the sum of `|∩ A_i|` over all `j`-subsets.
    pub intersection_sums: Vec<u64>,
    /// `membership[k]` counts universe vertices lying in exactly `k` sets.
    pub membership: Vec<u64>,
    pub union_size: usize,
}

const MAX_PARTITION_CLIQUE: usize = 16;

pub fn clique_neighbor_partition(
    f: &Graph,
    clique: &[usize],
    universe: u64,
    mode: NeighborMode,
) -> Result<CliqueNeighborReport> {
    let n = f.order();
    if clique.len() > MAX_PARTITION_CLIQUE {
        return Err(Error::SizeLimit {
            order: clique.len(),
            limit: MAX_PARTITION_CLIQUE,
        });
    }
    let mut cmask = 0u64;
    for (i, &w) in clique.iter().enumerate() {
        if w >= n {
            return Err(Error::VertexOutOfRange { vertex: w, order: n });
        }
        if cmask & bit(w) != 0 {
            return Err(Error::Precondition(format!("vertex {w} repeated in clique")));
        }
        for &u in &clique[..i] {
            if !f.has_edge(u, w) {
                return Err(Error::Precondition(format!("clique vertices {u} and {w} are not adjacent")));
            }
        }
        cmask |= bit(w);
    }
    if universe & !f.vertex_mask() != 0 {
        return Err(Error::Precondition("universe has vertices outside the graph".into()));
    }
    if universe & cmask != 0 {
        return Err(Error::Precondition("universe meets the clique".into()));
    }
    let masks: Vec<u64> = clique
        .iter()
        .map(|&w| match mode {
            NeighborMode::Neighbors => f.neighbors(w) & universe,
            NeighborMode::NonNeighbors => universe & !f.neighbors(w),
        })
        .collect();
    let k = masks.len();
    let mut pairs = Vec::new();
    let mut triples = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            pairs.push(((i, j), (masks[i] & masks[j]).count_ones() as usize));
            for l in j + 1..k {
                triples.push(((i, j, l), (masks[i] & masks[j] & masks[l]).count_ones() as usize));
            }
        }
    }
    let mut intersection_sums = vec![0u64; k];
    for sub in 1u32..(1 << k) {
        let inter = Bits(sub as u64).fold(universe, |acc, i| acc & masks[i]);
        intersection_sums[sub.count_ones() as usize - 1] += inter.count_ones() as u64;
    }
    let mut membership = vec![0u64; k + 1];
    for x in Bits(universe) {
        membership[masks.iter().filter(|m| *m & bit(x) != 0).count()] += 1;
    }
    Ok(CliqueNeighborReport {
        clique: clique.to_vec(),
        sets: masks.iter().map(|&m| Bits(m).collect()).collect(),
        pairs,
        triples,
        intersection_sums,
        membership,
        union_size: masks.iter().fold(0, |a, m| a | m).count_ones() as usize,
    })
}

/// Some `k`-clique whose degrees in `g` sum to at most `degree_sum_max`.
pub fn find_clique_with_degree_bound(g: &Graph, k: usize, degree_sum_max: usize) -> Option<Vec<usize>> {
    let deg = g.degrees();
    fn go(
        g: &Graph,
        deg: &[usize],
        cand: u64,
        need: usize,
        sum: usize,
        max: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if need == 0 {
            return true;
        }
        if (cand.count_ones() as usize) < need {
            return false;
        }
        let min_deg = Bits(cand).map(|v| deg[v]).min().unwrap_or(0);
        if sum + need * min_deg > max {
            return false;
        }
        for v in Bits(cand) {
            if sum + deg[v] + (need - 1) * min_deg > max {
                continue;
            }
            chosen.push(v);
            // Only later vertices, so each clique is visited once.
            let later = cand & g.neighbors(v) & !((bit(v) << 1) - 1);
            if go(g, deg, later, need - 1, sum + deg[v], max, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(k);
    go(g, &deg, g.vertex_mask(), k, 0, degree_sum_max, &mut chosen).then_some(chosen)
}

/// Structural queries usable as catalog filters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    MinDegreeAtLeast(usize),
    MinDegreeAtMost(usize),
    MaxDegreeAtLeast(usize),
    MaxDegreeAtMost(usize),
    EdgesAtLeast(usize),
    EdgesAtMost(usize),
    ContainsInduced(Graph),
    LacksInduced(Graph),
    /// Two non-adjacent vertices, both of degree at most the bound.
    NonAdjacentPairDegreeAtMost(usize),
    /// A `k`-clique with degree sum at most the bound.
    CliqueDegreeSumAtMost { k: usize, max: usize },
}

impl Predicate {
    /// Parses `name=value`. Names: `min-degree-ge`, `min-degree-le`,
    /// `max-degree-ge`, `max-degree-le`, `edges-ge`, `edges-le`,
    /// `contains=<graph6>`, `lacks=<graph6>`, `nonadjacent-pair-le`,
    /// `clique-degree-sum=<k>:<max>`.
    pub fn parse(text: &str) -> Result<Predicate> {
        let (name, value) = text
            .split_once('=')
            .ok_or_else(|| Error::UnknownPredicate(text.to_string()))?;
        let num = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::UnknownPredicate(format!("{text}: expected a non-negative integer")))
        };
        Ok(match name.trim() {
            "min-degree-ge" => Predicate::MinDegreeAtLeast(num(value)?),
            "min-degree-le" => Predicate::MinDegreeAtMost(num(value)?),
            "max-degree-ge" => Predicate::MaxDegreeAtLeast(num(value)?),
            "max-degree-le" => Predicate::MaxDegreeAtMost(num(value)?),
            "edges-ge" => Predicate::EdgesAtLeast(num(value)?),
            "edges-le" => Predicate::EdgesAtMost(num(value)?),
            "contains" => Predicate::ContainsInduced(graph6::decode(value.as_bytes())?),
            "lacks" => Predicate::LacksInduced(graph6::decode(value.as_bytes())?),
            "nonadjacent-pair-le" => Predicate::NonAdjacentPairDegreeAtMost(num(value)?),
            "clique-degree-sum" => {
                let (k, max) = value
                    .split_once(':')
                    .ok_or_else(|| Error::UnknownPredicate(format!("{text}: expected k:max")))?;
                Predicate::CliqueDegreeSumAtMost { k: num(k)?, max: num(max)? }
            }
            _ => return Err(Error::UnknownPredicate(text.to_string())),
        })
    }

    pub fn holds(&self, g: &Graph) -> bool {
        match self {
            Predicate::MinDegreeAtLeast(d) => g.min_degree().is_none_or(|m| m >= *d),
            Predicate::MinDegreeAtMost(d) => g.min_degree().is_some_and(|m| m <= *d),
            Predicate::MaxDegreeAtLeast(d) => g.max_degree().is_some_and(|m| m >= *d),
            Predicate::MaxDegreeAtMost(d) => g.max_degree().is_none_or(|m| m <= *d),
            Predicate::EdgesAtLeast(e) => g.edge_count() >= *e,
            Predicate::EdgesAtMost(e) => g.edge_count() <= *e,
            Predicate::ContainsInduced(h) => contains_induced(g, h),
            Predicate::LacksInduced(h) => !contains_induced(g, h),
            Predicate::NonAdjacentPairDegreeAtMost(d) => {
                let low: u64 = (0..g.order()).filter(|&v| g.degree(v) <= *d).fold(0, |a, v| a | bit(v));
                Bits(low).any(|v| low & !g.neighbors(v) & !bit(v) != 0)
            }
            Predicate::CliqueDegreeSumAtMost { k, max } => find_clique_with_degree_bound(g, *k, *max).is_some(),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::MinDegreeAtLeast(d) => write!(f, "min-degree-ge={d}"),
            Predicate::MinDegreeAtMost(d) => write!(f, "min-degree-le={d}"),
            Predicate::MaxDegreeAtLeast(d) => write!(f, "max-degree-ge={d}"),
            Predicate::MaxDegreeAtMost(d) => write!(f, "max-degree-le={d}"),
            Predicate::EdgesAtLeast(e) => write!(f, "edges-ge={e}"),
            Predicate::EdgesAtMost(e) => write!(f, "edges-le={e}"),
            Predicate::ContainsInduced(h) => write!(f, "contains={}", graph6::encode_string(h)),
            Predicate::LacksInduced(h) => write!(f, "lacks={}", graph6::encode_string(h)),
            Predicate::NonAdjacentPairDegreeAtMost(d) => write!(f, "nonadjacent-pair-le={d}"),
            Predicate::CliqueDegreeSumAtMost { k, max } => write!(f, "clique-degree-sum={k}:{max}"),
        }
    }
}

/// Members of `cat` satisfying every predicate.
pub fn catalog_filter(cat: &Catalog, predicates: &[Predicate], workers: usize) -> Result<Catalog> {
    let keys: Vec<&[u8]> = cat.keys().collect();
    let keep: Vec<bool> = with_workers(workers, || {
        keys.par_iter()
            .map(|k| {
                let g = graph6::decode(k).expect("catalog keys decode");
                predicates.iter().all(|p| p.holds(&g))
            })
            .collect()
    });
    let (lo, hi) = cat.edge_bounds();
    let mut out = Catalog::with_bounds(cat.s(), cat.t(), cat.order(), lo, hi);
    let mut prov = cat.provenance.clone();
    let filters: Vec<String> = predicates.iter().map(ToString::to_string).collect();
    prov.params.insert("filter".into(), filters.join(","));
    out.provenance = prov;
    for (k, ok) in keys.into_iter().zip(keep) {
        if ok {
            out.insert_trusted(k.into())?;
        }
    }
    Ok(out)
}

/// Checks that every vertex split of every member lands in the expected
/// smaller classes; returns the first offending `(key, vertex)`.
pub fn check_vertex_splits(cat: &Catalog) -> Option<(String, usize)> {
    let (s, t) = (cat.s(), cat.t());
    for k in cat.keys() {
        let g = graph6::decode(k).expect("catalog keys decode");
        for v in 0..g.order() {
            let sp = vertex_split(&g, v).expect("vertex in range");
            let ok = crate::graph::is_ramsey_st(&sp.plus, s - 1, t) && crate::graph::is_ramsey_st(&sp.minus, s, t - 1);
            if !ok {
                return Some((String::from_utf8_lossy(k).into_owned(), v));
            }
        }
    }
    None
}
