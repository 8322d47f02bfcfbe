//! Complete catalogs of Ramsey graphs, built two independent ways: by
//! one-vertex extension with canonical deduplication, and by cone gluing an
//! apex neighbourhood `G ∈ R(s-1,t)` to a non-neighbourhood `H ∈ R(s,t-1)`.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_form_coloured, canonical_key, canonical_key_of_rows};
use crate::catalog::{Catalog, Provenance};
use crate::error::{Error, Result};
use crate::graph::{bit, clique_in, full_mask, is_ramsey_st, Bits, Graph, RamseyType, MAX_ORDER};
use crate::graph6;

/// Order and edge window of a census.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusSpec {
    pub rt: RamseyType,
    pub n: usize,
    pub e_min: Option<usize>,
    pub e_max: Option<usize>,
}

impl CensusSpec {
    pub fn new(rt: RamseyType, n: usize) -> Self {
        CensusSpec {
            rt,
            n,
            e_min: None,
            e_max: None,
        }
    }

    pub fn edges(mut self, e_min: Option<usize>, e_max: Option<usize>) -> Self {
        self.e_min = e_min;
        self.e_max = e_max;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Precondition("census order must be at least 1".into()));
        }
        if self.n > MAX_ORDER {
            return Err(Error::OrderTooLarge(self.n));
        }
        if let (Some(lo), Some(hi)) = (self.e_min, self.e_max) {
            if lo > hi {
                return Err(Error::Precondition(format!("edge bounds {lo} > {hi}")));
            }
        }
        Ok(())
    }
}

/// Attachment counts `(d_0, ..., d_{q-1})` of the non-neighbourhood vertices
/// into the apex neighbourhood, in the order the search placed them.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DegreeTuple(pub Vec<usize>);

impl DegreeTuple {
    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Explicit budgets; exceeding one aborts with [`Error::ResourceLimit`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    /// Largest catalog allowed at any intermediate or final order.
    pub max_members: Option<usize>,
    /// Wall-clock budget for the whole call.
    pub max_seconds: Option<f64>,
    /// Largest catalog file (graph6 lines) allowed at any order.
    pub max_bytes: Option<u64>,
}

/// One machine-readable progress record.
#[derive(Clone, Debug, Serialize)]
pub struct ProgressEvent {
    pub event: &'static str,
    pub s: usize,
    pub t: usize,
    pub order: usize,
    pub members: u64,
    pub candidates: u64,
    pub units_done: usize,
    pub units_total: usize,
    pub elapsed_ms: u128,
}

pub type ProgressFn<'a> = &'a (dyn Fn(&ProgressEvent) + Sync);

/// Shared execution settings.
#[derive(Clone, Default)]
pub struct CensusConfig<'a> {
    /// Worker threads; `0` is treated as `1`.
    pub workers: usize,
    pub limits: Limits,
    /// Journal directory for resumable runs.
    pub checkpoint: Option<PathBuf>,
    pub progress: Option<ProgressFn<'a>>,
}

impl<'a> CensusConfig<'a> {
    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn checkpoint(mut self, dir: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(dir.into());
        self
    }

    pub fn limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn progress(mut self, f: ProgressFn<'a>) -> Self {
        self.progress = Some(f);
        self
    }

    fn emit(&self, ev: ProgressEvent) {
        if let Some(f) = self.progress {
            f(&ev);
        }
    }

    fn run<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        with_workers(self.workers, f)
    }
}

/// Runs `f` on a dedicated pool of `workers` threads (at least one).
pub(crate) fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

/// Parents per journaled work unit.
const UNIT_SIZE: usize = 2048;
/// Work units merged into the running result at a time.
const UNITS_PER_BATCH: usize = 16;

type Key = Box<[u8]>;

/// Every `S ⊆ V(g)` such that joining a new vertex to exactly `S` keeps the
/// graph free of `s`-cliques and `t`-independent sets, assuming `g` already
/// is. Returned as bitmasks in a fixed order.
pub fn feasible_neighbourhoods(g: &Graph, s: usize, t: usize) -> Vec<u64> {
    let n = g.order();
    let adj = g.rows();
    let comp: Vec<u64> = (0..n).map(|v| !adj[v] & g.vertex_mask() & !bit(v)).collect();
    let mut out = Vec::new();
    if s < 2 || t < 2 {
        // The new vertex alone is already a forbidden clique or independent set.
        return out;
    }
    fn go(
        v: usize,
        n: usize,
        inside: u64,
        outside: u64,
        adj: &[u64],
        comp: &[u64],
        s: usize,
        t: usize,
        out: &mut Vec<u64>,
    ) {
        if v == n {
            out.push(inside);
            return;
        }
        // In S: no (s-1)-clique may appear inside S.
        if !clique_in(adj, adj[v] & inside, s - 2) {
            go(v + 1, n, inside | bit(v), outside, adj, comp, s, t, out);
        }
        // Outside S: no (t-1)-independent set may appear outside S.
        if !clique_in(comp, comp[v] & outside, t - 2) {
            go(v + 1, n, inside, outside | bit(v), adj, comp, s, t, out);
        }
    }
    go(0, n, 0, 0, adj, &comp, s, t, &mut out);
    out
}

fn extension_keys_st(g: &Graph, s: usize, t: usize) -> Vec<Key> {
    let n = g.order();
    let mut rows = [0u64; MAX_ORDER];
    rows[..n].copy_from_slice(g.rows());
    let mut keys: Vec<Key> = feasible_neighbourhoods(g, s, t)
        .into_iter()
        .map(|nbrs| {
            let mut ext = rows;
            for u in Bits(nbrs) {
                ext[u] |= bit(n);
            }
            ext[n] = nbrs;
            canonical_key_of_rows(&ext[..=n]).into_boxed_slice()
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys
}

/// All graphs on `|g|+1` vertices, up to isomorphism, in `R(s,t)` that
/// contain `g` as the subgraph induced by the first `|g|` vertices.
/// Returned canonically labelled, sorted by graph6 key.
pub fn extensions(g: &Graph, rt: RamseyType) -> Result<Vec<Graph>> {
    if g.order() >= MAX_ORDER {
        return Err(Error::OrderTooLarge(g.order() + 1));
    }
    if !is_ramsey_st(g, rt.s, rt.t) {
        return Err(Error::Precondition(format!("input graph is not in R{rt}")));
    }
    Ok(extension_keys_st(g, rt.s, rt.t)
        .iter()
        .map(|k| graph6::decode(k).expect("canonical keys decode"))
        .collect())
}

struct Journal {
    dir: PathBuf,
}

impl Journal {
    fn unit_path(&self, id: usize) -> PathBuf {
        self.dir.join(format!("unit-{id:06}.g6"))
    }

    fn load(&self, id: usize) -> Result<Option<Vec<Key>>> {
        let path = self.unit_path(id);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read(&path)?;
        Ok(Some(
            text.split(|&b| b == b'\n')
                .filter(|l| !l.is_empty())
                .map(|l| l.to_vec().into_boxed_slice())
                .collect(),
        ))
    }

    fn store(&self, id: usize, keys: &[Key]) -> Result<()> {
        let tmp = self.dir.join(format!("unit-{id:06}.tmp"));
        let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
        for k in keys {
            f.write_all(k)?;
            f.write_all(b"\n")?;
        }
        f.flush()?;
        drop(f);
        fs::rename(tmp, self.unit_path(id))?;
        Ok(())
    }
}

fn resource_error(reason: String, checkpoint: Option<&Path>) -> Error {
    Error::ResourceLimit {
        reason,
        checkpoint: checkpoint.map(Path::to_path_buf),
    }
}

fn check_time(cfg: &CensusConfig, start: Instant, ctx: &str) -> Result<()> {
    if let Some(limit) = cfg.limits.max_seconds {
        if start.elapsed().as_secs_f64() > limit {
            return Err(resource_error(
                format!("time budget of {limit}s exhausted during {ctx}"),
                cfg.checkpoint.as_deref(),
            ));
        }
    }
    Ok(())
}

fn check_members(cfg: &CensusConfig, members: usize, order: usize) -> Result<()> {
    if let Some(max) = cfg.limits.max_members {
        if members > max {
            return Err(resource_error(
                format!("order {order} has {members} members, above the limit of {max}"),
                cfg.checkpoint.as_deref(),
            ));
        }
    }
    if let Some(max) = cfg.limits.max_bytes {
        // One graph6 line per member: size byte, packed pairs, newline.
        let line = 2 + (order * order.saturating_sub(1) / 2).div_ceil(6);
        let bytes = (members * line) as u64;
        if bytes > max {
            return Err(resource_error(
                format!("order {order} needs {bytes} catalog bytes, above the limit of {max}"),
                cfg.checkpoint.as_deref(),
            ));
        }
    }
    Ok(())
}

/// Extends every member of `prev` by one vertex and returns the next level.
fn next_level(prev: &Catalog, cfg: &CensusConfig, start: Instant) -> Result<Catalog> {
    let (s, t, m) = (prev.s(), prev.t(), prev.order() + 1);
    let parents: Vec<&[u8]> = prev.keys().collect();
    let units: Vec<&[&[u8]]> = parents.chunks(UNIT_SIZE).collect();
    let journal = match &cfg.checkpoint {
        Some(dir) => {
            let d = dir.join(format!("partial-r{s}-{t}-n{m}"));
            fs::create_dir_all(&d)?;
            Some(Journal { dir: d })
        }
        None => None,
    };
    let mut merged: BTreeSet<Key> = BTreeSet::new();
    let mut candidates = 0u64;
    for (batch_idx, batch) in units.chunks(UNITS_PER_BATCH).enumerate() {
        check_time(cfg, start, &format!("order {m}"))?;
        let first_id = batch_idx * UNITS_PER_BATCH;
        let results: Vec<Result<(Vec<Key>, u64)>> = cfg.run(|| {
            batch
                .par_iter()
                .enumerate()
                .map(|(i, unit)| {
                    let id = first_id + i;
                    if let Some(j) = &journal {
                        if let Some(keys) = j.load(id)? {
                            return Ok((keys, 0));
                        }
                    }
                    let mut keys = Vec::new();
                    for parent in unit.iter() {
                        let g = graph6::decode(parent)?;
                        keys.extend(extension_keys_st(&g, s, t));
                    }
                    let raw = keys.len() as u64;
                    keys.sort_unstable();
                    keys.dedup();
                    if let Some(j) = &journal {
                        j.store(id, &keys)?;
                    }
                    Ok((keys, raw))
                })
                .collect()
        });
        for r in results {
            let (keys, raw) = r?;
            candidates += raw;
            merged.extend(keys);
        }
        check_members(cfg, merged.len(), m)?;
        cfg.emit(ProgressEvent {
            event: "units",
            s,
            t,
            order: m,
            members: merged.len() as u64,
            candidates,
            units_done: (first_id + batch.len()).min(units.len()),
            units_total: units.len(),
            elapsed_ms: start.elapsed().as_millis(),
        });
    }
    let mut next = Catalog::with_bounds(s, t, m, None, None);
    for key in merged {
        next.insert_trusted(key)?;
    }
    next.provenance = Provenance::new("census/extension")
        .with("s", s)
        .with("t", t)
        .with("n", m);
    if let Some(j) = journal {
        let dir = j.dir.parent().unwrap().join(next.dir_name());
        next.save_to(&dir)?;
        fs::remove_dir_all(&j.dir)?;
    }
    cfg.emit(ProgressEvent {
        event: "level",
        s,
        t,
        order: m,
        members: next.len() as u64,
        candidates,
        units_done: units.len(),
        units_total: units.len(),
        elapsed_ms: start.elapsed().as_millis(),
    });
    Ok(next)
}

/// The catalog `R(s,t,0)`: the null graph, unless a bound is below 1.
fn base_level(s: usize, t: usize) -> Catalog {
    let mut c = Catalog::with_bounds(s, t, 0, None, None);
    c.provenance = Provenance::new("census/extension").with("s", s).with("t", t).with("n", 0);
    if s >= 1 && t >= 1 {
        c.insert(&Graph::empty(0)).expect("null graph is Ramsey");
    }
    c
}

/// Walks the orders `0, 1, ..., max_n`, handing each complete catalog to
/// `visit`. Stops early (after reporting it) at the first empty order.
/// Raw bounds below 2 are allowed so degenerate cone bases can be built.
pub fn census_levels(
    s: usize,
    t: usize,
    max_n: usize,
    cfg: &CensusConfig,
    mut visit: impl FnMut(&Catalog) -> Result<()>,
) -> Result<()> {
    let start = Instant::now();
    let mut level = base_level(s, t);
    if let Some(dir) = &cfg.checkpoint {
        fs::create_dir_all(dir)?;
    }
    visit(&level)?;
    while level.order() < max_n && !level.is_empty() {
        // Completed levels saved by an earlier run are reloaded, not recomputed.
        let saved = cfg.checkpoint.as_ref().map(|dir| {
            dir.join(Catalog::with_bounds(s, t, level.order() + 1, None, None).dir_name())
        });
        level = match saved {
            Some(path) if path.join("meta.json").exists() => Catalog::load(&path)?,
            _ => next_level(&level, cfg, start)?,
        };
        check_members(cfg, level.len(), level.order())?;
        visit(&level)?;
    }
    Ok(())
}

fn census_st(
    s: usize,
    t: usize,
    n: usize,
    e_min: Option<usize>,
    e_max: Option<usize>,
    cfg: &CensusConfig,
) -> Result<Catalog> {
    let mut last = None;
    census_levels(s, t, n, cfg, |c| {
        if c.order() == n {
            last = Some(c.clone());
        }
        Ok(())
    })?;
    let full = last.unwrap_or_else(|| Catalog::with_bounds(s, t, n, None, None));
    let mut out = full.retain_graphs((e_min, e_max), |_| true);
    out.provenance = Provenance::new("census/extension")
        .with("s", s)
        .with("t", t)
        .with("n", n)
        .with("e_min", fmt_opt(e_min))
        .with("e_max", fmt_opt(e_max));
    Ok(out)
}

fn fmt_opt(x: Option<usize>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Exact catalog of `R(s,t,n)` within the spec's edge bounds.
pub fn census(spec: &CensusSpec, cfg: &CensusConfig) -> Result<Catalog> {
    spec.validate()?;
    census_st(spec.rt.s, spec.rt.t, spec.n, spec.e_min, spec.e_max, cfg)
}

/// Table-1-style rows for orders `1..=max_n`.
pub fn table(rt: RamseyType, max_n: usize, cfg: &CensusConfig) -> Result<Vec<crate::catalog::CatalogSummary>> {
    let mut rows = Vec::new();
    census_levels(rt.s, rt.t, max_n, cfg, |c| {
        if c.order() >= 1 {
            rows.push(c.summary());
        }
        Ok(())
    })?;
    let empty_from = rows.len() + 1;
    for n in empty_from..=max_n {
        rows.push(Catalog::with_bounds(rt.s, rt.t, n, None, None).summary());
    }
    Ok(rows)
}

/// Result of searching for the least order with an empty census.
#[derive(Clone, Debug)]
pub struct RamseyNumber {
    /// Least `n` with `R(s,t,n)` empty.
    pub value: usize,
    /// The nonempty catalog at order `value - 1`.
    pub witnesses: Catalog,
}

pub fn ramsey_number(rt: RamseyType, max_n: usize, cfg: &CensusConfig) -> Result<Option<RamseyNumber>> {
    let mut prev: Option<Catalog> = None;
    let mut found = None;
    census_levels(rt.s, rt.t, max_n, cfg, |c| {
        if c.is_empty() && found.is_none() {
            found = prev.take().map(|w| RamseyNumber {
                value: c.order(),
                witnesses: w,
            });
        } else {
            prev = Some(c.clone());
        }
        Ok(())
    })?;
    Ok(found)
}

/// Settings for cone gluing.
#[derive(Clone, Copy, Debug)]
pub struct ConeOptions {
    /// Partial graphs with at least this many attached vertices are
    /// deduplicated up to isomorphism before the next vertex is attached.
    pub dedup_from: usize,
}

impl Default for ConeOptions {
    fn default() -> Self {
        ConeOptions { dedup_from: 4 }
    }
}

/// Next-vertex rule, recorded in catalog provenance.
pub const CONE_ORDER_RULE: &str =
    "max feasible attachment degree, then edges into placed prefix, then lowest index";

#[derive(Clone)]
struct ConeState {
    rows: Vec<u64>,
    comp: Vec<u64>,
    /// Final vertex index of each placed H vertex, `usize::MAX` if unplaced.
    slot: Vec<usize>,
    placed: usize,
    edges: usize,
    tuple: DegreeTuple,
}

struct ConeSearch<'a> {
    h: &'a Graph,
    s: usize,
    t: usize,
    p: usize,
    total: usize,
    e_min: usize,
    h_edges: usize,
    /// Subsets of V(G) that pass the G-only feasibility test, largest first.
    g_sets: Vec<u64>,
}

impl ConeSearch<'_> {
    /// H vertex `hv`'s neighbours among the already-placed H vertices, as
    /// final vertex indices.
    fn placed_h_nbrs(&self, st: &ConeState, hv: usize) -> u64 {
        Bits(self.h.neighbors(hv))
            .filter(|&u| st.slot[u] != usize::MAX)
            .fold(0, |acc, u| acc | bit(st.slot[u]))
    }

    fn candidates(&self, st: &ConeState, hv: usize) -> Vec<u64> {
        let cur = full_mask(self.p + 1 + st.placed);
        let hn = self.placed_h_nbrs(st, hv);
        self.g_sets
            .iter()
            .map(|&x| x | hn)
            .filter(|&nbrs| {
                !clique_in(&st.rows, nbrs, self.s - 1)
                    && !clique_in(&st.comp, cur & !nbrs, self.t - 1)
            })
            .collect()
    }

    fn attach(&self, st: &ConeState, hv: usize, nbrs: u64) -> ConeState {
        let v = self.p + 1 + st.placed;
        let cur = full_mask(v);
        let mut next = st.clone();
        for u in Bits(nbrs) {
            next.rows[u] |= bit(v);
        }
        for u in Bits(cur & !nbrs) {
            next.comp[u] |= bit(v);
        }
        next.rows[v] = nbrs;
        next.comp[v] = cur & !nbrs;
        next.slot[hv] = v;
        next.placed += 1;
        next.edges += nbrs.count_ones() as usize;
        next.tuple.0.push((nbrs & full_mask(self.p)).count_ones() as usize);
        next
    }

    /// Picks the next H vertex and its candidate neighbourhoods, or `None`
    /// when the state cannot reach the edge floor.
    fn expand(&self, st: &ConeState) -> Option<(usize, Vec<u64>)> {
        let mut best: Option<(usize, usize, usize, Vec<u64>)> = None;
        let mut bound = st.edges;
        for hv in 0..self.h.order() {
            if st.slot[hv] != usize::MAX {
                continue;
            }
            let cands = self.candidates(st, hv);
            let hn = self.placed_h_nbrs(st, hv);
            let gmask = full_mask(self.p);
            let max_d = cands.iter().map(|c| (c & gmask).count_ones() as usize).max();
            let Some(max_d) = max_d else {
                return None;
            };
            bound += max_d;
            let prefix = hn.count_ones() as usize;
            let better = match &best {
                None => true,
                Some((_, bd, bp, _)) => (max_d, prefix) > (*bd, *bp),
            };
            if better {
                best = Some((hv, max_d, prefix, cands));
            }
        }
        // Edges inside H are fixed; count the ones not yet placed.
        let placed_h_edges: usize = (0..self.h.order())
            .filter(|&u| st.slot[u] != usize::MAX)
            .map(|u| {
                Bits(self.h.neighbors(u))
                    .filter(|&w| w > u && st.slot[w] != usize::MAX)
                    .count()
            })
            .sum();
        bound += self.h_edges - placed_h_edges;
        if bound < self.e_min {
            return None;
        }
        best.map(|(hv, _, _, c)| (hv, c))
    }

    fn dedup_key(&self, st: &ConeState) -> Vec<u8> {
        let m = self.p + 1 + st.placed;
        let g = Graph::from_rows_unchecked(st.rows[..m].to_vec());
        let mut colours = vec![0u32; m];
        colours[self.p] = 1;
        for (hv, &slot) in st.slot.iter().enumerate() {
            if slot != usize::MAX {
                colours[slot] = 2 + hv as u32;
            }
        }
        canonical_form_coloured(&g, &colours).key
    }
}

/// Statistics of one cone gluing.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConeStats {
    pub states: u64,
    pub merged: u64,
    pub completed: u64,
}

/// All `F ∈ R(s,t)` on `|g|+|h|+1` vertices with `e(F) ≥ e_min` whose apex
/// (vertex `|g|`) has neighbourhood exactly `g` and non-neighbourhood `h`.
pub fn cone_glue(g: &Graph, h: &Graph, rt: RamseyType, e_min: usize) -> Result<Catalog> {
    cone_glue_with(g, h, rt.s, rt.t, e_min, ConeOptions::default()).map(|(c, _)| c)
}

/// [`cone_glue`] over raw bounds, with options and statistics.
pub fn cone_glue_with(
    g: &Graph,
    h: &Graph,
    s: usize,
    t: usize,
    e_min: usize,
    opts: ConeOptions,
) -> Result<(Catalog, ConeStats)> {
    if s < 2 || t < 2 {
        return Err(Error::Precondition(format!("cone gluing needs s,t >= 2, got ({s},{t})")));
    }
    if !is_ramsey_st(g, s - 1, t) {
        return Err(Error::Precondition(format!("neighbourhood graph is not in R({},{t})", s - 1)));
    }
    if !is_ramsey_st(h, s, t - 1) {
        return Err(Error::Precondition(format!("non-neighbourhood graph is not in R({s},{})", t - 1)));
    }
    let (p, q) = (g.order(), h.order());
    let total = p + q + 1;
    if total > MAX_ORDER {
        return Err(Error::OrderTooLarge(total));
    }
    let mut out = Catalog::with_bounds(s, t, total, (e_min > 0).then_some(e_min), None);
    out.provenance = Provenance::new("census/cone")
        .with("s", s)
        .with("t", t)
        .with("n", total)
        .with("e_min", e_min)
        .with("order_rule", CONE_ORDER_RULE)
        .with("dedup_from", opts.dedup_from);

    // Base: G on 0..p, apex p joined to all of G.
    let mut rows = vec![0u64; total];
    rows[..p].copy_from_slice(g.rows());
    for (u, row) in rows.iter_mut().enumerate().take(p) {
        *row |= bit(p);
        let _ = u;
    }
    rows[p] = full_mask(p);
    let comp: Vec<u64> = (0..total)
        .map(|v| if v <= p { !rows[v] & full_mask(p + 1) & !bit(v) } else { 0 })
        .collect();

    let mut g_sets = feasible_neighbourhoods(g, s, t);
    g_sets.sort_by_key(|x| std::cmp::Reverse(x.count_ones()));
    let search = ConeSearch {
        h,
        s,
        t,
        p,
        total,
        e_min,
        h_edges: h.edge_count(),
        g_sets,
    };
    let base_edges = g.edge_count() + p;
    let mut stats = ConeStats::default();
    let mut level = vec![ConeState {
        rows,
        comp,
        slot: vec![usize::MAX; q],
        placed: 0,
        edges: base_edges,
        tuple: DegreeTuple::default(),
    }];
    for depth in 0..q {
        let mut next: Vec<ConeState> = Vec::new();
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        for st in &level {
            stats.states += 1;
            let Some((hv, cands)) = search.expand(st) else {
                continue;
            };
            for nbrs in cands {
                let child = search.attach(st, hv, nbrs);
                if depth + 1 >= opts.dedup_from.max(1) && depth + 1 < q {
                    if !seen.insert(search.dedup_key(&child)) {
                        stats.merged += 1;
                        continue;
                    }
                }
                next.push(child);
            }
        }
        level = next;
    }
    for st in level {
        debug_assert_eq!(st.placed, q);
        if st.edges < e_min {
            continue;
        }
        debug_assert_eq!(st.tuple.0.len(), q);
        stats.completed += 1;
        let key = canonical_key_of_rows(&st.rows[..search.total]);
        out.insert_canonical(&key)?;
    }
    Ok((out, stats))
}

/// `R(s,t,n, e ≥ e_min)` as the union of cone gluings over every split
/// `p + q + 1 = n`, using extension censuses for the bases.
pub fn cone_census(rt: RamseyType, n: usize, e_min: usize, cfg: &CensusConfig) -> Result<Catalog> {
    if n == 0 {
        return Err(Error::Precondition("census order must be at least 1".into()));
    }
    let (s, t) = (rt.s, rt.t);
    let quiet = CensusConfig {
        workers: cfg.workers,
        limits: cfg.limits,
        checkpoint: None,
        progress: None,
    };
    let mut units: Vec<(Key, Key)> = Vec::new();
    for p in 0..n {
        let q = n - 1 - p;
        let gs = census_st(s - 1, t, p, None, None, &quiet)?;
        let hs = census_st(s, t - 1, q, None, None, &quiet)?;
        for gk in gs.keys() {
            for hk in hs.keys() {
                units.push((gk.into(), hk.into()));
            }
        }
    }
    let journal = match &cfg.checkpoint {
        Some(dir) => {
            let d = dir.join(format!("partial-cone-r{s}-{t}-n{n}-e{e_min}"));
            fs::create_dir_all(&d)?;
            Some(Journal { dir: d })
        }
        None => None,
    };
    let start = Instant::now();
    let results: Vec<Result<Vec<Key>>> = cfg.run(|| {
        units
            .par_iter()
            .enumerate()
            .map(|(id, (gk, hk))| {
                if let Some(j) = &journal {
                    if let Some(keys) = j.load(id)? {
                        return Ok(keys);
                    }
                }
                let g = graph6::decode(gk)?;
                let h = graph6::decode(hk)?;
                let (cat, _) = cone_glue_with(&g, &h, s, t, e_min, ConeOptions::default())?;
                let keys: Vec<Key> = cat.keys().map(Into::into).collect();
                if let Some(j) = &journal {
                    j.store(id, &keys)?;
                }
                Ok(keys)
            })
            .collect()
    });
    let mut out = Catalog::with_bounds(s, t, n, (e_min > 0).then_some(e_min), None);
    for r in results {
        for k in r? {
            out.insert_canonical(&k)?;
        }
    }
    check_time(cfg, start, "cone census")?;
    out.provenance = Provenance::new("census/cone")
        .with("s", s)
        .with("t", t)
        .with("n", n)
        .with("e_min", e_min)
        .with("order_rule", CONE_ORDER_RULE);
    cfg.emit(ProgressEvent {
        event: "cone",
        s,
        t,
        order: n,
        members: out.len() as u64,
        candidates: 0,
        units_done: units.len(),
        units_total: units.len(),
        elapsed_ms: start.elapsed().as_millis(),
    });
    Ok(out)
}

/// Canonical key of a graph, for callers assembling catalogs by hand.
pub fn key_of(g: &Graph) -> Vec<u8> {
    canonical_key(g)
}
