//! Pointed graphs, gluing along an edge, seeding of the extra vertex set C1,
//! and phased campaigns over schedules of pointed-graph pairs.
//!
//! Layout of a gluing problem on `a`, `b`, `K`, `A`, `B`, `C1`: `b` is
//! adjacent to `{a} ∪ K ∪ A` (its neighbourhood is `G`), `a` is adjacent to
//! `{b} ∪ K ∪ B` (its neighbourhood is `H`), and `C1` is adjacent to neither.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::RamseyTable;
use crate::canon::{automorphism_group, automorphisms, canonical_form_coloured, canonical_key, isomorphism};
use crate::census::with_workers;
use crate::error::{Error, Result};
use crate::graph::{bit, contains_induced, full_mask, is_ramsey_st, Bits, Graph, RamseyType, MAX_ORDER};
use crate::graph6;
use crate::sat::{self, Budget, Mode, SolveStats, Status};

/// Ordering used to rank pointed graphs, recorded in reports.
pub const DIFFICULTY_RULE: &str = "|K| descending, then e(K) ascending, then |Aut K| descending, then point ascending";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Difficulty {
    pub k_order: usize,
    pub k_edges: usize,
    pub k_automorphisms: u128,
}

impl Difficulty {
    /// Smaller sorts first, so the hardest pointed graph has the least key.
    fn sort_key(&self) -> (std::cmp::Reverse<usize>, usize, std::cmp::Reverse<u128>) {
        (
            std::cmp::Reverse(self.k_order),
            self.k_edges,
            std::cmp::Reverse(self.k_automorphisms),
        )
    }
}

/// A graph with a distinguished vertex `a` and its neighbourhood `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedGraph {
    pub g: Graph,
    pub a: usize,
    pub k: Graph,
    /// `k_map[i]` is the vertex of `g` that is vertex `i` of `k`.
    pub k_map: Vec<usize>,
    pub difficulty: Difficulty,
    /// Position in the hardest-first order of the pointed graphs of `g`.
    pub rank: usize,
}

impl PointedGraph {
    pub fn new(g: Graph, a: usize) -> Result<Self> {
        if a >= g.order() {
            return Err(Error::VertexOutOfRange { vertex: a, order: g.order() });
        }
        let k_map: Vec<usize> = Bits(g.neighbors(a)).collect();
        let k = g.induced(&k_map);
        let difficulty = Difficulty {
            k_order: k.order(),
            k_edges: k.edge_count(),
            k_automorphisms: automorphism_group(&k, &vec![0; k.order()]).order,
        };
        Ok(PointedGraph { g, a, k, k_map, difficulty, rank: 0 })
    }

    /// Key identifying the pointed graph up to isomorphisms fixing the point.
    pub fn pointed_key(&self) -> Vec<u8> {
        let mut colours = vec![0u32; self.g.order()];
        colours[self.a] = 1;
        canonical_form_coloured(&self.g, &colours).key
    }
}

/// The pointed graphs of `g`, hardest first, after dropping the `k - 1`
/// hardest and then removing isomorphic copies. `P(G)` is `k = 1`.
pub fn pointed_graphs(g: &Graph, k: usize) -> Result<Vec<PointedGraph>> {
    if k == 0 {
        return Err(Error::Precondition("drop count k must be at least 1".into()));
    }
    let mut all: Vec<PointedGraph> = (0..g.order())
        .map(|a| PointedGraph::new(g.clone(), a))
        .collect::<Result<_>>()?;
    all.sort_by_key(|p| (p.difficulty.sort_key(), p.a));
    for (i, p) in all.iter_mut().enumerate() {
        p.rank = i;
    }
    let mut seen = BTreeSet::new();
    Ok(all
        .into_iter()
        .skip(k - 1)
        .filter(|p| seen.insert(p.pointed_key()))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    PointA,
    PointB,
    K,
    A,
    B,
    C1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairState {
    Edge,
    NonEdge,
    Free,
}

/// A gluing configuration: fixed edges, fixed non-edges and free pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueProblem {
    pub rt: RamseyType,
    pub roles: Vec<Role>,
    fixed: Graph,
    free: Vec<u64>,
    /// `g_map[x]` is the problem vertex of vertex `x` of the first graph.
    pub g_map: Vec<usize>,
    /// `h_map[y]` is the problem vertex of vertex `y` of the second graph.
    pub h_map: Vec<usize>,
    /// Vertices whose incident free pairs are branched on first.
    pub priority: Vec<usize>,
    /// Seed rules applied, in order.
    pub seeds: Vec<String>,
    /// Seed rules skipped, with the reason.
    pub notices: Vec<String>,
}

impl GlueProblem {
    pub fn order(&self) -> usize {
        self.roles.len()
    }

    pub fn fixed(&self) -> &Graph {
        &self.fixed
    }

    pub fn free_mask(&self, u: usize) -> u64 {
        self.free[u]
    }

    pub fn state(&self, u: usize, v: usize) -> PairState {
        if self.free[u] & bit(v) != 0 {
            PairState::Free
        } else if self.fixed.has_edge(u, v) {
            PairState::Edge
        } else {
            PairState::NonEdge
        }
    }

    /// Free pairs `(u, v)`, `u < v`, in lexicographic order.
    pub fn free_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.order() {
            for v in Bits(self.free[u] & !full_mask(u + 1)) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn free_count(&self) -> usize {
        self.free.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn vertices(&self, role: Role) -> Vec<usize> {
        (0..self.order()).filter(|&v| self.roles[v] == role).collect()
    }

    pub fn c1(&self) -> Vec<usize> {
        self.vertices(Role::C1)
    }

    /// Order of the glued part `G ∪_K H`, without C1.
    pub fn base_order(&self) -> usize {
        self.order() - self.c1().len()
    }

    /// Turns a free pair into a fixed edge or non-edge.
    pub fn fix(&mut self, u: usize, v: usize, edge: bool) -> Result<()> {
        if self.free[u] & bit(v) == 0 {
            return Err(Error::Precondition(format!("pair ({u},{v}) is not free")));
        }
        self.free[u] &= !bit(v);
        self.free[v] &= !bit(u);
        self.fixed.set_edge(u, v, edge);
        Ok(())
    }

    /// The graph obtained by switching on exactly the free pairs in `on`.
    pub fn graph_with(&self, on: &[(usize, usize)]) -> Graph {
        let mut g = self.fixed.clone();
        for &(u, v) in on {
            debug_assert!(self.free[u] & bit(v) != 0);
            g.add_edge(u, v);
        }
        g
    }

    /// Canonical hash of the problem up to role-preserving isomorphism.
    /// Problems of order above 32 fall back to the labelled encoding.
    pub fn canonical_hash(&self) -> Vec<u8> {
        let n = self.order();
        if 2 * n > MAX_ORDER {
            let mut key = graph6::encode(&self.fixed);
            key.push(b'|');
            key.extend(graph6::encode(&Graph::from_rows_unchecked(self.free.clone())));
            return key;
        }
        // Layer 0 carries fixed edges, layer 1 free pairs, joined by rungs.
        let mut g = Graph::empty(2 * n);
        for (u, v) in self.fixed.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in self.free_pairs() {
            g.add_edge(n + u, n + v);
        }
        for v in 0..n {
            g.add_edge(v, n + v);
        }
        let mut colours: Vec<u32> = self.roles.iter().map(|&r| r as u32).collect();
        colours.extend(self.roles.iter().map(|&r| 8 + r as u32));
        canonical_form_coloured(&g, &colours).key
    }

    /// Fixed-part violations present before any free pair is decided.
    pub fn fixed_violation(&self) -> bool {
        sat::encode_with(self, sat::EncodeOptions { symmetry_breaking: false }).trivially_unsat()
    }
}

fn check_k_iso(pg1: &PointedGraph, pg2: &PointedGraph, iso: &[usize]) -> Result<()> {
    let k = pg1.k.order();
    if pg2.k.order() != k || iso.len() != k {
        return Err(Error::Precondition("overlap graphs have different orders".into()));
    }
    let mut seen = 0u64;
    for &j in iso {
        if j >= k || seen & bit(j) != 0 {
            return Err(Error::Precondition("iso is not a permutation".into()));
        }
        seen |= bit(j);
    }
    for u in 0..k {
        for v in u + 1..k {
            if pg1.k.has_edge(u, v) != pg2.k.has_edge(iso[u], iso[v]) {
                return Err(Error::Precondition(format!("iso does not preserve the pair ({u},{v})")));
            }
        }
    }
    Ok(())
}

/// The configuration obtained by identifying vertex `i` of `pg1.k` with
/// vertex `iso[i]` of `pg2.k`, joined by the edge `ab`, with
/// `target_n - (|G| + |H| - |K|)` further vertices in C1.
pub fn build_glue_problem(
    pg1: &PointedGraph,
    pg2: &PointedGraph,
    iso: &[usize],
    target_n: usize,
    rt: RamseyType,
) -> Result<GlueProblem> {
    check_k_iso(pg1, pg2, iso)?;
    let k = pg1.k.order();
    let (gn, hn) = (pg1.g.order(), pg2.g.order());
    let base = gn + hn - k;
    if target_n < base {
        return Err(Error::Precondition(format!(
            "target order {target_n} is below |G|+|H|-|K| = {base}"
        )));
    }
    if target_n > MAX_ORDER {
        return Err(Error::OrderTooLarge(target_n));
    }
    let mut roles = vec![Role::PointA, Role::PointB];
    roles.extend(std::iter::repeat(Role::K).take(k));
    let mut g_map = vec![usize::MAX; gn];
    let mut h_map = vec![usize::MAX; hn];
    g_map[pg1.a] = 0;
    h_map[pg2.a] = 1;
    for i in 0..k {
        g_map[pg1.k_map[i]] = 2 + i;
        h_map[pg2.k_map[iso[i]]] = 2 + i;
    }
    for x in 0..gn {
        if g_map[x] == usize::MAX {
            g_map[x] = roles.len();
            roles.push(Role::A);
        }
    }
    for y in 0..hn {
        if h_map[y] == usize::MAX {
            h_map[y] = roles.len();
            roles.push(Role::B);
        }
    }
    roles.extend(std::iter::repeat(Role::C1).take(target_n - base));
    let n = roles.len();
    let mut fixed = Graph::empty(n);
    for (x, y) in pg1.g.edges() {
        fixed.add_edge(g_map[x], g_map[y]);
    }
    for (x, y) in pg2.g.edges() {
        fixed.add_edge(h_map[x], h_map[y]);
    }
    for &v in &g_map {
        fixed.add_edge(1, v);
    }
    for &v in &h_map {
        fixed.add_edge(0, v);
    }
    let mut free = vec![0u64; n];
    let mut open = |u: usize, v: usize| {
        free[u] |= bit(v);
        free[v] |= bit(u);
    };
    for u in 0..n {
        for v in u + 1..n {
            let pair = (roles[u], roles[v]);
            let is_free = matches!(
                pair,
                (Role::A, Role::B)
                    | (Role::A, Role::C1)
                    | (Role::B, Role::C1)
                    | (Role::C1, Role::C1)
                    | (Role::K, Role::C1)
            );
            if is_free {
                open(u, v);
            }
        }
    }
    Ok(GlueProblem {
        rt,
        roles,
        fixed,
        free,
        g_map,
        h_map,
        priority: Vec::new(),
        seeds: Vec::new(),
        notices: Vec::new(),
    })
}

/// One problem per automorphism of `K` composed with a fixed isomorphism,
/// with role-preserving isomorphic duplicates removed. Empty when the two
/// overlap graphs are not isomorphic.
pub fn glue_problems(
    pg1: &PointedGraph,
    pg2: &PointedGraph,
    target_n: usize,
    rt: RamseyType,
) -> Result<Vec<GlueProblem>> {
    let Some(iso0) = isomorphism(&pg1.k, &pg2.k) else {
        return Ok(Vec::new());
    };
    let auts = automorphisms(&pg1.k)?;
    if !auts.complete {
        return Err(Error::SizeLimit {
            order: pg1.k.order(),
            limit: crate::canon::AUTOMORPHISM_ORDER_LIMIT,
        });
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for sigma in &auts.perms {
        let iso: Vec<usize> = sigma.iter().map(|&x| iso0[x]).collect();
        let p = build_glue_problem(pg1, pg2, &iso, target_n, rt)?;
        if seen.insert(p.canonical_hash()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Facts about the target class that seed rules rely on.
#[derive(Clone, Debug)]
pub struct SeedContext {
    /// Order of the graphs being ruled out; fixes `|C|`.
    pub full_order: Option<usize>,
    /// Minimum degree of every vertex in the target class.
    pub degree_target: usize,
    pub table: RamseyTable,
}

impl SeedContext {
    fn c_size(&self, p: &GlueProblem) -> Option<usize> {
        self.full_order.and_then(|n| n.checked_sub(p.base_order()))
    }
}

/// Assumptions about C1 that are justified by the structure of the target
/// class. Parameters are data; [`SeedRule::standard`] gives defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum SeedRule {
    /// `|C1| = 1`: C1 is a neighbour of `w`, the K vertex of largest degree
    /// still below the target.
    AdjacentToW,
    /// `|C1| = 2`, `|C| >= min_c`: C1 is an edge with both ends adjacent to
    /// `v` (least-degree K vertex) if `k_min <= both_ends_max`, or one end if
    /// `k_min <= one_end_max`.
    EdgeNearMinVertex {
        min_c: usize,
        both_ends_max: usize,
        one_end_max: Option<usize>,
    },
    /// `|C1| = 3`, `|C| >= min_c`: C1 is a triangle, with one edge to `v`
    /// if `k_min <= v_edge_max`.
    Triangle { min_c: usize, v_edge_max: Option<usize> },
    /// `|C1| = |gadget|`, `|C| >= min_c`: C1 induces `gadget` (graph6).
    Gadget { name: String, gadget: String, min_c: usize },
    /// The K vertex of largest degree `d` is joined to `min(|C1|, target - d)`
    /// vertices of C1, and its free pairs are branched first.
    DegreeTarget { target: usize },
}

impl fmt::Display for SeedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).expect("serialisable"))
    }
}

/// Two triangles sharing an edge.
pub fn two_triangles() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap()
}

impl SeedRule {
    /// Rules whose thresholds follow from the context: a vertex of degree
    /// `k` in K needs `target - k` neighbours in C, and C has no
    /// `(t-1)`-independent set because `a` is joined to none of it.
    pub fn standard(rt: RamseyType, ctx: &SeedContext) -> Vec<SeedRule> {
        let target = ctx.degree_target;
        let mut rules = vec![
            SeedRule::AdjacentToW,
            SeedRule::EdgeNearMinVertex {
                min_c: rt.t - 1,
                both_ends_max: target.saturating_sub(rt.t - 1),
                one_end_max: None,
            },
        ];
        if let Some(r) = ctx.table.get(3, rt.t - 1) {
            rules.push(SeedRule::Triangle { min_c: r, v_edge_max: None });
        }
        rules
    }

    /// The thresholds used for `R(5,5,46)`.
    pub fn published() -> Vec<SeedRule> {
        vec![
            SeedRule::AdjacentToW,
            SeedRule::EdgeNearMinVertex { min_c: 4, both_ends_max: 17, one_end_max: Some(19) },
            SeedRule::Triangle { min_c: 9, v_edge_max: Some(14) },
            SeedRule::Gadget {
                name: "two-triangles".into(),
                gadget: graph6::encode_string(&two_triangles()),
                min_c: 13,
            },
        ]
    }

    /// Checks a gadget rule against a catalog of the class `C` lives in:
    /// every member must contain the gadget as an induced subgraph.
    /// Returns the graph6 of the first member that does not.
    pub fn validate_gadget(&self, members: impl IntoIterator<Item = Graph>) -> Result<Option<String>> {
        let SeedRule::Gadget { gadget, .. } = self else {
            return Ok(None);
        };
        let h = graph6::decode(gadget.as_bytes())?;
        Ok(members
            .into_iter()
            .find(|g| !contains_induced(g, &h))
            .map(|g| graph6::encode_string(&g)))
    }
}

/// Degrees of K vertices counting only fixed edges outside C1.
fn k_degrees(p: &GlueProblem) -> Vec<(usize, usize)> {
    let outside = p.vertices(Role::C1).iter().fold(full_mask(p.order()), |m, &c| m & !bit(c));
    p.vertices(Role::K)
        .into_iter()
        .map(|v| (v, (p.fixed().neighbors(v) & outside).count_ones() as usize))
        .collect()
}

fn apply_rule(p: &mut GlueProblem, rule: &SeedRule, ctx: &SeedContext) -> std::result::Result<(), String> {
    let c1 = p.c1();
    let kd = k_degrees(p);
    let vmin = kd.iter().min_by_key(|&&(v, d)| (d, v)).copied();
    let c_size = ctx.c_size(p);
    let need_c = |min_c: usize| match c_size {
        Some(c) if c >= min_c => Ok(()),
        Some(c) => Err(format!("|C| = {c} is below {min_c}")),
        None => Err("|C| unknown without a full order".to_string()),
    };
    let need_c1 = |k: usize| {
        if c1.len() == k {
            Ok(())
        } else {
            Err(format!("|C1| = {} but the rule needs {k}", c1.len()))
        }
    };
    let free_pairs_ok = |p: &GlueProblem, pairs: &[(usize, usize)]| {
        pairs.iter().all(|&(u, v)| p.state(u, v) == PairState::Free)
    };
    let fix_all = |p: &mut GlueProblem, pairs: &[(usize, usize, bool)]| -> std::result::Result<(), String> {
        if !free_pairs_ok(p, &pairs.iter().map(|&(u, v, _)| (u, v)).collect::<Vec<_>>()) {
            return Err("a pair it would fix is already fixed".into());
        }
        for &(u, v, e) in pairs {
            p.fix(u, v, e).map_err(|e| e.to_string())?;
        }
        Ok(())
    };
    match rule {
        SeedRule::AdjacentToW => {
            need_c1(1)?;
            let w = kd
                .iter()
                .filter(|&&(_, d)| d < ctx.degree_target)
                .max_by_key(|&&(v, d)| (d, std::cmp::Reverse(v)))
                .map(|&(v, _)| v)
                .ok_or("no K vertex below the degree target")?;
            fix_all(p, &[(w, c1[0], true)])
        }
        SeedRule::EdgeNearMinVertex { min_c, both_ends_max, one_end_max } => {
            need_c1(2)?;
            need_c(*min_c)?;
            let (v, kmin) = vmin.ok_or("K is empty")?;
            if kmin <= *both_ends_max {
                fix_all(p, &[(c1[0], c1[1], true), (v, c1[0], true), (v, c1[1], true)])
            } else if one_end_max.is_some_and(|m| kmin <= m) {
                fix_all(p, &[(c1[0], c1[1], true), (v, c1[0], true)])
            } else {
                Err(format!("k_min = {kmin} is above the thresholds"))
            }
        }
        SeedRule::Triangle { min_c, v_edge_max } => {
            need_c1(3)?;
            need_c(*min_c)?;
            let mut pairs = vec![(c1[0], c1[1], true), (c1[0], c1[2], true), (c1[1], c1[2], true)];
            if let (Some(m), Some((v, kmin))) = (v_edge_max, vmin) {
                if kmin <= *m {
                    pairs.push((v, c1[0], true));
                }
            }
            fix_all(p, &pairs)
        }
        SeedRule::Gadget { gadget, min_c, .. } => {
            let h = graph6::decode(gadget.as_bytes()).map_err(|e| e.to_string())?;
            need_c1(h.order())?;
            need_c(*min_c)?;
            let mut pairs = Vec::new();
            for i in 0..h.order() {
                for j in i + 1..h.order() {
                    pairs.push((c1[i], c1[j], h.has_edge(i, j)));
                }
            }
            fix_all(p, &pairs)
        }
        SeedRule::DegreeTarget { target } => {
            if c1.is_empty() {
                return Err("C1 is empty".into());
            }
            let (v, d) = kd
                .iter()
                .max_by_key(|&&(v, d)| (d, std::cmp::Reverse(v)))
                .copied()
                .ok_or("K is empty")?;
            let want = c1.len().min(target.saturating_sub(d));
            let chosen: Vec<(usize, usize, bool)> = c1
                .iter()
                .filter(|&&c| p.state(v, c) == PairState::Free)
                .take(want)
                .map(|&c| (v, c, true))
                .collect();
            if chosen.len() < want {
                return Err("not enough free pairs from v into C1".into());
            }
            fix_all(p, &chosen)?;
            p.priority.push(v);
            Ok(())
        }
    }
}

/// Applies the rules in order. A rule whose precondition fails is skipped
/// and noted in `notices`.
pub fn seed_c1(p: &GlueProblem, rules: &[SeedRule], ctx: &SeedContext) -> GlueProblem {
    let mut out = p.clone();
    for rule in rules {
        let mut trial = out.clone();
        match apply_rule(&mut trial, rule, ctx) {
            Ok(()) => {
                trial.seeds.push(rule.to_string());
                out = trial;
            }
            Err(reason) => out.notices.push(format!("skipped {rule}: {reason}")),
        }
    }
    out
}

/// Result of one gluing problem.
#[derive(Clone, Debug, Serialize)]
pub struct GlueOutcome {
    pub status: Status,
    /// Canonical graph6 keys of the solution graphs, sorted.
    pub solutions: Vec<String>,
    pub model_count: u64,
    pub clauses: usize,
    pub variables: usize,
    pub stats: SolveStats,
}

/// Fills in the free pairs in every way (or once, or counting) so that the
/// result lies in `R(s,t)`. Solutions are re-validated and deduplicated up
/// to isomorphism.
pub fn solve_glue(p: &GlueProblem, mode: Mode, budget: Budget) -> Result<GlueOutcome> {
    let cnf = sat::encode(p);
    let out = sat::solve(&cnf, mode, budget);
    let mut keys = BTreeSet::new();
    for m in &out.models {
        let g = sat::from_model(&cnf, m, p)?;
        keys.insert(canonical_key(&g));
    }
    Ok(GlueOutcome {
        status: out.status,
        solutions: keys.into_iter().map(|k| String::from_utf8(k).expect("ascii")).collect(),
        model_count: out.model_count,
        clauses: cnf.clauses.len(),
        variables: cnf.num_vars,
        stats: out.stats,
    })
}

/// One line of a campaign schedule: two pointed graphs to glue along an edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub g: String,
    pub a: usize,
    pub h: String,
    pub b: usize,
}

impl ScheduleEntry {
    pub fn new(g: &Graph, a: usize, h: &Graph, b: usize) -> Self {
        ScheduleEntry {
            g: graph6::encode_string(g),
            a,
            h: graph6::encode_string(h),
            b,
        }
    }
}

pub fn parse_schedule(text: &str) -> Result<Vec<ScheduleEntry>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

/// Every pair of pointed graphs drawn from `graphs` whose overlaps are
/// isomorphic, hardest first within each graph.
pub fn schedule_from_graphs(graphs: &[Graph]) -> Result<Vec<ScheduleEntry>> {
    let mut pointed = Vec::new();
    for g in graphs {
        pointed.extend(pointed_graphs(g, 1)?);
    }
    let mut out = Vec::new();
    for p in &pointed {
        for q in &pointed {
            if p.difficulty == q.difficulty && isomorphism(&p.k, &q.k).is_some() {
                out.push(ScheduleEntry::new(&p.g, p.a, &q.g, q.a));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub rt: RamseyType,
    /// Order of the graphs the campaign rules out or finds.
    pub final_order: usize,
    /// `|C1|` in the first phase, capped by what fits in `final_order`.
    pub c1_start: usize,
    pub rules: Vec<SeedRule>,
    pub context: SeedContext,
    pub budget: Budget,
    pub workers: usize,
    /// Collect all solution graphs for tasks that are satisfiable at full size.
    pub collect_solutions: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PhaseReport {
    pub phase: usize,
    pub tasks: usize,
    pub unsat: usize,
    pub sat: usize,
    pub undecided: usize,
    pub advanced: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UndecidedTask {
    pub entry: usize,
    pub problem: usize,
    pub c1: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub entries: usize,
    pub problems: usize,
    pub phases: Vec<PhaseReport>,
    /// Satisfiable tasks at `final_order`, as `(entry, problem)`.
    pub satisfiable: Vec<(usize, usize)>,
    pub undecided: Vec<UndecidedTask>,
    /// Canonical graph6 keys of all solutions found at `final_order`.
    pub solutions: Vec<String>,
    pub notices: Vec<String>,
}

#[derive(Clone)]
struct Task {
    entry: usize,
    problem: usize,
    pg1: PointedGraph,
    pg2: PointedGraph,
    iso: Vec<usize>,
    c1: usize,
}

/// Runs the schedule in phases: every task is decided with its current C1;
/// satisfiable and undecided tasks advance with one more C1 vertex until the
/// glued graphs reach `final_order`.
pub fn run_campaign(schedule: &[ScheduleEntry], cfg: &CampaignConfig) -> Result<CampaignReport> {
    let mut report = CampaignReport { entries: schedule.len(), ..Default::default() };
    let mut tasks: Vec<Task> = Vec::new();
    for (ei, e) in schedule.iter().enumerate() {
        let g = graph6::decode(e.g.as_bytes())?;
        let h = graph6::decode(e.h.as_bytes())?;
        let pg1 = PointedGraph::new(g, e.a)?;
        let pg2 = PointedGraph::new(h, e.b)?;
        let base = pg1.g.order() + pg2.g.order() - pg1.k.order();
        if base > cfg.final_order {
            report.notices.push(format!("entry {ei}: glued order {base} exceeds the final order"));
            continue;
        }
        let c1 = cfg.c1_start.min(cfg.final_order - base);
        let Some(iso0) = isomorphism(&pg1.k, &pg2.k) else {
            report.notices.push(format!("entry {ei}: overlaps are not isomorphic"));
            continue;
        };
        let auts = automorphisms(&pg1.k)?;
        let mut seen = BTreeSet::new();
        let mut pi = 0;
        for sigma in &auts.perms {
            let iso: Vec<usize> = sigma.iter().map(|&x| iso0[x]).collect();
            let p = build_glue_problem(&pg1, &pg2, &iso, base + c1, cfg.rt)?;
            if seen.insert(p.canonical_hash()) {
                tasks.push(Task { entry: ei, problem: pi, pg1: pg1.clone(), pg2: pg2.clone(), iso, c1 });
                pi += 1;
            }
        }
    }
    report.problems = tasks.len();
    let mut solutions = BTreeSet::new();
    let mut phase = 0;
    while !tasks.is_empty() {
        phase += 1;
        let results: Vec<Result<(Task, GlueOutcome)>> = with_workers(cfg.workers, || {
            tasks
                .par_iter()
                .map(|t| {
                    let base = t.pg1.g.order() + t.pg2.g.order() - t.pg1.k.order();
                    let p = build_glue_problem(&t.pg1, &t.pg2, &t.iso, base + t.c1, cfg.rt)?;
                    let p = seed_c1(&p, &cfg.rules, &cfg.context);
                    let at_final = base + t.c1 == cfg.final_order;
                    let mode = if at_final && cfg.collect_solutions { Mode::All } else { Mode::First };
                    Ok((t.clone(), solve_glue(&p, mode, cfg.budget)?))
                })
                .collect()
        });
        let mut pr = PhaseReport { phase, tasks: tasks.len(), ..Default::default() };
        let mut next = Vec::new();
        for r in results {
            let (t, out) = r?;
            let base = t.pg1.g.order() + t.pg2.g.order() - t.pg1.k.order();
            let at_final = base + t.c1 == cfg.final_order;
            match out.status {
                Status::Unsat => pr.unsat += 1,
                Status::Sat => pr.sat += 1,
                Status::Undecided => pr.undecided += 1,
            }
            if out.status == Status::Unsat {
                continue;
            }
            if at_final {
                if out.status == Status::Sat {
                    report.satisfiable.push((t.entry, t.problem));
                } else {
                    report.undecided.push(UndecidedTask { entry: t.entry, problem: t.problem, c1: t.c1 });
                }
                solutions.extend(out.solutions);
            } else {
                pr.advanced += 1;
                next.push(Task { c1: t.c1 + 1, ..t });
            }
        }
        report.phases.push(pr);
        tasks = next;
    }
    report.solutions = solutions.into_iter().collect();
    Ok(report)
}

/// All assignments of the free pairs, tested directly. For oracles only.
pub fn brute_force_solutions(p: &GlueProblem) -> Result<Vec<String>> {
    let pairs = p.free_pairs();
    if pairs.len() > 24 {
        return Err(Error::SizeLimit { order: pairs.len(), limit: 24 });
    }
    let mut keys = BTreeSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let on: Vec<(usize, usize)> = Bits(mask).map(|i| pairs[i]).collect();
        let g = p.graph_with(&on);
        if is_ramsey_st(&g, p.rt.s, p.rt.t) {
            keys.insert(String::from_utf8(canonical_key(&g)).expect("ascii"));
        }
    }
    Ok(keys.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{census, CensusConfig, CensusSpec};

    fn rt(s: usize, t: usize) -> RamseyType {
        RamseyType::new(s, t).unwrap()
    }

    fn ctx(full: Option<usize>, target: usize) -> SeedContext {
        SeedContext { full_order: full, degree_target: target, table: RamseyTable::known() }
    }

    #[test]
    fn pointed_graph_classes() {
        assert_eq!(pointed_graphs(&Graph::cycle(5), 1).unwrap().len(), 1);
        let star = pointed_graphs(&Graph::star(3), 1).unwrap();
        assert_eq!(star.len(), 2);
        // The centre has the largest K and comes first.
        assert_eq!(star[0].a, 0);
        assert_eq!(pointed_graphs(&Graph::star(3), 2).unwrap().len(), 1);
        assert!(pointed_graphs(&Graph::star(3), 0).is_err());
    }

    #[test]
    fn problem_layout() {
        let pg = PointedGraph::new(Graph::complete(3), 0).unwrap();
        let p = build_glue_problem(&pg, &pg, &[0, 1], 5, rt(4, 4)).unwrap();
        // |G| + |H| - |K| = 3 + 3 - 2 = 4, so one C1 vertex.
        assert_eq!(p.order(), 5);
        assert_eq!(p.c1().len(), 1);
        assert!(p.vertices(Role::A).is_empty() && p.vertices(Role::B).is_empty());
        assert_eq!(p.free_count(), 2);
        assert_eq!(p.state(0, 1), PairState::Edge);
        assert_eq!(p.state(0, 4), PairState::NonEdge);
        assert!(build_glue_problem(&pg, &pg, &[0, 1], 3, rt(4, 4)).is_err());
        assert!(build_glue_problem(&pg, &pg, &[0, 0], 4, rt(4, 4)).is_err());
    }

    #[test]
    fn single_vertex_overlap_has_only_a_b_pairs() {
        // Paths a-k-x in both graphs: K is one vertex, C1 empty.
        let pg = PointedGraph::new(Graph::path(3), 0).unwrap();
        assert_eq!(pg.k.order(), 1);
        let p = build_glue_problem(&pg, &pg, &[0], 5, rt(3, 4)).unwrap();
        assert_eq!(p.free_pairs(), vec![(3, 4)]);
        assert_eq!(p.vertices(Role::A), vec![3]);
        assert_eq!(p.vertices(Role::B), vec![4]);
    }

    #[test]
    fn vertex_accounting() {
        let g = Graph::cycle(5);
        let pg = PointedGraph::new(g, 0).unwrap();
        for target in 8..12 {
            let p = build_glue_problem(&pg, &pg, &[0, 1], target, rt(3, 4)).unwrap();
            let count = |r| p.vertices(r).len();
            assert_eq!(
                count(Role::PointA) + count(Role::PointB) + count(Role::K) + count(Role::A) + count(Role::B) + count(Role::C1),
                target
            );
        }
    }

    #[test]
    fn c5_gluing_matches_brute_force() {
        let pg = PointedGraph::new(Graph::cycle(5), 0).unwrap();
        for p in glue_problems(&pg, &pg, 8, rt(3, 4)).unwrap() {
            let out = solve_glue(&p, Mode::All, Budget::default()).unwrap();
            assert_eq!(out.solutions, brute_force_solutions(&p).unwrap());
        }
    }

    #[test]
    fn fixed_clique_is_immediately_unsat() {
        let pg = PointedGraph::new(Graph::complete(3), 0).unwrap();
        let p = build_glue_problem(&pg, &pg, &[0, 1], 4, rt(4, 4)).unwrap();
        // a, b and the K edge form a 4-clique already.
        assert!(p.fixed_violation());
        let out = solve_glue(&p, Mode::All, Budget::default()).unwrap();
        assert_eq!(out.status, Status::Unsat);
        assert_eq!(out.stats.decisions, 0);
    }

    #[test]
    fn seeding_examples() {
        let pg = PointedGraph::new(Graph::cycle(5), 0).unwrap();
        let p = build_glue_problem(&pg, &pg, &[0, 1], 11, rt(3, 5)).unwrap();
        assert_eq!(p.c1().len(), 3);
        let c = ctx(Some(13), 4);
        assert_eq!(seed_c1(&p, &[], &c), p);
        let tri = SeedRule::Triangle { min_c: 3, v_edge_max: None };
        let s = seed_c1(&p, &[tri.clone()], &c);
        let c1 = s.c1();
        assert_eq!(s.state(c1[0], c1[1]), PairState::Edge);
        assert_eq!(s.free_count(), p.free_count() - 3);
        assert_eq!(s.seeds.len(), 1);
        // |C| = 13 - 8 = 5 < 6 skips the rule with a notice.
        let s = seed_c1(&p, &[SeedRule::Triangle { min_c: 6, v_edge_max: None }], &c);
        assert_eq!(s.free_count(), p.free_count());
        assert_eq!(s.notices.len(), 1);
    }

    #[test]
    fn degree_target_rule() {
        let pg = PointedGraph::new(Graph::cycle(5), 0).unwrap();
        let p = build_glue_problem(&pg, &pg, &[0, 1], 11, rt(3, 5)).unwrap();
        let kd = k_degrees(&p);
        // Each K vertex sees a, b and one A, one B vertex.
        assert!(kd.iter().all(|&(_, d)| d == 4));
        let s = seed_c1(&p, &[SeedRule::DegreeTarget { target: 6 }], &ctx(None, 6));
        let v = s.priority[0];
        assert_eq!(v, 2);
        let joined = s.c1().iter().filter(|&&c| s.state(v, c) == PairState::Edge).count();
        assert_eq!(joined, 2);
        let free = s.c1().iter().filter(|&&c| s.state(v, c) == PairState::Free).count();
        assert_eq!(free, 1);
    }

    #[test]
    fn gadget_validation() {
        let rule = SeedRule::Gadget { name: "triangle".into(), gadget: "Bw".into(), min_c: 6 };
        let cat = census(&CensusSpec::new(rt(3, 3), 5), &CensusConfig::default()).unwrap();
        // C5 has no triangle.
        let c5 = String::from_utf8(canonical_key(&Graph::cycle(5))).unwrap();
        assert_eq!(rule.validate_gadget(cat.graphs()).unwrap(), Some(c5));
        let r44 = census(&CensusSpec::new(rt(4, 3), 8), &CensusConfig::default()).unwrap();
        assert_eq!(rule.validate_gadget(r44.graphs()).unwrap(), None);
    }

    #[test]
    fn rules_round_trip_as_json() {
        for r in SeedRule::published() {
            let text = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<SeedRule>(&text).unwrap(), r);
        }
    }

    #[test]
    fn empty_schedule_gives_empty_report() {
        let cfg = CampaignConfig {
            rt: rt(3, 4),
            final_order: 8,
            c1_start: 0,
            rules: vec![],
            context: ctx(Some(8), 0),
            budget: Budget::default(),
            workers: 1,
            collect_solutions: false,
        };
        let r = run_campaign(&[], &cfg).unwrap();
        assert_eq!(r, CampaignReport::default());
    }
}
