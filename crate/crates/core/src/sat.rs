//! CNF encoding of gluing problems, a small exact DPLL enumerator, and
//! DIMACS interchange.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::glue::{GlueProblem, PairState};
use crate::graph::{bit, full_mask, is_ramsey_st, Bits, Graph};

/// Symmetry-breaking scheme recorded in outputs.
pub const SYMMETRY_SCHEME: &str = "lex-leader: for C1 vertices u < v interchangeable by the transposition (u v), \
     row u <= row v over common free columns in increasing vertex order, with a full \
     definitional chain of prefix-equality auxiliaries";

/// A clause database. Variables `1..=num_primary` are free vertex pairs in
/// `decode` order; higher variables are auxiliaries fixed by the primaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub num_primary: usize,
    pub clauses: Vec<Vec<i32>>,
    pub decode: Vec<(usize, usize)>,
    /// Variables to branch on first, in order.
    pub priority: Vec<u32>,
    /// C1 vertex pairs that received lex-leader clauses.
    pub symmetric_pairs: Vec<(usize, usize)>,
}

impl Cnf {
    /// A plain formula over `num_vars` variables, all primary.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        Cnf {
            num_vars,
            num_primary: num_vars,
            clauses,
            decode: Vec::new(),
            priority: Vec::new(),
            symmetric_pairs: Vec::new(),
        }
    }

    pub fn trivially_unsat(&self) -> bool {
        self.clauses.iter().any(Vec::is_empty)
    }

    /// Whether a full assignment (index `i` holds variable `i + 1`) satisfies
    /// every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EncodeOptions {
    pub symmetry_breaking: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            symmetry_breaking: true,
        }
    }
}

pub fn encode(p: &GlueProblem) -> Cnf {
    encode_with(p, EncodeOptions::default())
}

/// Emits one clause per `s`-set whose pairs are all fixed edges or free, and
/// one per `t`-set whose pairs are all fixed non-edges or free.
pub fn encode_with(p: &GlueProblem, opts: EncodeOptions) -> Cnf {
    let n = p.order();
    let decode = p.free_pairs();
    let mut var = vec![[0i32; 64]; n];
    for (i, &(u, v)) in decode.iter().enumerate() {
        var[u][v] = i as i32 + 1;
        var[v][u] = i as i32 + 1;
    }
    let free: Vec<u64> = (0..n).map(|u| p.free_mask(u)).collect();
    let on: Vec<u64> = (0..n).map(|u| p.fixed().neighbors(u) | free[u]).collect();
    let off: Vec<u64> = (0..n)
        .map(|u| (p.fixed().complement_row(u)) | free[u])
        .collect();
    let mut clauses = Vec::new();
    let mut chosen = Vec::with_capacity(p.rt.s.max(p.rt.t));
    collect_sets(&on, full_mask(n), p.rt.s, &mut chosen, &mut |set| {
        clauses.push(pair_literals(set, &var, -1));
    });
    collect_sets(&off, full_mask(n), p.rt.t, &mut chosen, &mut |set| {
        clauses.push(pair_literals(set, &var, 1));
    });
    let priority: Vec<u32> = decode
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| p.priority.contains(&u) || p.priority.contains(&v))
        .map(|(i, _)| i as u32 + 1)
        .collect();
    let mut cnf = Cnf {
        num_vars: decode.len(),
        num_primary: decode.len(),
        clauses,
        decode,
        priority,
        symmetric_pairs: Vec::new(),
    };
    if opts.symmetry_breaking {
        add_symmetry_breaking(p, &var, &mut cnf);
    }
    cnf
}

/// Calls `emit` on every `k`-set of `cand` that is a clique of `allowed`.
fn collect_sets(allowed: &[u64], cand: u64, k: usize, chosen: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if k == 0 {
        emit(chosen);
        return;
    }
    if (cand.count_ones() as usize) < k {
        return;
    }
    for v in Bits(cand) {
        let later = cand & allowed[v] & !((bit(v) << 1).wrapping_sub(1));
        chosen.push(v);
        collect_sets(allowed, later, k - 1, chosen, emit);
        chosen.pop();
    }
}

fn pair_literals(set: &[usize], var: &[[i32; 64]], sign: i32) -> Vec<i32> {
    let mut lits = Vec::new();
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if var[u][v] != 0 {
                lits.push(sign * var[u][v]);
            }
        }
    }
    lits
}

fn add_symmetry_breaking(p: &GlueProblem, var: &[[i32; 64]], cnf: &mut Cnf) {
    let c1 = p.c1();
    for (i, &u) in c1.iter().enumerate() {
        for &v in &c1[i + 1..] {
            let swappable = (0..p.order())
                .filter(|&w| w != u && w != v)
                .all(|w| p.state(u, w) == p.state(v, w));
            if !swappable {
                continue;
            }
            let cols: Vec<(i32, i32)> = (0..p.order())
                .filter(|&w| w != u && w != v && p.state(u, w) == PairState::Free)
                .map(|w| (var[u][w], var[v][w]))
                .collect();
            if cols.is_empty() {
                continue;
            }
            cnf.symmetric_pairs.push((u, v));
            lex_leq(&cols, cnf);
        }
    }
}

/// Clauses for `a <= b` lexicographically (false < true), where `cols`
/// lists `(a_k, b_k)`.
fn lex_leq(cols: &[(i32, i32)], cnf: &mut Cnf) {
    let mut prefix_equal: Option<i32> = None;
    for (k, &(a, b)) in cols.iter().enumerate() {
        let mut c = vec![-a, b];
        if let Some(e) = prefix_equal {
            c.insert(0, -e);
        }
        cnf.clauses.push(c);
        if k + 1 == cols.len() {
            break;
        }
        cnf.num_vars += 1;
        let e = cnf.num_vars as i32;
        if let Some(prev) = prefix_equal {
            cnf.clauses.push(vec![-e, prev]);
            cnf.clauses.push(vec![e, -prev, -a, -b]);
            cnf.clauses.push(vec![e, -prev, a, b]);
        } else {
            cnf.clauses.push(vec![e, -a, -b]);
            cnf.clauses.push(vec![e, a, b]);
        }
        cnf.clauses.push(vec![-e, -a, b]);
        cnf.clauses.push(vec![-e, a, -b]);
        prefix_equal = Some(e);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    All,
    First,
    Count,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_decisions: Option<u64>,
    pub max_seconds: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unsat,
    Undecided,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveOutcome {
    pub status: Status,
    /// Full assignments; empty in count mode.
    pub models: Vec<Vec<bool>>,
    pub model_count: u64,
    pub stats: SolveStats,
}

type Lit = u32;

fn lit_of(l: i32) -> Lit {
    ((l.unsigned_abs() - 1) << 1) | (l < 0) as u32
}

struct Dpll {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    /// 0 unassigned, 1 true, 2 false, indexed by variable.
    value: Vec<u8>,
    trail: Vec<Lit>,
    qhead: usize,
    stats: SolveStats,
}

impl Dpll {
    fn lit_value(&self, l: Lit) -> Option<bool> {
        match self.value[(l >> 1) as usize] {
            0 => None,
            v => Some((v == 1) ^ (l & 1 == 1)),
        }
    }

    fn assign(&mut self, l: Lit) {
        self.value[(l >> 1) as usize] = if l & 1 == 0 { 1 } else { 2 };
        self.trail.push(l);
    }

    fn undo_to(&mut self, len: usize) {
        for &l in &self.trail[len..] {
            self.value[(l >> 1) as usize] = 0;
        }
        self.trail.truncate(len);
        self.qhead = self.qhead.min(len);
    }

    /// Unit propagation; `false` on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut conflict = false;
            while i < ws.len() {
                let ci = ws[i] as usize;
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.value[(first >> 1) as usize] != 0
                    && ((self.value[(first >> 1) as usize] == 1) ^ (first & 1 == 1))
                {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let val = self.value[(l >> 1) as usize];
                    if val == 0 || ((val == 1) ^ (l & 1 == 1)) {
                        clause.swap(1, k);
                        self.watches[clause[1] as usize].push(ci as u32);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    ws.swap_remove(i);
                    continue;
                }
                i += 1;
                match self.lit_value(first) {
                    Some(false) => {
                        conflict = true;
                        break;
                    }
                    None => self.assign(first),
                    Some(true) => unreachable!(),
                }
            }
            let spill = std::mem::replace(&mut self.watches[false_lit as usize], ws);
            self.watches[false_lit as usize].extend(spill);
            if conflict {
                self.stats.conflicts += 1;
                return false;
            }
        }
        true
    }
}

/// Decides or enumerates the formula. Branching follows `c.priority`, then
/// ascending variable index, trying `false` first. Every model is checked
/// against the clauses before it is reported.
pub fn solve(c: &Cnf, mode: Mode, budget: Budget) -> SolveOutcome {
    solve_with_priority(c, mode, budget, &c.priority)
}

pub fn solve_with_priority(c: &Cnf, mode: Mode, budget: Budget, priority: &[u32]) -> SolveOutcome {
    let start = Instant::now();
    let nv = c.num_vars;
    let mut s = Dpll {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * nv],
        value: vec![0; nv],
        trail: Vec::new(),
        qhead: 0,
        stats: SolveStats::default(),
    };
    let mut out = SolveOutcome {
        status: Status::Unsat,
        models: Vec::new(),
        model_count: 0,
        stats: SolveStats::default(),
    };
    let finish = |mut out: SolveOutcome, stats: SolveStats| {
        out.stats = stats;
        out.stats.elapsed_ms = start.elapsed().as_millis() as u64;
        out
    };
    let mut units = Vec::new();
    for clause in &c.clauses {
        let mut lits: Vec<Lit> = clause.iter().map(|&l| lit_of(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            continue;
        }
        match lits.len() {
            0 => return finish(out, s.stats),
            1 => units.push(lits[0]),
            _ => {
                let ci = s.clauses.len() as u32;
                s.watches[lits[0] as usize].push(ci);
                s.watches[lits[1] as usize].push(ci);
                s.clauses.push(lits);
            }
        }
    }
    for u in units {
        match s.lit_value(u) {
            Some(true) => {}
            Some(false) => return finish(out, s.stats),
            None => s.assign(u),
        }
    }
    let mut order: Vec<u32> = Vec::with_capacity(nv);
    let mut seen = vec![false; nv];
    for &v in priority {
        let i = v as usize - 1;
        if i < nv && !seen[i] {
            seen[i] = true;
            order.push(i as u32);
        }
    }
    order.extend((0..nv as u32).filter(|&i| !seen[i as usize]));

    // Decision levels: (trail length before the decision, decision literal, flipped).
    let mut levels: Vec<(usize, Lit, bool)> = Vec::new();
    let mut exhausted = true;
    'search: loop {
        let ok = s.propagate();
        let mut backtrack = !ok;
        if ok {
            match order.iter().find(|&&v| s.value[v as usize] == 0) {
                Some(&v) => {
                    if budget.max_decisions.is_some_and(|m| s.stats.decisions >= m)
                        || (s.stats.decisions % 256 == 0
                            && budget.max_seconds.is_some_and(|m| start.elapsed().as_secs_f64() > m))
                    {
                        exhausted = false;
                        break 'search;
                    }
                    s.stats.decisions += 1;
                    let l = (v << 1) | 1;
                    levels.push((s.trail.len(), l, false));
                    s.assign(l);
                }
                None => {
                    let model: Vec<bool> = s.value.iter().map(|&x| x == 1).collect();
                    assert!(c.satisfied_by(&model), "solver produced a non-model");
                    out.model_count += 1;
                    if mode != Mode::Count {
                        out.models.push(model);
                    }
                    if mode == Mode::First {
                        exhausted = false;
                        break 'search;
                    }
                    backtrack = true;
                }
            }
        }
        if backtrack {
            loop {
                let Some((len, l, flipped)) = levels.pop() else {
                    break 'search;
                };
                s.undo_to(len);
                if !flipped {
                    levels.push((len, l ^ 1, true));
                    s.assign(l ^ 1);
                    break;
                }
            }
        }
    }
    out.status = if out.model_count > 0 && (exhausted || mode == Mode::First) {
        Status::Sat
    } else if exhausted {
        Status::Unsat
    } else {
        Status::Undecided
    };
    finish(out, s.stats)
}

/// DIMACS CNF text: header, then one zero-terminated clause per line.
pub fn to_dimacs(c: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", c.num_vars, c.clauses.len());
    for clause in &c.clauses {
        for l in clause {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF (comment lines allowed) into a plain formula.
pub fn from_dimacs(text: &str) -> Result<Cnf> {
    let bad = |m: &str| Error::Validation(format!("DIMACS: {m}"));
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" || header.is_some() {
                return Err(bad("malformed header"));
            }
            let v = parts[2].parse().map_err(|_| bad("variable count"))?;
            let c = parts[3].parse().map_err(|_| bad("clause count"))?;
            header = Some((v, c));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| bad("clause before header"))?;
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| bad(&format!("literal {tok:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else if l.unsigned_abs() as usize > nv {
                return Err(bad(&format!("literal {l} exceeds {nv} variables")));
            } else {
                cur.push(l);
            }
        }
    }
    let (nv, nc) = header.ok_or_else(|| bad("missing header"))?;
    if !cur.is_empty() {
        return Err(bad("unterminated clause"));
    }
    if clauses.len() != nc {
        return Err(bad(&format!("header declares {nc} clauses, found {}", clauses.len())));
    }
    Ok(Cnf::new(nv, clauses))
}

/// Parses whitespace-separated signed literals (solver `v`/`s` markers
/// allowed) into a full assignment over `num_vars` variables.
pub fn parse_model(text: &str, num_vars: usize) -> Result<Vec<bool>> {
    let bad = |m: String| Error::MalformedAssignment(m);
    let mut value: Vec<Option<bool>> = vec![None; num_vars];
    for tok in text.split_whitespace() {
        match tok {
            "v" | "s" | "SAT" | "SATISFIABLE" => continue,
            "UNSAT" | "UNSATISFIABLE" => return Err(bad("solver reported unsatisfiable".into())),
            _ => {}
        }
        let l: i64 = tok.parse().map_err(|_| bad(format!("token {tok:?}")))?;
        if l == 0 {
            break;
        }
        let v = l.unsigned_abs() as usize;
        if v > num_vars {
            return Err(bad(format!("literal {l} exceeds {num_vars} variables")));
        }
        if value[v - 1].replace(l > 0).is_some() {
            return Err(bad(format!("variable {v} assigned twice")));
        }
    }
    value
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| bad(format!("variable {} unassigned", i + 1))))
        .collect()
}

/// Rebuilds the solution graph from an assignment and re-validates it.
pub fn from_model(c: &Cnf, assignment: &[bool], p: &GlueProblem) -> Result<Graph> {
    if assignment.len() != c.num_vars {
        return Err(Error::MalformedAssignment(format!(
            "expected {} values, got {}",
            c.num_vars,
            assignment.len()
        )));
    }
    if c.decode != p.free_pairs() {
        return Err(Error::MalformedAssignment("formula does not belong to this problem".into()));
    }
    let mut g = p.fixed().clone();
    for (i, &(u, v)) in c.decode.iter().enumerate() {
        if assignment[i] {
            g.add_edge(u, v);
        }
    }
    if !is_ramsey_st(&g, p.rt.s, p.rt.t) {
        return Err(Error::Validation(format!("decoded graph is not in R{}", p.rt)));
    }
    Ok(g)
}
