//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact; there are no numeric tolerances to tune.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use ramsey_core::analysis::{
    check_reference, degree_bounds, excess, excess_contributions, DegreeBounds, RamseyTable, ReferenceCounts,
};
use ramsey_core::canon::canonical_key;
use ramsey_core::catalog::Catalog;
use ramsey_core::census::{census, census_levels, cone_census, ramsey_number, CensusConfig, CensusSpec};
use ramsey_core::glue::{brute_force_solutions, glue_problems, pointed_graphs, solve_glue, GlueProblem, PointedGraph};
use ramsey_core::graph::is_ramsey_st;
use ramsey_core::sat::{self, Budget, Cnf, Mode};
use ramsey_core::{Graph, RamseyType};

/// Rows for R(4,5), n = 1..=10:
/// (n, e_min, e_max, N(e_min), N(e_min+1), N(e_max-1), N(e_max), total).
const R45_ROWS: [(usize, usize, usize, u64, u64, u64, u64, u64); 10] = [
    (1, 0, 0, 1, 0, 0, 1, 1),
    (2, 0, 1, 1, 1, 1, 1, 2),
    (3, 0, 3, 1, 1, 1, 1, 4),
    (4, 0, 5, 1, 1, 2, 1, 10),
    (5, 1, 8, 1, 2, 3, 1, 28),
    (6, 2, 12, 1, 4, 2, 1, 114),
    (7, 3, 16, 1, 3, 4, 1, 627),
    (8, 4, 21, 1, 2, 4, 1, 5588),
    (9, 6, 27, 1, 4, 2, 1, 81321),
    (10, 8, 33, 1, 5, 3, 1, 1915582),
];

/// Reference constants (degree, co_edge_ref, edge_ref) for 46-vertex graphs.
const REFERENCES_46: [(usize, i64, i64); 4] = [(24, 104, 127), (23, 119, 118), (22, 135, 112), (21, 149, 106)];

const GLUE_PROBLEMS_MIN: usize = 500;
const GLUE_FREE_MAX: usize = 20;
const RANDOM_GRAPHS: usize = 100_000;
const RANDOM_GRAPH_ORDER_MAX: usize = 40;
const RANDOM_CNFS: usize = 1000;
const RANDOM_CNF_VARS_MAX: usize = 16;
const WORKER_COUNTS: [&str; 3] = ["1", "4", "16"];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rt(s: usize, t: usize) -> RamseyType {
    RamseyType::new(s, t).unwrap()
}

fn ramsey_cli(args: &[&str]) -> (i32, Vec<Value>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ramsey")).args(args).arg("--quiet").output().unwrap();
    let lines = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (out.status.code().unwrap_or(-1), lines)
}

fn of_type<'a>(ls: &'a [Value], kind: &str) -> Vec<&'a Value> {
    ls.iter().filter(|v| v["type"] == kind).collect()
}

/// Excess results gathered while walking catalogs for other criteria.
#[derive(Default)]
struct ExcessTally {
    graphs: u64,
    nonzero: u64,
}

impl ExcessTally {
    fn visit(&mut self, cat: &Catalog) {
        for g in cat.graphs() {
            self.graphs += 1;
            self.nonzero += u64::from(!excess(&g).is_zero());
        }
    }
}

/// Shared state: the R(4,4) walk feeds criteria 2, 3 and 7.
#[derive(Default)]
struct Walk {
    r44_counts: Vec<usize>,
    r44_17: Option<Catalog>,
    tally: ExcessTally,
}

fn criterion_1(walk: &mut Walk) -> Check {
    let (code, ls) = ramsey_cli(&["table", "4", "5", "--max-n", "10"]);
    ensure(code == 0, || format!("table exited with {code}"))?;
    let rows = of_type(&ls, "row");
    ensure(rows.len() == R45_ROWS.len(), || format!("{} rows", rows.len()))?;
    for (r, &(n, lo, hi, a, b, c, d, total)) in rows.iter().zip(&R45_ROWS) {
        let got = (
            r["n"].as_u64().unwrap() as usize,
            r["e_min"].as_u64().unwrap() as usize,
            r["e_max"].as_u64().unwrap() as usize,
            r["n_at_e_min"].as_u64().unwrap(),
            r["n_at_e_min_plus_1"].as_u64().unwrap(),
            r["n_at_e_max_minus_1"].as_u64().unwrap(),
            r["n_at_e_max"].as_u64().unwrap(),
            r["total"].as_u64().unwrap(),
        );
        ensure(got == (n, lo, hi, a, b, c, d, total), || format!("row {n}: got {got:?}"))?;
    }
    // Walk the same levels in-process for the excess check.
    census_levels(4, 5, 10, &CensusConfig::default(), |cat| {
        walk.tally.visit(cat);
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok("R(4,5) rows n <= 10 exact, including total 1915582 and e range 8..33 at n = 10".into())
}

fn criterion_2(walk: &mut Walk) -> Check {
    let cfg = CensusConfig::default();
    for (s, t, want) in [(3, 3, 6), (3, 4, 9), (3, 5, 14)] {
        let found = ramsey_number(rt(s, t), 20, &cfg).map_err(|e| e.to_string())?.ok_or("not found")?;
        ensure(found.value == want, || format!("R({s},{t}) = {}", found.value))?;
        ensure(!found.witnesses.is_empty(), || format!("no witnesses for R({s},{t})"))?;
        ensure(found.witnesses.graphs().all(|g| is_ramsey_st(&g, s, t)), || "bad witness".into())?;
        walk.tally.visit(&found.witnesses);
        if (s, t) == (3, 3) {
            ensure(found.witnesses.contains(&Graph::cycle(5)), || "C5 missing".into())?;
        }
    }
    // R(4,4) by walking every level until the census empties.
    let mut counts = Vec::new();
    let mut last = None;
    census_levels(4, 4, 18, &cfg, |cat| {
        counts.push(cat.len());
        walk.tally.visit(cat);
        if cat.order() == 17 {
            last = Some(cat.clone());
        }
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    let first_empty = counts.iter().position(|&c| c == 0).ok_or("census never empties up to 18")?;
    ensure(first_empty == 18, || format!("R(4,4) census empties at {first_empty}"))?;
    ensure(counts[17] > 0, || "no witnesses on 17 vertices".into())?;
    walk.r44_counts = counts;
    walk.r44_17 = last;
    Ok(format!(
        "R(3,3)=6 (C5), R(3,4)=9, R(3,5)=14, R(4,4)=18 with {} witness(es) on 17 vertices",
        walk.r44_counts[17]
    ))
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn criterion_3(walk: &mut Walk) -> Check {
    ensure(walk.tally.graphs > 0, || "no catalogs were walked".into())?;
    ensure(walk.tally.nonzero == 0, || format!("{} catalog graphs with nonzero excess", walk.tally.nonzero))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nonzero = 0;
    for _ in 0..RANDOM_GRAPHS {
        let n = rng.gen_range(1..=RANDOM_GRAPH_ORDER_MAX);
        let p = rng.gen::<f64>();
        nonzero += usize::from(!excess(&random_graph(&mut rng, n, p)).is_zero());
    }
    ensure(nonzero == 0, || format!("{nonzero} random graphs with nonzero excess"))?;
    Ok(format!(
        "zero on all {} catalog graphs and {RANDOM_GRAPHS} random graphs on <= {RANDOM_GRAPH_ORDER_MAX} vertices",
        walk.tally.graphs
    ))
}

/// `sum_v (e(F_v^-) - co) + (edge - e(F_v^+)) + 1`, counted pair by pair.
fn rewrite_by_hand(f: &Graph, refs: &std::collections::BTreeMap<usize, ReferenceCounts>) -> i64 {
    let n = f.order();
    let mut total = 0;
    for v in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&u| u != v && f.has_edge(u, v)).collect();
        let non: Vec<usize> = (0..n).filter(|&u| u != v && !f.has_edge(u, v)).collect();
        let inside = |set: &[usize]| {
            let mut c = 0i64;
            for (i, &x) in set.iter().enumerate() {
                for &y in &set[i + 1..] {
                    c += i64::from(f.has_edge(x, y));
                }
            }
            c
        };
        let r = refs[&nb.len()];
        total += (inside(&non) - r.co_edge_ref) + (r.edge_ref - inside(&nb)) + 1;
    }
    total
}

fn circulant(n: usize, steps: &[usize]) -> Graph {
    let mut g = Graph::empty(n);
    for v in 0..n {
        for &s in steps {
            g.add_edge(v, (v + s) % n);
        }
    }
    g
}

fn criterion_4() -> Check {
    let refs: std::collections::BTreeMap<usize, ReferenceCounts> = REFERENCES_46
        .iter()
        .map(|&(d, co, e)| (d, ReferenceCounts { co_edge_ref: co, edge_ref: e }))
        .collect();
    for (&d, &r) in &refs {
        check_reference(46, d, r).map_err(|e| e.to_string())?;
    }
    let bumped = ReferenceCounts { co_edge_ref: 105, edge_ref: 127 };
    ensure(check_reference(46, 24, bumped).is_err(), || "perturbed constants accepted".into())?;
    // 46-vertex instances whose degrees lie in 21..=24.
    let base: Vec<usize> = (1..=10).collect();
    let mut instances = vec![
        circulant(46, &[&base[..], &[23]].concat()),
        circulant(46, &[&base[..], &[11]].concat()),
        circulant(46, &[&base[..], &[11, 23]].concat()),
        circulant(46, &[&base[..], &[11, 12]].concat()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let mut g = circulant(46, &[&base[..], &[11]].concat());
        // Antipodal chords raise chosen vertices from 22 to 23.
        for v in 0..23 {
            if rng.gen_bool(0.5) {
                g.add_edge(v, v + 23);
            }
        }
        instances.push(g);
    }
    let mut checked = 0;
    for g in &instances {
        ensure(g.degrees().iter().all(|d| refs.contains_key(d)), || "degree outside 21..24".into())?;
        let c = excess_contributions(g, &refs).map_err(|e| e.to_string())?;
        let sum: i64 = c.iter().map(|x| x.value).sum();
        ensure(2 * sum == excess(g).total_doubled, || "sum differs from excess".into())?;
        ensure(sum == rewrite_by_hand(g, &refs), || "sum differs from direct count".into())?;
        checked += 1;
    }
    // Random even-order graphs with per-degree constants solving the equation.
    for _ in 0..200 {
        let n = 2 * rng.gen_range(2..=15);
        let p = rng.gen();
        let g = random_graph(&mut rng, n, p);
        let mut synthetic = std::collections::BTreeMap::new();
        for d in g.degrees() {
            let edge_ref: i64 = rng.gen_range(0..50);
            let (ni, di) = (n as i64, d as i64);
            synthetic.insert(d, ReferenceCounts { co_edge_ref: 1 + edge_ref + di * (ni - 2 * di) / 2, edge_ref });
        }
        let c = excess_contributions(&g, &synthetic).map_err(|e| e.to_string())?;
        let sum: i64 = c.iter().map(|x| x.value).sum();
        ensure(2 * sum == excess(&g).total_doubled, || "synthetic sum differs from excess".into())?;
        ensure(sum == rewrite_by_hand(&g, &synthetic), || "synthetic sum differs from direct count".into())?;
        checked += 1;
    }
    Ok(format!("constants consistent for n = 46, degrees 21..24; rewrite sum equals excess on {checked} instances"))
}

/// A random pointed graph and a second one built around a relabelled copy
/// of its overlap.
fn random_pair(rng: &mut ChaCha8Rng) -> (PointedGraph, PointedGraph) {
    let n = rng.gen_range(2..=6);
    let g = random_graph(rng, n, 0.5);
    let pg = PointedGraph::new(g, rng.gen_range(0..n)).unwrap();
    let k = pg.k.order();
    let nb = rng.gen_range(0..=3);
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let mut h = Graph::empty(1 + k + nb);
    for i in 0..k {
        h.add_edge(0, 1 + perm[i]);
        for j in i + 1..k {
            if pg.k.has_edge(i, j) {
                h.add_edge(1 + perm[i], 1 + perm[j]);
            }
        }
    }
    for v in 1 + k..1 + k + nb {
        for u in 1..v {
            if rng.gen_bool(0.5) {
                h.add_edge(u, v);
            }
        }
    }
    (pg, PointedGraph::new(h, 0).unwrap())
}

fn glue_corpus() -> Vec<GlueProblem> {
    let mut out = Vec::new();
    // Pointed graphs from the neighbourhood classes R(s-1,t).
    for (s, t, max_order, take) in [(3, 3, 2, 20), (3, 4, 3, 60), (4, 4, 4, 120)] {
        let mut pointed = Vec::new();
        for m in 1..=max_order {
            for g in census(&CensusSpec::new(rt(s - 1, t), m), &CensusConfig::default()).unwrap().graphs() {
                pointed.extend(pointed_graphs(&g, 1).unwrap());
            }
        }
        let mut all = Vec::new();
        for p in &pointed {
            for q in &pointed {
                let base = p.g.order() + q.g.order() - p.k.order();
                for extra in 0..=4 {
                    for prob in glue_problems(p, q, base + extra, rt(s, t)).unwrap() {
                        if prob.free_count() <= GLUE_FREE_MAX {
                            all.push(prob);
                        }
                    }
                }
            }
        }
        let step = (all.len() / take).max(1);
        out.extend(all.into_iter().step_by(step).take(take));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (s, t, count) in [(3, 3, 120), (3, 4, 120), (4, 4, 120)] {
        let mut added = 0;
        while added < count {
            let (pg, ph) = random_pair(&mut rng);
            let base = pg.g.order() + ph.g.order() - pg.k.order();
            let target = base + rng.gen_range(0..=3);
            for p in glue_problems(&pg, &ph, target, rt(s, t)).unwrap() {
                if p.free_count() <= GLUE_FREE_MAX && added < count {
                    out.push(p);
                    added += 1;
                }
            }
        }
    }
    out
}

fn criterion_5(corpus: &[GlueProblem]) -> Check {
    ensure(corpus.len() >= GLUE_PROBLEMS_MIN, || format!("only {} problems", corpus.len()))?;
    let mut sat_count = 0;
    for (i, p) in corpus.iter().enumerate() {
        ensure(p.free_count() <= GLUE_FREE_MAX, || format!("problem {i} too large"))?;
        let want = brute_force_solutions(p).map_err(|e| e.to_string())?;
        let got = solve_glue(p, Mode::All, Budget::default()).map_err(|e| e.to_string())?;
        ensure(got.solutions == want, || format!("problem {i}: solution sets differ"))?;
        sat_count += usize::from(!want.is_empty());
    }
    let cfg = CensusConfig::default();
    let mut classes = 0;
    for s in 2..=4 {
        for t in 2..=4 {
            for n in 1..=9 {
                let ext = census(&CensusSpec::new(rt(s, t), n), &cfg).map_err(|e| e.to_string())?;
                let cone = cone_census(rt(s, t), n, 0, &cfg).map_err(|e| e.to_string())?;
                ensure(ext.keys().eq(cone.keys()), || format!("R({s},{t},{n}) differs"))?;
                classes += 1;
            }
        }
    }
    Ok(format!(
        "{} problems (<= {GLUE_FREE_MAX} free pairs, {sat_count} satisfiable) match brute force; \
         cone gluing equals extension on {classes} classes",
        corpus.len()
    ))
}

fn random_cnf(rng: &mut ChaCha8Rng) -> Cnf {
    let nv = rng.gen_range(1..=RANDOM_CNF_VARS_MAX);
    let m = rng.gen_range(0..=4 * nv);
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=nv.min(4));
            let mut vars: Vec<i32> = (1..=nv as i32).collect();
            vars.shuffle(rng);
            vars[..len].iter().map(|&v| if rng.gen_bool(0.5) { v } else { -v }).collect()
        })
        .collect();
    Cnf::new(nv, clauses)
}

fn truth_table(c: &Cnf) -> BTreeSet<u32> {
    (0u32..1 << c.num_vars)
        .filter(|m| {
            c.clauses.iter().all(|cl| {
                cl.iter().any(|&l| {
                    let value = m >> (l.unsigned_abs() - 1) & 1 == 1;
                    value == (l > 0)
                })
            })
        })
        .collect()
}

fn criterion_6(corpus: &[GlueProblem]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut models = 0u64;
    for i in 0..RANDOM_CNFS {
        let c = random_cnf(&mut rng);
        let want = truth_table(&c);
        let out = sat::solve(&c, Mode::All, Budget::default());
        let got: BTreeSet<u32> = out
            .models
            .iter()
            .map(|m| m.iter().enumerate().fold(0u32, |acc, (j, &b)| acc | (u32::from(b) << j)))
            .collect();
        ensure(got.len() == out.models.len(), || format!("formula {i}: repeated model"))?;
        ensure(got == want, || format!("formula {i}: model sets differ"))?;
        models += want.len() as u64;
    }
    let mut decoded = 0;
    for p in corpus {
        let cnf = sat::encode(p);
        let out = sat::solve(&cnf, Mode::All, Budget::default());
        for m in &out.models {
            let g = sat::from_model(&cnf, m, p).map_err(|e| e.to_string())?;
            ensure(is_ramsey_st(&g, p.rt.s, p.rt.t), || "decoded model not Ramsey".into())?;
            decoded += 1;
        }
    }
    Ok(format!(
        "{RANDOM_CNFS} random formulas (<= {RANDOM_CNF_VARS_MAX} variables, {models} models) match truth tables; \
         {decoded} decoded gluing models re-validated"
    ))
}

fn criterion_7(walk: &Walk) -> Check {
    let cat = walk.r44_17.as_ref().ok_or("R(4,4,17) was not computed")?;
    let b = degree_bounds(rt(4, 4), 17, &RamseyTable::known()).map_err(|e| e.to_string())?;
    ensure(b == DegreeBounds { lo: 8, hi: 8 }, || format!("degree bounds {b:?}"))?;
    ensure(!cat.is_empty(), || "empty census".into())?;
    for g in cat.graphs() {
        for v in 0..17 {
            let d = (0..17).filter(|&u| u != v && g.has_edge(u, v)).count();
            ensure(d == 8, || format!("vertex {v} has degree {d}"))?;
        }
    }
    let paley = canonical_key(&Graph::paley(17));
    ensure(cat.keys().all(|k| k == paley.as_slice()), || "member other than Paley(17)".into())?;
    Ok(format!("{} graph(s), all 8-regular, matching degree bounds [8, 8]", cat.len()))
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_8() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut census_runs = Vec::new();
    let mut campaign_runs = Vec::new();
    for w in WORKER_COUNTS {
        let out = dir.path().join(format!("out-{w}"));
        let report = dir.path().join(format!("census-{w}.jsonl"));
        let (code, _) = ramsey_cli(&[
            "census",
            "4",
            "4",
            "-n",
            "10",
            "--workers",
            w,
            "-o",
            out.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
        ]);
        ensure(code == 0, || format!("census exited with {code}"))?;
        let text = fs::read_to_string(&report).unwrap().replace(&format!("out-{w}"), "out");
        census_runs.push((text, read_dir_sorted(&out.join("r4-4-n10"))));
        let report = dir.path().join(format!("campaign-{w}.jsonl"));
        let (code, _) = ramsey_cli(&[
            "campaign",
            "4",
            "4",
            "--final-order",
            "17",
            "--from-census",
            "--rules",
            "standard",
            "--workers",
            w,
            "--report",
            report.to_str().unwrap(),
        ]);
        ensure(code == 0, || format!("campaign exited with {code}"))?;
        campaign_runs.push(fs::read(&report).unwrap());
    }
    ensure(census_runs.windows(2).all(|p| p[0] == p[1]), || "census outputs differ".into())?;
    ensure(campaign_runs.windows(2).all(|p| p[0] == p[1]), || "campaign reports differ".into())?;
    Ok(format!("census R(4,4,10) and campaign R(4,4,17) byte-identical for workers {}", WORKER_COUNTS.join(", ")))
}

fn criterion_9() -> Check {
    Ok("stated: the full-size R(4,5) censuses for n = 21..24, the campaign over about 12 million overlaps, \
        the 8,485,247-solution count and the bound R(5,5) <= 46 itself are not reproducible at desk scale; \
        criteria 3 to 6 check the primitives they rest on"
        .into())
}

/// `ACCEPTANCE_ONLY=4,5` runs a subset. Criteria 3 and 7 read catalogs
/// walked by 1 and 2.
fn selected(id: u32) -> bool {
    match std::env::var("ACCEPTANCE_ONLY") {
        Ok(list) => list.split(',').any(|x| x.trim() == id.to_string()),
        Err(_) => true,
    }
}

fn run(id: u32, f: impl FnOnce() -> Check) -> bool {
    if !selected(id) {
        println!("SKIP {id}");
        return true;
    }
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => {
            println!("PASS {id}: {detail} [{secs:.1}s]");
            true
        }
        Err(detail) => {
            println!("FAIL {id}: {detail} [{secs:.1}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut walk = Walk::default();
    let mut ok = true;
    ok &= run(1, || criterion_1(&mut walk));
    ok &= run(2, || criterion_2(&mut walk));
    ok &= run(3, || criterion_3(&mut walk));
    ok &= run(4, criterion_4);
    let corpus = glue_corpus();
    ok &= run(5, || criterion_5(&corpus));
    ok &= run(6, || criterion_6(&corpus));
    ok &= run(7, || criterion_7(&walk));
    ok &= run(8, criterion_8);
    ok &= run(9, criterion_9);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
