mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ramsey_core::analysis::{
    catalog_filter, check_reference, degree_bounds, excess, excess_contributions, Predicate, RamseyTable,
    ReferenceCounts,
};
use ramsey_core::catalog::Catalog;
use ramsey_core::census::{
    census, cone_census, ramsey_number, table, CensusConfig, CensusSpec, Limits, ProgressEvent,
};
use ramsey_core::glue::{
    glue_problems, parse_schedule, run_campaign, schedule_from_graphs, seed_c1, solve_glue, CampaignConfig,
    GlueProblem, PointedGraph, SeedContext, SeedRule,
};
use ramsey_core::sat::{self, Budget, EncodeOptions, Mode, Status};
use ramsey_core::{graph6, Error, Graph, RamseyType};

use report::Report;

const EXIT_USAGE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
const EXIT_INVARIANT: u8 = 5;

#[derive(Parser)]
#[command(name = "ramsey", version, about = "Ramsey graph censuses, excess checks and gluing campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Write the JSON-lines report to this file instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// No human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Build the catalog R(s,t,n), optionally within edge bounds.
    Census(CensusArgs),
    /// Summary rows (total, e_min, e_max, counts at the extremes) for n = 1..max-n.
    Table(TableArgs),
    /// Least n with an empty census, with the witnesses at n-1.
    RamseyNumber(RamseyNumberArgs),
    /// Check that the excess vanishes on catalogs or graph lists, and check reference constants.
    ExcessCheck(ExcessArgs),
    /// Keep the catalog members satisfying every predicate.
    Filter(FilterArgs),
    /// Solve the gluing problems of one pair of pointed graphs.
    Glue(GlueArgs),
    /// Run a schedule of gluing problems in phases up to a final order.
    Campaign(CampaignArgs),
    /// Write the gluing problems of one pair of pointed graphs as DIMACS files.
    ExportDimacs(ExportArgs),
    /// Decode and validate a model produced by an external solver.
    DecodeModel(DecodeArgs),
}

#[derive(Args, Serialize)]
struct LimitArgs {
    /// Abort when a level has more members than this.
    #[arg(long)]
    max_members: Option<usize>,
    /// Abort after this many seconds.
    #[arg(long)]
    max_seconds: Option<f64>,
    /// Abort when a level's graph6 file would exceed this many bytes.
    #[arg(long, default_value_t = 1 << 30)]
    max_bytes: u64,
    /// Journal directory; an interrupted run resumes from it.
    #[arg(long)]
    #[serde(skip)]
    checkpoint: Option<PathBuf>,
    /// Progress events as JSON lines on stderr.
    #[arg(long)]
    #[serde(skip)]
    progress: bool,
}

#[derive(Args, Serialize)]
struct CensusArgs {
    s: usize,
    t: usize,
    /// Order of the graphs.
    #[arg(short)]
    n: usize,
    #[arg(long)]
    e_min: Option<usize>,
    #[arg(long)]
    e_max: Option<usize>,
    /// Build by cone gluing over all apex neighbourhoods instead of by extension.
    #[arg(long, conflicts_with = "e_max")]
    cone: bool,
    #[command(flatten)]
    limits: LimitArgs,
    /// Save the catalog under this directory.
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
    /// List every member in the report.
    #[arg(long)]
    list: bool,
}

#[derive(Args, Serialize)]
struct TableArgs {
    s: usize,
    t: usize,
    #[arg(long)]
    max_n: usize,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args, Serialize)]
struct RamseyNumberArgs {
    s: usize,
    t: usize,
    /// Give up above this order.
    #[arg(long, default_value_t = 30)]
    max_n: usize,
    #[command(flatten)]
    limits: LimitArgs,
    /// Save the witness catalog under this directory.
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExcessArgs {
    /// Catalog directories to check.
    #[arg(long)]
    catalog: Vec<PathBuf>,
    /// Files of graph6 lines to check ("-" reads stdin).
    #[arg(long)]
    graphs: Vec<PathBuf>,
    /// Order for reference constants.
    #[arg(short)]
    n: Option<usize>,
    /// Reference constants for one degree, as DEGREE:CO_EDGE_REF,EDGE_REF.
    #[arg(long = "reference", value_parser = parse_reference)]
    references: Vec<(usize, i64, i64)>,
}

#[derive(Args, Serialize)]
struct FilterArgs {
    #[arg(long)]
    catalog: PathBuf,
    /// Predicate as NAME=VALUE, e.g. min-degree-ge=8 or clique-degree-sum=4:24.
    #[arg(long = "pred", required = true)]
    predicates: Vec<String>,
    /// Save the filtered catalog under this directory.
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
    #[arg(long)]
    list: bool,
}

#[derive(Args, Serialize)]
struct SeedArgs {
    /// Seed rules: none, standard, published, or a file of JSON-lines rules.
    #[arg(long, default_value = "none")]
    rules: String,
    /// Order of the target graphs, which fixes |C| for the seed rules.
    #[arg(long)]
    full_order: Option<usize>,
    /// Minimum degree in the target class; defaults to the degree lower bound.
    #[arg(long)]
    degree_target: Option<usize>,
}

#[derive(Args, Serialize)]
struct BudgetArgs {
    /// Decision limit per SAT task.
    #[arg(long)]
    max_decisions: Option<u64>,
    /// Time limit per SAT task.
    #[arg(long, default_value_t = 600.0)]
    task_seconds: f64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { max_decisions: self.max_decisions, max_seconds: Some(self.task_seconds) }
    }
}

#[derive(Args, Serialize)]
struct ProblemArgs {
    s: usize,
    t: usize,
    /// First pointed graph (graph6).
    #[arg(long)]
    g: String,
    /// Its point.
    #[arg(long)]
    a: usize,
    /// Second pointed graph (graph6).
    #[arg(long)]
    h: String,
    /// Its point.
    #[arg(long)]
    b: usize,
    /// Order of the glued graph.
    #[arg(short)]
    n: usize,
    #[command(flatten)]
    seeds: SeedArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    All,
    First,
    Count,
}

#[derive(Args, Serialize)]
struct GlueArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::All)]
    mode: ModeArg,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Serialize)]
struct CampaignArgs {
    s: usize,
    t: usize,
    /// Order of the graphs to find or rule out.
    #[arg(long)]
    final_order: usize,
    /// Schedule file, one JSON object {g, a, h, b} per line.
    #[arg(long, required_unless_present = "from_census", conflicts_with = "from_census")]
    schedule: Option<PathBuf>,
    /// Build the schedule from every possible vertex neighbourhood.
    #[arg(long)]
    from_census: bool,
    /// C1 size in the first phase.
    #[arg(long, default_value_t = 1)]
    c1_start: usize,
    #[command(flatten)]
    seeds: SeedArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Do not collect solution graphs at the final order.
    #[arg(long)]
    no_solutions: bool,
    /// Also write the schedule used to this file.
    #[arg(long)]
    #[serde(skip)]
    write_schedule: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExportArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Only this problem index.
    #[arg(long)]
    index: Option<usize>,
    #[arg(long)]
    no_symmetry_breaking: bool,
    /// Directory for problem-<i>.cnf files.
    #[arg(short, long)]
    #[serde(skip)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct DecodeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Must match the export.
    #[arg(long)]
    no_symmetry_breaking: bool,
    /// Solver output with "v" lines, or plain literals.
    #[arg(long)]
    model: PathBuf,
}

fn parse_reference(text: &str) -> Result<(usize, i64, i64), String> {
    let bad = || format!("expected DEGREE:CO_EDGE_REF,EDGE_REF, got {text:?}");
    let (d, rest) = text.split_once(':').ok_or_else(bad)?;
    let (co, e) = rest.split_once(',').ok_or_else(bad)?;
    Ok((
        d.trim().parse().map_err(|_| bad())?,
        co.trim().parse().map_err(|_| bad())?,
        e.trim().parse().map_err(|_| bad())?,
    ))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::CatalogMismatch(_) | Error::InconsistentReference { .. } => EXIT_VALIDATION,
        Error::ResourceLimit { .. } | Error::SizeLimit { .. } => EXIT_RESOURCE,
        Error::Invariant(_) => EXIT_INVARIANT,
        Error::Io(_) => 1,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = match Report::open(cli.report.as_deref(), cli.quiet) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: cannot open report: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(&cli, &mut report)));
    let code = match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            let code = exit_code(&e);
            let _ = report.line("error", json!({ "exit_code": code, "message": e.to_string() }));
            eprintln!("error: {e}");
            code
        }
        Err(_) => {
            let _ = report.line("error", json!({ "exit_code": EXIT_INVARIANT, "message": "internal invariant violated" }));
            EXIT_INVARIANT
        }
    };
    if let Err(e) = report.flush() {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}

fn run(cli: &Cli, report: &mut Report) -> Result<u8, Error> {
    report.header(&cli.command)?;
    match &cli.command {
        Command::Census(a) => cmd_census(a, cli.workers, report),
        Command::Table(a) => cmd_table(a, cli.workers, report),
        Command::RamseyNumber(a) => cmd_ramsey_number(a, cli.workers, report),
        Command::ExcessCheck(a) => cmd_excess(a, report),
        Command::Filter(a) => cmd_filter(a, cli.workers, report),
        Command::Glue(a) => cmd_glue(a, report),
        Command::Campaign(a) => cmd_campaign(a, cli.workers, report),
        Command::ExportDimacs(a) => cmd_export(a, report),
        Command::DecodeModel(a) => cmd_decode(a, report),
    }
}

fn progress_sink(e: &ProgressEvent) {
    eprintln!("{}", serde_json::to_string(e).expect("serialisable"));
}

fn census_config(l: &LimitArgs, workers: usize) -> CensusConfig<'static> {
    let mut cfg = CensusConfig::default().workers(workers).limits(Limits {
        max_members: l.max_members,
        max_seconds: l.max_seconds,
        max_bytes: Some(l.max_bytes),
    });
    if let Some(dir) = &l.checkpoint {
        cfg = cfg.checkpoint(dir);
    }
    if l.progress {
        cfg = cfg.progress(&progress_sink);
    }
    cfg
}

fn catalog_line(cat: &Catalog, path: Option<&Path>, list: bool) -> serde_json::Value {
    let mut v = json!({
        "s": cat.s(),
        "t": cat.t(),
        "n": cat.order(),
        "members": cat.len(),
        "counts": cat.counts(),
        "summary": cat.summary(),
    });
    if let Some(p) = path {
        v["path"] = json!(p);
    }
    if list {
        v["graphs"] = json!(cat.keys().map(String::from_utf8_lossy).collect::<Vec<_>>());
    }
    v
}

fn cmd_census(a: &CensusArgs, workers: usize, report: &mut Report) -> Result<u8, Error> {
    let rt = RamseyType::new(a.s, a.t)?;
    let cfg = census_config(&a.limits, workers);
    let cat = if a.cone {
        cone_census(rt, a.n, a.e_min.unwrap_or(0), &cfg)?
    } else {
        census(&CensusSpec::new(rt, a.n).edges(a.e_min, a.e_max), &cfg)?
    };
    let path = a.output.as_deref().map(|o| cat.save(o)).transpose()?;
    report.line("catalog", catalog_line(&cat, path.as_deref(), a.list))?;
    report.say(format_args!("R({},{},{}): {} graphs, counts by edges {:?}", a.s, a.t, a.n, cat.len(), cat.counts()));
    Ok(0)
}

fn opt(x: Option<usize>) -> String {
    x.map_or("-".into(), |v| v.to_string())
}

fn cmd_table(a: &TableArgs, workers: usize, report: &mut Report) -> Result<u8, Error> {
    let rt = RamseyType::new(a.s, a.t)?;
    let rows = table(rt, a.max_n, &census_config(&a.limits, workers))?;
    report.say(format_args!(
        "{:>3} {:>12} {:>6} {:>6} {:>10} {:>10} {:>10} {:>10}",
        "n", "total", "e_min", "e_max", "N(e_min)", "N(e_min+1)", "N(e_max-1)", "N(e_max)"
    ));
    for r in &rows {
        report.line("row", r)?;
        report.say(format_args!(
            "{:>3} {:>12} {:>6} {:>6} {:>10} {:>10} {:>10} {:>10}",
            r.n,
            r.total,
            opt(r.e_min),
            opt(r.e_max),
            r.n_at_e_min,
            r.n_at_e_min_plus_1,
            r.n_at_e_max_minus_1,
            r.n_at_e_max
        ));
    }
    Ok(0)
}

fn cmd_ramsey_number(a: &RamseyNumberArgs, workers: usize, report: &mut Report) -> Result<u8, Error> {
    let rt = RamseyType::new(a.s, a.t)?;
    let Some(found) = ramsey_number(rt, a.max_n, &census_config(&a.limits, workers))? else {
        report.line("ramsey-number", json!({ "s": a.s, "t": a.t, "value": null, "searched_to": a.max_n }))?;
        report.say(format_args!("R({},{}) > {}: every census up to order {} is nonempty", a.s, a.t, a.max_n, a.max_n));
        return Ok(EXIT_RESOURCE);
    };
    let path = a.output.as_deref().map(|o| found.witnesses.save(o)).transpose()?;
    let witnesses: Vec<String> = found.witnesses.keys().map(|k| String::from_utf8_lossy(k).into_owned()).collect();
    report.line(
        "ramsey-number",
        json!({
            "s": a.s,
            "t": a.t,
            "value": found.value,
            "witness_order": found.value - 1,
            "witness_count": witnesses.len(),
            "witnesses": witnesses,
            "path": path,
        }),
    )?;
    let shown: Vec<&str> = witnesses.iter().take(10).map(String::as_str).collect();
    report.say(format_args!(
        "R({},{}) = {}; {} witness graph(s) on {} vertices: {}{}",
        a.s,
        a.t,
        found.value,
        witnesses.len(),
        found.value - 1,
        shown.join(" "),
        if witnesses.len() > shown.len() { " ..." } else { "" }
    ));
    Ok(0)
}

fn read_graph_list(path: &Path) -> Result<Vec<Graph>, Error> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path)?;
    }
    text.lines()
        .map(|l| l.trim().trim_start_matches(">>graph6<<"))
        .filter(|l| !l.is_empty())
        .map(|l| graph6::decode(l.as_bytes()))
        .collect()
}

fn cmd_excess(a: &ExcessArgs, report: &mut Report) -> Result<u8, Error> {
    if a.catalog.is_empty() && a.graphs.is_empty() && a.references.is_empty() {
        return Err(Error::Precondition("nothing to check: give --catalog, --graphs or --reference".into()));
    }
    let refs: BTreeMap<usize, ReferenceCounts> = a
        .references
        .iter()
        .map(|&(d, co, e)| (d, ReferenceCounts { co_edge_ref: co, edge_ref: e }))
        .collect();
    let mut failed = false;
    if !refs.is_empty() {
        let n = a.n.ok_or_else(|| Error::Precondition("--reference needs -n".into()))?;
        for (&d, &r) in &refs {
            let consistent = check_reference(n, d, r).is_ok();
            failed |= !consistent;
            report.line(
                "reference",
                json!({ "n": n, "degree": d, "co_edge_ref": r.co_edge_ref, "edge_ref": r.edge_ref, "consistent": consistent }),
            )?;
            report.say(format_args!(
                "n={n} degree {d}: ({}, {}) {}",
                r.co_edge_ref,
                r.edge_ref,
                if consistent { "consistent" } else { "INCONSISTENT" }
            ));
        }
    }
    let mut sources: Vec<(String, Vec<Graph>)> = Vec::new();
    for dir in &a.catalog {
        sources.push((dir.display().to_string(), Catalog::load(dir)?.graphs().collect()));
    }
    for file in &a.graphs {
        sources.push((file.display().to_string(), read_graph_list(file)?));
    }
    let mut total = 0usize;
    let mut nonzero_total = 0usize;
    for (name, graphs) in &sources {
        let mut nonzero = Vec::new();
        let mut rewritten = 0usize;
        for g in graphs {
            let r = excess(g);
            if !r.is_zero() {
                nonzero.push(json!({ "graph": graph6::encode_string(g), "total_doubled": r.total_doubled }));
            }
            let covered = !refs.is_empty()
                && a.n == Some(g.order())
                && g.degrees().iter().all(|d| refs.contains_key(d));
            if covered && excess_contributions(g, &refs).is_ok() {
                rewritten += 1;
            }
        }
        total += graphs.len();
        nonzero_total += nonzero.len();
        report.line(
            "excess",
            json!({ "source": name, "graphs": graphs.len(), "nonzero": nonzero.len(), "rewritten": rewritten, "failures": nonzero }),
        )?;
    }
    if !sources.is_empty() {
        report.line("excess-summary", json!({ "graphs": total, "nonzero": nonzero_total, "all_zero": nonzero_total == 0 }))?;
        if nonzero_total == 0 {
            report.say(format_args!("{total} graphs checked: all zero"));
        } else {
            report.say(format_args!("{total} graphs checked: {nonzero_total} with nonzero excess"));
        }
    }
    Ok(if failed || nonzero_total > 0 { EXIT_VALIDATION } else { 0 })
}

fn cmd_filter(a: &FilterArgs, workers: usize, report: &mut Report) -> Result<u8, Error> {
    let cat = Catalog::load(&a.catalog)?;
    let preds: Vec<Predicate> = a.predicates.iter().map(|p| Predicate::parse(p)).collect::<Result<_, _>>()?;
    let kept = catalog_filter(&cat, &preds, workers)?;
    let path = a.output.as_deref().map(|o| kept.save(o)).transpose()?;
    let mut line = catalog_line(&kept, path.as_deref(), a.list);
    line["input_members"] = json!(cat.len());
    line["predicates"] = json!(preds.iter().map(ToString::to_string).collect::<Vec<_>>());
    report.line("filter", line)?;
    report.say(format_args!("kept {} of {} graphs", kept.len(), cat.len()));
    Ok(0)
}

fn seed_context(rt: RamseyType, s: &SeedArgs, full_order: Option<usize>) -> Result<SeedContext, Error> {
    let table = RamseyTable::known();
    let full_order = s.full_order.or(full_order);
    let degree_target = match (s.degree_target, full_order) {
        (Some(d), _) => d,
        (None, Some(n)) => degree_bounds(rt, n, &table)?.lo,
        (None, None) => 0,
    };
    Ok(SeedContext { full_order, degree_target, table })
}

fn seed_rules(rt: RamseyType, spec: &str, ctx: &SeedContext) -> Result<Vec<SeedRule>, Error> {
    Ok(match spec {
        "none" => Vec::new(),
        "standard" => SeedRule::standard(rt, ctx),
        "published" => SeedRule::published(),
        path => fs::read_to_string(path)?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(Error::from))
            .collect::<Result<_, _>>()?,
    })
}

/// The gluing problems of one pointed pair, seeded as requested.
fn problems(a: &ProblemArgs) -> Result<(RamseyType, Vec<GlueProblem>), Error> {
    let rt = RamseyType::new(a.s, a.t)?;
    let pg = PointedGraph::new(graph6::decode(a.g.as_bytes())?, a.a)?;
    let ph = PointedGraph::new(graph6::decode(a.h.as_bytes())?, a.b)?;
    let ctx = seed_context(rt, &a.seeds, None)?;
    let rules = seed_rules(rt, &a.seeds.rules, &ctx)?;
    let ps = glue_problems(&pg, &ph, a.n, rt)?;
    Ok((rt, ps.iter().map(|p| if rules.is_empty() { p.clone() } else { seed_c1(p, &rules, &ctx) }).collect()))
}

fn cmd_glue(a: &GlueArgs, report: &mut Report) -> Result<u8, Error> {
    let (_, ps) = problems(&a.problem)?;
    if ps.is_empty() {
        report.say("the overlaps are not isomorphic: no gluing problems");
    }
    let mode = match a.mode {
        ModeArg::All => Mode::All,
        ModeArg::First => Mode::First,
        ModeArg::Count => Mode::Count,
    };
    let mut undecided = 0;
    for (i, p) in ps.iter().enumerate() {
        let out = solve_glue(p, mode, a.budget.budget())?;
        undecided += usize::from(out.status == Status::Undecided);
        report.line(
            "glue",
            json!({
                "problem": i,
                "order": p.order(),
                "free_pairs": p.free_count(),
                "seeds": p.seeds,
                "notices": p.notices,
                "status": out.status,
                "model_count": out.model_count,
                "solutions": out.solutions,
                "clauses": out.clauses,
                "variables": out.variables,
                "decisions": out.stats.decisions,
                "conflicts": out.stats.conflicts,
            }),
        )?;
        report.say(format_args!(
            "problem {i}: {:?}, {} free pairs, {} models, {} solution graph(s)",
            out.status,
            p.free_count(),
            out.model_count,
            out.solutions.len()
        ));
    }
    Ok(if undecided > 0 { EXIT_RESOURCE } else { 0 })
}

fn cmd_campaign(a: &CampaignArgs, workers: usize, report: &mut Report) -> Result<u8, Error> {
    let rt = RamseyType::new(a.s, a.t)?;
    let context = seed_context(rt, &a.seeds, Some(a.final_order))?;
    let rules = seed_rules(rt, &a.seeds.rules, &context)?;
    let schedule = match &a.schedule {
        Some(path) => parse_schedule(&fs::read_to_string(path)?)?,
        None => {
            let b = degree_bounds(rt, a.final_order, &context.table)?;
            let inner = RamseyType::new(a.s - 1, a.t)?;
            let mut graphs = Vec::new();
            for d in b.lo.max(1)..=b.hi {
                graphs.extend(census(&CensusSpec::new(inner, d), &CensusConfig::default().workers(workers))?.graphs());
            }
            schedule_from_graphs(&graphs)?
        }
    };
    if let Some(path) = &a.write_schedule {
        let text: String = schedule.iter().map(|e| serde_json::to_string(e).expect("serialisable") + "\n").collect();
        fs::write(path, text)?;
    }
    let cfg = CampaignConfig {
        rt,
        final_order: a.final_order,
        c1_start: a.c1_start,
        rules,
        context,
        budget: a.budget.budget(),
        workers,
        collect_solutions: !a.no_solutions,
    };
    let r = run_campaign(&schedule, &cfg)?;
    report.line(
        "campaign",
        json!({ "entries": r.entries, "problems": r.problems, "rules": cfg.rules.iter().map(ToString::to_string).collect::<Vec<_>>() }),
    )?;
    for p in &r.phases {
        report.line("phase", p)?;
        report.say(format_args!(
            "phase {}: {} tasks, {} unsat, {} sat, {} undecided, {} advanced",
            p.phase, p.tasks, p.unsat, p.sat, p.undecided, p.advanced
        ));
    }
    for &(entry, problem) in &r.satisfiable {
        report.line("satisfiable", json!({ "entry": entry, "problem": problem }))?;
    }
    for u in &r.undecided {
        report.line("undecided", u)?;
    }
    for s in &r.solutions {
        report.line("solution", json!({ "graph": s }))?;
    }
    for n in &r.notices {
        report.line("notice", json!({ "text": n }))?;
    }
    let ruled_out = r.satisfiable.is_empty() && r.undecided.is_empty();
    report.line(
        "campaign-summary",
        json!({
            "final_order": a.final_order,
            "ruled_out": ruled_out,
            "satisfiable": r.satisfiable.len(),
            "undecided": r.undecided.len(),
            "solutions": r.solutions.len(),
        }),
    )?;
    if ruled_out {
        report.say(format_args!("no graph in R({},{},{}) contains any scheduled pair", a.s, a.t, a.final_order));
    } else {
        report.say(format_args!(
            "{} satisfiable task(s), {} undecided, {} solution graph(s)",
            r.satisfiable.len(),
            r.undecided.len(),
            r.solutions.len()
        ));
    }
    Ok(if r.undecided.is_empty() { 0 } else { EXIT_RESOURCE })
}

fn encode_options(no_symmetry_breaking: bool) -> EncodeOptions {
    EncodeOptions { symmetry_breaking: !no_symmetry_breaking }
}

fn cmd_export(a: &ExportArgs, report: &mut Report) -> Result<u8, Error> {
    let (_, ps) = problems(&a.problem)?;
    if let Some(i) = a.index {
        if i >= ps.len() {
            return Err(Error::Precondition(format!("problem {i} requested, only {} exist", ps.len())));
        }
    }
    fs::create_dir_all(&a.output)?;
    for (i, p) in ps.iter().enumerate() {
        if a.index.is_some_and(|k| k != i) {
            continue;
        }
        let cnf = sat::encode_with(p, encode_options(a.no_symmetry_breaking));
        let path = a.output.join(format!("problem-{i}.cnf"));
        fs::write(&path, sat::to_dimacs(&cnf))?;
        report.line(
            "dimacs",
            json!({
                "problem": i,
                "path": path,
                "variables": cnf.num_vars,
                "primary_variables": cnf.num_primary,
                "clauses": cnf.clauses.len(),
                "decode": cnf.decode,
            }),
        )?;
        report.say(format_args!("{}: {} variables, {} clauses", path.display(), cnf.num_vars, cnf.clauses.len()));
    }
    Ok(0)
}

fn cmd_decode(a: &DecodeArgs, report: &mut Report) -> Result<u8, Error> {
    let (_, ps) = problems(&a.problem)?;
    let p = ps
        .get(a.index)
        .ok_or_else(|| Error::Precondition(format!("problem {} requested, only {} exist", a.index, ps.len())))?;
    let cnf = sat::encode_with(p, encode_options(a.no_symmetry_breaking));
    let model = sat::parse_model(&fs::read_to_string(&a.model)?, cnf.num_vars)?;
    if !cnf.satisfied_by(&model) {
        return Err(Error::Validation("the model does not satisfy the formula".into()));
    }
    let g = sat::from_model(&cnf, &model, p)?;
    let canonical = String::from_utf8(ramsey_core::canon::canonical_key(&g)).expect("ascii");
    report.line("model", json!({ "problem": a.index, "graph": graph6::encode_string(&g), "canonical": canonical }))?;
    report.say(format_args!("valid: {canonical}"));
    Ok(0)
}
