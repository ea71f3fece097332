use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use crossfam::families::{construction1_ids, construction2_ids, nonmixed_cover_ids, Instance};
use crossfam::lexset::Ground;
use crossfam::objective::m_formula;
use crossfam::partner::{kpartner, max_cross_id, parity_of, partner};
use crossfam::search::{brute_force_m, class_of, scan, SearchMode, Target};
use crossfam::verify::{
    check_fact_suite, run_suites, run_sweep, CheckVerdict, Grid, RegimeKind, Status, Suite, SweepReport, VerifyOptions,
};
use crossfam::{Count, Error, KSet, Params, Regime};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "crossfam", version, about = "Exact computations on L-initial cross-intersecting families")]
struct Cli {
    /// Add wall-clock timing to reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form maximum and the two constructions.
    Compute(ComputeArgs),
    /// Exhaustive maximum over L-initial systems.
    Search(SearchArgs),
    /// Tabulate g or f over its domain.
    Scan(ScanArgs),
    /// Run check suites on one instance or a parameter sweep.
    Verify(VerifyArgs),
    /// Set-level primitives.
    #[command(subcommand)]
    Set(SetCommand),
}

#[derive(Args, Clone)]
struct InstanceArgs {
    #[arg(short = 'n')]
    n: usize,
    /// Family sizes, comma separated.
    #[arg(short = 'k', value_delimiter = ',', required = true)]
    k: Vec<usize>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Enumerate every ID tuple instead of deriving the smaller IDs.
    #[arg(long, conflicts_with = "oracle")]
    naive: bool,
    /// Enumerate every ID tuple and test pairs by direct intersection.
    #[arg(long)]
    oracle: bool,
    /// Also run the naive search and compare.
    #[arg(long)]
    cross_check: bool,
    #[arg(long)]
    list_extremal: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanFn {
    G,
    F,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long = "fn", value_enum)]
    function: ScanFn,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Mixed,
    Nonmixed,
    GeneralS,
    Free,
    Unsupported,
}

impl From<RegimeArg> for RegimeKind {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Mixed => RegimeKind::Mixed,
            RegimeArg::Nonmixed => RegimeKind::Nonmixed,
            RegimeArg::GeneralS => RegimeKind::GeneralS,
            RegimeArg::Free => RegimeKind::Free,
            RegimeArg::Unsupported => RegimeKind::Unsupported,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma list of all, parity, unimodality, facts, theorem.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(short = 'n', requires = "k", conflicts_with = "sweep")]
    n: Option<usize>,
    #[arg(short = 'k', value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long)]
    sweep: bool,
    #[arg(long = "t", value_delimiter = ',', default_value = "3,4")]
    ts: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    kmin: usize,
    #[arg(long, default_value_t = 5)]
    kmax: usize,
    #[arg(long, default_value_t = 1)]
    nmin: usize,
    #[arg(long, default_value_t = 12)]
    nmax: usize,
    /// Keep only these regimes (default: mixed).
    #[arg(long, value_enum, value_delimiter = ',')]
    regime: Vec<RegimeArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print failing verdicts and the summary only.
    #[arg(long)]
    quiet: bool,
    #[arg(long)]
    json: bool,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct SetBase {
    #[arg(short = 'n')]
    n: usize,
    /// Comma-separated ascending elements.
    set: String,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum SetCommand {
    /// Size of the L-initial family with this ID.
    Rank {
        #[command(flatten)]
        base: SetBase,
        /// Set size to count; defaults to the size of the given set.
        #[arg(short = 'k')]
        k: Option<usize>,
    },
    /// The k-set with the given rank.
    Unrank {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        rank: String,
        #[arg(long)]
        json: bool,
    },
    Partner {
        #[command(flatten)]
        base: SetBase,
    },
    Kpartner {
        #[command(flatten)]
        base: SetBase,
        #[arg(long)]
        target: usize,
    },
    Parity {
        #[command(flatten)]
        base: SetBase,
        #[arg(long)]
        target: usize,
    },
    /// Largest ID of a target-size family cross-intersecting with this one.
    Maxcross {
        #[command(flatten)]
        base: SetBase,
        #[arg(long)]
        target: usize,
    },
    Members {
        #[command(flatten)]
        base: SetBase,
        #[arg(short = 'k')]
        k: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Discrepancy,
}

#[derive(Serialize)]
struct Report {
    params: Params,
    regime: Regime,
    lambda1: Option<String>,
    lambda2: Option<String>,
    m_formula: Option<String>,
    m_bruteforce: Option<String>,
    constructions: Vec<NamedSystem>,
    extremal_systems: Option<Vec<Vec<String>>>,
    classification: Option<String>,
    checks: Vec<CheckVerdict>,
    note: Option<String>,
    timing: Option<f64>,
}

#[derive(Serialize)]
struct NamedSystem {
    name: &'static str,
    ids: Vec<String>,
}

fn params_of(a: &InstanceArgs) -> anyhow::Result<Params> {
    let (p, reordered) = Params::sorted(a.n, a.k.clone())?;
    if reordered {
        eprintln!("warning: family sizes reordered to ({})", join(&p.ks));
    }
    Ok(p)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn ids_of(ids: &[KSet]) -> Vec<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

fn millis(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn base_report(p: &Params) -> anyhow::Result<Report> {
    let inst = Instance::<Count>::new(p.clone());
    let regime = inst.regime();
    let mut r = Report {
        params: p.clone(),
        regime,
        lambda1: None,
        lambda2: None,
        m_formula: None,
        m_bruteforce: None,
        constructions: Vec::new(),
        extremal_systems: None,
        classification: None,
        checks: Vec::new(),
        note: None,
        timing: None,
    };
    match regime {
        Regime::Mixed | Regime::Nonmixed => {
            let o = m_formula(&inst)?;
            r.lambda1 = Some(o.lambda1.to_string());
            r.lambda2 = Some(o.lambda2.to_string());
            r.m_formula = Some(o.m_formula.to_string());
            r.constructions.push(NamedSystem { name: "C1", ids: ids_of(&construction1_ids(p)?.ids) });
            let (name, second) = if regime == Regime::Mixed {
                ("C2", construction2_ids(p)?)
            } else {
                ("cover", nonmixed_cover_ids(p)?)
            };
            r.constructions.push(NamedSystem { name, ids: ids_of(&second.ids) });
        }
        Regime::Free => r.note = Some("free pairs present; use search".into()),
        _ => r.note = Some(format!("no closed form in the {regime} regime; use search")),
    }
    Ok(r)
}

fn print_report(r: &Report, json: bool) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(r)?);
        return Ok(());
    }
    println!("{}", r.params);
    println!("regime: {}", r.regime);
    let rows = [
        ("lambda1", &r.lambda1),
        ("lambda2", &r.lambda2),
        ("M (formula)", &r.m_formula),
        ("M (search)", &r.m_bruteforce),
        ("classification", &r.classification),
        ("note", &r.note),
    ];
    for (label, v) in rows {
        if let Some(v) = v {
            println!("{label}: {v}");
        }
    }
    for c in &r.constructions {
        println!("{}: {}", c.name, c.ids.iter().map(|s| format!("{{{s}}}")).collect::<Vec<_>>().join(" "));
    }
    if let Some(ext) = &r.extremal_systems {
        println!("extremal systems: {}", ext.len());
        for ids in ext {
            println!("  {}", ids.iter().map(|s| format!("{{{s}}}")).collect::<Vec<_>>().join(" "));
        }
    }
    if let Some(t) = r.timing {
        println!("time: {t:.3} ms");
    }
    Ok(())
}

fn cmd_compute(a: &ComputeArgs, timing: bool) -> anyhow::Result<Verdict> {
    let start = Instant::now();
    let p = params_of(&a.inst)?;
    let mut r = base_report(&p)?;
    if timing {
        r.timing = Some(millis(start));
    }
    print_report(&r, a.json)?;
    Ok(Verdict::Ok)
}

fn cmd_search(a: &SearchArgs, timing: bool) -> anyhow::Result<Verdict> {
    let start = Instant::now();
    let p = params_of(&a.inst)?;
    let inst = Instance::<Count>::new(p.clone());
    let mode = match (a.naive, a.oracle) {
        (_, true) => SearchMode::NaiveOracle,
        (true, _) => SearchMode::Naive,
        _ => SearchMode::Smart,
    };
    let found = brute_force_m(&inst, mode)?;
    let mut r = base_report(&p)?;
    r.note = None;
    r.m_bruteforce = Some(found.max_sum.to_string());
    let mut verdict = Verdict::Ok;
    if let Some(f) = &r.m_formula {
        if *f != found.max_sum.to_string() {
            r.note = Some(format!("discrepancy: formula {f}, search {}", found.max_sum));
            verdict = Verdict::Discrepancy;
        }
    }
    if r.regime == Regime::Mixed {
        r.classification = Some(class_of(&p, &found.extremal)?.to_string());
    }
    if a.cross_check && mode != SearchMode::Naive {
        let other = brute_force_m(&inst, SearchMode::Naive)?;
        if other.max_sum != found.max_sum || other.extremal != found.extremal {
            r.note = Some(format!("discrepancy: {mode} search {}, naive search {}", found.max_sum, other.max_sum));
            verdict = Verdict::Discrepancy;
        }
    }
    if a.list_extremal {
        r.extremal_systems = Some(found.extremal.iter().map(|s| ids_of(&s.ids)).collect());
    }
    if timing {
        r.timing = Some(millis(start));
    }
    print_report(&r, a.json)?;
    Ok(verdict)
}

fn cmd_scan(a: &ScanArgs, timing: bool) -> anyhow::Result<Verdict> {
    let start = Instant::now();
    let p = params_of(&a.inst)?;
    let inst = Instance::<Count>::new(p.clone());
    let target = match a.function {
        ScanFn::G => Target::G,
        ScanFn::F => Target::F,
    };
    let table = scan(&inst, target)?;
    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("cannot write {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let summary = format!("max {} at {}", table.max, table.argmax.iter().map(|s| format!("{{{s}}}")).collect::<Vec<_>>().join(" "));
    match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["id", "value"])?;
            for row in &table.rows {
                w.write_record([row.id.to_string(), row.value.to_string()])?;
            }
            w.flush()?;
            eprintln!("{summary}");
        }
        Format::Json => {
            let rows: Vec<Value> =
                table.rows.iter().map(|r| json!({"id": r.id.to_string(), "value": r.value.to_string()})).collect();
            let mut doc = json!({
                "params": p,
                "target": target.to_string(),
                "rows": rows,
                "max": table.max.to_string(),
                "argmax": ids_of(&table.argmax),
            });
            if timing {
                doc["timing"] = json!(millis(start));
            }
            let mut sink = sink;
            writeln!(sink, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    if timing {
        eprintln!("time: {:.3} ms", millis(start));
    }
    Ok(Verdict::Ok)
}

fn cmd_verify(a: &VerifyArgs, timing: bool) -> anyhow::Result<Verdict> {
    let start = Instant::now();
    let mut suites = Vec::new();
    for part in a.suite.split(',') {
        for s in Suite::parse(part.trim())? {
            if !suites.contains(&s) {
                suites.push(s);
            }
        }
    }
    let mut opts = VerifyOptions { inject_fault: a.inject_fault, ..VerifyOptions::default() };
    opts.facts.seed = a.seed;
    let report = if let Some(n) = a.n {
        let p = params_of(&InstanceArgs { n, k: a.k.clone() })?;
        let mut verdicts = Vec::new();
        if suites.contains(&Suite::Facts) {
            verdicts.extend(check_fact_suite(&opts.facts)?);
        }
        verdicts.extend(run_suites::<Count>(&p, &suites, &opts)?);
        SweepReport::from_verdicts(1, verdicts)
    } else if a.sweep {
        let regimes =
            if a.regime.is_empty() { vec![RegimeKind::Mixed] } else { a.regime.iter().map(|&r| r.into()).collect() };
        let grid = Grid { ts: a.ts.clone(), kmin: a.kmin, kmax: a.kmax, nmin: a.nmin, nmax: a.nmax, regimes };
        run_sweep::<Count>(&grid, &suites, &opts)?
    } else {
        return Err(Error::InvalidInput("verify needs -n/-k or --sweep".into()).into());
    };
    if a.json {
        let mut doc = serde_json::to_value(&report)?;
        if timing {
            doc["timing"] = json!(millis(start));
        }
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for v in &report.verdicts {
            if !a.quiet || v.status == Status::Fail {
                println!("{v}");
            }
        }
        println!(
            "{} cells: {} passed, {} failed, {} skipped",
            report.cells, report.passed, report.failed, report.skipped
        );
        if timing {
            println!("time: {:.3} ms", millis(start));
        }
    }
    Ok(if report.failed > 0 { Verdict::Discrepancy } else { Verdict::Ok })
}

fn emit(json: bool, text: String, doc: Value) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string(&doc)?);
    } else {
        println!("{text}");
    }
    Ok(())
}

fn cmd_set(c: &SetCommand) -> anyhow::Result<Verdict> {
    let parse = |b: &SetBase| KSet::parse(b.n, &b.set);
    match c {
        SetCommand::Rank { base, k } => {
            let s = parse(base)?;
            let k = k.unwrap_or(s.len());
            let g = Ground::<Count>::new(base.n);
            let r = if k == s.len() { g.rank(k, &s)? } else { g.rank_general(k, &s)? };
            emit(base.json, r.to_string(), json!({"set": s, "k": k, "rank": r.to_string()}))?;
        }
        SetCommand::Unrank { n, k, rank, json } => {
            let r: Count = rank.parse().map_err(|_| Error::InvalidInput(format!("bad rank {rank:?}")))?;
            let s = Ground::<Count>::new(*n).unrank(*k, &r)?;
            emit(*json, s.to_string(), json!({"rank": rank, "k": k, "set": s}))?;
        }
        SetCommand::Partner { base } => {
            let s = parse(base)?;
            let t = partner(&s)?;
            emit(base.json, t.to_string(), json!({"set": s, "partner": t}))?;
        }
        SetCommand::Kpartner { base, target } => {
            let s = parse(base)?;
            let t = kpartner(&s, *target)?;
            emit(base.json, t.value.to_string(), json!({"set": s, "k": target, "kpartner": t.value, "kind": format!("{:?}", t.kind).to_lowercase()}))?;
        }
        SetCommand::Parity { base, target } => {
            let s = parse(base)?;
            let Some(t) = parity_of(&s, *target) else {
                return Err(Error::NotFound(format!("{{{s}}} has no {target}-parity")).into());
            };
            emit(base.json, t.to_string(), json!({"set": s, "k": target, "parity": t}))?;
        }
        SetCommand::Maxcross { base, target } => {
            let s = parse(base)?;
            let t = max_cross_id(&s, *target)?;
            emit(base.json, t.to_string(), json!({"set": s, "k": target, "max_cross_id": t}))?;
        }
        SetCommand::Members { base, k, cap } => {
            let s = parse(base)?;
            let k = k.unwrap_or(s.len());
            let members = Ground::<Count>::new(base.n).members(k, &s, *cap)?;
            let text = members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n");
            emit(base.json, text, json!({"set": s, "k": k, "members": members}))?;
        }
    }
    Ok(Verdict::Ok)
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("CROSSFAM_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("CROSSFAM_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(Error::InvalidInput("CROSSFAM_THREADS must be positive".into()).into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| anyhow!(e))
}

fn run(cli: &Cli) -> anyhow::Result<Verdict> {
    configure_threads()?;
    match &cli.cmd {
        Command::Compute(a) => cmd_compute(a, cli.timing),
        Command::Search(a) => cmd_search(a, cli.timing),
        Command::Scan(a) => cmd_scan(a, cli.timing),
        Command::Verify(a) => cmd_verify(a, cli.timing),
        Command::Set(c) => cmd_set(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Discrepancy) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::NotFound(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
