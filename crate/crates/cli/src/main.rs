use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use spantri::construct::{auto_construct, construct};
use spantri::fragments::{histogram_csv, parameter_histogram};
use spantri::sim::estimate::{estimate_containment_with, SimConfig};
use spantri::sim::lowerbound::lower_bound_certificate;
use spantri::sim::sweep::{sweep, KRule};
use spantri::sim::threshold::estimate_threshold_with;
use spantri::spread::{
    check_extension_bounds, check_qspread, check_spiro_spread, check_superspread, parse_rational, SpreadReport,
};
use spantri::verify::{run_suite, Suite, VerificationReport};
use spantri::{validate, Error, Regime, Triangulation};

const DEFAULT_SEED: u64 = 20240601;
const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Parser)]
#[command(name = "spantri", version, about = "Spanning triangulations of a k-gon: construction, checks and thresholds")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Enumeration budget in visited subgraphs or search nodes.
    #[arg(long, global = true, env = "SPANTRI_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Where to write the report; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a triangulation and write it as JSON (or DOT with --dot).
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// nested, two-ring, k4-sprinkle, wheel-chain, or auto.
        #[arg(long, default_value = "auto")]
        regime: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Validate a triangulation and run an inequality suite on it.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// nested, two-ring, k4, wheel or density; by default the one
        /// matching the regime tag.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
    },
    /// Histogram of fragment parameters over connected edge subsets.
    Fragments {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_edges: usize,
    },
    /// Exact spread checks on a small triangulation.
    Spread {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SpreadMode::Bounds)]
        mode: SpreadMode,
        /// Spread parameter as P/Q or a decimal.
        #[arg(long, default_value = "1")]
        q: String,
        #[arg(long, default_value = "1/2")]
        beta: String,
        #[arg(long, default_value = "1/2")]
        delta: String,
        /// Comma-separated strictly decreasing level sizes.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
        #[arg(long, default_value_t = 6)]
        max_edges: usize,
    },
    /// Estimate the probability that G(n,p) contains the triangulation.
    Simulate {
        #[command(flatten)]
        nk: NkArgs,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Bisect for the edge probability where containment crosses 1/2.
    Threshold {
        #[command(flatten)]
        nk: NkArgs,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Threshold estimates over a range of n with a log-log fit.
    Sweep {
        /// k = ceil(alpha n).
        #[arg(long, conflicts_with_all = ["k", "full"])]
        alpha: Option<f64>,
        /// Fixed k.
        #[arg(long, conflicts_with = "full")]
        k: Option<usize>,
        /// k = n.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        n_step: usize,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Union bound on the expected number of copies below threshold.
    Lowerbound {
        #[command(flatten)]
        nk: NkArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpreadMode {
    Qspread,
    Superspread,
    Spiro,
    Bounds,
}

#[derive(Args)]
struct NkArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 500)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// What a subcommand produced: the report, a one-line summary and its verdict.
struct Outcome {
    report: String,
    summary: String,
    status: Status,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    Ok,
    Failed,
    Inconclusive,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Inconclusive => 3,
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Structural(_) | Error::Consistency(_) => 1,
        Error::Budget(_) => 3,
        _ => 2,
    }
}

fn load(path: &PathBuf) -> Result<Triangulation, Error> {
    Triangulation::from_json(&std::fs::read_to_string(path)?)
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn verification_outcome(rep: VerificationReport, format: Format) -> Outcome {
    let status = if rep.total_violations() > 0 {
        Status::Failed
    } else if rep.aborted {
        Status::Inconclusive
    } else {
        Status::Ok
    };
    let summary = format!(
        "{} suite on ({},{}): {} checks, {} violations{}",
        rep.suite,
        rep.n,
        rep.k,
        rep.total_checked(),
        rep.total_violations(),
        if rep.aborted { ", budget exhausted" } else { "" }
    );
    let report = match format {
        Format::Json => rep.to_json(),
        Format::Csv => csv_rows(
            &["suite", "n", "k", "condition", "checked", "violations"],
            rep.conditions.iter().map(|c| {
                vec![
                    rep.suite.clone(),
                    rep.n.to_string(),
                    rep.k.to_string(),
                    c.condition.clone(),
                    c.checked.to_string(),
                    c.violations.to_string(),
                ]
            }),
        ),
    };
    Outcome { report, summary, status }
}

fn spread_outcome(rep: SpreadReport, format: Format) -> Outcome {
    let violations: u64 = rep.checks.iter().map(|c| c.violations).sum();
    let summary = format!(
        "{} on ({},{}): |Aut| = {}, |H| = {}, {} fragments, {violations} violations",
        rep.mode, rep.n, rep.k, rep.automorphisms, rep.copies, rep.fragments
    );
    let report = match format {
        Format::Json => rep.to_json(),
        Format::Csv => csv_rows(
            &["mode", "n", "k", "automorphisms", "copies", "check", "checked", "violations"],
            rep.checks.iter().map(|c| {
                vec![
                    rep.mode.clone(),
                    rep.n.to_string(),
                    rep.k.to_string(),
                    rep.automorphisms.to_string(),
                    rep.copies.to_string(),
                    c.name.clone(),
                    c.checked.to_string(),
                    c.violations.to_string(),
                ]
            }),
        ),
    };
    Outcome { report, summary, status: if rep.passed { Status::Ok } else { Status::Failed } }
}

fn default_suite(t: &Triangulation) -> Suite {
    match t.regime() {
        Regime::Nested => Suite::Nested,
        Regime::TwoRing => Suite::TwoRing,
        Regime::K4Sprinkle => Suite::K4,
        Regime::WheelChain => Suite::Wheel,
        Regime::Custom => Suite::Density,
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let format = cli.format;
    let sim = SimConfig { budget: cli.budget, ..SimConfig::default() };
    match &cli.command {
        Command::Construct { n, k, regime, dot } => {
            let t = if regime == "auto" { auto_construct(*n, *k)? } else { construct(*n, *k, regime.parse()?)? };
            if let Some(path) = dot {
                std::fs::write(path, t.to_dot())?;
            }
            let v = validate(&t)?;
            Ok(Outcome {
                summary: format!(
                    "{} ({n},{k}): m = {}, max degree {}, validation {}",
                    t.regime(),
                    t.edge_count(),
                    t.max_degree(),
                    if v.passed { "passed" } else { "FAILED" }
                ),
                report: t.to_json(),
                status: if v.passed { Status::Ok } else { Status::Failed },
            })
        }
        Command::Verify { input, suite, max_edges } => {
            let t = load(input)?;
            let v = validate(&t)?;
            if !v.passed {
                let failed: Vec<String> = v.failed_checks().map(|c| format!("{}: {}", c.name, c.witness)).collect();
                return Ok(Outcome {
                    report: serde_json::to_string_pretty(&v)?,
                    summary: format!("validation failed: {}", failed.join("; ")),
                    status: Status::Failed,
                });
            }
            let suite = match suite {
                Some(s) => s.parse()?,
                None => default_suite(&t),
            };
            Ok(verification_outcome(run_suite(&t, suite, *max_edges, cli.budget)?, format))
        }
        Command::Fragments { input, max_edges } => {
            let t = load(input)?;
            let (hist, stats) = parameter_histogram(&t, *max_edges, cli.budget)?;
            let report = match format {
                Format::Csv => histogram_csv(&hist),
                Format::Json => {
                    let rows: Vec<serde_json::Value> = hist
                        .iter()
                        .map(|(key, count)| {
                            serde_json::json!({"i": key[0], "v": key[1], "c": key[2], "c_s": key[3], "g": key[4], "r": key[5], "t": key[6], "count": count})
                        })
                        .collect();
                    serde_json::to_string_pretty(&serde_json::json!({
                        "n": t.n(), "k": t.k(), "max_edges": max_edges,
                        "subgraphs": stats.visited, "aborted": stats.aborted, "histogram": rows,
                    }))?
                }
            };
            Ok(Outcome {
                report,
                summary: format!("{} connected fragments with at most {max_edges} edges in {} classes", stats.visited, hist.len()),
                status: if stats.aborted { Status::Inconclusive } else { Status::Ok },
            })
        }
        Command::Spread { input, mode, q, beta, delta, levels, max_edges } => {
            let t = load(input)?;
            let q = parse_rational(q)?;
            let rep = match mode {
                SpreadMode::Qspread => check_qspread(&t, q, *max_edges)?,
                SpreadMode::Superspread => {
                    check_superspread(&t, q, parse_rational(beta)?, parse_rational(delta)?, *max_edges)?
                }
                SpreadMode::Spiro => check_spiro_spread(&t, q, levels.clone(), *max_edges)?,
                SpreadMode::Bounds => check_extension_bounds(&t, *max_edges)?,
            };
            Ok(spread_outcome(rep, format))
        }
        Command::Simulate { nk, p, mc } => {
            let e = estimate_containment_with(nk.n, nk.k, *p, mc.trials, mc.seed, &sim)?;
            let summary = format!(
                "({},{}) at p = {p}: {}/{} contain a copy, estimate {:.4} [{:.4}, {:.4}]{}",
                e.n,
                e.k,
                e.successes,
                e.decided,
                e.p_hat,
                e.ci_lo,
                e.ci_hi,
                if e.unreliable { ", UNRELIABLE" } else { "" }
            );
            let report = match format {
                Format::Json => serde_json::to_string_pretty(&e)?,
                Format::Csv => csv_rows(
                    &["n", "k", "p", "trials", "successes", "p_hat", "ci_lo", "ci_hi", "inconclusive", "seed"],
                    [vec![
                        e.n.to_string(),
                        e.k.to_string(),
                        e.p.to_string(),
                        e.trials.to_string(),
                        e.successes.to_string(),
                        e.p_hat.to_string(),
                        e.ci_lo.to_string(),
                        e.ci_hi.to_string(),
                        e.inconclusive_searches.to_string(),
                        e.seed.to_string(),
                    ]],
                ),
            };
            Ok(Outcome { report, summary, status: if e.unreliable { Status::Inconclusive } else { Status::Ok } })
        }
        Command::Threshold { nk, tol, mc } => {
            let e = estimate_threshold_with(nk.n, nk.k, mc.trials, *tol, mc.seed, &sim)?;
            let summary = format!(
                "({},{}): p_c ~ {:.4} [{:.4}, {:.4}] from {} probes, {} trials{}",
                e.n,
                e.k,
                e.p_hat_c,
                e.ci_lo,
                e.ci_hi,
                e.probes.len(),
                e.trials_total,
                if e.unreliable { ", UNRELIABLE" } else { "" }
            );
            let report = match format {
                Format::Json => e.to_json(),
                Format::Csv => csv_rows(
                    &["p", "trials", "successes", "p_hat", "ci_lo", "ci_hi"],
                    e.probes.iter().map(|p| {
                        vec![
                            p.p.to_string(),
                            p.trials.to_string(),
                            p.successes.to_string(),
                            p.p_hat.to_string(),
                            p.ci_lo.to_string(),
                            p.ci_hi.to_string(),
                        ]
                    }),
                ),
            };
            Ok(Outcome { report, summary, status: if e.unreliable { Status::Inconclusive } else { Status::Ok } })
        }
        Command::Sweep { alpha, k, full, n_min, n_max, n_step, tol, mc } => {
            let rule = match (alpha, k, full) {
                (Some(a), None, false) => KRule::Alpha(*a),
                (None, Some(k), false) => KRule::Fixed(*k),
                (None, None, true) => KRule::Full,
                _ => return Err(Error::Parameter("give exactly one of --alpha, --k, --full".into())),
            };
            if *n_step == 0 {
                return Err(Error::Parameter("--n-step must be positive".into()));
            }
            let ns: Vec<usize> = (*n_min..=*n_max).step_by(*n_step).collect();
            let r = sweep(&ns, rule, mc.trials, *tol, mc.seed, &sim)?;
            let failed = r.rows.iter().filter(|row| row.error.is_some()).count();
            let summary = match &r.fit {
                Some(f) => format!("{} rows, {failed} failed; fitted slope {:.4}", r.rows.len(), f.slope),
                None => format!("{} rows, {failed} failed; no fit (needs three rows)", r.rows.len()),
            };
            let report = match format {
                Format::Json => r.to_json(),
                Format::Csv => r.to_csv(),
            };
            Ok(Outcome { report, summary, status: if failed > 0 { Status::Failed } else { Status::Ok } })
        }
        Command::Lowerbound { nk } => {
            let c = lower_bound_certificate(nk.n, nk.k)?;
            let summary = format!(
                "({},{}) at p = {:.6}: ln(union bound) = {:.4} ({}), Stirling form {:.4}",
                c.n,
                c.k,
                c.p,
                c.log_bound,
                if c.negative { "negative" } else { "NOT negative" },
                c.log_bound_stirling
            );
            let report = match format {
                Format::Json => c.to_json(),
                Format::Csv => csv_rows(
                    &["n", "k", "m", "alpha", "p", "log_bound", "log_bound_stirling", "negative"],
                    [vec![
                        c.n.to_string(),
                        c.k.to_string(),
                        c.m.to_string(),
                        c.alpha.to_string(),
                        c.p.to_string(),
                        c.log_bound.to_string(),
                        c.log_bound_stirling.to_string(),
                        c.negative.to_string(),
                    ]],
                ),
            };
            Ok(Outcome { report, summary, status: if c.negative { Status::Ok } else { Status::Failed } })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.budget == 0 {
        eprintln!("error: --budget must be positive");
        return ExitCode::from(2);
    }
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().expect("thread pool set once");
    }
    info!("workers: {}", rayon::current_num_threads());
    match run(&cli) {
        Ok(out) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out.report) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    println!("{}", out.summary);
                }
                None => {
                    print!("{}", out.report);
                    if !out.report.ends_with('\n') {
                        println!();
                    }
                    eprintln!("{}", out.summary);
                }
            }
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
