use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pmu_sched::bnb::{greedy_baseline, solve_observed, Limits, SolveOptions};
use pmu_sched::grid::{bundled_case, derive, parse_case, PlacementLimits, PlacementReport};
use pmu_sched::harness::bench::{plot_path, run_suite, write_plot, write_records, Suite};
use pmu_sched::harness::verify::{run_verify, write_reproducer, Fault, VerifyConfig};
use pmu_sched::harness::HarnessError;
use pmu_sched::sched::RawInstance;
use pmu_sched::trace::{Observer, Silent, TextTrace};

#[derive(Parser)]
#[command(
    name = "pmu-sched",
    version,
    about = "Order PMU data transmissions to minimize weighted completion time"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the schedule as JSON.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Solver::Bnb)]
        solver: Solver,
        #[arg(long)]
        node_cap: Option<u64>,
        #[arg(long)]
        time_cap_ms: Option<u64>,
        /// Write a step-by-step bound and search log to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Seed of the initial random schedule.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Derive an instance from a power network case.
    Derive {
        /// Bundled case name (case14, case30, ...) or a case file.
        #[arg(long)]
        case: String,
        /// Seed for the processing times.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Placement search budget; past it the best cover found is used.
        #[arg(long, default_value_t = 60_000)]
        placement_time_cap_ms: u64,
    },
    /// Run a benchmark suite and write per-instance CSV records.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Plot data file; defaults to <out>.plot.csv.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Check the solver against exhaustive search on random instances.
    Verify {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where the first failing instance is written.
        #[arg(long, default_value = "verify-reproducer.json")]
        reproducer: PathBuf,
        /// Corrupt the solver result (harness self-test).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Bnb,
    Greedy,
}

/// Exit 2: unusable input. Exit 1: anything else.
enum Failure {
    Input(anyhow::Error),
    Other(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Other(e.into())
    }
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve {
            instance,
            solver,
            node_cap,
            time_cap_ms,
            trace,
            seed,
        } => cmd_solve(
            &instance,
            solver,
            node_cap,
            time_cap_ms,
            trace.as_deref(),
            seed,
        ),
        Command::Derive {
            case,
            seed,
            out,
            placement_time_cap_ms,
        } => cmd_derive(&case, seed, &out, placement_time_cap_ms),
        Command::Bench { suite, out, plot } => cmd_bench(&suite, &out, plot.as_deref()),
        Command::Verify {
            n_max,
            trials,
            seed,
            reproducer,
            inject_fault,
        } => cmd_verify(n_max, trials, seed, &reproducer, inject_fault),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(input)
}

fn cmd_solve(
    path: &Path,
    solver: Solver,
    node_cap: Option<u64>,
    time_cap_ms: Option<u64>,
    trace: Option<&Path>,
    seed: u64,
) -> Result<ExitCode, Failure> {
    let text = read(path)?;
    let inst = RawInstance::from_json(&text)
        .and_then(RawInstance::validate)
        .with_context(|| format!("invalid instance {}", path.display()))
        .map_err(input)?;

    let report = match solver {
        Solver::Greedy => {
            let s = greedy_baseline(&inst);
            json!({
                "order": one_based(s.order()),
                "objective": s.objective(),
                "lb": null,
                "nodes": 0,
                "proven_optimal": false,
            })
        }
        Solver::Bnb => {
            let options = SolveOptions {
                limits: Limits {
                    node_cap,
                    time_cap: time_cap_ms.map(Duration::from_millis),
                },
                seed,
            };
            let mut file_trace;
            let mut silent = Silent;
            let observer: &mut dyn Observer = match trace {
                Some(p) => {
                    let f = fs::File::create(p)
                        .with_context(|| format!("cannot create {}", p.display()))?;
                    file_trace = TextTrace::new(BufWriter::new(f));
                    &mut file_trace
                }
                None => &mut silent,
            };
            let r = solve_observed(&inst, &options, observer);
            json!({
                "order": one_based(r.best_schedule.order()),
                "objective": r.best_objective,
                "lb": r.global_lb,
                "nodes": r.nodes_explored,
                "proven_optimal": r.proven_optimal,
            })
        }
    };
    println!("{report}");
    Ok(ExitCode::SUCCESS)
}

fn one_based(order: &[usize]) -> Vec<usize> {
    order.iter().map(|j| j + 1).collect()
}

fn cmd_derive(case: &str, seed: u64, out: &Path, cap_ms: u64) -> Result<ExitCode, Failure> {
    let (name, text) = match bundled_case(case) {
        Some(t) => (case.to_string(), t.to_string()),
        None => {
            let path = Path::new(case);
            let stem = path
                .file_stem()
                .map_or(case.to_string(), |s| s.to_string_lossy().into_owned());
            (stem, read(path)?)
        }
    };
    let net = parse_case(&text).map_err(input)?;
    let limits = PlacementLimits {
        node_cap: None,
        time_cap: Some(Duration::from_millis(cap_ms)),
    };
    let d = derive(&net, seed, limits).map_err(input)?;
    fs::write(out, d.instance.to_raw().to_json() + "\n")
        .with_context(|| format!("cannot write {}", out.display()))?;
    let report = PlacementReport::new(name, &d.placement);
    println!("{}", serde_json::to_string(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(suite_path: &Path, out: &Path, plot: Option<&Path>) -> Result<ExitCode, Failure> {
    let suite = Suite::load(suite_path)
        .with_context(|| format!("cannot load suite {}", suite_path.display()))
        .map_err(input)?;
    let base = suite_path.parent().unwrap_or(Path::new("."));
    let outcome = run_suite(&suite, base);
    for e in &outcome.errors {
        eprintln!("skipped: {e}");
    }
    let file = fs::File::create(out).with_context(|| format!("cannot create {}", out.display()))?;
    write_records(BufWriter::new(file), &outcome.records)?;
    let plot = plot.map_or_else(|| plot_path(out), Path::to_path_buf);
    let file =
        fs::File::create(&plot).with_context(|| format!("cannot create {}", plot.display()))?;
    write_plot(BufWriter::new(file), &outcome.plot)?;
    let instances = outcome.records.iter().filter(|r| r.solver == "bnb").count();
    eprintln!(
        "{instances} instances, {} records -> {}; plot data -> {}",
        outcome.records.len(),
        out.display(),
        plot.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    n_max: usize,
    trials: usize,
    seed: u64,
    reproducer: &Path,
    inject_fault: bool,
) -> Result<ExitCode, Failure> {
    let cfg = VerifyConfig {
        n_max,
        trials,
        seed,
        fault: inject_fault.then_some(Fault::IncumbentOffByOne),
        ..Default::default()
    };
    let report = run_verify(&cfg).map_err(|e| match e {
        HarnessError::Config(_) => input(e),
        other => Failure::Other(other.into()),
    })?;
    let mut stdout = io::stdout().lock();
    writeln!(
        stdout,
        "verify: {}/{} trials passed",
        report.passed(),
        report.trials
    )?;
    match report.failures.first() {
        None => Ok(ExitCode::SUCCESS),
        Some(first) => {
            write_reproducer(reproducer, first)
                .with_context(|| format!("cannot write {}", reproducer.display()))?;
            writeln!(
                stdout,
                "FAIL trial {} (n={}, density={}, seed={}): {}",
                first.spec.trial, first.spec.n, first.spec.density, first.spec.seed, first.reason
            )?;
            writeln!(stdout, "reproducer written to {}", reproducer.display())?;
            Ok(ExitCode::from(1))
        }
    }
}
