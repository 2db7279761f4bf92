//! The `graphbandit` command line.
//!
//! ```text
//! graphbandit simulate --policy ts-n,ucb-n --graph cliques:3,2 --out r.csv
//! graphbandit metrics --graph total-order --arms 5
//! graphbandit verify --suite lemmas --cases 1000
//! ```
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid flags or
//! configuration, 3 runtime or numeric failure, 4 graph above the exact-search
//! limit, 5 Monte Carlo results inconclusive.

pub mod csv;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::bandit::{ExplorationSchedule, PolicySpec};
use crate::graph::{FeedbackGraph, GraphLiteral, GraphMetrics, GraphSpec};
use crate::seed;
use crate::sim::{run_trials, AggregateCurve, ExperimentConfig};
use crate::verify::{AlphaSuite, CheckRecord, Prop1Suite, QBoundSuite, RegretSuite};
use crate::{Error, Result};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;
pub const EXIT_SIZE_LIMIT: u8 = 4;
pub const EXIT_INCONCLUSIVE: u8 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "graphbandit",
    version,
    about = "Thompson Sampling with latent graph feedback"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded trials and write the averaged regret curve as CSV.
    Simulate(SimulateArgs),
    /// Print the exact independence, acyclic-subgraph and clique-cover numbers.
    Metrics(MetricsArgs),
    /// Run randomized property suites and print one JSON record per check.
    Verify(VerifyArgs),
}

/// Every field is optional so that a `--config` file can fill the gaps.
#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SimulateArgs {
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Comma-separated list of ts-n, ts-u, ucb-n, uniform.
    #[arg(long)]
    pub policy: Option<String>,
    /// TS-U exploration: none, fixed:EPS, inv-sqrt-T or inv-t.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub arms: Option<usize>,
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// empty, complete, cliques:SIZES, total-order or er:PLOW,PHIGH,dir|undir.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses the global pool. Output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write per-trial curves to `<out stem>.raw.csv`.
    #[arg(long)]
    #[serde(default)]
    pub raw: bool,
}

impl SimulateArgs {
    /// Fills unset fields from `other`.
    fn or(self, other: SimulateArgs) -> SimulateArgs {
        SimulateArgs {
            config: self.config,
            policy: self.policy.or(other.policy),
            schedule: self.schedule.or(other.schedule),
            arms: self.arms.or(other.arms),
            horizon: self.horizon.or(other.horizon),
            trials: self.trials.or(other.trials),
            graph: self.graph.or(other.graph),
            seed: self.seed.or(other.seed),
            workers: self.workers.or(other.workers),
            out: self.out.or(other.out),
            raw: self.raw || other.raw,
        }
    }
}

/// A fully resolved `simulate` invocation.
#[derive(Debug, Clone)]
pub struct SimulatePlan {
    pub configs: Vec<ExperimentConfig>,
    pub out: PathBuf,
    pub raw: bool,
}

impl SimulatePlan {
    pub fn resolve(args: SimulateArgs) -> Result<Self> {
        let args = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                let file: SimulateArgs = serde_json::from_str(&text)
                    .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
                args.or(file)
            }
            None => args,
        };
        let graph: GraphSpec = args
            .graph
            .as_deref()
            .ok_or_else(|| Error::config("--graph is required"))?
            .parse()?;
        let out = args.out.ok_or_else(|| Error::config("--out is required"))?;
        let schedule = args
            .schedule
            .as_deref()
            .map(str::parse::<ExplorationSchedule>)
            .transpose()?;
        let mut policies = args
            .policy
            .as_deref()
            .unwrap_or("ts-n")
            .split(',')
            .map(|p| p.trim().parse::<PolicySpec>())
            .collect::<Result<Vec<_>>>()?;
        if let Some(s) = schedule {
            if !policies.iter().any(|p| matches!(p, PolicySpec::TsU(_))) {
                return Err(Error::config("--schedule only applies to ts-u"));
            }
            for p in &mut policies {
                if let PolicySpec::TsU(_) = p {
                    *p = PolicySpec::TsU(s);
                }
            }
        }
        for (i, p) in policies.iter().enumerate() {
            if policies[..i].contains(p) {
                return Err(Error::config(format!("policy {p} listed twice")));
            }
        }
        let configs = policies
            .into_iter()
            .map(|p| {
                let cfg = ExperimentConfig::new(
                    args.arms.unwrap_or(5),
                    args.horizon.unwrap_or(1000),
                    args.trials.unwrap_or(1000),
                    p,
                    graph.clone(),
                )
                .with_seed(args.seed.unwrap_or(0))
                .with_workers(args.workers.unwrap_or(0));
                cfg.validate().map(|_| cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            configs,
            out,
            raw: args.raw,
        })
    }

    /// Runs every policy and writes the CSV (and raw dump) atomically.
    pub fn execute(&self) -> Result<()> {
        let mut curves = Vec::with_capacity(self.configs.len());
        let mut raws = Vec::new();
        for cfg in &self.configs {
            let traces = run_trials(cfg)?;
            curves.push(AggregateCurve::from_traces(&traces)?);
            if self.raw {
                raws.push(traces);
            }
        }
        let label = |cfg: &ExperimentConfig| (cfg.policy.to_string(), cfg.graph.to_string());
        csv::write_atomic(&self.out, |w| {
            writeln!(w, "{}", csv::CURVE_HEADER)?;
            for (cfg, curve) in self.configs.iter().zip(&curves) {
                let (p, g) = label(cfg);
                csv::write_curve(w, &p, &g, curve)?;
            }
            Ok(())
        })?;
        if self.raw {
            csv::write_atomic(&csv::raw_path(&self.out), |w| {
                writeln!(w, "{}", csv::RAW_HEADER)?;
                for (cfg, traces) in self.configs.iter().zip(&raws) {
                    let (p, g) = label(cfg);
                    csv::write_raw(w, &p, &g, traces)?;
                }
                Ok(())
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    /// Graph spec; random families draw one graph from `--seed`.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub graph: Option<String>,
    #[arg(long, requires = "graph")]
    pub arms: Option<usize>,
    /// JSON graph literal `{"k":..,"directed":..,"arcs":[[i,j],..]}`, one-based.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl MetricsArgs {
    pub fn graph(&self) -> Result<FeedbackGraph> {
        if let Some(path) = &self.file {
            let lit: GraphLiteral = serde_json::from_str(&fs::read_to_string(path)?)
                .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
            return FeedbackGraph::try_from(lit);
        }
        let spec: GraphSpec = self.graph.as_deref().unwrap_or_default().parse()?;
        let k = match (&spec, self.arms) {
            (_, Some(k)) => k,
            (GraphSpec::Cliques(sizes), None) => sizes.iter().sum(),
            _ => return Err(Error::config("--arms is required for this graph")),
        };
        let seq = spec.sequence(k, 1)?;
        let mut rng = seed::stream(self.seed, 0, "graph");
        Ok(seq.next_graph(&mut rng).into_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemmas,
    Prop1,
    Alpha,
    RegretBounds,
    Figures,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random graphs (lemmas) or posteriors (prop1, alpha).
    #[arg(long)]
    pub cases: Option<usize>,
    /// Monte Carlo samples per posterior.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Trials per regret experiment.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Print every case, not only failures and suite summaries.
    #[arg(long)]
    pub verbose: bool,
}

impl VerifyArgs {
    fn regret_suite(&self) -> RegretSuite {
        let d = RegretSuite::default();
        RegretSuite {
            seed: self.seed,
            trials: self.trials.unwrap_or(d.trials),
            horizon: self.horizon.unwrap_or(d.horizon),
            workers: self.workers,
            ..d
        }
    }

    /// Runs the selected suites, streaming records to `out`.
    pub fn execute(&self, out: &mut dyn Write) -> Result<VerifyOutcome> {
        let mut outcome = VerifyOutcome::default();
        let mut emit = |r: &CheckRecord, always: bool| -> Result<()> {
            outcome.add(r);
            if always || self.verbose || !r.pass {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
            Ok(())
        };
        let want = |s: Suite| self.suite == s || self.suite == Suite::All;

        if want(Suite::Lemmas) {
            let d = QBoundSuite::default();
            let suite = QBoundSuite {
                seed: self.seed,
                graphs: self.cases.unwrap_or(d.graphs),
                ..d
            };
            let res = suite.run()?;
            for r in &res.violations {
                emit(r, false)?;
            }
            for r in &res.summaries {
                emit(r, true)?;
            }
        }
        if want(Suite::Prop1) {
            let d = Prop1Suite::default();
            let suite = Prop1Suite {
                seed: self.seed,
                cases: self.cases.unwrap_or(d.cases),
                samples: self.samples.unwrap_or(d.samples),
                ..d
            };
            let cases = suite.run()?;
            for r in &cases {
                // Individual inconclusive cases are budgeted by the summary.
                let shown = CheckRecord {
                    inconclusive: false,
                    ..r.clone()
                };
                emit(&shown, r.inconclusive)?;
            }
            emit(&suite.summary(&cases), true)?;
        }
        if want(Suite::Alpha) {
            let d = AlphaSuite::default();
            let suite = AlphaSuite {
                seed: self.seed,
                cases: self.cases.unwrap_or(d.cases),
                samples: self.samples.unwrap_or(d.samples),
                ..d
            };
            for r in &suite.run()? {
                emit(r, false)?;
            }
        }
        if want(Suite::RegretBounds) {
            for r in &self.regret_suite().run_bounds()? {
                emit(r, true)?;
            }
        }
        if want(Suite::Figures) {
            let suite = self.regret_suite();
            let runs = suite.figure_runs()?;
            for r in &suite.ordering_checks(&runs) {
                emit(r, true)?;
            }
        }
        Ok(outcome)
    }
}

/// Tally of emitted verification records.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub checks: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

impl VerifyOutcome {
    fn add(&mut self, r: &CheckRecord) {
        self.checks += 1;
        match (r.pass, r.inconclusive) {
            (true, _) => {}
            (false, true) => self.inconclusive += 1,
            (false, false) => self.failed += 1,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.failed > 0 {
            EXIT_VERIFY_FAILED
        } else if self.inconclusive > 0 {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        }
    }
}

/// Exit code for a library error.
pub fn error_code(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_) => EXIT_USAGE,
        Error::SizeLimit { .. } => EXIT_SIZE_LIMIT,
        Error::Trial { source, .. } => error_code(source),
        _ => EXIT_RUNTIME,
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Simulate(args) => {
            SimulatePlan::resolve(args)?.execute()?;
            Ok(EXIT_OK)
        }
        Command::Metrics(args) => {
            let m = GraphMetrics::compute(&args.graph()?)?;
            println!("{}", serde_json::to_string(&m)?);
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let stdout = io::stdout();
            let outcome = args.execute(&mut stdout.lock())?;
            eprintln!(
                "{} checks, {} failed, {} inconclusive",
                outcome.checks, outcome.failed, outcome.inconclusive
            );
            Ok(outcome.exit_code())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
