//! Command-line front end.
//!
//! Exit status is 0 on success, 2 on I/O failures and 1 for every other
//! error, including malformed arguments.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::amplitudes::{parse_input, sparsify, InputVector, LoadOptions, NORM_TOL};
use crate::analysis::{choose_split, predictions, sweep, to_csv, SplitMode, SweepConfig};
use crate::circuit::{export_qasm, lower, metrics, Circuit, QasmOptions};
use crate::error::{Error, Result};
use crate::simulator::{exact_marginals, mae, sample, simulate, state_distance, Distribution};
use crate::synthesis::{Method, SynthesisPlan};
use crate::trees::{build_angle_tree, build_sparse_state_tree, build_state_tree};

#[derive(Debug, Parser)]
#[command(name = "qsprep", version, about = "Quantum state-preparation circuit compiler")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a circuit and print it with its resource report.
    Synth(SynthArgs),
    /// Synthesize, simulate and compare the output distribution to the input.
    Simulate(SimulateArgs),
    /// Measure resources over a grid of sizes and splits (CSV).
    Sweep(SweepArgs),
    /// Print predicted width and depth for every split of an n-qubit state.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bidirectional,
    TopDown,
    BottomUp,
    SparseBidirectional,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bidirectional => Method::Bidirectional,
            MethodArg::TopDown => Method::TopDown,
            MethodArg::BottomUp => Method::BottomUp,
            MethodArg::SparseBidirectional => Method::SparseBidirectional,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Qasm,
    Json,
}

/// `--split` value: a level or a selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitArg {
    Level(usize),
    Mode(SplitMode),
}

impl FromStr for SplitArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<usize>() {
            Ok(level) => Ok(SplitArg::Level(level)),
            Err(_) => s.parse().map(SplitArg::Mode),
        }
    }
}

impl SplitArg {
    pub fn resolve(self, n: usize) -> Result<usize> {
        match self {
            SplitArg::Level(s) if s == 0 || s > n => Err(Error::SplitOutOfRange { s, n }),
            SplitArg::Level(s) => Ok(s),
            SplitArg::Mode(mode) => Ok(choose_split(n, mode)),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// JSON input: {"amplitudes": [...]} or {"n": N, "entries": [{"index", "amp"}]}.
    #[arg(long)]
    pub input: PathBuf,
    /// Defaults to sparse-bidirectional for sparse input, bidirectional otherwise.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Split level in [1, n], or auto|sublinear|top-down|bottom-up|exact-balance.
    #[arg(long, default_value = "auto", value_parser = parse_split)]
    pub split: SplitArg,
    /// Reject unnormalized input instead of rescaling it.
    #[arg(long)]
    pub no_normalize: bool,
}

fn parse_split(s: &str) -> std::result::Result<SplitArg, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "qasm")]
    pub emit: Emit,
    /// QASM: keep CSWAP as a gate definition. JSON: dump the unlowered circuit.
    #[arg(long)]
    pub keep_high_level: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// 0 reports exact probabilities.
    #[arg(long, default_value_t = 0)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pub n_min: usize,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    #[arg(long)]
    pub s_min: Option<usize>,
    #[arg(long)]
    pub s_max: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also check every circuit's output marginals.
    #[arg(long)]
    pub simulate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub n: usize,
}

/// Parse arguments, run, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qsprep: error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Synth(a) => run_synth(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Analyze(a) => run_analyze(a),
    }
}

struct Prepared {
    input: InputVector,
    plan: SynthesisPlan,
    circuit: Circuit,
}

fn prepare(a: &InputArgs) -> Result<Prepared> {
    let text = fs::read_to_string(&a.input)?;
    let opts = LoadOptions {
        normalize: !a.no_normalize,
        tol: NORM_TOL,
    };
    let input = parse_input(&text, opts)?;
    let n = input.num_qubits();
    let method: Method = match (a.method, &input) {
        (Some(m), _) => m.into(),
        (None, InputVector::Sparse(_)) => Method::SparseBidirectional,
        (None, InputVector::Dense(_)) => Method::Bidirectional,
    };
    let plan = SynthesisPlan::new(n, a.split.resolve(n)?, method)?;
    let tree = match (method, &input) {
        (Method::SparseBidirectional, InputVector::Sparse(v)) => build_sparse_state_tree(v),
        (Method::SparseBidirectional, InputVector::Dense(v)) => build_sparse_state_tree(&sparsify(v, 0.0)?),
        _ => build_state_tree(&input.to_dense()),
    };
    let circuit = plan.synthesize(&build_angle_tree(&tree))?;
    Ok(Prepared {
        input,
        plan,
        circuit,
    })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn run_synth(a: &SynthArgs) -> Result<()> {
    let p = prepare(&a.input)?;
    let report = serde_json::to_string(&metrics(&p.circuit))?;
    let text = match a.emit {
        Emit::Qasm => export_qasm(
            &if a.keep_high_level {
                p.circuit.clone()
            } else {
                lower(&p.circuit)
            },
            &QasmOptions {
                keep_high_level: a.keep_high_level,
            },
        )?,
        Emit::Json => {
            let c = if a.keep_high_level {
                p.circuit.clone()
            } else {
                lower(&p.circuit)
            };
            c.to_json()? + "\n"
        }
    };
    write_out(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        println!("{report}");
    } else {
        eprintln!("{report}");
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulationReport {
    method: Method,
    n: usize,
    s: usize,
    width: usize,
    shots: usize,
    seed: u64,
    marginals: Distribution,
    target: Vec<f64>,
    mae: f64,
    /// Only for ancilla-free circuits.
    overlap: Option<f64>,
    global_phase: Option<f64>,
}

fn run_simulate(a: &SimulateArgs) -> Result<()> {
    let p = prepare(&a.input)?;
    let target = p.input.to_dense();
    let exact = exact_marginals(&p.circuit)?;
    let marginals = if a.shots == 0 {
        exact
    } else {
        sample(&exact, a.shots, a.seed)?
    };
    let target_dist = Distribution {
        probs: target.probabilities(),
    };
    let err = mae(&marginals, &target_dist)?;
    let (overlap, global_phase) = if p.circuit.width() == p.plan.n
        && p.circuit.output_qubits() == (0..p.plan.n).collect::<Vec<_>>()
    {
        let d = state_distance(&simulate(&p.circuit)?, &target)?;
        (Some(d.overlap), Some(d.global_phase))
    } else {
        (None, None)
    };
    let report = SimulationReport {
        method: p.plan.method,
        n: p.plan.n,
        s: p.plan.s,
        width: p.circuit.width(),
        shots: a.shots,
        seed: a.seed,
        marginals,
        target: target_dist.probs,
        mae: err,
        overlap,
        global_phase,
    };
    write_out(a.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))
}

fn run_sweep(a: &SweepArgs) -> Result<()> {
    if a.n_min == 0 || a.n_min > a.n_max {
        return Err(Error::InvalidInput(format!(
            "bad n range {}..={}",
            a.n_min, a.n_max
        )));
    }
    let s_range = match (a.s_min, a.s_max) {
        (None, None) => None,
        (lo, hi) => Some(lo.unwrap_or(1)..=hi.unwrap_or(usize::MAX)),
    };
    let rows = sweep(&SweepConfig {
        n_range: a.n_min..=a.n_max,
        s_range,
        trials: a.trials,
        seed: a.seed,
        simulate: a.simulate,
    })?;
    write_out(a.out.as_deref(), &to_csv(&rows))?;
    if let Some(worst) = rows.iter().filter_map(|r| r.max_marginal_error).reduce(f64::max) {
        eprintln!("max marginal error: {worst:.3e}");
    }
    Ok(())
}

fn run_analyze(a: &AnalyzeArgs) -> Result<()> {
    if a.n == 0 || a.n > 60 {
        return Err(Error::InvalidInput(format!("n must be in [1, 60], got {}", a.n)));
    }
    let mut out = String::from("n,s,predicted_width,predicted_abstract_depth\n");
    for p in predictions(a.n) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.n, p.s, p.predicted_width, p.predicted_abstract_depth
        ));
    }
    write_out(None, &out)?;
    eprintln!(
        "auto: s={}  sublinear: s={}  exact-balance: s={}",
        choose_split(a.n, SplitMode::Auto),
        choose_split(a.n, SplitMode::Sublinear),
        choose_split(a.n, SplitMode::ExactBalance)
    );
    Ok(())
}
