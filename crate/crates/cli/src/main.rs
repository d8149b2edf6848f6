//! `hjnet`: evaluate, slice, check and train max-of-affine Hamilton–Jacobi networks.
//!
//! Exit codes: 0 success, 1 a check or comparison failed, 2 usage or input error.

// Guards like `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hjnet::conservation::EntropyNet1D;
use hjnet::convex::{check_assumptions, remove_redundant_neurons};
use hjnet::io::{load_params, save_params};
use hjnet::network::{evaluate, evaluate_batch, QueryPoint};
use hjnet::oracle::{conslaw_compare, hopf_compare, viscous_residual, viscous_residuals, Grid1D, XtBox};
use hjnet::training::{sample_dataset, summarize, train, TrainConfig, Truth};
use hjnet::{presets, Exec, NetworkParams, TieRule};

#[derive(Parser)]
#[command(name = "hjnet", version, about = "Max-of-affine networks that solve Hamilton–Jacobi equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f(x, t).
    Eval {
        params: PathBuf,
        #[arg(long, value_parser = parse_reals, allow_hyphen_values = true)]
        x: Reals,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Sample f on a 2D slice of space at several times (CSV `x1,x2,t,value`).
    Slice(SliceArgs),
    /// Check assumptions (A1)–(A3); exit 1 if any fails.
    Check {
        params: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Drop neurons that never attain the maximum.
    Reduce {
        params: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Entropy solution u = ∂f/∂x of a 1D network (CSV `x,u`); shock lines go to stdout.
    Conslaw {
        params: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, value_parser = parse_reals, allow_hyphen_values = true)]
        x: Reals,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Tie::Lowest)]
        tie: Tie,
    },
    /// Fit a network to samples of a known solution.
    Train(TrainArgs),
    /// Compare a network with an independent numerical reference.
    CompareOracle(OracleArgs),
    /// Write one of the built-in example networks.
    Preset {
        #[arg(value_enum)]
        name: PresetName,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SliceArgs {
    params: PathBuf,
    #[arg(long, value_parser = parse_reals)]
    axes: Reals,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    fix: f64,
    #[arg(long, value_parser = parse_reals, allow_hyphen_values = true)]
    bounds: Reals,
    #[arg(long)]
    grid: usize,
    #[arg(long, value_parser = parse_reals)]
    times: Reals,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// JSON TrainConfig; missing fields take the defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// case1..case4, example3.3, hj1, hj2, or a params JSON file.
    #[arg(long)]
    truth: String,
    /// Space dimension for named truths.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    out: PathBuf,
    /// CSV `step,loss`.
    #[arg(long)]
    metrics: PathBuf,
    /// JSON summary; printed to stdout when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    params: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// hopf: p-lattice spacing.
    #[arg(long, default_value_t = 1e-2)]
    step: f64,
    /// hopf: number of probe points.
    #[arg(long, default_value_t = 200)]
    probes: usize,
    /// hopf: largest probe time; conslaw: final time.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// viscous: smoothing parameter.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// viscous: finite-difference step.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    /// viscous: nodes per axis of the box [-1,1]^n x [0.1,1].
    #[arg(long, default_value_t = 11)]
    nodes: usize,
    /// conslaw: number of cells.
    #[arg(long, default_value_t = 2000)]
    nx: usize,
    /// conslaw: spatial interval.
    #[arg(long, value_parser = parse_reals, allow_hyphen_values = true, default_value = "-2,2")]
    x: Reals,
    #[arg(long, default_value_t = 0.9)]
    cfl: f64,
    /// conslaw: flux; `interp` is the piecewise-linear minimal Hamiltonian.
    #[arg(long, value_enum, default_value_t = Flux::Interp)]
    flux: Flux,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Hopf,
    Viscous,
    Conslaw,
}

#[derive(Clone, Copy, ValueEnum)]
enum Flux {
    Interp,
    NegHalfSquare,
    HalfSquare,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Lowest,
    Highest,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetName {
    #[value(name = "example3.3")]
    L1Cube,
    #[value(name = "example3.4")]
    CrossPolytope,
    #[value(name = "example3.5")]
    MixedNorm,
    Riemann,
}

impl From<Tie> for TieRule {
    fn from(t: Tie) -> Self {
        match t {
            Tie::Lowest => TieRule::LowestIndex,
            Tie::Highest => TieRule::HighestIndex,
        }
    }
}

#[derive(Clone, Debug)]
struct Reals(Vec<f64>);

fn parse_reals(s: &str) -> std::result::Result<Reals, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad number {v:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Reals)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a semantic check failed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Eval { params, x, t } => {
            let params = load(&params)?;
            let v = evaluate(&params, &QueryPoint::new(x.0, t)?)?;
            println!("{v}");
            Ok(true)
        }
        Command::Slice(args) => slice(args).map(|_| true),
        Command::Check { params, tol } => {
            let report = check_assumptions(&load(&params)?, tol)?;
            let out = json!({
                "a1": report.a1,
                "a2": report.a2,
                "a3": report.a3,
                "witnesses": {
                    "a1": report.a1_witness,
                    "a2": report.a2_witness,
                    "a3": report.a3_witness,
                },
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(report.all_pass())
        }
        Command::Reduce { params, out, tol } => {
            let params = load(&params)?;
            let reduced = remove_redundant_neurons(&params, tol)?;
            save_params(&reduced, &out)?;
            println!("{}", json!({"m_before": params.len(), "m_after": reduced.len()}));
            Ok(true)
        }
        Command::Conslaw { params, t, x, nx, out, tie } => conslaw(&params, t, &x, nx, &out, tie.into()),
        Command::Train(args) => train_cmd(args).map(|_| true),
        Command::CompareOracle(args) => compare(args),
        Command::Preset { name, n, out } => {
            let params = match name {
                PresetName::L1Cube => presets::l1_cube(n),
                PresetName::CrossPolytope => presets::cross_polytope(n),
                PresetName::MixedNorm => presets::mixed_norm(n),
                PresetName::Riemann => presets::riemann(),
            };
            save_params(&params, &out)?;
            Ok(true)
        }
    }
}

fn load(path: &Path) -> Result<NetworkParams> {
    load_params(path).with_context(|| format!("loading {}", path.display()))
}

fn slice(args: SliceArgs) -> Result<()> {
    let params = load(&args.params)?;
    let n = params.dim();
    let axes: Vec<usize> = args
        .axes
        .0
        .iter()
        .map(|&a| {
            if a >= 0.0 && a.fract() == 0.0 && (a as usize) < n {
                Ok(a as usize)
            } else {
                Err(anyhow!("axis {a} is not an index below n = {n}"))
            }
        })
        .collect::<Result<_>>()?;
    if axes.len() != 2 || axes[0] == axes[1] {
        bail!("--axes needs two distinct indices");
    }
    let [lo, hi] = args.bounds.0[..] else {
        bail!("--bounds needs lo,hi");
    };
    if !(lo <= hi) {
        bail!("--bounds needs lo <= hi");
    }
    if args.grid < 2 {
        bail!("--grid must be at least 2");
    }
    let coords: Vec<f64> = (0..args.grid)
        .map(|k| lo + (hi - lo) * k as f64 / (args.grid - 1) as f64)
        .collect();
    let mut csv = String::from("x1,x2,t,value\n");
    for &t in &args.times.0 {
        let mut queries = Vec::with_capacity(args.grid * args.grid);
        for &a in &coords {
            for &b in &coords {
                let mut x = vec![args.fix; n];
                x[axes[0]] = a;
                x[axes[1]] = b;
                queries.push(QueryPoint::new(x, t)?);
            }
        }
        let values = evaluate_batch(&params, &queries, Exec::default())?;
        for (q, v) in queries.iter().zip(values) {
            writeln!(csv, "{},{},{},{}", q.x[axes[0]], q.x[axes[1]], t, v)?;
        }
    }
    fs::write(&args.out, csv).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

fn conslaw(params: &Path, t: f64, x: &Reals, nx: usize, out: &Path, tie: TieRule) -> Result<bool> {
    let params = load(params)?;
    let net = EntropyNet1D::new(&params, tie)?;
    let [lo, hi] = x.0[..] else {
        bail!("--x needs lo,hi");
    };
    if nx < 2 || !(lo < hi) {
        bail!("need nx >= 2 and lo < hi");
    }
    let mut csv = String::from("x,u\n");
    for k in 0..nx {
        let xk = lo + (hi - lo) * k as f64 / (nx - 1) as f64;
        writeln!(csv, "{},{}", xk, net.evaluate_entropy(xk, t)?)?;
    }
    fs::write(out, csv).with_context(|| format!("writing {}", out.display()))?;
    let shocks = match net.shock_lines(t.max(f64::MIN_POSITIVE)) {
        Ok(lines) => json!({"assumptions_ok": true, "shocks": lines}),
        Err(hjnet::HjError::AssumptionViolated(msg)) => {
            json!({"assumptions_ok": false, "shocks": [], "reason": msg})
        }
        Err(e) => return Err(e.into()),
    };
    println!("{}", serde_json::to_string_pretty(&shocks)?);
    Ok(true)
}

fn parse_truth(spec: &str, dim: usize, m: usize, seed: u64) -> Result<Truth> {
    Ok(match spec {
        "case1" | "case2" | "case3" | "case4" => {
            let case = spec[4..].parse::<u8>()?;
            Truth::case(case, dim, m, seed)?
        }
        "example3.3" => Truth::Network {
            params: presets::l1_cube(dim),
            hamiltonian: Some(hjnet::training::KnownHamiltonian::NegHalfSquare),
        },
        "hj1" => Truth::L1Concave { n: dim },
        "hj2" => Truth::L1Convex { n: dim },
        path => Truth::Network {
            params: load(Path::new(path))?,
            hamiltonian: None,
        },
    })
}

fn train_cmd(args: TrainArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<TrainConfig>(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => TrainConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.validate()?;
    if args.dim == 0 {
        bail!("--dim must be at least 1");
    }
    let truth = parse_truth(&args.truth, args.dim, config.m, config.seed)?;
    let data = sample_dataset(|x, t| truth.value(x, t), truth.dim(), config.n_train, config.seed)?;
    let run = train(&config, &data)?;
    save_params(&run.final_params, &args.out)?;
    let mut csv = String::from("step,loss\n");
    for r in &run.loss_history {
        writeln!(csv, "{},{}", r.step, r.loss)?;
    }
    fs::write(&args.metrics, csv).with_context(|| format!("writing {}", args.metrics.display()))?;
    let summary = serde_json::to_string_pretty(&summarize(&run, &truth, &config)?)? + "\n";
    match &args.summary {
        Some(path) => fs::write(path, summary).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{summary}"),
    }
    Ok(())
}

fn compare(args: OracleArgs) -> Result<bool> {
    let params = load(&args.params)?;
    let out = match args.mode {
        Mode::Hopf => {
            if params.dim() > 2 {
                bail!("hopf mode supports n <= 2 (lattice size grows as step^-n)");
            }
            let c = hopf_compare(&params, args.step, args.probes, args.t, args.seed, Exec::default())?;
            serde_json::to_value(c)?
        }
        Mode::Viscous => {
            let n = params.dim();
            let bx = XtBox::new(vec![-1.0; n], vec![1.0; n], 0.1, 1.0, args.nodes)?;
            let fine = viscous_residuals(&params, &bx, args.epsilon, args.h, Exec::default())?;
            let coarse = viscous_residual(&params, &bx, args.epsilon, 2.0 * args.h, Exec::default())?;
            let max = fine.iter().copied().fold(0.0, f64::max);
            let bound = 100.0 * args.h * args.h;
            json!({
                "max_abs_err": max,
                "mean_abs_err": fine.iter().sum::<f64>() / fine.len() as f64,
                "bound": bound,
                "pass": max <= bound,
                "ratio_2h_over_h": coarse / max,
            })
        }
        Mode::Conslaw => {
            let net = EntropyNet1D::new(&params, TieRule::LowestIndex)?;
            let [lo, hi] = args.x.0[..] else {
                bail!("--x needs lo,hi");
            };
            let grid = Grid1D::new(lo, hi, args.nx)?;
            let c = match args.flux {
                Flux::Interp => conslaw_compare(
                    &net,
                    |u| net.minimal_hamiltonian(u).finite().unwrap_or(f64::INFINITY),
                    args.t,
                    grid,
                    args.cfl,
                )?,
                Flux::NegHalfSquare => conslaw_compare(&net, |u| -0.5 * u * u, args.t, grid, args.cfl)?,
                Flux::HalfSquare => conslaw_compare(&net, |u| 0.5 * u * u, args.t, grid, args.cfl)?,
            };
            serde_json::to_value(c)?
        }
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(out["pass"].as_bool().unwrap_or(false))
}
