//! `hybridcap` — query the closed-form scaling laws and drive the
//! Monte-Carlo simulator from the command line.
//!
//! Exit codes: 0 on success, 2 for usage or domain errors, 3 for runtime
//! configuration errors while simulating.

use clap::{Args, Parser, Subcommand};
use hybridcap::montecarlo::{self, SweepSpec, SweepVariable};
use hybridcap::scaling::{self, ScalingPoint};
use hybridcap::topology::NetworkConfig;
use serde::Deserialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hybridcap",
    version,
    about = "Capacity laboratory for hybrid wireless networks with rate-limited backhaul"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the (beta, gamma) operating regime.
    Regime {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
    },
    /// Throughput scaling exponent; with --eta, the generalized
    /// finite-backhaul exponent and full term breakdown.
    Exponent {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        eta: Option<f64>,
    },
    /// Minimum per-link backhaul rate preserving the unlimited-backhaul
    /// throughput scaling.
    Cbs {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        /// Path-loss exponent; only the regime map depends on (beta, gamma),
        /// so this defaults to 3.5.
        #[arg(long, default_value_t = 3.5)]
        alpha: f64,
    },
    /// Is the operating point infrastructure-limited at backhaul n^eta?
    Limited {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        eta: f64,
        #[arg(long, default_value_t = 3.5)]
        alpha: f64,
    },
    /// Monte-Carlo throughput of one configuration (JSON report to stdout).
    Simulate(SimulateArgs),
    /// Run a parameter sweep from a JSON spec and write CSV.
    Sweep(SweepArgs),
    /// Empirical scaling-law verification.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON file with NetworkConfig fields (n, m, l required; radio
    /// constants default to the bench values).
    #[arg(long)]
    config: PathBuf,
    /// Monte-Carlo trials to average (overrides the config; default 20).
    #[arg(long)]
    trials: Option<usize>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep spec: {"base": {...}, "variable": "...", "values": [...],
    /// "trials": T, "seed": S}.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the spec's trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Overrides the spec's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write full per-trial data as JSON next to the CSV.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Fit the growth of the heaviest inter-cell flow count.
    Xki {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Network sizes, ascending.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit the simulated throughput exponent against the closed form.
    Exponent {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        eta: f64,
        /// Network sizes, ascending, spanning at least a decade.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Sweep spec as stored on disk; base fields fall back to bench defaults.
#[derive(Deserialize)]
struct SweepSpecFile {
    base: NetworkConfig,
    variable: SweepVariable,
    values: Vec<f64>,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default)]
    seed: u64,
}

fn default_trials() -> usize {
    200
}

#[derive(Deserialize)]
struct SimulateFile {
    #[serde(flatten)]
    config: NetworkConfig,
    #[serde(default)]
    trials: Option<usize>,
}

enum CliError {
    /// Usage or domain error (exit 2).
    Domain(String),
    /// Runtime configuration error while simulating (exit 3).
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Domain(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Runtime(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Regime { beta, gamma } => cmd_regime(beta, gamma),
        Command::Exponent { alpha, beta, gamma, eta } => cmd_exponent(alpha, beta, gamma, eta),
        Command::Cbs { beta, gamma, alpha } => cmd_cbs(alpha, beta, gamma),
        Command::Limited { beta, gamma, eta, alpha } => cmd_limited(alpha, beta, gamma, eta),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(v) => cmd_verify(v),
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn cmd_regime(beta: f64, gamma: f64) -> Result<(), CliError> {
    // Regime classification ignores alpha; any valid value works.
    let p = ScalingPoint::new(3.5, beta, gamma).map_err(domain)?;
    let regime = p.regime();
    let inequalities = regime_inequalities(beta, gamma);
    print_json(&json!({
        "regime": regime.to_string(),
        "inequalities": inequalities,
    }));
    Ok(())
}

fn regime_inequalities(beta: f64, gamma: f64) -> Vec<String> {
    let mut out = Vec::new();
    let lin = beta + 2.0 * gamma;
    if lin < 1.0 {
        out.push(format!("beta + 2*gamma = {lin} < 1 (regime A)"));
        out.push(if gamma <= beta {
            format!("gamma = {gamma} <= beta = {beta} (minor 1)")
        } else {
            format!("gamma = {gamma} > beta = {beta} (minor 2)")
        });
    } else {
        out.push(format!("beta + 2*gamma = {lin} >= 1 (regime B)"));
        if beta >= 0.5 {
            out.push(format!("beta = {beta} >= 1/2 (minor 1)"));
        } else if beta < 1.0 / 3.0 {
            out.push(format!("beta = {beta} < 1/3 (minor 4)"));
        } else if gamma <= beta {
            out.push(format!("1/3 <= beta = {beta} < 1/2 and gamma <= beta (minor 2)"));
        } else {
            out.push(format!("1/3 <= beta = {beta} < 1/2 and gamma > beta (minor 3)"));
        }
    }
    out
}

fn breakdown_json(b: &scaling::ExponentBreakdown) -> serde_json::Value {
    json!({
        "scheme": b.scheme.to_string(),
        "terms": b.terms.iter().map(|(label, v)| json!({
            "label": label,
            "exponent": v.exponent,
            "polylog_order": v.polylog_order,
            "epsilon_slack": v.epsilon_slack,
            "display": v.to_string(),
        })).collect::<Vec<_>>(),
        "result": value_json(&b.result),
    })
}

fn value_json(v: &scaling::ScalingValue) -> serde_json::Value {
    json!({
        "exponent": v.exponent,
        "polylog_order": v.polylog_order,
        "epsilon_slack": v.epsilon_slack,
        "display": v.to_string(),
    })
}

fn cmd_exponent(alpha: f64, beta: f64, gamma: f64, eta: Option<f64>) -> Result<(), CliError> {
    match eta {
        None => {
            let p = ScalingPoint::new(alpha, beta, gamma).map_err(domain)?;
            let (value, scheme) = scaling::throughput_exponent_infinite(&p);
            print_json(&json!({
                "regime": p.regime().to_string(),
                "exponent": value.exponent,
                "scheme": scheme.to_string(),
                "value": value_json(&value),
            }));
        }
        Some(eta) => {
            let p = ScalingPoint::with_eta(alpha, beta, gamma, eta).map_err(domain)?;
            let g = scaling::generalized_exponent(&p).map_err(domain)?;
            let limited = scaling::is_infrastructure_limited(&p).map_err(domain)?;
            print_json(&json!({
                "regime": p.regime().to_string(),
                "exponent": g.value.exponent,
                "scheme": g.scheme.to_string(),
                "value": value_json(&g.value),
                "infrastructure_limited": limited,
                "ish": breakdown_json(&g.ish),
                "imh": breakdown_json(&g.imh),
            }));
        }
    }
    Ok(())
}

fn cmd_cbs(alpha: f64, beta: f64, gamma: f64) -> Result<(), CliError> {
    let p = ScalingPoint::new(alpha, beta, gamma).map_err(domain)?;
    let cbs = scaling::cbs_exponent(&p);
    let imh = scaling::cbs_protocol_exponent(&p, scaling::Scheme::Imh).map_err(domain)?;
    let ish = scaling::cbs_protocol_exponent(&p, scaling::Scheme::Ish).ok();
    print_json(&json!({
        "regime": p.regime().to_string(),
        "cbs": value_json(&cbs),
        "per_protocol": {
            "ish": ish.map(|v| value_json(&v)),
            "imh": value_json(&imh),
        },
    }));
    Ok(())
}

fn cmd_limited(alpha: f64, beta: f64, gamma: f64, eta: f64) -> Result<(), CliError> {
    let p = ScalingPoint::with_eta(alpha, beta, gamma, eta).map_err(domain)?;
    let limited = scaling::is_infrastructure_limited(&p).map_err(domain)?;
    print_json(&json!({
        "regime": p.regime().to_string(),
        "eta": eta,
        "cbs": value_json(&scaling::cbs_exponent(&p)),
        "infrastructure_limited": limited,
    }));
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(format!("cannot parse {}: {e}", path.display())))
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let file: SimulateFile = read_json(&args.config)?;
    let mut cfg = file.config;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let trials = args.trials.or(file.trials).unwrap_or(20);
    if trials == 0 {
        return Err(CliError::Domain("trials must be at least 1".into()));
    }
    cfg.validate().map_err(domain)?;

    let mut t_ish = Vec::with_capacity(trials);
    let mut t_imh = Vec::with_capacity(trials);
    let mut t_n = Vec::with_capacity(trials);
    let mut bottlenecks = Vec::with_capacity(trials);
    for trial in 0..trials {
        let record = montecarlo::run_trial(&cfg, montecarlo::derive_seed(cfg.seed, trial))
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        t_ish.push(record.t_ish);
        t_imh.push(record.t_imh);
        t_n.push(record.t_n);
        bottlenecks.push(record.bottleneck.to_string());
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    print_json(&json!({
        "config": cfg,
        "trials": trials,
        "t_ish_mean": mean(&t_ish),
        "t_imh_mean": mean(&t_imh),
        "t_n_mean": mean(&t_n),
        "bottlenecks": bottlenecks,
    }));
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let file: SweepSpecFile = read_json(&args.config)?;
    let spec = SweepSpec {
        base: file.base,
        variable: file.variable,
        values: file.values,
        trials: args.trials.unwrap_or(file.trials),
        seed: args.seed.unwrap_or(file.seed),
    };
    if spec.trials == 0 {
        return Err(CliError::Domain("trials must be at least 1".into()));
    }
    spec.base.validate().map_err(domain)?;

    let result = montecarlo::run_sweep(&spec).map_err(|e| match e {
        montecarlo::SweepError::NoValues | montecarlo::SweepError::NoTrials => {
            CliError::Domain(e.to_string())
        }
        other => CliError::Runtime(other.to_string()),
    })?;

    let csv = montecarlo::to_csv_string(&result);
    std::fs::write(&args.out, csv)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", args.out.display())))?;
    if args.verbose {
        let json_path = args.out.with_extension("json");
        let text = serde_json::to_string_pretty(&result).expect("serializable");
        std::fs::write(&json_path, text).map_err(|e| {
            CliError::Runtime(format!("cannot write {}: {e}", json_path.display()))
        })?;
    }

    let mut summary = json!({
        "variable": result.variable.to_string(),
        "points": result.rows.len(),
        "trials": result.trials,
        "out": args.out.display().to_string(),
    });
    if result.variable == SweepVariable::RBs {
        match montecarlo::detect_knee(&result) {
            Ok(knee) => summary["knee_r_bs"] = json!(knee),
            Err(e) => summary["knee_r_bs"] = json!({ "undetected": e.to_string() }),
        }
    }
    print_json(&summary);
    Ok(())
}

fn cmd_verify(v: VerifyCommand) -> Result<(), CliError> {
    match v {
        VerifyCommand::Xki { a, b, n, trials, seed } => {
            let report = montecarlo::verify_xki_scaling(a, b, &n, trials, seed)
                .map_err(domain)?;
            let predicted = scaling::xki_exponent(a, b).map_err(domain)?;
            print_json(&json!({
                "predicted": value_json(&predicted),
                "report": report,
            }));
        }
        VerifyCommand::Exponent { alpha, beta, gamma, eta, n, trials, seed } => {
            let p = ScalingPoint::with_eta(alpha, beta, gamma, eta).map_err(domain)?;
            let template = NetworkConfig::new(n[0], 1, 1);
            let report =
                montecarlo::verify_exponent_empirical(&p, &template, &n, trials, seed)
                    .map_err(domain)?;
            print_json(&json!({
                "fitted_slope": report.fit.slope,
                "fitted_stderr": report.fit.slope_stderr,
                "predicted": value_json(&report.predicted.value),
                "predicted_scheme": report.predicted.scheme.to_string(),
                "rows": report.rows,
            }));
        }
    }
    Ok(())
}
