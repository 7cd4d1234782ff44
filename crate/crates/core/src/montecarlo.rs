//! Experiment harness: parameter sweeps with trial averaging and confidence
//! intervals, backhaul-knee detection, and empirical verification of the
//! pair-count and throughput scaling exponents by log-log regression.
//!
//! Reproducibility contract: every trial's seed is derived deterministically
//! from the sweep seed and the trial index, shared across sweep values
//! (common random numbers), so identical specs produce byte-identical
//! results and saturated curves compare exactly.

use crate::protocols::{self, Bottleneck, ProtocolError};
use crate::scaling::{self, GeneralizedThroughput, ScalingPoint};
use crate::topology::{self, NetworkConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep needs at least one value")]
    NoValues,
    #[error("sweep needs at least one trial")]
    NoTrials,
    #[error("sweep value {value} failed: {source}")]
    ValueFailed { value: f64, source: ProtocolError },
    #[error("sweep value {value} is not a valid {variable}: {detail}")]
    BadValue { variable: SweepVariable, value: f64, detail: String },
    #[error("writing results failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, PartialEq)]
pub enum KneeError {
    #[error("knee detection needs an r_bs sweep, got {0}")]
    WrongVariable(SweepVariable),
    #[error("knee detection needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("sweep has not saturated: the last two means differ by {relative_change:.3} (> 1%)")]
    NotSaturated { relative_change: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("scaling fits need at least {needed} trials, got {got}")]
    InsufficientTrials { needed: usize, got: usize },
    #[error("scaling fits need at least {needed} sizes, got {got}")]
    TooFewSizes { needed: usize, got: usize },
    #[error("n values must be ascending and span at least one decade")]
    BadSizeRange,
    #[error("pair-count arguments must be positive, got a={a}, b={b}")]
    BadPairCountArgs { a: f64, b: f64 },
    #[error("no usable sizes survived configuration checks")]
    NothingToFit,
}

/// Which knob a sweep turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    RBs,
    N,
    M,
    L,
    Alpha,
}

impl std::fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SweepVariable::RBs => "r_bs",
            SweepVariable::N => "n",
            SweepVariable::M => "m",
            SweepVariable::L => "l",
            SweepVariable::Alpha => "alpha",
        };
        f.write_str(s)
    }
}

/// A parameter sweep: the base configuration, the variable, its values, and
/// the Monte-Carlo budget.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct SweepSpec {
    pub base: NetworkConfig,
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

/// One evaluated trial.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub t_ish: f64,
    pub t_imh: f64,
    pub t_n: f64,
    pub bottleneck: Bottleneck,
}

/// Aggregates for one sweep value.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub t_ish_mean: f64,
    pub t_imh_mean: f64,
    pub t_n_mean: f64,
    /// 95% confidence half-width of the `t_n` mean.
    pub ci95: f64,
    /// Most frequent binding constraint across trials.
    pub bottleneck_mode: Bottleneck,
    /// Fraction of trials bound by `bottleneck_mode`.
    pub bottleneck_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    /// Per-value trial records, in trial order.
    pub per_trial: Vec<Vec<TrialRecord>>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-trial seed, shared across sweep values (common random
/// numbers): the same trial index reuses the same topology draw wherever the
/// swept knob leaves the topology unchanged, so saturation plateaus compare
/// exactly.
pub fn derive_seed(base: u64, trial: usize) -> u64 {
    splitmix64(splitmix64(base) ^ trial as u64)
}

fn apply_variable(
    base: &NetworkConfig,
    variable: SweepVariable,
    value: f64,
) -> Result<NetworkConfig, SweepError> {
    let mut cfg = base.clone();
    let as_count = |value: f64| -> Result<usize, SweepError> {
        let rounded = value.round();
        if rounded.is_nan() || rounded < 1.0 || (rounded - value).abs() > 1e-9 {
            return Err(SweepError::BadValue {
                variable,
                value,
                detail: "expected a positive integer".into(),
            });
        }
        Ok(rounded as usize)
    };
    match variable {
        SweepVariable::RBs => cfg.r_bs = value,
        SweepVariable::N => cfg.n = as_count(value)?,
        SweepVariable::M => cfg.m = as_count(value)?,
        SweepVariable::L => cfg.l = as_count(value)?,
        SweepVariable::Alpha => cfg.alpha = value,
    }
    Ok(cfg)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn ci95_half_width(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    let var = xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (xs.len() - 1) as f64;
    1.96 * (var / xs.len() as f64).sqrt()
}

fn bottleneck_mode(records: &[TrialRecord]) -> (Bottleneck, f64) {
    const ORDER: [Bottleneck; 4] = [
        Bottleneck::WirelessUplink,
        Bottleneck::WirelessDownlink,
        Bottleneck::Backhaul,
        Bottleneck::WirelessHop,
    ];
    let mut counts = [0usize; 4];
    for r in records {
        let idx = ORDER.iter().position(|&b| b == r.bottleneck).unwrap();
        counts[idx] += 1;
    }
    let best = (0..4).max_by_key(|&i| counts[i]).unwrap();
    (ORDER[best], counts[best] as f64 / records.len() as f64)
}

/// Run one trial of a concrete configuration with a derived seed.
pub fn run_trial(cfg: &NetworkConfig, seed: u64) -> Result<TrialRecord, ProtocolError> {
    let mut cfg = cfg.clone();
    cfg.seed = seed;
    let topo = topology::generate(&cfg)?;
    let mut channel_rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x00C0_FFEE));
    let report = protocols::evaluate(&topo, &cfg, &mut channel_rng)?;
    Ok(TrialRecord {
        t_ish: report.t_ish,
        t_imh: report.t_imh,
        t_n: report.t_n,
        bottleneck: report.bottleneck,
    })
}

/// Run a sweep: `trials` independent topologies and channel draws per value,
/// averaged into one row per value. Deterministic for a fixed spec.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    if spec.values.is_empty() {
        return Err(SweepError::NoValues);
    }
    if spec.trials == 0 {
        return Err(SweepError::NoTrials);
    }
    let mut rows = Vec::with_capacity(spec.values.len());
    let mut per_trial = Vec::with_capacity(spec.values.len());
    for &value in &spec.values {
        let cfg = apply_variable(&spec.base, spec.variable, value)?;
        let mut records = Vec::with_capacity(spec.trials);
        for trial in 0..spec.trials {
            let record = run_trial(&cfg, derive_seed(spec.seed, trial))
                .map_err(|source| SweepError::ValueFailed { value, source })?;
            records.push(record);
        }
        let t_n: Vec<f64> = records.iter().map(|r| r.t_n).collect();
        let (mode, fraction) = bottleneck_mode(&records);
        rows.push(SweepRow {
            value,
            t_ish_mean: mean(&records.iter().map(|r| r.t_ish).collect::<Vec<_>>()),
            t_imh_mean: mean(&records.iter().map(|r| r.t_imh).collect::<Vec<_>>()),
            t_n_mean: mean(&t_n),
            ci95: ci95_half_width(&t_n),
            bottleneck_mode: mode,
            bottleneck_fraction: fraction,
        });
        per_trial.push(records);
    }
    Ok(SweepResult {
        variable: spec.variable,
        trials: spec.trials,
        seed: spec.seed,
        rows,
        per_trial,
    })
}

/// Write the sweep as CSV with the fixed schema
/// `variable,value,t_ish_mean,t_imh_mean,t_n_mean,ci95,bottleneck_mode`.
pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> std::io::Result<()> {
    writeln!(out, "variable,value,t_ish_mean,t_imh_mean,t_n_mean,ci95,bottleneck_mode")?;
    for row in &result.rows {
        writeln!(
            out,
            "{},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
            result.variable,
            row.value,
            row.t_ish_mean,
            row.t_imh_mean,
            row.t_n_mean,
            row.ci95,
            row.bottleneck_mode
        )?;
    }
    Ok(())
}

pub fn to_csv_string(result: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_csv(result, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// Smallest `r_bs` whose mean throughput reaches 99% of the sweep maximum,
/// linearly interpolated between bracketing points. Errors if the sweep has
/// not flattened out (last two means differ by more than 1%).
pub fn detect_knee(result: &SweepResult) -> Result<f64, KneeError> {
    if result.variable != SweepVariable::RBs {
        return Err(KneeError::WrongVariable(result.variable));
    }
    if result.rows.len() < 4 {
        return Err(KneeError::TooFewPoints(result.rows.len()));
    }
    let last = result.rows[result.rows.len() - 1].t_n_mean;
    let prev = result.rows[result.rows.len() - 2].t_n_mean;
    if last > 0.0 {
        let relative_change = (last - prev).abs() / last;
        if relative_change > 0.01 {
            return Err(KneeError::NotSaturated { relative_change });
        }
    }
    let max = result.rows.iter().map(|r| r.t_n_mean).fold(f64::NEG_INFINITY, f64::max);
    let target = 0.99 * max;
    for (j, row) in result.rows.iter().enumerate() {
        if row.t_n_mean >= target {
            if j == 0 {
                return Ok(row.value);
            }
            let (x0, y0) = (result.rows[j - 1].value, result.rows[j - 1].t_n_mean);
            let (x1, y1) = (row.value, row.t_n_mean);
            return Ok(x0 + (target - y0) * (x1 - x0) / (y1 - y0));
        }
    }
    unreachable!("some row attains the maximum");
}

/// Ordinary least squares `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

pub fn ols(points: &[(f64, f64)]) -> Fit {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let dof = (points.len().saturating_sub(2)).max(1) as f64;
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum();
    Fit { slope, intercept, slope_stderr: (ss_res / dof / sxx).sqrt() }
}

/// Which branch of the pair-count law the measurements support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum XkiBranch {
    /// `O(log n)` — balanced or destination-rich (`a ≤ b`).
    LogN,
    /// `Θ(n^{a−b})` — source-rich (`a > b`).
    Power,
}

#[derive(Debug, Clone, Serialize)]
pub struct XkiRow {
    pub n: usize,
    pub cells: usize,
    pub sources_per_cell: usize,
    pub mean_xki: f64,
    pub mean_max_xki: f64,
}

/// Empirical pair-count scaling report.
#[derive(Debug, Clone, Serialize)]
pub struct XkiScalingReport {
    pub rows: Vec<XkiRow>,
    /// Power-law fit of the mean pair count against `n` (primary exponent).
    pub fitted_exponent: f64,
    pub fitted_exponent_stderr: f64,
    /// Power-law fit of the heaviest pair against `n`.
    pub max_fit: Fit,
    /// Fit of `ln(max)` against `ln ln n`; slope near 1 supports `O(log n)`.
    pub loglog_fit: Fit,
    /// Largest observed `max / ln n`, the constant for the log-branch bound.
    pub log_coefficient: f64,
    pub supported_branch: XkiBranch,
}

/// Measure how the per-cell-pair flow count grows when `n^a` sources per
/// cell each pick one of `n^b` destination cells uniformly: brute-force
/// counting over `trials` independent draws per size.
pub fn verify_xki_scaling(
    a: f64,
    b: f64,
    n_values: &[usize],
    trials: usize,
    seed: u64,
) -> Result<XkiScalingReport, FitError> {
    if !(a > 0.0 && b > 0.0) {
        return Err(FitError::BadPairCountArgs { a, b });
    }
    if trials < 20 {
        return Err(FitError::InsufficientTrials { needed: 20, got: trials });
    }
    if n_values.len() < 3 {
        return Err(FitError::TooFewSizes { needed: 3, got: n_values.len() });
    }
    if !n_values.windows(2).all(|w| w[0] < w[1]) {
        return Err(FitError::BadSizeRange);
    }

    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let cells = ((n as f64).powf(b).round() as usize).max(2);
        let sources = ((n as f64).powf(a).round() as usize).max(1);
        let mut sum_mean = 0.0;
        let mut sum_max = 0.0;
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial));
            let mut counts = vec![0u32; cells * cells];
            for i in 0..cells {
                for _ in 0..sources {
                    let k = rand::Rng::random_range(&mut rng, 0..cells);
                    counts[k * cells + i] += 1;
                }
            }
            let max = *counts.iter().max().unwrap() as f64;
            let total: u64 = counts.iter().map(|&c| c as u64).sum();
            sum_mean += total as f64 / (cells * cells) as f64;
            sum_max += max;
        }
        rows.push(XkiRow {
            n,
            cells,
            sources_per_cell: sources,
            mean_xki: sum_mean / trials as f64,
            mean_max_xki: sum_max / trials as f64,
        });
    }

    let mean_points: Vec<(f64, f64)> =
        rows.iter().map(|r| ((r.n as f64).ln(), r.mean_xki.ln())).collect();
    let max_points: Vec<(f64, f64)> =
        rows.iter().map(|r| ((r.n as f64).ln(), r.mean_max_xki.ln())).collect();
    let loglog_points: Vec<(f64, f64)> =
        rows.iter().map(|r| ((r.n as f64).ln().ln(), r.mean_max_xki.ln())).collect();
    let mean_fit = ols(&mean_points);
    let max_fit = ols(&max_points);
    let loglog_fit = ols(&loglog_points);
    let log_coefficient = rows
        .iter()
        .map(|r| r.mean_max_xki / (r.n as f64).ln())
        .fold(0.0, f64::max);
    let supported_branch =
        if mean_fit.slope < 0.05 { XkiBranch::LogN } else { XkiBranch::Power };

    Ok(XkiScalingReport {
        rows,
        fitted_exponent: mean_fit.slope,
        fitted_exponent_stderr: mean_fit.slope_stderr,
        max_fit,
        loglog_fit,
        log_coefficient,
        supported_branch,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentRow {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub r_bs: f64,
    pub mean_t_n: f64,
    pub ci95: f64,
    /// Set when this size failed configuration checks and was skipped.
    pub error: Option<String>,
}

/// Empirical throughput-exponent report: measured log-log slope next to the
/// closed-form prediction.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentFitReport {
    pub rows: Vec<ExponentRow>,
    pub fit: Fit,
    pub predicted: GeneralizedThroughput,
}

/// Simulate the network across sizes `n` with `m = round(n^{β/2})²`
/// (the nearest realizable BS grid), `l = round(n^γ)` and `r_bs = n^η`,
/// then fit `log T_n` against `log n` and report the closed-form exponent
/// alongside.
pub fn verify_exponent_empirical(
    point: &ScalingPoint,
    template: &NetworkConfig,
    n_values: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ExponentFitReport, FitError> {
    if trials == 0 {
        return Err(FitError::InsufficientTrials { needed: 1, got: trials });
    }
    if n_values.len() < 3 {
        return Err(FitError::TooFewSizes { needed: 3, got: n_values.len() });
    }
    let ascending = n_values.windows(2).all(|w| w[0] < w[1]);
    let decade = *n_values.last().unwrap() as f64 >= 10.0 * n_values[0] as f64;
    if !ascending || !decade {
        return Err(FitError::BadSizeRange);
    }
    let eta = point.eta.expect("verify_exponent_empirical needs eta");
    let predicted = scaling::generalized_exponent(point).expect("validated point");

    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let nf = n as f64;
        let grid = nf.powf(point.beta / 2.0).round().max(1.0) as usize;
        let mut cfg = template.clone();
        cfg.n = n;
        cfg.m = grid * grid;
        cfg.l = (nf.powf(point.gamma).round() as usize).max(1);
        cfg.alpha = point.alpha;
        cfg.r_bs = nf.powf(eta);
        if let Err(e) = cfg.validate() {
            rows.push(ExponentRow {
                n,
                m: cfg.m,
                l: cfg.l,
                r_bs: cfg.r_bs,
                mean_t_n: f64::NAN,
                ci95: f64::NAN,
                error: Some(e.to_string()),
            });
            continue;
        }
        let mut samples = Vec::with_capacity(trials);
        let mut failure = None;
        for trial in 0..trials {
            match run_trial(&cfg, derive_seed(seed, trial)) {
                Ok(r) => samples.push(r.t_n),
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        match failure {
            Some(e) => rows.push(ExponentRow {
                n,
                m: cfg.m,
                l: cfg.l,
                r_bs: cfg.r_bs,
                mean_t_n: f64::NAN,
                ci95: f64::NAN,
                error: Some(e),
            }),
            None => rows.push(ExponentRow {
                n,
                m: cfg.m,
                l: cfg.l,
                r_bs: cfg.r_bs,
                mean_t_n: mean(&samples),
                ci95: ci95_half_width(&samples),
                error: None,
            }),
        }
    }

    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error.is_none() && r.mean_t_n > 0.0)
        .map(|r| ((r.n as f64).ln(), r.mean_t_n.ln()))
        .collect();
    if points.len() < 3 {
        return Err(FitError::NothingToFit);
    }
    Ok(ExponentFitReport { rows, fit: ols(&points), predicted })
}
