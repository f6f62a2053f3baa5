//! Command line front end for the clock model library.
//!
//! Results go to stdout or `--out`, diagnostics to stderr. Exit codes:
//! 0 success, 1 internal failure, 2 invalid arguments, 3 a blurred or
//! infeasible result under `--strict`.

mod config;
mod render;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use render::{human, num, Format, Render};
use stoclock::{
    dilated_std_dev, ensemble_gap_spread, expected_time_at_origin, expected_time_detailed,
    gap_statistics, interval_occupancy, minimal_std_dev, nth_event_time_spread, planck_feasible_with,
    simulate_decay_ensemble, simulate_poisson_stream, std_dev, variance_term,
    variance_truncation_index, ClockParams, DilationResult, DilationScenario, Error, ExpectedTime,
    FeasibilityReport, GapStats, MinimalStdDev, SimConfig, SimMode, SpreadResult,
    TransitionProfile, VarianceReport,
};

const EXIT_INTERNAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_STRICT: u8 = 3;

/// Above this many summed terms the origin and truncated-sum diagnostics
/// are skipped rather than allowed to run for minutes.
const SUM_LIMIT: u64 = 100_000_000;

#[derive(Parser)]
#[command(
    name = "stoclock",
    version,
    about = "Stochastic clock model: interval weights, reading moments, Monte Carlo checks, physical limits",
    arg_required_else_help = true
)]
struct Cli {
    /// Optional key=value file mirroring the long flags; command line wins.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write results to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Emit two-column plot data instead of the formatted output.
    #[arg(long, global = true)]
    plot_data: bool,

    /// Exit with code 3 when the result is blurred or infeasible.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interval weight profile and its normalization diagnostics.
    Profile(ProfileArgs),
    /// Expectation and spread of the clock reading.
    Operator(OperatorArgs),
    /// Monte Carlo statistics of the decay ensemble or event stream.
    Simulate(SimulateArgs),
    /// Spread growth under velocity or gravitational time dilation.
    Dilate(DilateArgs),
    /// Planck-floor feasibility and the minimal reachable spread.
    Limits(LimitsArgs),
}

#[derive(Args)]
struct ProfileArgs {
    /// Decay rate lambda in 1/s.
    #[arg(long)]
    lambda: f64,

    /// Number of elementary processes M (odd, >= 3).
    #[arg(long)]
    count: u64,

    /// Relative tail mass dropped from the truncated profile.
    #[arg(long, default_value_t = 1e-12)]
    epsilon: f64,

    /// Half-width of the emitted table: rows cover n in [-N, N].
    #[arg(long, value_name = "N", default_value_t = 25)]
    table_rows: u64,
}

#[derive(Args)]
struct OperatorArgs {
    /// Decay rate lambda in 1/s.
    #[arg(long)]
    lambda: f64,

    /// Number of elementary processes M (odd, >= 3).
    #[arg(long)]
    count: u64,

    /// Relative truncation tolerance of the variance series.
    #[arg(long, default_value_t = 1e-13)]
    epsilon: f64,

    /// Interval state whose expected reading is reported.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    state: i64,

    /// Number of variance terms emitted with --plot-data.
    #[arg(long, value_name = "N", default_value_t = 1000)]
    table_rows: u64,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    PoissonStream,
    DepletingEnsemble,
}

#[derive(Args)]
struct SimulateArgs {
    /// Decay rate lambda in 1/s.
    #[arg(long)]
    lambda: f64,

    /// Number of elementary processes M (odd, >= 3).
    #[arg(long)]
    count: u64,

    /// Sampling mode.
    #[arg(long, value_enum, default_value = "poisson-stream")]
    mode: ModeArg,

    /// RNG seed; with a fixed seed every output byte is reproducible.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Independent replicas for the spread statistics.
    #[arg(long, default_value_t = 1)]
    replicas: u64,

    /// Events drawn per stream replica.
    #[arg(long, default_value_t = 10_000)]
    events: u64,

    /// Also report the spread of the N-th event time over replicas
    /// (stream mode, needs --replicas >= 100).
    #[arg(long, value_name = "N")]
    nth: Option<u64>,

    /// Also tally the occupancy of the first N grid intervals of replica 0.
    #[arg(long, value_name = "N")]
    intervals: Option<u64>,

    /// Also report the spread of the gap after event K over replicas
    /// (ensemble mode, needs --replicas >= 100).
    #[arg(long, value_name = "K")]
    gap_at: Option<u64>,
}

#[derive(Args)]
struct DilateArgs {
    /// Proper spread in seconds; omit it and give --lambda with --count to
    /// use the clock's own spread instead.
    #[arg(long)]
    sigma: Option<f64>,

    /// Decay rate lambda in 1/s.
    #[arg(long)]
    lambda: Option<f64>,

    /// Number of elementary processes M (odd, >= 3).
    #[arg(long)]
    count: Option<u64>,

    /// Velocity as a fraction of the speed of light.
    #[arg(long)]
    beta: Option<f64>,

    /// Enable the gravitational factor; needs --rs and --r.
    #[arg(long)]
    schwarzschild: bool,

    /// Schwarzschild radius in meters.
    #[arg(long, value_name = "METERS")]
    rs: Option<f64>,

    /// Radial coordinate of the clock in meters.
    #[arg(long, value_name = "METERS")]
    r: Option<f64>,
}

#[derive(Args)]
struct LimitsArgs {
    /// Decay rate lambda in 1/s.
    #[arg(long)]
    lambda: f64,

    /// Number of elementary processes M (odd, >= 3).
    #[arg(long)]
    count: u64,

    /// Multiple of the Planck time the interval width must clear.
    #[arg(long, default_value_t = 1e3)]
    safety: f64,

    /// Override the Planck time in seconds.
    #[arg(long, default_value_t = stoclock::PLANCK_TIME)]
    planck: f64,

    /// Upper bound on M for an additional capped minimal-spread search.
    #[arg(long)]
    cap: Option<f64>,
}

enum CmdError {
    Usage(String),
    Internal(String),
}

type CmdResult<T> = Result<T, CmdError>;

fn usage(flag: &str, e: Error) -> CmdError {
    CmdError::Usage(format!("{flag}: {e}"))
}

fn parse_clock(lambda: f64, count: u64) -> CmdResult<ClockParams> {
    ClockParams::new(lambda, count).map_err(|e| match e {
        Error::InvalidRate { .. } => usage("--lambda", e),
        _ => usage("--count", e),
    })
}

struct Outcome {
    text: String,
    violation: bool,
}

fn finish<T: Render>(value: &T, cli: &Cli, violation: bool) -> CmdResult<Outcome> {
    let text = if cli.plot_data {
        value.plot().ok_or_else(|| {
            CmdError::Usage("--plot-data: not available for this subcommand".to_owned())
        })?
    } else {
        match cli.format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(value)
                    .map_err(|e| CmdError::Internal(e.to_string()))?;
                text.push('\n');
                text
            }
            Format::Csv => value.csv(),
            Format::Table => value.table(),
        }
    };
    Ok(Outcome { text, violation })
}

fn dispatch(cli: &Cli) -> CmdResult<Outcome> {
    match &cli.command {
        Command::Profile(a) => finish(&run_profile(a)?, cli, false),
        Command::Operator(a) => finish(&run_operator(a)?, cli, false),
        Command::Simulate(a) => finish(&run_simulate(a)?, cli, false),
        Command::Dilate(a) => {
            let out = run_dilate(a)?;
            let violation = out.result.dilation.is_blurred();
            finish(&out, cli, violation)
        }
        Command::Limits(a) => {
            let out = run_limits(a)?;
            let violation = !out.feasibility.feasible;
            finish(&out, cli, violation)
        }
    }
}

// ---- profile ----

#[derive(Serialize)]
struct ProfileRow {
    n: i64,
    probability: f64,
}

#[derive(Serialize)]
struct ProfileOutput {
    params: ClockParams,
    epsilon: f64,
    truncation_index: u64,
    normalization: f64,
    normalization_excess: f64,
    /// Skipped (null) when the truncation index is too large to sum.
    truncated_sum: Option<f64>,
    analytic_tail: f64,
    residual: Option<f64>,
    table: Vec<ProfileRow>,
}

fn run_profile(a: &ProfileArgs) -> CmdResult<ProfileOutput> {
    let params = parse_clock(a.lambda, a.count)?;
    let profile =
        TransitionProfile::new(params, a.epsilon).map_err(|e| usage("--epsilon", e))?;
    let half = profile.truncation_index.min(a.table_rows) as i64;
    let table = (-half..=half)
        .map(|n| ProfileRow {
            n,
            probability: profile.probability(n),
        })
        .collect();
    let (truncated_sum, residual) = if profile.truncation_index <= SUM_LIMIT {
        (Some(profile.truncated_sum()), Some(profile.residual()))
    } else {
        (None, None)
    };
    Ok(ProfileOutput {
        params,
        epsilon: profile.epsilon,
        truncation_index: profile.truncation_index,
        normalization: profile.normalization(),
        normalization_excess: stoclock::normalization_excess(&params),
        truncated_sum,
        analytic_tail: profile.tail(),
        residual,
        table,
    })
}

impl Render for ProfileOutput {
    fn csv(&self) -> String {
        let mut out = String::from("n,probability\n");
        for row in &self.table {
            out.push_str(&format!("{},{}\n", row.n, num(row.probability)));
        }
        out
    }

    fn table(&self) -> String {
        let mut rows = vec![
            ("lambda", human(self.params.lambda)),
            ("count", self.params.m.to_string()),
            ("tau0", human(self.params.tau0)),
            ("tau", human(self.params.tau)),
            ("epsilon", human(self.epsilon)),
            ("truncation_index", self.truncation_index.to_string()),
            ("normalization", human(self.normalization)),
            ("normalization_excess", human(self.normalization_excess)),
            ("analytic_tail", human(self.analytic_tail)),
        ];
        if let Some(v) = self.truncated_sum {
            rows.push(("truncated_sum", human(v)));
        }
        if let Some(v) = self.residual {
            rows.push(("residual", human(v)));
        }
        let mut out = aligned(&rows);
        out.push('\n');
        out.push_str(&format!("{:>8}  probability\n", "n"));
        for row in &self.table {
            out.push_str(&format!("{:>8}  {}\n", row.n, human(row.probability)));
        }
        out
    }

    fn plot(&self) -> Option<String> {
        let mut out = String::new();
        for row in &self.table {
            out.push_str(&format!("{} {}\n", row.n, num(row.probability)));
        }
        Some(out)
    }
}

// ---- operator ----

#[derive(Serialize)]
struct OperatorOutput {
    params: ClockParams,
    epsilon: f64,
    /// Paired summation over the symmetric weights; exactly zero. Skipped
    /// (null) when the profile is too long to sum.
    origin_expectation: Option<f64>,
    state: i64,
    expected_time: ExpectedTime,
    variance: VarianceReport,
    #[serde(skip)]
    plot_terms: u64,
}

fn run_operator(a: &OperatorArgs) -> CmdResult<OperatorOutput> {
    let params = parse_clock(a.lambda, a.count)?;
    let variance = VarianceReport::compute_with_epsilon(&params, a.epsilon)
        .map_err(|e| usage("--epsilon", e))?;
    let expected = expected_time_detailed(&params, a.state).map_err(|e| usage("--state", e))?;
    let origin_expectation = if params.m <= SUM_LIMIT / 40 {
        Some(expected_time_at_origin(&params))
    } else {
        None
    };
    Ok(OperatorOutput {
        params,
        epsilon: a.epsilon,
        origin_expectation,
        state: a.state,
        expected_time: expected,
        variance,
        plot_terms: a.table_rows,
    })
}

impl OperatorOutput {
    fn stat_rows(&self) -> Vec<(&'static str, String)> {
        let mut rows = vec![("state", self.state.to_string())];
        if let Some(v) = self.origin_expectation {
            rows.push(("origin_expectation", num(v)));
        }
        rows.extend([
            ("expected_time_exact", num(self.expected_time.exact)),
            ("expected_time_finite_m", num(self.expected_time.finite_m)),
            ("series_value", num(self.variance.series_value)),
            ("closed_form", num(self.variance.closed_form)),
            ("closed_form_paper", num(self.variance.closed_form_paper)),
            ("asymptotic", num(self.variance.asymptotic)),
            ("sigma", num(self.variance.sigma)),
            ("sigma_asymptotic", num(self.variance.sigma_asymptotic)),
            (
                "rel_dev_series_vs_closed",
                num(self.variance.rel_dev_series_vs_closed),
            ),
            (
                "rel_dev_vs_asymptotic",
                num(self.variance.rel_dev_vs_asymptotic),
            ),
        ]);
        rows
    }
}

impl Render for OperatorOutput {
    fn csv(&self) -> String {
        stat_csv(&self.stat_rows())
    }

    fn table(&self) -> String {
        let mut rows = vec![
            ("lambda", human(self.params.lambda)),
            ("count", self.params.m.to_string()),
            ("tau", human(self.params.tau)),
        ];
        rows.extend(
            self.stat_rows()
                .into_iter()
                .map(|(k, v)| (k, v.parse::<f64>().map(human).unwrap_or(v))),
        );
        aligned(&rows)
    }

    fn plot(&self) -> Option<String> {
        let k_max = variance_truncation_index(&self.params, self.epsilon)
            .ok()?
            .min(self.plot_terms);
        let mut out = String::new();
        for k in 1..=k_max as i64 {
            out.push_str(&format!("{k} {}\n", num(variance_term(&self.params, k))));
        }
        Some(out)
    }
}

// ---- simulate ----

#[derive(Serialize)]
struct OccupancySummary {
    intervals: u64,
    counts: Vec<u64>,
    fraction_empty: f64,
    fraction_exactly_one: f64,
}

#[derive(Serialize)]
struct SimulateOutput {
    config: SimConfig,
    events: u64,
    gap_stats: GapStats,
    occupancy: Option<OccupancySummary>,
    nth_spread: Option<SpreadResult>,
    ensemble_gap: Option<SpreadResult>,
    #[serde(skip)]
    trace_times: Vec<f64>,
}

fn run_simulate(a: &SimulateArgs) -> CmdResult<SimulateOutput> {
    let params = parse_clock(a.lambda, a.count)?;
    let mode = match a.mode {
        ModeArg::PoissonStream => SimMode::PoissonStream,
        ModeArg::DepletingEnsemble => SimMode::DepletingEnsemble,
    };
    let budget = a.events.max(a.nth.unwrap_or(0)).max(1);
    let config = SimConfig::new(params, mode, a.replicas, a.seed, budget).map_err(|e| match e {
        Error::InvalidReplicas => usage("--replicas", e),
        Error::InvalidBudget => usage("--events", e),
        Error::CapExceeded { .. } => usage("--count", e),
        other => CmdError::Internal(other.to_string()),
    })?;
    let trace = match mode {
        SimMode::PoissonStream => {
            simulate_poisson_stream(&config, 0, a.events).map_err(|e| usage("--events", e))?
        }
        SimMode::DepletingEnsemble => {
            simulate_decay_ensemble(&config, 0).map_err(|e| usage("--count", e))?
        }
    };
    let gap_flag = match mode {
        SimMode::PoissonStream => "--events",
        SimMode::DepletingEnsemble => "--count",
    };
    let gap_stats = gap_statistics(&trace).map_err(|e| usage(gap_flag, e))?;
    let occupancy = a
        .intervals
        .map(|n_max| {
            interval_occupancy(&trace, &params, n_max).map(|h| OccupancySummary {
                intervals: h.total_intervals,
                fraction_empty: h.fraction(0),
                fraction_exactly_one: h.fraction(1),
                counts: h.counts,
            })
        })
        .transpose()
        .map_err(|e| usage("--intervals", e))?;
    let nth_spread = a
        .nth
        .map(|n| nth_event_time_spread(&config, n))
        .transpose()
        .map_err(|e| match e {
            Error::ModeMismatch { .. } => usage("--mode", e),
            Error::TooFewReplicas { .. } => usage("--replicas", e),
            other => usage("--nth", other),
        })?;
    let ensemble_gap = a
        .gap_at
        .map(|k| ensemble_gap_spread(&config, k))
        .transpose()
        .map_err(|e| match e {
            Error::ModeMismatch { .. } => usage("--mode", e),
            Error::TooFewReplicas { .. } => usage("--replicas", e),
            other => usage("--gap-at", other),
        })?;
    Ok(SimulateOutput {
        config,
        events: a.events,
        gap_stats,
        occupancy,
        nth_spread,
        ensemble_gap,
        trace_times: trace.times,
    })
}

impl Render for SimulateOutput {
    fn csv(&self) -> String {
        let mut out = String::from("replica,statistic,value,std_error\n");
        out.push_str(&format!(
            "0,gap_mean,{},{}\n",
            num(self.gap_stats.mean),
            num(self.gap_stats.std_error)
        ));
        out.push_str(&format!("0,gap_std,{},\n", num(self.gap_stats.std)));
        out.push_str(&format!("0,gap_count,{},\n", self.gap_stats.count));
        if let Some(occ) = &self.occupancy {
            out.push_str(&format!("all,intervals,{},\n", occ.intervals));
            out.push_str(&format!("all,fraction_empty,{},\n", num(occ.fraction_empty)));
            out.push_str(&format!(
                "all,fraction_exactly_one,{},\n",
                num(occ.fraction_exactly_one)
            ));
        }
        if let Some(s) = &self.nth_spread {
            push_spread(&mut out, "nth", s);
        }
        if let Some(s) = &self.ensemble_gap {
            push_spread(&mut out, "gap_at", s);
        }
        out
    }

    fn table(&self) -> String {
        let mut rows = vec![
            ("mode", self.config.mode.name().to_owned()),
            ("seed", self.config.seed.to_string()),
            ("replicas", self.config.replicas.to_string()),
            ("events", self.trace_times.len().to_string()),
            ("gap_mean", human(self.gap_stats.mean)),
            ("gap_std", human(self.gap_stats.std)),
            ("gap_std_error", human(self.gap_stats.std_error)),
            ("gap_count", self.gap_stats.count.to_string()),
        ];
        if let Some(occ) = &self.occupancy {
            rows.push(("intervals", occ.intervals.to_string()));
            rows.push(("fraction_empty", human(occ.fraction_empty)));
            rows.push(("fraction_exactly_one", human(occ.fraction_exactly_one)));
        }
        if let Some(s) = &self.nth_spread {
            rows.push(("nth_mean", human(s.mean)));
            rows.push(("nth_std", human(s.std)));
            rows.push(("nth_std_error", human(s.std_error)));
            rows.push(("nth_theory_std", human(s.theory_std)));
        }
        if let Some(s) = &self.ensemble_gap {
            rows.push(("gap_at_mean", human(s.mean)));
            rows.push(("gap_at_std", human(s.std)));
            rows.push(("gap_at_std_error", human(s.std_error)));
            rows.push(("gap_at_theory_std", human(s.theory_std)));
        }
        let refs: Vec<(&str, String)> = rows.iter().map(|(k, v)| (*k, v.clone())).collect();
        aligned(&refs)
    }

    fn plot(&self) -> Option<String> {
        let mut out = String::new();
        for (i, t) in self.trace_times.iter().enumerate() {
            out.push_str(&format!("{} {}\n", i + 1, num(*t)));
        }
        Some(out)
    }
}

fn push_spread(out: &mut String, prefix: &str, s: &SpreadResult) {
    out.push_str(&format!(
        "all,{prefix}_mean,{},{}\n",
        num(s.mean),
        num(s.std_error)
    ));
    out.push_str(&format!("all,{prefix}_std,{},\n", num(s.std)));
    out.push_str(&format!(
        "all,{prefix}_theory_std,{},\n",
        num(s.theory_std)
    ));
}

// ---- dilate ----

#[derive(Serialize)]
struct DilateOutput {
    #[serde(flatten)]
    result: DilationResult,
}

fn run_dilate(a: &DilateArgs) -> CmdResult<DilateOutput> {
    let sigma = match (a.sigma, a.lambda, a.count) {
        (Some(s), _, _) => s,
        (None, Some(lambda), Some(count)) => std_dev(&parse_clock(lambda, count)?).sigma_exact,
        _ => {
            return Err(CmdError::Usage(
                "--sigma: give a proper spread, or both --lambda and --count to derive one"
                    .to_owned(),
            ))
        }
    };
    let scenario = match (a.beta, a.schwarzschild) {
        (Some(beta), false) => DilationScenario::Velocity { beta },
        (None, true) => DilationScenario::Schwarzschild {
            r_s: need(a.rs, "--rs")?,
            r: need(a.r, "--r")?,
        },
        (Some(beta), true) => DilationScenario::Combined {
            beta,
            r_s: need(a.rs, "--rs")?,
            r: need(a.r, "--r")?,
        },
        (None, false) => {
            return Err(CmdError::Usage(
                "--beta: choose a scenario with --beta and/or --schwarzschild".to_owned(),
            ))
        }
    };
    let result = dilated_std_dev(sigma, &scenario).map_err(|e| match e {
        Error::InvalidSigma { .. } => usage("--sigma", e),
        Error::NegativeBeta { .. } | Error::Superluminal { .. } => usage("--beta", e),
        Error::NonpositiveRadius { .. } => usage("--rs", e),
        other => CmdError::Internal(other.to_string()),
    })?;
    Ok(DilateOutput { result })
}

fn need(value: Option<f64>, flag: &str) -> CmdResult<f64> {
    value.ok_or_else(|| CmdError::Usage(format!("{flag}: required with --schwarzschild")))
}

impl Render for DilateOutput {
    fn csv(&self) -> String {
        let mut rows = vec![(
            "state",
            if self.result.dilation.is_blurred() {
                "blurred".to_owned()
            } else {
                "finite".to_owned()
            },
        )];
        if let Some(factor) = self.result.dilation.factor() {
            rows.push(("factor", num(factor)));
        }
        rows.push(("sigma_proper", num(self.result.sigma_proper)));
        if let Some(sigma) = self.result.sigma_observed {
            rows.push(("sigma_observed", num(sigma)));
        }
        stat_csv(&rows)
    }

    fn table(&self) -> String {
        let mut rows = vec![(
            "state",
            if self.result.dilation.is_blurred() {
                "blurred".to_owned()
            } else {
                "finite".to_owned()
            },
        )];
        if let Some(factor) = self.result.dilation.factor() {
            rows.push(("factor", human(factor)));
        }
        rows.push(("sigma_proper", human(self.result.sigma_proper)));
        if let Some(sigma) = self.result.sigma_observed {
            rows.push(("sigma_observed", human(sigma)));
        }
        aligned(&rows)
    }
}

// ---- limits ----

#[derive(Serialize)]
struct LimitsOutput {
    params: ClockParams,
    safety: f64,
    planck_time: f64,
    feasibility: FeasibilityReport,
    capped: Option<MinimalStdDev>,
}

fn run_limits(a: &LimitsArgs) -> CmdResult<LimitsOutput> {
    let params = parse_clock(a.lambda, a.count)?;
    let feasibility = planck_feasible_with(&params, a.safety, a.planck).map_err(|e| match e {
        Error::InvalidSafetyFactor { .. } => usage("--safety", e),
        Error::InvalidFloor { .. } => usage("--planck", e),
        other => CmdError::Internal(other.to_string()),
    })?;
    let capped = match a.cap {
        None => None,
        Some(cap) => match minimal_std_dev(params.tau0, feasibility.tau_floor, Some(cap)) {
            Ok(min) => Some(min),
            Err(Error::FloorExceedsTau0 { .. }) => None,
            Err(e @ Error::InvalidCap { .. }) => return Err(usage("--cap", e)),
            Err(other) => return Err(CmdError::Internal(other.to_string())),
        },
    };
    Ok(LimitsOutput {
        params,
        safety: a.safety,
        planck_time: a.planck,
        feasibility,
        capped,
    })
}

impl Render for LimitsOutput {
    fn csv(&self) -> String {
        let mut rows = vec![
            ("tau", num(self.feasibility.tau)),
            ("tau_floor", num(self.feasibility.tau_floor)),
            ("feasible", self.feasibility.feasible.to_string()),
            ("margin", num(self.feasibility.margin)),
        ];
        if let Some(v) = self.feasibility.sigma_min {
            rows.push(("sigma_min", num(v)));
        }
        if let Some(v) = self.feasibility.m_opt {
            rows.push(("m_opt", num(v)));
        }
        if let Some(capped) = &self.capped {
            rows.push(("capped_sigma_min", num(capped.sigma_min)));
            rows.push(("capped_m_opt", num(capped.m_opt)));
        }
        stat_csv(&rows)
    }

    fn table(&self) -> String {
        let mut rows = vec![
            ("lambda", human(self.params.lambda)),
            ("count", self.params.m.to_string()),
            ("tau", human(self.feasibility.tau)),
            ("safety", human(self.safety)),
            ("planck_time", human(self.planck_time)),
            ("tau_floor", human(self.feasibility.tau_floor)),
            ("feasible", self.feasibility.feasible.to_string()),
            ("margin", human(self.feasibility.margin)),
        ];
        if let Some(v) = self.feasibility.sigma_min {
            rows.push(("sigma_min", human(v)));
        }
        if let Some(v) = self.feasibility.m_opt {
            rows.push(("m_opt", human(v)));
        }
        if let Some(capped) = &self.capped {
            rows.push(("capped_sigma_min", human(capped.sigma_min)));
            rows.push(("capped_m_opt", human(capped.m_opt)));
        }
        aligned(&rows)
    }
}

// ---- shared rendering helpers ----

fn stat_csv(rows: &[(&str, String)]) -> String {
    let mut out = String::from("statistic,value\n");
    for (key, value) in rows {
        out.push_str(&format!("{key},{value}\n"));
    }
    out
}

fn aligned(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (key, value) in rows {
        out.push_str(&format!("{key:<width$}  {value}\n"));
    }
    out
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("--out: cannot write {}: {e}", path.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let argv = match config::merge(argv) {
        Ok(merged) => merged,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version print to stdout and exit 0; argument errors
            // go to stderr and exit 2. clap's exit code encodes which.
            let code = e.exit_code().clamp(0, u8::MAX as i32) as u8;
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            if let Err(msg) = write_output(&outcome.text, cli.out.as_deref()) {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_INTERNAL);
            }
            if outcome.violation && cli.strict {
                ExitCode::from(EXIT_STRICT)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CmdError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
