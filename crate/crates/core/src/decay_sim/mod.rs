//! Monte Carlo engine for the underlying decay system.
//!
//! Two pictures of the same physics are simulated. The depleting ensemble
//! draws one exponential lifetime for each of the M processes, so the event
//! rate falls as the ensemble empties and the gap after the k-th event has
//! mean tau0 / (M - k). The Poisson stream keeps the initial rate M*lambda
//! forever, which is the constant-gap idealization behind the interval grid.
//! Running both makes the distance between the pictures measurable.
//!
//! Everything is deterministic: a (seed, replica) pair fixes every draw, and
//! results do not depend on how replicas are scheduled across threads.

mod rng;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clock_model::ClockParams;
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use rng::{exp_gap, replica_rng};

/// Default limit on lifetimes held in memory per ensemble replica.
pub const DEFAULT_ENSEMBLE_CAP: u64 = 100_000_000;

/// Replica floor below which spread estimates are refused.
pub const MIN_SPREAD_REPLICAS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    /// M processes, each decaying once; events are the sorted lifetimes.
    DepletingEnsemble,
    /// Constant-rate stream at M*lambda; events are cumulative exponential gaps.
    PoissonStream,
}

impl SimMode {
    pub fn name(self) -> &'static str {
        match self {
            SimMode::DepletingEnsemble => "depleting-ensemble",
            SimMode::PoissonStream => "poisson-stream",
        }
    }
}

impl fmt::Display for SimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub params: ClockParams,
    pub mode: SimMode,
    pub replicas: u64,
    pub seed: u64,
    /// Maximum events a single stream replica may produce.
    pub event_budget: u64,
    /// Maximum M admitted in ensemble mode; one lifetime is held in memory
    /// per process.
    pub ensemble_cap: u64,
}

impl SimConfig {
    pub fn new(
        params: ClockParams,
        mode: SimMode,
        replicas: u64,
        seed: u64,
        event_budget: u64,
    ) -> Result<Self> {
        if replicas < 1 {
            return Err(Error::InvalidReplicas);
        }
        if event_budget < 1 {
            return Err(Error::InvalidBudget);
        }
        let config = SimConfig {
            params,
            mode,
            replicas,
            seed,
            event_budget,
            ensemble_cap: DEFAULT_ENSEMBLE_CAP,
        };
        config.check_cap()?;
        Ok(config)
    }

    pub fn with_ensemble_cap(mut self, cap: u64) -> Result<Self> {
        self.ensemble_cap = cap;
        self.check_cap()?;
        Ok(self)
    }

    fn check_cap(&self) -> Result<()> {
        if self.mode == SimMode::DepletingEnsemble && self.params.m > self.ensemble_cap {
            return Err(Error::CapExceeded {
                m: self.params.m,
                cap: self.ensemble_cap,
            });
        }
        Ok(())
    }

    fn require_mode(&self, expected: SimMode) -> Result<()> {
        if self.mode != expected {
            return Err(Error::ModeMismatch {
                expected: expected.name(),
                actual: self.mode.name(),
            });
        }
        Ok(())
    }

    fn check_budget(&self, requested: u64) -> Result<()> {
        if requested == 0 {
            return Err(Error::NonpositiveIndex { index: 0 });
        }
        if requested > self.event_budget {
            return Err(Error::BudgetExceeded {
                requested,
                budget: self.event_budget,
            });
        }
        Ok(())
    }
}

/// Event times of one replica, ascending. Exact ties have probability zero
/// and are kept as generated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventTrace {
    pub times: Vec<f64>,
    pub mode: SimMode,
    pub seed: u64,
    pub replica: u64,
}

/// Lifetimes of all M processes of one replica, sorted ascending.
pub fn simulate_decay_ensemble(config: &SimConfig, replica: u64) -> Result<EventTrace> {
    config.require_mode(SimMode::DepletingEnsemble)?;
    config.check_cap()?;
    let mut rng = replica_rng(config.seed, replica);
    let lambda = config.params.lambda;
    let mut times: Vec<f64> = (0..config.params.m)
        .map(|_| exp_gap(&mut rng, lambda))
        .collect();
    // Sorting a fixed multiset gives the same sequence no matter the
    // algorithm or thread count, so parallel sorting keeps determinism.
    #[cfg(feature = "parallel")]
    {
        use rayon::slice::ParallelSliceMut;
        times.par_sort_unstable_by(f64::total_cmp);
    }
    #[cfg(not(feature = "parallel"))]
    times.sort_unstable_by(f64::total_cmp);
    Ok(EventTrace {
        times,
        mode: config.mode,
        seed: config.seed,
        replica,
    })
}

/// The first `count` events of one constant-rate replica.
pub fn simulate_poisson_stream(config: &SimConfig, replica: u64, count: u64) -> Result<EventTrace> {
    config.require_mode(SimMode::PoissonStream)?;
    config.check_budget(count)?;
    let rate = config.params.m_f64() * config.params.lambda;
    let mut rng = replica_rng(config.seed, replica);
    let mut acc = NeumaierSum::new();
    let mut times = Vec::with_capacity(count as usize);
    for _ in 0..count {
        acc.add(exp_gap(&mut rng, rate));
        times.push(acc.value());
    }
    Ok(EventTrace {
        times,
        mode: config.mode,
        seed: config.seed,
        replica,
    })
}

/// Time of the n-th event of one stream replica, without storing the trace.
/// Bit-identical to `simulate_poisson_stream(..).times[n - 1]`.
pub fn nth_event_time(config: &SimConfig, replica: u64, n: u64) -> Result<f64> {
    config.require_mode(SimMode::PoissonStream)?;
    config.check_budget(n)?;
    let rate = config.params.m_f64() * config.params.lambda;
    let mut rng = replica_rng(config.seed, replica);
    let mut acc = NeumaierSum::new();
    for _ in 0..n {
        acc.add(exp_gap(&mut rng, rate));
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapStats {
    pub mean: f64,
    /// Sample standard deviation, n-1 denominator; 0.0 for a single gap.
    pub std: f64,
    /// Standard error of the mean gap.
    pub std_error: f64,
    pub count: usize,
}

/// Mean and spread of consecutive event gaps of a trace.
pub fn gap_statistics(trace: &EventTrace) -> Result<GapStats> {
    let events = trace.times.len();
    if events < 2 {
        return Err(Error::TooFewEvents { events });
    }
    let count = events - 1;
    let nf = count as f64;
    let mut acc = NeumaierSum::new();
    for w in trace.times.windows(2) {
        acc.add(w[1] - w[0]);
    }
    let mean = acc.value() / nf;
    let mut sq = NeumaierSum::new();
    for w in trace.times.windows(2) {
        let d = (w[1] - w[0]) - mean;
        sq.add(d * d);
    }
    let std = if count > 1 {
        (sq.value() / (nf - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(GapStats {
        mean,
        std,
        std_error: std / nf.sqrt(),
        count,
    })
}

/// Interval occupancy tally: `counts[j]` intervals hold exactly `j` events.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupancyHistogram {
    pub counts: Vec<u64>,
    pub total_intervals: u64,
}

impl OccupancyHistogram {
    /// Fraction of intervals holding exactly `j` events.
    pub fn fraction(&self, j: usize) -> f64 {
        let c = self.counts.get(j).copied().unwrap_or(0);
        c as f64 / self.total_intervals as f64
    }
}

/// Bins the events of a trace into the grid intervals 1..=n_max.
///
/// An event at time `t` lands in interval `floor(t / tau + 0.5)`, which
/// realizes the half-open convention: the lower edge of an interval belongs
/// to it, the upper edge to the next. Events before the first interval or
/// past `n_max` are ignored.
pub fn interval_occupancy(
    trace: &EventTrace,
    params: &ClockParams,
    n_max: u64,
) -> Result<OccupancyHistogram> {
    if n_max == 0 {
        return Err(Error::NonpositiveIndex { index: 0 });
    }
    let last = trace.times.last().copied().unwrap_or(0.0);
    let requested = n_max as f64 * params.tau;
    if requested > last {
        return Err(Error::RangeExceedsTrace { requested, last });
    }
    let mut per_interval = vec![0u32; n_max as usize];
    for &t in &trace.times {
        let n = (t / params.tau + 0.5).floor();
        if n >= 1.0 && n <= n_max as f64 {
            per_interval[n as usize - 1] += 1;
        }
    }
    let mut counts: Vec<u64> = Vec::new();
    for &c in &per_interval {
        let j = c as usize;
        if counts.len() <= j {
            counts.resize(j + 1, 0);
        }
        counts[j] += 1;
    }
    Ok(OccupancyHistogram {
        counts,
        total_intervals: n_max,
    })
}

/// Replica statistics of a scalar observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpreadResult {
    pub mean: f64,
    /// Sample standard deviation across replicas, n-1 denominator.
    pub std: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// Predicted standard deviation of the observable.
    pub theory_std: f64,
    pub replicas: u64,
}

/// Spread of the n-th event time across stream replicas.
///
/// The n-th event is a sum of n independent gaps, so its time has mean
/// `n * tau` and standard deviation `tau * sqrt(n)`; at `n = M` the latter
/// is the clock spread tau0 / sqrt(M).
pub fn nth_event_time_spread(config: &SimConfig, n: u64) -> Result<SpreadResult> {
    config.require_mode(SimMode::PoissonStream)?;
    config.check_budget(n)?;
    require_replicas(config)?;
    let samples = map_replicas(config.replicas, |r| {
        nth_event_time(config, r, n).expect("config validated above")
    });
    let (mean, std) = mean_std(&samples);
    Ok(SpreadResult {
        mean,
        std,
        std_error: std / (config.replicas as f64).sqrt(),
        theory_std: config.params.tau * (n as f64).sqrt(),
        replicas: config.replicas,
    })
}

/// Spread of the gap after the k-th event across ensemble replicas.
///
/// `k = 0` measures the first event time. The gap after event k is the
/// minimum of the M - k remaining lifetimes, exponential with mean
/// tau0 / (M - k); mean and standard deviation coincide, and `theory_std`
/// carries that value.
pub fn ensemble_gap_spread(config: &SimConfig, k: u64) -> Result<SpreadResult> {
    config.require_mode(SimMode::DepletingEnsemble)?;
    config.check_cap()?;
    require_replicas(config)?;
    if k >= config.params.m {
        return Err(Error::GapIndexOutOfRange {
            index: k,
            m: config.params.m,
        });
    }
    let idx = k as usize;
    let samples = map_replicas(config.replicas, |r| {
        let trace = simulate_decay_ensemble(config, r).expect("config validated above");
        if idx == 0 {
            trace.times[0]
        } else {
            trace.times[idx] - trace.times[idx - 1]
        }
    });
    let (mean, std) = mean_std(&samples);
    Ok(SpreadResult {
        mean,
        std,
        std_error: std / (config.replicas as f64).sqrt(),
        theory_std: config.params.tau0 / (config.params.m - k) as f64,
        replicas: config.replicas,
    })
}

fn require_replicas(config: &SimConfig) -> Result<()> {
    if config.replicas < MIN_SPREAD_REPLICAS {
        return Err(Error::TooFewReplicas {
            replicas: config.replicas,
            required: MIN_SPREAD_REPLICAS,
        });
    }
    Ok(())
}

/// Evaluates `f` for every replica index, in parallel when enabled. The
/// result vector is ordered by replica, so any later reduction runs in a
/// fixed order and the outcome is independent of scheduling.
fn map_replicas<T, F>(replicas: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..replicas).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..replicas).map(f).collect()
    }
}

fn mean_std(samples: &[f64]) -> (f64, f64) {
    let nf = samples.len() as f64;
    let mut acc = NeumaierSum::new();
    for &x in samples {
        acc.add(x);
    }
    let mean = acc.value() / nf;
    let mut sq = NeumaierSum::new();
    for &x in samples {
        let d = x - mean;
        sq.add(d * d);
    }
    let std = if samples.len() > 1 {
        (sq.value() / (nf - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}
