//! Elementary-process density and the interval-averaged transition profile.
//!
//! The probability that a process decays into the interval of width `tau`
//! around the grid point `n*tau` is `(1/M) exp(-n/M)` one-sided, and
//! `(1/(2M)) exp(-|n|/M)` once symmetrized over both signs of `n`. The factor
//! 1/2 makes the two-sided profile sum to (almost exactly) one.

use serde::Serialize;

use crate::clock_model::ClockParams;
use crate::error::{Error, Result};
use crate::numeric::{one_minus_exp_neg, NeumaierSum};

/// Default relative bound on the dropped tail mass of truncated sums; well
/// above binary64 noise accumulated over the summed terms, well below every
/// tolerance checked against these sums.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Exponential decay density `lambda * exp(-lambda (t - t0))` [1/s].
///
/// Integrates to one over `[t0, inf)`.
pub fn decay_density(params: &ClockParams, t: f64, t0: f64) -> Result<f64> {
    if t < t0 {
        return Err(Error::TimeOrdering { t, t0 });
    }
    Ok(params.lambda * (-params.lambda * (t - t0)).exp())
}

/// One-sided interval probability `lambda tau exp(-lambda n tau) = (1/M) exp(-n/M)`,
/// defined for positive grid points only (`n >= 1`).
pub fn interval_probability_raw(params: &ClockParams, n: i64) -> Result<f64> {
    if n < 1 {
        return Err(Error::NonpositiveIndex { index: n });
    }
    Ok(raw_probability(params, n))
}

#[inline]
fn raw_probability(params: &ClockParams, n: i64) -> f64 {
    (n as f64 / -params.m_f64()).exp() / params.m_f64()
}

/// Symmetrized interval probability `(1/(2M)) exp(-|n|/M)`, defined for every
/// integer `n`.
///
/// Evaluated as half the one-sided value of `|n|`, so the factor-1/2
/// bookkeeping and the even symmetry `p(n) = p(-n)` are exact by
/// construction.
#[inline]
pub fn interval_probability(params: &ClockParams, n: i64) -> f64 {
    0.5 * raw_probability(params, n.unsigned_abs() as i64)
}

/// Exact value of the two-sided infinite sum `(1/(2M)) sum_n exp(-|n|/M)`.
///
/// In closed form this is `x coth(x)` with `x = 1/(2M)`; it approaches 1
/// from above with an excess of about `1/(12 M^2)`. The exact value is
/// returned rather than 1 so the quality of the unit-norm approximation is
/// itself observable.
pub fn normalization_value(params: &ClockParams) -> f64 {
    1.0 + normalization_excess(params)
}

/// `normalization_value - 1`, evaluated without cancellation.
///
/// For small `x = 1/(2M)` the excess `x coth(x) - 1` is taken from its
/// Taylor series; direct subtraction would return 0 once the excess drops
/// below binary64 resolution around 1.
pub fn normalization_excess(params: &ClockParams) -> f64 {
    let x = 0.5 / params.m_f64();
    if x < 0.05 {
        let x2 = x * x;
        let x4 = x2 * x2;
        // x coth x = 1 + x^2/3 - x^4/45 + 2 x^6/945 - x^8/4725 + ...
        // With x < 0.05 the dropped x^10 term is below 1e-17 of the total.
        x2 / 3.0 - x4 / 45.0 + 2.0 * x4 * x2 / 945.0 - x4 * x4 / 4725.0
    } else {
        let q = (-2.0 * x).exp();
        x * (1.0 + q) / one_minus_exp_neg(2.0 * x) - 1.0
    }
}

/// Analytic mass of the two-sided tail beyond `|n| = k`:
/// `2 sum_{n>k} (1/(2M)) exp(-n/M) = (1/M) exp(-(k+1)/M) / (1 - exp(-1/M))`.
pub fn analytic_tail(params: &ClockParams, k: u64) -> f64 {
    let m = params.m_f64();
    (-((k + 1) as f64) / m).exp() / (m * one_minus_exp_neg(1.0 / m))
}

/// Smallest `k >= 1` whose analytic tail mass is at most `epsilon`.
///
/// Solved in closed form from the geometric tail and then nudged so that
/// `tail(k) <= epsilon < tail(k-1)` holds exactly for [`analytic_tail`].
/// Grows as `M ln(1/epsilon)`.
pub fn truncation_index(params: &ClockParams, epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon { epsilon });
    }
    let m = params.m_f64();
    let a = epsilon * m * one_minus_exp_neg(1.0 / m);
    let mut k = if a >= 1.0 {
        1
    } else {
        let guess = (-m * a.ln() - 1.0).ceil();
        guess.max(1.0) as u64
    };
    while analytic_tail(params, k) > epsilon {
        k += 1;
    }
    while k > 1 && analytic_tail(params, k - 1) <= epsilon {
        k -= 1;
    }
    Ok(k)
}

/// Sum of `interval_probability` over `|n| <= k`, compensated, accumulated
/// from the smallest terms upward.
pub fn truncated_sum(params: &ClockParams, k: u64) -> f64 {
    let mut wing = NeumaierSum::new();
    for n in (1..=k as i64).rev() {
        wing.add(interval_probability(params, n));
    }
    let mut total = NeumaierSum::new();
    total.add(2.0 * wing.value());
    total.add(interval_probability(params, 0));
    total.value()
}

/// Truncated interval-probability table with its tail bookkeeping.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TransitionProfile {
    pub params: ClockParams,
    /// Requested relative bound on the dropped tail mass.
    pub epsilon: f64,
    /// Probabilities for `|n| > truncation_index` are covered by the
    /// analytic tail.
    pub truncation_index: u64,
}

impl TransitionProfile {
    pub fn new(params: ClockParams, epsilon: f64) -> Result<Self> {
        let truncation_index = truncation_index(&params, epsilon)?;
        Ok(Self {
            params,
            epsilon,
            truncation_index,
        })
    }

    #[inline]
    pub fn probability(&self, n: i64) -> f64 {
        interval_probability(&self.params, n)
    }

    pub fn normalization(&self) -> f64 {
        normalization_value(&self.params)
    }

    /// Tail mass beyond the truncation index.
    pub fn tail(&self) -> f64 {
        analytic_tail(&self.params, self.truncation_index)
    }

    /// Truncated sum over `|n| <= truncation_index`. Cost grows with the
    /// truncation index, i.e. as `M ln(1/epsilon)`.
    pub fn truncated_sum(&self) -> f64 {
        truncated_sum(&self.params, self.truncation_index)
    }

    /// Signed relative residual `(truncated_sum + tail - normalization) / normalization`.
    pub fn residual(&self) -> f64 {
        let norm = self.normalization();
        (self.truncated_sum() + self.tail() - norm) / norm
    }
}
