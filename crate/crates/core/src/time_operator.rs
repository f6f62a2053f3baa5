//! Expectation values and spread of the clock reading.
//!
//! The clock observable is diagonal on the interval grid: reading state `k`
//! yields the time `k * tau`. Moments are taken against the symmetrized
//! interval weights from [`crate::transition_profile`].

use serde::Serialize;

use crate::clock_model::ClockParams;
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::transition_profile::{
    interval_probability, normalization_value, truncation_index, DEFAULT_EPSILON,
};

/// Truncation tolerance used for the variance series when none is given.
pub const SERIES_EPSILON: f64 = 1e-13;

/// Largest interval count for which reports evaluate the variance series
/// term by term. Beyond this the asymptote tau0^2 / M is used; its relative
/// error 1/(240 M^4) is below f64 resolution long before the cutoff.
pub const SERIES_M_LIMIT: u64 = 1_000_000;

/// Expectation of the clock reading in the origin state, summed in pairs.
///
/// The weights are even in `n` and the grid is odd, so the `+n` and `-n`
/// contributions cancel exactly in floating point: `n * tau + (-n) * tau`
/// is `+0.0` bit for bit. The returned value is therefore exactly `0.0`,
/// but it is computed, not asserted.
pub fn expected_time_at_origin(params: &ClockParams) -> f64 {
    let k = truncation_index(params, DEFAULT_EPSILON).expect("default epsilon is in (0, 1)");
    let mut acc = NeumaierSum::new();
    for n in (1..=k as i64).rev() {
        let pos = n as f64 * params.tau;
        let neg = (-n) as f64 * params.tau;
        acc.add((pos + neg) * interval_probability(params, n));
    }
    acc.add(0.0 * interval_probability(params, 0));
    acc.value()
}

/// Expectation of the clock reading in interval state `k`, with the
/// finite-resolution correction kept separate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedTime {
    /// The grid value `k * tau`.
    pub exact: f64,
    /// `k * tau` scaled by the weight normalization, which exceeds one by
    /// about 1/(12 M^2). This is what a literal weighted sum returns when
    /// the weights are not renormalized.
    pub finite_m: f64,
}

/// Expectation of the clock reading in interval state `k`.
///
/// Shifting the summation index reduces the weighted sum to the origin
/// expectation (exactly zero, see [`expected_time_at_origin`]) plus
/// `k * tau` times the weight normalization. With unit normalization the
/// result is the grid value itself.
pub fn expected_time(params: &ClockParams, k: i64) -> Result<f64> {
    Ok(expected_time_detailed(params, k)?.exact)
}

/// Like [`expected_time`], but also reports the value obtained without
/// renormalizing the weights.
pub fn expected_time_detailed(params: &ClockParams, k: i64) -> Result<ExpectedTime> {
    if k.unsigned_abs() > params.n_half {
        return Err(Error::IndexOutOfRange {
            index: k,
            n_half: params.n_half,
        });
    }
    let exact = k as f64 * params.tau;
    Ok(ExpectedTime {
        exact,
        finite_m: exact * normalization_value(params),
    })
}

/// One term of the variance series: `(tau0^2 / (4 M^4)) k^2 exp(-|k| / M)`.
pub fn variance_term(params: &ClockParams, k: i64) -> f64 {
    let kf = k.unsigned_abs() as f64;
    variance_prefactor(params) * (kf * kf) * (-kf / params.m_f64()).exp()
}

/// tau0^2 / (4 M^4), evaluated as a square to keep M^4 out of range trouble.
fn variance_prefactor(params: &ClockParams) -> f64 {
    let mf = params.m_f64();
    let root = params.tau0 / (2.0 * mf * mf);
    root * root
}

/// One-sided tail of `sum k^2 q^k` past index `k`, with `q = exp(-1/M)`.
///
/// Summation by parts gives the closed form
/// `q^(k+1) [ (k+1)^2 / (1-q) + 2 (k+1) q / (1-q)^2 + q (1+q) / (1-q)^3 ]`.
fn weighted_tail(params: &ClockParams, k: u64) -> f64 {
    let mf = params.m_f64();
    let q = (-1.0 / mf).exp();
    let omq = crate::numeric::one_minus_exp_neg(1.0 / mf);
    let kp = (k + 1) as f64;
    (-kp / mf).exp() * (kp * kp / omq + 2.0 * kp * q / (omq * omq) + q * (1.0 + q) / (omq * omq * omq))
}

/// Full one-sided sum `sum_{k>=1} k^2 q^k = q (1+q) / (1-q)^3`.
fn weighted_sum_infinite(params: &ClockParams) -> f64 {
    let mf = params.m_f64();
    let q = (-1.0 / mf).exp();
    let omq = crate::numeric::one_minus_exp_neg(1.0 / mf);
    q * (1.0 + q) / (omq * omq * omq)
}

/// Smallest index `K` past which the variance series tail is at most
/// `epsilon` of the full sum.
///
/// The tail ratio decays like `exp(-K/M)` times a polynomial, so the search
/// doubles until it overshoots and then bisects. Cost is O(log K); the
/// result grows like `M * ln(1/epsilon)`.
pub fn variance_truncation_index(params: &ClockParams, epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon { epsilon });
    }
    let total = weighted_sum_infinite(params);
    let rel = |k: u64| weighted_tail(params, k) / total;
    if rel(1) <= epsilon {
        return Ok(1);
    }
    let mut hi = 2u64;
    while rel(hi) > epsilon {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if rel(mid) <= epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Chunk width for the series sum. Fixed so that the grouping of partial
/// sums, and hence the result, does not depend on the thread count.
const CHUNK: u64 = 1 << 16;

/// Sums `k^2 exp(-k/M)` for `k` in `lo..=hi`, descending.
fn chunk_sum(mf: f64, lo: u64, hi: u64) -> NeumaierSum {
    let mut acc = NeumaierSum::new();
    for k in (lo..=hi).rev() {
        let kf = k as f64;
        acc.add(kf * kf * (-kf / mf).exp());
    }
    acc
}

fn weighted_sum_truncated(params: &ClockParams, k_max: u64) -> f64 {
    let mf = params.m_f64();
    let n_chunks = k_max.div_ceil(CHUNK);
    let ranges: Vec<(u64, u64)> = (0..n_chunks)
        .map(|i| (i * CHUNK + 1, ((i + 1) * CHUNK).min(k_max)))
        .collect();

    #[cfg(feature = "parallel")]
    let partials: Vec<NeumaierSum> = {
        use rayon::prelude::*;
        ranges.par_iter().map(|&(lo, hi)| chunk_sum(mf, lo, hi)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<NeumaierSum> = ranges.iter().map(|&(lo, hi)| chunk_sum(mf, lo, hi)).collect();

    let mut acc = NeumaierSum::new();
    for part in partials.into_iter().rev() {
        acc.merge(part);
    }
    acc.value()
}

/// Sequential twin of [`weighted_sum_truncated`] with identical chunking,
/// kept for the bit-equality check in the tests.
#[cfg(all(test, feature = "parallel"))]
fn weighted_sum_truncated_seq(params: &ClockParams, k_max: u64) -> f64 {
    let mf = params.m_f64();
    let n_chunks = k_max.div_ceil(CHUNK);
    let mut partials = Vec::with_capacity(n_chunks as usize);
    for i in 0..n_chunks {
        partials.push(chunk_sum(mf, i * CHUNK + 1, ((i + 1) * CHUNK).min(k_max)));
    }
    let mut acc = NeumaierSum::new();
    for part in partials.into_iter().rev() {
        acc.merge(part);
    }
    acc.value()
}

/// Variance of the clock reading, summed term by term.
///
/// The series is truncated where the analytic tail drops below `epsilon`
/// of the total and the tail is *not* added back, so the result sits just
/// below the exact value by about `epsilon` in relative terms. Terms are
/// accumulated smallest first in compensated arithmetic, in fixed-size
/// chunks whose combination order does not depend on the thread count.
/// Cost is O(M log(1/epsilon)).
pub fn variance_series(params: &ClockParams, epsilon: f64) -> Result<f64> {
    let k_max = variance_truncation_index(params, epsilon)?;
    Ok(variance_prefactor(params) * (2.0 * weighted_sum_truncated(params, k_max)))
}

/// Variance of the clock reading in closed form:
/// `(tau0^2 / (4 M^4)) * 2 (e^(1/M) + e^(2/M)) / (e^(1/M) - 1)^3`.
///
/// The denominator uses `exp_m1`, so no cancellation occurs for large `M`.
pub fn variance_closed_form(params: &ClockParams) -> f64 {
    2.0 * closed_form_base(params)
}

/// The closed form as usually quoted, which drops the factor two that the
/// summation by parts produces. Exactly half of [`variance_closed_form`]:
/// the implementation shares the base expression, so `paper == closed / 2`
/// holds bit for bit.
pub fn variance_closed_form_paper(params: &ClockParams) -> f64 {
    closed_form_base(params)
}

fn closed_form_base(params: &ClockParams) -> f64 {
    let mf = params.m_f64();
    let em1 = (1.0 / mf).exp_m1();
    variance_prefactor(params) * (((1.0 / mf).exp() + (2.0 / mf).exp()) / (em1 * em1 * em1))
}

/// Large-M limit of the variance: `tau0^2 / M`, i.e. `tau0 * tau`.
pub fn variance_asymptotic(params: &ClockParams) -> f64 {
    params.tau0 * params.tau0 / params.m_f64()
}

/// Spread of the clock reading, in both the evaluated and the limiting form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StdDevResult {
    /// Square root of the variance series (or of the asymptote beyond
    /// [`SERIES_M_LIMIT`], where the two agree to f64 resolution).
    pub sigma_exact: f64,
    /// `tau0 / sqrt(M)`, equivalently `tau * sqrt(M)`.
    pub sigma_asymptotic: f64,
}

/// Spread of the clock reading.
///
/// Because the series is truncated low, `sigma_exact <= sigma_asymptotic`
/// holds for every parameter set, matching the fact that the true variance
/// approaches `tau0^2 / M` from below.
pub fn std_dev(params: &ClockParams) -> StdDevResult {
    let sigma_asymptotic = params.tau0 / params.m_f64().sqrt();
    let sigma_exact = if params.m <= SERIES_M_LIMIT {
        variance_series(params, SERIES_EPSILON)
            .expect("fixed epsilon is in (0, 1)")
            .sqrt()
    } else {
        // Beyond the cutoff the series and the asymptote agree to f64
        // resolution; reusing the same expression keeps the ordering
        // sigma_exact <= sigma_asymptotic exact rather than one ulp loose.
        sigma_asymptotic
    };
    StdDevResult {
        sigma_exact,
        sigma_asymptotic,
    }
}

/// Everything the variance routines produce, for reporting in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceReport {
    pub params: ClockParams,
    /// Term-by-term value for `M` up to [`SERIES_M_LIMIT`], the asymptote beyond.
    pub series_value: f64,
    pub closed_form: f64,
    pub closed_form_paper: f64,
    pub asymptotic: f64,
    pub sigma: f64,
    pub sigma_asymptotic: f64,
    pub rel_dev_series_vs_closed: f64,
    pub rel_dev_vs_asymptotic: f64,
}

impl VarianceReport {
    pub fn compute(params: &ClockParams) -> Self {
        Self::compute_with_epsilon(params, SERIES_EPSILON).expect("fixed epsilon is in (0, 1)")
    }

    pub fn compute_with_epsilon(params: &ClockParams, epsilon: f64) -> Result<Self> {
        let series_value = if params.m <= SERIES_M_LIMIT {
            variance_series(params, epsilon)?
        } else {
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return Err(Error::InvalidEpsilon { epsilon });
            }
            variance_asymptotic(params)
        };
        let closed_form = variance_closed_form(params);
        let asymptotic = variance_asymptotic(params);
        let sigma_asymptotic = params.tau0 / params.m_f64().sqrt();
        let sigma = if params.m <= SERIES_M_LIMIT {
            series_value.sqrt()
        } else {
            sigma_asymptotic
        };
        Ok(VarianceReport {
            params: *params,
            series_value,
            closed_form,
            closed_form_paper: variance_closed_form_paper(params),
            asymptotic,
            sigma,
            sigma_asymptotic,
            rel_dev_series_vs_closed: (series_value - closed_form) / closed_form,
            rel_dev_vs_asymptotic: (series_value - asymptotic) / asymptotic,
        })
    }
}
