//! A stochastic model of an intrinsic clock.
//!
//! A large number M of identical exponential decay processes partitions the
//! mean lifetime tau0 into M intervals of width tau = tau0 / M, one decay
//! per interval on average. Reading the clock means asking which interval a
//! decay fell into; the answer carries a symmetrized exponential weight over
//! neighboring intervals. This crate computes that weight profile and its
//! normalization, the first two moments of the reading (the expectation is
//! the grid time itself, the spread is tau0 / sqrt(M) up to a 1/M^4
//! correction), Monte Carlo evidence for the underlying assumptions, and
//! the physical limits: how small the spread can get before the interval
//! width hits the Planck scale, and how time dilation inflates it.
//!
//! The `parallel` feature (on by default) runs replica simulations and long
//! series sums on a thread pool. Results are bit-identical with and without
//! it, and independent of the thread count.

pub mod clock_model;
pub mod decay_sim;
pub mod dilation_limits;
pub mod error;
pub mod numeric;
pub mod time_operator;
pub mod transition_profile;

pub use clock_model::{ClockParams, TimeGrid};
pub use decay_sim::{
    ensemble_gap_spread, gap_statistics, interval_occupancy, nth_event_time,
    nth_event_time_spread, simulate_decay_ensemble, simulate_poisson_stream, EventTrace, GapStats,
    OccupancyHistogram, SimConfig, SimMode, SpreadResult,
};
pub use dilation_limits::{
    dilated_std_dev, dilation_factor, lorentz_factor, minimal_std_dev, planck_feasible,
    planck_feasible_with, schwarzschild_factor, Dilation, DilationResult, DilationScenario,
    FeasibilityReport, MinimalStdDev, PLANCK_TIME,
};
pub use error::{Error, Result};
pub use time_operator::{
    expected_time, expected_time_at_origin, expected_time_detailed, std_dev, variance_asymptotic,
    variance_closed_form, variance_closed_form_paper, variance_series, variance_term,
    variance_truncation_index, ExpectedTime, StdDevResult, VarianceReport,
};
pub use transition_profile::{
    analytic_tail, decay_density, interval_probability, interval_probability_raw,
    normalization_excess, normalization_value, truncated_sum, truncation_index, TransitionProfile,
};
