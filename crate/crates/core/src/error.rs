use thiserror::Error;

/// Errors produced by the clock model, the analytic profile/operator
/// computations, and the Monte Carlo engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("decay rate must be positive and finite, got {lambda}")]
    InvalidRate { lambda: f64 },

    #[error("process count must be an odd integer >= 3, got {m}; {}", nearest_odd_hint(*.m))]
    InvalidCount { m: u64 },

    #[error("grid index {index} outside [-{n_half}, +{n_half}]")]
    IndexOutOfRange { index: i64, n_half: u64 },

    #[error("time {t} precedes the start time {t0}")]
    TimeOrdering { t: f64, t0: f64 },

    #[error("one-sided interval probability requires index >= 1, got {index}")]
    NonpositiveIndex { index: i64 },

    #[error("epsilon must lie strictly in (0, 1), got {epsilon}")]
    InvalidEpsilon { epsilon: f64 },

    #[error("replica count must be >= 1")]
    InvalidReplicas,

    #[error("event budget must be >= 1")]
    InvalidBudget,

    #[error(
        "M = {m} exceeds the depleting-ensemble cap of {cap} lifetimes; \
         use the poisson-stream mode instead"
    )]
    CapExceeded { m: u64, cap: u64 },

    #[error("requested {requested} events but the budget allows only {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },

    #[error("operation needs at least 2 events, trace has {events}")]
    TooFewEvents { events: usize },

    #[error("operation needs at least {required} replicas, configured {replicas}")]
    TooFewReplicas { replicas: u64, required: u64 },

    #[error("occupancy range n_max*tau = {requested} exceeds the last event time {last}")]
    RangeExceedsTrace { requested: f64, last: f64 },

    #[error("gap index {index} must lie in [0, M) = [0, {m})")]
    GapIndexOutOfRange { index: u64, m: u64 },

    #[error("operation requires {expected} mode, config selects {actual}")]
    ModeMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("beta must be < 1 for a finite dilation factor, got {beta}")]
    Superluminal { beta: f64 },

    #[error("beta must be >= 0, got {beta}")]
    NegativeBeta { beta: f64 },

    #[error("radii must be positive, got r_s = {r_s}, r = {r}")]
    NonpositiveRadius { r_s: f64, r: f64 },

    #[error("proper standard deviation must be positive, got {sigma}")]
    InvalidSigma { sigma: f64 },

    #[error("safety factor must be >= 1, got {safety}")]
    InvalidSafetyFactor { safety: f64 },

    #[error("floor time must be positive and finite, got {floor}")]
    InvalidFloor { floor: f64 },

    #[error("M cap must be >= 3, got {cap}")]
    InvalidCap { cap: f64 },

    #[error(
        "no valid M: tau0/M >= {floor} with M >= 3 is unsatisfiable for tau0 = {tau0}"
    )]
    FloorExceedsTau0 { tau0: f64, floor: f64 },
}

fn nearest_odd_hint(m: u64) -> String {
    if m < 3 {
        "smallest valid value is M = 3".to_owned()
    } else {
        // m is even here; both neighbors are odd and >= 3
        format!("nearest valid values are M = {} and M = {}", m - 1, m + 1)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
