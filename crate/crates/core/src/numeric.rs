//! Small numeric primitives shared by the analytic and Monte Carlo paths.

/// Compensated accumulator (Kahan with the Neumaier correction).
///
/// Keeps the running error term separate so that long sums of terms spanning
/// many orders of magnitude stay accurate to a few ulp. The reduction order
/// is whatever the caller feeds in; determinism is the caller's contract.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another compensated partial sum into this one.
    #[inline]
    pub fn merge(&mut self, other: NeumaierSum) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `1 - exp(-x)` without cancellation for small `x`.
///
/// Every closed form in this crate contains a factor of this shape with
/// `x = 1/M`; for large `M` the naive expression loses all significant digits.
#[inline]
pub fn one_minus_exp_neg(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// Distance in units in the last place between two finite same-sign floats.
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    debug_assert!(a.is_finite() && b.is_finite());
    debug_assert!(a.is_sign_positive() == b.is_sign_positive() || a == b);
    let (x, y) = (a.abs().to_bits(), b.abs().to_bits());
    x.abs_diff(y)
}
