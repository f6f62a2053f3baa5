//! Clock parameter set and the equidistant time grid.
//!
//! A clock is built from `M` independent elementary decay processes of rate
//! `lambda`. The characteristic time is `tau0 = 1/lambda`, the grid spacing
//! `tau = tau0/M`, and the grid carries `M = 2N + 1` points `n*tau` for
//! `-N <= n <= +N`, each surrounded by an interval of width `tau`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The clock's defining constants. Immutable once constructed.
///
/// `m` is held as an integer but enters every formula as an `f64`; grid
/// points are computed on demand and never materialized, so `m` up to
/// about `1e15` stays exact in binary64.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClockParams {
    /// Decay rate of one elementary process [1/s].
    pub lambda: f64,
    /// Characteristic time `1/lambda` [s].
    pub tau0: f64,
    /// Number of elementary processes, odd, `m = 2*n_half + 1`.
    pub m: u64,
    /// Half-width of the grid index range.
    pub n_half: u64,
    /// Grid spacing `tau0/m` [s].
    pub tau: f64,
}

impl ClockParams {
    /// Builds the parameter set from the decay rate and process count.
    ///
    /// Even `m` is rejected rather than rounded; silent correction would
    /// corrupt the `1/(2M)` normalization downstream. The error message
    /// names the two nearest odd values.
    pub fn new(lambda: f64, m: u64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidRate { lambda });
        }
        if m < 3 || m % 2 == 0 {
            return Err(Error::InvalidCount { m });
        }
        let tau0 = 1.0 / lambda;
        Ok(Self {
            lambda,
            tau0,
            m,
            n_half: (m - 1) / 2,
            tau: tau0 / m as f64,
        })
    }

    /// `m` as a binary64 value, exact for `m <= 2^53`.
    #[inline]
    pub fn m_f64(&self) -> f64 {
        self.m as f64
    }

    #[inline]
    pub fn grid(&self) -> TimeGrid {
        TimeGrid { params: *self }
    }

    fn check_index(&self, n: i64) -> Result<()> {
        if n.unsigned_abs() > self.n_half {
            Err(Error::IndexOutOfRange {
                index: n,
                n_half: self.n_half,
            })
        } else {
            Ok(())
        }
    }

    /// Grid point `n*tau`. Sign-antisymmetric exactly: negating `n` negates
    /// the result bit-for-bit.
    pub fn grid_point(&self, n: i64) -> Result<f64> {
        self.check_index(n)?;
        Ok(n as f64 * self.tau)
    }

    /// Interval around grid point `n`: `[n*tau - tau/2, n*tau + tau/2]`.
    ///
    /// Bounds are evaluated on the half-step grid `(2n +- 1) * tau/2`, so the
    /// upper bound of interval `n` and the lower bound of interval `n+1` are
    /// the same expression and therefore bit-identical: the intervals tile
    /// without gaps or overlaps.
    pub fn interval_bounds(&self, n: i64) -> Result<(f64, f64)> {
        self.check_index(n)?;
        let half = 0.5 * self.tau;
        Ok(((2 * n - 1) as f64 * half, (2 * n + 1) as f64 * half))
    }
}

/// The equidistant grid view of a parameter set.
#[derive(Clone, Copy, Debug)]
pub struct TimeGrid {
    params: ClockParams,
}

impl TimeGrid {
    pub fn params(&self) -> &ClockParams {
        &self.params
    }

    pub fn point(&self, n: i64) -> Result<f64> {
        self.params.grid_point(n)
    }

    pub fn interval(&self, n: i64) -> Result<(f64, f64)> {
        self.params.interval_bounds(n)
    }

    /// Largest valid index; points run over `-n_max() ..= n_max()`.
    pub fn n_max(&self) -> i64 {
        self.params.n_half as i64
    }
}
