//! Physical limits on the clock: Planck-floor feasibility of the interval
//! width, the smallest achievable spread under that floor, and growth of
//! the spread under velocity or gravitational time dilation, including the
//! blur divergence at the horizon.

use serde::{Deserialize, Serialize};

use crate::clock_model::ClockParams;
use crate::error::{Error, Result};

/// Planck time in seconds (CODATA 2018).
pub const PLANCK_TIME: f64 = 5.391_247e-44;

/// Default multiple of the Planck time that the interval width must clear.
pub const DEFAULT_SAFETY_FACTOR: f64 = 1e3;

/// Largest f64 below which consecutive integers are exactly representable.
/// Beyond this, parity of an optimal M is not expressible and no odd
/// adjustment is attempted.
const MAX_EXACT_INT: f64 = 9_007_199_254_740_992.0; // 2^53

/// A dilation factor, or the statement that the clock reading has lost all
/// meaning. Serialized as a tagged state so that downstream tooling never
/// confuses the divergence with a floating-point overflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "kebab-case")]
pub enum Dilation {
    Finite { factor: f64 },
    Blurred,
}

impl Dilation {
    pub fn is_blurred(&self) -> bool {
        matches!(self, Dilation::Blurred)
    }

    pub fn factor(&self) -> Option<f64> {
        match self {
            Dilation::Finite { factor } => Some(*factor),
            Dilation::Blurred => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DilationScenario {
    /// Uniform motion at beta = v/c.
    Velocity { beta: f64 },
    /// Static observer at radius r outside a mass with Schwarzschild
    /// radius r_s, both in meters.
    Schwarzschild { r_s: f64, r: f64 },
    /// Both effects at once; the factors multiply. Treating them as
    /// independent is a modeling choice, not a metric computation.
    Combined { beta: f64, r_s: f64, r: f64 },
}

/// Special-relativistic gamma, written `1 / sqrt((1 - beta) (1 + beta))`
/// so the factored form stays accurate as beta approaches 1.
pub fn lorentz_factor(beta: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::NegativeBeta { beta });
    }
    if !(beta < 1.0) {
        return Err(Error::Superluminal { beta });
    }
    Ok(1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt())
}

/// Static-observer gravitational dilation `1 / sqrt(1 - r_s / r)`,
/// evaluated as `sqrt(r / (r - r_s))` to avoid cancellation near the
/// horizon. At and inside `r = r_s` the reading is blurred.
pub fn schwarzschild_factor(r_s: f64, r: f64) -> Result<Dilation> {
    if !(r_s > 0.0 && r > 0.0) || !r_s.is_finite() || !r.is_finite() {
        return Err(Error::NonpositiveRadius { r_s, r });
    }
    if r <= r_s {
        return Ok(Dilation::Blurred);
    }
    Ok(Dilation::Finite {
        factor: (r / (r - r_s)).sqrt(),
    })
}

/// Dilation factor of a scenario. Finite factors are always >= 1.
pub fn dilation_factor(scenario: &DilationScenario) -> Result<Dilation> {
    match *scenario {
        DilationScenario::Velocity { beta } => Ok(Dilation::Finite {
            factor: lorentz_factor(beta)?,
        }),
        DilationScenario::Schwarzschild { r_s, r } => schwarzschild_factor(r_s, r),
        DilationScenario::Combined { beta, r_s, r } => {
            let gamma = lorentz_factor(beta)?;
            Ok(match schwarzschild_factor(r_s, r)? {
                Dilation::Finite { factor } => Dilation::Finite {
                    factor: gamma * factor,
                },
                Dilation::Blurred => Dilation::Blurred,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationResult {
    pub scenario: DilationScenario,
    pub sigma_proper: f64,
    pub dilation: Dilation,
    /// `factor * sigma_proper`; absent when the reading is blurred.
    pub sigma_observed: Option<f64>,
}

/// Spread of the clock reading as seen by an observer for whom the clock
/// is dilated. The factor is at least one, so dilation never sharpens the
/// reading; at the horizon it is blurred outright.
pub fn dilated_std_dev(sigma_proper: f64, scenario: &DilationScenario) -> Result<DilationResult> {
    if !(sigma_proper > 0.0) || !sigma_proper.is_finite() {
        return Err(Error::InvalidSigma {
            sigma: sigma_proper,
        });
    }
    let dilation = dilation_factor(scenario)?;
    Ok(DilationResult {
        scenario: *scenario,
        sigma_proper,
        dilation,
        sigma_observed: dilation.factor().map(|f| f * sigma_proper),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub tau: f64,
    /// `safety * t_planck`.
    pub tau_floor: f64,
    /// Whether `tau >= tau_floor`.
    pub feasible: bool,
    /// `tau / tau_floor`.
    pub margin: f64,
    /// Smallest spread reachable at this tau0 under the same floor, when
    /// any valid M exists at all.
    pub sigma_min: Option<f64>,
    /// The M attaining it. Integer-valued; odd whenever that is
    /// representable (below 2^53).
    pub m_opt: Option<f64>,
}

/// Checks the interval width against a safety multiple of the Planck time.
pub fn planck_feasible(params: &ClockParams, safety: f64) -> Result<FeasibilityReport> {
    planck_feasible_with(params, safety, PLANCK_TIME)
}

/// Same check against an explicit floor unit, for callers that want a
/// different Planck value or another hard lower limit on resolvable time.
pub fn planck_feasible_with(
    params: &ClockParams,
    safety: f64,
    t_planck: f64,
) -> Result<FeasibilityReport> {
    if !(safety >= 1.0) || !safety.is_finite() {
        return Err(Error::InvalidSafetyFactor { safety });
    }
    if !(t_planck > 0.0) || !t_planck.is_finite() {
        return Err(Error::InvalidFloor { floor: t_planck });
    }
    let tau_floor = safety * t_planck;
    let (sigma_min, m_opt) = match minimal_std_dev(params.tau0, tau_floor, None) {
        Ok(min) => (Some(min.sigma_min), Some(min.m_opt)),
        Err(Error::FloorExceedsTau0 { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(FeasibilityReport {
        tau: params.tau,
        tau_floor,
        feasible: params.tau >= tau_floor,
        margin: params.tau / tau_floor,
        sigma_min,
        m_opt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimalStdDev {
    /// `tau0 / sqrt(m_opt)`, about `sqrt(tau0 * tau_floor)` when the floor
    /// binds.
    pub sigma_min: f64,
    /// Integer-valued; odd whenever that is representable (below 2^53).
    pub m_opt: f64,
}

/// Minimizes the spread `tau0 / sqrt(M)` subject to `tau0 / M >= tau_floor`
/// and, if given, `M <= m_cap`.
///
/// The spread falls with M, so the optimum sits at the largest admissible
/// M: the smaller of `tau0 / tau_floor` and the cap, rounded *down* to an
/// odd integer. Rounding up would push the interval width below the floor.
pub fn minimal_std_dev(tau0: f64, tau_floor: f64, m_cap: Option<f64>) -> Result<MinimalStdDev> {
    if !(tau_floor > 0.0) || !tau_floor.is_finite() {
        return Err(Error::InvalidFloor { floor: tau_floor });
    }
    if let Some(cap) = m_cap {
        if !(cap >= 3.0) || !cap.is_finite() {
            return Err(Error::InvalidCap { cap });
        }
    }
    let unconstrained = tau0 / tau_floor;
    let continuous = match m_cap {
        Some(cap) => unconstrained.min(cap),
        None => unconstrained,
    };
    if !(continuous >= 3.0) {
        return Err(Error::FloorExceedsTau0 {
            tau0,
            floor: tau_floor,
        });
    }
    let mut m_opt = round_down_to_odd(continuous);
    if m_opt <= MAX_EXACT_INT {
        // Division rounding can leave tau0 / m_opt a hair under the floor
        // even though the real quotient clears it; step down until safe.
        while m_opt > 3.0 && tau0 / m_opt < tau_floor {
            m_opt -= 2.0;
        }
        if tau0 / m_opt < tau_floor {
            return Err(Error::FloorExceedsTau0 {
                tau0,
                floor: tau_floor,
            });
        }
    }
    Ok(MinimalStdDev {
        sigma_min: tau0 / m_opt.sqrt(),
        m_opt,
    })
}

fn round_down_to_odd(x: f64) -> f64 {
    let f = x.floor();
    if f > MAX_EXACT_INT {
        // Neighboring integers are not distinct here; parity is moot.
        return f;
    }
    if (f as u64) % 2 == 0 {
        (f - 1.0).max(3.0)
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentz_examples() {
        assert_eq!(lorentz_factor(0.0).unwrap(), 1.0);
        assert!((lorentz_factor(0.6).unwrap() - 1.25).abs() <= 1e-15 * 1.25);
        let g = lorentz_factor(0.8).unwrap();
        assert!((g - 5.0 / 3.0).abs() <= 1e-15 * g);
    }

    #[test]
    fn lorentz_domain() {
        assert_eq!(lorentz_factor(-0.1), Err(Error::NegativeBeta { beta: -0.1 }));
        assert_eq!(lorentz_factor(1.0), Err(Error::Superluminal { beta: 1.0 }));
        assert!(lorentz_factor(1.5).is_err());
        assert!(lorentz_factor(f64::NAN).is_err());
        assert!(lorentz_factor(0.999_999_999).is_ok());
    }

    #[test]
    fn schwarzschild_examples() {
        let two = schwarzschild_factor(1.0, 2.0).unwrap().factor().unwrap();
        assert!((two - 2.0f64.sqrt()).abs() <= 1e-15 * two);
        let far = schwarzschild_factor(1.0, 1e18).unwrap().factor().unwrap();
        assert!((far - 1.0).abs() <= 1e-15);
        assert!(schwarzschild_factor(1.0, 1.0).unwrap().is_blurred());
        assert!(schwarzschild_factor(1.0, 0.5).unwrap().is_blurred());
    }

    #[test]
    fn schwarzschild_domain() {
        assert!(schwarzschild_factor(0.0, 1.0).is_err());
        assert!(schwarzschild_factor(-1.0, 2.0).is_err());
        assert!(schwarzschild_factor(1.0, -2.0).is_err());
        assert!(schwarzschild_factor(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn dilation_is_monotone_toward_both_divergences() {
        let mut last = 0.0;
        for beta in [0.0, 0.1, 0.5, 0.9, 0.99, 0.9999] {
            let g = lorentz_factor(beta).unwrap();
            assert!(g > last || (beta == 0.0 && g == 1.0));
            assert!(g >= 1.0);
            last = g;
        }
        let mut last = 0.0;
        for r in [100.0, 10.0, 2.0, 1.1, 1.001, 1.000_001] {
            let f = schwarzschild_factor(1.0, r).unwrap().factor().unwrap();
            assert!(f > last);
            assert!(f >= 1.0);
            last = f;
        }
    }

    #[test]
    fn dilated_spread_examples() {
        let rest = dilated_std_dev(0.01, &DilationScenario::Velocity { beta: 0.0 }).unwrap();
        assert_eq!(rest.sigma_observed, Some(0.01));
        let moving = dilated_std_dev(0.01, &DilationScenario::Velocity { beta: 0.6 }).unwrap();
        let observed = moving.sigma_observed.unwrap();
        assert!((observed - 0.0125).abs() <= 1e-15 * 0.0125);
        assert!(observed >= moving.sigma_proper);

        let horizon =
            dilated_std_dev(0.01, &DilationScenario::Schwarzschild { r_s: 1.0, r: 1.0 }).unwrap();
        assert!(horizon.dilation.is_blurred());
        assert_eq!(horizon.sigma_observed, None);

        let both = dilated_std_dev(
            0.01,
            &DilationScenario::Combined {
                beta: 0.6,
                r_s: 1.0,
                r: 2.0,
            },
        )
        .unwrap();
        let expected = 1.25 * 2.0f64.sqrt() * 0.01;
        assert!((both.sigma_observed.unwrap() - expected).abs() <= 1e-14 * expected);
    }

    #[test]
    fn dilated_spread_rejects_bad_sigma() {
        let scenario = DilationScenario::Velocity { beta: 0.5 };
        for sigma in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(dilated_std_dev(sigma, &scenario).is_err());
        }
    }

    #[test]
    fn blur_serializes_as_a_tagged_state() {
        let blurred = serde_json::to_string(&Dilation::Blurred).unwrap();
        assert_eq!(blurred, r#"{"state":"blurred"}"#);
        let finite = serde_json::to_string(&Dilation::Finite { factor: 1.25 }).unwrap();
        assert_eq!(finite, r#"{"state":"finite","factor":1.25}"#);
    }

    #[test]
    fn feasibility_of_a_comfortable_clock() {
        // tau around 1e-21 s sits nineteen orders above a 1e3 Planck floor.
        let params = ClockParams::new(1e6, 1_000_000_000_000_001).unwrap();
        let report = planck_feasible(&params, 1e3).unwrap();
        assert!(report.feasible);
        assert!((report.margin / 1.854_86e19 - 1.0).abs() < 1e-3);
        assert!(report.sigma_min.is_some());
    }

    #[test]
    fn feasibility_fails_below_the_floor() {
        // tau around 1e-43 s is under the 5.39e-41 s floor.
        let params = ClockParams::new(1e28, 1_000_000_000_000_001).unwrap();
        let report = planck_feasible(&params, 1e3).unwrap();
        assert!(!report.feasible);
        assert!(report.margin < 1.0);
        // A feasible M still exists for this tau0, just a much smaller one.
        assert!(report.m_opt.unwrap() < 1e13);
    }

    #[test]
    fn feasibility_validates_the_safety_factor() {
        let params = ClockParams::new(1.0, 11).unwrap();
        assert!(matches!(
            planck_feasible(&params, 0.5),
            Err(Error::InvalidSafetyFactor { .. })
        ));
        assert!(planck_feasible(&params, 1.0).is_ok());
    }

    #[test]
    fn feasibility_agrees_with_the_optimal_m() {
        let floor = 1e3 * PLANCK_TIME;
        let tau0 = 150.0 * floor;
        let min = minimal_std_dev(tau0, floor, None).unwrap();
        assert_eq!(min.m_opt, 149.0);
        let below = ClockParams::new(1.0 / tau0, 101).unwrap();
        assert!(planck_feasible(&below, 1e3).unwrap().feasible);
        let above = ClockParams::new(1.0 / tau0, 151).unwrap();
        assert!(!planck_feasible(&above, 1e3).unwrap().feasible);
    }

    #[test]
    fn minimal_spread_with_the_floor_binding() {
        let min = minimal_std_dev(1.0, 1e-43, None).unwrap();
        assert!((min.m_opt / 1e43 - 1.0).abs() < 1e-12);
        assert!((min.sigma_min / 3.162_277_66e-22 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn minimal_spread_with_the_cap_binding() {
        let min = minimal_std_dev(1.0, 1e-43, Some(1e21)).unwrap();
        assert_eq!(min.m_opt, 1e21);
        assert!((min.sigma_min / 3.162_277_66e-11 - 1.0).abs() < 1e-6);
        // A small cap is representable exactly and gets the odd adjustment.
        let capped = minimal_std_dev(1.0, 1e-12, Some(10.0)).unwrap();
        assert_eq!(capped.m_opt, 9.0);
    }

    #[test]
    fn minimal_spread_respects_the_floor_exactly() {
        let min = minimal_std_dev(1.0, 1e-12, None).unwrap();
        let m = min.m_opt;
        assert!(m as u64 % 2 == 1);
        assert!(1.0 / m >= 1e-12);
        // The next odd M up would break the floor or the ordering.
        assert!(m + 2.0 > 1.0 / 1e-12 || 1.0 / (m + 2.0) < 1e-12);
    }

    #[test]
    fn minimal_spread_beats_a_log_grid_scan() {
        let tau0 = 1.0;
        let floor = 1e-12;
        let min = minimal_std_dev(tau0, floor, None).unwrap();
        let hi = (tau0 / floor).ln();
        let lo = 3.0f64.ln();
        for i in 0..=50 {
            let x = (lo + (hi - lo) * i as f64 / 50.0).exp();
            let mut m = round_down_to_odd(x.max(3.0));
            if tau0 / m < floor {
                m -= 2.0;
            }
            if m < 3.0 || tau0 / m < floor {
                continue;
            }
            assert!(min.sigma_min <= tau0 / m.sqrt() + 1e-30);
        }
    }

    #[test]
    fn degenerate_floors_are_rejected() {
        assert!(matches!(
            minimal_std_dev(1.0, 1.0, None),
            Err(Error::FloorExceedsTau0 { .. })
        ));
        assert!(matches!(
            minimal_std_dev(1.0, 0.5, None),
            Err(Error::FloorExceedsTau0 { .. })
        ));
        assert!(minimal_std_dev(1.0, 0.0, None).is_err());
        assert!(minimal_std_dev(1.0, -1.0, None).is_err());
        assert!(minimal_std_dev(1.0, 0.25, Some(2.0)).is_err());
        // tau0 / floor = 4 admits M = 3.
        assert_eq!(minimal_std_dev(1.0, 0.25, None).unwrap().m_opt, 3.0);
    }
}
