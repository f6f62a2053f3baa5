//! Invariants checked over randomized parameters.

use proptest::prelude::*;

use stoclock::{
    analytic_tail, dilated_std_dev, expected_time_detailed, gap_statistics, interval_occupancy,
    interval_probability, lorentz_factor, minimal_std_dev, normalization_excess,
    normalization_value, schwarzschild_factor, simulate_decay_ensemble, simulate_poisson_stream,
    std_dev, truncated_sum, truncation_index, variance_series, variance_term, ClockParams,
    DilationScenario, SimConfig, SimMode,
};

fn odd_m() -> impl Strategy<Value = u64> {
    (1u64..=5000).prop_map(|k| 2 * k + 1)
}

fn rate() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn grid_is_antisymmetric_and_tiles(lambda in rate(), m in odd_m()) {
        let p = ClockParams::new(lambda, m).unwrap();
        let n_half = p.n_half as i64;
        for n in [1, n_half / 2, n_half] {
            let pos = p.grid_point(n).unwrap();
            let neg = p.grid_point(-n).unwrap();
            prop_assert_eq!(neg.to_bits(), (-pos).to_bits());
        }
        for n in [-n_half, -1, 0, n_half - 1] {
            let hi = p.interval_bounds(n).unwrap().1;
            let lo = p.interval_bounds(n + 1).unwrap().0;
            prop_assert_eq!(hi.to_bits(), lo.to_bits());
        }
    }

    #[test]
    fn profile_is_symmetric_positive_and_decreasing(lambda in rate(), m in odd_m(), n in 0i64..3000) {
        let p = ClockParams::new(lambda, m).unwrap();
        let here = interval_probability(&p, n);
        prop_assert!(here > 0.0);
        prop_assert_eq!(here.to_bits(), interval_probability(&p, -n).to_bits());
        if n > 0 {
            prop_assert!(here <= interval_probability(&p, n - 1));
        }
    }

    #[test]
    fn normalization_exceeds_one_by_the_predicted_amount(lambda in rate(), m in odd_m()) {
        let p = ClockParams::new(lambda, m).unwrap();
        let norm = normalization_value(&p);
        prop_assert!(norm > 1.0);
        let mf = p.m_f64();
        let excess = normalization_excess(&p);
        let leading = 1.0 / (12.0 * mf * mf);
        prop_assert!(excess <= leading * 1.000_000_1);
        prop_assert!(excess >= leading * 0.99);
    }

    #[test]
    fn truncation_brackets_and_reconstructs(lambda in rate(), m in odd_m(), log_eps in -15.0f64..-2.0) {
        let p = ClockParams::new(lambda, m).unwrap();
        let eps = 10f64.powf(log_eps);
        let k = truncation_index(&p, eps).unwrap();
        let norm = normalization_value(&p);
        prop_assert!(analytic_tail(&p, k) / norm <= eps);
        if k > 1 {
            prop_assert!(analytic_tail(&p, k - 1) / norm > eps);
        }
        let reconstructed = truncated_sum(&p, k) + analytic_tail(&p, k);
        prop_assert!((reconstructed - norm).abs() <= 1e-13 * norm);
    }

    #[test]
    fn expectation_is_odd_in_the_state_index(lambda in rate(), m in odd_m()) {
        let p = ClockParams::new(lambda, m).unwrap();
        let k = (p.n_half as i64).min(37);
        let plus = expected_time_detailed(&p, k).unwrap();
        let minus = expected_time_detailed(&p, -k).unwrap();
        prop_assert_eq!(minus.exact.to_bits(), (-plus.exact).to_bits());
        prop_assert_eq!(minus.finite_m.to_bits(), (-plus.finite_m).to_bits());
    }

    #[test]
    fn variance_is_positive_below_the_asymptote(lambda in rate(), m in odd_m()) {
        let p = ClockParams::new(lambda, m).unwrap();
        let series = variance_series(&p, 1e-13).unwrap();
        prop_assert!(series > 0.0);
        prop_assert!(series < p.tau0 * p.tau0 / p.m_f64());
        let s = std_dev(&p);
        prop_assert!(s.sigma_exact <= s.sigma_asymptotic);
        let via_tau = p.tau * p.m_f64().sqrt();
        prop_assert!((s.sigma_asymptotic - via_tau).abs() <= 1e-15 * via_tau);
    }

    #[test]
    fn variance_terms_are_even_in_k(lambda in rate(), m in odd_m(), k in 1i64..100_000) {
        let p = ClockParams::new(lambda, m).unwrap();
        prop_assert_eq!(variance_term(&p, k).to_bits(), variance_term(&p, -k).to_bits());
    }

    #[test]
    fn dilation_never_sharpens(beta in 0.0f64..0.999, sigma in 1e-12f64..1.0) {
        let d = dilated_std_dev(sigma, &DilationScenario::Velocity { beta }).unwrap();
        prop_assert!(d.sigma_observed.unwrap() >= sigma);
    }

    #[test]
    fn lorentz_is_strictly_monotone(a in 0.0f64..0.999, b in 0.0f64..0.999) {
        prop_assume!(a < b);
        prop_assert!(lorentz_factor(a).unwrap() < lorentz_factor(b).unwrap());
    }

    #[test]
    fn schwarzschild_grows_toward_the_horizon(r_s in 1e-3f64..1e3, x in 1.001f64..100.0, y in 1.001f64..100.0) {
        prop_assume!(x < y);
        let closer = schwarzschild_factor(r_s, r_s * x).unwrap().factor().unwrap();
        let farther = schwarzschild_factor(r_s, r_s * y).unwrap().factor().unwrap();
        prop_assert!(closer > farther);
        prop_assert!(farther >= 1.0);
    }

    #[test]
    fn optimal_m_is_odd_and_respects_the_floor(tau0 in 1e-6f64..1e6, log_ratio in 1.0f64..15.0) {
        let floor = tau0 / 10f64.powf(log_ratio);
        let min = minimal_std_dev(tau0, floor, None).unwrap();
        let m = min.m_opt;
        prop_assert!(m >= 3.0);
        prop_assert!(m as u64 % 2 == 1);
        prop_assert!(tau0 / m >= floor);
        prop_assert_eq!(min.sigma_min.to_bits(), (tau0 / m.sqrt()).to_bits());
        let ratio = min.sigma_min * min.sigma_min / (tau0 * floor);
        prop_assert!(ratio >= 1.0 - 1e-12);
        prop_assert!(ratio <= 1.0 + 4.0 / m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn traces_are_reproducible_and_replica_distinct(seed in any::<u64>(), replica in 0u64..32) {
        let p = ClockParams::new(1.0, 101).unwrap();
        let stream = SimConfig::new(p, SimMode::PoissonStream, 64, seed, 256).unwrap();
        let a = simulate_poisson_stream(&stream, replica, 64).unwrap();
        let b = simulate_poisson_stream(&stream, replica, 64).unwrap();
        prop_assert_eq!(&a, &b);
        let c = simulate_poisson_stream(&stream, replica + 32, 64).unwrap();
        prop_assert_ne!(&a.times, &c.times);

        let ensemble = SimConfig::new(p, SimMode::DepletingEnsemble, 2, seed, 1).unwrap();
        let d = simulate_decay_ensemble(&ensemble, replica).unwrap();
        let e = simulate_decay_ensemble(&ensemble, replica).unwrap();
        prop_assert_eq!(&d, &e);
    }

    #[test]
    fn occupancy_accounts_for_every_interval(seed in any::<u64>()) {
        let p = ClockParams::new(1.0, 101).unwrap();
        let config = SimConfig::new(p, SimMode::PoissonStream, 1, seed, 4096).unwrap();
        let trace = simulate_poisson_stream(&config, 0, 4096).unwrap();
        let n_max = 2000;
        let hist = interval_occupancy(&trace, &p, n_max).unwrap();
        prop_assert_eq!(hist.counts.iter().sum::<u64>(), n_max);
        prop_assert_eq!(hist.total_intervals, n_max);
    }

    #[test]
    fn gaps_telescope_to_the_trace_span(seed in any::<u64>()) {
        let p = ClockParams::new(2.0, 1001).unwrap();
        let config = SimConfig::new(p, SimMode::PoissonStream, 1, seed, 2048).unwrap();
        let trace = simulate_poisson_stream(&config, 0, 1000).unwrap();
        let stats = gap_statistics(&trace).unwrap();
        let span = trace.times.last().unwrap() - trace.times.first().unwrap();
        let total = stats.mean * stats.count as f64;
        prop_assert!((total - span).abs() <= 1e-12 * span.abs().max(1e-300));
        prop_assert!(stats.std >= 0.0);
    }
}
