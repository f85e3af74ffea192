//! Property tests for the algebraic invariants that must hold on every
//! feasible input, not just the worked examples.

use proptest::prelude::*;

use prodsup::model::{c_delta_max, superposition_power_from_budget, validate_config, SystemConfig};
use prodsup::powalloc::optimal_allocation;
use prodsup::randmat::{sample_cgauss, SeedStream};
use prodsup::rates::{snr_baseline, snr_dynamic_ps};

proptest! {
    /// Budget saturation: the constructed power split spends exactly rho*T_d
    /// (relative error below 1e-10) for every feasible c_delta.
    #[test]
    fn power_from_budget_saturates_the_budget(
        nd in 1usize..5,
        ns in 1usize..5,
        extra in 0usize..12,
        rho in 0.0f64..100.0,
        frac in 0.0f64..=1.0,
    ) {
        let cfg = SystemConfig::new(nd, ns, 2 * nd + extra).unwrap();
        let c_delta = frac * c_delta_max(&cfg, rho);
        let p = superposition_power_from_budget(&cfg, rho, c_delta).unwrap();
        let budget = rho * cfg.t_coh_dynamic as f64;
        let used = p.budget_used(&cfg);
        prop_assert!(
            (used - budget).abs() <= 1e-10 * budget.max(1.0),
            "used {} vs budget {}", used, budget
        );
        p.check_budget(&cfg).unwrap();
    }

    #[test]
    fn validate_config_is_idempotent(
        nd in 1usize..6,
        ns in 1usize..6,
        extra in 0usize..10,
    ) {
        let cfg = SystemConfig::new(nd, ns, 2 * nd + extra).unwrap();
        prop_assert_eq!(validate_config(cfg).unwrap(), cfg);
    }

    /// The baseline effective SNR equals the superposition one under the
    /// power mapping rho_tau = c_tau*N_s, rho_delta = c_delta*N_d*N_s.
    #[test]
    fn snr_equality_identity(
        c_tau in 0.0f64..30.0,
        c_delta in 0.0f64..30.0,
        nd in 1usize..9,
        ns in 1usize..9,
    ) {
        let ps = snr_dynamic_ps(c_tau, c_delta, nd, ns).value;
        let base = snr_baseline(c_tau * ns as f64, c_delta * (nd * ns) as f64).value;
        prop_assert!(
            (ps - base).abs() <= 1e-12 * ps.abs().max(1e-300),
            "{} vs {}", ps, base
        );
    }

    #[test]
    fn matrix_sampling_is_a_pure_function_of_the_stream(
        seed in any::<u64>(),
        idx in any::<u64>(),
    ) {
        let s = SeedStream::new(seed, idx);
        prop_assert_eq!(sample_cgauss(2, 3, s), sample_cgauss(2, 3, s));
    }

    /// The optimizer stays inside [0, a], reports a consistent SNR, and
    /// saturates the budget, for any geometry including T_d = 2*N_d.
    #[test]
    fn optimal_allocation_is_feasible_and_consistent(
        nd in 1usize..4,
        ns in 1usize..5,
        extra in 0usize..10,
        log_rho in -2.0f64..4.0,
    ) {
        let cfg = SystemConfig::new(nd, ns, 2 * nd + extra).unwrap();
        let rho = 10f64.powf(log_rho);
        let r = optimal_allocation(&cfg, rho);
        prop_assert!(r.c_delta_star >= 0.0);
        prop_assert!(r.c_delta_star <= r.a * (1.0 + 1e-12));
        let direct = snr_dynamic_ps(r.c_tau_star, r.c_delta_star, nd, cfg.m_tx).value;
        prop_assert!(
            (direct - r.snr_dynamic_star).abs() <= 1e-9 * direct.max(1e-300),
            "snr {} vs {}", direct, r.snr_dynamic_star
        );
        let used = r.power(rho).budget_used(&cfg);
        let budget = rho * cfg.t_coh_dynamic as f64;
        prop_assert!(
            (used - budget).abs() <= 1e-9 * budget.max(1.0),
            "used {} vs budget {}", used, budget
        );
    }
}
