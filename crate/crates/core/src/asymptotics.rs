//! Low/high-SNR rate approximations and degrees-of-freedom calculators.

use std::f64::consts::LOG2_E;

use crate::model::SystemConfig;
use crate::powalloc::{asymptotic_allocation, AllocError, SnrRegime};

/// High-SNR rate slopes (pre-log factors) of the two users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DofPair {
    pub d_dynamic: f64,
    pub d_static: f64,
}

/// Degrees of freedom achieved by the superposition scheme:
/// `d_d = N_d*(1 - N_d/T_d)` and `d_s = N_d*N_s/T_d`.
pub fn dof(cfg: &SystemConfig) -> DofPair {
    let t = cfg.t_coh_dynamic as f64;
    DofPair {
        d_dynamic: (cfg.n_dynamic * (cfg.t_coh_dynamic - cfg.n_dynamic)) as f64 / t,
        d_static: (cfg.n_dynamic * cfg.n_static) as f64 / t,
    }
}

/// The region identity `d_d/N_d + d_s/N_s = 1`, checked in integer
/// arithmetic: the two normalized terms are `(T_d - N_d)/T_d` and `N_d/T_d`,
/// whose numerators sum to the denominator exactly.
pub fn dof_region_identity_holds(cfg: &SystemConfig) -> bool {
    (cfg.t_coh_dynamic - cfg.n_dynamic) + cfg.n_dynamic == cfg.t_coh_dynamic
}

/// Low-SNR rate approximations at the optimized power split, in bits per
/// channel use: `R_d ~ T_d*rho^2/4` and `R_s ~ N_s*rho/2` (both in nats
/// before the base-2 conversion).
pub fn low_snr_rates(cfg: &SystemConfig, rho: f64) -> (f64, f64) {
    let t = cfg.t_coh_dynamic as f64;
    let r_dyn = t * rho * rho / 4.0 * LOG2_E;
    let r_stat = cfg.n_static as f64 * rho / 2.0 * LOG2_E;
    (r_dyn, r_stat)
}

/// High-SNR leading-term approximations `d * log2(rho*/N)` built on the
/// optimized-SNR asymptotes; the bounded log-eigenvalue constants are
/// dropped, so only slopes (not intercepts) are meaningful.
pub fn high_snr_rates(cfg: &SystemConfig, rho: f64) -> Result<(f64, f64), AllocError> {
    let (snr_dyn, snr_stat) = asymptotic_allocation(cfg, rho, SnrRegime::High)?;
    let d = dof(cfg);
    let r_dyn = d.d_dynamic * (snr_dyn / cfg.n_dynamic as f64).log2();
    let r_stat = d.d_static * (snr_stat / cfg.n_static as f64).log2();
    Ok((r_dyn, r_stat))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dof_examples() {
        let d = dof(&SystemConfig::new(2, 4, 5).unwrap());
        assert!((d.d_dynamic - 1.2).abs() < 1e-15);
        assert!((d.d_static - 1.6).abs() < 1e-15);

        let d = dof(&SystemConfig::new(1, 1, 2).unwrap());
        assert_eq!(d.d_dynamic, 0.5);
        assert_eq!(d.d_static, 0.5);
    }

    #[test]
    fn dof_region_identity_exact_for_many_configs() {
        for nd in 1..=6usize {
            for ns in 1..=6usize {
                for td in (2 * nd)..=(2 * nd + 12) {
                    let cfg = SystemConfig::new(nd, ns, td).unwrap();
                    assert!(dof_region_identity_holds(&cfg));
                    // and the float version is at worst a rounding ulp away
                    let d = dof(&cfg);
                    let sum = d.d_dynamic / nd as f64 + d.d_static / ns as f64;
                    assert!((sum - 1.0).abs() < 1e-14, "cfg ({nd},{ns},{td}): sum {sum}");
                }
            }
        }
    }

    #[test]
    fn low_snr_rate_examples() {
        let cfg = SystemConfig::new(2, 4, 5).unwrap();
        let (rd, rs) = low_snr_rates(&cfg, 0.01);
        // nats: T*rho^2/4 = 1.25e-4 and N_s*rho/2 = 0.02
        assert!((rd / LOG2_E - 1.25e-4).abs() < 1e-19);
        assert!((rs / LOG2_E - 0.02).abs() < 1e-17);
        assert_eq!(low_snr_rates(&cfg, 0.0), (0.0, 0.0));
    }

    #[test]
    fn high_snr_slopes_are_the_dof_by_construction() {
        let cfg = SystemConfig::new(2, 4, 5).unwrap();
        let rho = 1000.0;
        let (rd1, rs1) = high_snr_rates(&cfg, rho).unwrap();
        let (rd2, rs2) = high_snr_rates(&cfg, 100.0 * rho).unwrap();
        let d = dof(&cfg);
        assert!(((rd2 - rd1) / 100f64.log2() - d.d_dynamic).abs() < 1e-9);
        assert!(((rs2 - rs1) / 100f64.log2() - d.d_static).abs() < 1e-9);

        // doubling rho adds exactly d_d bits to the dynamic approximation
        let (rd3, _) = high_snr_rates(&cfg, 2.0 * rho).unwrap();
        assert!((rd3 - rd1 - d.d_dynamic).abs() < 1e-9);

        assert!(high_snr_rates(&SystemConfig::new(2, 4, 4).unwrap(), rho).is_err());
    }
}
