//! Optimal split of the power budget between pilot and data.  The dynamic
//! user's effective SNR is maximized in closed form when `T_d > 2*N_d`, with
//! a golden-section fallback on the `T_d = 2*N_d` boundary and as a numeric
//! cross-check everywhere else.

use thiserror::Error;

use crate::model::{self, BaselinePower, SuperpositionPower, SystemConfig};
use crate::rates::snr_dynamic_ps;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AllocError {
    #[error("degenerate geometry: t_coh_dynamic == 2*n_dynamic makes the closed form singular")]
    DegenerateGeometry,
}

/// Interval tolerance of the golden-section search on `c_delta`.
pub const GOLDEN_SECTION_TOL: f64 = 1e-10;
const GOLDEN_SECTION_MAX_ITERS: usize = 256;

/// An optimized power split with the constants that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationResult {
    pub c_delta_star: f64,
    pub c_tau_star: f64,
    /// Optimized dynamic-user effective SNR (rho_d*).
    pub snr_dynamic_star: f64,
    /// Optimized static-user effective SNR (rho_s* = c_tau* * N_s).
    pub snr_static_star: f64,
    /// Feasible-range endpoint for `c_delta`.
    pub a: f64,
    /// Closed-form constant; `+inf` on the degenerate-geometry numeric path.
    pub b: f64,
}

impl AllocationResult {
    /// The power split as a budget-saturating [`SuperpositionPower`].
    pub fn power(&self, rho: f64) -> SuperpositionPower {
        SuperpositionPower { c_tau: self.c_tau_star, c_delta: self.c_delta_star, rho }
    }
}

/// Closed-form constants `a = rho*T_d/(N_d*M*(T_d-N_d))` and
/// `b = (N_d + rho*T_d)/(N_d*M*(T_d-2*N_d))`.
///
/// Fails with [`AllocError::DegenerateGeometry`] at `T_d == 2*N_d`, where `b`
/// is undefined and the caller must use the numeric optimizer.
pub fn ab_constants(cfg: &SystemConfig, rho: f64) -> Result<(f64, f64), AllocError> {
    if cfg.t_coh_dynamic == 2 * cfg.n_dynamic {
        return Err(AllocError::DegenerateGeometry);
    }
    let a = model::c_delta_max(cfg, rho);
    let nd = cfg.n_dynamic as f64;
    let m = cfg.m_tx as f64;
    let t = cfg.t_coh_dynamic as f64;
    let b = (nd + rho * t) / (nd * m * (t - 2.0 * nd));
    Ok((a, b))
}

/// Dynamic-user SNR as a function of `c_delta` alone, with `c_tau` taking
/// the rest of the budget.
fn snr_at_c_delta(cfg: &SystemConfig, rho: f64, c_delta: f64) -> f64 {
    let mn = (cfg.m_tx * cfg.n_dynamic) as f64;
    let c_tau =
        (rho * cfg.t_coh_dynamic as f64 / mn - cfg.data_slots() as f64 * c_delta).max(0.0);
    snr_dynamic_ps(c_tau, c_delta, cfg.n_dynamic, cfg.m_tx).value
}

/// The data coefficient that maximizes the dynamic user's rate
/// (equivalently its effective SNR): `c_delta* = b - sqrt(b^2 - a*b)` when
/// `T_d > 2*N_d`, golden-section maximization over `[0, a]` on the boundary.
pub fn optimal_allocation(cfg: &SystemConfig, rho: f64) -> AllocationResult {
    match ab_constants(cfg, rho) {
        Ok((a, b)) => {
            let c_delta = b - (b * b - a * b).sqrt();
            finish(cfg, rho, c_delta.clamp(0.0, a), a, b)
        }
        Err(AllocError::DegenerateGeometry) => optimal_allocation_numeric(cfg, rho),
    }
}

/// Golden-section maximization of the dynamic SNR over `c_delta` in `[0, a]`.
/// Valid for every geometry; used as the cross-check for the closed form and
/// as the only route at `T_d == 2*N_d`.
pub fn optimal_allocation_numeric(cfg: &SystemConfig, rho: f64) -> AllocationResult {
    let a = model::c_delta_max(cfg, rho);
    let b = ab_constants(cfg, rho).map(|(_, b)| b).unwrap_or(f64::INFINITY);
    let c_delta = golden_section_max(|c| snr_at_c_delta(cfg, rho, c), 0.0, a);
    finish(cfg, rho, c_delta, a, b)
}

fn finish(cfg: &SystemConfig, rho: f64, c_delta: f64, a: f64, b: f64) -> AllocationResult {
    let mn = (cfg.m_tx * cfg.n_dynamic) as f64;
    let c_tau =
        (rho * cfg.t_coh_dynamic as f64 / mn - cfg.data_slots() as f64 * c_delta).max(0.0);
    AllocationResult {
        c_delta_star: c_delta,
        c_tau_star: c_tau,
        snr_dynamic_star: snr_dynamic_ps(c_tau, c_delta, cfg.n_dynamic, cfg.m_tx).value,
        snr_static_star: c_tau * cfg.n_static as f64,
        a,
        b,
    }
}

/// The baseline optimum inherited through the SNR-preserving mapping
/// `rho_tau = c_tau* * M`, `rho_delta = c_delta* * N_d * M`, which carries
/// the superposition budget onto the baseline budget with equality.
pub fn optimal_baseline_allocation(cfg: &SystemConfig, rho: f64) -> BaselinePower {
    let alloc = optimal_allocation(cfg, rho);
    let m = cfg.m_tx as f64;
    BaselinePower {
        rho_tau: alloc.c_tau_star * m,
        rho_delta: alloc.c_delta_star * cfg.n_dynamic as f64 * m,
        rho,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrRegime {
    Low,
    High,
}

/// Closed-form approximations of the optimized SNR pair
/// `(rho_d*, rho_s*)` in the two extreme regimes:
///
/// * low:  `rho_d* ~ rho^2*T_d^2 / (4*N_d*(T_d-N_d))`,
///   `rho_s* ~ rho*T_d/(2*N_d) * N_s/M`;
/// * high: `rho_d* ~ rho*T_d / (sqrt(T_d-N_d) + sqrt(N_d))^2`,
///   `rho_s* ~ rho*T_d*(sqrt(T_d/N_d - 1) - 1)/(T_d - 2*N_d) * N_s/M`.
///
/// The caller is responsible for choosing a regime-appropriate `rho`.
pub fn asymptotic_allocation(
    cfg: &SystemConfig,
    rho: f64,
    regime: SnrRegime,
) -> Result<(f64, f64), AllocError> {
    let nd = cfg.n_dynamic as f64;
    let t = cfg.t_coh_dynamic as f64;
    let antenna_ratio = cfg.n_static as f64 / cfg.m_tx as f64;
    match regime {
        SnrRegime::Low => Ok((
            rho * rho * t * t / (4.0 * nd * (t - nd)),
            rho * t / (2.0 * nd) * antenna_ratio,
        )),
        SnrRegime::High => {
            if cfg.t_coh_dynamic == 2 * cfg.n_dynamic {
                return Err(AllocError::DegenerateGeometry);
            }
            let snr_dyn = rho * t / ((t - nd).sqrt() + nd.sqrt()).powi(2);
            let snr_stat = rho * t * ((t / nd - 1.0).sqrt() - 1.0) / (t - 2.0 * nd);
            Ok((snr_dyn, snr_stat * antenna_ratio))
        }
    }
}

/// Maximizes a unimodal function over `[lo, hi]` to within
/// [`GOLDEN_SECTION_TOL`] on the argument.
fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    if hi - lo <= GOLDEN_SECTION_TOL {
        return 0.5 * (lo + hi);
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..GOLDEN_SECTION_MAX_ITERS {
        if hi - lo <= GOLDEN_SECTION_TOL {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}
