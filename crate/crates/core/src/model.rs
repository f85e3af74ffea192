//! Domain types shared by every other module: the antenna/coherence
//! configuration, the two power-split parameterizations and their budget
//! accounting, and the rate containers.

use thiserror::Error;

/// Relative tolerance used for all power-budget checks.
pub const BUDGET_REL_TOL: f64 = 1e-10;

/// Validation and budget-accounting failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("antenna counts must be positive (n_dynamic={n_dynamic}, n_static={n_static})")]
    ZeroAntennas { n_dynamic: usize, n_static: usize },
    #[error(
        "coherence too short: t_coh_dynamic={t_coh_dynamic} < 2*n_dynamic={min} (the dynamic \
         user needs at least as many data slots as pilot slots)"
    )]
    CoherenceTooShort { t_coh_dynamic: usize, min: usize },
    #[error("t_coh_static={t_coh_static} must be >= t_coh_dynamic={t_coh_dynamic}")]
    StaticCoherenceTooShort { t_coh_static: usize, t_coh_dynamic: usize },
    #[error("{name} must be nonnegative, got {value}")]
    NegativeValue { name: &'static str, value: f64 },
    #[error("c_delta={c_delta} outside the feasible range [0, {max}]")]
    DataCoefficientOutOfRange { c_delta: f64, max: f64 },
    #[error("power budget violated: block energy {used} exceeds rho*T_d = {budget}")]
    BudgetExceeded { used: f64, budget: f64 },
}

/// Antenna counts and coherence times of the two-user downlink.
///
/// The transmit-antenna count is always derived as `m_tx = max(n_dynamic,
/// n_static)`; construct values through [`SystemConfig::new`] or
/// [`validate_config`] so the derivation and the invariants hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemConfig {
    /// Receive antennas at the dynamic (short-coherence) user.
    pub n_dynamic: usize,
    /// Receive antennas at the static (long-coherence) user.
    pub n_static: usize,
    /// Coherence interval of the dynamic user's channel, in symbols.
    pub t_coh_dynamic: usize,
    /// Coherence interval of the static user's channel (metadata only).
    pub t_coh_static: Option<usize>,
    /// Transmit antennas, derived as `max(n_dynamic, n_static)`.
    pub m_tx: usize,
}

impl SystemConfig {
    pub fn new(
        n_dynamic: usize,
        n_static: usize,
        t_coh_dynamic: usize,
    ) -> Result<Self, ModelError> {
        validate_config(SystemConfig {
            n_dynamic,
            n_static,
            t_coh_dynamic,
            t_coh_static: None,
            m_tx: 0,
        })
    }

    /// Attaches the static user's coherence time (must be >= the dynamic one).
    pub fn with_static_coherence(mut self, t_coh_static: usize) -> Result<Self, ModelError> {
        self.t_coh_static = Some(t_coh_static);
        validate_config(self)
    }

    /// Data slots per coherence block: `T_d - N_d`.
    pub fn data_slots(&self) -> usize {
        self.t_coh_dynamic - self.n_dynamic
    }

    /// Rate prefactor of the dynamic user, `1 - N_d/T_d`.
    pub fn dynamic_prelog(&self) -> f64 {
        1.0 - self.n_dynamic as f64 / self.t_coh_dynamic as f64
    }

    /// Rate prefactor of the static user, `N_d/T_d`.
    pub fn static_prelog(&self) -> f64 {
        self.n_dynamic as f64 / self.t_coh_dynamic as f64
    }
}

/// Derives `m_tx` and checks every configuration invariant.
///
/// Idempotent: validating an already-valid configuration returns it unchanged.
pub fn validate_config(mut cfg: SystemConfig) -> Result<SystemConfig, ModelError> {
    if cfg.n_dynamic == 0 || cfg.n_static == 0 {
        return Err(ModelError::ZeroAntennas {
            n_dynamic: cfg.n_dynamic,
            n_static: cfg.n_static,
        });
    }
    if cfg.t_coh_dynamic < 2 * cfg.n_dynamic {
        return Err(ModelError::CoherenceTooShort {
            t_coh_dynamic: cfg.t_coh_dynamic,
            min: 2 * cfg.n_dynamic,
        });
    }
    if let Some(t_s) = cfg.t_coh_static {
        if t_s < cfg.t_coh_dynamic {
            return Err(ModelError::StaticCoherenceTooShort {
                t_coh_static: t_s,
                t_coh_dynamic: cfg.t_coh_dynamic,
            });
        }
    }
    cfg.m_tx = cfg.n_dynamic.max(cfg.n_static);
    Ok(cfg)
}

/// Largest feasible data coefficient for a given budget:
/// `a = rho*T_d / (M*N_d*(T_d - N_d))`.
///
/// The block energy of the superposed signal is `M*N_d*(c_tau + (T_d-N_d)*c_delta)`
/// (the static data block is `M x N_d` with unit-variance entries, which is
/// where the `M` factor comes from), so `c_delta = a` exhausts the budget with
/// zero pilot power.
pub fn c_delta_max(cfg: &SystemConfig, rho: f64) -> f64 {
    rho * cfg.t_coh_dynamic as f64
        / ((cfg.m_tx * cfg.n_dynamic) as f64 * cfg.data_slots() as f64)
}

/// Pilot/data power coefficients `(c_tau, c_delta)` of the superposition
/// scheme under average power budget `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionPower {
    pub c_tau: f64,
    pub c_delta: f64,
    pub rho: f64,
}

impl SuperpositionPower {
    /// Block energy `M*N_d*(c_tau + (T_d - N_d)*c_delta)` spent by these
    /// coefficients under configuration `cfg`.
    pub fn budget_used(&self, cfg: &SystemConfig) -> f64 {
        (cfg.m_tx * cfg.n_dynamic) as f64
            * (self.c_tau + cfg.data_slots() as f64 * self.c_delta)
    }

    /// Checks the power constraint `budget_used <= rho*T_d` (relative
    /// tolerance [`BUDGET_REL_TOL`]).
    pub fn check_budget(&self, cfg: &SystemConfig) -> Result<(), ModelError> {
        let budget = self.rho * cfg.t_coh_dynamic as f64;
        let used = self.budget_used(cfg);
        if used > budget + BUDGET_REL_TOL * budget.max(1.0) {
            return Err(ModelError::BudgetExceeded { used, budget });
        }
        Ok(())
    }
}

/// Builds the superposition power split that saturates the budget with
/// equality for a chosen data coefficient: `c_tau = rho*T_d/(M*N_d) -
/// (T_d-N_d)*c_delta`.
pub fn superposition_power_from_budget(
    cfg: &SystemConfig,
    rho: f64,
    c_delta: f64,
) -> Result<SuperpositionPower, ModelError> {
    if rho < 0.0 {
        return Err(ModelError::NegativeValue { name: "rho", value: rho });
    }
    let max = c_delta_max(cfg, rho);
    if c_delta < 0.0 || c_delta > max * (1.0 + BUDGET_REL_TOL) {
        return Err(ModelError::DataCoefficientOutOfRange { c_delta, max });
    }
    let mn = (cfg.m_tx * cfg.n_dynamic) as f64;
    let c_tau = rho * cfg.t_coh_dynamic as f64 / mn - cfg.data_slots() as f64 * c_delta;
    // c_delta == a makes c_tau zero in exact arithmetic; clamp the rounding dust.
    let c_tau = c_tau.max(0.0);
    Ok(SuperpositionPower { c_tau, c_delta, rho })
}

/// Training/data powers `(rho_tau, rho_delta)` of the TDMA baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselinePower {
    pub rho_tau: f64,
    pub rho_delta: f64,
    pub rho: f64,
}

impl BaselinePower {
    pub fn new(rho_tau: f64, rho_delta: f64, rho: f64) -> Self {
        Self { rho_tau, rho_delta, rho }
    }

    /// Block energy `rho_tau*N_d + rho_delta*(T_d - N_d)`.
    pub fn budget_used(&self, cfg: &SystemConfig) -> f64 {
        self.rho_tau * cfg.n_dynamic as f64 + self.rho_delta * cfg.data_slots() as f64
    }

    /// Checks `budget_used <= rho*T_d` (relative tolerance [`BUDGET_REL_TOL`]).
    pub fn check_budget(&self, cfg: &SystemConfig) -> Result<(), ModelError> {
        let budget = self.rho * cfg.t_coh_dynamic as f64;
        let used = self.budget_used(cfg);
        if used > budget + BUDGET_REL_TOL * budget.max(1.0) {
            return Err(ModelError::BudgetExceeded { used, budget });
        }
        Ok(())
    }
}

/// How a [`RateEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    ClosedForm,
    MonteCarlo,
}

/// A rate value in bits per channel use, with sampling metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub kind: RateKind,
}

impl RateEstimate {
    /// Logarithm base of every rate in this crate (bits per channel use).
    pub const LOG_BASE: f64 = 2.0;

    /// An exact value, e.g. a rate that is identically zero.
    pub fn closed_form(mean: f64) -> Self {
        Self { mean, std_error: 0.0, n_samples: 1, kind: RateKind::ClosedForm }
    }

    pub fn monte_carlo(mean: f64, std_error: f64, n_samples: usize) -> Self {
        Self { mean, std_error, n_samples, kind: RateKind::MonteCarlo }
    }
}

/// Scheme that produced a rate-region point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeLabel {
    Tdma,
    ProdSup,
    ProdSupIc,
}

impl std::fmt::Display for SchemeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SchemeLabel::Tdma => "tdma",
            SchemeLabel::ProdSup => "prodsup",
            SchemeLabel::ProdSupIc => "prodsup_ic",
        })
    }
}

/// One `(R_dynamic, R_static)` point of a rate region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRegionPoint {
    pub r_dynamic: f64,
    pub r_static: f64,
    /// Time-sharing fraction for TDMA points; `None` for superposition points.
    pub share_p: Option<f64>,
    pub label: SchemeLabel,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_derives_m_tx_as_max() {
        let cfg = SystemConfig::new(2, 4, 5).unwrap();
        assert_eq!(cfg.m_tx, 4);
        let cfg = SystemConfig::new(4, 2, 8).unwrap();
        assert_eq!(cfg.m_tx, 4);
    }

    #[test]
    fn validate_rejects_short_coherence() {
        let err = SystemConfig::new(2, 4, 3).unwrap_err();
        assert_eq!(err, ModelError::CoherenceTooShort { t_coh_dynamic: 3, min: 4 });
    }

    #[test]
    fn validate_rejects_zero_antennas() {
        assert!(matches!(
            SystemConfig::new(0, 4, 5),
            Err(ModelError::ZeroAntennas { .. })
        ));
        assert!(matches!(
            SystemConfig::new(2, 0, 5),
            Err(ModelError::ZeroAntennas { .. })
        ));
    }

    #[test]
    fn validate_is_idempotent() {
        let cfg = SystemConfig::new(3, 2, 7).unwrap().with_static_coherence(50).unwrap();
        assert_eq!(validate_config(cfg).unwrap(), cfg);
    }

    #[test]
    fn static_coherence_must_cover_dynamic() {
        let err = SystemConfig::new(2, 4, 5).unwrap().with_static_coherence(4).unwrap_err();
        assert!(matches!(err, ModelError::StaticCoherenceTooShort { .. }));
    }

    #[test]
    fn budget_equality_worked_example() {
        // (N_d=2, N_s=4, T_d=5, rho=10, c_delta=1.14198) -> c_tau ~ 2.82406
        let cfg = SystemConfig::new(2, 4, 5).unwrap();
        let p = superposition_power_from_budget(&cfg, 10.0, 1.14198).unwrap();
        assert!((p.c_tau - 2.82406).abs() < 1e-5, "c_tau = {}", p.c_tau);
        let residual = (p.budget_used(&cfg) - 50.0).abs() / 50.0;
        assert!(residual < 1e-12, "budget residual {residual}");
    }

    #[test]
    fn zero_budget_gives_zero_pilot() {
        let cfg = SystemConfig::new(2, 4, 5).unwrap();
        let p = superposition_power_from_budget(&cfg, 0.0, 0.0).unwrap();
        assert_eq!(p.c_tau, 0.0);
    }

    #[test]
    fn boundary_c_delta_forces_zero_pilot() {
        // (N_d=1, N_s=1, T_d=4, rho=1): a = 4/3 and c_delta = a leaves no pilot power.
        let cfg = SystemConfig::new(1, 1, 4).unwrap();
        let a = c_delta_max(&cfg, 1.0);
        assert!((a - 4.0 / 3.0).abs() < 1e-15);
        let p = superposition_power_from_budget(&cfg, 1.0, a).unwrap();
        assert_eq!(p.c_tau, 0.0);
    }

    #[test]
    fn infeasible_c_delta_rejected() {
        let cfg = SystemConfig::new(2, 4, 5).unwrap();
        assert!(matches!(
            superposition_power_from_budget(&cfg, 10.0, 3.0),
            Err(ModelError::DataCoefficientOutOfRange { .. })
        ));
        assert!(matches!(
            superposition_power_from_budget(&cfg, 10.0, -0.1),
            Err(ModelError::DataCoefficientOutOfRange { .. })
        ));
    }

    #[test]
    fn baseline_budget_accounting() {
        let cfg = SystemConfig::new(2, 4, 5).unwrap();
        // rho_tau*N_d + rho_delta*(T_d-N_d) = 2*2 + 3*2 = 10 <= 10*5
        BaselinePower::new(2.0, 2.0, 10.0).check_budget(&cfg).unwrap();
        let over = BaselinePower::new(20.0, 4.0, 1.0);
        assert!(matches!(over.check_budget(&cfg), Err(ModelError::BudgetExceeded { .. })));
    }

    #[test]
    fn rate_estimate_invariants() {
        let r = RateEstimate::closed_form(0.0);
        assert_eq!(r.std_error, 0.0);
        assert_eq!(r.kind, RateKind::ClosedForm);
        assert!(RateEstimate::monte_carlo(1.5, 0.01, 100).mean >= 0.0);
    }
}
