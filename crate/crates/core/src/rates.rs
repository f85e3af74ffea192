//! Achievable-rate evaluators: the TDMA baseline, the product-superposition
//! scheme, its interference-cancelling variant, and the decodability margin
//! that justifies interference cancellation.
//!
//! Every Monte Carlo evaluator simulates the full estimate pipeline (channel
//! draw, pilot observation, MMSE estimate, log-det) rather than assuming the
//! normalized estimate is Gaussian, so the distribution difference between
//! the product channel and a Gaussian channel is faithfully captured.  Rate
//! means are reported in bits per channel use.

use num_complex::Complex64;
use std::f64::consts::LN_2;
use thiserror::Error;

use crate::estimator::{self, EstimatorError};
use crate::model::{
    BaselinePower, RateEstimate, RateRegionPoint, SchemeLabel, SuperpositionPower, SystemConfig,
};
use crate::montecarlo::{self, McError, McEstimate, McSettings};
use crate::randmat::{self, CMat, ChannelSample, SeedStream};

/// Receiver a rate or SNR refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum User {
    Dynamic,
    Static,
}

/// Transmission scheme a rate or SNR refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Baseline,
    ProdSup,
    ProdSupIc,
}

/// Effective SNR appearing inside a coherent-style log-det rate bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveSnr {
    pub value: f64,
    pub user: User,
    pub scheme: Scheme,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RateError {
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    MonteCarlo(#[from] McError),
    #[error("interference cancellation needs n_static >= n_dynamic (got {n_static} < {n_dynamic})")]
    StaticAntennasTooFew { n_static: usize, n_dynamic: usize },
    #[error("c_tau and c_delta are both zero: the dynamic signal is undefined")]
    ZeroSignal,
}

// Named draw domains: evaluators sharing one user seed consume unrelated
// streams.  The static log-det kernel domain is shared by every static-rate
// evaluator on purpose (identical kernels are then bit-comparable).
const DOMAIN_DYNAMIC_PS: u64 = 1;
const DOMAIN_STATIC_KERNEL: u64 = 2;
const DOMAIN_BASELINE: u64 = 3;
const DOMAIN_IC_EIGEN: u64 = 4;
const DOMAIN_MARGIN_STATIC: u64 = 5;
const DOMAIN_MARGIN_DYNAMIC: u64 = 6;

/// Effective SNR of the dynamic user under product superposition:
/// `c_tau*c_delta*N_d*N_s^2 / (1 + c_tau*N_s + c_delta*N_d*N_s)`.
pub fn snr_dynamic_ps(
    c_tau: f64,
    c_delta: f64,
    n_dynamic: usize,
    n_static: usize,
) -> EffectiveSnr {
    let nd = n_dynamic as f64;
    let ns = n_static as f64;
    let value = c_tau * c_delta * nd * ns * ns / (1.0 + c_tau * ns + c_delta * nd * ns);
    EffectiveSnr { value, user: User::Dynamic, scheme: Scheme::ProdSup }
}

/// Effective SNR of the static user under product superposition: `c_tau*N_s`.
pub fn snr_static_ps(c_tau: f64, n_static: usize) -> EffectiveSnr {
    EffectiveSnr {
        value: c_tau * n_static as f64,
        user: User::Static,
        scheme: Scheme::ProdSup,
    }
}

/// Effective SNR of the trained TDMA baseline:
/// `rho_delta*rho_tau / (1 + rho_delta + rho_tau)`.
///
/// Substituting `rho_tau = c_tau*N_s`, `rho_delta = c_delta*N_d*N_s` makes
/// this equal to [`snr_dynamic_ps`] exactly.
pub fn snr_baseline(rho_tau: f64, rho_delta: f64) -> EffectiveSnr {
    EffectiveSnr {
        value: rho_delta * rho_tau / (1.0 + rho_delta + rho_tau),
        user: User::Dynamic,
        scheme: Scheme::Baseline,
    }
}

/// `log2 det(I + s * H H^H)` via Cholesky; NaN when the factorization fails
/// so the Monte Carlo engine aborts loudly instead of averaging garbage.
fn log2det_eye_plus_scaled_gram(s: f64, h: &CMat) -> f64 {
    let n = h.nrows();
    let mut a = h * h.adjoint() * Complex64::new(s, 0.0);
    for i in 0..n {
        a[(i, i)] += Complex64::new(1.0, 0.0);
    }
    match a.cholesky() {
        Some(chol) => {
            let l = chol.l();
            2.0 * (0..n).map(|i| l[(i, i)].re.ln()).sum::<f64>() / LN_2
        }
        None => f64::NAN,
    }
}

fn scaled(est: McEstimate, prelog: f64) -> RateEstimate {
    RateEstimate::monte_carlo(prelog * est.mean, prelog * est.std_error, est.n_samples)
}

/// Dynamic-user rate under product superposition:
/// `(1 - N_d/T_d) * E[log2 det(I + (rho_d/N_d) Hbar Hbar^H)]`, with `Hbar`
/// the normalized MMSE estimate of the equivalent channel `H_d X_s`
/// simulated through its pilot phase.
pub fn rate_dynamic_ps(
    cfg: &SystemConfig,
    power: &SuperpositionPower,
    mc: &McSettings,
) -> Result<RateEstimate, RateError> {
    // The static data block spreads the product channel over all m_tx
    // transmit antennas, so m_tx is the pilot-gain multiplier (equal to
    // n_static whenever N_s >= N_d).
    let spread = cfg.m_tx;
    let snr = snr_dynamic_ps(power.c_tau, power.c_delta, cfg.n_dynamic, spread).value;
    if snr == 0.0 {
        if power.c_tau == 0.0 && power.c_delta > 0.0 {
            return Err(EstimatorError::DegeneratePilot.into());
        }
        return Ok(RateEstimate::closed_form(0.0));
    }
    let s_per_antenna = snr / cfg.n_dynamic as f64;
    let pilot = randmat::unitary_pilot(cfg.n_dynamic);
    let sqrt_c_tau = Complex64::new(power.c_tau.sqrt(), 0.0);
    let gain = power.c_tau * spread as f64;
    let root = randmat::domain_seed(mc.root_seed, DOMAIN_DYNAMIC_PS);
    let cfg = *cfg;
    let est = montecarlo::estimate(
        |i| {
            let sample = ChannelSample::draw(&cfg, SeedStream::new(root, i));
            // Y_tau = sqrt(c_tau) H_d X_s X_tau + W
            let y = &sample.h_dynamic * &sample.x_s * &pilot * sqrt_c_tau + &sample.w_train;
            let e = estimator::mmse_with_gain(&y, &pilot, gain)
                .expect("pilot gain is positive here");
            log2det_eye_plus_scaled_gram(s_per_antenna, &e.h_bar)
        },
        mc,
    )?;
    Ok(scaled(est, cfg.dynamic_prelog()))
}

/// Shared static-user kernel: `E[log2 det(I_{N_s} + s * H_s H_s^H)]` with
/// `H_s` of size `N_s x M`.
fn static_logdet_kernel(
    cfg: &SystemConfig,
    s: f64,
    mc: &McSettings,
) -> Result<McEstimate, McError> {
    let root = randmat::domain_seed(mc.root_seed, DOMAIN_STATIC_KERNEL);
    let (rows, cols) = (cfg.n_static, cfg.m_tx);
    montecarlo::estimate(
        |i| {
            let h = randmat::sample_cgauss(rows, cols, SeedStream::new(root, i));
            log2det_eye_plus_scaled_gram(s, &h)
        },
        mc,
    )
}

/// Static-user rate under product superposition:
/// `(N_d/T_d) * E[log2 det(I + c_tau * H_s H_s^H)]` (the per-antenna SNR
/// `rho_s/N_s` equals `c_tau`).
pub fn rate_static_ps(
    cfg: &SystemConfig,
    power: &SuperpositionPower,
    mc: &McSettings,
) -> Result<RateEstimate, RateError> {
    if power.c_tau == 0.0 {
        return Ok(RateEstimate::closed_form(0.0));
    }
    let est = static_logdet_kernel(cfg, power.c_tau, mc)?;
    Ok(scaled(est, cfg.static_prelog()))
}

/// Dynamic-user rate of the TDMA baseline, which activates `N_d` of the `M`
/// antennas and trains an `N_d x N_d` i.i.d. channel through its pilot phase:
/// `(1 - N_d/T_d) * E[log2 det(I + (rho_eff/N_d) Hbar Hbar^H)]`.
pub fn rate_dynamic_baseline(
    cfg: &SystemConfig,
    power: &BaselinePower,
    mc: &McSettings,
) -> Result<RateEstimate, RateError> {
    let snr = snr_baseline(power.rho_tau, power.rho_delta).value;
    if snr == 0.0 {
        if power.rho_tau == 0.0 && power.rho_delta > 0.0 {
            return Err(EstimatorError::DegeneratePilot.into());
        }
        return Ok(RateEstimate::closed_form(0.0));
    }
    let n = cfg.n_dynamic;
    let s_per_antenna = snr / n as f64;
    // S_tau = sqrt(N_d) X_tau and X = sqrt(rho_tau/N_d) S_tau [..] gives the
    // observation sqrt(rho_tau) H X_tau + W, i.e. pilot gain rho_tau.
    let pilot = randmat::unitary_pilot(n);
    let sqrt_rho_tau = Complex64::new(power.rho_tau.sqrt(), 0.0);
    let gain = power.rho_tau;
    let root = randmat::domain_seed(mc.root_seed, DOMAIN_BASELINE);
    let prelog = cfg.dynamic_prelog();
    let est = montecarlo::estimate(
        |i| {
            let mut rng = SeedStream::new(root, i).rng();
            let h = randmat::cgauss_matrix(&mut rng, n, n);
            let w = randmat::cgauss_matrix(&mut rng, n, n);
            let y = &h * &pilot * sqrt_rho_tau + w;
            let e = estimator::mmse_with_gain(&y, &pilot, gain)
                .expect("pilot gain is positive here");
            log2det_eye_plus_scaled_gram(s_per_antenna, &e.h_bar)
        },
        mc,
    )?;
    Ok(scaled(est, prelog))
}

/// Coherent static-user rate with the full budget:
/// `E[log2 det(I_{N_s} + (rho/M) H_s H_s^H)]` (equal power per transmit
/// antenna).
pub fn rate_static_coherent(
    cfg: &SystemConfig,
    rho: f64,
    mc: &McSettings,
) -> Result<RateEstimate, RateError> {
    if rho == 0.0 {
        return Ok(RateEstimate::closed_form(0.0));
    }
    let est = static_logdet_kernel(cfg, rho / cfg.m_tx as f64, mc)?;
    Ok(scaled(est, 1.0))
}

/// Time-sharing region between the two single-user rates: points
/// `(p*R_d, (1-p)*R_s)` for `p` on a uniform grid including both endpoints.
pub fn tdma_region(
    r_dyn: &RateEstimate,
    r_stat: &RateEstimate,
    grid_size: usize,
) -> Vec<RateRegionPoint> {
    let k = grid_size.max(2);
    (0..k)
        .map(|j| {
            let p = j as f64 / (k - 1) as f64;
            RateRegionPoint {
                r_dynamic: p * r_dyn.mean,
                r_static: (1.0 - p) * r_stat.mean,
                share_p: Some(p),
                label: SchemeLabel::Tdma,
            }
        })
        .collect()
}

/// Pooled Monte Carlo estimate of `E[lambda^-2]`, where `lambda^2 = c_tau +
/// c_delta*gamma^2` and `gamma^2` runs over all `N_d` eigenvalues of
/// `X_delta X_delta^H` (`X_delta` of size `N_d x (T_d - N_d)`).  The
/// unordered eigenvalues have identical marginals, so pooling is unbiased and
/// cuts the variance by `N_d`.
fn inverse_lambda_sq_mean(
    cfg: &SystemConfig,
    power: &SuperpositionPower,
    mc: &McSettings,
) -> Result<McEstimate, McError> {
    let root = randmat::domain_seed(mc.root_seed, DOMAIN_IC_EIGEN);
    let (n, t_data) = (cfg.n_dynamic, cfg.data_slots());
    let (c_tau, c_delta) = (power.c_tau, power.c_delta);
    montecarlo::estimate(
        |i| {
            let x = randmat::sample_cgauss(n, t_data, SeedStream::new(root, i));
            let gram = &x * x.adjoint();
            let eig = gram.symmetric_eigen().eigenvalues;
            eig.iter()
                .map(|&g| 1.0 / (c_tau + c_delta * g.max(0.0)))
                .sum::<f64>()
                / n as f64
        },
        mc,
    )
}

/// Static-user rate when it decodes and cancels the dynamic signal:
/// `(N_d/T_d) * E[log2 det(I + (1/E[lambda^-2]) H_s H_s^H)]`.
///
/// Since `lambda^2 >= c_tau` pointwise, the effective per-antenna SNR
/// `1/E[lambda^-2]` is at least `c_tau`, so this never falls below
/// [`rate_static_ps`].
pub fn rate_static_ic(
    cfg: &SystemConfig,
    power: &SuperpositionPower,
    mc: &McSettings,
) -> Result<RateEstimate, RateError> {
    if cfg.n_static < cfg.n_dynamic {
        return Err(RateError::StaticAntennasTooFew {
            n_static: cfg.n_static,
            n_dynamic: cfg.n_dynamic,
        });
    }
    if power.c_tau == 0.0 && power.c_delta == 0.0 {
        return Err(RateError::ZeroSignal);
    }
    // With c_delta = 0 every lambda^2 equals c_tau exactly and the scheme
    // degenerates to the plain superposition rate.
    let s = if power.c_delta == 0.0 {
        power.c_tau
    } else {
        1.0 / inverse_lambda_sq_mean(cfg, power, mc)?.mean
    };
    let est = static_logdet_kernel(cfg, s, mc)?;
    Ok(scaled(est, cfg.static_prelog()))
}

/// Effective per-antenna SNR `1/E[lambda^-2]` used by [`rate_static_ic`],
/// exposed for power-gain analysis.
pub fn ic_effective_snr(
    cfg: &SystemConfig,
    power: &SuperpositionPower,
    mc: &McSettings,
) -> Result<EffectiveSnr, RateError> {
    if cfg.n_static < cfg.n_dynamic {
        return Err(RateError::StaticAntennasTooFew {
            n_static: cfg.n_static,
            n_dynamic: cfg.n_dynamic,
        });
    }
    if power.c_tau == 0.0 && power.c_delta == 0.0 {
        return Err(RateError::ZeroSignal);
    }
    let per_antenna = if power.c_delta == 0.0 {
        power.c_tau
    } else {
        1.0 / inverse_lambda_sq_mean(cfg, power, mc)?.mean
    };
    Ok(EffectiveSnr {
        value: per_antenna * cfg.n_static as f64,
        user: User::Static,
        scheme: Scheme::ProdSupIc,
    })
}

/// A Monte Carlo difference of two rate terms; may be slightly negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginEstimate {
    /// Bits per channel use.
    pub value: f64,
    /// Combined standard error of the two sides.
    pub std_error: f64,
    /// Samples used per side.
    pub n_samples: usize,
}

/// Margin by which the static user's mutual information about the dynamic
/// signal exceeds the dynamic user's per-data-slot rate:
/// `E[log2 det(I + (rho_d/N_d) Hbar_s^H Hbar_s)] - E[log2 det(I +
/// (rho_d/N_d) Hbar_d Hbar_d^H)]`, with `Hbar_s` the static user's normalized
/// `N_s x N_d` equivalent-channel estimate.  The top `N_d x N_d` block of
/// `Hbar_s` matches `Hbar_d` in distribution, so the margin is zero when
/// `N_s = N_d` and strictly positive when `N_s > N_d`.
pub fn decodability_margin(
    cfg: &SystemConfig,
    power: &SuperpositionPower,
    mc: &McSettings,
) -> Result<MarginEstimate, RateError> {
    if cfg.n_static < cfg.n_dynamic {
        return Err(RateError::StaticAntennasTooFew {
            n_static: cfg.n_static,
            n_dynamic: cfg.n_dynamic,
        });
    }
    let spread = cfg.m_tx;
    let snr = snr_dynamic_ps(power.c_tau, power.c_delta, cfg.n_dynamic, spread).value;
    if snr == 0.0 {
        return Ok(MarginEstimate { value: 0.0, std_error: 0.0, n_samples: 1 });
    }
    let s_per_antenna = snr / cfg.n_dynamic as f64;
    let pilot = randmat::unitary_pilot(cfg.n_dynamic);
    let sqrt_c_tau = Complex64::new(power.c_tau.sqrt(), 0.0);
    let gain = power.c_tau * spread as f64;
    let cfg = *cfg;

    let static_root = randmat::domain_seed(mc.root_seed, DOMAIN_MARGIN_STATIC);
    let static_side = montecarlo::estimate(
        |i| {
            let mut rng = SeedStream::new(static_root, i).rng();
            let h_s = randmat::cgauss_matrix(&mut rng, cfg.n_static, cfg.m_tx);
            let x_s = randmat::cgauss_matrix(&mut rng, cfg.m_tx, cfg.n_dynamic);
            let w = randmat::cgauss_matrix(&mut rng, cfg.n_static, cfg.n_dynamic);
            let y = &h_s * &x_s * &pilot * sqrt_c_tau + w;
            let e = estimator::mmse_with_gain(&y, &pilot, gain)
                .expect("pilot gain is positive here");
            // det(I + s Hbar_s^H Hbar_s): pass the adjoint to the gram kernel
            log2det_eye_plus_scaled_gram(s_per_antenna, &e.h_bar.adjoint())
        },
        mc,
    )?;

    let dynamic_root = randmat::domain_seed(mc.root_seed, DOMAIN_MARGIN_DYNAMIC);
    let dynamic_side = montecarlo::estimate(
        |i| {
            let sample = ChannelSample::draw(&cfg, SeedStream::new(dynamic_root, i));
            let y = &sample.h_dynamic * &sample.x_s * &pilot * sqrt_c_tau + &sample.w_train;
            let e = estimator::mmse_with_gain(&y, &pilot, gain)
                .expect("pilot gain is positive here");
            log2det_eye_plus_scaled_gram(s_per_antenna, &e.h_bar)
        },
        mc,
    )?;

    Ok(MarginEstimate {
        value: static_side.mean - dynamic_side.mean,
        std_error: (static_side.std_error.powi(2) + dynamic_side.std_error.powi(2)).sqrt(),
        n_samples: static_side.n_samples,
    })
}
