//! Linear MMSE estimation of the equivalent channel from the pilot phase.
//!
//! The pilot observation has the form `Y = sqrt(g) * H * X_tau + W` with `g`
//! the pilot gain (`c_tau * N` for the superposed scheme), `X_tau` unitary,
//! and `H`, `W` having uncorrelated zero-mean unit-variance entries.  The
//! per-entry linear MMSE estimate is then `H_hat = sqrt(g)/(1+g) * Y *
//! X_tau^H`, whose entries are uncorrelated with variance `alpha2 = g/(1+g)`.
//! The estimator treats the entries of `H` as uncorrelated unit-variance
//! unknowns; it is not the conditional mean under a product-of-Gaussians
//! prior.

use num_complex::Complex64;
use thiserror::Error;

use crate::randmat::CMat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EstimatorError {
    #[error("degenerate pilot: zero training power leaves the normalized estimate undefined")]
    DegeneratePilot,
}

/// Per-entry variance of the MMSE estimate: `c_tau*N_s / (1 + c_tau*N_s)`.
///
/// Monotone increasing in `c_tau`, zero without training power, and
/// approaching 1 in the perfect-training limit.
pub fn alpha2(c_tau: f64, n_static: usize) -> f64 {
    let g = c_tau * n_static as f64;
    g / (1.0 + g)
}

/// MMSE estimate of an equivalent channel, raw and normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentChannelEstimate {
    /// Raw estimate; entries have variance [`EquivalentChannelEstimate::alpha2`].
    pub h_hat: CMat,
    /// Normalized estimate `h_hat / sqrt(alpha2)`; entries have unit variance.
    pub h_bar: CMat,
    /// Estimate-quality constant in `[0, 1)`.
    pub alpha2: f64,
}

/// MMSE estimate of the dynamic user's `N_d x N_d` equivalent channel from
/// its pilot observation `y_train = sqrt(c_tau*N_s) * H_eq * x_pilot + W`.
pub fn mmse_estimate(
    y_train: &CMat,
    x_pilot: &CMat,
    c_tau: f64,
    n_static: usize,
) -> Result<EquivalentChannelEstimate, EstimatorError> {
    mmse_with_gain(y_train, x_pilot, c_tau * n_static as f64)
}

/// Same linear map applied to the static user's `N_s x N_d` observation of
/// its own equivalent channel; the rows see the identical per-entry model, so
/// the estimate quality is the same `alpha2`.
pub fn mmse_estimate_static_equiv(
    y_train: &CMat,
    x_pilot: &CMat,
    c_tau: f64,
    n_static: usize,
) -> Result<EquivalentChannelEstimate, EstimatorError> {
    mmse_with_gain(y_train, x_pilot, c_tau * n_static as f64)
}

/// Core estimator for pilot gain `g`: `h_hat = sqrt(g)/(1+g) * y * x_pilot^H`.
pub(crate) fn mmse_with_gain(
    y_train: &CMat,
    x_pilot: &CMat,
    gain: f64,
) -> Result<EquivalentChannelEstimate, EstimatorError> {
    if gain <= 0.0 {
        return Err(EstimatorError::DegeneratePilot);
    }
    let a2 = gain / (1.0 + gain);
    let shrink = gain.sqrt() / (1.0 + gain);
    let h_hat = y_train * x_pilot.adjoint() * Complex64::new(shrink, 0.0);
    let h_bar = &h_hat * Complex64::new(1.0 / a2.sqrt(), 0.0);
    Ok(EquivalentChannelEstimate { h_hat, h_bar, alpha2: a2 })
}
