//! Reproducible sampling of complex Gaussian matrices and construction of the
//! pilot matrices.  Every random draw in the crate flows through a
//! [`SeedStream`], so results are a pure function of `(root_seed,
//! sample_index)` no matter how samples are partitioned across workers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::model::SystemConfig;

/// Dense complex matrix used throughout the crate.
pub type CMat = DMatrix<Complex64>;

/// splitmix64 finalizer; avalanches every input bit.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent root seed for a named draw domain, so that distinct
/// evaluators sharing one user seed consume unrelated sample streams.
pub(crate) fn domain_seed(root_seed: u64, domain: u64) -> u64 {
    mix64(root_seed ^ mix64(domain))
}

/// Identifies one Monte Carlo substream: the stream of sample `sample_index`
/// under root seed `root_seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    pub root_seed: u64,
    pub sample_index: u64,
}

impl SeedStream {
    pub fn new(root_seed: u64, sample_index: u64) -> Self {
        Self { root_seed, sample_index }
    }

    /// The substream generator.  The seed mixes `root_seed` and
    /// `sample_index` through a 64-bit avalanche, so partitioning samples
    /// across workers never changes any draw.
    pub fn rng(&self) -> ChaCha8Rng {
        let mixed = mix64(
            self.root_seed ^ mix64(self.sample_index.wrapping_add(0x9e37_79b9_7f4a_7c15)),
        );
        ChaCha8Rng::seed_from_u64(mixed)
    }
}

/// One CN(0,1) variate: independent real and imaginary parts of variance 1/2.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// `rows x cols` matrix of i.i.d. CN(0,1) entries drawn from `rng`.
pub fn cgauss_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// `rows x cols` matrix of i.i.d. CN(0,1) entries, deterministic in `stream`.
pub fn sample_cgauss(rows: usize, cols: usize, stream: SeedStream) -> CMat {
    cgauss_matrix(&mut stream.rng(), rows, cols)
}

/// Unitary `n x n` pilot: the normalized n-point DFT matrix, which exists for
/// every `n` and has constant-modulus entries.
pub fn unitary_pilot(n: usize) -> CMat {
    let scale = 1.0 / (n as f64).sqrt();
    CMat::from_fn(n, n, |j, k| {
        let phase = -TAU * ((j as u64 * k as u64) % n as u64) as f64 / n as f64;
        Complex64::from_polar(scale, phase)
    })
}

/// Baseline training matrix `S` with `S S^H = n I`, i.e. `sqrt(n)` times the
/// unitary pilot.
pub fn baseline_pilot(n: usize) -> CMat {
    unitary_pilot(n) * Complex64::new((n as f64).sqrt(), 0.0)
}

/// One realization of the superposed transmission: both channels, the static
/// data block, and the dynamic user's pilot-phase noise.
#[derive(Debug, Clone)]
pub struct ChannelSample {
    /// `H_d`, `N_d x M`.
    pub h_dynamic: CMat,
    /// `H_s`, `N_s x M`.
    pub h_static: CMat,
    /// Static data block `X_s`, `M x N_d`.
    pub x_s: CMat,
    /// Pilot-phase noise at the dynamic user, `N_d x N_d`.
    pub w_train: CMat,
}

impl ChannelSample {
    /// Draws all blocks i.i.d. CN(0,1) in a fixed order, deterministic in
    /// `stream`.
    pub fn draw(cfg: &SystemConfig, stream: SeedStream) -> Self {
        let mut rng = stream.rng();
        let h_dynamic = cgauss_matrix(&mut rng, cfg.n_dynamic, cfg.m_tx);
        let h_static = cgauss_matrix(&mut rng, cfg.n_static, cfg.m_tx);
        let x_s = cgauss_matrix(&mut rng, cfg.m_tx, cfg.n_dynamic);
        let w_train = cgauss_matrix(&mut rng, cfg.n_dynamic, cfg.n_dynamic);
        Self { h_dynamic, h_static, x_s, w_train }
    }
}
