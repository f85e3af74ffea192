//! Rate simulation for a two-user MIMO broadcast channel in which a base
//! station serves a short-coherence ("dynamic") user and a long-coherence
//! ("static") user at the same time by transmitting the product of their two
//! signal matrices.  The dynamic user's pilot block doubles as the static
//! user's data carrier, so the static user's rate comes almost for free.
//!
//! The crate evaluates:
//!
//! * effective SNRs and ergodic achievable rates for the superposition scheme,
//!   for its interference-cancelling variant, and for a TDMA baseline
//!   ([`rates`]),
//! * the pilot/data power split that maximizes the dynamic user's rate,
//!   in closed form with a golden-section cross-check ([`powalloc`]),
//! * low/high-SNR approximations and degrees of freedom ([`asymptotics`]),
//! * reproducible, parallel Monte Carlo expectations ([`montecarlo`]),
//! * the experiment sweeps behind the `prodsup` CLI ([`experiments`]).
//!
//! All rates are in bits per channel use (base-2 logarithms).

pub mod asymptotics;
pub mod estimator;
pub mod experiments;
pub mod model;
pub mod montecarlo;
pub mod powalloc;
pub mod randmat;
pub mod rates;

pub use model::{
    validate_config, BaselinePower, ModelError, RateEstimate, RateKind, RateRegionPoint,
    SchemeLabel, SuperpositionPower, SystemConfig,
};
pub use montecarlo::{McEstimate, McError, McSettings};
pub use randmat::{ChannelSample, CMat, SeedStream};
