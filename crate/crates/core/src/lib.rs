//! Sparse transceiver design for co-located MIMO radar.
//!
//! Given a full uniform transmit/receive aperture, the crate picks `M_t` of
//! `M` transmitters and `N_r` of `N` receivers so that the MaxSINR receive
//! beamformer on the resulting virtual sub-array performs best. Selection is
//! driven by successive convex approximation with a two-dimensional,
//! reweighted group-sparsity penalty; every iteration is a small
//! second-order cone program solved by the in-crate interior-point solver.
//!
//! Module map:
//!
//! - [`array_model`]: steering vectors, virtual-array responses, covariances
//!   and simulated snapshots.
//! - [`beamformer`]: MaxSINR weights, SINR evaluation, the real lift and
//!   sub-array restriction.
//! - [`socp`]: the per-iteration cone program and its certificate checks.
//! - [`sca`]: the outer successive-approximation loop and mask extraction.
//! - [`oracle`]: exhaustive enumeration and random-array baselines.
//! - [`experiment`]: configuration files, sweeps, CSV and result documents.

pub mod array_model;
pub mod beamformer;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod oracle;
pub mod sca;
pub mod socp;

pub use array_model::{ArrayGeometry, CovarianceModel, Scenario, Side, SourceSpec};
pub use beamformer::{BeamWeights, Selection, Sinr};
pub use error::{Error, Result};
pub use sca::{ScaParams, SelectionResult};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Converts a linear power ratio to decibels.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Converts decibels to a linear power ratio.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
