//! Discrete-time quantum walks on a `d`-vertex cycle driven by stochastic
//! gauge fields.
//!
//! * [`state`]: walker state and the O(d) step, coin and phase kernels.
//! * [`stochastic`]: single realizations and ensemble averages with
//!   reproducible per-realization random streams.
//! * [`analysis`]: circular moments, Gaussian and scaling fits, Bloch period.
//! * [`oracle`]: dense-matrix checks of the operator identities behind the
//!   averaged electric walk.
//! * [`cli`]: the `qwalk` command-line front end and its file formats.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod oracle;
pub mod state;
pub mod stochastic;

pub use config::{parse_theta, FieldKind, WalkConfig};
pub use error::{Error, Result};
pub use state::{InitialState, PhaseTable, ProbabilityDistribution, Spin, StateVector};
pub use stochastic::{
    run_deterministic, run_ensemble, run_realization, DistributionSeries, EnsembleAverage,
    RealizationTrace,
};
