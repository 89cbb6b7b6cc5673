//! Confidence sets for the ratio of two means `E(Y) / E(X)`.
//!
//! The crate provides Fieller's closed-form region, the equivalent
//! ellipse/wedge construction, the all-directions projection region for
//! general distributions, the conservative rectangle region, two bootstrap
//! procedures, and a Monte Carlo simulator that measures coverage and
//! boundedness of every method.
//!
//! Data-parallel loops (bootstrap resamples, projection grids, Monte Carlo
//! replications) run on rayon when the `parallel` feature is enabled and
//! the current thread pool has more than one worker. Results never depend
//! on the worker count.

pub mod bootstrap;
pub mod distributions;
mod error;
pub mod fieller;
pub mod general;
mod par;
pub mod region;
pub mod sample;
pub mod seed;
pub mod simulator;
pub mod student;
pub mod text;

pub use error::{Error, Result};
pub use region::{OneDimCI, RatioRegion, RegionKind};
pub use sample::{estimate_moments, ratio_estimate, MomentEstimates, PairedSample};
