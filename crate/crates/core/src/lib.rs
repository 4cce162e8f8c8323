//! Compression-based PAC confidence bounds for scenario decision making.
//!
//! - [`bounds`]: log-domain evaluation of the eight bound formulas.
//! - [`inversion`]: tolerance and sample-size inversion of any bound.
//! - [`exact`]: arbitrary-precision rational reference values.
//! - [`lab`]: the planar min-norm problem and its Monte Carlo harness.
//! - [`report`]: the record, CSV and table formats emitted by the CLI.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod exact;
pub mod inversion;
pub mod lab;
pub mod logspace;
pub mod report;

pub use bounds::{optimal_m, BoundKind, BoundQuery};
pub use error::{Error, Result};
pub use inversion::{epsilon_for_confidence, sample_size_for, InversionTarget};
pub use logspace::{log_binomial, LogValue};
