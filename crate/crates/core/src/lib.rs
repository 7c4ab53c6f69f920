//! Dimension estimators and randomized graph constructions on symbolic
//! compact metric spaces.
//!
//! The crate is organised around a handful of capabilities:
//!
//! * [`metric_spaces`]: exact point representations and finite nets for the
//!   unit interval, the scaled triadic Cantor set, the harmonic sequence,
//!   products with cubes and explicit point clouds.
//! * [`estimators`]: packing counts, mesh counts, box-dimension regression,
//!   localized estimates, Hausdorff content bounds and discrete energies.
//! * [`cantor`]: the digit functions on the Cantor set whose graphs have
//!   exactly computable mesh counts.
//! * [`prevalence`]: the layered random function that forces large packing
//!   numbers on graphs, with Monte Carlo checks.
//! * [`energy_method`]: nested families, random fields on them and the
//!   kernel integral bounds used for energy estimates.
//! * [`harness`]: the experiment driver behind the `graphdim` binary.

pub mod cantor;
pub mod energy_method;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod metric_spaces;
pub mod prevalence;
pub mod rational;
pub mod stats;

pub use error::{Error, Result};
pub use rational::Rational;
