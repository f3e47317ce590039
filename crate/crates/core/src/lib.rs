//! Exact simulation of partially distinguishable photons in linear optics.
//!
//! Small Fock states are expanded exactly, pushed through mode unitaries,
//! and measured with pure projectors or coincidence event sums. The
//! [`analysis`] module sweeps the distinguishability parameter and decides
//! whether each resulting probability curve is monotonic.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod fock;
pub mod models;
pub mod projectors;
pub mod transforms;

pub use error::{Error, Result};
