//! Ant-colony edge detection and its realization on a memristive pixel array.
//!
//! The crate is split by concern:
//!
//! - [`imaging`]: grayscale images, PGM codec, contrast heuristics, noise
//!   injection, synthetic scenes with ground-truth edge masks.
//! - [`aco`]: path enumeration on the pixel lattice, path probabilities,
//!   pheromone updates, the full detection loop, thresholding.
//! - [`device`]: memristor state models (linear drift, drift with relaxation,
//!   threshold switching) and quasi-static I-V sweeps.
//! - [`dynamics`]: the two-path continuous limits of the colony update and of
//!   a two-branch memristive divider, plus winner comparison.
//! - [`array_sim`]: behavioral simulation of the pixel array (initialization,
//!   grouped update pulses, readout, reset) with an energy ledger.
//!
//! Everything is deterministic: stochastic operations take explicit seeds.
//! The crate is `no_std`-compatible (requires `alloc`; enable the `libm`
//! feature when building without `std`).

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("antedge-core needs either the `std` or the `libm` feature");

pub mod aco;
pub mod array_sim;
pub mod device;
pub mod dynamics;
pub mod error;
pub mod imaging;
mod math;

pub use error::{Error, Result};
