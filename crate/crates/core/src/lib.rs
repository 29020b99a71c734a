//! Reconstruct the long-range potential of an excited diatomic molecule from
//! photoassociation line lists, predict its rovibrational structure, and
//! cross-check the result with exact bound states.
//!
//! All internal computation is in atomic units; see [`units`].

// Comparisons are written `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundstates;
pub mod cli;
pub mod dataio;
pub mod error;
pub mod fitter;
pub mod nde;
pub mod potential;
pub mod quadrature;
pub mod rotation;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
pub use nde::NdeModel;
pub use potential::{BarrierInfo, PotentialParams};
