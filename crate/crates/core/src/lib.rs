//! Model-free generalized fiducial (MFGF) predictive inference and the
//! upper-risk decision theory built on it.
//!
//! * [`conformal`]: rank-pivot focal sets, the contour function and
//!   prediction sets with exact finite-sample coverage.
//! * [`risk`]: empirical, true and upper risk, the closed form of the upper
//!   risk for the identity score, and upper-risk minimisation.
//! * [`consistency`]: concentration constants, Hoeffding bounds and Monte
//!   Carlo checks of pointwise and uniform consistency.
//! * [`sim`]: reproducible replication studies and coverage experiments.
//!
//! The guide in `book/` walks through each piece; its code listings are
//! compiled and run as doc-tests of this crate.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conformal;
pub mod consistency;
pub mod data_model;
mod error;
pub mod numerics;
pub mod risk;
pub mod sim;
pub mod textio;

pub use error::{MfgfError, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/focal-sets.md")]
    mod focal_sets {}
    #[doc = include_str!("../../../book/src/upper-risk.md")]
    mod upper_risk {}
    #[doc = include_str!("../../../book/src/consistency.md")]
    mod consistency {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
