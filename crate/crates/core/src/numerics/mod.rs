//! Small numerical kernels: adaptive Simpson quadrature and golden-section
//! search.

mod golden;
mod simpson;

pub use golden::{golden_max, golden_min};
pub use simpson::{integrate, integrate_piecewise, QuadConfig};
