//! Quadrature and bracketing root refinement.
//!
//! Endpoint singularities are never handled here: callers remove them with
//! an analytic change of variables so that every integrand reaching this
//! module is smooth on the closed interval.

mod adaptive;
mod gauss;
mod root;

pub use adaptive::{integrate_adaptive, QuadConfig, QuadResult};
pub use gauss::{integrate_fixed, GaussLegendre};
pub use root::refine_root;
