//! Oscillation period of a mass tied to the midpoint of a pre-stretched
//! elastic wire.
//!
//! The exact period is computed three independent ways (a displacement
//! integral, a quartic integral in the half-length coordinate, and direct
//! time integration) and compared against the constant-tension harmonic
//! period and its a-priori bounds.
//!
//! All numerics are generic over [`Scalar`]; the `*64` aliases below are the
//! double-precision instantiations used by the command-line tool.

pub mod bounds;
pub mod error;
pub mod model;
pub mod numerics;
pub mod ode;
pub mod periods;
pub mod quartic;
pub mod scalar;
pub mod verify;

pub use bounds::{
    lower_bound, period_bounds, rayleigh_period, relative_error, relative_error_envelope,
    PeriodBounds,
};
pub use error::{Error, Result};
pub use model::{Amplitude, OscState, StringParams};
pub use numerics::{integrate_adaptive, integrate_fixed, refine_root, QuadConfig, QuadResult};
pub use ode::{energy_drift, integrate, period_ode, running_energy_drift, OdeConfig, Trajectory};
pub use periods::{period_phi, period_z, Method, PeriodResult};
pub use quartic::{build_quartic, QuarticForm};
pub use scalar::Scalar;

pub type StringParams64 = StringParams<f64>;
pub type Amplitude64 = Amplitude<f64>;
pub type OscState64 = OscState<f64>;
pub type QuadConfig64 = QuadConfig<f64>;
pub type OdeConfig64 = OdeConfig<f64>;
pub type PeriodResult64 = PeriodResult<f64>;
pub type PeriodBounds64 = PeriodBounds<f64>;
pub type QuarticForm64 = QuarticForm<f64>;
pub type Trajectory64 = Trajectory<f64>;

pub type StringParams32 = StringParams<f32>;
pub type Amplitude32 = Amplitude<f32>;
