//! Constant-tension (harmonic) period and the a-priori bounds that bracket
//! the exact period.
//!
//! Treating the tension as constant gives simple harmonic motion with
//! angular frequency `sqrt(2T / (m l))`; that period `p_bar` is an upper
//! bound for the exact period. Freezing the half-lengths in the period
//! integral at the turning point and applying
//! `sqrt(l² + y0²) <= l + y0² / (2l)` twice gives the lower bound
//!
//! ```text
//! P >= p_bar / sqrt(1 + eps),   eps = y0² / (2 l (l - l0))
//! ```
//!
//! and with `1 - sqrt(1 + eps) >= -eps / 2` the relative error
//! `R = (P - p_bar) / P` satisfies `-eps / 2 <= R <= 0`.

use crate::model::{Amplitude, StringParams};
use crate::scalar::Scalar;

/// Bracket on the exact period and on the relative error of `p_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodBounds<T> {
    pub lower: T,
    /// The harmonic period `p_bar`.
    pub upper: T,
    pub envelope_low: T,
    pub envelope_high: T,
}

impl<T: Scalar> PeriodBounds<T> {
    pub fn contains(&self, period: T) -> bool {
        self.lower <= period && period <= self.upper
    }
}

/// Harmonic period `2 pi / sqrt(2T / (m l))`.
pub fn rayleigh_period<T: Scalar>(params: &StringParams<T>) -> T {
    let omega_sq = T::lit(2.0) * params.equilibrium_tension() / (params.mass * params.l);
    T::TAU() / omega_sq.sqrt()
}

/// Dimensionless amplitude measure `y0² / (2 l (l - l0))`.
///
/// Equal to `sigma y0² / (2 T l)` with the tension eliminated, so it stays
/// accurate when `l` approaches `l0`.
pub fn amplitude_ratio<T: Scalar>(params: &StringParams<T>, y0: Amplitude<T>) -> T {
    let y0 = y0.get();
    y0 * y0 / (T::lit(2.0) * params.l * (params.l - params.l0))
}

pub fn lower_bound<T: Scalar>(params: &StringParams<T>, y0: Amplitude<T>) -> T {
    rayleigh_period(params) / (T::one() + amplitude_ratio(params, y0)).sqrt()
}

/// Lower envelope of `R = (P - p_bar) / P`, namely `-y0² / (4 l (l - l0))`.
pub fn relative_error_envelope<T: Scalar>(params: &StringParams<T>, y0: Amplitude<T>) -> T {
    -amplitude_ratio(params, y0) / T::lit(2.0)
}

pub fn period_bounds<T: Scalar>(params: &StringParams<T>, y0: Amplitude<T>) -> PeriodBounds<T> {
    PeriodBounds {
        lower: lower_bound(params, y0),
        upper: rayleigh_period(params),
        envelope_low: relative_error_envelope(params, y0),
        envelope_high: T::zero(),
    }
}

/// Relative error `(P - p_bar) / P` of the harmonic period against `period`.
pub fn relative_error<T: Scalar>(params: &StringParams<T>, period: T) -> T {
    (period - rayleigh_period(params)) / period
}

/// The bound formulas exactly as they were originally published.
///
/// These are not dimensionally consistent (the ratio form carries
/// mass·length in a term added to 1, the additive form adds a force to a
/// squared frequency). They exist only so the `--paper-literal` diagnostic
/// can show where they break the sandwich and unit-scaling checks.
pub mod printed {
    use super::rayleigh_period;
    use crate::model::{Amplitude, StringParams};
    use crate::scalar::Scalar;

    /// `p_bar / sqrt(1 + sigma m y0² / (2 T l0))`.
    pub fn lower_bound_ratio_form<T: Scalar>(params: &StringParams<T>, y0: Amplitude<T>) -> T {
        let y0 = y0.get();
        let t = params.equilibrium_tension();
        let term = params.sigma * params.mass * y0 * y0 / (T::lit(2.0) * t * params.l0);
        rayleigh_period(params) / (T::one() + term).sqrt()
    }

    /// `2 pi / sqrt(2T / (m l) + sigma y0² / (l l0))`.
    pub fn lower_bound_additive_form<T: Scalar>(params: &StringParams<T>, y0: Amplitude<T>) -> T {
        let y0 = y0.get();
        let t = params.equilibrium_tension();
        let omega_sq = T::lit(2.0) * t / (params.mass * params.l)
            + params.sigma * y0 * y0 / (params.l * params.l0);
        T::TAU() / omega_sq.sqrt()
    }

    /// `-m y0² / (4 (l - l0))`.
    pub fn relative_error_envelope<T: Scalar>(params: &StringParams<T>, y0: Amplitude<T>) -> T {
        let y0 = y0.get();
        -params.mass * y0 * y0 / (T::lit(4.0) * (params.l - params.l0))
    }
}
