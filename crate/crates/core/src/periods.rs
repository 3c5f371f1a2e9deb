//! Exact period by quadrature in two coordinate systems.
//!
//! Both routes integrate in units where the stretched half-length is 1:
//! with `lambda = l0 / l`, `mu = (l - l0) / l` and `eta = y0 / l` the period is
//! `4 sqrt(m / (2 sigma)) sqrt(l) I(lambda, eta)`, so the scaling laws in
//! `sigma`, `m` and the lengths hold by construction and very large
//! amplitudes stay well scaled.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Amplitude, StringParams};
use crate::numerics::{integrate_adaptive, QuadConfig};
use crate::quartic::build_quartic;
use crate::scalar::Scalar;

/// How a period was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Displacement integral with `y = y0 sin(phi)`.
    PhiQuadrature,
    /// Quartic integral in `z = sqrt(l² + y²)` with `z = l + (z0 - l) sin²(theta)`.
    ZQuadrature,
    /// Time integration of the equation of motion to the first zero crossing.
    OdeSimulation,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::PhiQuadrature, Method::ZQuadrature, Method::OdeSimulation];

    pub fn name(self) -> &'static str {
        match self {
            Method::PhiQuadrature => "phi",
            Method::ZQuadrature => "z",
            Method::OdeSimulation => "ode",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "phi" => Ok(Method::PhiQuadrature),
            "z" => Ok(Method::ZQuadrature),
            "ode" => Ok(Method::OdeSimulation),
            other => Err(Error::InvalidConfig(format!(
                "unknown method `{other}` (expected phi, z or ode)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodResult<T> {
    pub period: T,
    pub method: Method,
    pub error_estimate: T,
    /// Integrand evaluations, or right-hand-side evaluations for the ODE route.
    pub evaluations: usize,
}

/// Lengths measured in units of `l`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Reduced<T> {
    pub lambda: T,
    pub mu: T,
    pub eta: T,
}

impl<T: Scalar> Reduced<T> {
    pub fn new(params: &StringParams<T>, y0: Amplitude<T>) -> Self {
        Self {
            lambda: params.l0 / params.l,
            mu: (params.l - params.l0) / params.l,
            eta: y0.get() / params.l,
        }
    }
}

/// `4 sqrt(m / (2 sigma)) sqrt(l)`: converts a reduced integral to a period.
fn period_scale<T: Scalar>(params: &StringParams<T>) -> T {
    T::lit(4.0) * (params.mass / (T::lit(2.0) * params.sigma)).sqrt() * params.l.sqrt()
}

/// Period from the displacement integral.
///
/// With `y = y0 sin(phi)` the factor `1 / sqrt(y0² - y²)` cancels against
/// `dy` and the remaining integrand on `[0, pi/2]` is
/// `sqrt(l0 (z + z0) / (z + z0 - 2 l0))`, smooth and bounded.
pub fn period_phi<T: Scalar>(
    params: &StringParams<T>,
    y0: Amplitude<T>,
    cfg: &QuadConfig<T>,
) -> Result<PeriodResult<T>> {
    params.validate()?;
    let Reduced { lambda, mu, eta } = Reduced::new(params, y0);
    let one = T::one();
    let two = T::lit(2.0);
    let z0 = one.hypot(eta);
    let z0_excess = eta * eta / (z0 + one);
    let integrand = |phi: T| {
        let s = eta * phi.sin();
        let z = one.hypot(s);
        let z_excess = s * s / (z + one);
        (lambda * (z + z0) / (z_excess + z0_excess + two * mu)).sqrt()
    };
    let quad = integrate_adaptive(integrand, T::zero(), T::FRAC_PI_2(), cfg)
        .map_err(|e| rescale_failure(e, period_scale(params)))?;
    let scale = period_scale(params);
    Ok(PeriodResult {
        period: scale * quad.value,
        method: Method::PhiQuadrature,
        error_estimate: scale * quad.error_estimate,
        evaluations: quad.evaluations,
    })
}

/// Period from the quartic integral `4 sqrt(m / (2 sigma)) ∫ z dz / sqrt(Q(z))`
/// over `[l, z0]`.
///
/// Both limits are simple roots of `Q`. Substituting
/// `z = l + (z0 - l) sin²(theta)` cancels both inverse-square-root
/// singularities, leaving `2 z / sqrt(cofactor(z))` on `[0, pi/2]`.
pub fn period_z<T: Scalar>(
    params: &StringParams<T>,
    y0: Amplitude<T>,
    cfg: &QuadConfig<T>,
) -> Result<PeriodResult<T>> {
    params.validate()?;
    let reduced = Reduced::new(params, y0);
    let unit = StringParams {
        sigma: params.sigma,
        mass: params.mass,
        l0: reduced.lambda,
        l: T::one(),
    };
    let quartic = build_quartic(&unit, Amplitude::new(reduced.eta)?);
    let one = T::one();
    let two = T::lit(2.0);
    let width = reduced.eta * reduced.eta / (quartic.z0 + one);
    let integrand = |theta: T| {
        let s = theta.sin();
        let z = one + width * s * s;
        two * z / quartic.cofactor(&z).sqrt()
    };
    let scale = period_scale(params);
    let quad = integrate_adaptive(integrand, T::zero(), T::FRAC_PI_2(), cfg)
        .map_err(|e| rescale_failure(e, scale))?;
    Ok(PeriodResult {
        period: scale * quad.value,
        method: Method::ZQuadrature,
        error_estimate: scale * quad.error_estimate,
        evaluations: quad.evaluations,
    })
}

fn rescale_failure<T: Scalar>(err: Error, scale: T) -> Error {
    match err {
        Error::ToleranceNotMet {
            value,
            error_estimate,
            evaluations,
        } => Error::ToleranceNotMet {
            value: value * scale.as_f64(),
            error_estimate: error_estimate * scale.as_f64(),
            evaluations,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{lower_bound, rayleigh_period};
    use crate::numerics::integrate_fixed;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn reference() -> StringParams<f64> {
        StringParams::new(1.0, 1.0, 1.0, 2.0).unwrap()
    }

    fn amp(y: f64) -> Amplitude<f64> {
        Amplitude::new(y).unwrap()
    }

    /// Independent route: energy-balance integrand in physical units with
    /// `y = y0 sin(phi)`, high-order Gauss-Legendre on 40 panels.
    fn brute_force_period(p: &StringParams<f64>, y0: f64) -> f64 {
        let z0 = (p.l * p.l + y0 * y0).sqrt();
        let f = |phi: f64| {
            let y = y0 * phi.sin();
            let z = (p.l * p.l + y * y).sqrt();
            1.0 / (1.0 / p.l0 - 2.0 / (z + z0)).sqrt()
        };
        let panels = 40;
        let h = std::f64::consts::FRAC_PI_2 / panels as f64;
        let sum: f64 = (0..panels)
            .map(|i| integrate_fixed(f, i as f64 * h, (i + 1) as f64 * h, 20).unwrap())
            .sum();
        4.0 * (p.mass / (2.0 * p.sigma)).sqrt() * sum
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("rk4".parse::<Method>().is_err());
    }

    #[test]
    fn small_amplitude_matches_harmonic_period() {
        let cfg = QuadConfig::default();
        let phi = period_phi(&reference(), amp(1e-4), &cfg).unwrap();
        let z = period_z(&reference(), amp(1e-4), &cfg).unwrap();
        assert_relative_eq!(phi.period, TAU, max_relative = 1e-8);
        assert_relative_eq!(z.period, TAU, max_relative = 1e-8);
    }

    #[test]
    fn reference_amplitude_matches_high_precision_value() {
        // 40-digit reference computed independently with arbitrary precision
        let exact = 6.213_542_978_888_965_6;
        let cfg = QuadConfig::default();
        let phi = period_phi(&reference(), amp(0.5), &cfg).unwrap();
        let z = period_z(&reference(), amp(0.5), &cfg).unwrap();
        assert_relative_eq!(phi.period, exact, max_relative = 1e-12);
        assert_relative_eq!(z.period, phi.period, max_relative = 1e-9);
        assert_relative_eq!(brute_force_period(&reference(), 0.5), exact, max_relative = 1e-12);
        assert!(phi.period >= lower_bound(&reference(), amp(0.5)));
        assert!(phi.period <= rayleigh_period(&reference()));
        assert_eq!(phi.method, Method::PhiQuadrature);
        assert_eq!(z.method, Method::ZQuadrature);
        assert!(phi.error_estimate >= 0.0 && phi.evaluations > 0);
    }

    #[test]
    fn large_amplitudes_match_brute_force() {
        let cfg = QuadConfig::default();
        for &(y0, exact) in &[(2.0, 5.651_291_781_120_149_6), (5.0, 5.030_943_843_485_546_9)] {
            let phi = period_phi(&reference(), amp(y0), &cfg).unwrap();
            let z = period_z(&reference(), amp(y0), &cfg).unwrap();
            assert_relative_eq!(phi.period, exact, max_relative = 1e-11);
            assert_relative_eq!(z.period, exact, max_relative = 1e-10);
        }
        let p = StringParams::new(3.0, 0.7, 0.3, 1.1).unwrap();
        let phi = period_phi(&p, amp(2.5), &cfg).unwrap();
        assert_relative_eq!(phi.period, 1.259_412_024_161_865, max_relative = 1e-11);
    }

    #[test]
    fn length_scaling() {
        let cfg = QuadConfig::default();
        let base = period_phi(&reference(), amp(0.5), &cfg).unwrap().period;
        for &k in &[0.25, 4.0] {
            let p = StringParams::new(1.0, 1.0, k, 2.0 * k).unwrap();
            let phi = period_phi(&p, amp(0.5 * k), &cfg).unwrap().period;
            let z = period_z(&p, amp(0.5 * k), &cfg).unwrap().period;
            assert_relative_eq!(phi, k.sqrt() * base, max_relative = 1e-10);
            assert_relative_eq!(z, k.sqrt() * base, max_relative = 1e-10);
        }
    }

    #[test]
    fn period_decreases_with_amplitude() {
        let cfg = QuadConfig::default();
        let p = |y: f64| period_z(&reference(), amp(y), &cfg).unwrap().period;
        assert!(p(0.8) < p(0.4));
        assert!(p(0.4) < rayleigh_period(&reference()));
    }

    #[test]
    fn extreme_amplitude_stays_finite() {
        let cfg = QuadConfig::default();
        let p = StringParams::new(1.0, 1.0, 1.0, 1.5).unwrap();
        let phi = period_phi(&p, amp(1e4), &cfg).unwrap();
        let z = period_z(&p, amp(1e4), &cfg).unwrap();
        assert!(phi.period.is_finite() && phi.period > 0.0);
        assert_relative_eq!(phi.period, z.period, max_relative = 1e-9);
        assert!(phi.period > lower_bound(&p, amp(1e4)));
    }

    #[test]
    fn single_precision_route() {
        let p = StringParams::<f32>::new(1.0, 1.0, 1.0, 2.0).unwrap();
        let cfg = QuadConfig::with_rel_tol(1e-5);
        let r = period_phi(&p, Amplitude::new(0.5).unwrap(), &cfg).unwrap();
        assert!((r.period - 6.213_543).abs() < 1e-4);
    }
}
