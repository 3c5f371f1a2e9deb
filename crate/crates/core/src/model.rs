//! Physical model of a point mass tied to the middle of a pre-stretched
//! elastic wire and moving perpendicular to it.
//!
//! Each half of the wire has natural length `l0` and is stretched to `l`.
//! With displacement `y` the half-wire length is `r = sqrt(l² + y²)`, the
//! Hooke tension is `sigma (r - l0) / l0`, and the vertical restoring force of
//! both halves divided by the mass gives the equation of motion
//!
//! ```text
//! y'' = -(2 sigma / m) * y * (r - l0) / (l0 r)
//! ```
//!
//! Energies here are specific (per unit mass), so the conserved quantity is
//! `v²/2 + (2 sigma / m) (y² / (2 l0) - r)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Physical configuration of the wire and the attached mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StringParams<T> {
    /// Spring constant (force per unit relative stretch).
    pub sigma: T,
    pub mass: T,
    /// Natural half-length of the wire.
    pub l0: T,
    /// Stretched half-length at equilibrium.
    pub l: T,
}

/// Instantaneous state of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscState<T> {
    pub y: T,
    pub v: T,
    pub t: T,
}

impl<T: Scalar> OscState<T> {
    pub fn new(y: T, v: T, t: T) -> Self {
        Self { y, v, t }
    }

    /// The mass at rest at displacement `y0`, time zero.
    pub fn at_rest(y0: Amplitude<T>) -> Self {
        Self::new(y0.get(), T::zero(), T::zero())
    }
}

/// Initial displacement of a release from rest. Always strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Amplitude<T>(T);

impl<T: Scalar> Amplitude<T> {
    pub fn new(y0: T) -> Result<Self> {
        if y0.is_finite() && y0 > T::zero() {
            Ok(Self(y0))
        } else {
            Err(Error::NonPositiveAmplitude(y0.as_f64()))
        }
    }

    pub fn get(self) -> T {
        self.0
    }
}

fn positive_finite<T: Scalar>(x: T) -> bool {
    x.is_finite() && x > T::zero()
}

impl<T: Scalar> StringParams<T> {
    /// Builds a validated configuration.
    pub fn new(sigma: T, mass: T, l0: T, l: T) -> Result<Self> {
        let params = Self { sigma, mass, l0, l };
        params.validate()?;
        Ok(params)
    }

    /// Checks every invariant and reports the first one violated.
    pub fn validate(&self) -> Result<()> {
        if !positive_finite(self.sigma) {
            return Err(Error::NonPositiveSpringConstant(self.sigma.as_f64()));
        }
        if !positive_finite(self.mass) {
            return Err(Error::NonPositiveMass(self.mass.as_f64()));
        }
        if !positive_finite(self.l0) {
            return Err(Error::NonPositiveNaturalLength(self.l0.as_f64()));
        }
        if !(self.l.is_finite() && self.l > self.l0) {
            return Err(Error::NotPreStretched {
                l0: self.l0.as_f64(),
                l: self.l.as_f64(),
            });
        }
        Ok(())
    }

    /// Length of one half of the wire at displacement `y`.
    pub fn half_length(&self, y: T) -> T {
        self.l.hypot(y)
    }

    /// Tension in each half of the wire at displacement `y`.
    pub fn tension(&self, y: T) -> T {
        self.sigma * (self.half_length(y) - self.l0) / self.l0
    }

    /// Tension at the equilibrium position, `sigma (l - l0) / l0`.
    pub fn equilibrium_tension(&self) -> T {
        self.sigma * (self.l - self.l0) / self.l0
    }

    /// Vertical component of the total force exerted by both halves.
    pub fn vertical_force(&self, y: T) -> T {
        let two = T::lit(2.0);
        -two * self.tension(y) * y / self.half_length(y)
    }

    /// Acceleration from the full nonlinear equation of motion.
    pub fn acceleration(&self, y: T) -> T {
        let two = T::lit(2.0);
        let r = self.half_length(y);
        -(two * self.sigma / self.mass) * y * (r - self.l0) / (self.l0 * r)
    }

    /// Specific potential energy, normalised so that the conserved energy is
    /// `v²/2 + potential(y)`.
    pub fn potential(&self, y: T) -> T {
        let two = T::lit(2.0);
        (two * self.sigma / self.mass) * (y * y / (two * self.l0) - self.half_length(y))
    }

    /// Conserved specific energy of `state`.
    pub fn energy(&self, state: &OscState<T>) -> T {
        state.v * state.v / T::lit(2.0) + self.potential(state.y)
    }

    /// Speed at displacement `y` on the orbit released from rest at `y0`.
    ///
    /// The radicand is evaluated without cancellation:
    /// `1/l0 - 2/(r + r0) = ((r - l) + (r0 - l) + 2(l - l0)) / (l0 (r + r0))`.
    pub fn speed_at(&self, y0: Amplitude<T>, y: T) -> Result<T> {
        let y0 = y0.get();
        let ay = y.abs();
        if !(ay <= y0) {
            return Err(Error::Domain(format!(
                "|y| = {} exceeds the amplitude {}",
                ay.as_f64(),
                y0.as_f64()
            )));
        }
        let two = T::lit(2.0);
        let r = self.half_length(y);
        let r0 = self.half_length(y0);
        let r_excess = y * y / (r + self.l);
        let r0_excess = y0 * y0 / (r0 + self.l);
        let gap = r_excess + r0_excess + two * (self.l - self.l0);
        let radicand =
            (two * self.sigma / self.mass) * (y0 - ay) * (y0 + ay) * gap / (self.l0 * (r + r0));
        Ok(radicand.max(T::zero()).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference() -> StringParams<f64> {
        StringParams::new(1.0, 1.0, 1.0, 2.0).unwrap()
    }

    #[test]
    fn validate_reports_first_violation() {
        assert!(StringParams::new(1.0, 1.0, 1.0, 2.0).is_ok());
        assert_eq!(
            StringParams::new(1.0, 1.0, 2.0, 1.0),
            Err(Error::NotPreStretched { l0: 2.0, l: 1.0 })
        );
        assert_eq!(
            StringParams::new(0.0, 1.0, 1.0, 2.0),
            Err(Error::NonPositiveSpringConstant(0.0))
        );
        assert_eq!(
            StringParams::new(1.0, -1.0, 1.0, 2.0),
            Err(Error::NonPositiveMass(-1.0))
        );
        assert_eq!(
            StringParams::new(1.0, 1.0, 0.0, 2.0),
            Err(Error::NonPositiveNaturalLength(0.0))
        );
        assert!(StringParams::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(StringParams::new(f64::NAN, 1.0, 1.0, 2.0).is_err());
        assert!(StringParams::new(1.0, 1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn amplitude_rejects_zero_and_negative() {
        assert!(Amplitude::new(0.0).is_err());
        assert!(Amplitude::new(-0.1).is_err());
        assert!(Amplitude::new(f64::NAN).is_err());
        assert_eq!(Amplitude::new(0.5).unwrap().get(), 0.5);
    }

    #[test]
    fn tension_values() {
        let p = reference();
        assert_eq!(p.tension(0.0), 1.0);
        assert_eq!(p.tension(-3.0), p.tension(3.0));
        assert_relative_eq!(p.tension(1.5), 1.5, max_relative = 1e-15);
        assert!(p.tension(2.0) > p.tension(1.0));
    }

    #[test]
    fn equilibrium_tension_values() {
        assert_eq!(reference().equilibrium_tension(), 1.0);
        let p = StringParams::new(5.0, 1.0, 2.0, 3.0).unwrap();
        assert_eq!(p.equilibrium_tension(), 2.5);
        assert_eq!(p.equilibrium_tension(), p.tension(0.0));
    }

    #[test]
    fn acceleration_values() {
        let p = reference();
        assert_eq!(p.acceleration(0.0), 0.0);
        assert_relative_eq!(p.acceleration(1.5), -1.8, max_relative = 1e-15);
        for &y in &[0.01, 0.3, 1.0, 7.0] {
            assert_eq!(p.acceleration(-y), -p.acceleration(y));
        }
    }

    #[test]
    fn energy_values() {
        let p = reference();
        let e = p.energy(&OscState::new(0.5, 0.0, 0.0));
        assert_relative_eq!(e, -3.873_105_625_617_660_5, max_relative = 1e-15);
        assert_eq!(p.energy(&OscState::new(0.0, 0.0, 0.0)), -2.0 * p.l);
        let a = OscState::new(0.7, -0.2, 0.0);
        let b = OscState::new(-0.7, 0.2, 0.0);
        assert_eq!(p.energy(&a), p.energy(&b));
    }

    #[test]
    fn speed_values() {
        let p = reference();
        let y0 = Amplitude::new(0.5).unwrap();
        assert_eq!(p.speed_at(y0, 0.5).unwrap(), 0.0);
        assert_relative_eq!(
            p.speed_at(y0, 0.0).unwrap(),
            0.503_774_501_900_085_2,
            max_relative = 1e-14
        );
        assert_eq!(p.speed_at(y0, 0.2).unwrap(), p.speed_at(y0, -0.2).unwrap());
        assert!(matches!(p.speed_at(y0, 0.6), Err(Error::Domain(_))));
    }

    #[test]
    fn speed_agrees_with_energy_balance() {
        let p = StringParams::new(3.0, 0.7, 0.3, 1.1).unwrap();
        let y0 = Amplitude::new(0.9).unwrap();
        let e0 = p.energy(&OscState::at_rest(y0));
        for i in 0..=200 {
            let y = -0.9 + 1.8 * i as f64 / 200.0;
            let v = p.speed_at(y0, y.clamp(-0.9, 0.9)).unwrap();
            let e = 0.5 * v * v + p.potential(y);
            assert_relative_eq!(e, e0, max_relative = 1e-12);
        }
    }

    #[test]
    fn force_decomposition() {
        let p = StringParams::new(2.0, 3.0, 0.5, 0.8).unwrap();
        for &y in &[-4.0, -0.3, 0.001, 0.6, 12.0] {
            assert_relative_eq!(
                p.acceleration(y) * p.mass,
                p.vertical_force(y),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn potential_gradient_matches_acceleration() {
        let p = reference();
        for &y in &[-2.0, -0.4, 0.3, 1.0, 5.0] {
            let h = 1e-5;
            let grad = (p.potential(y + h) - p.potential(y - h)) / (2.0 * h);
            assert_relative_eq!(-grad, p.acceleration(y), max_relative = 1e-6);
        }
    }

    #[test]
    fn single_precision_works() {
        let p = StringParams::<f32>::new(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((p.acceleration(1.5) + 1.8).abs() < 1e-6);
    }
}
