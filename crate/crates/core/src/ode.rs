//! Time integration of the full equation of motion.
//!
//! The state is advanced with the Dormand-Prince 5(4) pair (local
//! extrapolation, FSAL) and each accepted step carries the usual quartic
//! continuous extension, which is used to localize zero crossings.
//!
//! Internally the problem is integrated in reduced units: lengths in units of
//! `l` and time in units of `1 / omega`, where `omega = sqrt(2T / (m l))` is
//! the harmonic angular frequency. In those units the equation of motion is
//!
//! ```text
//! y'' = -y (y² / (r + 1) + mu) / (mu r),   r = sqrt(1 + y²),  mu = (l - l0) / l
//! ```
//!
//! which depends on a single parameter. Tolerances therefore refer to the
//! reduced state and results obey the scaling laws in `sigma`, `m` and the
//! lengths without further effort. Samples are reported in physical units.

use crate::bounds::rayleigh_period;
use crate::error::{Error, Result};
use crate::model::{Amplitude, OscState, StringParams};
use crate::numerics::refine_root;
use crate::periods::{Method, PeriodResult, Reduced};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig<T> {
    pub rel_tol: T,
    /// Absolute tolerance on the reduced state (`y / l` and `v / (l omega)`).
    pub abs_tol: T,
    /// First trial step in physical time; chosen from `rel_tol` when `None`.
    pub initial_step: Option<T>,
    /// Cap on attempted (accepted plus rejected) steps.
    pub max_steps: usize,
}

impl<T: Scalar> Default for OdeConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-9),
            abs_tol: T::zero(),
            initial_step: None,
            max_steps: 100_000,
        }
    }
}

impl<T: Scalar> OdeConfig<T> {
    pub fn with_rel_tol(rel_tol: T) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol > T::zero()) {
            return Err(Error::InvalidConfig("ODE rel_tol must be positive".into()));
        }
        if !(self.abs_tol.is_finite() && self.abs_tol >= T::zero()) {
            return Err(Error::InvalidConfig("ODE abs_tol must be nonnegative".into()));
        }
        if let Some(h) = self.initial_step {
            if !(h.is_finite() && h > T::zero()) {
                return Err(Error::InvalidConfig("initial_step must be positive".into()));
            }
        }
        if self.max_steps < 1 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Accepted states of one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    /// Strictly increasing in time; the first entry is the initial condition.
    pub samples: Vec<OscState<T>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub max_energy_drift: T,
}

/// Largest relative deviation of the energy from its initial value.
///
/// Deviations are measured against `max(|E0|, E0 - E_min)`, where `E_min` is
/// the energy at rest in equilibrium. This equals `|E0|` except near the
/// amplitude where the energy zero happens to coincide with `E0`.
pub fn energy_drift<T: Scalar>(params: &StringParams<T>, traj: &Trajectory<T>) -> T {
    running_energy_drift(params, &traj.samples)
        .last()
        .copied()
        .unwrap_or_else(T::zero)
}

/// Running maximum of the relative energy drift, one entry per sample.
pub fn running_energy_drift<T: Scalar>(params: &StringParams<T>, samples: &[OscState<T>]) -> Vec<T> {
    let Some(first) = samples.first() else {
        return Vec::new();
    };
    let e0 = params.energy(first);
    let scale = e0.abs().max(e0 - params.potential(T::zero()));
    let mut worst = T::zero();
    samples
        .iter()
        .map(|s| {
            let d = (params.energy(s) - e0).abs() / scale;
            if d > worst {
                worst = d;
            }
            worst
        })
        .collect()
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// difference between the fifth- and fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// continuous extension
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

type State<T> = [T; 2];

/// Reduced right-hand side.
#[derive(Debug, Clone, Copy)]
struct Reduced1D<T> {
    mu: T,
}

impl<T: Scalar> Reduced1D<T> {
    fn rhs(&self, x: &State<T>) -> State<T> {
        let [y, v] = *x;
        let one = T::one();
        let r = one.hypot(y);
        let accel = -y * (y * y / (r + one) + self.mu) / (self.mu * r);
        [v, accel]
    }
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy)]
struct Step<T> {
    t0: T,
    h: T,
    coeffs: [State<T>; 5],
}

impl<T: Scalar> Step<T> {
    fn at(&self, t: T) -> State<T> {
        let theta = (t - self.t0) / self.h;
        let theta1 = T::one() - theta;
        let [r1, r2, r3, r4, r5] = self.coeffs;
        let comp = |i: usize| r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        [comp(0), comp(1)]
    }

    fn t1(&self) -> T {
        self.t0 + self.h
    }
}

struct Stepper<T> {
    sys: Reduced1D<T>,
    rel_tol: T,
    abs_tol: T,
    adaptive: bool,
    max_steps: usize,
    t: T,
    x: State<T>,
    fx: State<T>,
    h: T,
    peak: State<T>,
    evaluations: usize,
    accepted: usize,
    rejected: usize,
}

impl<T: Scalar> Stepper<T> {
    fn new(sys: Reduced1D<T>, x0: State<T>, h0: T, cfg: &OdeConfig<T>, adaptive: bool) -> Self {
        let fx = sys.rhs(&x0);
        Self {
            sys,
            rel_tol: cfg.rel_tol,
            abs_tol: cfg.abs_tol,
            adaptive,
            max_steps: cfg.max_steps,
            t: T::zero(),
            x: x0,
            fx,
            h: h0,
            peak: [x0[0].abs(), x0[1].abs()],
            evaluations: 1,
            accepted: 0,
            rejected: 0,
        }
    }

    fn attempts(&self) -> usize {
        self.accepted + self.rejected
    }

    /// Advances by one accepted step, never past `t_stop` when given.
    fn step(&mut self, t_stop: Option<T>) -> Result<Step<T>> {
        let mut rejected_here = false;
        loop {
            if self.attempts() >= self.max_steps {
                return Err(Error::StepLimitExceeded(self.max_steps));
            }
            let mut h = self.h;
            let mut clipped = false;
            if let Some(stop) = t_stop {
                let remaining = stop - self.t;
                if h >= remaining {
                    h = remaining;
                    clipped = true;
                }
            }
            if h <= T::lit(16.0) * T::epsilon() * self.t.abs().max(T::one()) {
                return Err(Error::StepUnderflow(self.t.as_f64()));
            }

            let (x_new, k) = self.stages(h);
            let err = self.error_norm(h, &x_new, &k);
            if self.adaptive && err > T::one() {
                self.rejected += 1;
                rejected_here = true;
                self.h = h * (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2));
                continue;
            }

            let step = Step {
                t0: self.t,
                h,
                coeffs: self.dense_coefficients(h, &x_new, &k),
            };
            self.t = match t_stop {
                Some(stop) if clipped => stop,
                _ => self.t + h,
            };
            self.x = x_new;
            self.fx = k[6];
            self.peak = [
                self.peak[0].max(x_new[0].abs()),
                self.peak[1].max(x_new[1].abs()),
            ];
            self.accepted += 1;
            if self.adaptive {
                let mut grow = if err == T::zero() {
                    T::lit(5.0)
                } else {
                    (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
                };
                if rejected_here {
                    grow = grow.min(T::one());
                }
                let proposed = h * grow;
                // a step shortened to land on t_stop says nothing about the next one
                self.h = if clipped { self.h.max(proposed) } else { proposed };
            }
            return Ok(step);
        }
    }

    /// Stage derivatives for a step of size `h`; `k[6]` is the derivative at
    /// the new point.
    fn stages(&mut self, h: T) -> (State<T>, [State<T>; 7]) {
        let mut k: [State<T>; 7] = [[T::zero(); 2]; 7];
        k[0] = self.fx;
        let mut xs = self.x;
        for s in 1..7 {
            xs = self.x;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = T::lit(A[s][j]);
                xs[0] = xs[0] + h * a * kj[0];
                xs[1] = xs[1] + h * a * kj[1];
            }
            k[s] = self.sys.rhs(&xs);
            self.evaluations += 1;
        }
        (xs, k)
    }

    /// RMS of the embedded error over the per-component tolerance.
    fn error_norm(&self, h: T, x_new: &State<T>, k: &[State<T>; 7]) -> T {
        let mut sum = T::zero();
        for i in 0..2 {
            let e = k
                .iter()
                .zip(E.iter())
                .fold(T::zero(), |acc, (ks, &w)| acc + T::lit(w) * ks[i]);
            let mag = self.x[i].abs().max(x_new[i].abs()).max(self.peak[i]);
            let scale = self.abs_tol.max(self.rel_tol * mag);
            if scale > T::zero() {
                let ratio = h * e / scale;
                sum = sum + ratio * ratio;
            }
        }
        (sum / T::lit(2.0)).sqrt()
    }

    fn dense_coefficients(&self, h: T, x_new: &State<T>, k: &[State<T>; 7]) -> [State<T>; 5] {
        let mut coeffs = [[T::zero(); 2]; 5];
        for i in 0..2 {
            let r2 = x_new[i] - self.x[i];
            let r3 = h * k[0][i] - r2;
            let r4 = r2 - h * k[6][i] - r3;
            let r5 = h * k
                .iter()
                .zip(D.iter())
                .fold(T::zero(), |acc, (ks, &w)| acc + T::lit(w) * ks[i]);
            coeffs[0][i] = self.x[i];
            coeffs[1][i] = r2;
            coeffs[2][i] = r3;
            coeffs[3][i] = r4;
            coeffs[4][i] = r5;
        }
        coeffs
    }
}

/// Conversion between physical and reduced units.
#[derive(Debug, Clone, Copy)]
struct Units<T> {
    length: T,
    omega: T,
}

impl<T: Scalar> Units<T> {
    fn new(params: &StringParams<T>) -> Self {
        Self {
            length: params.l,
            omega: T::TAU() / rayleigh_period(params),
        }
    }

    fn to_physical(self, t: T, x: &State<T>) -> OscState<T> {
        OscState::new(self.length * x[0], self.length * self.omega * x[1], t / self.omega)
    }
}

fn setup<T: Scalar>(
    params: &StringParams<T>,
    y0: Amplitude<T>,
    cfg: &OdeConfig<T>,
    adaptive_step: Option<T>,
) -> Result<(Units<T>, Stepper<T>)> {
    params.validate()?;
    cfg.validate()?;
    let units = Units::new(params);
    let reduced = Reduced::new(params, y0);
    let sys = Reduced1D { mu: reduced.mu };
    let (h0, adaptive) = match adaptive_step {
        Some(h) => (h * units.omega, false),
        None => {
            let h = match cfg.initial_step {
                Some(h) => h * units.omega,
                None => T::lit(0.1) * cfg.rel_tol.powf(T::lit(0.2)),
            };
            (h, true)
        }
    };
    Ok((units, Stepper::new(sys, [reduced.eta, T::zero()], h0, cfg, adaptive)))
}

/// Integrates from rest at `y0` up to `t_end`, recording every accepted step.
pub fn integrate<T: Scalar>(
    params: &StringParams<T>,
    y0: Amplitude<T>,
    t_end: T,
    cfg: &OdeConfig<T>,
) -> Result<Trajectory<T>> {
    if !(t_end.is_finite() && t_end > T::zero()) {
        return Err(Error::Domain(format!("t_end must be positive (got {})", t_end.as_f64())));
    }
    let (units, mut stepper) = setup(params, y0, cfg, None)?;
    let stop = t_end * units.omega;
    let mut samples = vec![OscState::at_rest(y0)];
    while stepper.t < stop {
        stepper.step(Some(stop))?;
        let t_phys = if stepper.t >= stop { t_end } else { stepper.t / units.omega };
        let mut s = units.to_physical(stepper.t, &stepper.x);
        s.t = t_phys;
        samples.push(s);
    }
    let mut traj = Trajectory {
        samples,
        accepted_steps: stepper.accepted,
        rejected_steps: stepper.rejected,
        max_energy_drift: T::zero(),
    };
    traj.max_energy_drift = energy_drift(params, &traj);
    Ok(traj)
}

/// Component selected for event detection.
#[derive(Clone, Copy)]
enum Crossing {
    /// Displacement falls through zero.
    DisplacementDown,
    /// Velocity falls through zero from positive values.
    VelocityDown,
}

fn find_crossing<T: Scalar>(stepper: &mut Stepper<T>, kind: Crossing, max_steps: usize) -> Result<T> {
    let idx = match kind {
        Crossing::DisplacementDown => 0,
        Crossing::VelocityDown => 1,
    };
    loop {
        let before = stepper.x[idx];
        let step = match stepper.step(None) {
            Ok(s) => s,
            Err(Error::StepLimitExceeded(_)) => return Err(Error::EventNotFound(max_steps)),
            Err(e) => return Err(e),
        };
        let after = stepper.x[idx];
        if before > T::zero() && after <= T::zero() {
            let g = |t: T| step.at(t)[idx];
            let tol = T::lit(1e-14).max(T::lit(4.0) * T::epsilon()) * step.t1().max(T::one());
            return refine_root(g, step.t0, step.t1(), tol);
        }
    }
}

fn quarter_period<T: Scalar>(stepper: &mut Stepper<T>, max_steps: usize) -> Result<T> {
    find_crossing(stepper, Crossing::DisplacementDown, max_steps)
}

/// Period as four times the time to the first downward zero crossing.
pub fn period_ode<T: Scalar>(
    params: &StringParams<T>,
    y0: Amplitude<T>,
    cfg: &OdeConfig<T>,
) -> Result<PeriodResult<T>> {
    let (units, mut stepper) = setup(params, y0, cfg, None)?;
    let tau = quarter_period(&mut stepper, cfg.max_steps)?;
    let period = T::lit(4.0) * tau / units.omega;
    Ok(PeriodResult {
        period,
        method: Method::OdeSimulation,
        error_estimate: period * cfg.rel_tol.max(cfg.abs_tol),
        evaluations: stepper.evaluations,
    })
}

/// Same measurement with a constant step `step` (physical time) and no
/// error control; used to observe the order of the method.
pub fn period_ode_fixed_step<T: Scalar>(
    params: &StringParams<T>,
    y0: Amplitude<T>,
    step: T,
) -> Result<PeriodResult<T>> {
    if !(step.is_finite() && step > T::zero()) {
        return Err(Error::InvalidConfig("fixed step must be positive".into()));
    }
    let cfg = OdeConfig::default();
    let (units, mut stepper) = setup(params, y0, &cfg, Some(step))?;
    let tau = quarter_period(&mut stepper, cfg.max_steps)?;
    let period = T::lit(4.0) * tau / units.omega;
    Ok(PeriodResult {
        period,
        method: Method::OdeSimulation,
        error_estimate: T::zero(),
        evaluations: stepper.evaluations,
    })
}

/// Times of the first downward zero crossing and of the first return to the
/// release point (velocity changing sign from positive to negative).
pub fn crossing_and_return_times<T: Scalar>(
    params: &StringParams<T>,
    y0: Amplitude<T>,
    cfg: &OdeConfig<T>,
) -> Result<(T, T)> {
    let (units, mut stepper) = setup(params, y0, cfg, None)?;
    let quarter = quarter_period(&mut stepper, cfg.max_steps)?;
    let full = find_crossing(&mut stepper, Crossing::VelocityDown, cfg.max_steps)?;
    Ok((quarter / units.omega, full / units.omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QuadConfig;
    use crate::periods::period_phi;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn reference() -> StringParams<f64> {
        StringParams::new(1.0, 1.0, 1.0, 2.0).unwrap()
    }

    fn amp(y: f64) -> Amplitude<f64> {
        Amplitude::new(y).unwrap()
    }

    #[test]
    fn reduced_rhs_matches_physical_acceleration() {
        let p = StringParams::new(2.0, 3.0, 0.7, 1.3).unwrap();
        let units = Units::new(&p);
        let sys = Reduced1D {
            mu: (p.l - p.l0) / p.l,
        };
        for &y in &[-2.0, 0.1, 0.9, 4.0] {
            let reduced = sys.rhs(&[y / p.l, 0.0])[1];
            let physical = p.acceleration(y) / (p.l * units.omega * units.omega);
            assert_relative_eq!(reduced, physical, max_relative = 1e-13);
        }
    }

    #[test]
    fn trajectory_stays_within_amplitude() {
        let traj = integrate(&reference(), amp(0.7), 20.0, &OdeConfig::default()).unwrap();
        assert!(traj.samples.iter().all(|s| s.y.abs() <= 0.7 * (1.0 + 1e-9)));
        assert!(traj.samples.windows(2).all(|w| w[0].t < w[1].t));
        assert_eq!(traj.samples[0], OscState::new(0.7, 0.0, 0.0));
        assert_eq!(traj.samples.last().unwrap().t, 20.0);
    }

    #[test]
    fn small_amplitude_is_harmonic() {
        let y0 = 1e-4;
        let traj = integrate(&reference(), amp(y0), TAU, &OdeConfig::with_rel_tol(1e-10)).unwrap();
        let last = traj.samples.last().unwrap();
        assert!((last.y - y0).abs() <= 1e-9 * y0, "{}", (last.y - y0).abs() / y0);
    }

    #[test]
    fn half_period_mirrors_the_release_point() {
        let p = reference();
        let period = period_phi(&p, amp(0.5), &QuadConfig::default()).unwrap().period;
        let traj = integrate(&p, amp(0.5), period / 2.0, &OdeConfig::with_rel_tol(1e-10)).unwrap();
        let last = traj.samples.last().unwrap();
        assert!((last.y + 0.5).abs() < 1e-8);
        assert!(last.v.abs() < 1e-7);
    }

    #[test]
    fn ode_period_matches_quadrature() {
        let p = reference();
        let cfg = OdeConfig::default();
        let small = period_ode(&p, amp(1e-4), &cfg).unwrap();
        assert_relative_eq!(small.period, TAU, max_relative = 1e-7);
        let quad = period_phi(&p, amp(0.5), &QuadConfig::default()).unwrap().period;
        let ode = period_ode(&p, amp(0.5), &cfg).unwrap();
        assert_relative_eq!(ode.period, quad, max_relative = 1e-7);
        assert_eq!(ode.method, Method::OdeSimulation);
    }

    #[test]
    fn mass_scaling() {
        let cfg = OdeConfig::default();
        let base = period_ode(&reference(), amp(0.5), &cfg).unwrap().period;
        for &k in &[0.25, 4.0] {
            let p = StringParams::new(1.0, k, 1.0, 2.0).unwrap();
            let scaled = period_ode(&p, amp(0.5), &cfg).unwrap().period;
            assert_relative_eq!(scaled, k.sqrt() * base, max_relative = 1e-7);
        }
    }

    #[test]
    fn energy_drift_basics() {
        let p = reference();
        let single = Trajectory {
            samples: vec![OscState::new(0.5, 0.0, 0.0)],
            accepted_steps: 0,
            rejected_steps: 0,
            max_energy_drift: 0.0,
        };
        assert_eq!(energy_drift(&p, &single), 0.0);
        let period = period_phi(&p, amp(0.5), &QuadConfig::default()).unwrap().period;
        let traj = integrate(&p, amp(0.5), period, &OdeConfig::with_rel_tol(1e-10)).unwrap();
        assert!(traj.max_energy_drift <= 1e-9, "{}", traj.max_energy_drift);
        let running = running_energy_drift(&p, &traj.samples);
        assert!(running.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn drift_is_length_scale_invariant() {
        let cfg = OdeConfig::with_rel_tol(1e-9);
        let base = integrate(&reference(), amp(0.5), 6.0, &cfg).unwrap().max_energy_drift;
        let p = StringParams::new(1.0, 1.0, 4.0, 8.0).unwrap();
        let scaled = integrate(&p, amp(2.0), 12.0, &cfg).unwrap().max_energy_drift;
        assert!((base - scaled).abs() <= 1e-3 * base.max(1e-15) + 1e-15);
    }

    #[test]
    fn quarter_period_symmetry() {
        let p = reference();
        let (quarter, full) = crossing_and_return_times(&p, amp(0.5), &OdeConfig::default()).unwrap();
        assert!((4.0 * quarter - full).abs() <= 1e-6 * full);
    }

    #[test]
    fn fixed_step_order() {
        let p = reference();
        let exact = 6.213_542_978_888_965_6;
        let err = |h: f64| (period_ode_fixed_step(&p, amp(0.5), h).unwrap().period - exact).abs();
        let (e1, e2, e3) = (err(0.2), err(0.1), err(0.05));
        assert!(e1 / e2 >= 4.0 && e2 / e3 >= 4.0, "{e1} {e2} {e3}");
    }

    #[test]
    fn error_paths() {
        let p = reference();
        assert!(integrate(&p, amp(0.5), 0.0, &OdeConfig::default()).is_err());
        let tiny = OdeConfig {
            max_steps: 3,
            ..OdeConfig::default()
        };
        assert!(matches!(
            integrate(&p, amp(0.5), 100.0, &tiny),
            Err(Error::StepLimitExceeded(3))
        ));
        assert!(matches!(period_ode(&p, amp(0.5), &tiny), Err(Error::EventNotFound(3))));
        assert!(OdeConfig::<f64>::with_rel_tol(0.0).validate().is_err());
    }
}
