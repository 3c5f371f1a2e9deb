//! Verification batteries behind the `verify` subcommand.
//!
//! Each battery evaluates one family of properties over a deterministic set
//! of systems and reports its worst-case margin. Random systems come from a
//! ChaCha8 stream seeded by the caller, so a given seed always produces the
//! same report. Grid points are evaluated in parallel; all reductions are
//! order-independent.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{self, lower_bound, rayleigh_period, relative_error, relative_error_envelope};
use crate::model::{Amplitude, StringParams};
use crate::numerics::QuadConfig;
use crate::ode::{integrate, period_ode, OdeConfig};
use crate::periods::{period_phi, period_z};
use crate::quartic::{build_quartic, printed_coefficients, QuarticForm};
use crate::Result;

pub const DEFAULT_SEED: u64 = 0x5EED_0F57_2196;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Relative slack allowed on the bound inequalities.
pub const SANDWICH_ROUNDOFF: f64 = 1e-12;
pub const PHI_Z_AGREEMENT: f64 = 1e-9;
pub const PHI_ODE_AGREEMENT: f64 = 1e-7;
pub const SMALL_AMPLITUDE_TOL: f64 = 1e-8;
pub const SLOPE_TARGET: f64 = 2.0;
pub const SLOPE_TOL: f64 = 0.05;
pub const QUARTIC_IDENTITY_TOL: f64 = 1e-12;
pub const QUARTIC_ROOT_TOL: f64 = 1e-10;
pub const DRIFT_FACTOR: f64 = 10.0;
pub const SCALING_TOL: f64 = 1e-10;
/// Smallest `y0 / l` at which the expanded f64 quartic coefficients are
/// accurate enough for the pointwise identity check.
pub const F64_QUARTIC_MIN_ETA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub paper_literal: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            paper_literal: false,
        }
    }
}

/// Outcome of one battery.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryReport {
    pub name: &'static str,
    pub passed: bool,
    /// Diagnostic batteries are reported but never fail the run.
    pub diagnostic: bool,
    pub checks: usize,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub batteries: Vec<BatteryReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.batteries.iter().all(|b| b.diagnostic || b.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for b in &self.batteries {
            let tag = match (b.diagnostic, b.passed) {
                (true, _) => "INFO",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            let _ = writeln!(out, "{tag} {:<22} checks={:<6} {}", b.name, b.checks, b.summary);
        }
        let _ = writeln!(out, "overall {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

/// A parameter set together with its release amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct System {
    pub params: StringParams<f64>,
    pub y0: Amplitude<f64>,
}

impl System {
    pub fn new(sigma: f64, mass: f64, l0: f64, l: f64, y0: f64) -> Result<Self> {
        Ok(Self {
            params: StringParams::new(sigma, mass, l0, l)?,
            y0: Amplitude::new(y0)?,
        })
    }

    /// `sigma = m = l0 = 1`, `l = 2`.
    pub fn reference(y0: f64) -> Self {
        Self::new(1.0, 1.0, 1.0, 2.0, y0).expect("reference system is valid")
    }

    pub fn eta(&self) -> f64 {
        self.y0.get() / self.params.l
    }

    fn map(&self, f: impl Fn(StringParams<f64>, f64) -> (StringParams<f64>, f64)) -> Self {
        let (params, y0) = f(self.params, self.y0.get());
        Self {
            params,
            y0: Amplitude::new(y0).expect("scaled amplitude stays positive"),
        }
    }
}

/// `n` points log-spaced over `[a, b]`, endpoints included.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// 20 stretch ratios `l / l0` in `[1.01, 10]` times 10 amplitudes
/// `y0 / l` in `[1e-4, 5]`, with `sigma = m = l0 = 1`.
pub fn standard_grid() -> Vec<System> {
    let mut out = Vec::with_capacity(200);
    for ratio in log_space(1.01, 10.0, 20) {
        for eta in log_space(1e-4, 5.0, 10) {
            out.push(System::new(1.0, 1.0, 1.0, ratio, eta * ratio).expect("grid system is valid"));
        }
    }
    out
}

fn log_uniform(rng: &mut ChaCha8Rng, a: f64, b: f64) -> f64 {
    (rng.gen_range(a.ln()..b.ln())).exp()
}

/// Random systems with `l / l0` in `[1.001, 100]`, `y0 / l` in `[1e-5, 10]`,
/// and `sigma`, `m`, `l0` log-uniform in `[0.1, 10]`.
pub fn random_systems(seed: u64, n: usize) -> Vec<System> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let sigma = log_uniform(&mut rng, 0.1, 10.0);
            let mass = log_uniform(&mut rng, 0.1, 10.0);
            let l0 = log_uniform(&mut rng, 0.1, 10.0);
            let ratio = log_uniform(&mut rng, 1.001, 100.0);
            let eta = log_uniform(&mut rng, 1e-5, 10.0);
            let l = l0 * ratio;
            System::new(sigma, mass, l0, l, eta * l).expect("random system is valid")
        })
        .collect()
}

fn quad() -> QuadConfig<f64> {
    QuadConfig::default()
}

fn failure(name: &'static str, checks: usize, err: impl std::fmt::Display) -> BatteryReport {
    BatteryReport {
        name,
        passed: false,
        diagnostic: false,
        checks,
        summary: format!("error: {err}"),
    }
}

/// Bound margins `(P - lower)/P`, `(p_bar - P)/P` and `R - envelope`.
#[derive(Debug, Clone, Copy)]
pub struct SandwichMargins {
    pub lower: f64,
    pub upper: f64,
    pub envelope: f64,
}

pub fn sandwich_margins(sys: &System) -> Result<SandwichMargins> {
    let p = period_phi(&sys.params, sys.y0, &quad())?.period;
    let p_bar = rayleigh_period(&sys.params);
    Ok(SandwichMargins {
        lower: (p - lower_bound(&sys.params, sys.y0)) / p,
        upper: (p_bar - p) / p,
        envelope: relative_error(&sys.params, p) - relative_error_envelope(&sys.params, sys.y0),
    })
}

pub fn sandwich(seed: u64, samples: usize) -> BatteryReport {
    let name = "bound-sandwich";
    let systems = random_systems(seed, samples);
    let margins: Result<Vec<_>> = systems.par_iter().map(sandwich_margins).collect();
    let margins = match margins {
        Ok(m) => m,
        Err(e) => return failure(name, samples, e),
    };
    let worst = margins.iter().fold((f64::INFINITY, f64::INFINITY, f64::INFINITY), |acc, m| {
        (acc.0.min(m.lower), acc.1.min(m.upper), acc.2.min(m.envelope))
    });
    let passed = worst.0 >= -SANDWICH_ROUNDOFF && worst.1 >= -SANDWICH_ROUNDOFF && worst.2 >= -SANDWICH_ROUNDOFF;
    BatteryReport {
        name,
        passed,
        diagnostic: false,
        checks: samples,
        summary: format!(
            "min margins: lower {:.3e}, upper {:.3e}, envelope {:.3e} (limit {:.0e})",
            worst.0, worst.1, worst.2, -SANDWICH_ROUNDOFF
        ),
    }
}

/// Relative deviations `|phi - z| / P` and `|phi - ode| / P`.
pub fn method_deviations(sys: &System) -> Result<(f64, f64)> {
    let phi = period_phi(&sys.params, sys.y0, &quad())?.period;
    let z = period_z(&sys.params, sys.y0, &quad())?.period;
    let ode = period_ode(&sys.params, sys.y0, &OdeConfig::default())?.period;
    Ok(((phi - z).abs() / phi, (phi - ode).abs() / phi))
}

pub fn method_agreement() -> BatteryReport {
    let name = "method-agreement";
    let grid = standard_grid();
    let devs: Result<Vec<_>> = grid.par_iter().map(method_deviations).collect();
    let devs = match devs {
        Ok(d) => d,
        Err(e) => return failure(name, grid.len(), e),
    };
    let (z, ode) = devs.iter().fold((0.0f64, 0.0f64), |a, d| (a.0.max(d.0), a.1.max(d.1)));
    BatteryReport {
        name,
        passed: z <= PHI_Z_AGREEMENT && ode <= PHI_ODE_AGREEMENT,
        diagnostic: false,
        checks: grid.len(),
        summary: format!(
            "max |phi-z|/P {z:.3e} (limit {PHI_Z_AGREEMENT:.0e}), max |phi-ode|/P {ode:.3e} (limit {PHI_ODE_AGREEMENT:.0e})"
        ),
    }
}

pub fn small_amplitude() -> BatteryReport {
    let name = "small-amplitude-limit";
    let sys = System::reference(1e-4 * 2.0);
    let p_bar = rayleigh_period(&sys.params);
    let closed_form = (p_bar - std::f64::consts::TAU).abs() / std::f64::consts::TAU;
    let run = || -> Result<(f64, f64)> {
        let phi = period_phi(&sys.params, sys.y0, &quad())?.period;
        let z = period_z(&sys.params, sys.y0, &quad())?.period;
        Ok(((phi / p_bar - 1.0).abs(), (z / p_bar - 1.0).abs()))
    };
    match run() {
        Ok((phi, z)) => BatteryReport {
            name,
            passed: phi <= SMALL_AMPLITUDE_TOL && z <= SMALL_AMPLITUDE_TOL && closed_form <= 4.0 * f64::EPSILON,
            diagnostic: false,
            checks: 3,
            summary: format!(
                "|P/p_bar - 1|: phi {phi:.3e}, z {z:.3e} (limit {SMALL_AMPLITUDE_TOL:.0e}); |p_bar - 2pi|/2pi {closed_form:.1e}"
            ),
        },
        Err(e) => failure(name, 3, e),
    }
}

/// Least-squares slope of `ln(1 - P/p_bar)` against `ln y0` on the reference
/// system, plus the worst envelope margin over the same points.
pub fn deficit_slope(points: usize) -> Result<(f64, f64)> {
    let cfg = QuadConfig::with_rel_tol(1e-12);
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    let mut worst = f64::INFINITY;
    for eta in log_space(1e-4, 1e-2, points) {
        let sys = System::reference(eta * 2.0);
        let p = period_phi(&sys.params, sys.y0, &cfg)?.period;
        let r = relative_error(&sys.params, p);
        let env = relative_error_envelope(&sys.params, sys.y0);
        worst = worst.min((r - env).min(-r));
        xs.push(sys.y0.get().ln());
        ys.push((1.0 - p / rayleigh_period(&sys.params)).ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok((sxy / sxx, worst))
}

pub fn quadratic_convergence() -> BatteryReport {
    let name = "quadratic-convergence";
    let points = 25;
    match deficit_slope(points) {
        Ok((slope, worst)) => BatteryReport {
            name,
            passed: (slope - SLOPE_TARGET).abs() <= SLOPE_TOL && worst >= 0.0,
            diagnostic: false,
            checks: points,
            summary: format!(
                "slope {slope:.5} (target {SLOPE_TARGET} ± {SLOPE_TOL}); min envelope margin {worst:.3e}"
            ),
        },
        Err(e) => failure(name, points, e),
    }
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

/// Exact check of the expanded quartic for the f64 inputs of `sys`.
///
/// Returns `(identity residual / max|Q|, max |Q(root)| / max|Q|)` over 100
/// interior sample points, both computed in rational arithmetic.
pub fn quartic_residuals_exact(sys: &System) -> (f64, f64) {
    let z0 = sys.params.half_length(sys.y0.get());
    let (l0, l, z0) = (rational(sys.params.l0), rational(sys.params.l), rational(z0));
    let q = QuarticForm::from_turning_point(l0.clone(), l.clone(), z0.clone());
    let two = rational(2.0);
    let hundred = rational(100.0);
    let substituted = |z: &BigRational| {
        (z0.clone() - z) * (z + z0.clone() - two.clone() * l0.clone()) * (z * z - l.clone() * l.clone())
            / l0.clone()
    };
    let mut max_q = BigRational::zero();
    let mut max_res = BigRational::zero();
    for i in 0..100 {
        let frac = (rational(i as f64) + rational(0.5)) / hundred.clone();
        let z = l.clone() + (z0.clone() - l.clone()) * frac;
        let expected = substituted(&z);
        let res = (q.eval(&z) - expected.clone()).abs();
        if expected.abs() > max_q {
            max_q = expected.abs();
        }
        if res > max_res {
            max_res = res;
        }
    }
    let max_root = q
        .roots
        .iter()
        .map(|r| q.eval(r).abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    let ratio = |x: BigRational| {
        let v = x / max_q.clone();
        num_traits::ToPrimitive::to_f64(&v).unwrap_or(f64::INFINITY)
    };
    (ratio(max_res), ratio(max_root))
}

/// Same check with f64 coefficients. The identity residual is pointwise
/// relative; root residuals are relative to max|Q| on the samples.
pub fn quartic_residuals_f64(sys: &System) -> (f64, f64) {
    let q = build_quartic(&sys.params, sys.y0);
    let (l0, l, z0) = (sys.params.l0, sys.params.l, q.z0);
    let substituted = |z: f64| (z0 - z) * (z + z0 - 2.0 * l0) * (z * z - l * l) / l0;
    let mut max_q = 0.0f64;
    let mut pointwise = 0.0f64;
    for i in 0..100 {
        let z = l + (z0 - l) * (i as f64 + 0.5) / 100.0;
        let expected = substituted(z);
        max_q = max_q.max(expected.abs());
        pointwise = pointwise.max(((q.eval(&z) - expected) / expected).abs());
    }
    let roots = q.roots.iter().map(|r| q.eval(r).abs()).fold(0.0, f64::max) / max_q;
    (pointwise, roots)
}

pub fn quartic_identity() -> BatteryReport {
    let name = "quartic-identity";
    let grid = standard_grid();
    let exact: Vec<(f64, f64)> = grid.par_iter().map(quartic_residuals_exact).collect();
    let (id_exact, root_exact) = exact.iter().fold((0.0f64, 0.0f64), |a, r| (a.0.max(r.0), a.1.max(r.1)));
    let conditioned: Vec<&System> = grid.iter().filter(|s| s.eta() >= F64_QUARTIC_MIN_ETA).collect();
    let float: Vec<(f64, f64)> = conditioned.iter().map(|s| quartic_residuals_f64(s)).collect();
    let (id_f64, root_f64) = float.iter().fold((0.0f64, 0.0f64), |a, r| (a.0.max(r.0), a.1.max(r.1)));
    let passed = id_exact <= QUARTIC_IDENTITY_TOL
        && root_exact <= QUARTIC_ROOT_TOL
        && id_f64 <= QUARTIC_IDENTITY_TOL
        && root_f64 <= QUARTIC_ROOT_TOL;
    BatteryReport {
        name,
        passed,
        diagnostic: false,
        checks: grid.len() + conditioned.len(),
        summary: format!(
            "exact: identity {id_exact:.1e}, roots {root_exact:.1e}; f64 (y0/l >= {F64_QUARTIC_MIN_ETA}, {} systems): identity {id_f64:.3e}, roots {root_f64:.3e} (limits {QUARTIC_IDENTITY_TOL:.0e}, {QUARTIC_ROOT_TOL:.0e})",
            conditioned.len()
        ),
    }
}

/// Relative energy drift over one period computed by the phi route.
pub fn one_period_drift(sys: &System, cfg: &OdeConfig<f64>) -> Result<f64> {
    let period = period_phi(&sys.params, sys.y0, &quad())?.period;
    Ok(integrate(&sys.params, sys.y0, period, cfg)?.max_energy_drift)
}

pub fn energy_conservation() -> BatteryReport {
    let name = "energy-conservation";
    let grid = standard_grid();
    let cfg = OdeConfig::default();
    let drifts: Result<Vec<f64>> = grid.par_iter().map(|s| one_period_drift(s, &cfg)).collect();
    match drifts {
        Ok(d) => {
            let worst = d.iter().copied().fold(0.0, f64::max);
            let limit = DRIFT_FACTOR * cfg.rel_tol;
            BatteryReport {
                name,
                passed: worst <= limit,
                diagnostic: false,
                checks: grid.len(),
                summary: format!("max drift {worst:.3e} (limit {limit:.0e})"),
            }
        }
        Err(e) => failure(name, grid.len(), e),
    }
}

/// The quantities checked for unit covariance, in a fixed order:
/// phi, z, ode, lower bound, harmonic period.
pub fn covariant_quantities(sys: &System) -> Result<[f64; 5]> {
    Ok([
        period_phi(&sys.params, sys.y0, &quad())?.period,
        period_z(&sys.params, sys.y0, &quad())?.period,
        period_ode(&sys.params, sys.y0, &OdeConfig::default())?.period,
        lower_bound(&sys.params, sys.y0),
        rayleigh_period(&sys.params),
    ])
}

/// The three rescalings with the factor each period picks up.
pub fn scalings(sys: &System, k: f64) -> [(&'static str, System, f64); 3] {
    [
        (
            "lengths",
            sys.map(|p, y| (StringParams { l0: k * p.l0, l: k * p.l, ..p }, k * y)),
            k.sqrt(),
        ),
        ("sigma", sys.map(|p, y| (StringParams { sigma: k * p.sigma, ..p }, y)), 1.0 / k.sqrt()),
        ("mass", sys.map(|p, y| (StringParams { mass: k * p.mass, ..p }, y)), k.sqrt()),
    ]
}

pub fn unit_covariance(seed: u64) -> BatteryReport {
    let name = "unit-covariance";
    let mut bases = vec![System::reference(0.5), System::reference(1e-3)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    for _ in 0..8 {
        let l0 = log_uniform(&mut rng, 0.2, 5.0);
        let ratio = log_uniform(&mut rng, 1.01, 10.0);
        let eta = log_uniform(&mut rng, 1e-3, 5.0);
        let sigma = log_uniform(&mut rng, 0.5, 2.0);
        let mass = log_uniform(&mut rng, 0.5, 2.0);
        bases.push(System::new(sigma, mass, l0, l0 * ratio, eta * l0 * ratio).expect("valid"));
    }
    let run = |base: &System| -> Result<f64> {
        let reference = covariant_quantities(base)?;
        let mut worst = 0.0f64;
        for k in [0.25, 4.0] {
            for (_, scaled, factor) in scalings(base, k) {
                let values = covariant_quantities(&scaled)?;
                for (v, r) in values.iter().zip(&reference) {
                    worst = worst.max((v - factor * r).abs() / (factor * r));
                }
            }
        }
        Ok(worst)
    };
    let worst: Result<Vec<f64>> = bases.par_iter().map(run).collect();
    match worst {
        Ok(w) => {
            let worst = w.iter().copied().fold(0.0, f64::max);
            BatteryReport {
                name,
                passed: worst <= SCALING_TOL,
                diagnostic: false,
                checks: bases.len() * 6 * 5,
                summary: format!("max relative deviation {worst:.3e} (limit {SCALING_TOL:.0e})"),
            }
        }
        Err(e) => failure(name, bases.len(), e),
    }
}

/// Worst relative violation of the scaling laws by the printed bound forms,
/// over mass, length and sigma rescalings of `sys` with `k = 4`.
pub fn printed_scaling_violation(sys: &System) -> f64 {
    let quantities = |s: &System| {
        [
            bounds::printed::lower_bound_additive_form(&s.params, s.y0),
            bounds::printed::lower_bound_ratio_form(&s.params, s.y0),
        ]
    };
    let envelope = |s: &System| bounds::printed::relative_error_envelope(&s.params, s.y0);
    let base = quantities(sys);
    let mut worst = 0.0f64;
    for (_, scaled, factor) in scalings(sys, 4.0) {
        for (v, r) in quantities(&scaled).iter().zip(&base) {
            worst = worst.max((v - factor * r).abs() / (factor * r));
        }
        // a relative error is dimensionless and must not change at all
        worst = worst.max(((envelope(&scaled) - envelope(sys)) / envelope(sys)).abs());
    }
    worst
}

/// Counts of sandwich violations by the printed forms on `sys`:
/// `(additive lower bound > P, ratio lower bound > P, printed envelope > R)`.
pub fn printed_sandwich_violations(sys: &System) -> Result<(bool, bool, bool)> {
    let p = period_phi(&sys.params, sys.y0, &quad())?.period;
    let r = relative_error(&sys.params, p);
    let tol = SANDWICH_ROUNDOFF * p;
    Ok((
        bounds::printed::lower_bound_additive_form(&sys.params, sys.y0) > p + tol,
        bounds::printed::lower_bound_ratio_form(&sys.params, sys.y0) > p + tol,
        bounds::printed::relative_error_envelope(&sys.params, sys.y0) > r + SANDWICH_ROUNDOFF,
    ))
}

pub fn printed_bounds(seed: u64, samples: usize) -> BatteryReport {
    let name = "printed-bounds";
    let mut systems = vec![
        System::new(1.0, 7.0, 1.0, 2.0, 0.5).expect("valid"),
        System::new(1.0, 0.05, 1.0, 2.0, 0.5).expect("valid"),
    ];
    systems.extend(random_systems(seed, samples.min(2000)).into_iter().filter(|s| s.params.mass != 1.0));
    let scaling = systems
        .par_iter()
        .map(printed_scaling_violation)
        .filter(|&v| v > SCALING_TOL)
        .count();
    let sandwich: Result<Vec<_>> = systems.par_iter().map(printed_sandwich_violations).collect();
    let sandwich = match sandwich {
        Ok(s) => s,
        Err(e) => return failure(name, systems.len(), e),
    };
    let count = |f: fn(&(bool, bool, bool)) -> bool| sandwich.iter().filter(|v| f(v)).count();
    let (additive, ratio, envelope) = (count(|v| v.0), count(|v| v.1), count(|v| v.2));
    let m7 = printed_scaling_violation(&systems[0]);
    BatteryReport {
        name,
        passed: scaling > 0 || additive + ratio + envelope > 0,
        diagnostic: true,
        checks: systems.len(),
        summary: format!(
            "published forms: scaling law broken on {scaling}/{n} systems (m=7 system: deviation {m7:.3e}); lower bound above P: additive form {additive}, ratio form {ratio}; envelope above R: {envelope}",
            n = systems.len()
        ),
    }
}

pub fn printed_quartic() -> BatteryReport {
    let name = "printed-quartic";
    let sys = System::reference(0.5);
    let q = build_quartic(&sys.params, sys.y0);
    let printed = printed_coefficients(sys.params.l0, sys.params.l, q.z0);
    let eval = |z: f64| printed.iter().fold(0.0, |acc, c| acc * z + c);
    let mut max_q = 0.0f64;
    let mut max_dev = 0.0f64;
    for i in 0..100 {
        let z = q.zl + (q.z0 - q.zl) * (i as f64 + 0.5) / 100.0;
        let exact = q.eval_factored(&z);
        max_q = max_q.max(exact.abs());
        max_dev = max_dev.max((2.0 * eval(z) - exact).abs());
    }
    let at_ends = eval(q.zl).abs().max(eval(q.z0).abs());
    BatteryReport {
        name,
        passed: max_dev / max_q > QUARTIC_IDENTITY_TOL,
        diagnostic: true,
        checks: 100,
        summary: format!(
            "published quartic (x2) deviates from the substituted radicand by {:.3e} x max|Q|; |printed(l)|, |printed(z0)| up to {at_ends:.3e} (should vanish)",
            max_dev / max_q
        ),
    }
}

pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let mut batteries = vec![
        sandwich(opts.seed, opts.samples),
        method_agreement(),
        small_amplitude(),
        quadratic_convergence(),
        quartic_identity(),
        energy_conservation(),
        unit_covariance(opts.seed),
    ];
    if opts.paper_literal {
        batteries.push(printed_bounds(opts.seed, opts.samples));
        batteries.push(printed_quartic());
    }
    VerifyReport { batteries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_have_the_advertised_shape() {
        let grid = standard_grid();
        assert_eq!(grid.len(), 200);
        let etas: Vec<f64> = grid.iter().map(System::eta).collect();
        assert!(etas.iter().all(|&e| (1e-4 * 0.999..=5.0 * 1.001).contains(&e)));
        let ls = log_space(1.0, 100.0, 3);
        assert!((ls[1] - 10.0).abs() < 1e-12 && ls[2] == 100.0);
    }

    #[test]
    fn random_systems_are_reproducible() {
        assert_eq!(random_systems(42, 50), random_systems(42, 50));
        assert_ne!(random_systems(42, 5), random_systems(43, 5));
        for s in random_systems(7, 500) {
            let ratio = s.params.l / s.params.l0;
            assert!((1.001 * 0.999..=100.0 * 1.001).contains(&ratio));
            assert!((1e-5 * 0.999..=10.0 * 1.001).contains(&s.eta()));
        }
    }

    #[test]
    fn report_rendering() {
        let report = VerifyReport {
            batteries: vec![
                BatteryReport {
                    name: "a",
                    passed: true,
                    diagnostic: false,
                    checks: 1,
                    summary: "ok".into(),
                },
                BatteryReport {
                    name: "b",
                    passed: false,
                    diagnostic: true,
                    checks: 1,
                    summary: "info".into(),
                },
            ],
        };
        assert!(report.passed());
        let text = report.render();
        assert!(text.contains("PASS a") && text.contains("INFO b") && text.ends_with("overall PASS\n"));
    }

    #[test]
    fn exact_quartic_has_zero_residual() {
        for eta in [1e-4, 0.3, 5.0] {
            let (id, roots) = quartic_residuals_exact(&System::reference(2.0 * eta));
            assert_eq!(id, 0.0);
            assert_eq!(roots, 0.0);
        }
    }
}
