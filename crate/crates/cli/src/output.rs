//! Output records and their CSV/JSON rendering.
//!
//! Floats are written in the shortest decimal form that parses back to the
//! same value, identically in CSV and JSON.

use std::fmt::Write;

use serde::Serialize;
use stretched_string::verify::{self, BatteryReport, System, VerifyReport};
use stretched_string::{
    lower_bound, rayleigh_period, relative_error, relative_error_envelope, running_energy_drift,
    Amplitude, Error, Method, PeriodBounds, PeriodResult, StringParams, Trajectory,
};

#[derive(Serialize)]
pub struct Params {
    sigma: f64,
    mass: f64,
    l0: f64,
    l: f64,
}

impl From<&StringParams<f64>> for Params {
    fn from(p: &StringParams<f64>) -> Self {
        Self {
            sigma: p.sigma,
            mass: p.mass,
            l0: p.l0,
            l: p.l,
        }
    }
}

#[derive(Serialize)]
pub struct MethodResult {
    method: &'static str,
    period: f64,
    error_estimate: f64,
    evaluations: usize,
}

#[derive(Serialize)]
pub struct Bounds {
    lower: f64,
    upper: f64,
    envelope_low: f64,
}

#[derive(Serialize)]
pub struct PeriodReport {
    params: Params,
    y0: f64,
    results: Vec<MethodResult>,
    bounds: Bounds,
    #[serde(skip)]
    rel_err: Vec<f64>,
}

impl PeriodReport {
    pub fn new(
        params: &StringParams<f64>,
        y0: Amplitude<f64>,
        results: &[PeriodResult<f64>],
        bounds: &PeriodBounds<f64>,
    ) -> Self {
        Self {
            params: params.into(),
            y0: y0.get(),
            results: results
                .iter()
                .map(|r| MethodResult {
                    method: r.method.name(),
                    period: r.period,
                    error_estimate: r.error_estimate,
                    evaluations: r.evaluations,
                })
                .collect(),
            bounds: Bounds {
                lower: bounds.lower,
                upper: bounds.upper,
                envelope_low: bounds.envelope_low,
            },
            rel_err: results.iter().map(|r| relative_error(params, r.period)).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("method,period,error_estimate,evaluations,p_bar,lower_bound,envelope,rel_err\n");
        for (r, rel) in self.results.iter().zip(&self.rel_err) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.method,
                num(r.period),
                num(r.error_estimate),
                r.evaluations,
                num(self.bounds.upper),
                num(self.bounds.lower),
                num(self.bounds.envelope_low),
                num(*rel)
            );
        }
        out
    }
}

#[derive(Serialize)]
pub struct SweepRow {
    pub y0: f64,
    pub period_phi: Option<f64>,
    pub period_z: Option<f64>,
    pub period_ode: Option<f64>,
    pub p_bar: f64,
    pub lower_bound: f64,
    pub rel_err: Option<f64>,
    pub envelope: f64,
}

impl SweepRow {
    pub fn new(params: &StringParams<f64>, y0: Amplitude<f64>) -> Self {
        Self {
            y0: y0.get(),
            period_phi: None,
            period_z: None,
            period_ode: None,
            p_bar: rayleigh_period(params),
            lower_bound: lower_bound(params, y0),
            rel_err: None,
            envelope: relative_error_envelope(params, y0),
        }
    }

    pub fn set(&mut self, method: Method, period: f64) {
        let slot = match method {
            Method::PhiQuadrature => &mut self.period_phi,
            Method::ZQuadrature => &mut self.period_z,
            Method::OdeSimulation => &mut self.period_ode,
        };
        *slot = Some(period);
    }
}

/// Shortest round-trip decimal, as serde_json writes it.
pub fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("y0,period_phi,period_z,period_ode,p_bar,lower_bound,rel_err,envelope\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(r.y0),
            opt(r.period_phi),
            opt(r.period_z),
            opt(r.period_ode),
            num(r.p_bar),
            num(r.lower_bound),
            opt(r.rel_err),
            num(r.envelope)
        );
    }
    out
}

#[derive(Serialize)]
pub struct SweepReport {
    params: Params,
    rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn new(params: &StringParams<f64>, rows: Vec<SweepRow>) -> Self {
        Self {
            params: params.into(),
            rows,
        }
    }
}

#[derive(Serialize)]
pub struct Sample {
    t: f64,
    y: f64,
    v: f64,
    energy: f64,
    energy_drift: f64,
}

#[derive(Serialize)]
pub struct TrajectoryReport {
    params: Params,
    y0: f64,
    t_end: f64,
    accepted_steps: usize,
    rejected_steps: usize,
    pub max_energy_drift: f64,
    samples: Vec<Sample>,
}

impl TrajectoryReport {
    pub fn new(params: &StringParams<f64>, y0: Amplitude<f64>, t_end: f64, traj: &Trajectory<f64>) -> Self {
        let drift = running_energy_drift(params, &traj.samples);
        Self {
            params: params.into(),
            y0: y0.get(),
            t_end,
            accepted_steps: traj.accepted_steps,
            rejected_steps: traj.rejected_steps,
            max_energy_drift: traj.max_energy_drift,
            samples: traj
                .samples
                .iter()
                .zip(drift)
                .map(|(s, d)| Sample {
                    t: s.t,
                    y: s.y,
                    v: s.v,
                    energy: params.energy(s),
                    energy_drift: d,
                })
                .collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,y,v,energy,energy_drift\n");
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                num(s.t),
                num(s.y),
                num(s.v),
                num(s.energy),
                num(s.energy_drift)
            );
        }
        out
    }
}

#[derive(Serialize)]
struct BatteryJson {
    name: &'static str,
    status: &'static str,
    checks: usize,
    summary: String,
}

#[derive(Serialize)]
pub struct VerifyJson {
    passed: bool,
    batteries: Vec<BatteryJson>,
}

impl VerifyJson {
    pub fn new(report: &VerifyReport) -> Self {
        Self {
            passed: report.passed(),
            batteries: report
                .batteries
                .iter()
                .map(|b| BatteryJson {
                    name: b.name,
                    status: match (b.diagnostic, b.passed) {
                        (true, _) => "info",
                        (false, true) => "pass",
                        (false, false) => "fail",
                    },
                    checks: b.checks,
                    summary: b.summary.clone(),
                })
                .collect(),
        }
    }
}

/// Published bound forms evaluated on the system given on the command line.
pub fn printed_system_battery(sys: &System) -> Result<BatteryReport, Error> {
    let violation = verify::printed_scaling_violation(sys);
    let (additive, ratio, envelope) = verify::printed_sandwich_violations(sys)?;
    let broken = violation > verify::SCALING_TOL;
    let p = &sys.params;
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    Ok(BatteryReport {
        name: "printed-system",
        passed: broken || additive || ratio || envelope,
        diagnostic: true,
        checks: 1,
        summary: format!(
            "published forms at sigma={} mass={} l0={} l={} y0={}: scaling law {} (deviation {violation:.3e}, limit {:.0e}); lower bound above P: additive {}, ratio {}; envelope above R: {}",
            p.sigma,
            p.mass,
            p.l0,
            p.l,
            sys.y0.get(),
            if broken { "broken" } else { "holds" },
            verify::SCALING_TOL,
            yes_no(additive),
            yes_no(ratio),
            yes_no(envelope),
        ),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report serializes");
    s.push('\n');
    s
}
