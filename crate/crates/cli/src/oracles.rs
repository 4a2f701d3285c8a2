//! Closed-form trajectories used as regression oracles.

use pcmem_core::measures::{concurrence_trajectory, trace_distance_trajectory};
use pcmem_core::{ChannelFamily, Result, Scenario, StatePair, TimeGrid, Trajectory};
use rayon::prelude::*;

pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// Flipped dcp, `|±⟩` pair: `D = (4e^{t(1−ω)} + e^t − 1)/(3e^t + 1)`.
    FlipDcpTrace,
    /// Flipped dcp, Bell input: `C = max{0, (4e^{t(1−ω)} − e^t + 1)/(3e^t + 1)}`.
    FlipDcpConcurrence,
    /// Flipped eternal, `|±⟩` pair: `D = (2e^{t(1−ν)} + 3e^t − 1)/(3e^t + 1)`.
    FlipEternalTrace,
    /// Flipped eternal, Bell input: `C = (2e^{t(1−ν)} + e^t + 1)/(3e^t + 1)`.
    FlipEternalConcurrence,
    /// Bare eternal, Bell input: `C = (e^{−t} + e^{−νt})/2`.
    RawEternalConcurrence,
    /// Bare non-unital eternal, Bell input:
    /// `C = ½[√((1+e^{−2t})(1−μ²) + 2e^{−t}(1+μ²)) − √((1−e^{−t})²(1−μ²))]`.
    RawNonunitalConcurrence,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 6] = [
        ClosedForm::FlipDcpTrace,
        ClosedForm::FlipDcpConcurrence,
        ClosedForm::FlipEternalTrace,
        ClosedForm::FlipEternalConcurrence,
        ClosedForm::RawEternalConcurrence,
        ClosedForm::RawNonunitalConcurrence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::FlipDcpTrace => "flip-dcp-trace-distance",
            ClosedForm::FlipDcpConcurrence => "flip-dcp-concurrence",
            ClosedForm::FlipEternalTrace => "flip-eternal-trace-distance",
            ClosedForm::FlipEternalConcurrence => "flip-eternal-concurrence",
            ClosedForm::RawEternalConcurrence => "raw-eternal-concurrence",
            ClosedForm::RawNonunitalConcurrence => "raw-nonunital-eternal-concurrence",
        }
    }

    pub fn param_name(self) -> &'static str {
        match self {
            ClosedForm::FlipDcpTrace | ClosedForm::FlipDcpConcurrence => "omega",
            ClosedForm::RawNonunitalConcurrence => "mu",
            _ => "nu",
        }
    }

    pub fn params(self) -> &'static [f64] {
        match self {
            ClosedForm::FlipDcpTrace | ClosedForm::FlipDcpConcurrence => &[0.5, 1.0, 3.0, 9.0],
            ClosedForm::RawNonunitalConcurrence => &[0.0, 0.4, 0.6, 0.8],
            _ => &[1.0, 2.0, 4.0, 9.0],
        }
    }

    pub fn eval(self, p: f64, t: f64) -> f64 {
        let et = t.exp();
        let den = 3.0 * et + 1.0;
        match self {
            ClosedForm::FlipDcpTrace => (4.0 * (t * (1.0 - p)).exp() + et - 1.0) / den,
            ClosedForm::FlipDcpConcurrence => ((4.0 * (t * (1.0 - p)).exp() - et + 1.0) / den).max(0.0),
            ClosedForm::FlipEternalTrace => (2.0 * (t * (1.0 - p)).exp() + 3.0 * et - 1.0) / den,
            ClosedForm::FlipEternalConcurrence => (2.0 * (t * (1.0 - p)).exp() + et + 1.0) / den,
            ClosedForm::RawEternalConcurrence => 0.5 * ((-t).exp() + (-p * t).exp()),
            ClosedForm::RawNonunitalConcurrence => {
                let e = (-t).exp();
                let m2 = p * p;
                let a = ((1.0 + e * e) * (1.0 - m2) + 2.0 * e * (1.0 + m2)).sqrt();
                let b = ((1.0 - e) * (1.0 - e) * (1.0 - m2)).sqrt();
                0.5 * (a - b)
            }
        }
    }

    pub fn scenario(self, p: f64) -> Scenario {
        match self {
            ClosedForm::FlipDcpTrace | ClosedForm::FlipDcpConcurrence => {
                Scenario::flip(ChannelFamily::DepolarizingCpDiv { omega: p })
            }
            ClosedForm::FlipEternalTrace | ClosedForm::FlipEternalConcurrence => {
                Scenario::flip(ChannelFamily::EternalUnital { nu: p })
            }
            ClosedForm::RawEternalConcurrence => Scenario::raw(ChannelFamily::EternalUnital { nu: p }),
            ClosedForm::RawNonunitalConcurrence => Scenario::raw(ChannelFamily::NonUnitalEternal { mu: p }),
        }
    }

    pub fn simulate(self, p: f64, grid: &TimeGrid) -> Result<Trajectory> {
        let s = self.scenario(p);
        match self {
            ClosedForm::FlipDcpTrace | ClosedForm::FlipEternalTrace => {
                trace_distance_trajectory(&s, &StatePair::plus_minus(), grid)
            }
            _ => concurrence_trajectory(&s, grid),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleReport {
    pub form: ClosedForm,
    pub param: f64,
    pub max_error: f64,
    pub worst_t: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_error < ORACLE_TOL
    }
}

/// `t ∈ [0, 10]`, 2001 points.
pub fn oracle_grid() -> TimeGrid {
    TimeGrid::new(10.0, 2000).expect("valid grid")
}

pub fn run_case(form: ClosedForm, param: f64, grid: &TimeGrid) -> Result<OracleReport> {
    let traj = form.simulate(param, grid)?;
    let (mut max_error, mut worst_t) = (0.0f64, 0.0);
    for (k, v) in traj.values.iter().enumerate() {
        let t = grid.t(k);
        let err = (v - form.eval(param, t)).abs();
        if err > max_error {
            max_error = err;
            worst_t = t;
        }
    }
    Ok(OracleReport {
        form,
        param,
        max_error,
        worst_t,
    })
}

/// Every closed form at every parameter, in a fixed order.
pub fn run_all(grid: &TimeGrid) -> Result<Vec<OracleReport>> {
    let cases: Vec<(ClosedForm, f64)> = ClosedForm::ALL
        .iter()
        .flat_map(|&f| f.params().iter().map(move |&p| (f, p)))
        .collect();
    cases.par_iter().map(|&(f, p)| run_case(f, p, grid)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert!((ClosedForm::FlipDcpTrace.eval(9.0, 0.0) - 1.0).abs() < 1e-15);
        assert!((ClosedForm::FlipDcpTrace.eval(3.0, 1.0) - 0.246822621421055).abs() < 1e-15);
        assert!((ClosedForm::FlipDcpConcurrence.eval(3.0, 0.5) - 0.1383743401605012).abs() < 1e-15);
        assert!((ClosedForm::RawEternalConcurrence.eval(2.0, 1.0) - 0.2516073622040275).abs() < 1e-15);
        for t in [0.0, 0.3, 2.0, 7.0] {
            let a = ClosedForm::RawNonunitalConcurrence.eval(0.0, t);
            let b = ClosedForm::RawEternalConcurrence.eval(1.0, t);
            assert!((a - b).abs() < 1e-15);
        }
    }
}
