//! Figure reproduction: one CSV per curve, plus an inset sweep or a growth
//! summary per figure.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use pcmem_core::measures::{
    backflow_accumulate, concurrence_trajectory, eof_trajectory, nd_for_scenario, ne_for_scenario,
    trace_distance_trajectory,
};
use pcmem_core::{ChannelFamily, MemoryResult, Result as CoreResult, Scenario, StatePair, TimeGrid, Trajectory};
use rayon::prelude::*;

use crate::classify::{classify, Shape};
use crate::error::CliResult;
use crate::table::{fmt_num, Cell, Table};

pub const SWEEP_POINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    /// Trace distance of the pair.
    TraceDistance(PairKind),
    /// Concurrence and entanglement of formation from the Bell state.
    Entanglement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    PlusMinus,
    ZeroOne,
}

impl PairKind {
    fn pair(self) -> StatePair {
        match self {
            PairKind::PlusMinus => StatePair::plus_minus(),
            PairKind::ZeroOne => StatePair::zero_one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Dcp,
    Eternal,
    Gad,
    NonunitalEternal,
}

impl FamilyKind {
    pub fn family(self, p: f64) -> ChannelFamily {
        match self {
            FamilyKind::Dcp => ChannelFamily::DepolarizingCpDiv { omega: p },
            FamilyKind::Eternal => ChannelFamily::EternalUnital { nu: p },
            FamilyKind::Gad => ChannelFamily::GadSwitchable { alpha: p },
            FamilyKind::NonunitalEternal => ChannelFamily::NonUnitalEternal { mu: p },
        }
    }

    pub fn param_name(self) -> &'static str {
        match self {
            FamilyKind::Dcp => "omega",
            FamilyKind::Eternal => "nu",
            FamilyKind::Gad => "alpha",
            FamilyKind::NonunitalEternal => "mu",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FigureSpec {
    pub name: &'static str,
    pub family: FamilyKind,
    pub switch: bool,
    pub signal: Signal,
    pub params: [f64; 4],
    /// Inset range: the hull of the figure parameter set.
    pub sweep: Option<(f64, f64)>,
}

impl FigureSpec {
    pub fn scenario(&self, p: f64) -> Scenario {
        let f = self.family.family(p);
        if self.switch {
            Scenario::switch(f)
        } else {
            Scenario::flip(f)
        }
    }

    pub fn curve_file(&self, p: f64) -> String {
        format!("{}_{}={}.csv", self.name, self.family.param_name(), fmt_num(p))
    }
}

impl Figure {
    pub const ALL: [Figure; 8] = [
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
        Figure::Fig9,
        Figure::Fig10,
    ];

    pub fn spec(self) -> FigureSpec {
        use FamilyKind::*;
        let td = Signal::TraceDistance(PairKind::PlusMinus);
        let ent = Signal::Entanglement;
        let (name, family, switch, signal, params, sweep) = match self {
            Figure::Fig3 => ("fig3", Dcp, false, td, [0.5, 1.0, 3.0, 9.0], Some((0.5, 9.0))),
            Figure::Fig4 => ("fig4", Dcp, false, ent, [0.5, 1.0, 3.0, 9.0], Some((0.5, 9.0))),
            Figure::Fig5 => ("fig5", Eternal, false, td, [1.0, 2.0, 4.0, 9.0], Some((1.0, 9.0))),
            Figure::Fig6 => ("fig6", Eternal, false, ent, [1.0, 2.0, 4.0, 9.0], Some((1.0, 9.0))),
            Figure::Fig7 => ("fig7", Gad, true, td, [8.0, 4.0, 2.0, 1.0], None),
            Figure::Fig8 => ("fig8", Gad, true, ent, [8.0, 4.0, 2.0, 1.0], Some((1.0, 8.0))),
            Figure::Fig9 => (
                "fig9",
                NonunitalEternal,
                true,
                Signal::TraceDistance(PairKind::ZeroOne),
                [0.8, 0.6, 0.4, 0.0],
                Some((0.0, 0.8)),
            ),
            Figure::Fig10 => (
                "fig10",
                NonunitalEternal,
                true,
                ent,
                [0.8, 0.6, 0.4, 0.0],
                Some((0.0, 0.8)),
            ),
        };
        FigureSpec {
            name,
            family,
            switch,
            signal,
            params,
            sweep,
        }
    }
}

/// One evaluated curve. For entanglement figures `values` holds the
/// concurrence and `memory` the entanglement-of-formation backflow.
#[derive(Debug, Clone)]
pub struct Curve {
    pub param: f64,
    pub values: Trajectory,
    pub eof: Option<Trajectory>,
    pub memory: MemoryResult,
}

impl Curve {
    pub fn shape(&self) -> Shape {
        classify(&self.memory.signal.values)
    }
}

pub fn compute_curve(spec: &FigureSpec, p: f64, grid: &TimeGrid) -> CoreResult<Curve> {
    let s = spec.scenario(p);
    match spec.signal {
        Signal::TraceDistance(kind) => {
            let d = trace_distance_trajectory(&s, &kind.pair(), grid)?;
            Ok(Curve {
                param: p,
                values: d.clone(),
                eof: None,
                memory: backflow_accumulate(d),
            })
        }
        Signal::Entanglement => {
            let c = concurrence_trajectory(&s, grid)?;
            let e = eof_trajectory(&c)?;
            Ok(Curve {
                param: p,
                values: c,
                eof: Some(e.clone()),
                memory: backflow_accumulate(e),
            })
        }
    }
}

/// `N_D` or `N_E` of the figure's scenario at parameter `p`.
pub fn figure_measure(spec: &FigureSpec, p: f64, grid: &TimeGrid) -> CoreResult<f64> {
    let s = spec.scenario(p);
    Ok(match spec.signal {
        Signal::TraceDistance(kind) => nd_for_scenario(&s, &kind.pair(), grid)?.measure_value,
        Signal::Entanglement => ne_for_scenario(&s, grid)?.measure_value,
    })
}

pub fn sweep_values(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Oscillation period of the switched GAD trace distance: it depends on
/// `λ_*²`, so it is half the period of `sin αt`.
pub fn gad_period(alpha: f64) -> f64 {
    PI / alpha
}

/// Average backflow per oscillation period over the second half of the
/// horizon, where the transient has died out.
pub fn gain_per_period(curve: &Curve, period: f64) -> f64 {
    let grid = curve.memory.signal.grid;
    let half = grid.t_max() / 2.0;
    let v = &curve.memory.signal.values;
    let mut gain = 0.0;
    for k in 0..v.len() - 1 {
        if grid.t(k) >= half {
            gain += (v[k + 1] - v[k]).max(0.0);
        }
    }
    gain / ((grid.t_max() - half) / period)
}

#[derive(Debug, Clone)]
pub struct Written {
    pub path: PathBuf,
    pub note: String,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub grid: TimeGrid,
    pub sweep_points: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            grid: TimeGrid::default(),
            sweep_points: SWEEP_POINTS,
        }
    }
}

pub fn reproduce(fig: Figure, out_dir: &Path, opts: &Options) -> CliResult<Vec<Written>> {
    std::fs::create_dir_all(out_dir)?;
    let spec = fig.spec();
    let grid = opts.grid;
    let curves = spec
        .params
        .par_iter()
        .map(|&p| compute_curve(&spec, p, &grid))
        .collect::<CoreResult<Vec<_>>>()?;

    let mut written = Vec::new();
    let measure_name = match spec.signal {
        Signal::TraceDistance(_) => "n_d",
        Signal::Entanglement => "n_e",
    };
    for c in &curves {
        let path = out_dir.join(spec.curve_file(c.param));
        let probs = c.values.success_probs.as_ref();
        let mut header = vec!["t"];
        match spec.signal {
            Signal::TraceDistance(_) => header.push("trace_distance"),
            Signal::Entanglement => header.extend(["concurrence", "eof"]),
        }
        if probs.is_some() {
            header.push("success_prob");
        }
        let mut table = Table::create(Some(&path), &header)?;
        for (k, t) in grid.points().enumerate() {
            let mut row: Vec<Cell> = vec![t.into(), c.values.values[k].into()];
            if let Some(e) = &c.eof {
                row.push(e.values[k].into());
            }
            if let Some(p) = probs {
                row.push(p[k].into());
            }
            table.row(&row)?;
        }
        table.finish()?;
        written.push(Written {
            path,
            note: format!(
                "{}, {measure_name}={}",
                c.shape().label(),
                fmt_num(c.memory.measure_value)
            ),
        });
    }

    if let Some((lo, hi)) = spec.sweep {
        let params = sweep_values(lo, hi, opts.sweep_points);
        let values = params
            .par_iter()
            .map(|&p| figure_measure(&spec, p, &grid))
            .collect::<CoreResult<Vec<_>>>()?;
        let path = out_dir.join(format!("{}_inset.csv", spec.name));
        let mut table = Table::create(Some(&path), &[spec.family.param_name(), measure_name])?;
        for (p, v) in params.iter().zip(&values) {
            table.row(&[(*p).into(), (*v).into()])?;
        }
        table.finish()?;
        written.push(Written {
            path,
            note: format!(
                "{} parameter values on [{}, {}]",
                params.len(),
                fmt_num(lo),
                fmt_num(hi)
            ),
        });
    } else {
        // The backflow grows without bound, so report it over the horizon
        // together with the asymptotic gain per period.
        let path = out_dir.join(format!("{}_summary.csv", spec.name));
        let header = [spec.family.param_name(), "t_max", "n_d", "period", "gain_per_period"];
        let mut table = Table::create(Some(&path), &header)?;
        for c in &curves {
            let period = gad_period(c.param);
            table.row(&[
                c.param.into(),
                grid.t_max().into(),
                c.memory.measure_value.into(),
                period.into(),
                gain_per_period(c, period).into(),
            ])?;
        }
        table.finish()?;
        written.push(Written {
            path,
            note: "N_D over the horizon and gain per period".into(),
        });
    }
    Ok(written)
}
