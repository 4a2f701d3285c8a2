use std::io::Write;

use pcmem_core::channels::{cptp_check, lindblad_rates};
use pcmem_core::measures::{
    backflow_accumulate, concurrence_trajectory, eof_trajectory, pair_search, td_witness, trace_distance,
    trace_distance_trajectory,
};
use pcmem_core::{Result as CoreResult, Scenario, StatePair, Trajectory};
use serde::Serialize;

use crate::config::{MeasureId, PairChoice, RunConfig};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Table};

/// Per-point CPTP validity, rates and witness. Fails with exit code 3 once
/// the whole grid is written if any point is invalid.
pub fn run_check(cfg: &RunConfig) -> CliResult<()> {
    let header = [
        "t",
        "lambda",
        "lambda_z",
        "lambda_star",
        "cptp_valid",
        "gamma_plus",
        "gamma_minus",
        "gamma_z",
        "td_witness",
    ];
    let mut table = Table::create(cfg.output.as_deref(), &header)?;
    let mut invalid = 0usize;
    let mut first_t = f64::NAN;
    for t in cfg.grid.points() {
        let p = cfg.family.raw_params_at(t)?;
        let valid = cptp_check(&p).is_valid();
        if !valid {
            if invalid == 0 {
                first_t = t;
            }
            invalid += 1;
        }
        // Rates are undefined where λ or λ_z vanish; those cells stay empty.
        let rates = lindblad_rates(&cfg.family, t).ok();
        table.row(&[
            t.into(),
            p.lambda.into(),
            p.lambda_z.into(),
            p.lambda_star.into(),
            Cell::Bool(valid),
            rates.map(|r| r.gamma_plus).into(),
            rates.map(|r| r.gamma_minus).into(),
            rates.map(|r| r.gamma_z).into(),
            rates.map_or(Cell::Empty, |r| Cell::Bool(td_witness(&r))),
        ])?;
    }
    table.finish()?;
    if invalid > 0 {
        return Err(CliError::CptpGrid {
            count: invalid,
            first_t,
        });
    }
    Ok(())
}

/// CPTP on every grid point, then the family range and supermap
/// compatibility.
pub fn prepare(cfg: &RunConfig) -> CliResult<Scenario> {
    let mut invalid = 0usize;
    let mut first_t = f64::NAN;
    for t in cfg.grid.points() {
        if !cptp_check(&cfg.family.raw_params_at(t)?).is_valid() {
            if invalid == 0 {
                first_t = t;
            }
            invalid += 1;
        }
    }
    if invalid > 0 {
        return Err(CliError::CptpGrid {
            count: invalid,
            first_t,
        });
    }
    let s = cfg.scenario();
    s.validate()?;
    Ok(s)
}

/// The pair to evolve and, for searches, the `N_D` that selected it.
fn resolve_pair(s: &Scenario, cfg: &RunConfig) -> CliResult<StatePair> {
    match &cfg.pair {
        PairChoice::Fixed(p) => Ok(p.clone()),
        PairChoice::Search { samples, seed } => Ok(pair_search(s, &cfg.grid, *samples, *seed)?.0),
    }
}

/// Trace distance of the evolved pair at a single time.
pub fn trace_distance_at(s: &Scenario, pair: &StatePair, t: f64) -> CoreResult<f64> {
    let map = s.step_map(t, false)?;
    trace_distance(&map.apply(&pair.rho1)?.state, &map.apply(&pair.rho2)?.state)
}

pub fn run_evolve(cfg: &RunConfig) -> CliResult<()> {
    let s = prepare(cfg)?;
    match cfg.measure {
        MeasureId::Ne => {
            let c = concurrence_trajectory(&s, &cfg.grid)?;
            let e = eof_trajectory(&c)?;
            write_signal(cfg, &["concurrence", "eof"], &[&c, &e])
        }
        MeasureId::Nd | MeasureId::None => {
            let pair = resolve_pair(&s, cfg)?;
            let d = trace_distance_trajectory(&s, &pair, &cfg.grid)?;
            write_signal(cfg, &["trace_distance"], &[&d])
        }
    }
}

/// `t`, one column per trajectory and `success_prob` when post-selected.
pub fn write_signal(cfg: &RunConfig, names: &[&str], trajs: &[&Trajectory]) -> CliResult<()> {
    let probs = trajs[0].success_probs.as_ref();
    let mut header = vec!["t"];
    header.extend_from_slice(names);
    if probs.is_some() {
        header.push("success_prob");
    }
    let mut table = Table::create(cfg.output.as_deref(), &header)?;
    for (k, t) in cfg.grid.points().enumerate() {
        let mut row: Vec<Cell> = vec![t.into()];
        row.extend(trajs.iter().map(|tr| Cell::Num(tr.values[k])));
        if let Some(p) = probs {
            row.push(p[k].into());
        }
        table.row(&row)?;
    }
    table.finish()
}

#[derive(Debug, Serialize)]
pub struct PairSummary {
    pub kind: &'static str,
    pub bloch: [[f64; 3]; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Search results only bound the maximum over pairs from below.
    pub empirical_lower_bound: bool,
}

#[derive(Debug, Serialize)]
pub struct MeasureSummary {
    pub family: &'static str,
    pub param: Option<f64>,
    pub supermap: &'static str,
    pub measure: &'static str,
    pub value: f64,
    pub revival_intervals: Vec<[f64; 2]>,
    pub t_max: f64,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_success_prob: Option<f64>,
}

pub fn measure_summary(cfg: &RunConfig) -> CliResult<MeasureSummary> {
    let s = prepare(cfg)?;
    let (measure, result, pair) = match cfg.measure {
        MeasureId::None => {
            return Err(CliError::Config("the measure command needs --measure nd or ne".into()));
        }
        MeasureId::Ne => {
            let c = concurrence_trajectory(&s, &cfg.grid)?;
            ("ne", backflow_accumulate(eof_trajectory(&c)?), None)
        }
        MeasureId::Nd => {
            let (pair, result, kind, samples, seed) = match &cfg.pair {
                PairChoice::Fixed(p) => {
                    let r = backflow_accumulate(trace_distance_trajectory(&s, p, &cfg.grid)?);
                    let kind = if *p == StatePair::plus_minus() {
                        "plus-minus"
                    } else if *p == StatePair::zero_one() {
                        "zero-one"
                    } else {
                        "states"
                    };
                    (p.clone(), r, kind, None, None)
                }
                PairChoice::Search { samples, seed } => {
                    let (p, r) = pair_search(&s, &cfg.grid, *samples, *seed)?;
                    (p, r, "search", Some(*samples), Some(*seed))
                }
            };
            let summary = PairSummary {
                kind,
                bloch: [pair.rho1.bloch()?, pair.rho2.bloch()?].map(|v| v.map(|x| x + 0.0)),
                samples,
                seed,
                empirical_lower_bound: samples.is_some(),
            };
            ("nd", result, Some(summary))
        }
    };
    let min_success_prob = result
        .signal
        .success_probs
        .as_ref()
        .map(|p| p.iter().copied().fold(f64::INFINITY, f64::min));
    Ok(MeasureSummary {
        family: cfg.family.id(),
        param: cfg.family.parameter(),
        supermap: cfg.mode.id(),
        measure,
        value: result.measure_value,
        revival_intervals: result.revival_intervals.iter().map(|&(a, b)| [a, b]).collect(),
        t_max: cfg.grid.t_max(),
        steps: cfg.grid.steps(),
        pair,
        min_success_prob,
    })
}

pub fn run_measure(cfg: &RunConfig) -> CliResult<()> {
    let summary = measure_summary(cfg)?;
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    match &cfg.output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
