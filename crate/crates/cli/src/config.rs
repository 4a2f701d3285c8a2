//! Scenario configuration: a JSON document, optionally overridden by flags.
//!
//! ```json
//! {
//!   "family": "gad", "param": 1.0,
//!   "supermap": "switch",
//!   "control": {"initial": "plus", "outcome": "plus"},
//!   "grid": {"t_max": 20.0, "steps": 4000},
//!   "measure": "nd",
//!   "pair": {"search": {"samples": 200, "seed": 7}},
//!   "output": "out.csv"
//! }
//! ```
//!
//! A `custom` family takes `"custom": {"lambda": [..], "lambda_z": [..],
//! "lambda_star": [..]}` where each list holds terms
//! `{"coef": c, "decay": r, "freq": w, "phase": p}` summed as
//! `c·e^{−rt}·cos(wt + p)`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::ValueEnum;
use pcmem_core::channels::TimeFn;
use pcmem_core::{
    ChannelFamily, ControlSpec, CustomFamily, Outcome, PureState, Scenario, StatePair, SupermapMode, TimeGrid,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    Dcp,
    Eternal,
    Gad,
    NonunitalEternal,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SupermapId {
    #[default]
    None,
    Flip,
    Switch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureId {
    #[default]
    Nd,
    Ne,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PairName {
    PlusMinus,
    ZeroOne,
    /// Seeded random search; only meaningful as a flag.
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BasisState {
    Plus,
    Minus,
    Zero,
    One,
}

impl BasisState {
    fn outcome(self) -> Outcome {
        match self {
            BasisState::Plus => Outcome::Plus,
            BasisState::Minus => Outcome::Minus,
            BasisState::Zero => Outcome::Zero,
            BasisState::One => Outcome::One,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ControlInitial {
    Named(BasisState),
    /// `cos θ|0⟩ + e^{iφ} sin θ|1⟩`.
    Angles {
        theta: f64,
        phi: f64,
    },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    pub initial: Option<ControlInitial>,
    pub outcome: Option<BasisState>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PairConfig {
    Named(PairName),
    Search {
        search: SearchConfig,
    },
    /// Two Bloch vectors.
    States {
        states: [[f64; 3]; 2],
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coef: f64,
    #[serde(default)]
    pub decay: f64,
    #[serde(default)]
    pub freq: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomConfig {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub lambda: Vec<Term>,
    #[serde(default)]
    pub lambda_z: Vec<Term>,
    #[serde(default)]
    pub lambda_star: Vec<Term>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub family: Option<FamilyId>,
    pub param: Option<f64>,
    pub custom: Option<CustomConfig>,
    pub supermap: Option<SupermapId>,
    pub control: Option<ControlConfig>,
    pub grid: Option<GridConfig>,
    pub measure: Option<MeasureId>,
    pub pair: Option<PairConfig>,
    pub output: Option<PathBuf>,
}

/// Flag values; every `Some` replaces the matching config key.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// JSON scenario config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyId>,
    /// Family parameter (ω, ν, α or μ).
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
    #[arg(long, value_enum)]
    pub supermap: Option<SupermapId>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub measure: Option<MeasureId>,
    #[arg(long, value_enum)]
    pub pair: Option<PairName>,
    /// Seed for `--pair search`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random pairs for `--pair search`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Initial control state.
    #[arg(long, value_enum)]
    pub control: Option<BasisState>,
    /// Control outcome kept by post-selection.
    #[arg(long, value_enum)]
    pub outcome: Option<BasisState>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairChoice {
    Fixed(StatePair),
    Search { samples: usize, seed: u64 },
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: ChannelFamily,
    pub mode: SupermapMode,
    pub control: ControlSpec,
    pub grid: TimeGrid,
    pub measure: MeasureId,
    pub pair: PairChoice,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// The scenario without range validation; callers decide when to
    /// validate.
    pub fn scenario(&self) -> Scenario {
        Scenario {
            family: self.family.clone(),
            mode: self.mode,
            control: self.control.clone(),
        }
    }
}

pub fn load(path: &Path) -> CliResult<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn resolve(ov: &Overrides) -> CliResult<RunConfig> {
    let cfg = match &ov.config {
        Some(p) => load(p)?,
        None => ScenarioConfig::default(),
    };
    merge(cfg, ov)
}

pub fn merge(cfg: ScenarioConfig, ov: &Overrides) -> CliResult<RunConfig> {
    let family_id = ov
        .family
        .or(cfg.family)
        .ok_or_else(|| CliError::Config("no family given (use --family or \"family\")".into()))?;
    let param = ov.param.or(cfg.param);
    let family = build_family(family_id, param, cfg.custom.as_ref())?;

    let mode = match ov.supermap.or(cfg.supermap).unwrap_or_default() {
        SupermapId::None => SupermapMode::None,
        SupermapId::Flip => SupermapMode::Flip,
        SupermapId::Switch => SupermapMode::Switch,
    };

    let ctrl_cfg = cfg.control.unwrap_or_default();
    let initial = match ov.control.map(ControlInitial::Named).or(ctrl_cfg.initial) {
        None => PureState::plus(),
        Some(ControlInitial::Named(b)) => b.outcome().state(),
        Some(ControlInitial::Angles { theta, phi }) => PureState::qubit(theta, phi),
    };
    let outcome = ov
        .outcome
        .or(ctrl_cfg.outcome)
        .map_or(Outcome::Plus, BasisState::outcome);
    let control = ControlSpec::new(initial, outcome)?;

    let grid_cfg = cfg.grid.unwrap_or_default();
    let grid = TimeGrid::new(
        ov.tmax.or(grid_cfg.t_max).unwrap_or(TimeGrid::DEFAULT_T_MAX),
        ov.steps.or(grid_cfg.steps).unwrap_or(TimeGrid::DEFAULT_STEPS),
    )?;

    let measure = ov.measure.or(cfg.measure).unwrap_or_default();

    let pair_cfg = match ov.pair {
        Some(PairName::Search) => Some(PairConfig::Search {
            search: SearchConfig {
                samples: None,
                seed: None,
            },
        }),
        Some(name) => Some(PairConfig::Named(name)),
        None => cfg.pair,
    };
    let pair = match pair_cfg {
        None | Some(PairConfig::Named(PairName::PlusMinus)) => PairChoice::Fixed(StatePair::plus_minus()),
        Some(PairConfig::Named(PairName::ZeroOne)) => PairChoice::Fixed(StatePair::zero_one()),
        Some(PairConfig::Named(PairName::Search)) => PairChoice::Search {
            samples: ov.samples.unwrap_or(DEFAULT_SAMPLES),
            seed: ov.seed.unwrap_or(DEFAULT_SEED),
        },
        Some(PairConfig::Search { search }) => PairChoice::Search {
            samples: ov.samples.or(search.samples).unwrap_or(DEFAULT_SAMPLES),
            seed: ov.seed.or(search.seed).unwrap_or(DEFAULT_SEED),
        },
        Some(PairConfig::States { states }) => PairChoice::Fixed(StatePair {
            rho1: pcmem_core::DensityMatrix::from_bloch(states[0])?,
            rho2: pcmem_core::DensityMatrix::from_bloch(states[1])?,
        }),
    };
    if let PairChoice::Search { samples: 0, .. } = pair {
        return Err(CliError::Config("pair search needs at least one sample".into()));
    }

    Ok(RunConfig {
        family,
        mode,
        control,
        grid,
        measure,
        pair,
        output: ov.out.clone().or(cfg.output),
    })
}

fn build_family(id: FamilyId, param: Option<f64>, custom: Option<&CustomConfig>) -> CliResult<ChannelFamily> {
    let need = |name: &str| {
        param
            .filter(|p| p.is_finite())
            .ok_or_else(|| CliError::Config(format!("family needs a finite parameter {name} (--param)")))
    };
    Ok(match id {
        FamilyId::Dcp => ChannelFamily::DepolarizingCpDiv { omega: need("ω")? },
        FamilyId::Eternal => ChannelFamily::EternalUnital { nu: need("ν")? },
        FamilyId::Gad => ChannelFamily::GadSwitchable { alpha: need("α")? },
        FamilyId::NonunitalEternal => ChannelFamily::NonUnitalEternal { mu: need("μ")? },
        FamilyId::Custom => {
            let c = custom.ok_or_else(|| CliError::Config("family \"custom\" needs a \"custom\" block".into()))?;
            ChannelFamily::Custom(CustomFamily {
                label: c.label.clone().unwrap_or_else(|| "custom".into()),
                lambda: series(&c.lambda),
                lambda_z: series(&c.lambda_z),
                lambda_star: series(&c.lambda_star),
            })
        }
    })
}

fn series(terms: &[Term]) -> TimeFn {
    let terms = terms.to_vec();
    Arc::new(move |t| {
        terms
            .iter()
            .map(|k| k.coef * (-k.decay * t).exp() * (k.freq * t + k.phase).cos())
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> ScenarioConfig {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn flags_override_config() {
        let cfg = parse(r#"{"family": "dcp", "param": 3.0, "supermap": "flip", "grid": {"t_max": 5, "steps": 10}}"#);
        let ov = Overrides {
            param: Some(9.0),
            steps: Some(20),
            ..Default::default()
        };
        let run = merge(cfg, &ov).unwrap();
        assert_eq!(run.family.parameter(), Some(9.0));
        assert_eq!(run.mode, SupermapMode::Flip);
        assert_eq!(run.grid.steps(), 20);
        assert_eq!(run.grid.t_max(), 5.0);
    }

    #[test]
    fn pair_forms() {
        let run = merge(
            parse(r#"{"family": "gad", "param": 1, "pair": "zero-one"}"#),
            &Overrides::default(),
        )
        .unwrap();
        assert_eq!(run.pair, PairChoice::Fixed(StatePair::zero_one()));
        let run = merge(
            parse(r#"{"family": "gad", "param": 1, "pair": {"search": {"samples": 5, "seed": 3}}}"#),
            &Overrides {
                seed: Some(4),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(run.pair, PairChoice::Search { samples: 5, seed: 4 });
        let run = merge(
            parse(r#"{"family": "gad", "param": 1, "pair": {"states": [[0,0,1],[0,0,1]]}}"#),
            &Overrides::default(),
        )
        .unwrap();
        let PairChoice::Fixed(p) = run.pair else { panic!() };
        assert_eq!(p.rho1, p.rho2);
    }

    #[test]
    fn custom_family_series() {
        let cfg = parse(
            r#"{"family": "custom", "custom": {"lambda": [{"coef": 1, "decay": 2}], "lambda_z": [{"coef": 1, "decay": 1}]}}"#,
        );
        let run = merge(cfg, &Overrides::default()).unwrap();
        let p = run.family.params_at(1.0).unwrap();
        assert!((p.lambda - (-2.0f64).exp()).abs() < 1e-15);
        assert!((p.lambda_z - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(p.lambda_star, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(serde_json::from_str::<ScenarioConfig>(r#"{"family": "nope"}"#).is_err());
        assert!(serde_json::from_str::<ScenarioConfig>(r#"{"familly": "dcp"}"#).is_err());
        assert!(merge(parse(r#"{"family": "dcp"}"#), &Overrides::default()).is_err());
        assert!(merge(parse(r#"{"param": 1}"#), &Overrides::default()).is_err());
        let zero_steps = parse(r#"{"family": "dcp", "param": 1, "grid": {"steps": 0}}"#);
        assert!(merge(zero_steps, &Overrides::default()).is_err());
    }
}
