//! A channel family placed (or not) inside a supermap, evaluated at a time.

use alloc::vec::Vec;

use crate::channels::{family_kraus, ChannelFamily};
use crate::error::{Error, Result};
use crate::matcore::{CMatrix, DensityMatrix};
use crate::supermaps::{
    apply_and_normalize, conditional_operators, extend_with_ancilla, switch_kraus, time_flip_kraus, ControlSpec,
    PostSelectedStep,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupermapMode {
    /// The bare channel.
    #[default]
    None,
    /// Quantum time flip of the channel.
    Flip,
    /// Quantum switch with the same channel in both slots.
    Switch,
}

impl SupermapMode {
    pub fn id(self) -> &'static str {
        match self {
            SupermapMode::None => "none",
            SupermapMode::Flip => "flip",
            SupermapMode::Switch => "switch",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub family: ChannelFamily,
    pub mode: SupermapMode,
    pub control: ControlSpec,
}

/// Operators that take an input state to the (unnormalized) output at one
/// grid time.
#[derive(Debug, Clone)]
pub struct StepMap {
    ops: Vec<CMatrix>,
    postselected: bool,
    t: f64,
}

impl StepMap {
    pub fn operators(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn is_postselected(&self) -> bool {
        self.postselected
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<PostSelectedStep> {
        if let Some(op) = self.ops.first() {
            if op.dim() != rho.dim() {
                return Err(Error::Config(alloc::format!(
                    "state of dim {} fed to a map on dim {}",
                    rho.dim(),
                    op.dim()
                )));
            }
        }
        apply_and_normalize(&self.ops, rho).map_err(|e| e.at_time(self.t))
    }
}

impl Scenario {
    pub fn new(family: ChannelFamily, mode: SupermapMode, control: ControlSpec) -> Result<Self> {
        let s = Scenario { family, mode, control };
        s.validate()?;
        Ok(s)
    }

    /// The bare channel with the default control.
    pub fn raw(family: ChannelFamily) -> Self {
        Scenario {
            family,
            mode: SupermapMode::None,
            control: ControlSpec::default(),
        }
    }

    pub fn flip(family: ChannelFamily) -> Self {
        Scenario {
            family,
            mode: SupermapMode::Flip,
            control: ControlSpec::default(),
        }
    }

    pub fn switch(family: ChannelFamily) -> Self {
        Scenario {
            family,
            mode: SupermapMode::Switch,
            control: ControlSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if self.mode == SupermapMode::Flip && self.family.is_unital_family() == Some(false) {
            return Err(Error::NotBidirectional);
        }
        Ok(())
    }

    /// Build the map at time `t`. With `with_ancilla` the map acts on
    /// `system ⊗ ancilla` and leaves the ancilla alone.
    pub fn step_map(&self, t: f64, with_ancilla: bool) -> Result<StepMap> {
        let k = family_kraus(&self.family, t)?;
        let (ops, postselected) = match self.mode {
            SupermapMode::None => {
                let k = if with_ancilla { k.tensor_identity(2) } else { k };
                (k.operators().to_vec(), false)
            }
            SupermapMode::Flip | SupermapMode::Switch => {
                let mut s = if self.mode == SupermapMode::Flip {
                    time_flip_kraus(&k)?
                } else {
                    switch_kraus(&k, &k)?
                };
                if with_ancilla {
                    s = extend_with_ancilla(&s)?;
                }
                (conditional_operators(&s, &self.control), true)
            }
        };
        Ok(StepMap { ops, postselected, t })
    }

    pub fn evolve(&self, rho: &DensityMatrix, t: f64) -> Result<PostSelectedStep> {
        let with_ancilla = rho.dim() == 4;
        self.step_map(t, with_ancilla)?.apply(rho)
    }
}
