//! Quantum time flip and quantum switch.
//!
//! Supermap outputs act on `system ⊗ [ancilla ⊗] control` with the control
//! qubit always the last (least significant) factor. Post-selection projects
//! the control on one outcome, traces it out and renormalizes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::channels::{is_unital, KrausSet, KRAUS_TOL};
use crate::error::{Error, Result};
use crate::matcore::{tensor, CMatrix, DensityMatrix, PureState, C64};

/// Post-selection probabilities at or below this are treated as zero.
pub const SUCCESS_PROB_FLOOR: f64 = 1e-12;

/// Control measurement outcome kept after the supermap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Outcome {
    #[default]
    Plus,
    Minus,
    /// Computational-basis outcomes, for the definite-direction limits.
    Zero,
    One,
}

impl Outcome {
    pub fn state(self) -> PureState {
        match self {
            Outcome::Plus => PureState::plus(),
            Outcome::Minus => PureState::minus(),
            Outcome::Zero => PureState::zero(),
            Outcome::One => PureState::one(),
        }
    }
}

/// Control preparation and post-selection.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSpec {
    pub initial: PureState,
    pub outcome: Outcome,
}

impl Default for ControlSpec {
    fn default() -> Self {
        ControlSpec {
            initial: PureState::plus(),
            outcome: Outcome::Plus,
        }
    }
}

impl ControlSpec {
    pub fn new(initial: PureState, outcome: Outcome) -> Result<Self> {
        if initial.dim() != 2 {
            return Err(Error::Config(format!(
                "control must be a qubit, got dim {}",
                initial.dim()
            )));
        }
        Ok(ControlSpec { initial, outcome })
    }
}

/// Kraus operators of a supermap output.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperKrausSet {
    operators: Vec<CMatrix>,
    layout: Vec<usize>,
}

impl SuperKrausSet {
    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// Factor dims, control last.
    pub fn layout(&self) -> &[usize] {
        &self.layout
    }

    /// Dimension of everything except the control.
    pub fn system_dim(&self) -> usize {
        self.layout[..self.layout.len() - 1].iter().product()
    }

    pub fn completeness_defect(&self) -> f64 {
        let n = self.operators[0].dim();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(n), |acc, f| &acc + &(&f.dagger() * f));
        sum.max_abs_diff(&CMatrix::identity(n))
    }

    fn from_blocks(blocks: impl Iterator<Item = (CMatrix, CMatrix)>, system_dim: usize) -> Self {
        let p0 = PureState::zero().projector();
        let p1 = PureState::one().projector();
        let operators = blocks
            .map(|(forward, backward)| &tensor(&forward, &p0) + &tensor(&backward, &p1))
            .collect();
        SuperKrausSet {
            operators,
            layout: vec![system_dim, 2],
        }
    }
}

/// `F_i = M_i ⊗ |0⟩⟨0| + M_iᵀ ⊗ |1⟩⟨1|`. The channel must be unital.
pub fn time_flip_kraus(k: &KrausSet) -> Result<SuperKrausSet> {
    if !is_unital(k) {
        return Err(Error::NotBidirectional);
    }
    Ok(SuperKrausSet::from_blocks(
        k.operators().iter().map(|m| (m.clone(), m.transpose())),
        k.dim(),
    ))
}

/// `S_ij = M_i⁽²⁾M_j⁽¹⁾ ⊗ |0⟩⟨0| + M_j⁽¹⁾M_i⁽²⁾ ⊗ |1⟩⟨1|`.
pub fn switch_kraus(k1: &KrausSet, k2: &KrausSet) -> Result<SuperKrausSet> {
    if k1.dim() != k2.dim() {
        return Err(Error::Config(format!(
            "switch slots have dims {} and {}",
            k1.dim(),
            k2.dim()
        )));
    }
    let blocks = k2
        .operators()
        .iter()
        .flat_map(|m2| k1.operators().iter().map(move |m1| (m2 * m1, m1 * m2)));
    Ok(SuperKrausSet::from_blocks(blocks, k1.dim()))
}

/// Insert an identity ancilla between system and control: `[2,2] → [2,2,2]`.
pub fn extend_with_ancilla(s: &SuperKrausSet) -> Result<SuperKrausSet> {
    if s.layout != [2, 2] {
        return Err(Error::Config(format!(
            "ancilla extension needs layout [2, 2], got {:?}",
            s.layout
        )));
    }
    let operators = s
        .operators
        .iter()
        .map(|f| {
            let mut out = CMatrix::zeros(8);
            for sys_r in 0..2 {
                for ctl_r in 0..2 {
                    for sys_c in 0..2 {
                        for ctl_c in 0..2 {
                            let v = f.get(sys_r * 2 + ctl_r, sys_c * 2 + ctl_c);
                            for anc in 0..2 {
                                out.set((sys_r * 2 + anc) * 2 + ctl_r, (sys_c * 2 + anc) * 2 + ctl_c, v);
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    Ok(SuperKrausSet {
        operators,
        layout: vec![2, 2, 2],
    })
}

/// System state after post-selection and the probability of the kept outcome.
#[derive(Debug, Clone)]
pub struct PostSelectedStep {
    pub state: DensityMatrix,
    pub success_prob: f64,
}

/// Conditional operators `K_i = (I ⊗ ⟨o|) F_i (I ⊗ |c⟩)`.
///
/// The unnormalized post-selected state is `Σ K_i ρ K_i†`, which equals
/// `tr_c[(I⊗|o⟩⟨o|) Σ F_i(ρ⊗|c⟩⟨c|)F_i† (I⊗|o⟩⟨o|)]`.
pub fn conditional_operators(s: &SuperKrausSet, ctrl: &ControlSpec) -> Vec<CMatrix> {
    let d = s.system_dim();
    let c = ctrl.initial.amplitudes();
    let o = ctrl.outcome.state();
    let o = o.amplitudes();
    s.operators
        .iter()
        .map(|f| {
            let mut k = CMatrix::zeros(d);
            for r in 0..d {
                for col in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for (a, oa) in o.iter().enumerate() {
                        for (b, cb) in c.iter().enumerate() {
                            acc += oa.conj() * f.get(r * 2 + a, col * 2 + b) * cb;
                        }
                    }
                    k.set(r, col, acc);
                }
            }
            k
        })
        .collect()
}

/// Apply a set of (possibly trace-decreasing) operators and renormalize.
pub(crate) fn apply_and_normalize(ops: &[CMatrix], rho: &DensityMatrix) -> Result<PostSelectedStep> {
    let out = ops
        .iter()
        .fold(CMatrix::zeros(rho.dim()), |acc, k| &acc + &k.sandwich(rho.matrix()));
    let prob = out.trace().re;
    if !(prob > SUCCESS_PROB_FLOOR) {
        return Err(Error::DegeneratePostSelection { prob, t: None });
    }
    let state = DensityMatrix::new(out.scale_real(1.0 / prob))?;
    Ok(PostSelectedStep {
        state,
        success_prob: prob.min(1.0),
    })
}

/// Run the supermap on `ρ ⊗ |c⟩⟨c|` and keep the chosen control outcome.
pub fn apply_postselect(s: &SuperKrausSet, rho_in: &DensityMatrix, ctrl: &ControlSpec) -> Result<PostSelectedStep> {
    if rho_in.dim() != s.system_dim() {
        return Err(Error::Config(format!(
            "state of dim {} does not match supermap layout {:?}",
            rho_in.dim(),
            s.layout
        )));
    }
    let norm: f64 = ctrl.initial.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > PureState::NORM_TOL {
        return Err(Error::NumericContract("control state is not normalized".into()));
    }
    apply_and_normalize(&conditional_operators(s, ctrl), rho_in)
}

/// Effective channel on the system for a control fixed to `|c⟩` with no
/// post-selection: `ρ ↦ tr_c[Σ F(ρ⊗|c⟩⟨c|)F†]`.
pub fn control_reduced_channel(s: &SuperKrausSet, control: &PureState) -> Result<KrausSet> {
    let mut ops = Vec::new();
    for outcome in [Outcome::Zero, Outcome::One] {
        let ctrl = ControlSpec::new(control.clone(), outcome)?;
        ops.extend(conditional_operators(s, &ctrl));
    }
    let set = KrausSet::new_unchecked(ops, "control-reduced")?;
    let defect = set.completeness_defect();
    if defect > KRAUS_TOL {
        return Err(Error::NumericContract(format!(
            "reduced channel not trace preserving ({defect:e})"
        )));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{family_kraus, kraus_from_params, ChannelFamily, PhaseCovParams};
    use crate::matcore::partial_trace;
    use crate::measures::trace_distance;

    /// Literal route: build ρ⊗ρ_c, apply, project, trace out, normalize.
    fn literal_postselect(s: &SuperKrausSet, rho: &DensityMatrix, ctrl: &ControlSpec) -> (CMatrix, f64) {
        let big = tensor(rho.matrix(), &ctrl.initial.projector());
        let out = s
            .operators()
            .iter()
            .fold(CMatrix::zeros(big.dim()), |acc, f| &acc + &f.sandwich(&big));
        let proj = tensor(&CMatrix::identity(rho.dim()), &ctrl.outcome.state().projector());
        let kept = &(&proj * &out) * &proj;
        let prob = kept.trace().re;
        let reduced = partial_trace(&kept, &[rho.dim(), 2], 1).unwrap();
        (reduced.scale_real(1.0 / prob), prob)
    }

    #[test]
    fn identity_supermaps() {
        let id = KrausSet::identity(2);
        let f = time_flip_kraus(&id).unwrap();
        assert_eq!(f.operators().len(), 1);
        assert!(f.operators()[0].approx_eq(&CMatrix::identity(4), 0.0));
        let s = switch_kraus(&id, &id).unwrap();
        assert!(s.operators()[0].approx_eq(&CMatrix::identity(4), 0.0));
        let e = extend_with_ancilla(&s).unwrap();
        assert!(e.operators()[0].approx_eq(&CMatrix::identity(8), 0.0));
        assert_eq!(e.layout(), &[2, 2, 2]);

        let rho = DensityMatrix::from_bloch([0.1, 0.5, -0.2]).unwrap();
        let step = apply_postselect(&s, &rho, &ControlSpec::default()).unwrap();
        assert!(step.state.matrix().approx_eq(rho.matrix(), 1e-15));
        assert!((step.success_prob - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flip_rejects_non_unital() {
        let k = family_kraus(&ChannelFamily::GadSwitchable { alpha: 1.0 }, 0.5).unwrap();
        assert_eq!(time_flip_kraus(&k), Err(Error::NotBidirectional));
    }

    #[test]
    fn ancilla_extension_rejects_wrong_layout() {
        let s = switch_kraus(&KrausSet::identity(2), &KrausSet::identity(2)).unwrap();
        let e = extend_with_ancilla(&s).unwrap();
        assert!(matches!(extend_with_ancilla(&e), Err(Error::Config(_))));
    }

    #[test]
    fn conditional_route_matches_literal_route() {
        let k = family_kraus(&ChannelFamily::DepolarizingCpDiv { omega: 3.0 }, 0.8).unwrap();
        let g = family_kraus(&ChannelFamily::GadSwitchable { alpha: 2.0 }, 0.8).unwrap();
        let rho = DensityMatrix::from_bloch([0.3, -0.2, 0.6]).unwrap();
        for s in [time_flip_kraus(&k).unwrap(), switch_kraus(&g, &g).unwrap()] {
            for outcome in [Outcome::Plus, Outcome::Minus, Outcome::Zero] {
                let ctrl = ControlSpec::new(PureState::qubit(0.4, 1.1), outcome).unwrap();
                let step = apply_postselect(&s, &rho, &ctrl).unwrap();
                let (lit, prob) = literal_postselect(&s, &rho, &ctrl);
                assert!(step.state.matrix().approx_eq(&lit, 1e-14));
                assert!((step.success_prob - prob).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn flip_with_definite_control_is_forward_channel() {
        let p = PhaseCovParams::new(0.3, 0.6, 0.0);
        let k = kraus_from_params(&p).unwrap();
        let f = time_flip_kraus(&k).unwrap();
        let rho = DensityMatrix::from_bloch([0.5, 0.1, 0.4]).unwrap();
        let ctrl = ControlSpec::new(PureState::zero(), Outcome::Zero).unwrap();
        let step = apply_postselect(&f, &rho, &ctrl).unwrap();
        assert!((step.success_prob - 1.0).abs() < 1e-14);
        assert!(step.state.matrix().approx_eq(k.apply(&rho).unwrap().matrix(), 1e-14));
    }

    #[test]
    fn flip_of_depolarizing_matches_closed_form_at_t1() {
        let omega: f64 = 3.0;
        let t: f64 = 1.0;
        let k = family_kraus(&ChannelFamily::DepolarizingCpDiv { omega }, t).unwrap();
        let f = time_flip_kraus(&k).unwrap();
        let ctrl = ControlSpec::default();
        let a = apply_postselect(&f, &DensityMatrix::from_pure(&PureState::plus()), &ctrl).unwrap();
        let b = apply_postselect(&f, &DensityMatrix::from_pure(&PureState::minus()), &ctrl).unwrap();
        let d = trace_distance(&a.state, &b.state).unwrap();
        let closed = (4.0 * (t * (1.0 - omega)).exp() + t.exp() - 1.0) / (3.0 * t.exp() + 1.0);
        assert!((d - closed).abs() < 1e-14);
        assert!((d - 0.246_822_621_421_055).abs() < 1e-13);
    }

    #[test]
    fn zero_probability_branch_is_an_error() {
        let f = time_flip_kraus(&KrausSet::identity(2)).unwrap();
        let ctrl = ControlSpec::new(PureState::zero(), Outcome::One).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            apply_postselect(&f, &rho, &ctrl),
            Err(Error::DegeneratePostSelection { .. })
        ));
    }

    #[test]
    fn postselect_dimension_mismatch() {
        let f = time_flip_kraus(&KrausSet::identity(2)).unwrap();
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            apply_postselect(&f, &rho, &ControlSpec::default()),
            Err(Error::Config(_))
        ));
    }
}
