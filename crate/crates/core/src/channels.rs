//! Phase-covariant qubit channels.
//!
//! A phase-covariant map is fixed by three real numbers: the equatorial
//! contraction `λ`, the axial contraction `λ_z` and the axial shift `λ_*`.
//! On Bloch vectors it acts as `(x, y, z) ↦ (λx, λy, λ_z z + λ_*)`.
//! [`ChannelFamily`] turns a time `t` into such a triple.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;

// Unused when std is linked (tests), where inherent f64 methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matcore::{pauli, tensor, CMatrix, DensityMatrix};

/// Slack on both complete-positivity inequalities.
pub const CPTP_SLACK: f64 = 1e-12;
/// Tolerance for Kraus completeness and unitality sums.
pub const KRAUS_TOL: f64 = 1e-11;
/// Step of the central differences used for custom families.
pub const FD_STEP: f64 = 1e-6;

/// The triple `(λ, λ_z, λ_*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCovParams {
    pub lambda: f64,
    pub lambda_z: f64,
    pub lambda_star: f64,
}

impl PhaseCovParams {
    pub const IDENTITY: PhaseCovParams = PhaseCovParams {
        lambda: 1.0,
        lambda_z: 1.0,
        lambda_star: 0.0,
    };

    pub fn new(lambda: f64, lambda_z: f64, lambda_star: f64) -> Self {
        PhaseCovParams {
            lambda,
            lambda_z,
            lambda_star,
        }
    }

    fn violation(&self, reason: &'static str) -> Error {
        Error::CptpViolation {
            lambda: self.lambda,
            lambda_z: self.lambda_z,
            lambda_star: self.lambda_star,
            reason,
        }
    }

    fn require_cptp(&self) -> Result<()> {
        match cptp_check(self) {
            CptpStatus::Valid => Ok(()),
            CptpStatus::Invalid(InvalidReason::NotFinite) => Err(self.violation("non-finite parameter")),
            CptpStatus::Invalid(InvalidReason::AxialBound { .. }) => Err(self.violation("|λ_z| + |λ_*| exceeds 1")),
            CptpStatus::Invalid(InvalidReason::Ellipse { .. }) => Err(self.violation("4λ² + λ_*² exceeds (1 + λ_z)²")),
        }
    }
}

/// Outcome of [`cptp_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CptpStatus {
    Valid,
    Invalid(InvalidReason),
}

impl CptpStatus {
    pub fn is_valid(&self) -> bool {
        matches!(self, CptpStatus::Valid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvalidReason {
    NotFinite,
    /// `|λ_z| + |λ_*| > 1`; carries the left-hand side.
    AxialBound {
        sum: f64,
    },
    /// `4λ² + λ_*² > (1 + λ_z)²`; carries both sides.
    Ellipse {
        lhs: f64,
        rhs: f64,
    },
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::NotFinite => write!(f, "non-finite parameter"),
            InvalidReason::AxialBound { sum } => write!(f, "|λ_z|+|λ_*| = {sum} > 1"),
            InvalidReason::Ellipse { lhs, rhs } => write!(f, "4λ²+λ_*² = {lhs} > (1+λ_z)² = {rhs}"),
        }
    }
}

/// Complete positivity of the phase-covariant map with the given triple.
pub fn cptp_check(p: &PhaseCovParams) -> CptpStatus {
    if !(p.lambda.is_finite() && p.lambda_z.is_finite() && p.lambda_star.is_finite()) {
        return CptpStatus::Invalid(InvalidReason::NotFinite);
    }
    let sum = p.lambda_z.abs() + p.lambda_star.abs();
    if sum > 1.0 + CPTP_SLACK {
        return CptpStatus::Invalid(InvalidReason::AxialBound { sum });
    }
    let lhs = 4.0 * p.lambda * p.lambda + p.lambda_star * p.lambda_star;
    let rhs = (1.0 + p.lambda_z) * (1.0 + p.lambda_z);
    if lhs > rhs + CPTP_SLACK {
        return CptpStatus::Invalid(InvalidReason::Ellipse { lhs, rhs });
    }
    CptpStatus::Valid
}

/// Image of a Bloch vector.
pub fn bloch_image(p: &PhaseCovParams, v: [f64; 3]) -> [f64; 3] {
    [p.lambda * v[0], p.lambda * v[1], p.lambda_z * v[2] + p.lambda_star]
}

/// The map extended linearly to any 2×2 operator:
/// `½{tr[X](I + λ_*σ_z) + λ tr[σ_x X]σ_x + λ tr[σ_y X]σ_y + λ_z tr[σ_z X]σ_z}`.
pub fn apply_direct_matrix(p: &PhaseCovParams, x: &CMatrix) -> Result<CMatrix> {
    if x.dim() != 2 {
        return Err(Error::Config(format!(
            "phase-covariant map acts on qubits, got dim {}",
            x.dim()
        )));
    }
    let (sx, sy, sz) = (pauli::x(), pauli::y(), pauli::z());
    let tr = x.trace();
    let tx = (&sx * x).trace();
    let ty = (&sy * x).trace();
    let tz = (&sz * x).trace();
    let mut out = &pauli::id() + &sz.scale_real(p.lambda_star);
    out = out.scale(tr);
    out = &out + &sx.scale(tx * p.lambda);
    out = &out + &sy.scale(ty * p.lambda);
    out = &out + &sz.scale(tz * p.lambda_z);
    Ok(out.scale_real(0.5))
}

/// Action on a qubit state; the triple must be CPTP.
pub fn apply_direct(p: &PhaseCovParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    p.require_cptp()?;
    let v = rho.bloch()?;
    let w = bloch_image(p, v);
    // CPTP guarantees |w| ≤ 1 up to round-off.
    let n2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    let w = if n2 > 1.0 {
        let s = 1.0 / n2.sqrt();
        [w[0] * s, w[1] * s, w[2] * s]
    } else {
        w
    };
    DensityMatrix::from_bloch(w)
}

/// `ρ_* = ½(I + λ_*/(1 − λ_z) σ_z)`.
pub fn invariant_state(p: &PhaseCovParams) -> Result<DensityMatrix> {
    let gap = 1.0 - p.lambda_z;
    if gap.abs() < 1e-14 {
        return Err(Error::Singularity("invariant state undefined at λ_z = 1"));
    }
    DensityMatrix::from_bloch([0.0, 0.0, p.lambda_star / gap])
}

/// Operator-sum representation of a qubit channel.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
    label: String,
}

impl KrausSet {
    /// Checks that all operators share a dimension and that `Σ M†M = I`.
    pub fn new(operators: Vec<CMatrix>, label: impl Into<String>) -> Result<Self> {
        let set = Self::new_unchecked(operators, label)?;
        let defect = set.completeness_defect();
        if defect > KRAUS_TOL {
            return Err(Error::NumericContract(format!(
                "Kraus completeness violated by {defect:e}"
            )));
        }
        Ok(set)
    }

    pub(crate) fn new_unchecked(operators: Vec<CMatrix>, label: impl Into<String>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::Config("empty Kraus set".into()));
        };
        let dim = first.dim();
        if operators.iter().any(|m| m.dim() != dim) {
            return Err(Error::Config("Kraus operators differ in dimension".into()));
        }
        Ok(KrausSet {
            operators,
            label: label.into(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        KrausSet {
            operators: vec![CMatrix::identity(dim)],
            label: String::from("identity"),
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `‖Σ M†M − I‖_max`.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(self.dim()), |acc, m| &acc + &(&m.dagger() * m));
        sum.max_abs_diff(&CMatrix::identity(self.dim()))
    }

    /// `‖Σ MM† − I‖_max`.
    pub fn unitality_defect(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(self.dim()), |acc, m| &acc + &(m * &m.dagger()));
        sum.max_abs_diff(&CMatrix::identity(self.dim()))
    }

    /// `Σ M X M†` for any operator `X`.
    pub fn apply_matrix(&self, x: &CMatrix) -> CMatrix {
        self.operators
            .iter()
            .fold(CMatrix::zeros(x.dim()), |acc, m| &acc + &m.sandwich(x))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::Config(format!(
                "channel on dim {} applied to state of dim {}",
                self.dim(),
                rho.dim()
            )));
        }
        DensityMatrix::new(self.apply_matrix(rho.matrix()))
    }

    /// `{M ⊗ I_d}`: the channel acting on the first factor only.
    pub fn tensor_identity(&self, ancilla_dim: usize) -> KrausSet {
        let id = CMatrix::identity(ancilla_dim);
        KrausSet {
            operators: self.operators.iter().map(|m| tensor(m, &id)).collect(),
            label: format!("{}⊗I", self.label),
        }
    }

    /// `Λ_after ∘ Λ_before`.
    pub fn compose(after: &KrausSet, before: &KrausSet) -> Result<KrausSet> {
        if after.dim() != before.dim() {
            return Err(Error::Config("composing channels of different dims".into()));
        }
        let mut ops = Vec::with_capacity(after.len() * before.len());
        for a in &after.operators {
            for b in &before.operators {
                ops.push(a * b);
            }
        }
        KrausSet::new_unchecked(ops, format!("{}∘{}", after.label, before.label))
    }
}

/// The four-operator Kraus representation of the phase-covariant map.
pub fn kraus_from_params(p: &PhaseCovParams) -> Result<KrausSet> {
    p.require_cptp()?;
    let PhaseCovParams {
        lambda,
        lambda_z,
        lambda_star,
    } = *p;
    let root = (lambda_star * lambda_star + 4.0 * lambda * lambda).sqrt();
    let lambda_plus = 0.5 * (1.0 + lambda_z + root);
    let lambda_minus = 0.5 * (1.0 + lambda_z - root);
    // cot ϑ = (λ_* + √(λ_*² + 4λ²)) / 2λ
    let theta = if lambda.abs() < 1e-14 {
        if lambda_star >= 0.0 {
            0.0
        } else {
            FRAC_PI_2
        }
    } else if lambda_star >= 0.0 {
        (2.0 * lambda).atan2(lambda_star + root)
    } else {
        // λ_* + r = 4λ²/(r − λ_*) without cancellation; both atan2 arguments
        // scaled by r − λ_* > 0.
        (2.0 * lambda * (root - lambda_star)).atan2(4.0 * lambda * lambda)
    };
    let amp = |x: f64| x.max(0.0).sqrt();
    let c_up = amp(0.5 * (1.0 - lambda_z + lambda_star));
    let c_down = amp(0.5 * (1.0 - lambda_z - lambda_star));
    let (s, cth) = theta.sin_cos();
    let m1 = CMatrix::from_real(&[0.0, c_up, 0.0, 0.0])?;
    let m2 = CMatrix::from_real(&[0.0, 0.0, c_down, 0.0])?;
    let m3 = CMatrix::diag(&[cth, s]).scale_real(amp(lambda_plus));
    let m4 = CMatrix::diag(&[-s, cth]).scale_real(amp(lambda_minus));
    KrausSet::new(
        vec![m1, m2, m3, m4],
        format!("pc(λ={lambda},λz={lambda_z},λ*={lambda_star})"),
    )
}

/// Transpose every operator (no conjugation).
pub fn transpose_channel(k: &KrausSet) -> KrausSet {
    KrausSet {
        operators: k.operators.iter().map(CMatrix::transpose).collect(),
        label: format!("{}ᵀ", k.label),
    }
}

/// `Σ MM† = I` within [`KRAUS_TOL`].
pub fn is_unital(k: &KrausSet) -> bool {
    k.unitality_defect() <= KRAUS_TOL
}

/// Lindblad rates of the time-local generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceRates {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub gamma_z: f64,
}

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied time dependence of the three parameters.
#[derive(Clone)]
pub struct CustomFamily {
    pub label: String,
    pub lambda: TimeFn,
    pub lambda_z: TimeFn,
    pub lambda_star: TimeFn,
}

impl fmt::Debug for CustomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFamily")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// Time-parameterized phase-covariant processes.
#[derive(Debug, Clone)]
pub enum ChannelFamily {
    /// `λ = e^{−ωt}, λ_z = e^{−t}, λ_* = 0`; CPTP for `ω ≥ 1/2`.
    DepolarizingCpDiv {
        omega: f64,
    },
    /// `λ = (1 + e^{−νt})/2, λ_z = e^{−t}, λ_* = 0`; CPTP for `ν ≥ 1`.
    EternalUnital {
        nu: f64,
    },
    /// `λ = e^{−t}, λ_z = e^{−2t}, λ_* = 2 sin(αt)/√(4+α²)`; `α > 0`.
    GadSwitchable {
        alpha: f64,
    },
    /// `λ = ½√((1+e^{−t})² − μ²(1−e^{−t})²), λ_z = e^{−t}, λ_* = μ(1−e^{−t})`; `|μ| < 1`.
    NonUnitalEternal {
        mu: f64,
    },
    Custom(CustomFamily),
}

/// `(λ̇/λ, λ̇_z/λ_z, λ̇_*)` together with `λ_*`.
#[derive(Debug, Clone, Copy)]
struct LogDerivatives {
    lambda: f64,
    lambda_z: f64,
    lambda_star_dot: f64,
    lambda_star: f64,
}

impl LogDerivatives {
    fn rates(&self) -> DecoherenceRates {
        let LogDerivatives {
            lambda,
            lambda_z,
            lambda_star_dot,
            lambda_star,
        } = *self;
        DecoherenceRates {
            gamma_plus: 0.5 * (lambda_star_dot - lambda_z * (lambda_star + 1.0)),
            gamma_minus: -0.5 * (lambda_star_dot + lambda_z * (1.0 - lambda_star)),
            gamma_z: 0.25 * (lambda_z - 2.0 * lambda),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("time must be finite and non-negative, got {t}")))
    }
}

impl ChannelFamily {
    /// CLI identifier.
    pub fn id(&self) -> &'static str {
        match self {
            ChannelFamily::DepolarizingCpDiv { .. } => "dcp",
            ChannelFamily::EternalUnital { .. } => "eternal",
            ChannelFamily::GadSwitchable { .. } => "gad",
            ChannelFamily::NonUnitalEternal { .. } => "nonunital-eternal",
            ChannelFamily::Custom(_) => "custom",
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match *self {
            ChannelFamily::DepolarizingCpDiv { omega } => Some(omega),
            ChannelFamily::EternalUnital { nu } => Some(nu),
            ChannelFamily::GadSwitchable { alpha } => Some(alpha),
            ChannelFamily::NonUnitalEternal { mu } => Some(mu),
            ChannelFamily::Custom(_) => None,
        }
    }

    /// Parameter error for named families outside their CPTP range.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str, v: f64| Err(Error::Config(format!("{msg}, got {v}")));
        match *self {
            ChannelFamily::DepolarizingCpDiv { omega } if !(omega >= 0.5) => bad("dcp requires ω ≥ 1/2", omega),
            ChannelFamily::EternalUnital { nu } if !(nu >= 1.0) => bad("eternal requires ν ≥ 1", nu),
            ChannelFamily::GadSwitchable { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                bad("gad requires α > 0", alpha)
            }
            ChannelFamily::NonUnitalEternal { mu } if !(mu.abs() < 1.0) => {
                bad("nonunital-eternal requires |μ| < 1", mu)
            }
            ChannelFamily::DepolarizingCpDiv { omega } if !omega.is_finite() => bad("ω must be finite", omega),
            ChannelFamily::EternalUnital { nu } if !nu.is_finite() => bad("ν must be finite", nu),
            _ => Ok(()),
        }
    }

    /// `λ_* ≡ 0` for the named families; `None` when it cannot be decided
    /// statically.
    pub fn is_unital_family(&self) -> Option<bool> {
        match *self {
            ChannelFamily::DepolarizingCpDiv { .. } | ChannelFamily::EternalUnital { .. } => Some(true),
            ChannelFamily::GadSwitchable { .. } => Some(false),
            ChannelFamily::NonUnitalEternal { mu } => Some(mu == 0.0),
            ChannelFamily::Custom(_) => None,
        }
    }

    /// The triple at time `t` after validating the family parameter.
    pub fn params_at(&self, t: f64) -> Result<PhaseCovParams> {
        self.validate()?;
        self.raw_params_at(t)
    }

    /// The triple at time `t` without checking the family parameter range.
    /// Used to probe families outside their valid range.
    pub fn raw_params_at(&self, t: f64) -> Result<PhaseCovParams> {
        check_time(t)?;
        Ok(match self {
            ChannelFamily::DepolarizingCpDiv { omega } => PhaseCovParams::new((-omega * t).exp(), (-t).exp(), 0.0),
            ChannelFamily::EternalUnital { nu } => PhaseCovParams::new(0.5 * (1.0 + (-nu * t).exp()), (-t).exp(), 0.0),
            ChannelFamily::GadSwitchable { alpha } => PhaseCovParams::new(
                (-t).exp(),
                (-2.0 * t).exp(),
                2.0 * (alpha * t).sin() / (4.0 + alpha * alpha).sqrt(),
            ),
            ChannelFamily::NonUnitalEternal { mu } => {
                let e = (-t).exp();
                let disc = (1.0 + e) * (1.0 + e) - mu * mu * (1.0 - e) * (1.0 - e);
                PhaseCovParams::new(0.5 * disc.max(0.0).sqrt(), e, mu * (1.0 - e))
            }
            ChannelFamily::Custom(c) => PhaseCovParams::new((c.lambda)(t), (c.lambda_z)(t), (c.lambda_star)(t)),
        })
    }

    fn log_derivatives(&self, t: f64) -> Result<LogDerivatives> {
        check_time(t)?;
        let p = self.raw_params_at(t)?;
        Ok(match *self {
            ChannelFamily::DepolarizingCpDiv { omega } => LogDerivatives {
                lambda: -omega,
                lambda_z: -1.0,
                lambda_star_dot: 0.0,
                lambda_star: 0.0,
            },
            ChannelFamily::EternalUnital { nu } => LogDerivatives {
                lambda: -nu / ((nu * t).exp() + 1.0),
                lambda_z: -1.0,
                lambda_star_dot: 0.0,
                lambda_star: 0.0,
            },
            ChannelFamily::GadSwitchable { alpha } => LogDerivatives {
                lambda: -1.0,
                lambda_z: -2.0,
                lambda_star_dot: 2.0 * alpha * (alpha * t).cos() / (4.0 + alpha * alpha).sqrt(),
                lambda_star: p.lambda_star,
            },
            ChannelFamily::NonUnitalEternal { mu } => {
                let e = (-t).exp();
                let mu2 = mu * mu;
                let disc = (1.0 + e) * (1.0 + e) - mu2 * (1.0 - e) * (1.0 - e);
                if disc <= 0.0 {
                    return Err(Error::Singularity("λ vanishes"));
                }
                LogDerivatives {
                    lambda: -e * ((1.0 + e) + mu2 * (1.0 - e)) / disc,
                    lambda_z: -1.0,
                    lambda_star_dot: mu * e,
                    lambda_star: p.lambda_star,
                }
            }
            ChannelFamily::Custom(ref c) => {
                let lam = p.lambda;
                let lam_z = p.lambda_z;
                if lam.abs() < f64::MIN_POSITIVE || !lam.is_finite() {
                    return Err(Error::Singularity("λ vanishes"));
                }
                if lam_z.abs() < f64::MIN_POSITIVE || !lam_z.is_finite() {
                    return Err(Error::Singularity("λ_z vanishes"));
                }
                LogDerivatives {
                    lambda: numeric_derivative(&c.lambda, t) / lam,
                    lambda_z: numeric_derivative(&c.lambda_z, t) / lam_z,
                    lambda_star_dot: numeric_derivative(&c.lambda_star, t),
                    lambda_star: p.lambda_star,
                }
            }
        })
    }
}

/// Central difference with step [`FD_STEP`]; second-order one-sided at `t < h`.
fn numeric_derivative(f: &TimeFn, t: f64) -> f64 {
    let h = FD_STEP;
    if t >= h {
        (f(t + h) - f(t - h)) / (2.0 * h)
    } else {
        (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h)
    }
}

/// Decoherence rates `γ_+`, `γ_−`, `γ_z` of the family at time `t`. The
/// family parameter range is not checked, so out-of-range families can be
/// probed. Uses
/// `γ_+ = ½[λ̇_* − (λ̇_z/λ_z)(λ_* + 1)]`, `γ_− = −½[λ̇_* + (λ̇_z/λ_z)(1 − λ_*)]`
/// and `γ_z = ¼(λ̇_z/λ_z − 2λ̇/λ)`.
pub fn lindblad_rates(family: &ChannelFamily, t: f64) -> Result<DecoherenceRates> {
    Ok(family.log_derivatives(t)?.rates())
}

/// Channel parameters and their Kraus set at `t`.
pub fn family_kraus(family: &ChannelFamily, t: f64) -> Result<KrausSet> {
    kraus_from_params(&family.params_at(t)?)
}

/// `U(φ) = exp(−iσ_zφ)`.
pub fn phase_rotation(phi: f64) -> CMatrix {
    let mut u = CMatrix::zeros(2);
    u.set(0, 0, num_complex::Complex64::from_polar(1.0, -phi));
    u.set(1, 1, num_complex::Complex64::from_polar(1.0, phi));
    u
}
