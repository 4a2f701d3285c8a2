//! Dense complex matrices for one to three qubits.
//!
//! Everything here is sized for dimensions 2, 4 and 8: storage is a flat
//! row-major `Vec`, products are the naive triple loop and the Hermitian
//! eigensolver is cyclic Jacobi.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

// Unused when std is linked (tests), where inherent f64 methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Absolute tolerance used for Hermiticity and general matrix comparisons.
pub const MATRIX_TOL: f64 = 1e-10;
/// Eigenvalues above this (but below zero) are clipped to zero.
pub const NEG_EIG_CLIP: f64 = -1e-9;
/// Eigenvalues below this make a PSD square root fail.
pub const NEG_EIG_FATAL: f64 = -1e-6;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = re(1.0);
        }
        m
    }

    /// Build from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_entries(entries: Vec<C64>) -> Result<Self> {
        let n = entries.len();
        let dim = (n as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != n {
            return Err(Error::Config(format!("{n} entries do not form a square matrix")));
        }
        Ok(CMatrix { dim, data: entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::from_entries(entries.iter().map(|&x| re(x)).collect())
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = re(v);
        }
        m
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Config(format!(
                "outer product of lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        let dim = a.len();
        let mut m = Self::zeros(dim);
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                m.data[i * dim + j] = ai * bj.conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(re(factor))
    }

    /// `M ρ M†`.
    pub fn sandwich(&self, rho: &CMatrix) -> CMatrix {
        &(self * rho) * &self.dagger()
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in comparison");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Pauli matrices and the qubit identity.
pub mod pauli {
    use super::{c, re, CMatrix};
    use alloc::vec;

    pub fn id() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_entries(vec![re(0.0), re(1.0), re(1.0), re(0.0)]).unwrap()
    }

    pub fn y() -> CMatrix {
        CMatrix::from_entries(vec![re(0.0), c(0.0, -1.0), c(0.0, 1.0), re(0.0)]).unwrap()
    }

    pub fn z() -> CMatrix {
        CMatrix::diag(&[1.0, -1.0])
    }
}

/// Kronecker product; `a` is the most significant factor.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = CMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a.data[i * na + j];
            for k in 0..nb {
                for l in 0..nb {
                    out.data[(i * nb + k) * n + (j * nb + l)] = aij * b.data[k * nb + l];
                }
            }
        }
    }
    out
}

/// Kronecker product of state vectors.
pub fn tensor_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Trace out factor `traced_index` of a matrix on `⊗ factor_dims`.
pub fn partial_trace(m: &CMatrix, factor_dims: &[usize], traced_index: usize) -> Result<CMatrix> {
    let total: usize = factor_dims.iter().product();
    if factor_dims.is_empty() || total != m.dim {
        return Err(Error::Config(format!(
            "factor dims {factor_dims:?} do not multiply to matrix dim {}",
            m.dim
        )));
    }
    if traced_index >= factor_dims.len() {
        return Err(Error::Config(format!(
            "traced index {traced_index} out of range for {} factors",
            factor_dims.len()
        )));
    }
    // Index split: (outer, traced, inner)
    let traced = factor_dims[traced_index];
    let inner: usize = factor_dims[traced_index + 1..].iter().product();
    let outer: usize = factor_dims[..traced_index].iter().product();
    let kept = outer * inner;
    let mut out = CMatrix::zeros(kept);
    let n = m.dim;
    for o1 in 0..outer {
        for i1 in 0..inner {
            let row = o1 * inner + i1;
            for o2 in 0..outer {
                for i2 in 0..inner {
                    let col = o2 * inner + i2;
                    let mut acc = C64::new(0.0, 0.0);
                    for t in 0..traced {
                        let r = (o1 * traced + t) * inner + i1;
                        let s = (o2 * traced + t) * inner + i2;
                        acc += m.data[r * n + s];
                    }
                    out.data[row * kept + col] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

impl Eigen {
    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.vectors.dim;
        let mut out = CMatrix::zeros(n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors.data[i * n + k] * w;
                for j in 0..n {
                    out.data[i * n + j] += vik * self.vectors.data[j * n + k].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|x| x)
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.data[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi eigensolver.
pub fn hermitian_eigen(m: &CMatrix) -> Result<Eigen> {
    let defect = m.hermiticity_defect();
    if defect > MATRIX_TOL {
        return Err(Error::NumericContract(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);

    let mut converged = off_diagonal_norm(&a) < JACOBI_OFF_TOL;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.data[p * n + q];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                // Phase that makes the (p,q) block real symmetric.
                let phase = apq / r;
                let app = a.data[p * n + p].re;
                let aqq = a.data[q * n + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // G on span(p,q) = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let g_pp = re(cs);
                let g_pq = re(sn);
                let g_qp = -phase.conj() * sn;
                let g_qq = phase.conj() * cs;

                // A <- A G
                for k in 0..n {
                    let akp = a.data[k * n + p];
                    let akq = a.data[k * n + q];
                    a.data[k * n + p] = akp * g_pp + akq * g_qp;
                    a.data[k * n + q] = akp * g_pq + akq * g_qq;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a.data[p * n + k];
                    let aqk = a.data[q * n + k];
                    a.data[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a.data[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a.data[p * n + q] = re(0.0);
                a.data[q * n + p] = re(0.0);
                a.data[p * n + p] = re(a.data[p * n + p].re);
                a.data[q * n + q] = re(a.data[q * n + q].re);
                // V <- V G
                for k in 0..n {
                    let vkp = v.data[k * n + p];
                    let vkq = v.data[k * n + q];
                    v.data[k * n + p] = vkp * g_pp + vkq * g_qp;
                    v.data[k * n + q] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) < JACOBI_OFF_TOL;
    }
    if !converged {
        return Err(Error::NumericContract(format!(
            "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.data[j * n + j]
            .re
            .partial_cmp(&a.data[i * n + i].re)
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a.data[i * n + i].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors.data[r * n + new_col] = v.data[r * n + old_col];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Clip a spectrum value against the PSD contract.
pub(crate) fn clip_eigenvalue(lam: f64) -> Result<f64> {
    if lam < NEG_EIG_FATAL {
        return Err(Error::NumericContract(format!(
            "eigenvalue {lam:e} is significantly negative"
        )));
    }
    Ok(if lam < 0.0 { 0.0 } else { lam })
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eigen(m)?;
    for &lam in &eig.values {
        clip_eigenvalue(lam)?;
    }
    Ok(eig.reconstruct_with(|lam| if lam > 0.0 { lam.sqrt() } else { 0.0 }))
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Config("empty state vector".into()));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NumericContract(format!(
                "state has squared norm {norm}, expected 1"
            )));
        }
        Ok(PureState { amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::NumericContract("cannot normalize zero vector".into()));
        }
        Ok(PureState {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn zero() -> Self {
        PureState {
            amplitudes: vec![re(1.0), re(0.0)],
        }
    }

    pub fn one() -> Self {
        PureState {
            amplitudes: vec![re(0.0), re(1.0)],
        }
    }

    pub fn plus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![re(h), re(h)],
        }
    }

    pub fn minus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![re(h), re(-h)],
        }
    }

    /// `cos θ|0⟩ + e^{iφ} sin θ|1⟩`.
    pub fn qubit(theta: f64, phi: f64) -> Self {
        PureState {
            amplitudes: vec![re(theta.cos()), C64::from_polar(theta.sin(), phi)],
        }
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![re(h), re(0.0), re(0.0), re(h)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn projector(&self) -> CMatrix {
        CMatrix::outer(&self.amplitudes, &self.amplitudes).expect("equal lengths")
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub const TRACE_TOL: f64 = 1e-10;

    /// Validates the state contract.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > MATRIX_TOL {
            return Err(Error::NumericContract(format!(
                "density matrix not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > Self::TRACE_TOL || tr.im.abs() > Self::TRACE_TOL {
            return Err(Error::NumericContract(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let matrix = matrix.hermitian_part();
        let eig = hermitian_eigen(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < NEG_EIG_CLIP {
            return Err(Error::NumericContract(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn from_pure(state: &PureState) -> Self {
        DensityMatrix {
            matrix: state.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Qubit state with Bloch vector `v`, `|v| ≤ 1`.
    pub fn from_bloch(v: [f64; 3]) -> Result<Self> {
        let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if r2 > 1.0 + 1e-12 {
            return Err(Error::NumericContract(format!(
                "Bloch vector length {} exceeds 1",
                r2.sqrt()
            )));
        }
        let m = CMatrix::from_entries(vec![
            re(0.5 * (1.0 + v[2])),
            c(0.5 * v[0], -0.5 * v[1]),
            c(0.5 * v[0], 0.5 * v[1]),
            re(0.5 * (1.0 - v[2])),
        ])?;
        Ok(DensityMatrix { matrix: m })
    }

    /// Bloch vector of a qubit state.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.matrix.dim != 2 {
            return Err(Error::Config(format!(
                "Bloch vector needs a qubit state, got dim {}",
                self.matrix.dim
            )));
        }
        let off = self.matrix.get(1, 0);
        let z = self.matrix.get(0, 0).re - self.matrix.get(1, 1).re;
        Ok([2.0 * off.re, 2.0 * off.im, z])
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_of_pauli_z_and_identity() {
        let m = tensor(&pauli::z(), &pauli::id());
        assert_eq!(m, CMatrix::diag(&[1.0, 1.0, -1.0, -1.0]));
        assert_eq!(tensor(&pauli::id(), &pauli::id()), CMatrix::identity(4));
    }

    #[test]
    fn tensor_of_basis_projectors() {
        let p0 = PureState::zero().projector();
        let p1 = PureState::one().projector();
        let m = tensor(&p0, &p1);
        assert_eq!(m, CMatrix::diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let bell = PureState::bell().projector();
        let r = partial_trace(&bell, &[2, 2], 1).unwrap();
        assert!(r.approx_eq(&CMatrix::identity(2).scale_real(0.5), 1e-15));
        let l = partial_trace(&bell, &[2, 2], 0).unwrap();
        assert!(l.approx_eq(&CMatrix::identity(2).scale_real(0.5), 1e-15));
    }

    #[test]
    fn partial_trace_of_maximally_mixed_three_qubits() {
        let m = CMatrix::identity(8).scale_real(0.125);
        for k in 0..3 {
            let r = partial_trace(&m, &[2, 2, 2], k).unwrap();
            assert!(r.approx_eq(&CMatrix::identity(4).scale_real(0.25), 1e-15));
        }
    }

    #[test]
    fn partial_trace_middle_factor() {
        // a ⊗ b ⊗ c, trace b
        let a = pauli::x();
        let b = CMatrix::diag(&[0.3, 0.7]);
        let cm = pauli::z();
        let m = tensor(&tensor(&a, &b), &cm);
        let r = partial_trace(&m, &[2, 2, 2], 1).unwrap();
        assert!(r.approx_eq(&tensor(&a, &cm), 1e-15));
    }

    #[test]
    fn partial_trace_dimension_errors() {
        let m = CMatrix::identity(4);
        assert!(matches!(partial_trace(&m, &[2, 3], 0), Err(Error::Config(_))));
        assert!(matches!(partial_trace(&m, &[2, 2], 2), Err(Error::Config(_))));
    }

    #[test]
    fn eigen_of_paulis() {
        let e = hermitian_eigen(&pauli::z()).unwrap();
        assert_eq!(e.values, vec![1.0, -1.0]);
        let e = hermitian_eigen(&pauli::x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
        // top eigenvector ∝ |+⟩
        let v = e.vectors.column(0);
        let overlap: C64 = v
            .iter()
            .zip(PureState::plus().amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-14);
        let e = hermitian_eigen(&CMatrix::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
    }

    #[test]
    fn eigen_reconstructs_complex_hermitian() {
        let m = CMatrix::from_entries(vec![
            re(1.0),
            c(0.2, 0.5),
            c(-0.1, 0.0),
            c(0.2, -0.5),
            re(-0.3),
            c(0.0, 0.7),
            c(-0.1, 0.0),
            c(0.0, -0.7),
            re(0.4),
        ])
        .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = CMatrix::from_real(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(Error::NumericContract(_))));
    }

    #[test]
    fn psd_sqrt_examples() {
        assert!(psd_sqrt(&CMatrix::identity(2))
            .unwrap()
            .approx_eq(&CMatrix::identity(2), 1e-15));
        assert!(psd_sqrt(&CMatrix::diag(&[4.0, 0.0]))
            .unwrap()
            .approx_eq(&CMatrix::diag(&[2.0, 0.0]), 1e-15));
        let proj = PureState::plus().projector();
        assert!(psd_sqrt(&proj).unwrap().approx_eq(&proj, 1e-12));
    }

    #[test]
    fn psd_sqrt_rejects_negative_spectrum() {
        let m = CMatrix::diag(&[1.0, -1e-3]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NumericContract(_))));
        // Tiny negativity is clipped.
        let m = CMatrix::diag(&[1.0, -1e-10]);
        assert!(psd_sqrt(&m).unwrap().approx_eq(&CMatrix::diag(&[1.0, 0.0]), 1e-15));
    }

    #[test]
    fn density_matrix_contract() {
        assert!(DensityMatrix::new(CMatrix::diag(&[0.5, 0.5])).is_ok());
        assert!(DensityMatrix::new(CMatrix::diag(&[0.6, 0.5])).is_err());
        assert!(DensityMatrix::new(CMatrix::diag(&[1.2, -0.2])).is_err());
        assert!(DensityMatrix::new(CMatrix::from_real(&[0.5, 0.5, 0.0, 0.5]).unwrap()).is_err());
    }

    #[test]
    fn bloch_round_trip() {
        let v = [0.3, -0.4, 0.5];
        let rho = DensityMatrix::from_bloch(v).unwrap();
        let w = rho.bloch().unwrap();
        for k in 0..3 {
            assert!((v[k] - w[k]).abs() < 1e-15);
        }
        assert!(DensityMatrix::from_bloch([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn pure_state_normalization() {
        assert!(PureState::new(vec![re(1.0), re(1.0)]).is_err());
        let s = PureState::normalized(vec![re(3.0), c(0.0, 4.0)]).unwrap();
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!(PureState::normalized(vec![re(0.0)]).is_err());
    }
}
