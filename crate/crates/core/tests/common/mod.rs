#![allow(dead_code)]

use num_complex::Complex64 as C64;
use pcmem_core::matcore::{hermitian_eigen, CMatrix, DensityMatrix};
use pcmem_core::PhaseCovParams;
use proptest::prelude::*;

pub fn complex_entries(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

pub fn any_matrix(dim: usize) -> impl Strategy<Value = CMatrix> {
    complex_entries(dim * dim).prop_map(|e| CMatrix::from_entries(e).unwrap())
}

pub fn hermitian(dim: usize) -> impl Strategy<Value = CMatrix> {
    any_matrix(dim).prop_map(|m| m.hermitian_part())
}

/// `GG†` normalized; full rank almost surely.
pub fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    any_matrix(dim).prop_map(|g| {
        let m = &g * &g.dagger();
        let tr = m.trace().re;
        DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
    })
}

/// Rank-deficient states are included: `G` has `rank` columns.
pub fn density_of_rank(dim: usize, rank: usize) -> impl Strategy<Value = DensityMatrix> {
    any_matrix(dim).prop_map(move |g| {
        let mut g = g;
        for r in 0..dim {
            for c in rank..dim {
                g.set(r, c, C64::new(0.0, 0.0));
            }
        }
        let m = &g * &g.dagger();
        let tr = m.trace().re;
        DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
    })
}

pub fn psd(dim: usize) -> impl Strategy<Value = CMatrix> {
    any_matrix(dim).prop_map(|g| &g * &g.dagger())
}

/// Uniform over the CPTP region in the `(λ_z, λ_*, λ)` fractions.
pub fn valid_params() -> impl Strategy<Value = PhaseCovParams> {
    (-1.0f64..=1.0, -1.0f64..=1.0, -1.0f64..=1.0).prop_map(|(z, s, l)| {
        let lambda_z = z;
        let lambda_star = s * (1.0 - lambda_z.abs());
        let bound = 0.5 * ((1.0 + lambda_z).powi(2) - lambda_star * lambda_star).max(0.0).sqrt();
        PhaseCovParams::new(l * bound, lambda_z, lambda_star)
    })
}

/// `V diag(e^{iθ}) V†` from the eigenbasis of a random Hermitian matrix.
pub fn unitary(dim: usize) -> impl Strategy<Value = CMatrix> {
    (
        hermitian(dim),
        prop::collection::vec(0.0f64..std::f64::consts::TAU, dim),
    )
        .prop_map(move |(h, th)| {
            let v = hermitian_eigen(&h).unwrap().vectors;
            let mut d = CMatrix::zeros(dim);
            for (i, t) in th.iter().enumerate() {
                d.set(i, i, C64::from_polar(1.0, *t));
            }
            &(&v * &d) * &v.dagger()
        })
}
