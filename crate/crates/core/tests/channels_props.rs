mod common;

use std::sync::Arc;

use common::*;
use pcmem_core::channels::{
    apply_direct, apply_direct_matrix, cptp_check, family_kraus, invariant_state, is_unital, kraus_from_params,
    lindblad_rates, phase_rotation, transpose_channel,
};
use pcmem_core::matcore::{pauli, CMatrix, DensityMatrix};
use pcmem_core::{ChannelFamily, CustomFamily, PhaseCovParams};
use proptest::prelude::*;

const GRID: usize = 2001;

fn grid_times(t_max: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| k as f64 * t_max / (n - 1) as f64)
}

fn named(kind: &str, p: f64) -> ChannelFamily {
    match kind {
        "dcp" => ChannelFamily::DepolarizingCpDiv { omega: p },
        "eternal" => ChannelFamily::EternalUnital { nu: p },
        "gad" => ChannelFamily::GadSwitchable { alpha: p },
        _ => ChannelFamily::NonUnitalEternal { mu: p },
    }
}

/// Same time dependence as `f`, but the rates come from finite differences.
fn as_custom(f: &ChannelFamily) -> ChannelFamily {
    let (a, b, c) = (f.clone(), f.clone(), f.clone());
    ChannelFamily::Custom(CustomFamily {
        label: f.id().into(),
        lambda: Arc::new(move |t| a.raw_params_at(t).unwrap().lambda),
        lambda_z: Arc::new(move |t| b.raw_params_at(t).unwrap().lambda_z),
        lambda_star: Arc::new(move |t| c.raw_params_at(t).unwrap().lambda_star),
    })
}

fn figure_families() -> Vec<ChannelFamily> {
    let mut v = Vec::new();
    for w in [0.5, 1.0, 3.0, 9.0] {
        v.push(named("dcp", w));
    }
    for n in [1.0, 2.0, 4.0, 9.0] {
        v.push(named("eternal", n));
    }
    for a in [1.0, 2.0, 4.0, 8.0] {
        v.push(named("gad", a));
    }
    for m in [0.0, 0.4, 0.6, 0.8, -0.6, 0.99] {
        v.push(named("nu", m));
    }
    v
}

proptest! {
    #[test]
    fn kraus_action_matches_direct(p in valid_params(), rho in density(2)) {
        let k = kraus_from_params(&p).unwrap();
        prop_assert!(k.completeness_defect() <= 1e-11);
        let via_kraus = k.apply(&rho).unwrap();
        let direct = apply_direct(&p, &rho).unwrap();
        prop_assert!(via_kraus.matrix().max_abs_diff(direct.matrix()) <= 1e-11);
    }

    #[test]
    fn phase_covariance(p in valid_params(), rho in density(2), phi in 0.0f64..std::f64::consts::TAU) {
        let u = phase_rotation(phi);
        let rotated = DensityMatrix::new(u.sandwich(rho.matrix())).unwrap();
        let lhs = apply_direct(&p, &rotated).unwrap();
        let rhs = u.sandwich(apply_direct(&p, &rho).unwrap().matrix());
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) <= 1e-11);
        let k = kraus_from_params(&p).unwrap();
        let lhs_k = k.apply_matrix(rotated.matrix());
        let rhs_k = u.sandwich(&k.apply_matrix(rho.matrix()));
        prop_assert!(lhs_k.max_abs_diff(&rhs_k) <= 1e-11);
    }

    #[test]
    fn eigen_relations(p in valid_params()) {
        let k = kraus_from_params(&p).unwrap();
        let checks = [
            (pauli::x(), p.lambda),
            (pauli::y(), p.lambda),
            (pauli::z(), p.lambda_z),
        ];
        for (s, ev) in checks {
            prop_assert!(k.apply_matrix(&s).max_abs_diff(&s.scale_real(ev)) <= 1e-11);
            prop_assert!(apply_direct_matrix(&p, &s).unwrap().max_abs_diff(&s.scale_real(ev)) <= 1e-11);
        }
        let id = CMatrix::identity(2);
        let shifted = &id + &pauli::z().scale_real(p.lambda_star);
        prop_assert!(k.apply_matrix(&id).max_abs_diff(&shifted) <= 1e-11);
    }

    #[test]
    fn unital_transpose_invariance(z in -1.0f64..1.0, l in -1.0f64..1.0, rho in density(2)) {
        let p = PhaseCovParams::new(0.5 * (1.0 + z) * l, z, 0.0);
        let k = kraus_from_params(&p).unwrap();
        prop_assert!(is_unital(&k));
        let kt = transpose_channel(&k);
        prop_assert!(k.apply_matrix(rho.matrix()).max_abs_diff(&kt.apply_matrix(rho.matrix())) <= 1e-11);
    }

    #[test]
    fn invariant_state_is_fixed(p in valid_params()) {
        prop_assume!((1.0 - p.lambda_z).abs() > 1e-3);
        let fixed = invariant_state(&p).unwrap();
        let image = apply_direct(&p, &fixed).unwrap();
        prop_assert!(image.matrix().max_abs_diff(fixed.matrix()) <= 1e-11);
    }
}

#[test]
fn named_families_are_cptp_on_grid() {
    for f in figure_families() {
        for t in grid_times(20.0, GRID) {
            let p = f.params_at(t).unwrap();
            assert!(
                cptp_check(&p).is_valid(),
                "{} {:?} invalid at t={t}",
                f.id(),
                f.parameter()
            );
            let k = family_kraus(&f, t).unwrap();
            assert!(k.completeness_defect() <= 1e-11);
        }
    }
}

#[test]
fn out_of_range_families_fail_somewhere() {
    for f in [named("dcp", 0.49), named("eternal", 0.9)] {
        assert!(f.validate().is_err());
        let any_invalid = grid_times(20.0, GRID).any(|t| !cptp_check(&f.raw_params_at(t).unwrap()).is_valid());
        assert!(any_invalid, "{} {:?} never flagged", f.id(), f.parameter());
    }
}

#[test]
fn finite_difference_rates_match_closed_forms() {
    for f in figure_families() {
        let fd = as_custom(&f);
        for t in grid_times(20.0, 201).skip(1) {
            let exact = lindblad_rates(&f, t).unwrap();
            let approx = lindblad_rates(&fd, t).unwrap();
            for (a, b) in [
                (exact.gamma_plus, approx.gamma_plus),
                (exact.gamma_minus, approx.gamma_minus),
                (exact.gamma_z, approx.gamma_z),
            ] {
                assert!((a - b).abs() < 1e-5, "{} {:?} t={t}: {a} vs {b}", f.id(), f.parameter());
            }
        }
    }
}

#[test]
fn rate_sign_structure() {
    for mu in [0.0, 0.4, 0.6, 0.8, -0.5, 0.99] {
        for t in grid_times(20.0, GRID).skip(1) {
            let r = lindblad_rates(&named("nu", mu), t).unwrap();
            assert!(r.gamma_z < 0.0, "μ={mu} t={t} γ_z={}", r.gamma_z);
        }
    }
    for alpha in [0.3, 1.0, 2.0, 4.0, 8.0] {
        for t in grid_times(20.0, GRID) {
            let r = lindblad_rates(&named("gad", alpha), t).unwrap();
            assert!(r.gamma_plus >= 0.0 && r.gamma_minus >= 0.0 && r.gamma_z >= 0.0);
        }
    }
}

#[test]
fn non_unital_gad_is_flagged() {
    let f = named("gad", 1.0);
    assert!(is_unital(&family_kraus(&f, 0.0).unwrap()));
    assert!(!is_unital(&family_kraus(&f, 1.0).unwrap()));
}

#[test]
fn custom_rates_near_zero_use_one_sided_differences() {
    let f = as_custom(&named("eternal", 2.0));
    let exact = lindblad_rates(&named("eternal", 2.0), 0.0).unwrap();
    let approx = lindblad_rates(&f, 0.0).unwrap();
    assert!((exact.gamma_z - approx.gamma_z).abs() < 1e-5);
}

#[test]
fn kraus_keeps_relative_accuracy_for_tiny_lambda() {
    for lambda_star in [-0.5, 0.5] {
        let p = PhaseCovParams::new(1e-9, 0.1, lambda_star);
        let k = kraus_from_params(&p).unwrap();
        let plus = DensityMatrix::from_pure(&pcmem_core::PureState::plus());
        let x = k.apply(&plus).unwrap().bloch().unwrap()[0];
        assert!((x / 1e-9 - 1.0).abs() < 1e-6, "λ_*={lambda_star}: x={x}");
    }
}
