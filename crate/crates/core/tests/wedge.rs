use nalgebra::Matrix2;
use proptest::prelude::*;
use std::f64::consts::PI;
use wh_embed::wedge::{self, DkFactorization, MappedScalarData, NormalMatrixTilde, WedgeKernel};
use wh_embed::{WhError, C64};

fn maxabs(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[test]
fn suite_passes() {
    let r = wedge::verify_all(wedge::default_medium()).unwrap();
    for c in &r.checks {
        assert!(c.passed, "{}: {:e} vs {:e}", c.name, c.residual, c.tolerance);
    }
}

#[test]
fn det_constant_value() {
    let x = NormalMatrixTilde::new(wedge::default_medium());
    let z = C64::new(0.4, -0.3);
    assert!((x.x_minus(z).determinant() / z - C64::new(0.0, -9.0 * PI)).norm() < 1e-12);
}

#[test]
fn frozen_ratios() {
    let t = 1.1;
    let ti = 2.2;
    let closed = wedge::closed_form_directivity(t, ti);
    let gtd = wh_embed::oracles::gtd_wedge(t, ti).unwrap();
    assert!((closed / gtd - C64::i()).norm() < 1e-12);
    assert!((wedge::mapped_directivity(t, ti).unwrap() / closed - 2.0).norm() < 1e-12);
}

#[test]
fn frozen_plane_wave_coefficients() {
    let p = wedge::plane_wave_embed_wedge(
        100f64.to_radians(),
        150f64.to_radians(),
        125f64.to_radians(),
        &[1.0, 2.0],
    )
    .unwrap();
    assert!((p.b_c_system[0] - 0.550_112_036_885_8).norm() < 1e-12);
    assert!((p.b_c_system[1] - 0.495_646_610_611_8).norm() < 1e-12);
}

#[test]
fn mapped_needs_obtuse_incidence() {
    assert!(matches!(MappedScalarData::new(1.0), Err(WhError::InvalidInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_determinant(re in -5.0f64..5.0, im in -2.0f64..2.0) {
        let k = WedgeKernel::new(wedge::default_medium()).kernel(C64::new(re, im));
        prop_assert!((k.determinant() + 1.0).norm() < 1e-14);
    }

    #[test]
    fn factorization_off_axis(re in -4.0f64..4.0, im in -0.005f64..0.005) {
        let m = wedge::default_medium();
        let z = C64::new(re, im);
        prop_assume!((z - m.k()).norm() > 0.05 && (z + m.k()).norm() > 0.05);
        let dk = DkFactorization::new(m);
        let k = WedgeKernel::new(m).kernel(z);
        prop_assert!(maxabs(&(k - dk.left(z) * dk.right(z))) < 1e-10 * maxabs(&k));
    }

    #[test]
    fn normal_matrix_relation(x in -20.0f64..20.0) {
        let m = wedge::default_medium();
        let t = C64::new(x, -0.5 * m.k_loss);
        let n = NormalMatrixTilde::new(m);
        let k = WedgeKernel::new(m).kernel(t);
        let xm = n.x_minus(t);
        prop_assert!(maxabs(&(xm - k * n.x_plus(t))) < 1e-10 * maxabs(&xm));
    }

    #[test]
    fn closed_form_reciprocity(t in 0.01f64..4.7, ti in 0.01f64..4.7) {
        let a = wedge::closed_form_directivity(t, ti);
        let b = wedge::closed_form_directivity(ti, t);
        prop_assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
    }

    #[test]
    fn canonical_matches_closed_form(t in 0.05f64..4.65, ti in 0.05f64..4.65) {
        prop_assume!((t.cos().powi(2) - ti.cos().powi(2)).abs() > 0.05);
        let n = NormalMatrixTilde::new(wedge::default_medium());
        let a = n.canonical_directivity(t, ti);
        let b = wedge::closed_form_directivity(t, ti);
        prop_assert!((a - b).norm() < 1e-10 * b.norm().max(1.0));
    }

    #[test]
    fn mapped_over_closed_is_two(t in 0.05f64..4.65, ti in 1.6f64..3.1) {
        prop_assume!(((2.0 * t).cos() - (2.0 * ti).cos()).abs() > 0.05);
        let ratio = wedge::mapped_directivity(t, ti).unwrap() / wedge::closed_form_directivity(t, ti);
        prop_assert!((ratio - 2.0).norm() < 1e-10);
    }

    #[test]
    fn wedge_polynomial_in_alpha(ti in 0.1f64..3.0, alpha in 0.0f64..1.0) {
        // Q has the three roots cos²(θi/3 − mπ/3)
        let d = MappedScalarData { theta_i: ti, alpha_in: wedge::alpha_of_psi(ti), residue: wedge::residue(ti) };
        let roots = [0.0, 1.0, 2.0].map(|j: f64| (ti / 3.0 - j * PI / 3.0).cos().powi(2));
        let product = 32.0 * roots.iter().map(|r| alpha - r).product::<f64>();
        prop_assert!((d.q(alpha) - product).abs() < 1e-12);
    }

    #[test]
    fn embedding_reproduces_closed_form(t1 in 1.65f64..3.05, t2 in 1.65f64..3.05, ti in 1.65f64..3.05) {
        prop_assume!((t1 - t2).abs() > 0.1);
        let thetas: Vec<f64> = (1..60).map(|j| 1.5 * PI * j as f64 / 60.0).collect();
        let p = wedge::plane_wave_embed_wedge(t1, t2, ti, &thetas).unwrap();
        prop_assert!(p.report.get("embedding_residual").unwrap().residual < 1e-9);
        prop_assert!(p.report.get("b_systems_agree").unwrap().residual < 1e-9);
    }
}
