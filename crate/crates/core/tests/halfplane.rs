use proptest::prelude::*;
use std::f64::consts::PI;
use wh_embed::halfplane::{self, HalfPlaneSolution, SOMMERFELD_CONSTANT};
use wh_embed::oracles::sommerfeld_halfplane;
use wh_embed::{WhError, C64};

fn hp() -> HalfPlaneSolution {
    HalfPlaneSolution::new(halfplane::default_medium())
}

#[test]
fn suite_passes() {
    let r = halfplane::verify_suite(60, 1e-12).unwrap();
    for c in &r.checks {
        assert!(c.passed, "{}: {:e} vs {:e}", c.name, c.residual, c.tolerance);
    }
}

#[test]
fn edge_directivity_at_backscatter() {
    // S₁(π) = −i^{3/2}·√(2k) from V⁺(k) = −√i·√(2k)
    let h = hp();
    let k = h.medium.k();
    let expected = -C64::i().powf(1.5) * (2.0 * k).sqrt();
    assert!((h.edge_green_directivity(PI) - expected).norm() < 1e-13);
}

#[test]
fn edge_directivity_is_half_angle_sine() {
    let h = hp();
    let c0 = h.edge_green_directivity(1.0) / 0.5f64.sin();
    for j in 1..40 {
        let t = PI * j as f64 / 40.0;
        let c = h.edge_green_directivity(t) / (0.5 * t).sin();
        assert!((c - c0).norm() < 1e-13 * c0.norm());
    }
}

#[test]
fn reflection_direction_rejected() {
    assert!(matches!(hp().directivity(PI - 2.0, 2.0), Err(WhError::OpticalBoundary)));
}

#[test]
fn numeric_solution_at_several_incidences() {
    let h = hp();
    for ti in [1.7, 3.0] {
        let (err, _) = h.numeric_max_error(ti, C64::i(), &h.default_contour(ti, 2000)).unwrap();
        assert!(err < 1e-6, "theta_i = {ti}: {err:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reciprocity(t in 0.05f64..3.09, ti in 0.05f64..3.09) {
        prop_assume!((t + ti - PI).abs() > 1e-3);
        let h = hp();
        let a = h.directivity(t, ti).unwrap();
        let b = h.directivity(ti, t).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn ratio_to_sommerfeld_is_fixed(t in 0.05f64..3.09, ti in 0.05f64..3.09) {
        prop_assume!((t + ti - PI).abs() > 1e-3 && (t - ti).abs() > 1e-3);
        let h = hp();
        let ratio = h.directivity(t, ti).unwrap() / sommerfeld_halfplane(t, ti).unwrap();
        prop_assert!((ratio - SOMMERFELD_CONSTANT).norm() < 1e-10);
    }

    #[test]
    fn vanishes_on_face(ti in 0.05f64..3.09) {
        prop_assert!(hp().directivity(0.0, ti).unwrap().norm() < 1e-14);
    }
}
