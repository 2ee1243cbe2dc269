use proptest::prelude::*;
use std::f64::consts::PI;
use wh_embed::numerics::{acos, chebyshev_t, gamma_fn, MediumConfig};
use wh_embed::oracles::calibrate;
use wh_embed::C64;

#[test]
fn gamma_at_third_arguments() {
    // Γ(1/3)Γ(2/3) = 2π/√3 and Γ(x+1) = xΓ(x)
    let g13 = gamma_fn(1.0 / 3.0);
    assert!((g13 * gamma_fn(2.0 / 3.0) - 2.0 * PI / 3f64.sqrt()).abs() < 1e-14 * g13);
    assert!((gamma_fn(-1.0 / 3.0) * (-1.0 / 3.0) - gamma_fn(2.0 / 3.0)).abs() < 1e-14);
    assert!((gamma_fn(-2.0 / 3.0) * (-2.0 / 3.0) - g13).abs() < 1e-14 * g13);
    assert!((gamma_fn(-4.0 / 3.0) * (-4.0 / 3.0) - gamma_fn(-1.0 / 3.0)).abs() < 1e-14 * 5.0);
}

proptest! {
    #[test]
    fn acos_reflection(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(im.abs() > 1e-9);
        let z = C64::new(re, im);
        prop_assert!((acos(-z) - (PI - acos(z))).norm() < 1e-13);
        prop_assert!((acos(z).cos() - z).norm() < 1e-13 * z.norm().max(1.0));
    }

    #[test]
    fn continued_gamma_in_strip(re in -10.0f64..10.0, f in -0.99f64..0.99) {
        let m = MediumConfig::new(1.0, 0.02).unwrap();
        let z = C64::new(re, f * 0.02);
        prop_assert!((m.gamma(z) - m.gamma_continued(z)).norm() < 1e-13 * m.gamma(z).norm().max(1.0));
    }

    #[test]
    fn chebyshev_of_cosine(t in 0.0f64..PI, n in 0usize..12) {
        prop_assert!((chebyshev_t(n, C64::new(t.cos(), 0.0)).re - (n as f64 * t).cos()).abs() < 1e-13);
    }

    #[test]
    fn calibration_recovers_scaling(re in -3.0f64..3.0, im in -3.0f64..3.0, n in 100usize..300) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let s = C64::new(re, im);
        let r: Vec<C64> = (0..n).map(|j| C64::new(1.0 + j as f64, (j as f64).sin())).collect();
        let c: Vec<C64> = r.iter().map(|v| v * s).collect();
        let cal = calibrate(&r, &c, &vec![true; n], "all").unwrap();
        prop_assert!((cal.constant - s).norm() < 1e-14 * s.norm());
        prop_assert!(cal.max_ratio_deviation < 1e-14);
    }
}
