//! Classical diffraction coefficients used as independent references, and
//! the ratio calibration that absorbs their normalization.

use crate::error::{Result, WhError};
use crate::C64;
use serde::Serialize;
use std::f64::consts::PI;

/// Angular distance below which a direction counts as an optical boundary.
pub const OPTICAL_BOUNDARY_GAP: f64 = 1e-6;

/// Calibrations need at least this many unmasked samples.
pub const MIN_CALIBRATION_SAMPLES: usize = 100;

fn check_boundary(s: f64, period: f64) -> Result<()> {
    // distance of s from π modulo `period`
    let d = (s - PI).rem_euclid(period);
    if d.min(period - d) < OPTICAL_BOUNDARY_GAP {
        return Err(WhError::OpticalBoundary);
    }
    Ok(())
}

/// Dirichlet half-plane diffraction coefficient in secant-difference form,
/// `sec((θ−θi)/2) − sec((θ+θi)/2)`.
///
/// The physical far-field amplitude carries a further factor
/// `−e^{iπ/4}/(2√(2πk))` that is omitted here.
pub fn sommerfeld_halfplane(theta: f64, theta_i: f64) -> Result<C64> {
    check_boundary(theta - theta_i, 2.0 * PI)?;
    check_boundary(theta + theta_i, 2.0 * PI)?;
    let d = 1.0 / (0.5 * (theta - theta_i)).cos() - 1.0 / (0.5 * (theta + theta_i)).cos();
    Ok(C64::new(d, 0.0))
}

/// Exterior-angle parameter of the right-angled wedge.
pub const WEDGE_N: f64 = 1.5;

/// Keller's Dirichlet wedge coefficient for `n = 3/2`:
/// `(sin(π/n)/n)·[1/(cos(π/n) − cos((θ−θi)/n)) − 1/(cos(π/n) − cos((θ+θi)/n))]`.
pub fn gtd_wedge(theta: f64, theta_i: f64) -> Result<C64> {
    let n = WEDGE_N;
    let period = 2.0 * PI * n;
    for s in [theta - theta_i, theta_i - theta, theta + theta_i, -(theta + theta_i)] {
        check_boundary(s, period)?;
    }
    let c = (PI / n).cos();
    let d = (PI / n).sin() / n * (1.0 / (c - ((theta - theta_i) / n).cos()) - 1.0 / (c - ((theta + theta_i) / n).cos()));
    Ok(C64::new(d, 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationResult {
    /// Mean of `candidate/reference` over the mask.
    pub constant: C64,
    /// `max |ratio/constant − 1|` over the mask.
    pub max_ratio_deviation: f64,
    pub sample_count: usize,
    pub mask: String,
}

/// Fits one complex constant with `candidate ≈ constant·reference`.
pub fn calibrate(reference: &[C64], candidate: &[C64], mask: &[bool], mask_description: &str) -> Result<CalibrationResult> {
    if reference.len() != candidate.len() || reference.len() != mask.len() {
        return Err(WhError::InvalidInput(format!(
            "misaligned grids: {} reference, {} candidate, {} mask",
            reference.len(),
            candidate.len(),
            mask.len()
        )));
    }
    let ratios: Vec<C64> = reference
        .iter()
        .zip(candidate)
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|((r, c), _)| c / r)
        .collect();
    if ratios.is_empty() {
        return Err(WhError::EmptyMask);
    }
    if ratios.len() < MIN_CALIBRATION_SAMPLES {
        return Err(WhError::InvalidInput(format!(
            "calibration needs at least {MIN_CALIBRATION_SAMPLES} samples, mask keeps {}",
            ratios.len()
        )));
    }
    let constant = ratios.iter().sum::<C64>() / ratios.len() as f64;
    Ok(CalibrationResult {
        constant,
        max_ratio_deviation: ratio_deviation(&ratios, constant),
        sample_count: ratios.len(),
        mask: mask_description.to_string(),
    })
}

/// `max |ratio/constant − 1|`; NaN ratios propagate as an infinite deviation.
pub fn ratio_deviation(ratios: &[C64], constant: C64) -> f64 {
    ratios
        .iter()
        .map(|r| {
            let d = (r / constant - 1.0).norm();
            if d.is_nan() {
                f64::INFINITY
            } else {
                d
            }
        })
        .fold(0.0, f64::max)
}

/// `n` equispaced angles covering `[lo, hi]` inclusive.
pub fn angle_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        angle_grid(5f64.to_radians(), 175f64.to_radians(), 15)
    }

    #[test]
    fn sommerfeld_symmetric_and_zero_on_face() {
        for &a in &grid() {
            for &b in &grid() {
                if let (Ok(x), Ok(y)) = (sommerfeld_halfplane(a, b), sommerfeld_halfplane(b, a)) {
                    assert!((x - y).norm() < 1e-14 * x.norm().max(1.0));
                }
            }
            assert!(sommerfeld_halfplane(0.0, a).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn sommerfeld_rejects_reflection_direction() {
        assert!(matches!(sommerfeld_halfplane(PI - 1.0, 1.0), Err(WhError::OpticalBoundary)));
        assert!(sommerfeld_halfplane(PI - 1.0 + 1e-5, 1.0).is_ok());
    }

    #[test]
    fn gtd_symmetric_and_zero_on_faces() {
        let g = angle_grid(0.1, 4.6, 13);
        for &a in &g {
            for &b in &g {
                if let (Ok(x), Ok(y)) = (gtd_wedge(a, b), gtd_wedge(b, a)) {
                    assert!((x - y).norm() < 1e-13 * x.norm().max(1.0));
                }
            }
            if let Ok(v) = gtd_wedge(0.0, a) {
                assert!(v.norm() < 1e-14);
            }
            // cancellation between the two terms grows near θi = π/2
            if let Ok(v) = gtd_wedge(1.5 * PI, a) {
                assert!(v.norm() < 1e-11, "{a} {v}");
            }
        }
    }

    #[test]
    fn gtd_boundaries() {
        assert!(matches!(gtd_wedge(2.0, PI - 2.0), Err(WhError::OpticalBoundary)));
        assert!(matches!(gtd_wedge(0.5, 0.5 + PI), Err(WhError::OpticalBoundary)));
        assert!(matches!(gtd_wedge(1.2, 2.0 * PI - 1.2), Err(WhError::OpticalBoundary)));
    }

    fn samples(n: usize) -> Vec<C64> {
        (0..n).map(|j| C64::new(1.0 + j as f64, 0.5 - 0.01 * j as f64)).collect()
    }

    #[test]
    fn identical_grids_calibrate_to_one() {
        let r = samples(120);
        let c = calibrate(&r, &r, &[true; 120], "all").unwrap();
        assert_eq!(c.constant, C64::new(1.0, 0.0));
        assert_eq!(c.max_ratio_deviation, 0.0);
        assert_eq!(c.sample_count, 120);
    }

    #[test]
    fn exact_scaling_recovered() {
        let r = samples(150);
        let s = C64::new(0.0, 2.0);
        let cand: Vec<C64> = r.iter().map(|v| s * v).collect();
        let c = calibrate(&r, &cand, &[true; 150], "all").unwrap();
        assert!((c.constant - s).norm() < 1e-15);
        assert!(c.max_ratio_deviation < 1e-15);
    }

    #[test]
    fn masked_points_are_ignored() {
        let mut r = samples(130);
        let cand = r.clone();
        r[7] = C64::new(0.0, 0.0);
        let mut mask = vec![true; 130];
        mask[7] = false;
        let c = calibrate(&r, &cand, &mask, "one excluded").unwrap();
        assert_eq!(c.max_ratio_deviation, 0.0);
        assert_eq!(c.sample_count, 129);
    }

    #[test]
    fn empty_mask_rejected() {
        let r = samples(100);
        assert!(matches!(calibrate(&r, &r, &[false; 100], "none"), Err(WhError::EmptyMask)));
    }
}
