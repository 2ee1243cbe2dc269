use crate::C64;
use std::f64::consts::{LN_2, PI};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

/// Outgoing free-space Green's function `(i/4)·H₀⁽¹⁾(x)` for `x > 0`.
pub fn helmholtz_green(x: f64) -> C64 {
    C64::new(-0.25 * libm::y0(x), 0.25 * libm::j0(x))
}

/// Smooth remainder `(i/4)·H₀⁽¹⁾(x) + J₀(x)·ln(x)/(2π)`, an entire function of `x²`.
///
/// A power series is used below `x = 2` where the logarithms would cancel.
pub fn helmholtz_green_smooth(x: f64) -> C64 {
    let x = x.abs();
    if x >= 2.0 {
        return helmholtz_green(x) + C64::new(libm::j0(x) * x.ln() / (2.0 * PI), 0.0);
    }
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut j0 = 1.0;
    let mut tail = 0.0;
    for m in 1..40 {
        let mf = m as f64;
        term *= -q / (mf * mf);
        harmonic += 1.0 / mf;
        j0 += term;
        // (−1)^{m+1} H_m q^m/(m!)² = −H_m·term
        tail -= harmonic * term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    C64::new((LN_2 - EULER_GAMMA) / (2.0 * PI) * j0 - tail / (2.0 * PI), 0.25 * j0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_part_continuous_across_switch() {
        let lo = helmholtz_green_smooth(2.0 - 1e-12);
        let hi = helmholtz_green_smooth(2.0);
        assert!((lo - hi).norm() < 1e-12);
        for &x in &[0.5, 1.0, 1.7] {
            let direct = helmholtz_green(x) + C64::new(libm::j0(x) * x.ln() / (2.0 * PI), 0.0);
            assert!((helmholtz_green_smooth(x) - direct).norm() < 1e-13, "{x}");
        }
    }

    #[test]
    fn smooth_part_at_origin() {
        let b = helmholtz_green_smooth(0.0);
        assert!((b.re - (LN_2 - EULER_GAMMA) / (2.0 * PI)).abs() < 1e-16);
        assert!((b.im - 0.25).abs() < 1e-16);
    }
}
