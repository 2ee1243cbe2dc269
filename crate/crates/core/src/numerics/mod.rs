//! Branch-correct elementary functions, quadrature, Cauchy splitting and
//! small dense linear algebra.

mod bessel;
mod cauchy;
mod linalg;
mod quadrature;
mod spectral;

pub use bessel::{bessel_j0, helmholtz_green, helmholtz_green_smooth};
pub use cauchy::{cauchy_split, ContourSpec, CauchySplitter, QuadratureScheme, Side, SplitValue};
pub use linalg::{condition_number, dense_solve, dense_svd};
pub use quadrature::{gauss_chebyshev, gauss_legendre};
pub use spectral::{HalfPlane, SpectralFunction};

use crate::error::{Result, WhError};
use crate::C64;
use std::f64::consts::PI;

/// Wavenumber with optional limiting absorption.
///
/// The effective wavenumber is `k = k_real + i·k_loss`. Every branch function
/// takes the medium explicitly so that cut placement is shared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumConfig {
    pub k_real: f64,
    pub k_loss: f64,
}

impl MediumConfig {
    pub fn new(k_real: f64, k_loss: f64) -> Result<Self> {
        if !(k_real.is_finite() && k_real > 0.0) {
            return Err(WhError::InvalidInput(format!("k_real must be positive, got {k_real}")));
        }
        if !(k_loss.is_finite() && k_loss >= 0.0) {
            return Err(WhError::InvalidInput(format!("k_loss must be nonnegative, got {k_loss}")));
        }
        Ok(Self { k_real, k_loss })
    }

    /// Lossless medium.
    pub fn lossless(k_real: f64) -> Result<Self> {
        Self::new(k_real, 0.0)
    }

    /// Medium with `k_loss = ratio·k_real`.
    pub fn with_relative_loss(k_real: f64, ratio: f64) -> Result<Self> {
        Self::new(k_real, ratio * k_real)
    }

    pub fn k(&self) -> C64 {
        C64::new(self.k_real, self.k_loss)
    }

    /// `γ(z) = √(k−z)·√(k+z)` with principal roots.
    pub fn gamma(&self, z: C64) -> C64 {
        let k = self.k();
        (k - z).sqrt() * (k + z).sqrt()
    }

    /// `γ` with its cuts turned to run vertically, upward from `k` and
    /// downward from `−k`.
    ///
    /// Equals [`gamma`](Self::gamma) on the real axis and in the strip
    /// `|Im z| < Im k`; elsewhere it is the continuation from that strip,
    /// which is what a Wiener–Hopf kernel must use off the contour.
    pub fn gamma_continued(&self, z: C64) -> C64 {
        let k = self.k();
        let mi = C64::new(0.0, -1.0);
        C64::i() * (mi * (k - z)).sqrt() * (mi * (k + z)).sqrt()
    }

    /// Principal `arccos(z/k)`, exactly 0 and π at `z = ±k`.
    pub fn theta(&self, z: C64) -> C64 {
        let k = self.k();
        if z == k {
            return C64::new(0.0, 0.0);
        }
        if z == -k {
            return C64::new(PI, 0.0);
        }
        acos(z / k)
    }

    /// `k·sin θ(z)`, the form of `γ` used inside ratios of `θ`-functions.
    pub fn gamma_theta(&self, z: C64) -> C64 {
        self.k() * self.theta(z).sin()
    }
}

/// `γ(z)` with NaN inputs rejected.
pub fn gamma_branch(z: C64, cfg: &MediumConfig) -> Result<C64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(WhError::InvalidInput("NaN spectral point".into()));
    }
    Ok(cfg.gamma(z))
}

/// `θ(z) = arccos(z/k)` on the principal branch.
pub fn theta_branch(z: C64, cfg: &MediumConfig) -> Result<C64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(WhError::InvalidInput("NaN spectral point".into()));
    }
    Ok(cfg.theta(z))
}

/// Principal complex arccosine.
///
/// Uses Kahan's formulation, which keeps full accuracy for large `|z|` and
/// satisfies `acos(-z) = π - acos(z)` off the cuts.
pub fn acos(z: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    let s1 = (one - z).sqrt();
    let s2 = (one + z).sqrt();
    let re = 2.0 * s1.re.atan2(s2.re);
    let im = (s2.conj() * s1).im.asinh();
    C64::new(re, im)
}

/// Chebyshev polynomial of the first kind by the three-term recurrence.
pub fn chebyshev_t(n: usize, x: C64) -> C64 {
    let mut t0 = C64::new(1.0, 0.0);
    if n == 0 {
        return t0;
    }
    let mut t1 = x;
    for _ in 1..n {
        let t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    t1
}

/// Gamma function for real arguments.
pub fn gamma_fn(x: f64) -> f64 {
    libm::tgamma(x)
}
