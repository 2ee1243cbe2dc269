use crate::C64;
use std::fmt;
use std::sync::Arc;

/// Half-plane in which a spectral function is analytic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
    Entire,
}

/// A complex function of the spectral variable together with its declared
/// domain of analyticity and growth `~ C·z^p` at infinity.
#[derive(Clone)]
pub struct SpectralFunction {
    f: Arc<dyn Fn(C64) -> C64 + Send + Sync>,
    pub half_plane: HalfPlane,
    pub growth_exponent: f64,
}

impl fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralFunction")
            .field("half_plane", &self.half_plane)
            .field("growth_exponent", &self.growth_exponent)
            .finish()
    }
}

impl SpectralFunction {
    pub fn new<F>(f: F, half_plane: HalfPlane, growth_exponent: f64) -> Self
    where
        F: Fn(C64) -> C64 + Send + Sync + 'static,
    {
        Self { f: Arc::new(f), half_plane, growth_exponent }
    }

    #[inline]
    pub fn eval(&self, z: C64) -> C64 {
        (self.f)(z)
    }

    /// Log-log slope of `|f|` between `r` and `2r` along direction `dir`.
    pub fn sampled_growth(&self, r: f64, dir: C64) -> f64 {
        let d = dir / dir.norm();
        let a = self.eval(d * r).norm();
        let b = self.eval(d * (2.0 * r)).norm();
        (b / a).ln() / 2f64.ln()
    }

    /// `a·self + b·other`, keeping the weaker of the two declarations.
    pub fn combine(&self, a: C64, other: &SpectralFunction, b: C64) -> SpectralFunction {
        let f = self.f.clone();
        let g = other.f.clone();
        let half_plane = if self.half_plane == other.half_plane {
            self.half_plane
        } else if self.half_plane == HalfPlane::Entire {
            other.half_plane
        } else {
            self.half_plane
        };
        SpectralFunction {
            f: Arc::new(move |z| a * f(z) + b * g(z)),
            half_plane,
            growth_exponent: self.growth_exponent.max(other.growth_exponent),
        }
    }
}
