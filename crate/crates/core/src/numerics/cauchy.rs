//! Additive splitting `G = G⁺ + G⁻` by Cauchy integrals along a horizontal
//! contour `Im t = −δ`.
//!
//! `G⁺(z) = (1/2πi)∫ G(t)/(t−z) dt` for `z` above the contour and
//! `G⁻(z) = −(1/2πi)∫ G(t)/(t−z) dt` for `z` below it; on the other side each
//! part is continued by `G⁺ = G − G⁻`. The finite part of the contour uses
//! composite 16-point Gauss–Legendre panels clustered near the origin and near
//! caller-supplied singular points; the two tails are replaced by a fitted
//! three-term power law that is integrated in closed form.

use super::quadrature::gauss_legendre;
use super::spectral::SpectralFunction;
use crate::error::{Result, WhError};
use crate::C64;
use std::f64::consts::PI;

const PANEL_ORDER: usize = 16;
const COARSE_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Composite Gauss–Legendre, 16 points per panel, with an embedded
    /// 8-point rule on the same panels for the error estimate.
    CompositeGaussLegendre16,
}

/// Discretization of the indented real line.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    /// The panels cover `[−T, T]`.
    pub truncation: f64,
    /// The contour runs along `Im t = −δ`.
    pub indentation: f64,
    /// Requested node count; rounded up to whole panels.
    pub nodes: usize,
    pub scheme: QuadratureScheme,
    /// Width of the clustering around `t = 0`.
    pub scale: f64,
    /// `(center, width)` pairs: extra clustering near singular points that
    /// sit close to the contour.
    pub refinements: Vec<(f64, f64)>,
    /// Points closer than this to a node are rejected; defaults to `δ`.
    pub hit_radius: Option<f64>,
}

impl ContourSpec {
    pub fn new(truncation: f64, indentation: f64, nodes: usize) -> Self {
        Self {
            truncation,
            indentation,
            nodes,
            scheme: QuadratureScheme::CompositeGaussLegendre16,
            scale: truncation / 40.0,
            refinements: Vec::new(),
            hit_radius: None,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_refinement(mut self, center: f64, width: f64) -> Self {
        self.refinements.push((center, width));
        self
    }

    pub fn with_hit_radius(mut self, r: f64) -> Self {
        self.hit_radius = Some(r);
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(WhError::InvalidInput(m));
        if !(self.truncation.is_finite() && self.truncation > 0.0) {
            return bad(format!("truncation must be positive, got {}", self.truncation));
        }
        if !(self.indentation > 0.0 && self.indentation < self.truncation) {
            return bad(format!("indentation must lie in (0, T), got {}", self.indentation));
        }
        if self.nodes < PANEL_ORDER {
            return bad(format!("at least {PANEL_ORDER} nodes required, got {}", self.nodes));
        }
        if !(self.scale > 0.0) || self.refinements.iter().any(|&(_, w)| !(w > 0.0)) {
            return bad("clustering widths must be positive".into());
        }
        Ok(())
    }

    /// Checks `T > 4·max(|k|, |z_i|)` for the problem scale supplied.
    pub fn validate_against(&self, problem_scale: f64) -> Result<()> {
        self.validate()?;
        if self.truncation <= 4.0 * problem_scale {
            return Err(WhError::InvalidInput(format!(
                "truncation {} must exceed 4x the problem scale {}",
                self.truncation, problem_scale
            )));
        }
        Ok(())
    }

    pub fn panels(&self) -> usize {
        self.nodes.div_ceil(PANEL_ORDER)
    }

    /// Panel breakpoints on `[−T, T]`, equidistributing the density
    /// `1/(|t|+s) + Σ 1/(|t−c|+w) + 1/T`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let t_max = self.truncation;
        let cumulative = |t: f64| {
            let mut r = t.signum() * (t.abs() / self.scale).ln_1p() + t / t_max;
            for &(c, w) in &self.refinements {
                r += (t - c).signum() * ((t - c).abs() / w).ln_1p();
            }
            r
        };
        let n = self.panels();
        let lo = cumulative(-t_max);
        let hi = cumulative(t_max);
        let mut out = Vec::with_capacity(n + 1);
        out.push(-t_max);
        for j in 1..n {
            let level = lo + (hi - lo) * j as f64 / n as f64;
            let (mut a, mut b) = (-t_max, t_max);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if cumulative(m) < level {
                    a = m;
                } else {
                    b = m;
                }
                if b - a <= 1e-15 * t_max {
                    break;
                }
            }
            out.push(0.5 * (a + b));
        }
        out.push(t_max);
        out
    }

    /// Nodes and weights of the composite rule of the given order.
    fn rule(&self, breaks: &[f64], order: usize) -> (Vec<C64>, Vec<f64>) {
        let (x, w) = gauss_legendre(order);
        let shift = C64::new(0.0, -self.indentation);
        let mut nodes = Vec::with_capacity(order * (breaks.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for p in breaks.windows(2) {
            let half = 0.5 * (p[1] - p[0]);
            let mid = 0.5 * (p[1] + p[0]);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(C64::new(mid + half * xi, 0.0) + shift);
                weights.push(half * wi);
            }
        }
        (nodes, weights)
    }

    /// The 16-point nodes, in increasing real part.
    pub fn nodes(&self) -> Vec<C64> {
        self.rule(&self.breakpoints(), PANEL_ORDER).0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// A split value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitValue {
    pub value: C64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone)]
struct TailFit {
    start: C64,
    // (power, coefficient) for the three-term and two-term fits
    fine: Vec<(f64, C64)>,
    coarse: Vec<(f64, C64)>,
    sign: f64,
}

impl TailFit {
    fn new(g: &SpectralFunction, start: C64, decay: f64, sign: f64) -> Self {
        let pts: Vec<C64> = [1.0, 2.0, 4.0].iter().map(|&m| C64::new(start.re * m, start.im)).collect();
        let vals: Vec<C64> = pts.iter().map(|&t| g.eval(t)).collect();
        let powers = [-decay, -decay - 1.0, -decay - 2.0];
        let fine = fit(&pts, &vals, &powers);
        let coarse = fit(&pts[..2], &vals[..2], &powers[..2]);
        Self { start, fine, coarse, sign }
    }

    /// `∫ Σ C_q t^q/(t−z) dt` from `start` outward, via the expansion of
    /// `1/(t−z)` in powers of `z/t`.
    fn integral(terms: &[(f64, C64)], start: C64, sign: f64, z: C64) -> Result<C64> {
        let ratio = z / start;
        if ratio.norm() > 0.5 {
            return Err(WhError::InvalidInput(format!(
                "|z| = {:.3e} too large for the tail expansion at T = {:.3e}",
                z.norm(),
                start.norm()
            )));
        }
        let mut total = C64::new(0.0, 0.0);
        for &(q, c) in terms {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let base = c * start.powf(q);
            let mut zm = C64::new(1.0, 0.0);
            let mut sum = C64::new(0.0, 0.0);
            for m in 0..400 {
                let term = zm / (m as f64 - q);
                sum += term;
                if term.norm() <= 1e-17 * sum.norm() {
                    break;
                }
                zm *= ratio;
            }
            total += base * sum;
        }
        Ok(total * sign)
    }
}

fn fit(pts: &[C64], vals: &[C64], powers: &[f64]) -> Vec<(f64, C64)> {
    let n = pts.len();
    if vals.iter().all(|v| v.norm() == 0.0) {
        return powers.iter().map(|&q| (q, C64::new(0.0, 0.0))).collect();
    }
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| pts[i].powf(powers[j]));
    let b = nalgebra::DVector::from_fn(n, |i, _| vals[i]);
    let c = a.lu().solve(&b).unwrap_or_else(|| nalgebra::DVector::zeros(n));
    powers.iter().copied().zip(c.iter().copied()).collect()
}

/// Precomputed splitting of one function along one contour.
#[derive(Debug, Clone)]
pub struct CauchySplitter {
    g: SpectralFunction,
    delta: f64,
    hit_radius: f64,
    breaks: Vec<f64>,
    t16: Vec<C64>,
    w16: Vec<f64>,
    g16: Vec<C64>,
    t8: Vec<C64>,
    w8: Vec<f64>,
    g8: Vec<C64>,
    tails: [TailFit; 2],
}

impl CauchySplitter {
    pub fn new(g: &SpectralFunction, contour: &ContourSpec) -> Result<Self> {
        contour.validate()?;
        let decay = -g.growth_exponent;
        if !(decay > 0.0) {
            return Err(WhError::DecayTooSlow { declared: g.growth_exponent, sampled: f64::NAN });
        }
        let t_max = contour.truncation;
        let delta = contour.indentation;
        for &x in &[t_max, -t_max] {
            let a = g.eval(C64::new(x, -delta)).norm();
            let b = g.eval(C64::new(4.0 * x, -delta)).norm();
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let slope = (b / a).ln() / 4f64.ln();
            if !(slope <= -0.95 * decay) {
                return Err(WhError::DecayTooSlow { declared: g.growth_exponent, sampled: slope });
            }
        }
        let breaks = contour.breakpoints();
        let (t16, w16) = contour.rule(&breaks, PANEL_ORDER);
        let (t8, w8) = contour.rule(&breaks, COARSE_ORDER);
        let g16 = t16.iter().map(|&t| g.eval(t)).collect();
        let g8 = t8.iter().map(|&t| g.eval(t)).collect();
        let tails = [
            TailFit::new(g, C64::new(t_max, -delta), decay, 1.0),
            TailFit::new(g, C64::new(-t_max, -delta), decay, -1.0),
        ];
        Ok(Self { g: g.clone(), delta, hit_radius: contour.hit_radius.unwrap_or(delta), breaks, t16, w16, g16, t8, w8, g8, tails })
    }

    pub fn nodes(&self) -> &[C64] {
        &self.t16
    }

    pub fn is_above(&self, z: C64) -> bool {
        z.im > -self.delta
    }

    fn local_panel_length(&self, x: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b < x).clamp(1, self.breaks.len() - 1);
        self.breaks[i] - self.breaks[i - 1]
    }

    fn min_node_distance(&self, z: C64) -> f64 {
        let i = self.t16.partition_point(|t| t.re < z.re);
        let lo = i.saturating_sub(2);
        let hi = (i + 2).min(self.t16.len());
        self.t16[lo..hi].iter().map(|t| (t - z).norm()).fold(f64::INFINITY, f64::min)
    }

    /// `(1/2πi)∫ G(t)/(t−z) dt` with its error estimate.
    pub fn cauchy_integral(&self, z: C64) -> Result<SplitValue> {
        if z.re.is_nan() || z.im.is_nan() {
            return Err(WhError::InvalidInput("NaN spectral point".into()));
        }
        if self.min_node_distance(z) < self.hit_radius {
            return Err(WhError::ContourHit { re: z.re, im: z.im });
        }
        let t_max = *self.breaks.last().unwrap();
        let near = z.re.abs() <= t_max && (z.im + self.delta).abs() < self.local_panel_length(z.re);
        let (i16, i8) = if near {
            let c = self.g.eval(z);
            let ends = (self.tails[0].start - z).ln() - (self.tails[1].start - z).ln();
            (
                subtracted_sum(&self.t16, &self.w16, &self.g16, z, c) + c * ends,
                subtracted_sum(&self.t8, &self.w8, &self.g8, z, c) + c * ends,
            )
        } else {
            (plain_sum(&self.t16, &self.w16, &self.g16, z), plain_sum(&self.t8, &self.w8, &self.g8, z))
        };
        let mut tail_fine = C64::new(0.0, 0.0);
        let mut tail_coarse = C64::new(0.0, 0.0);
        for tail in &self.tails {
            tail_fine += TailFit::integral(&tail.fine, tail.start, tail.sign, z)?;
            tail_coarse += TailFit::integral(&tail.coarse, tail.start, tail.sign, z)?;
        }
        let scale = 1.0 / (2.0 * PI);
        Ok(SplitValue {
            value: (i16 + tail_fine) / C64::new(0.0, 2.0 * PI),
            error_estimate: scale * ((i16 - i8).norm() + (tail_fine - tail_coarse).norm()),
        })
    }

    /// `[G]^±(z)` on either side of the contour.
    pub fn split(&self, z: C64, side: Side) -> Result<SplitValue> {
        let SplitValue { value, error_estimate } = self.cauchy_integral(z)?;
        let above = self.is_above(z);
        let value = match (side, above) {
            (Side::Plus, true) => value,
            (Side::Plus, false) => self.g.eval(z) + value,
            (Side::Minus, true) => self.g.eval(z) - value,
            (Side::Minus, false) => -value,
        };
        Ok(SplitValue { value, error_estimate })
    }
}

fn plain_sum(t: &[C64], w: &[f64], g: &[C64], z: C64) -> C64 {
    t.iter().zip(w).zip(g).map(|((&t, &w), &g)| g * w / (t - z)).sum()
}

fn subtracted_sum(t: &[C64], w: &[f64], g: &[C64], z: C64, c: C64) -> C64 {
    t.iter().zip(w).zip(g).map(|((&t, &w), &g)| (g - c) * w / (t - z)).sum()
}

/// One-shot `[G]^±(z)`; use [`CauchySplitter`] when evaluating many points.
pub fn cauchy_split(g: &SpectralFunction, z: C64, side: Side, contour: &ContourSpec) -> Result<SplitValue> {
    CauchySplitter::new(g, contour)?.split(z, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::HalfPlane;

    fn contour() -> ContourSpec {
        ContourSpec::new(40.0, 0.05, 2000).with_scale(1.0)
    }

    fn pole(w: C64) -> SpectralFunction {
        SpectralFunction::new(move |t| 1.0 / (t - w), HalfPlane::Entire, -1.0)
    }

    #[test]
    fn pole_below_is_plus_function() {
        let w = C64::new(0.4, -0.8);
        let g = pole(w);
        let s = CauchySplitter::new(&g, &contour()).unwrap();
        for &z in &[C64::new(0.3, 0.7), C64::new(-2.0, 1.5), C64::new(1.0, 0.01)] {
            let p = s.split(z, Side::Plus).unwrap().value;
            let m = s.split(z, Side::Minus).unwrap().value;
            assert!((p - g.eval(z)).norm() < 1e-10, "{z} {p}");
            assert!(m.norm() < 1e-10);
        }
    }

    #[test]
    fn pole_above_is_minus_function() {
        let w = C64::new(-0.2, 0.6);
        let g = pole(w);
        let s = CauchySplitter::new(&g, &contour()).unwrap();
        for &z in &[C64::new(0.3, -0.7), C64::new(2.0, -1.5)] {
            let m = s.split(z, Side::Minus).unwrap().value;
            assert!((m - g.eval(z)).norm() < 1e-10);
        }
    }

    #[test]
    fn lorentzian_partial_fractions() {
        let g = SpectralFunction::new(|t| 1.0 / (t * t + 1.0), HalfPlane::Entire, -2.0);
        let s = CauchySplitter::new(&g, &contour()).unwrap();
        let i = C64::i();
        for &z in &[C64::new(0.3, 0.4), C64::new(-1.0, -0.3), C64::new(2.0, 2.0)] {
            let m = s.split(z, Side::Minus).unwrap().value;
            let p = s.split(z, Side::Plus).unwrap().value;
            assert!((m - (1.0 / (2.0 * i)) / (z - i)).norm() < 1e-12, "{z} {m}");
            assert!((p + (1.0 / (2.0 * i)) / (z + i)).norm() < 1e-12, "{z} {p}");
        }
    }

    #[test]
    fn slow_decay_rejected() {
        let g = SpectralFunction::new(|t| 1.0 / (t + C64::i()).sqrt(), HalfPlane::Upper, -1.0);
        assert!(matches!(CauchySplitter::new(&g, &contour()), Err(WhError::DecayTooSlow { .. })));
        let g = SpectralFunction::new(|_| C64::new(1.0, 0.0), HalfPlane::Entire, 0.0);
        assert!(matches!(CauchySplitter::new(&g, &contour()), Err(WhError::DecayTooSlow { .. })));
    }

    #[test]
    fn contour_hit_detected() {
        let g = pole(C64::new(0.0, -1.0));
        let s = CauchySplitter::new(&g, &contour()).unwrap();
        let z = s.nodes()[500] + C64::new(0.0, 0.01);
        assert!(matches!(s.split(z, Side::Plus), Err(WhError::ContourHit { .. })));
    }

    #[test]
    fn point_close_to_contour_uses_subtraction() {
        let w = C64::new(0.4, -0.8);
        let g = pole(w);
        let s = CauchySplitter::new(&g, &contour()).unwrap();
        // a 1/t tail limits accuracy to ~1e-10 everywhere; the near point must
        // not do worse than a far one
        let far = C64::new(0.123, 0.5);
        let near = C64::new(0.123, -0.05 + 0.06);
        let e_far = (s.split(far, Side::Plus).unwrap().value - g.eval(far)).norm();
        let e_near = (s.split(near, Side::Plus).unwrap().value - g.eval(near)).norm();
        assert!(e_near < 1e-9 && e_near < 2.0 * e_far, "{e_near} {e_far}");
    }

    #[test]
    fn breakpoints_cluster_at_refinement() {
        let c = ContourSpec::new(40.0, 1e-4, 1600).with_scale(1.0).with_refinement(1.0, 1e-3);
        let b = c.breakpoints();
        assert_eq!(b.len(), 101);
        let near = b.windows(2).filter(|p| (p[0] - 1.0).abs() < 0.01).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
        let far = b.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max);
        assert!(near < 0.01 * far);
    }

    #[test]
    fn invalid_contours_rejected() {
        assert!(ContourSpec::new(40.0, 0.0, 2000).validate().is_err());
        assert!(ContourSpec::new(40.0, 0.1, 8).validate().is_err());
        assert!(ContourSpec::new(3.0, 0.1, 100).validate_against(1.0).is_err());
    }
}
