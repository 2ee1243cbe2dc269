//! Generic Wiener–Hopf machinery: normal-family checks, the pole-forcing
//! embedding formula, a numerical scalar solver and the linear solve for
//! plane-wave embedding coefficients.
//!
//! Convention: the problem is `U⁻(t) = K(t)·U⁺(t) + r/(t − z_i)` on a contour
//! with `Im z_i` below it; `U⁺` is analytic above the contour, `U⁻` below.

use crate::error::{Result, WhError};
use crate::numerics::{dense_solve, condition_number, CauchySplitter, ContourSpec, HalfPlane, Side, SpectralFunction, SplitValue};
use crate::report::EmbeddingReport;
use crate::C64;
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;
use std::sync::Arc;

pub type MatrixFn = Arc<dyn Fn(C64) -> DMatrix<C64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// Inhomogeneous matrix Wiener–Hopf problem with a single forcing pole.
#[derive(Clone)]
pub struct MatrixWhProblem {
    pub size: usize,
    pub kernel: MatrixFn,
    pub forcing_pole: C64,
    pub forcing_residue: DVector<C64>,
    pub growth_plus: Vec<f64>,
    pub growth_minus: Vec<f64>,
}

impl MatrixWhProblem {
    pub fn new(kernel: MatrixFn, forcing_pole: C64, forcing_residue: DVector<C64>) -> Result<Self> {
        let size = forcing_residue.len();
        if size == 0 {
            return Err(WhError::InvalidInput("empty forcing residue".into()));
        }
        if !(forcing_pole.im < 0.0) {
            return Err(WhError::InvalidInput(format!("forcing pole must satisfy Im z_i < 0, got {forcing_pole}")));
        }
        Ok(Self {
            size,
            kernel,
            forcing_pole,
            forcing_residue,
            growth_plus: vec![f64::NAN; size],
            growth_minus: vec![f64::NAN; size],
        })
    }

    pub fn with_growth(mut self, plus: Vec<f64>, minus: Vec<f64>) -> Self {
        self.growth_plus = plus;
        self.growth_minus = minus;
        self
    }

    pub fn kernel_at(&self, z: C64) -> DMatrix<C64> {
        (self.kernel)(z)
    }

    pub fn forcing(&self, z: C64) -> DVector<C64> {
        &self.forcing_residue / (z - self.forcing_pole)
    }
}

/// Matrices of homogeneous solutions `X⁻ = K·X⁺`.
#[derive(Clone)]
pub struct NormalFamily {
    pub x_minus: MatrixFn,
    pub x_plus: MatrixFn,
    /// Closed-form `det X⁻(z)`.
    pub det_reference: ScalarFn,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyTolerances {
    pub functional: f64,
    pub determinant: f64,
    pub factorization: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self { functional: 1e-12, determinant: 1e-12, factorization: 1e-10 }
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Checks the functional equation, the determinant and the factorization
/// identity `K = X⁻(X⁺)⁻¹` on the grid.
pub fn verify_normal(family: &NormalFamily, problem: &MatrixWhProblem, grid: &[C64], tol: VerifyTolerances) -> EmbeddingReport {
    let mut functional: f64 = 0.0;
    let mut det_err: f64 = 0.0;
    let mut factor_err: f64 = 0.0;
    let mut det_min = f64::INFINITY;
    for &z in grid {
        let k = problem.kernel_at(z);
        let xm = (family.x_minus)(z);
        let xp = (family.x_plus)(z);
        let scale = max_abs(&xm).max(1.0);
        functional = functional.max(max_abs(&(&xm - &k * &xp)) / scale);
        let dm = xm.determinant();
        let reference = (family.det_reference)(z);
        det_err = det_err.max((dm - reference).norm() / reference.norm().max(1.0));
        det_min = det_min.min(dm.norm()).min(xp.determinant().norm());
        match xp.clone().try_inverse() {
            Some(inv) => factor_err = factor_err.max(max_abs(&(&k - &xm * inv)) / max_abs(&k).max(1.0)),
            None => factor_err = f64::INFINITY,
        }
    }
    let mut r = EmbeddingReport::new("normal family");
    r.check("functional_residual", functional, tol.functional)
        .check("determinant_residual", det_err, tol.determinant)
        .check("factorization_residual", factor_err, tol.factorization)
        .check_at_least("min_abs_determinant", det_min, 1e-12);
    r
}

/// `U⁺(z) = −X⁺(z)·(X⁻(z_i))⁻¹·r/(z − z_i)`, the canonical embedding formula.
#[derive(Clone)]
pub struct PoleSolution {
    x_plus: MatrixFn,
    coefficients: DVector<C64>,
    pub forcing_pole: C64,
}

impl PoleSolution {
    pub fn eval(&self, z: C64) -> DVector<C64> {
        -((self.x_plus)(z) * &self.coefficients) / (z - self.forcing_pole)
    }

    /// `(X⁻(z_i))⁻¹·r`.
    pub fn coefficients(&self) -> &DVector<C64> {
        &self.coefficients
    }

    /// Component `j` as a spectral function analytic in the upper half-plane.
    pub fn component(&self, j: usize, growth_exponent: f64) -> SpectralFunction {
        let me = self.clone();
        SpectralFunction::new(move |z| me.eval(z)[j], HalfPlane::Upper, growth_exponent)
    }
}

pub fn embed_pole_solution(family: &NormalFamily, z_i: C64, r: &DVector<C64>) -> Result<PoleSolution> {
    let xm = (family.x_minus)(z_i);
    let det = xm.determinant();
    if det.norm() < 1e-13 {
        return Err(WhError::SingularAtIncidence(det.norm()));
    }
    let coefficients = xm.lu().solve(r).ok_or(WhError::SingularAtIncidence(det.norm()))?;
    Ok(PoleSolution { x_plus: family.x_plus.clone(), coefficients, forcing_pole: z_i })
}

/// Caller-supplied algebraic normalizer for a scalar kernel.
///
/// `K·n → 1` at infinity, `1/n = N⁻·N⁺` with `N⁻` analytic below and `N⁺`
/// above the contour, and `log(K·n)` decays like `|t|^{−log_decay}`.
#[derive(Clone)]
pub struct ScalarNormalizer {
    pub n: ScalarFn,
    pub n_minus: ScalarFn,
    pub n_plus: ScalarFn,
    pub log_decay: f64,
}

impl ScalarNormalizer {
    /// `n ≡ 1`, for kernels that already tend to 1.
    pub fn unit(log_decay: f64) -> Self {
        let one: ScalarFn = Arc::new(|_| C64::new(1.0, 0.0));
        Self { n: one.clone(), n_minus: one.clone(), n_plus: one, log_decay }
    }
}

/// Numerical solution of a scalar pole-forced problem.
#[derive(Clone)]
pub struct ScalarWhSolution {
    inner: Arc<ScalarInner>,
}

struct ScalarInner {
    kernel: ScalarFn,
    normalizer: ScalarNormalizer,
    splitter: CauchySplitter,
    z_i: C64,
    r: C64,
    k_minus_zi: C64,
    k_minus_zi_err: f64,
}

/// Solves the scalar problem by `K = K⁻K⁺`, `K^± = N^±·exp([log(K·n)]^±)`.
///
/// The phase of `K·n` is unwrapped along the contour; evaluation off the
/// contour picks the logarithm branch of the nearest node.
pub fn solve_scalar_wh_numeric(problem: &MatrixWhProblem, normalizer: &ScalarNormalizer, contour: &ContourSpec) -> Result<ScalarWhSolution> {
    if problem.size != 1 {
        return Err(WhError::InvalidInput(format!("scalar solver needs N = 1, got {}", problem.size)));
    }
    contour.validate()?;
    let kernel_m = problem.kernel.clone();
    let kernel: ScalarFn = Arc::new(move |z| kernel_m(z)[(0, 0)]);
    let nodes = contour.nodes();
    let mut phases = Vec::with_capacity(nodes.len());
    let mut prev: Option<f64> = None;
    for &t in &nodes {
        let kt = kernel(t);
        if kt.norm() < 1e-12 {
            return Err(WhError::KernelZero(kt.norm()));
        }
        let p = (kt * (normalizer.n)(t)).arg();
        let p = match prev {
            None => p,
            Some(q) => q + wrap(p - q),
        };
        phases.push(p);
        prev = Some(p);
    }
    let winding = ((phases[phases.len() - 1] - phases[0]) / (2.0 * PI)).round() as i64;
    if winding != 0 {
        return Err(WhError::WindingNonzero(winding));
    }
    let node_re: Arc<Vec<f64>> = Arc::new(nodes.iter().map(|t| t.re).collect());
    let phases = Arc::new(phases);
    let (k2, n2) = (kernel.clone(), normalizer.n.clone());
    let log_kn = SpectralFunction::new(
        move |z| {
            let v = k2(z) * n2(z);
            let p = v.arg();
            let i = node_re.partition_point(|&x| x < z.re).min(node_re.len() - 1);
            let m = ((phases[i] - p) / (2.0 * PI)).round();
            C64::new(v.norm().ln(), p + 2.0 * PI * m)
        },
        HalfPlane::Entire,
        -normalizer.log_decay,
    );
    let splitter = CauchySplitter::new(&log_kn, contour)?;
    let z_i = problem.forcing_pole;
    let lm = splitter.split(z_i, Side::Minus)?;
    let k_minus_zi = (normalizer.n_minus)(z_i) * lm.value.exp();
    Ok(ScalarWhSolution {
        inner: Arc::new(ScalarInner {
            kernel,
            normalizer: normalizer.clone(),
            splitter,
            z_i,
            r: problem.forcing_residue[0],
            k_minus_zi,
            k_minus_zi_err: lm.error_estimate,
        }),
    })
}

fn wrap(d: f64) -> f64 {
    d - 2.0 * PI * (d / (2.0 * PI)).round()
}

impl ScalarWhSolution {
    pub fn k_plus(&self, z: C64) -> Result<SplitValue> {
        let s = self.inner.splitter.split(z, Side::Plus)?;
        let v = (self.inner.normalizer.n_plus)(z) * s.value.exp();
        Ok(SplitValue { value: v, error_estimate: v.norm() * s.error_estimate })
    }

    pub fn k_minus(&self, z: C64) -> Result<SplitValue> {
        let s = self.inner.splitter.split(z, Side::Minus)?;
        let v = (self.inner.normalizer.n_minus)(z) * s.value.exp();
        Ok(SplitValue { value: v, error_estimate: v.norm() * s.error_estimate })
    }

    pub fn u_plus(&self, z: C64) -> Result<SplitValue> {
        let me = &self.inner;
        let kp = self.k_plus(z)?;
        let v = -me.r / ((z - me.z_i) * me.k_minus_zi * kp.value);
        let rel = kp.error_estimate / kp.value.norm() + me.k_minus_zi_err;
        Ok(SplitValue { value: v, error_estimate: v.norm() * rel })
    }

    pub fn u_minus(&self, z: C64) -> Result<SplitValue> {
        let me = &self.inner;
        let km = self.k_minus(z)?;
        let ratio = km.value / me.k_minus_zi;
        let pre = me.r / (z - me.z_i);
        let v = pre * (1.0 - ratio);
        let rel = km.error_estimate / km.value.norm() + me.k_minus_zi_err;
        Ok(SplitValue { value: v, error_estimate: (pre * ratio).norm() * rel })
    }

    pub fn kernel(&self, z: C64) -> C64 {
        (self.inner.kernel)(z)
    }

    pub fn forcing(&self, z: C64) -> C64 {
        self.inner.r / (z - self.inner.z_i)
    }

    pub fn is_above_contour(&self, z: C64) -> bool {
        self.inner.splitter.is_above(z)
    }

    /// `U⁺` as a spectral function; evaluation failures map to NaN.
    pub fn u_plus_function(&self) -> SpectralFunction {
        let me = self.clone();
        SpectralFunction::new(
            move |z| me.u_plus(z).map(|s| s.value).unwrap_or(C64::new(f64::NAN, f64::NAN)),
            HalfPlane::Upper,
            f64::NAN,
        )
    }

    pub fn u_minus_function(&self) -> SpectralFunction {
        let me = self.clone();
        SpectralFunction::new(
            move |z| me.u_minus(z).map(|s| s.value).unwrap_or(C64::new(f64::NAN, f64::NAN)),
            HalfPlane::Lower,
            f64::NAN,
        )
    }
}

/// Solution of a plane-wave embedding system.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingCoefficients {
    pub base_angles: Vec<f64>,
    pub coefficients: Vec<C64>,
    pub conditioning: f64,
    pub relative_residual: f64,
}

/// Solves `Σ_m Ŝ(θ_j, θ_m)·B_m = Ŝ(θ_j, θ*)` for the coefficients `B`.
pub fn plane_wave_coeffs(weighted_samples: &DMatrix<C64>, target_column: &DVector<C64>, base_angles: &[f64]) -> Result<EmbeddingCoefficients> {
    let n = weighted_samples.nrows();
    if weighted_samples.ncols() != n || base_angles.len() != n {
        return Err(WhError::InvalidInput("plane-wave system must be square with one base angle per row".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if (base_angles[i] - base_angles[j]).abs() < 1e-12 {
                return Err(WhError::SingularMatrix { condition: f64::INFINITY });
            }
        }
    }
    let x = dense_solve(weighted_samples, target_column)?;
    let res = (weighted_samples * &x - target_column).norm();
    let relative_residual = if target_column.norm() > 0.0 { res / target_column.norm() } else { res };
    Ok(EmbeddingCoefficients {
        base_angles: base_angles.to_vec(),
        coefficients: x.iter().copied().collect(),
        conditioning: condition_number(weighted_samples),
        relative_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn unit_kernel_assigns_pole_to_plus_side() {
        let kernel: MatrixFn = Arc::new(|_| DMatrix::from_element(1, 1, c(1.0, 0.0)));
        let zi = c(0.3, -0.5);
        let r = c(0.0, 1.0);
        let p = MatrixWhProblem::new(kernel, zi, DVector::from_element(1, r)).unwrap();
        let contour = ContourSpec::new(40.0, 0.1, 320).with_scale(1.0);
        let s = solve_scalar_wh_numeric(&p, &ScalarNormalizer::unit(2.0), &contour).unwrap();
        for &z in &[c(0.5, 0.5), c(-1.0, 2.0)] {
            assert!((s.u_plus(z).unwrap().value + r / (z - zi)).norm() < 1e-14);
            assert!(s.u_minus(z).unwrap().value.norm() < 1e-14);
        }
    }

    #[test]
    fn winding_kernel_rejected() {
        // (t − i)/(t + i) winds once around the origin along the real line
        let kernel: MatrixFn = Arc::new(|t| DMatrix::from_element(1, 1, (t - C64::i()) / (t + C64::i())));
        let p = MatrixWhProblem::new(kernel, c(0.0, -0.5), DVector::from_element(1, c(1.0, 0.0))).unwrap();
        let contour = ContourSpec::new(40.0, 0.1, 320).with_scale(1.0);
        assert!(matches!(
            solve_scalar_wh_numeric(&p, &ScalarNormalizer::unit(1.0), &contour),
            Err(WhError::WindingNonzero(_))
        ));
    }

    #[test]
    fn vanishing_kernel_rejected() {
        let kernel: MatrixFn = Arc::new(|_| DMatrix::from_element(1, 1, c(0.0, 0.0)));
        let p = MatrixWhProblem::new(kernel, c(0.0, -0.5), DVector::from_element(1, c(1.0, 0.0))).unwrap();
        let contour = ContourSpec::new(40.0, 0.1, 320).with_scale(1.0);
        assert!(matches!(
            solve_scalar_wh_numeric(&p, &ScalarNormalizer::unit(1.0), &contour),
            Err(WhError::KernelZero(_))
        ));
    }

    #[test]
    fn forcing_pole_must_be_below() {
        let kernel: MatrixFn = Arc::new(|_| DMatrix::from_element(1, 1, c(1.0, 0.0)));
        assert!(MatrixWhProblem::new(kernel, c(0.0, 0.5), DVector::from_element(1, c(1.0, 0.0))).is_err());
    }

    #[test]
    fn target_on_base_angle_reproduces_unit_vector() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.5, -0.2), c(-1.5, 0.2), c(0.0, 0.0)]);
        let col = DVector::from_vec(vec![a[(0, 0)], a[(1, 0)]]);
        let b = plane_wave_coeffs(&a, &col, &[1.8, 2.4]).unwrap();
        assert!((b.coefficients[0] - 1.0).norm() < 1e-15);
        assert!(b.coefficients[1].norm() < 1e-15);
        assert!(b.relative_residual < 1e-12);
    }

    #[test]
    fn repeated_base_angles_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let col = DVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(plane_wave_coeffs(&a, &col, &[1.0, 1.0]), Err(WhError::SingularMatrix { .. })));
    }

    #[test]
    fn zero_residue_gives_zero_solution() {
        let fam = NormalFamily {
            x_minus: Arc::new(|z| DMatrix::from_element(1, 1, z + 3.0)),
            x_plus: Arc::new(|_| DMatrix::from_element(1, 1, c(1.0, 0.0))),
            det_reference: Arc::new(|z| z + 3.0),
        };
        let s = embed_pole_solution(&fam, c(0.2, -0.4), &DVector::from_element(1, c(0.0, 0.0))).unwrap();
        assert_eq!(s.eval(c(1.0, 1.0))[0], c(0.0, 0.0));
    }
}
