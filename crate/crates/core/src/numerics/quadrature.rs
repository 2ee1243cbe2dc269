use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Gauss–Chebyshev nodes `cos((2l+1)π/2n)` with the common weight `π/n`,
/// exact for `∫ p(t)/√(1−t²) dt` with `deg p ≤ 2n−1`.
pub fn gauss_chebyshev(n: usize) -> (Vec<f64>, f64) {
    let nodes = (0..n)
        .map(|l| ((2 * l + 1) as f64 * PI / (2 * n) as f64).cos())
        .collect();
    (nodes, PI / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for &n in &[8usize, 16] {
            let (x, w) = gauss_legendre(n);
            for p in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "n={n} p={p} {q} {exact}");
            }
        }
    }

    #[test]
    fn legendre_nodes_sorted() {
        let (x, _) = gauss_legendre(16);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn chebyshev_weight_rule() {
        let (x, w) = gauss_chebyshev(12);
        let q: f64 = x.iter().map(|t| w * t * t).sum();
        assert!((q - PI / 2.0).abs() < 1e-14);
    }
}
