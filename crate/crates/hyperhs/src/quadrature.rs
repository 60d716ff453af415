//! Gauss-Legendre quadrature: node computation, composite rules over an
//! interval, and an adaptive 1-D integrator for complex integrands used as
//! the oracle against closed forms.

use num_complex::Complex64;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], by
/// Newton iteration on P_n with the Chebyshev-based initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        // Newton on P_n(x); converges in a handful of steps from this guess
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| half * w).collect(),
    )
}

/// Composite Gauss-Legendre nodes over [a, b] split into panels of length at
/// most `panel_len`.
pub fn composite_nodes(a: f64, b: f64, panel_len: f64, order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(b > a && panel_len > 0.0);
    let n_panels = ((b - a) / panel_len).ceil() as usize;
    let (xs, ws) = gauss_legendre(order);
    let h = (b - a) / n_panels as f64;
    let mut nodes = Vec::with_capacity(n_panels * order);
    let mut weights = Vec::with_capacity(n_panels * order);
    for p in 0..n_panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in xs.iter().zip(&ws) {
            nodes.push(mid + 0.5 * h * x);
            weights.push(0.5 * h * w);
        }
    }
    (nodes, weights)
}

/// Adaptive 1-D quadrature of a complex integrand on [a, b]: each interval
/// is accepted when the 15- and 30-point Gauss estimates agree to `tol`
/// (absolute), otherwise bisected. Intervals whose disagreement sits at the
/// rounding floor of the local |f| mass are accepted regardless: no amount
/// of refinement beats double-precision cancellation there.
pub fn adaptive_quad<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    // (integral, integral of |f|)
    fn eval<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, order: usize) -> (Complex64, f64) {
        let (xs, ws) = gauss_legendre_on(order, a, b);
        let mut total = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for (x, w) in xs.iter().zip(&ws) {
            let v = f(*x);
            total += v * Complex64::new(*w, 0.0);
            mass += v.norm() * w;
        }
        (total, mass)
    }
    fn recurse<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: usize,
    ) -> Complex64 {
        let (coarse, _) = eval(f, a, b, 15);
        let (fine, mass) = eval(f, a, b, 30);
        let diff = (fine - coarse).norm();
        if diff < tol || diff < 1e-14 * mass || depth >= 40 {
            return fine;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, 0.5 * tol, depth + 1) + recurse(f, mid, b, 0.5 * tol, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn low_order_nodes_match_known_values() {
        let (xs, ws) = gauss_legendre(2);
        assert_relative_eq!(xs[1], 1.0 / 3.0f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(ws[0], 1.0, epsilon = 1e-14);
        let (xs3, ws3) = gauss_legendre(3);
        assert_relative_eq!(xs3[2], (0.6f64).sqrt(), epsilon = 1e-14);
        assert_relative_eq!(ws3[1], 8.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 5, 12, 30, 64] {
            let (_, ws) = gauss_legendre(n);
            assert_relative_eq!(ws.iter().sum::<f64>(), 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_on_polynomials() {
        // n-point rule is exact through degree 2n-1
        let (xs, ws) = gauss_legendre(6);
        let integral: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(10)).sum();
        assert_relative_eq!(integral, 2.0 / 11.0, epsilon = 1e-13);
    }

    #[test]
    fn gaussian_integral_via_composite() {
        let (xs, ws) = composite_nodes(-8.0, 8.0, 1.0, 12);
        let integral: f64 = xs.iter().zip(&ws).map(|(x, w)| w * (-x * x).exp()).sum();
        assert_relative_eq!(integral, PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn adaptive_oscillatory_gaussian() {
        // int e^{-x^2 - 4ix} dx = sqrt(pi) e^{-4}
        let f = |x: f64| Complex64::new(0.0, -4.0 * x).exp() * (-x * x).exp();
        let got = adaptive_quad(&f, -10.0, 10.0, 1e-12);
        let want = Complex64::new(PI.sqrt() * (-4.0f64).exp(), 0.0);
        assert!((got - want).norm() < 1e-10, "got {got}");
    }
}
