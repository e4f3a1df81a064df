//! One-dimensional quadrature building blocks.
//!
//! Gauss-Legendre rules are generated by Newton iteration on the Legendre
//! recurrence; composite rules split an interval into equal panels and apply
//! the base rule on each. An adaptive Simpson routine handles the one
//! integrand in this crate that is not piecewise polynomial (the mollifier
//! convolution in `sim::phi`).

/// A Gauss-Legendre rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Evaluate the Legendre polynomial P_n and its derivative at x.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p_curr = x;
    for k in 1..n {
        let p_next = ((2 * k + 1) as f64 * x * p_curr - k as f64 * p_prev) / (k + 1) as f64;
        p_prev = p_curr;
        p_curr = p_next;
    }
    // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1); the Newton nodes are interior
    // so x^2 - 1 never vanishes.
    let deriv = n as f64 * (x * p_curr - p_prev) / (x * x - 1.0);
    (p_curr, deriv)
}

impl GaussRule {
    /// Build the n-point rule. Nodes are symmetric and ascending.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess for the i-th root (descending order).
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
            nodes[i] = -x;
            weights[i] = w;
        }
        if n % 2 == 1 {
            // Recompute the central node exactly.
            let (_, dp) = legendre_with_derivative(n, 0.0);
            nodes[n / 2] = 0.0;
            weights[n / 2] = 2.0 / (dp * dp);
        }
        GaussRule { nodes, weights }
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|&x| mid + half * x).collect();
        let weights = self.weights.iter().map(|&w| half * w).collect();
        (nodes, weights)
    }

    /// Integrate f over [a, b] with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Integrate f over [a, b] with `panels` equal panels of an n-point rule.
pub fn composite_integrate<F: FnMut(f64) -> f64>(
    rule: &GaussRule,
    a: f64,
    b: f64,
    panels: usize,
    mut f: F,
) -> f64 {
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == panels { b } else { lo + width };
        acc += rule.integrate(lo, hi, &mut f);
    }
    acc
}

/// Composite nodes and weights over [a, b]: `panels` panels, n-point rule each.
pub fn composite_rule(rule: &GaussRule, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * rule.nodes.len());
    let mut weights = Vec::with_capacity(panels * rule.nodes.len());
    for k in 0..panels {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == panels { b } else { lo + width };
        let (ns, ws) = rule.mapped(lo, hi);
        nodes.extend(ns);
        weights.extend(ws);
    }
    (nodes, weights)
}

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_simpson_inner<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson_inner(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson_inner(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, a, b);
    adaptive_simpson_inner(&mut f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_nodes_integrate_polynomials_exactly() {
        // An n-point rule is exact up to degree 2n-1.
        for n in 1..=12 {
            let rule = GaussRule::new(n);
            for deg in 0..(2 * n) {
                let exact = 1.0 / (deg as f64 + 1.0);
                let got = rule.integrate(0.0, 1.0, |u| u.powi(deg as i32));
                assert!(
                    (got - exact).abs() < 1e-13,
                    "n={n} deg={deg}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn gauss_weights_sum_to_interval_length() {
        for n in [1, 2, 5, 8, 16, 32] {
            let rule = GaussRule::new(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn composite_matches_single_panel_on_smooth_integrand() {
        let rule = GaussRule::new(8);
        let single = rule.integrate(0.0, 1.0, f64::exp);
        let multi = composite_integrate(&rule, 0.0, 1.0, 32, f64::exp);
        assert!((single - multi).abs() < 1e-12);
        assert!((multi - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn composite_rule_weights_cover_interval() {
        let rule = GaussRule::new(4);
        let (nodes, weights) = composite_rule(&rule, 0.25, 0.75, 16);
        assert_eq!(nodes.len(), 64);
        let total: f64 = weights.iter().sum();
        assert!((total - 0.5).abs() < 1e-14);
        assert!(nodes.iter().all(|&x| x > 0.25 && x < 0.75));
    }

    #[test]
    fn adaptive_simpson_hits_tolerance() {
        let got = adaptive_simpson(|x: f64| (-x * x).exp(), 0.0, 1.0, 1e-12);
        // erf(1) * sqrt(pi) / 2
        let exact = 0.746824132812427;
        assert!((got - exact).abs() < 1e-11);
    }
}
