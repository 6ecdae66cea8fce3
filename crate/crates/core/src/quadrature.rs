//! Gauss–Legendre rules: fixed, composite and adaptive.

use crate::error::{Error, Result};

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Sum of the rule over consecutive panels `[breaks[k], breaks[k+1]]`.
    pub fn composite(&self, breaks: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
        breaks.windows(2).map(|w| self.integrate(w[0], w[1], &mut f)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n + 1` equally spaced breakpoints on `[a, b]`.
pub fn uniform_breaks(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|k| if k == n { b } else { a + (b - a) * k as f64 / n as f64 }).collect()
}

/// Adaptive bisection with a 10-point rule, comparing each panel against its
/// two halves. Fails if `max_depth` is exhausted before reaching `tol`.
pub fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: usize) -> Result<f64> {
    let rule = GaussLegendre::new(10);
    let whole = rule.integrate(a, b, f);
    adaptive_step(&rule, f, a, b, whole, tol, max_depth)
}

fn adaptive_step(rule: &GaussLegendre, f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, f);
    let right = rule.integrate(m, b, f);
    let refined = left + right;
    if (refined - whole).abs() <= tol {
        return Ok(refined);
    }
    if depth == 0 {
        return Err(Error::QuadratureError(format!("adaptive rule stalled on [{a}, {b}], change {:e}", (refined - whole).abs())));
    }
    Ok(adaptive_step(rule, f, a, m, left, 0.5 * tol, depth - 1)? + adaptive_step(rule, f, m, b, right, 0.5 * tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        for n in 1..12 {
            let rule = GaussLegendre::new(n);
            for k in 0..(2 * n) {
                let got = rule.integrate(0.0, 1.0, |x| x.powi(k as i32));
                assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let rule = GaussLegendre::new(20);
        assert!((rule.integrate(-3.0, 5.0, |_| 1.0) - 8.0).abs() < 1e-13);
    }

    #[test]
    fn composite_and_adaptive_agree_on_peaked_integrand() {
        let f = |x: f64| 1.0 / (1e-4 + x * x);
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        let got = adaptive(&f, -1.0, 1.0, 1e-10, 40).unwrap();
        assert!((got - exact).abs() < 1e-8 * exact);
        let rule = GaussLegendre::new(10);
        let mut breaks = vec![-1.0];
        breaks.extend((1..40).map(|k| -1.0 + k as f64 / 20.0));
        breaks.push(1.0);
        assert!((rule.composite(&breaks, |x| x.cos()) - 2.0 * 1f64.sin()).abs() < 1e-13);
    }
}
