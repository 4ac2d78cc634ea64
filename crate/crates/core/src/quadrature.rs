//! Adaptive interval-halving quadrature on a fixed 11-point Gauss-Legendre
//! panel rule.

use std::sync::OnceLock;

use crate::error::{ProbeError, Result};

const RULE_POINTS: usize = 11;

struct Rule {
    nodes: [f64; RULE_POINTS],
    weights: [f64; RULE_POINTS],
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = RULE_POINTS;
        let mut nodes = [0.0; RULE_POINTS];
        let mut weights = [0.0; RULE_POINTS];
        for i in 0..n {
            // Chebyshev-like initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            if x.abs() < 1e-15 {
                x = 0.0;
            }
            for _ in 0..100 {
                if x == 0.0 && n % 2 == 1 {
                    break;
                }
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let dp = legendre(n, x).1;
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

/// Panel estimate and the integral of `|f|`, which sets its rounding floor.
fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let r = rule();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (sum, abs) = r.nodes.iter().zip(&r.weights).fold((0.0, 0.0), |(s, m), (&x, &w)| {
        let v = w * f(mid + half * x);
        (s + v, m + v.abs())
    });
    (sum * half, abs * half.abs())
}

/// Panel splits allowed per call before giving up.
const MAX_SPLITS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute tolerance for the whole integral.
    pub abs_tol: f64,
    /// Largest acceptable disagreement between a panel and its two halves
    /// once the subdivision budget is exhausted.
    pub fail_tol: f64,
    /// Every initial panel is halved at least this many times, so features
    /// narrower than a panel but sitting between its nodes are still seen.
    pub min_depth: u32,
    pub max_depth: u32,
    /// Panel errors below `rel_floor·∫|f|` count as converged; set it to the
    /// integrand's own evaluation noise.
    pub rel_floor: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, fail_tol: 1e-10, min_depth: 3, max_depth: 40, rel_floor: 50.0 * f64::EPSILON }
    }
}

/// Integrates `f` over `[a, b]`, starting from panels split at the given
/// interior `breakpoints` (points outside the interval are ignored).
pub fn integrate<F>(f: F, a: f64, b: f64, breakpoints: &[f64], opts: &QuadOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(ProbeError::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, breakpoints, opts).map(|v| -v);
    }
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breakpoints.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let width = b - a;
    let mut total = 0.0;
    let mut worst_failure = 0.0_f64;
    // explicit stack of (lo, hi, whole-panel estimate, depth)
    let mut stack: Vec<(f64, f64, f64, u32)> =
        cuts.windows(2).map(|w| (w[0], w[1], panel(&f, w[0], w[1]).0, 0)).collect();
    let mut splits = 0usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        splits += 1;
        if splits > MAX_SPLITS {
            return Err(ProbeError::NonConvergence {
                what: "adaptive quadrature (panel budget)",
                change: worst_failure,
            });
        }
        let mid = 0.5 * (lo + hi);
        let (left, left_abs) = panel(&f, lo, mid);
        let (right, right_abs) = panel(&f, mid, hi);
        let halves = left + right;
        let err = (halves - whole).abs();
        let rounding = opts.rel_floor * (left_abs + right_abs);
        let local_tol = (opts.abs_tol * (hi - lo) / width).max(rounding);
        if depth >= opts.min_depth && (err <= local_tol || !err.is_finite()) {
            total += halves;
        } else if depth >= opts.max_depth || mid <= lo || mid >= hi {
            worst_failure = worst_failure.max(err);
            total += halves;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    if worst_failure > opts.fail_tol {
        return Err(ProbeError::NonConvergence { what: "adaptive quadrature", change: worst_failure });
    }
    if !total.is_finite() {
        return Err(ProbeError::domain("integrand is not finite on the interval"));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let r = rule();
        let wsum: f64 = r.weights.iter().sum();
        assert_relative_eq!(wsum, 2.0, max_relative = 1e-14);
        // degree 21 is the highest exact degree for 11 points
        let v = panel(&|x: f64| x.powi(20), -1.0, 1.0).0;
        assert_relative_eq!(v, 2.0 / 21.0, max_relative = 1e-12);
    }

    #[test]
    fn smooth_and_peaked_integrands() {
        let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, &[], &QuadOptions::default()).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-12);

        let w = 1e-3;
        let g = |x: f64| (-(x / w).powi(2)).exp();
        let v = integrate(g, -1.0, 1.0, &[0.0], &QuadOptions::default()).unwrap();
        assert_relative_eq!(v, w * std::f64::consts::PI.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = integrate(|x| x, 1.0, 0.0, &[], &QuadOptions::default()).unwrap();
        assert_relative_eq!(v, -0.5, max_relative = 1e-14);
    }

    #[test]
    fn discontinuity_without_budget_fails() {
        let step = |x: f64| if x < 0.123456789 { 0.0 } else { 1.0 };
        let opts = QuadOptions { max_depth: 3, ..Default::default() };
        assert!(matches!(integrate(step, 0.0, 1.0, &[], &opts), Err(ProbeError::NonConvergence { .. })));
    }
}
