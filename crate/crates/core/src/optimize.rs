//! One-dimensional optimization: a coarse uniform scan to pick the basin,
//! then golden-section refinement inside the bracketing grid cells.
//!
//! Objectives may return non-finite values (diverging bounds); `+∞` simply
//! loses every comparison when minimizing and `-∞` when maximizing. NaN is
//! treated as the worst possible value.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Number of coarse grid points including both endpoints.
    pub points: usize,
    /// Absolute tolerance on the argument for the golden-section stage.
    pub x_tol: f64,
    /// Objective differences below this (relative to the best value) count
    /// as ties; ties go to the smallest argument.
    pub flat_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { points: 101, x_tol: 1e-8, flat_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn sanitize_max(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

fn is_better(candidate: f64, incumbent: f64, flat_tol: f64) -> bool {
    if candidate == f64::NEG_INFINITY {
        return false;
    }
    if incumbent == f64::NEG_INFINITY {
        return true;
    }
    let scale = candidate.abs().max(incumbent.abs());
    candidate - incumbent > flat_tol * scale
}

/// Golden-section search for a maximum of a unimodal function on `[lo, hi]`.
pub fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Optimum
where
    F: Fn(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = sanitize_max(f(x1));
    let mut f2 = sanitize_max(f(x2));
    // (hi - lo) shrinks by INV_PHI per step, so this always terminates.
    while (hi - lo) > x_tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = sanitize_max(f(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = sanitize_max(f(x2));
        }
    }
    if f1 >= f2 {
        Optimum { x: x1, value: f1 }
    } else {
        Optimum { x: x2, value: f2 }
    }
}

/// Global-ish maximum on `[lo, hi]`: coarse scan, golden refinement in the
/// two cells around the best grid point, and a final comparison against
/// the grid so the result is never worse than any scanned point
/// (including both endpoints).
pub fn maximize_on_interval<F>(f: F, lo: f64, hi: f64, opts: &ScanOptions) -> Optimum
where
    F: Fn(f64) -> f64,
{
    let n = opts.points.max(2);
    let grid: Vec<f64> =
        (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect();
    let values: Vec<f64> = grid.iter().map(|&x| sanitize_max(f(x))).collect();

    let mut best = 0;
    for i in 1..n {
        if is_better(values[i], values[best], opts.flat_tol) {
            best = i;
        }
    }
    let grid_best = Optimum { x: grid[best], value: values[best] };
    if values[best] == f64::NEG_INFINITY {
        return grid_best;
    }

    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(n - 1)];
    let refined = golden_section_max(&f, a, b, opts.x_tol);
    if is_better(refined.value, grid_best.value, opts.flat_tol) {
        refined
    } else {
        grid_best
    }
}

/// Minimization counterpart of [`maximize_on_interval`].
pub fn minimize_on_interval<F>(f: F, lo: f64, hi: f64, opts: &ScanOptions) -> Optimum
where
    F: Fn(f64) -> f64,
{
    let best = maximize_on_interval(|x| -f(x), lo, hi, opts);
    Optimum { x: best.x, value: -best.value }
}

/// Bisection for `f(x) = 0` given a sign change on `[lo, hi]`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= x_tol {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `n` evenly spaced points from `lo` to `hi` inclusive; `n = 1` gives `[lo]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = linspace(lo.log10(), hi.log10(), n).into_iter().map(|e| 10f64.powf(e)).collect();
    if n > 1 {
        pts[0] = lo;
        pts[n - 1] = hi;
    }
    pts
}
