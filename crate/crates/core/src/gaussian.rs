//! Single-mode Gaussian states without X-P correlations, their Uhlmann
//! fidelity, and a Bures-distance finite-difference quantum Fisher
//! information.
//!
//! Conventions: `X = a + a†`, `P = -i(a - a†)`, vacuum variance 1.
//! Displacements are stored as the complex coherent amplitude
//! (`disp_re + i disp_im`), i.e. half the quadrature means, which is the
//! unit the displacement factor `exp[-2x_r²/(V1⁺+V2⁺) - 2x_i²/(V1⁻+V2⁻)]`
//! is written in.

use crate::error::{ProbeError, Result};

/// Radicands closer to zero than this are treated as floating-point noise.
pub const RADICAND_TOLERANCE: f64 = 1e-12;

/// Quadrature variances and displacement of an evolved single-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPair {
    pub v_plus: f64,
    pub v_minus: f64,
    pub disp_re: f64,
    pub disp_im: f64,
}

impl QuadPair {
    pub fn new(v_plus: f64, v_minus: f64, disp_re: f64, disp_im: f64) -> Result<Self> {
        let state = Self { v_plus, v_minus, disp_re, disp_im };
        state.validate()?;
        Ok(state)
    }

    pub const fn vacuum() -> Self {
        Self { v_plus: 1.0, v_minus: 1.0, disp_re: 0.0, disp_im: 0.0 }
    }

    /// Positive variances obeying `V⁺V⁻ ≥ 1` up to [`RADICAND_TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        if !(self.v_plus > 0.0 && self.v_minus > 0.0) {
            return Err(ProbeError::domain(format!(
                "quadrature variances must be positive, got ({}, {})",
                self.v_plus, self.v_minus
            )));
        }
        if !(self.disp_re.is_finite() && self.disp_im.is_finite()) {
            return Err(ProbeError::domain("displacement must be finite"));
        }
        if self.v_plus * self.v_minus - 1.0 < -RADICAND_TOLERANCE {
            return Err(ProbeError::domain(format!(
                "variances violate the uncertainty bound: V+ V- = {}",
                self.v_plus * self.v_minus
            )));
        }
        Ok(())
    }

    /// `V⁺V⁻ - 1`, zero for pure states.
    pub fn excess_purity(&self) -> f64 {
        self.v_plus * self.v_minus - 1.0
    }
}

/// Alice's pure input state: a coherent amplitude `|α| e^{iθ}` on top of a
/// squeezed vacuum squeezed in X by `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProbe {
    pub alpha_mag: f64,
    pub theta: f64,
    pub r: f64,
}

impl GaussianProbe {
    pub fn new(alpha_mag: f64, theta: f64, r: f64) -> Result<Self> {
        if !(alpha_mag >= 0.0 && alpha_mag.is_finite()) {
            return Err(ProbeError::domain("coherent amplitude must be finite and >= 0"));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(ProbeError::domain("squeezing parameter must be finite and >= 0"));
        }
        if !theta.is_finite() {
            return Err(ProbeError::domain("coherent angle must be finite"));
        }
        Ok(Self { alpha_mag, theta, r })
    }

    pub const fn vacuum() -> Self {
        Self { alpha_mag: 0.0, theta: 0.0, r: 0.0 }
    }

    pub fn coherent(alpha_mag: f64) -> Result<Self> {
        Self::new(alpha_mag, 0.0, 0.0)
    }

    /// Splits `n_bar` photons between squeezing (`sinh²r = y n̄`) and the
    /// coherent amplitude (`|α|² = (1-y) n̄`).
    pub fn from_photons(n_bar: f64, squeeze_fraction: f64) -> Result<Self> {
        if !(n_bar >= 0.0 && n_bar.is_finite()) {
            return Err(ProbeError::domain("mean photon number must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&squeeze_fraction) {
            return Err(ProbeError::domain(format!("squeezing fraction must lie in [0, 1], got {squeeze_fraction}")));
        }
        let r = (squeeze_fraction * n_bar).sqrt().asinh();
        let alpha = ((1.0 - squeeze_fraction) * n_bar).sqrt();
        Self::new(alpha, 0.0, r)
    }

    pub fn squeezed_photons(&self) -> f64 {
        let s = self.r.sinh();
        s * s
    }

    /// `sinh²r + |α|²`
    pub fn mean_photons(&self) -> f64 {
        self.squeezed_photons() + self.alpha_mag * self.alpha_mag
    }

    /// `sinh²r / n̄`; zero for the vacuum.
    pub fn squeezing_fraction(&self) -> f64 {
        let n = self.mean_photons();
        if n == 0.0 {
            0.0
        } else {
            self.squeezed_photons() / n
        }
    }
}

/// Both radicands of the variance part, checked and clamped.
fn radicands(s1: &QuadPair, s2: &QuadPair) -> Result<(f64, f64)> {
    s1.validate()?;
    s2.validate()?;
    let p = (s1.v_plus * s2.v_minus + 1.0) * (s1.v_minus * s2.v_plus + 1.0);
    let l = s1.excess_purity() * s2.excess_purity();
    let clamp = |x: f64, name: &str| {
        if x >= 0.0 {
            Ok(x)
        } else if x > -RADICAND_TOLERANCE {
            Ok(0.0)
        } else {
            Err(ProbeError::domain(format!("negative {name} radicand {x:e}: non-physical variances")))
        }
    };
    Ok((clamp(p, "cross")?, clamp(l, "purity")?))
}

/// `s - 2` where the variance part of the fidelity is `2/s`,
/// `s = √P - √Λ`. Evaluated from the variance differences so that nearby
/// states do not lose their separation to cancellation.
fn variance_gap(s1: &QuadPair, s2: &QuadPair, p: f64, lam: f64) -> f64 {
    let (a, b) = (s1.v_plus, s1.v_minus);
    let dp = s2.v_plus - a;
    let dq = s2.v_minus - b;
    if dp == 0.0 && dq == 0.0 {
        return 0.0;
    }
    let mu1 = (a * b - 1.0).max(0.0);
    // cd - ab
    let m = a * dq + b * dp + dp * dq;
    // (Δ+4)² - 16P as an explicit quadratic form in the differences.
    let e = (2.0 * m - dp * dq).powi(2) - 8.0 * dp * dq * mu1;
    let e = e.max(0.0);
    let delta = (2.0 * a + dp) * (2.0 * b + dq);
    let sp = p.sqrt();
    // P - 4 = 4μ1 + 2m - pq + μ1(μ1 + m), written without subtracting 4.
    let p_minus_4 = 4.0 * mu1 + 2.0 * m - dp * dq + mu1 * (mu1 + m);
    let sp_minus_2 = (p_minus_4 / (sp + 2.0)).max(0.0);
    let denom = (delta + 4.0 + 4.0 * sp) * (sp_minus_2 + lam.sqrt());
    if denom == 0.0 {
        0.0
    } else {
        e / denom
    }
}

/// `-ln D(x)` of the displacement factor.
fn displacement_exponent(s1: &QuadPair, s2: &QuadPair) -> f64 {
    let xr = s2.disp_re - s1.disp_re;
    let xi = s2.disp_im - s1.disp_im;
    2.0 * xr * xr / (s1.v_plus + s2.v_plus) + 2.0 * xi * xi / (s1.v_minus + s2.v_minus)
}

/// Uhlmann fidelity of two single-mode Gaussian states at relative state
/// angle zero: `F = 2/{√[(V1⁺V2⁻+1)(V1⁻V2⁺+1)] - √[(V1⁺V1⁻-1)(V2⁺V2⁻-1)]} · D(x)`.
pub fn fidelity(s1: &QuadPair, s2: &QuadPair) -> Result<f64> {
    let (p, lam) = radicands(s1, s2)?;
    let s = 2.0 + variance_gap(s1, s2, p, lam);
    let f = 2.0 / s * (-displacement_exponent(s1, s2)).exp();
    Ok(f.min(1.0))
}

/// `1 - √F`, computed without forming `F` first. The squared Bures
/// distance is twice this value.
pub fn bures_infidelity(s1: &QuadPair, s2: &QuadPair) -> Result<f64> {
    let (p, lam) = radicands(s1, s2)?;
    let gap = variance_gap(s1, s2, p, lam);
    let s = 2.0 + gap;
    // 1 - √(2/s)
    let u = gap / (s.sqrt() * (s.sqrt() + std::f64::consts::SQRT_2));
    // 1 - √D
    let w = -(-0.5 * displacement_exponent(s1, s2)).exp_m1();
    Ok(u + w - u * w)
}

/// `d_B² = 2(1 - √F)`
pub fn bures_distance_sq(s1: &QuadPair, s2: &QuadPair) -> Result<f64> {
    Ok(2.0 * bures_infidelity(s1, s2)?)
}

/// Finite-difference stencil for [`qfi_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// `F(ρ_Θ, ρ_{Θ+h})`, the textbook form. First order in `h`.
    Forward,
    /// `F(ρ_{Θ-h/2}, ρ_{Θ+h/2})`. Second order in `h`.
    #[default]
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiOptions {
    pub step: f64,
    pub max_halvings: u32,
    pub rel_tol: f64,
    pub stencil: Stencil,
}

impl Default for QfiOptions {
    fn default() -> Self {
        Self { step: 1e-6, max_halvings: 10, rel_tol: 1e-4, stencil: Stencil::Central }
    }
}

/// `8(1 - √F)/h²` for a single step.
pub fn bures_quotient<F>(family: F, theta: f64, step: f64, stencil: Stencil) -> Result<f64>
where
    F: Fn(f64) -> Result<QuadPair>,
{
    let (lo, hi) = match stencil {
        Stencil::Forward => (theta, theta + step),
        Stencil::Central => (theta - 0.5 * step, theta + 0.5 * step),
    };
    let s1 = family(lo)?;
    let s2 = family(hi)?;
    Ok(8.0 * bures_infidelity(&s1, &s2)? / (step * step))
}

/// QFI of a one-parameter family from the Bures distance,
/// `H = lim 8(1 - √F(ρ_Θ, ρ_{Θ+dΘ}))/dΘ²`.
///
/// The step is halved up to `max_halvings` times; successive Richardson
/// extrapolants must agree to `rel_tol` or a non-convergence error is
/// returned.
pub fn qfi_numeric<F>(family: F, theta: f64, opts: QfiOptions) -> Result<f64>
where
    F: Fn(f64) -> Result<QuadPair>,
{
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(ProbeError::domain("finite-difference step must be positive"));
    }
    let order = match opts.stencil {
        Stencil::Forward => 2.0,
        Stencil::Central => 4.0,
    };
    let mut step = opts.step;
    let mut prev_raw = bures_quotient(&family, theta, step, opts.stencil)?;
    let mut prev = prev_raw;
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_halvings {
        step *= 0.5;
        let raw = bures_quotient(&family, theta, step, opts.stencil)?;
        let extrapolated = (order * raw - prev_raw) / (order - 1.0);
        change = (extrapolated - prev).abs();
        if change <= opts.rel_tol * extrapolated.abs().max(f64::MIN_POSITIVE) {
            return Ok(extrapolated.max(0.0));
        }
        prev_raw = raw;
        prev = extrapolated;
    }
    Err(ProbeError::NonConvergence { what: "Bures finite-difference QFI", change })
}
