//! Mode overlap `Θ` between Alice's gravitationally redshifted wavepacket
//! and Bob's detector mode.
//!
//! Frequencies are ordinary frequencies in hertz. The detector is detuned
//! by a fractional `eps` in both centre and width (`b = c = 1 - eps`), and
//! the redshift rescales Alice's profile by `a = 1 - δ`. Every overlap is
//! evaluated through the frequency shift `S = (δ - eps)·ω₀` so that the
//! ~1e-10 fractional offsets never pass through `1 - δ` in floating point.

use crate::error::{ProbeError, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Smallest accepted `ω₀/σ`; the overlaps ignore negative frequencies.
pub const MIN_FREQUENCY_RATIO: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoConfig {
    /// Alice's radius in metres.
    pub r_a: f64,
    /// Bob's radius in metres.
    pub r_b: f64,
    /// Schwarzschild radius in metres.
    pub r_s: f64,
}

impl GeoConfig {
    pub fn new(r_a: f64, r_b: f64, r_s: f64) -> Result<Self> {
        let geo = Self { r_a, r_b, r_s };
        geo.validate()?;
        Ok(geo)
    }

    /// Earth's surface to geostationary orbit.
    pub fn earth_geostationary() -> Self {
        use crate::consts::*;
        Self { r_a: EARTH_RADIUS, r_b: GEOSTATIONARY_RADIUS, r_s: EARTH_SCHWARZSCHILD_RADIUS }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_s >= 0.0 && self.r_s < self.r_a && self.r_a < self.r_b && self.r_b.is_finite()) {
            return Err(ProbeError::domain(format!(
                "geometry must satisfy 0 <= r_s < r_a < r_b, got r_s={}, r_a={}, r_b={}",
                self.r_s, self.r_a, self.r_b
            )));
        }
        Ok(())
    }

    /// Coordinate separation `L = r_B - r_A`.
    pub fn separation(&self) -> f64 {
        self.r_b - self.r_a
    }

    /// Same Alice and mass, Bob at `r_A + distance`.
    pub fn with_separation(&self, distance: f64) -> Result<Self> {
        Self::new(self.r_a, self.r_a + distance, self.r_s)
    }
}

/// `δ ≈ (r_s/2)·L/(r_A(r_A + L))`, the default redshift parameter.
pub fn redshift_delta(geo: &GeoConfig) -> f64 {
    geo.r_s * delta_per_rs(geo)
}

/// `dδ/dr_s` for the default form; δ is linear in `r_s`.
pub fn delta_per_rs(geo: &GeoConfig) -> f64 {
    let l = geo.separation();
    0.5 * l / (geo.r_a * (geo.r_a + l))
}

/// First-order form keeping the geodesic correction `r_s ln(r_B/r_A)` in
/// the measured distance.
pub fn redshift_delta_geodesic(geo: &GeoConfig) -> f64 {
    let measured = geo.separation() + geo.r_s * (geo.r_b / geo.r_a).ln();
    0.5 * geo.r_s * measured / (geo.r_a * (geo.r_a + measured))
}

/// `1 - √(f(r_A)/f(r_B))` with `f(r) = 1 - r_s/r`, without cancellation.
pub fn redshift_delta_exact(geo: &GeoConfig) -> f64 {
    let f_b = 1.0 - geo.r_s / geo.r_b;
    let f_a = 1.0 - geo.r_s / geo.r_a;
    let one_minus_q = geo.r_s * geo.separation() / (geo.r_a * geo.r_b * f_b);
    one_minus_q / (1.0 + (f_a / f_b).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileFamily {
    Gaussian,
    Rect,
    TanhRect,
}

impl ProfileFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ProfileFamily::Gaussian => "gaussian",
            ProfileFamily::Rect => "rect",
            ProfileFamily::TanhRect => "tanh",
        }
    }
}

impl std::str::FromStr for ProfileFamily {
    type Err = ProbeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(ProfileFamily::Gaussian),
            "rect" | "rectangular" => Ok(ProfileFamily::Rect),
            "tanh" | "tanh_rect" | "tanh-rect" => Ok(ProfileFamily::TanhRect),
            other => Err(ProbeError::domain(format!("unknown profile family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    pub family: ProfileFamily,
    /// Centre frequency in Hz.
    pub omega0: f64,
    /// Width in Hz (standard deviation for the Gaussian, full width for the
    /// rectangles).
    pub sigma: f64,
    /// Edge smoothing of the tanh rectangle, relative to `sigma`.
    pub delta_smooth: f64,
    /// Detector detuning.
    pub eps: f64,
}

impl ProfileSpec {
    pub fn new(family: ProfileFamily, omega0: f64, sigma: f64, delta_smooth: f64, eps: f64) -> Result<Self> {
        let spec = Self { family, omega0, sigma, delta_smooth, eps };
        spec.validate()?;
        Ok(spec)
    }

    pub fn baseline(family: ProfileFamily) -> Self {
        use crate::consts::{CENTRE_FREQUENCY, SPECTRAL_WIDTH};
        Self { family, omega0: CENTRE_FREQUENCY, sigma: SPECTRAL_WIDTH, delta_smooth: 0.01, eps: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.omega0.is_finite()) {
            return Err(ProbeError::domain("profile width must be positive"));
        }
        if self.omega0 / self.sigma < MIN_FREQUENCY_RATIO {
            return Err(ProbeError::domain(format!(
                "omega0/sigma = {} is below {MIN_FREQUENCY_RATIO}",
                self.omega0 / self.sigma
            )));
        }
        if self.family == ProfileFamily::TanhRect && !(self.delta_smooth > 0.0 && self.delta_smooth.is_finite()) {
            return Err(ProbeError::domain("tanh profile needs delta_smooth > 0"));
        }
        if !self.eps.is_finite() {
            return Err(ProbeError::domain("detuning must be finite"));
        }
        Ok(())
    }

    pub fn with_eps(self, eps: f64) -> Self {
        Self { eps, ..self }
    }

    /// Detuning that puts the frequency shift `(δ - eps)·ω₀` at `shift` Hz.
    pub fn eps_for_shift(&self, delta: f64, shift: f64) -> f64 {
        delta - shift / self.omega0
    }

    /// `(δ - eps)·ω₀` in Hz.
    pub fn shift(&self, delta: f64) -> f64 {
        (delta - self.eps) * self.omega0
    }
}

/// Gaussian operating point `x = (δ - eps)²ω₀²/(8σ²)`.
pub fn operating_exponent(delta: f64, spec: &ProfileSpec) -> f64 {
    let s = spec.shift(delta) / spec.sigma;
    s * s / 8.0
}

/// `Θ` for whichever family `spec` names.
pub fn overlap(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    match spec.family {
        ProfileFamily::Gaussian => overlap_gaussian(delta, spec),
        ProfileFamily::Rect => overlap_rect(delta, spec),
        ProfileFamily::TanhRect => overlap_tanh(delta, spec),
    }
}

fn expect_family(spec: &ProfileSpec, family: ProfileFamily) -> Result<()> {
    spec.validate()?;
    if spec.family != family {
        return Err(ProbeError::domain(format!("expected a {} profile, got {}", family.name(), spec.family.name())));
    }
    Ok(())
}

/// Matched-detector Gaussian overlap `Θ = exp(-x)`.
pub fn overlap_gaussian(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    expect_family(spec, ProfileFamily::Gaussian)?;
    Ok((-operating_exponent(delta, spec)).exp())
}

/// Gaussian overlap for an arbitrary detector: centre `b·ω₀` with
/// `b = 1 - centre_detuning`, width `c·σ`.
///
/// `Θ = √(2c(1-δ)/(c² + (1-δ)²)) · exp[-(1-δ-b)²ω₀²/(4(c² + (1-δ)²)σ²)]`
pub fn overlap_gaussian_general(
    delta: f64,
    centre_detuning: f64,
    width_factor: f64,
    spec: &ProfileSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(width_factor > 0.0) {
        return Err(ProbeError::domain("detector width factor must be positive"));
    }
    let a = 1.0 - delta;
    let c = width_factor;
    let denom = c * c + a * a;
    let prefactor = (2.0 * c * a / denom).sqrt();
    let offset = (centre_detuning - delta) * spec.omega0 / spec.sigma;
    Ok(prefactor * (-(offset * offset) / (4.0 * denom)).exp())
}

/// First-order rectangular overlap `max(0, 1 - ω₀|δ - eps|/σ)`.
pub fn overlap_rect(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    expect_family(spec, ProfileFamily::Rect)?;
    Ok((1.0 - spec.shift(delta).abs() / spec.sigma).max(0.0))
}

/// Unnormalized tanh window `g(v) = tanh((1+v)/Δ) + tanh((1-v)/Δ)` in the
/// scaled offset `v = 2(ω - ω₀)/σ`, evaluated as
/// `sinh(2/Δ)/(cosh((1+v)/Δ)cosh((1-v)/Δ))` in log space with the large
/// exponents cancelled exactly.
fn tanh_window(v: f64, smooth: f64) -> f64 {
    let av = v.abs();
    let core = if av <= 1.0 { 0.0 } else { -2.0 * (av - 1.0) / smooth };
    let a = ((1.0 + v) / smooth).abs();
    let b = ((1.0 - v) / smooth).abs();
    (core + (-(-4.0 / smooth).exp_m1()).ln() + std::f64::consts::LN_2
        - (-2.0 * a).exp().ln_1p()
        - (-2.0 * b).exp().ln_1p())
    .exp()
}

/// `g'(v) = g(v)·(tanh((1-v)/Δ) - tanh((1+v)/Δ))/Δ`
fn tanh_window_slope(v: f64, smooth: f64) -> f64 {
    let a = (1.0 + v) / smooth;
    let b = (1.0 - v) / smooth;
    tanh_window(v, smooth) * (b.tanh() - a.tanh()) / smooth
}

/// `∫|g|² dω = 4Δσ(-1/2 + coth(2/Δ)/Δ)`
fn tanh_norm_sq(sigma: f64, smooth: f64) -> f64 {
    4.0 * smooth * sigma * (-0.5 + 1.0 / ((2.0 / smooth).tanh() * smooth))
}

/// `δ` and `eps` equal up to a few ulps, where the sign of the offset is
/// rounding noise.
pub fn at_rect_kink(delta: f64, eps: f64) -> bool {
    (delta - eps).abs() <= 8.0 * f64::EPSILON * delta.abs().max(eps.abs())
}

/// Normalized tanh-smoothed rectangle evaluated at `offset = ω - ω₀` Hz.
pub fn tanh_profile(offset: f64, sigma: f64, smooth: f64) -> f64 {
    tanh_window(2.0 * offset / sigma, smooth) / tanh_norm_sq(sigma, smooth).sqrt()
}

/// Near a sharp edge `1 ± v` loses ~1e-13 relative accuracy to
/// cancellation, which sets the achievable per-panel accuracy.
fn tanh_quadrature() -> QuadOptions {
    QuadOptions { rel_floor: 1e-12, ..QuadOptions::default() }
}

/// Integration window and breakpoints in `u = ω - bω₀`, where Bob's mode is
/// centred at 0 and Alice's redshifted mode at `-S`.
fn tanh_panels(shift: f64, a: f64, b: f64, sigma: f64, smooth: f64) -> (f64, f64, Vec<f64>) {
    let half = 8.0 * sigma * smooth.mul_add(10.0, 0.0).max(1.0);
    let lo = (-shift).min(0.0) - half;
    let hi = (-shift).max(0.0) + half;
    let edge = smooth * sigma * 0.5;
    let mut cuts = Vec::with_capacity(16);
    for centre_edge in [-b * sigma * 0.5, b * sigma * 0.5, -shift - a * sigma * 0.5, -shift + a * sigma * 0.5] {
        cuts.push(centre_edge);
        for k in [1.0, 4.0, 16.0] {
            cuts.push(centre_edge - k * edge);
            cuts.push(centre_edge + k * edge);
        }
    }
    cuts.push(0.0);
    cuts.push(-shift);
    (lo, hi, cuts)
}

/// Overlap of two normalized tanh-smoothed rectangles, Alice's rescaled by
/// `a = 1 - δ` and Bob's by `b = 1 - eps`:
/// `Θ = ∫ (ab)^{-1/2} F(ω/a) F(ω/b) dω`.
pub fn overlap_tanh(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    expect_family(spec, ProfileFamily::TanhRect)?;
    let (sigma, smooth) = (spec.sigma, spec.delta_smooth);
    let shift = spec.shift(delta);
    let (a, b) = (1.0 - delta, 1.0 - spec.eps);
    let scale = 1.0 / ((a * b).sqrt() * tanh_norm_sq(sigma, smooth));
    let integrand = |u: f64| {
        let va = 2.0 * (u + shift) / (a * sigma);
        let vb = 2.0 * u / (b * sigma);
        tanh_window(va, smooth) * tanh_window(vb, smooth)
    };
    let (lo, hi, cuts) = tanh_panels(shift, a, b, sigma, smooth);
    let opts = QuadOptions {
        abs_tol: tanh_quadrature().abs_tol / scale,
        fail_tol: tanh_quadrature().fail_tol / scale,
        ..tanh_quadrature()
    };
    let theta = scale * integrate(integrand, lo, hi, &cuts, &opts)?;
    Ok(theta.clamp(0.0, 1.0))
}

/// Below this shift (in units of `Δσ`) the tanh deficit and slope use
/// their leading-order expansion in the shift.
const TANH_TAYLOR_SHIFT: f64 = 1e-3;

fn in_taylor_regime(shift: f64, spec: &ProfileSpec) -> bool {
    shift.abs() < TANH_TAYLOR_SHIFT * spec.delta_smooth * spec.sigma
}

/// `K = ∫(∂(f_A - f_B)/∂S)² du` at `S = 0`, so that `1 - Θ ≈ ½S²K` and
/// `dΘ/dδ ≈ -ω₀SK` for small shifts.
fn tanh_curvature(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    let (sigma, smooth, omega0) = (spec.sigma, spec.delta_smooth, spec.omega0);
    let a = 1.0 - delta;
    let k = 1.0 / (a.sqrt() * tanh_norm_sq(sigma, smooth).sqrt());
    let integrand = |u: f64| {
        let v = 2.0 * u / (a * sigma);
        let d = k
            * (tanh_window_slope(v, smooth) * 2.0 / (a * sigma) * (1.0 + u / (a * omega0))
                + tanh_window(v, smooth) / (2.0 * a * omega0));
        d * d
    };
    let (lo, hi, cuts) = tanh_panels(0.0, a, a, sigma, smooth);
    // K is of order 1/(Δσ)²
    let magnitude = 1.0 / (smooth * sigma).powi(2);
    let opts = QuadOptions { abs_tol: 1e-12 * magnitude, fail_tol: 1e-9 * magnitude, ..tanh_quadrature() };
    integrate(integrand, lo, hi, &cuts, &opts)
}

/// `1 - Θ` for the tanh rectangles as `½∫(f_A - f_B)²`, which keeps its
/// relative precision when the modes nearly coincide.
fn overlap_deficit_tanh(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    let (sigma, smooth) = (spec.sigma, spec.delta_smooth);
    let shift = spec.shift(delta);
    if in_taylor_regime(shift, spec) {
        return Ok(0.5 * shift * shift * tanh_curvature(delta, spec)?);
    }
    let (a, b) = (1.0 - delta, 1.0 - spec.eps);
    let norm = tanh_norm_sq(sigma, smooth).sqrt();
    let (ka, kb) = (1.0 / (a.sqrt() * norm), 1.0 / (b.sqrt() * norm));
    let integrand = |u: f64| {
        let fa = ka * tanh_window(2.0 * (u + shift) / (a * sigma), smooth);
        let fb = kb * tanh_window(2.0 * u / (b * sigma), smooth);
        0.5 * (fa - fb) * (fa - fb)
    };
    let (lo, hi, cuts) = tanh_panels(shift, a, b, sigma, smooth);
    // f_A - f_B ~ (S/Δσ)·f near the edges while its noise stays ~1e-13·f
    let rel_floor = (1e-12 * smooth * sigma / shift.abs()).max(1e-12);
    let first = QuadOptions { rel_floor, ..tanh_quadrature() };
    let coarse = integrate(integrand, lo, hi, &cuts, &first)?;
    if coarse > 1e-3 {
        return Ok(coarse.min(1.0));
    }
    // second pass with a tolerance relative to the first estimate
    let floor = coarse.abs().max(f64::MIN_POSITIVE);
    let opts = QuadOptions { abs_tol: floor * 1e-8, fail_tol: floor * 1e-6, ..first };
    Ok(integrate(integrand, lo, hi, &cuts, &opts)?.clamp(0.0, 1.0))
}

/// `1 - Θ`, accurate even where `Θ` itself rounds to 1.
pub fn overlap_deficit(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    spec.validate()?;
    match spec.family {
        ProfileFamily::Gaussian => Ok(-(-operating_exponent(delta, spec)).exp_m1()),
        ProfileFamily::Rect => Ok((spec.shift(delta).abs() / spec.sigma).min(1.0)),
        ProfileFamily::TanhRect => overlap_deficit_tanh(delta, spec),
    }
}

/// `dΘ/dδ` of the tanh overlap by differentiating under the integral sign.
fn dtheta_ddelta_tanh(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    let (sigma, smooth, omega0) = (spec.sigma, spec.delta_smooth, spec.omega0);
    let shift = spec.shift(delta);
    if in_taylor_regime(shift, spec) {
        return Ok(-omega0 * shift * tanh_curvature(delta, spec)?);
    }
    let (a, b) = (1.0 - delta, 1.0 - spec.eps);
    let scale = 1.0 / ((a * b).sqrt() * tanh_norm_sq(sigma, smooth));
    let integrand = |u: f64| {
        let va = 2.0 * (u + shift) / (a * sigma);
        let vb = 2.0 * u / (b * sigma);
        let dva = 2.0 / (a * sigma) * (omega0 + (u + shift) / a);
        let gb = tanh_window(vb, smooth);
        tanh_window(va, smooth) * gb / (2.0 * a) + tanh_window_slope(va, smooth) * dva * gb
    };
    let (lo, hi, cuts) = tanh_panels(shift, a, b, sigma, smooth);
    // integrand is O(ω₀/σ) larger than the overlap integrand
    let magnitude = omega0 / sigma;
    let opts = QuadOptions {
        abs_tol: tanh_quadrature().abs_tol * magnitude / scale,
        fail_tol: tanh_quadrature().fail_tol * magnitude / scale,
        ..tanh_quadrature()
    };
    Ok(scale * integrate(integrand, lo, hi, &cuts, &opts)?)
}

/// `dΘ/dδ` at fixed detector setting.
pub fn dtheta_ddelta(delta: f64, spec: &ProfileSpec) -> Result<f64> {
    spec.validate()?;
    match spec.family {
        ProfileFamily::Gaussian => {
            let theta = (-operating_exponent(delta, spec)).exp();
            let shift = spec.shift(delta);
            Ok(-shift * spec.omega0 / (4.0 * spec.sigma * spec.sigma) * theta)
        }
        ProfileFamily::Rect => {
            let shift = spec.shift(delta);
            if at_rect_kink(delta, spec.eps) {
                Err(ProbeError::Kink)
            } else if shift.abs() >= spec.sigma {
                Ok(0.0)
            } else {
                Ok(-shift.signum() * spec.omega0 / spec.sigma)
            }
        }
        ProfileFamily::TanhRect => dtheta_ddelta_tanh(delta, spec),
    }
}

/// `dΘ/dr_s` by the chain rule through the redshift parameter.
pub fn dtheta_drs(geo: &GeoConfig, spec: &ProfileSpec) -> Result<f64> {
    geo.validate()?;
    Ok(dtheta_ddelta(redshift_delta(geo), spec)? * delta_per_rs(geo))
}
