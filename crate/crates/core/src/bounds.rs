//! Cramér-Rao lower bounds on the relative error `Δr_s/r_s`.
//!
//! Since δ is linear in `r_s`, `r_s·dΘ/dr_s = δ·dΘ/dδ` and the bound is
//! `1/(δ·|dΘ/dδ|·√(N·H))` with `H` the squeezed-coherent QFI evaluated at
//! the overlap `Θ`.

use std::cell::RefCell;

use crate::channel::qfi_squeezed_coherent_deficit;
use crate::error::{ProbeError, Result};
use crate::gaussian::GaussianProbe;
use crate::optimize::{bisect, minimize_on_interval, ScanOptions};
use crate::overlap::{
    at_rect_kink, dtheta_ddelta, operating_exponent, overlap, overlap_deficit, redshift_delta, GeoConfig,
    ProfileFamily, ProfileSpec,
};
use crate::parallel::{map_ordered, map_sequential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    pub geo: GeoConfig,
    pub spec: ProfileSpec,
    pub probe: GaussianProbe,
    /// Transmission amplitude of the lossy link.
    pub channel_t: f64,
    /// Number of repetitions.
    pub n_meas: u64,
}

impl BoundQuery {
    pub fn new(geo: GeoConfig, spec: ProfileSpec, probe: GaussianProbe, channel_t: f64, n_meas: u64) -> Result<Self> {
        let q = Self { geo, spec, probe, channel_t, n_meas };
        q.validate()?;
        Ok(q)
    }

    /// Earth-to-geostationary link with the default profile of `family`,
    /// a perfect channel and `N = σ/10`.
    pub fn baseline(family: ProfileFamily, probe: GaussianProbe) -> Self {
        let spec = ProfileSpec::baseline(family);
        Self {
            geo: GeoConfig::earth_geostationary(),
            spec,
            probe,
            channel_t: 1.0,
            n_meas: measurements_from_sigma(spec.sigma),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.geo.validate()?;
        self.spec.validate()?;
        if self.n_meas == 0 {
            return Err(ProbeError::domain("at least one measurement is required"));
        }
        if !(0.0..=1.0).contains(&self.channel_t) {
            return Err(ProbeError::domain(format!("transmission t must lie in [0, 1], got {}", self.channel_t)));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        redshift_delta(&self.geo)
    }

    pub fn with_eps(self, eps: f64) -> Self {
        Self { spec: self.spec.with_eps(eps), ..self }
    }

    /// Detector detuned so that `(δ - eps)·ω₀ = shift`.
    pub fn with_shift(self, shift: f64) -> Self {
        let eps = self.spec.eps_for_shift(self.delta(), shift);
        self.with_eps(eps)
    }

    fn n(&self) -> f64 {
        self.n_meas as f64
    }
}

/// Everything computed on the way to a bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub delta: f64,
    pub eps: f64,
    /// `(δ - eps)·ω₀` in Hz.
    pub shift: f64,
    /// Gaussian operating point `x = shift²/(8σ²)`, reported for every family.
    pub operating_x: f64,
    pub theta: f64,
    pub deficit: f64,
    pub dtheta_drs: f64,
    pub qfi: f64,
    pub bound: f64,
}

pub fn evaluate_bound(q: &BoundQuery) -> Result<BoundReport> {
    q.validate()?;
    let delta = q.delta();
    let spec = &q.spec;
    let deficit = overlap_deficit(delta, spec)?;
    let theta = if deficit < 0.5 { 1.0 - deficit } else { overlap(delta, spec)? };
    let slope = dtheta_ddelta(delta, spec)?;
    let qfi = qfi_squeezed_coherent_deficit(q.channel_t, deficit, &q.probe)?;
    let dtheta_drs = if q.geo.r_s > 0.0 { slope * delta / q.geo.r_s } else { 0.0 };
    let report = BoundReport {
        delta,
        eps: spec.eps,
        shift: spec.shift(delta),
        operating_x: operating_exponent(delta, spec),
        theta,
        deficit,
        dtheta_drs,
        qfi,
        bound: f64::INFINITY,
    };
    let sensitivity = (delta * slope).abs();
    if sensitivity == 0.0 {
        return Err(ProbeError::Divergent("dΘ/dr_s = 0 at this operating point".into()));
    }
    if qfi == 0.0 {
        return Err(ProbeError::Divergent("the probe carries no information about Θ".into()));
    }
    Ok(BoundReport { bound: 1.0 / (sensitivity * (q.n() * qfi).sqrt()), ..report })
}

pub fn rel_error_bound(q: &BoundQuery) -> Result<f64> {
    evaluate_bound(q).map(|r| r.bound)
}

/// Fully squeezed vacuum probe, Gaussian profile, `t = 1`, `eps → δ`:
/// `σ/(ω₀δ√(N sinh²r))`.
pub fn limit_fully_squeezed_gaussian(q: &BoundQuery) -> f64 {
    let s = &q.spec;
    s.sigma / (s.omega0 * q.delta() * (q.n() * q.probe.squeezed_photons()).sqrt())
}

/// Coherent probe, rectangular profile: `σ/(2ω₀δ t|α|√N)`. Exact for any
/// detuning strictly inside the rectangle.
pub fn limit_coherent_rect(q: &BoundQuery) -> f64 {
    let s = &q.spec;
    s.sigma / (2.0 * s.omega0 * q.delta() * q.channel_t * q.probe.alpha_mag * q.n().sqrt())
}

/// Fully squeezed vacuum probe, rectangular profile, `t = 1`, `Θ → 1`:
/// `√(σ|δ - eps|/(2ω₀N sinh²r))/δ`.
///
/// With `η = ω₀|δ - eps|/σ`, the squeezed QFI tends to `2 sinh²r/η` and
/// `r_s·|dΘ/dr_s| = δω₀/σ`, which gives this form. It holds while
/// `4η sinh²r ≪ 1`.
pub fn limit_fully_squeezed_rect(q: &BoundQuery) -> Result<f64> {
    let delta = q.delta();
    let s = &q.spec;
    let offset = (delta - s.eps).abs();
    if at_rect_kink(delta, s.eps) {
        return Err(ProbeError::Kink);
    }
    Ok((s.sigma * offset / (2.0 * s.omega0 * q.n() * q.probe.squeezed_photons())).sqrt() / delta)
}

/// How the coherent-state QFI is normalized when quoting constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfiConvention {
    /// `H = 4|tα|²`, the normalization of the Bures-distance definition.
    Bures,
    /// `H = |tα|²`, which reproduces the commonly quoted constant `2e^{1/2} ≈ 3.3`.
    Unscaled,
}

impl QfiConvention {
    /// Constant `c` in `c·σ/(ω₀δ t|α|√N)` at the optimal Gaussian operating point.
    pub fn gaussian_coherent_constant(self) -> f64 {
        match self {
            QfiConvention::Bures => 0.5f64.exp(),
            QfiConvention::Unscaled => 2.0 * 0.5f64.exp(),
        }
    }
}

/// Gaussian profile, coherent probe, optimal detuning (`x = 1/2`).
pub fn gaussian_coherent_optimum(q: &BoundQuery, convention: QfiConvention) -> f64 {
    let s = &q.spec;
    convention.gaussian_coherent_constant() * s.sigma
        / (s.omega0 * q.delta() * q.channel_t * q.probe.alpha_mag * q.n().sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEpsilon {
    /// `δ - 2σ/ω₀`.
    pub eps_analytic: f64,
    /// Always 1/2.
    pub x_analytic: f64,
    pub eps_numeric: f64,
    pub x_numeric: f64,
}

/// Bound as a function of `δ` alone; `r_s` cancels.
fn bound_at_delta(delta: f64, spec: &ProfileSpec, probe: &GaussianProbe, t: f64, n: f64) -> Result<f64> {
    let deficit = overlap_deficit(delta, spec)?;
    let sensitivity = (delta * dtheta_ddelta(delta, spec)?).abs();
    let qfi = qfi_squeezed_coherent_deficit(t, deficit, probe)?;
    if sensitivity == 0.0 || qfi == 0.0 {
        return Err(ProbeError::Divergent("dΘ/dr_s = 0 at this operating point".into()));
    }
    Ok(1.0 / (sensitivity * (n * qfi).sqrt()))
}

fn shift_scan() -> ScanOptions {
    ScanOptions { points: 101, x_tol: 1e-8, flat_tol: 1e-12 }
}

/// Minimizes `objective(shift)` over `shift ∈ [1e-9σ, max(8σ, δω₀)]` on a
/// logarithmic axis. Negative shifts mirror positive ones.
fn minimize_over_shift<F: Fn(f64) -> f64>(spec: &ProfileSpec, delta: f64, objective: F) -> (f64, f64) {
    let lo = (1e-9 * spec.sigma).log10();
    let hi = (8.0 * spec.sigma).max(delta * spec.omega0).log10();
    let best = minimize_on_interval(|e| objective(10f64.powf(e)), lo, hi, &shift_scan());
    (10f64.powf(best.x), best.value)
}

/// Analytic and numerically minimized detuning for a Gaussian profile and a
/// coherent probe on a perfect channel.
pub fn optimal_epsilon_gaussian(spec: &ProfileSpec, delta: f64) -> Result<GaussianEpsilon> {
    spec.validate()?;
    if spec.family != ProfileFamily::Gaussian {
        return Err(ProbeError::domain("optimal_epsilon_gaussian needs a gaussian profile"));
    }
    let probe = GaussianProbe::coherent(1.0)?;
    let objective = |shift: f64| {
        let s = spec.with_eps(spec.eps_for_shift(delta, shift));
        bound_at_delta(delta, &s, &probe, 1.0, 1.0).unwrap_or(f64::INFINITY)
    };
    let (shift, _) = minimize_over_shift(spec, delta, objective);
    let numeric = spec.with_eps(spec.eps_for_shift(delta, shift));
    Ok(GaussianEpsilon {
        eps_analytic: delta - 2.0 * spec.sigma / spec.omega0,
        x_analytic: 0.5,
        eps_numeric: numeric.eps,
        x_numeric: operating_exponent(delta, &numeric),
    })
}

/// Detector setting minimizing the bound for the query's profile, probe
/// and channel. `eps = 0` (no detuning) is always among the candidates.
pub fn optimize_operating_point(q: &BoundQuery) -> Result<BoundReport> {
    q.validate()?;
    let delta = q.delta();
    let objective = |shift: f64| rel_error_bound(&q.with_shift(shift)).unwrap_or(f64::INFINITY);
    let (shift, value) = minimize_over_shift(&q.spec, delta, objective);
    let detuned = evaluate_bound(&q.with_shift(shift));
    let undetuned = evaluate_bound(&q.with_eps(0.0));
    match (detuned, undetuned) {
        (Ok(a), Ok(b)) => Ok(if b.bound < a.bound { b } else { a }),
        (Ok(a), Err(_)) => Ok(a),
        (Err(_), Ok(b)) => Ok(b),
        (Err(e), Err(_)) if value.is_finite() => Err(e),
        _ => Err(ProbeError::Divergent("no detector setting gives a finite bound".into())),
    }
}

/// Shift `(δ - eps)·ω₀ ≥ 0` at which the overlap drops to `target`.
pub fn shift_for_overlap(spec: &ProfileSpec, delta: f64, target: f64) -> Result<f64> {
    spec.validate()?;
    if !(target > 0.0 && target < 1.0) {
        return Err(ProbeError::domain(format!("target overlap must lie in (0, 1), got {target}")));
    }
    if spec.family == ProfileFamily::Gaussian {
        return Ok(spec.sigma * (-8.0 * target.ln()).sqrt());
    }
    let want = 1.0 - target;
    let failure = RefCell::new(None);
    let f = |shift: f64| match overlap_deficit(delta, &spec.with_eps(spec.eps_for_shift(delta, shift))) {
        Ok(d) => d - want,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let hi = spec.sigma * (2.0 + 20.0 * spec.delta_smooth);
    let root = bisect(f, 0.0, hi, spec.sigma * 1e-13);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    root.ok_or_else(|| ProbeError::domain(format!("overlap {target} is not reached for this profile")))
}

/// `r` such that `e^{-2r}` is `db` decibels below shot noise.
pub fn squeeze_db_to_r(db: f64) -> Result<f64> {
    if !(db >= 0.0 && db.is_finite()) {
        return Err(ProbeError::domain(format!("squeezing in dB must be finite and >= 0, got {db}")));
    }
    Ok(db * std::f64::consts::LN_10 / 20.0)
}

/// Coherent pulse of `n_coherent` photons with `db` of amplitude squeezing.
pub fn bright_squeezed_probe(n_coherent: f64, db: f64) -> Result<GaussianProbe> {
    if !(n_coherent >= 0.0) {
        return Err(ProbeError::domain("coherent photon number must be >= 0"));
    }
    GaussianProbe::new(n_coherent.sqrt(), 0.0, squeeze_db_to_r(db)?)
}

/// `N = σ/10` rounded half up, at least 1.
pub fn measurements_from_sigma(sigma: f64) -> u64 {
    ((sigma / 10.0 + 0.5).floor() as u64).max(1)
}

/// Diffraction-limited link: `t = t₀√(2/(1 + (L/z_R)²))` for `L ≥ z_R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighLink {
    pub z_r: f64,
    pub t0: f64,
}

impl RayleighLink {
    pub fn new(z_r: f64, t0: f64) -> Result<Self> {
        if !(z_r > 0.0 && z_r.is_finite()) {
            return Err(ProbeError::domain("Rayleigh length must be positive"));
        }
        if !(0.0..=1.0).contains(&t0) {
            return Err(ProbeError::domain("baseline transmission must lie in [0, 1]"));
        }
        Ok(Self { z_r, t0 })
    }

    /// `z_R = πw₀²/λ`.
    pub fn from_beam(waist: f64, wavelength: f64, t0: f64) -> Result<Self> {
        if !(waist > 0.0 && wavelength > 0.0) {
            return Err(ProbeError::domain("waist and wavelength must be positive"));
        }
        Self::new(std::f64::consts::PI * waist * waist / wavelength, t0)
    }
}

pub fn rayleigh_transmission(link: &RayleighLink, distance: f64) -> Result<f64> {
    if !(distance >= link.z_r) {
        return Err(ProbeError::domain(format!("distance {distance} m is inside the Rayleigh length {} m", link.z_r)));
    }
    let ratio = distance / link.z_r;
    Ok((link.t0 * (2.0 / (1.0 + ratio * ratio)).sqrt()).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltitudePoint {
    pub distance: f64,
    pub t: f64,
    pub delta: f64,
    pub eps: f64,
    /// NaN where the bound diverges.
    pub theta: f64,
    /// `+∞` where no detector setting gives a finite bound.
    pub bound: f64,
}

fn altitude_point(link: &RayleighLink, q: &BoundQuery, distance: f64) -> Result<AltitudePoint> {
    let t = rayleigh_transmission(link, distance)?;
    let geo = q.geo.with_separation(distance)?;
    let local = BoundQuery { geo, channel_t: t, ..*q };
    let delta = local.delta();
    match optimize_operating_point(&local) {
        Ok(r) => Ok(AltitudePoint { distance, t, delta, eps: r.eps, theta: r.theta, bound: r.bound }),
        Err(ProbeError::Divergent(_) | ProbeError::Kink) => {
            Ok(AltitudePoint { distance, t, delta, eps: q.spec.eps, theta: f64::NAN, bound: f64::INFINITY })
        }
        Err(e) => Err(e),
    }
}

/// Bound versus Alice-Bob separation with Rayleigh loss, re-optimizing the
/// detector setting at every distance. Grid points are evaluated in
/// parallel when the `parallel` feature is on.
pub fn sweep_altitude(link: &RayleighLink, q: &BoundQuery, distances: &[f64]) -> Result<Vec<AltitudePoint>> {
    q.validate()?;
    map_ordered(distances, |&l| altitude_point(link, q, l)).into_iter().collect()
}

/// Single-threaded [`sweep_altitude`].
pub fn sweep_altitude_sequential(link: &RayleighLink, q: &BoundQuery, distances: &[f64]) -> Result<Vec<AltitudePoint>> {
    q.validate()?;
    map_sequential(distances, |&l| altitude_point(link, q, l)).into_iter().collect()
}

/// Grid point with the smallest bound; ties go to the shorter distance.
pub fn best_altitude(points: &[AltitudePoint]) -> Option<&AltitudePoint> {
    points.iter().filter(|p| p.bound.is_finite()).fold(None, |best: Option<&AltitudePoint>, p| match best {
        Some(b) if b.bound <= p.bound => Some(b),
        _ => Some(p),
    })
}
