//! Lossy two-beamsplitter channel: a known loss `t` followed by the
//! beamsplitter `Θ` to be estimated, with a thermal loss port `ĉ` and a
//! vacuum port `d̂`.

use crate::consts::{BOLTZMANN, PLANCK};
use crate::error::{ProbeError, Result};
use crate::gaussian::{GaussianProbe, QuadPair};
use crate::optimize::{maximize_on_interval, ScanOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Transmission amplitude of the loss stage.
    pub t: f64,
    /// Beamsplitter parameter under estimation.
    pub theta: f64,
    /// Mean thermal occupation of the loss port.
    pub n_th: f64,
}

impl ChannelConfig {
    pub fn new(t: f64, theta: f64, n_th: f64) -> Result<Self> {
        let cfg = Self { t, theta, n_th };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn lossy(t: f64, theta: f64) -> Result<Self> {
        Self::new(t, theta, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.t) {
            return Err(ProbeError::domain(format!("transmission t must lie in [0, 1], got {}", self.t)));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(ProbeError::domain(format!("Θ must lie in [0, 1], got {}", self.theta)));
        }
        if !(self.n_th >= 0.0 && self.n_th.is_finite()) {
            return Err(ProbeError::domain("thermal occupation must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }
}

/// Bose-Einstein occupation `1/(exp(hν/kT) - 1)`; zero at zero temperature.
pub fn planck_occupation(temperature: f64, freq: f64) -> Result<f64> {
    if !(temperature >= 0.0) {
        return Err(ProbeError::domain("temperature must be >= 0"));
    }
    if !(freq > 0.0) {
        return Err(ProbeError::domain("frequency must be > 0"));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = PLANCK * freq / (BOLTZMANN * temperature);
    Ok(1.0 / x.exp_m1())
}

/// Heisenberg-picture variance propagation through both stages:
/// `V_out = t²V_in + (1-t²)V_c`, then `V = Θ²V_out + (1-Θ²)`.
///
/// No range check on `Θ`, so finite-difference stencils may step past 1;
/// unphysical variances are still rejected.
pub fn propagate_unchecked(probe: &GaussianProbe, t: f64, theta: f64, n_th: f64) -> Result<QuadPair> {
    let t2 = t * t;
    let th2 = theta * theta;
    let loss_noise = 2.0 * n_th * (1.0 - t2);
    let v_plus = 1.0 + th2 * (t2 * (-2.0 * probe.r).exp_m1() + loss_noise);
    let v_minus = 1.0 + th2 * (t2 * (2.0 * probe.r).exp_m1() + loss_noise);
    let amp = theta * t * probe.alpha_mag;
    QuadPair::new(v_plus, v_minus, amp * probe.theta.cos(), amp * probe.theta.sin())
}

pub fn propagate(probe: &GaussianProbe, cfg: &ChannelConfig) -> Result<QuadPair> {
    cfg.validate()?;
    propagate_unchecked(probe, cfg.t, cfg.theta, cfg.n_th)
}

/// The one-parameter family `Θ ↦ ρ_Θ` for a fixed probe and loss.
pub fn output_family(probe: GaussianProbe, t: f64, n_th: f64) -> impl Fn(f64) -> Result<QuadPair> {
    move |theta| propagate_unchecked(&probe, t, theta, n_th)
}

/// QFI of a coherent probe with a thermal loss port:
/// `4|tα|²/(2ñΘ²(1-t²)+1) + 4ñ(1-t²)/(ñΘ²(1-t²)+1)`.
pub fn qfi_coherent_thermal(cfg: &ChannelConfig, alpha_mag: f64) -> Result<f64> {
    cfg.validate()?;
    let ChannelConfig { t, theta, n_th } = *cfg;
    let loss = 1.0 - t * t;
    let signal = 4.0 * (t * alpha_mag).powi(2) / (2.0 * n_th * theta * theta * loss + 1.0);
    let thermal = 4.0 * n_th * loss / (n_th * theta * theta * loss + 1.0);
    Ok(signal + thermal)
}

/// QFI of a squeezed coherent probe with vacuum ports.
///
/// The squeezing term is evaluated as
/// `4t²(2(Θt)⁴-2(Θt)²+1) sinh²r / [(1-t²Θ²)(2Θ²t²(1-t²Θ²) sinh²r + 1)]`
/// so that `r → 0` is regular. The displacement term keeps the coherent
/// angle: `4|αt|²(cos²θ/V⁺ + sin²θ/V⁻)`, which reduces to `4|αt|²/V⁺` at
/// the optimal angle θ = 0. Returns `+∞` for a pure squeezed output at
/// `tΘ = 1`.
pub fn qfi_squeezed_coherent(cfg: &ChannelConfig, probe: &GaussianProbe) -> Result<f64> {
    cfg.validate()?;
    if cfg.n_th != 0.0 {
        return Err(ProbeError::Unsupported(
            "squeezed-coherent closed form requires a vacuum loss port (n_th = 0)".into(),
        ));
    }
    Ok(squeezed_coherent_terms(cfg.t, cfg.theta, 1.0 - cfg.t * cfg.theta, probe))
}

/// Same as [`qfi_squeezed_coherent`] with `Θ = 1 - deficit`, keeping full
/// relative precision in `1 - tΘ` when `Θ` is too close to 1 to be stored.
pub fn qfi_squeezed_coherent_deficit(t: f64, deficit: f64, probe: &GaussianProbe) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(ProbeError::domain(format!("transmission t must lie in [0, 1], got {t}")));
    }
    if !(0.0..=1.0).contains(&deficit) {
        return Err(ProbeError::domain(format!("1 - Θ must lie in [0, 1], got {deficit}")));
    }
    let one_minus_tt = (1.0 - t) + t * deficit;
    Ok(squeezed_coherent_terms(t, 1.0 - deficit, one_minus_tt, probe))
}

fn squeezed_coherent_terms(t: f64, theta: f64, one_minus_tt: f64, probe: &GaussianProbe) -> f64 {
    let tt = t * theta;
    let tt2 = tt * tt;
    let mixing = one_minus_tt * (1.0 + tt);
    let sq = probe.squeezed_photons();

    let squeeze_term = if sq == 0.0 || t == 0.0 {
        0.0
    } else if mixing == 0.0 {
        f64::INFINITY
    } else {
        4.0 * t * t * (2.0 * tt2 * tt2 - 2.0 * tt2 + 1.0) * sq / (mixing * (2.0 * tt2 * mixing * sq + 1.0))
    };

    let signal = (probe.alpha_mag * t).powi(2);
    let displacement_term = if signal == 0.0 {
        0.0
    } else {
        let v_plus = 1.0 + tt2 * (-2.0 * probe.r).exp_m1();
        let v_minus = 1.0 + tt2 * (2.0 * probe.r).exp_m1();
        let (s, c) = probe.theta.sin_cos();
        4.0 * signal * (c * c / v_plus + s * s / v_minus)
    };
    squeeze_term + displacement_term
}

/// Picks the applicable closed form: squeezed-coherent for a vacuum loss
/// port, coherent-thermal for an unsqueezed probe.
pub fn qfi_closed_form(cfg: &ChannelConfig, probe: &GaussianProbe) -> Result<f64> {
    if cfg.n_th == 0.0 {
        qfi_squeezed_coherent(cfg, probe)
    } else if probe.r == 0.0 && probe.theta == 0.0 {
        qfi_coherent_thermal(cfg, probe.alpha_mag)
    } else {
        Err(ProbeError::Unsupported("no closed form for a squeezed probe with a thermal loss port".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingOptimum {
    pub squeeze_fraction: f64,
    pub qfi: f64,
}

/// Maximizes the squeezed-coherent QFI over the squeezing fraction
/// `y = sinh²r/n̄` at fixed mean photon number.
///
/// Coarse 101-point scan followed by golden-section refinement to 1e-6 in
/// `y`. Curves flat to 1e-12 return the smallest `y`.
pub fn optimize_squeezing_fraction(n_bar: f64, cfg: &ChannelConfig) -> Result<SqueezingOptimum> {
    if !(n_bar > 0.0 && n_bar.is_finite()) {
        return Err(ProbeError::domain("mean photon number must be positive"));
    }
    cfg.validate()?;
    let objective = |y: f64| {
        GaussianProbe::from_photons(n_bar, y).and_then(|p| qfi_squeezed_coherent(cfg, &p)).unwrap_or(f64::NEG_INFINITY)
    };
    let opts = ScanOptions { points: 101, x_tol: 1e-6, flat_tol: 1e-12 };
    let best = maximize_on_interval(objective, 0.0, 1.0, &opts);
    Ok(SqueezingOptimum { squeeze_fraction: best.x, qfi: best.value })
}
