//! First-order algebra of a mode-selective beamsplitter.
//!
//! Modes are unit vectors over the orthonormal basis `{a, a'', b}`: `a` is
//! the detector's mode, `a''` the part of the received field orthogonal to
//! it, and `b` the beamsplitter's empty input port. The commutator
//! `[m₁, m₂†]` of two modes is the Hermitian inner product of their
//! coefficient vectors.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{ProbeError, Result};

const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeVector {
    /// Coefficients on `a`, `a''`, `b`.
    pub coeffs: [Complex64; 3],
}

impl ModeVector {
    pub const fn new(coeffs: [Complex64; 3]) -> Self {
        Self { coeffs }
    }

    pub fn real(a: f64, a_unmatched: f64, b: f64) -> Self {
        Self::new([Complex64::new(a, 0.0), Complex64::new(a_unmatched, 0.0), Complex64::new(b, 0.0)])
    }

    pub fn a() -> Self {
        Self::real(1.0, 0.0, 0.0)
    }

    pub fn a_unmatched() -> Self {
        Self::real(0.0, 1.0, 0.0)
    }

    pub fn b() -> Self {
        Self::real(0.0, 0.0, 1.0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm_sq().sqrt()
    }
}

impl Add for ModeVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(std::array::from_fn(|i| self.coeffs[i] + rhs.coeffs[i]))
    }
}

impl Sub for ModeVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(std::array::from_fn(|i| self.coeffs[i] - rhs.coeffs[i]))
    }
}

impl Mul<ModeVector> for f64 {
    type Output = ModeVector;
    fn mul(self, rhs: ModeVector) -> ModeVector {
        ModeVector::new(rhs.coeffs.map(|c| c * self))
    }
}

impl Mul<ModeVector> for Complex64 {
    type Output = ModeVector;
    fn mul(self, rhs: ModeVector) -> ModeVector {
        ModeVector::new(rhs.coeffs.map(|c| c * self))
    }
}

/// `[m₁, m₂†] = Σ m₁ᵢ conj(m₂ᵢ)`.
pub fn commutator(m1: &ModeVector, m2: &ModeVector) -> Complex64 {
    m1.coeffs.iter().zip(&m2.coeffs).map(|(x, y)| x * y.conj()).sum()
}

fn check_fraction(kappa: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(ProbeError::domain(format!("matched fraction must lie in [0, 1], got {kappa}")));
    }
    Ok(())
}

/// Received mode `a' = √κ a + √(1-κ) a''`, a fraction `κ` of which
/// matches the detector.
pub fn make_input(kappa: f64) -> Result<ModeVector> {
    check_fraction(kappa)?;
    Ok(ModeVector::real(kappa.sqrt(), (1.0 - kappa).sqrt(), 0.0))
}

/// `v' = √(1-κ) a - √κ a''`, the mode orthogonal to `a'` within `{a, a''}`.
pub fn vacuum_partner(kappa: f64) -> Result<ModeVector> {
    check_fraction(kappa)?;
    Ok(ModeVector::real((1.0 - kappa).sqrt(), -kappa.sqrt(), 0.0))
}

/// Mode-selective beamsplitter with `√η = cos θ_bs`, acting only on `a`
/// and `b`: `a → √η a + √(1-η) b`, `b → √(1-η) a - √η b`, `a''` untouched.
///
/// Returns the transmitted image of `m` and the reflected output, which is
/// the image of the empty port `b`. The input must be a unit mode with no
/// `b` component.
pub fn apply_mode_bs(m: &ModeVector, theta_bs: f64) -> Result<(ModeVector, ModeVector)> {
    if (m.norm_sq() - 1.0).abs() > NORM_TOLERANCE {
        return Err(ProbeError::domain(format!("input mode must have unit norm, got {}", m.norm_sq())));
    }
    if m.coeffs[2].norm() > NORM_TOLERANCE {
        return Err(ProbeError::domain("input mode must not occupy the beamsplitter's empty port"));
    }
    let (sin, cos) = theta_bs.sin_cos();
    let (t, r) = (cos, sin);
    let image_a = ModeVector::real(t, 0.0, r);
    let image_b = ModeVector::real(r, 0.0, -t);
    let [ca, cu, _] = m.coeffs;
    let transmitted = ca * image_a + cu * ModeVector::a_unmatched();
    Ok((transmitted, image_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Complex64, b: f64) -> bool {
        (a - Complex64::new(b, 0.0)).norm() < 1e-12
    }

    #[test]
    fn input_modes() {
        assert_eq!(make_input(1.0).unwrap(), ModeVector::a());
        assert_eq!(make_input(0.0).unwrap(), ModeVector::a_unmatched());
        let m = make_input(0.25).unwrap();
        assert!(close(commutator(&m, &ModeVector::a()), 0.5));
        assert!(close(commutator(&m, &m), 1.0));
        assert!(make_input(1.5).is_err());
    }

    #[test]
    fn zero_angle_is_identity_on_the_signal() {
        let m = make_input(0.3).unwrap();
        let (t, r) = apply_mode_bs(&m, 0.0).unwrap();
        assert!(t.distance(&m) < 1e-15);
        assert!(r.distance(&(-1.0 * ModeVector::b())) < 1e-15);
    }

    #[test]
    fn extraction_at_right_angle() {
        let kappa = 0.37;
        let input = make_input(kappa).unwrap();
        let partner = vacuum_partner(kappa).unwrap();
        let (_, reflected) = apply_mode_bs(&input, FRAC_PI_2).unwrap();
        let expected = kappa.sqrt() * input + (1.0 - kappa).sqrt() * partner;
        assert!(reflected.distance(&expected) < 1e-12);
        assert!(close(commutator(&input, &reflected), kappa.sqrt()));
        assert!(close(commutator(&input, &partner), 0.0));
    }

    #[test]
    fn outputs_are_orthonormal() {
        let m = ModeVector::new([
            Complex64::from_polar(0.6, 0.4),
            Complex64::from_polar(0.8, -1.1),
            Complex64::new(0.0, 0.0),
        ]);
        for theta in [0.0, 0.3, 1.0, FRAC_PI_2, 2.5] {
            let (t, r) = apply_mode_bs(&m, theta).unwrap();
            assert!(close(commutator(&t, &t), 1.0));
            assert!(close(commutator(&r, &r), 1.0));
            assert!(commutator(&t, &r).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(apply_mode_bs(&ModeVector::real(1.0, 1.0, 0.0), 0.1).is_err());
        assert!(apply_mode_bs(&ModeVector::b(), 0.1).is_err());
    }
}
