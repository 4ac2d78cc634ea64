//! Physical constants (SI) and the baseline scenario values.

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const GRAVITATIONAL: f64 = 6.674_30e-11;
pub const EARTH_MASS: f64 = 5.972_2e24;

/// Alice on the Earth's surface.
pub const EARTH_RADIUS: f64 = 6.37e6;
/// Bob in geostationary orbit.
pub const GEOSTATIONARY_RADIUS: f64 = 42.0e6;
/// Rounded Schwarzschild radius of the Earth used by the baseline scenario.
pub const EARTH_SCHWARZSCHILD_RADIUS: f64 = 8.87e-3;
/// Probe centre frequency (430 nm light), ordinary frequency.
pub const CENTRE_FREQUENCY: f64 = 7.0e14;
/// Spectral width of the probe wavepacket.
pub const SPECTRAL_WIDTH: f64 = 2000.0;

/// `2GM/c^2`.
pub fn schwarzschild_radius(mass: f64) -> f64 {
    2.0 * GRAVITATIONAL * mass / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}
