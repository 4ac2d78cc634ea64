//! Quantum Fisher information of single-mode Gaussian probes sent through a
//! lossy channel, and the resulting Cramér-Rao bounds on the Schwarzschild
//! radius measured through the gravitational redshift of a light pulse.
//!
//! The layers build on each other:
//!
//! * [`gaussian`] holds quadrature-variance states, their fidelity and a
//!   finite-difference QFI engine.
//! * [`channel`] propagates probes through loss and gives closed-form QFIs.
//! * [`overlap`] maps the redshift onto a beamsplitter parameter `Θ`.
//! * [`bounds`] combines both into relative-error bounds and sweeps.
//! * [`mode_splitter`] checks the mode-selective beamsplitter algebra.
//!
//! Quadratures follow `X = a + a†`, so the vacuum variance is 1.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channel;
pub mod consts;
pub mod error;
pub mod gaussian;
pub mod mode_splitter;
pub mod optimize;
pub mod overlap;
pub mod parallel;
pub mod quadrature;

pub use bounds::{BoundQuery, BoundReport, RayleighLink};
pub use channel::ChannelConfig;
pub use error::{ProbeError, Result};
pub use gaussian::{GaussianProbe, QuadPair};
pub use overlap::{GeoConfig, ProfileFamily, ProfileSpec};
