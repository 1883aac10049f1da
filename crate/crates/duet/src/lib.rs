//! Exact stationary statistics of two coupled, damped quantum oscillators.
//!
//! Two harmonic oscillators (coordinates `x`, `y`) are joined by a spring of
//! stiffness `λ` and each is coupled bilinearly to its own bosonic heat bath
//! with an Ohm–Drude spectral density. Because the dynamics are linear, the
//! quantum Langevin equations close in frequency space and the steady state
//! is Gaussian and known exactly — no weak-coupling, Markov, or rotating-wave
//! approximation is made anywhere in this crate.
//!
//! The library computes, from the exact frequency-domain solution:
//!
//! * response functions, normal-mode frequencies, and absorption spectra
//!   ([`response`]);
//! * cross-correlation spectra of all canonical coordinate pairs, the
//!   heat-current spectrum and net heat current between the baths, and
//!   fluctuation–dissipation residuals ([`spectra`]);
//! * the stationary 4×4 covariance matrix by adaptive quadrature
//!   ([`covariance`]);
//! * Gaussian entanglement and information measures — symplectic
//!   (Williamson) spectra, the positivity test of the partially transposed
//!   state, logarithmic negativity, the Duan–Simon criterion, optimal EPR
//!   pairs, and von Neumann entropies ([`gaussian`]);
//! * frequency-resolved entanglement witnesses: minimal-noise quadrature
//!   spectra compared against zero-temperature references and EPR-pair
//!   spectra ([`witness`]);
//! * an independent cross-check that replaces each continuum bath with `N`
//!   explicit modes and propagates the full Gaussian state exactly
//!   ([`oracle`]).
//!
//! # Units
//!
//! Everything is nondimensional: `ħ = k_B = 1`, masses are measured in units
//! of the first oscillator's mass and frequencies in units of its bare
//! frequency (see [`bath::UnitSystem`]). Planck's constant survives only in
//! the `1/2` quantum thresholds (zero-point variance, uncertainty bounds).

pub mod bath;
pub mod covariance;
mod error;
pub mod gaussian;
pub mod oracle;
pub mod presets;
pub mod quad;
pub mod response;
pub mod smalleig;
pub mod spectra;
pub mod witness;

pub use error::{DuetError, Result};
