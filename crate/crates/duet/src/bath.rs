//! Ohm–Drude heat baths: spectral density, memory-friction kernel, effective
//! temperature, and the quantum noise spectrum of the Langevin force.
//!
//! Each oscillator couples bilinearly to an independent continuum of bath
//! modes. Eliminating the bath yields a quantum Langevin equation whose
//! friction kernel is, in the Drude parametrization adopted here, a damped
//! exponential `μ(τ) = (γ/τ_c) e^{−τ/τ_c} Θ(τ)` with Fourier transform
//!
//! ```text
//! μ(ω) = γ / (1 − iωτ_c),   Re μ(ω) = ρ(ω) = (γ/τ_c²) / (ω² + 1/τ_c²).
//! ```
//!
//! `ρ(ω)` is the bath spectral density (a Lorentzian of half-width `1/τ_c`,
//! the Drude cutoff) and fixes the noise through the exact quantum
//! fluctuation–dissipation relation `S_F(ω) = 4 ρ(ω) ϑ(ω)`, where
//! `ϑ(ω) = (ω/2)·coth(ω/2T)` is the symmetrized thermal energy per mode
//! including zero-point motion. No Markov or weak-coupling approximation is
//! involved; the kernel is kept with full memory.

use crate::{DuetError, Result};
use num_complex::Complex64;

/// Nondimensionalization convention used throughout the crate.
///
/// All quantities are expressed with `ħ = k_B = 1`, masses in units of the
/// first oscillator's mass, and frequencies in units of its bare frequency.
/// `ħ` shows up only through the constant `1/2` quantum thresholds
/// (zero-point variance and the uncertainty bound).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitSystem;

impl UnitSystem {
    /// Reduced Planck constant.
    pub const HBAR: f64 = 1.0;
    /// Reference mass (first oscillator).
    pub const REFERENCE_MASS: f64 = 1.0;
    /// Reference frequency (bare frequency of the first oscillator).
    pub const REFERENCE_FREQUENCY: f64 = 1.0;
}

/// Parameters of one Ohm–Drude bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    /// Overall friction scale `γ ≥ 0` (units mass·frequency). `γ = 0` means
    /// the bath is decoupled.
    pub gamma: f64,
    /// Bath memory time `τ_c > 0`; `1/τ_c` is the Drude cutoff frequency.
    pub tau_c: f64,
    /// Bath temperature `T ≥ 0` (with `k_B = 1`).
    pub temperature: f64,
}

impl BathSpec {
    /// Validates and builds a bath specification.
    pub fn new(gamma: f64, tau_c: f64, temperature: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(DuetError::InvalidParameter(format!(
                "bath friction scale gamma must be finite and >= 0, got {gamma}"
            )));
        }
        if !tau_c.is_finite() || tau_c <= 0.0 {
            return Err(DuetError::InvalidParameter(format!(
                "bath memory time tau_c must be finite and > 0, got {tau_c}"
            )));
        }
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(DuetError::InvalidParameter(format!(
                "bath temperature must be finite and >= 0, got {temperature}"
            )));
        }
        Ok(Self { gamma, tau_c, temperature })
    }

    /// Drude spectral density `ρ(ω) = (γ/τ_c²) / (ω² + 1/τ_c²)`.
    ///
    /// Defined for all real `ω` as an even, non-negative function;
    /// `ρ(0) = γ` and `ρ(±1/τ_c) = γ/2` (half maximum at the cutoff).
    pub fn spectral_density(&self, omega: f64) -> f64 {
        let cutoff = 1.0 / self.tau_c;
        self.gamma * cutoff * cutoff / (omega * omega + cutoff * cutoff)
    }

    /// Fourier transform `μ(ω) = γ / (1 − iωτ_c)` of the causal memory
    /// kernel `μ(τ) = (γ/τ_c) e^{−τ/τ_c} Θ(τ)`.
    ///
    /// Analytic in the upper half-plane by causality; its real part equals
    /// [`BathSpec::spectral_density`] for every real `ω`, and for the Drude
    /// form `Im μ(ω) = ωτ_c · Re μ(ω)` exactly.
    pub fn friction_kernel_fourier(&self, omega: f64) -> Complex64 {
        self.gamma / Complex64::new(1.0, -omega * self.tau_c)
    }

    /// Symmetrized noise spectrum of the Langevin force,
    /// `S_F(ω) = 4 ρ(ω) ϑ(ω)` — the exact quantum fluctuation–dissipation
    /// relation for the bath force. Even and non-negative.
    pub fn force_noise_spectrum(&self, omega: f64) -> f64 {
        4.0 * self.spectral_density(omega) * self.effective_temperature(omega)
    }

    /// Effective temperature `ϑ(ω)` of this bath at frequency `ω`
    /// (see the free function [`effective_temperature`]).
    pub fn effective_temperature(&self, omega: f64) -> f64 {
        effective_temperature(self.temperature, omega)
    }
}

/// Effective temperature `ϑ(T, ω) = (ω/2)·coth(ω/2T)`: the symmetrized
/// energy per mode, including zero-point motion.
///
/// Even in `ω`. Limits are handled analytically: `ϑ → T` as `ω → 0`
/// (classical equipartition) and `ϑ = |ω|/2` at `T = 0` (pure zero-point
/// energy). Evaluation is overflow-safe for arbitrarily large `|ω|/T` by
/// writing `coth(x/2) = 1 + 2/(eˣ − 1)` with `expm1`.
pub fn effective_temperature(temperature: f64, omega: f64) -> f64 {
    let w = omega.abs();
    if w == 0.0 {
        return temperature;
    }
    if temperature <= 0.0 {
        return 0.5 * w;
    }
    // (ω/2)·coth(ω/2T) = (ω/2)·(1 + 2/(e^{ω/T} − 1)); exp_m1 keeps full
    // precision as ω/T → 0 and saturates cleanly (2/inf = 0) for huge ω/T.
    0.5 * w * (1.0 + 2.0 / (w / temperature).exp_m1())
}

/// Temperature derivative `∂ϑ/∂T` at fixed `ω`:
/// `(ω/2T)² / sinh²(ω/2T)`, evaluated overflow-free as
/// `4x²e^{−2x}/(1 − e^{−2x})²` with `x = ω/2T`.
///
/// This is the kernel converting a small temperature bias between two baths
/// at a common mean temperature into a heat-current spectrum. It equals `1`
/// at `ω = 0` (classical limit) and vanishes at `T = 0`.
pub fn effective_temperature_bias_slope(temperature: f64, omega: f64) -> f64 {
    let w = omega.abs();
    if temperature <= 0.0 {
        return 0.0;
    }
    if w == 0.0 {
        return 1.0;
    }
    let x = w / (2.0 * temperature);
    let em = (-2.0 * x).exp_m1(); // e^{−2x} − 1, exact near 0
    4.0 * x * x * (em + 1.0) / (em * em)
}
