//! Stationary cross-correlation spectra, heat-current spectra, and
//! fluctuation–dissipation residuals.
//!
//! Solving the Langevin equations in Fourier space expresses every canonical
//! coordinate as a linear filter acting on the two independent bath forces,
//! so any symmetrized cross-spectrum is a Gram sum over the noise channels:
//!
//! ```text
//! S_AB(ω) = Σ_i a_A,i*(ω) a_B,i(ω) S_Fi(ω),
//! ```
//!
//! with position coefficient rows taken from the response matrix and
//! momentum rows obtained from them by the factor −i m ω. All spectra here
//! are the doubled one-sided densities matching the noise convention of
//! [`crate::bath::BathSpec::force_noise_spectrum`]: equal-time covariances
//! are recovered as `∫₀^∞ dω/2π · Re S_AB(ω)`.

use crate::bath::{effective_temperature_bias_slope, BathSpec};
use crate::covariance::QuadratureConfig;
use crate::quad::integrate_adaptive;
use crate::response::{evaluate_response, OscillatorPair};
use crate::{DuetError, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Index of `x` in the spectral/covariance basis `(x, p_x, y, p_y)`.
pub const IDX_X: usize = 0;
/// Index of `p_x`.
pub const IDX_PX: usize = 1;
/// Index of `y`.
pub const IDX_Y: usize = 2;
/// Index of `p_y`.
pub const IDX_PY: usize = 3;

/// Hermitian 4×4 matrix of cross-correlation spectra at one frequency, over
/// the basis `(x, p_x, y, p_y)`.
///
/// The diagonal is real and non-negative; `s[b][a]` is exactly the complex
/// conjugate of `s[a][b]` by construction.
#[derive(Debug, Clone, Copy)]
pub struct SpectralMatrix4 {
    /// Evaluation frequency.
    pub omega: f64,
    /// Spectral entries, row-major.
    pub s: [[Complex64; 4]; 4],
}

impl SpectralMatrix4 {
    /// Entry accessor; indices follow [`IDX_X`], [`IDX_PX`], [`IDX_Y`],
    /// [`IDX_PY`].
    pub fn entry(&self, a: usize, b: usize) -> Complex64 {
        self.s[a][b]
    }

    /// The 2×2 position block over `(x, y)`.
    pub fn position_block(&self) -> [[Complex64; 2]; 2] {
        [
            [self.s[IDX_X][IDX_X], self.s[IDX_X][IDX_Y]],
            [self.s[IDX_Y][IDX_X], self.s[IDX_Y][IDX_Y]],
        ]
    }

    /// The 2×2 momentum block over `(p_x, p_y)`.
    pub fn momentum_block(&self) -> [[Complex64; 2]; 2] {
        [
            [self.s[IDX_PX][IDX_PX], self.s[IDX_PX][IDX_PY]],
            [self.s[IDX_PY][IDX_PX], self.s[IDX_PY][IDX_PY]],
        ]
    }
}

/// Computes the full Hermitian spectral matrix at `omega`.
///
/// Requires at least one damped bath (an entirely undamped pair has no
/// stationary state). The matrix is assembled from the position-block Gram
/// sum and the momentum factor rule `a_p = −i m ω a_x`, which makes the
/// structural identities exact in floating point: the diagonal is exactly
/// real, `S_xpₓ` and `S_ypᵧ` are exactly imaginary, and Hermiticity holds
/// bitwise.
pub fn cross_spectrum(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
) -> Result<SpectralMatrix4> {
    if baths.0.gamma == 0.0 && baths.1.gamma == 0.0 {
        return Err(DuetError::InvalidParameter(
            "cross spectra require at least one damped bath (gamma_1 = gamma_2 = 0 \
             has no stationary state)"
                .into(),
        ));
    }
    let r = evaluate_response(pair, baths, omega)?;
    let sf = [
        baths.0.force_noise_spectrum(omega),
        baths.1.force_noise_spectrum(omega),
    ];
    // position rows of the response: x and y as filters on (F₁, F₂)
    let ax = r.response[0];
    let ay = r.response[1];
    let pos = {
        let xx = ax[0].norm_sqr() * sf[0] + ax[1].norm_sqr() * sf[1];
        let yy = ay[0].norm_sqr() * sf[0] + ay[1].norm_sqr() * sf[1];
        let xy = ax[0].conj() * ay[0] * sf[0] + ax[1].conj() * ay[1] * sf[1];
        [
            [Complex64::new(xx, 0.0), xy],
            [xy.conj(), Complex64::new(yy, 0.0)],
        ]
    };
    // momentum factor per basis row; positions map to themselves
    let factor = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -pair.m1 * omega),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -pair.m2 * omega),
    ];
    let which = [0usize, 0, 1, 1];
    let mut s = [[Complex64::new(0.0, 0.0); 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let v = factor[a].conj() * factor[b] * pos[which[a]][which[b]];
            s[a][b] = v;
            s[b][a] = v.conj();
        }
    }
    Ok(SpectralMatrix4 { omega, s })
}

/// Spectral density of the stationary heat current flowing from bath 1
/// through the coupling spring into bath 2:
///
/// ```text
/// j(ω) = 4λ²ω² ρ₁(ω)ρ₂(ω) [ϑ₁(ω) − ϑ₂(ω)] / |D(ω)|²,   ω > 0,
/// ```
///
/// in the one-sided convention: the net current is `∫₀^∞ dω/2π · j(ω)`.
/// Everything except the effective-temperature difference is a positive
/// factor, so the sign at every frequency is `sign(ϑ₁ − ϑ₂)` — heat flows
/// hot → cold frequency by frequency, whatever the spectral structure.
pub fn heat_current_spectrum(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(DuetError::InvalidParameter(format!(
            "heat-current spectrum is defined for omega > 0, got {omega}"
        )));
    }
    let r = evaluate_response(pair, baths, omega)?;
    let rho = (
        baths.0.spectral_density(omega),
        baths.1.spectral_density(omega),
    );
    let dtheta = baths.0.effective_temperature(omega) - baths.1.effective_temperature(omega);
    let lam2 = pair.lambda * pair.lambda;
    Ok(4.0 * lam2 * omega * omega * rho.0 * rho.1 * dtheta / r.det.norm_sqr())
}

/// Heat-current spectrum per unit temperature difference, in the limit of a
/// small difference around the baths' mean temperature:
/// `j(ω)/ΔT → 4λ²ω²ρ₁ρ₂ · ∂ϑ/∂T(T̄, ω) / |D|²` as `ΔT → 0`.
///
/// Used for plotting the current spectrum of a near-equilibrium pair, where
/// `heat_current_spectrum` itself would vanish linearly with `ΔT`.
pub fn heat_current_linear_spectrum(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(DuetError::InvalidParameter(format!(
            "heat-current spectrum is defined for omega > 0, got {omega}"
        )));
    }
    let r = evaluate_response(pair, baths, omega)?;
    let rho = (
        baths.0.spectral_density(omega),
        baths.1.spectral_density(omega),
    );
    let t_mean = 0.5 * (baths.0.temperature + baths.1.temperature);
    let slope = effective_temperature_bias_slope(t_mean, omega);
    let lam2 = pair.lambda * pair.lambda;
    Ok(4.0 * lam2 * omega * omega * rho.0 * rho.1 * slope / r.det.norm_sqr())
}

/// Net stationary heat current `Q̇ = ∫₀^∞ dω/2π · j(ω)` from bath 1 to
/// bath 2, by adaptive quadrature over `[0, quad.omega_max]`.
///
/// Positive when bath 1 is hotter. Requires both dampings strictly positive
/// (each bath must exchange energy for a current to flow). The same number
/// is reachable through the covariance route `λ⟨x, p_y⟩/m₂`; the two paths
/// agree to quadrature tolerance and that consistency is exercised in tests.
pub fn net_heat_current(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    quad: &QuadratureConfig,
) -> Result<f64> {
    if baths.0.gamma <= 0.0 || baths.1.gamma <= 0.0 {
        return Err(DuetError::InvalidParameter(
            "net heat current requires gamma > 0 for both baths".into(),
        ));
    }
    let f = |w: f64| {
        vec![heat_current_spectrum(pair, baths, w)
            .expect("damped response is nonsingular at interior quadrature nodes")]
    };
    let est = integrate_adaptive(
        &f,
        0.0,
        quad.omega_max,
        quad.rel_tol,
        quad.abs_tol,
        &quad.seed_points,
    )?;
    Ok(est.value[0] / TAU)
}

/// Sign of the weak-coupling rate-equation prediction for the net heat
/// current, `Q̇_rate ∝ exp(ω₂₀/T₂) − exp(ω₁₀/T₁)` with the bare
/// frequencies: `+1`, `0`, or `−1`.
///
/// A comparison baseline only — the rate-equation model can predict
/// backwards flow (negative sign for `ω₁₀/T₁ > ω₂₀/T₂` even with
/// `T₁ > T₂`) where the exact current stays positive.
pub fn levy_kosloff_sign(pair: &OscillatorPair, temps: (f64, f64)) -> Result<f64> {
    let (t1, t2) = temps;
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(DuetError::InvalidParameter(format!(
            "rate-equation sign needs positive temperatures, got ({t1}, {t2})"
        )));
    }
    // monotone transform of exp(w20/T2) − exp(w10/T1), immune to overflow
    let diff = pair.bare_frequency_2() / t2 - pair.bare_frequency_1() / t1;
    Ok(if diff == 0.0 { 0.0 } else { diff.signum() })
}

/// Fluctuation–dissipation residual of the position-block spectra at one
/// frequency, for a pair in global equilibrium (both baths at the same
/// temperature):
///
/// ```text
/// residual = max_{i,j ∈ {x,y}} |S_ij − (−2i)(ϑ/ω)(R_ji − R_ij*)| / max_{i,j} |S_ij|.
/// ```
///
/// Zero (to rounding) in equilibrium at any coupling and damping strength;
/// rejects unequal bath temperatures, where no single-temperature relation
/// of this form holds.
pub fn fd_residual(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
) -> Result<f64> {
    if baths.0.temperature != baths.1.temperature {
        return Err(DuetError::InvalidParameter(format!(
            "fluctuation-dissipation residual requires equal bath temperatures, \
             got T1 = {}, T2 = {}",
            baths.0.temperature, baths.1.temperature
        )));
    }
    fd_residual_with_reference(pair, baths, omega, baths.0.temperature)
}

/// Same residual evaluated against a caller-chosen reference temperature
/// for ϑ, without requiring the baths to be in mutual equilibrium.
///
/// With `reference_temperature` set to the common bath temperature this is
/// exactly [`fd_residual`]; with unequal bath temperatures it quantifies
/// how strongly the non-equilibrium spectra violate the single-temperature
/// relation. Defined as 0 at exactly `omega = 0`, where both sides of the
/// relation degenerate (the response difference vanishes as the
/// ϑ/ω prefactor diverges).
pub fn fd_residual_with_reference(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
    reference_temperature: f64,
) -> Result<f64> {
    if omega == 0.0 {
        return Ok(0.0);
    }
    let sm = cross_spectrum(pair, baths, omega)?;
    let r = evaluate_response(pair, baths, omega)?;
    let theta = crate::bath::effective_temperature(reference_temperature, omega);
    let pref = Complex64::new(0.0, -2.0) * (theta / omega);
    let pos = sm.position_block();
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let predicted = pref * (r.response[j][i] - r.response[i][j].conj());
            worst = worst.max((pos[i][j] - predicted).norm());
            scale = scale.max(pos[i][j].norm());
        }
    }
    Ok(worst / scale)
}
