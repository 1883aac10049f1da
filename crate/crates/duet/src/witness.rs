//! Frequency-resolved entanglement witnesses.
//!
//! The steady state is Gaussian, so every collective quadrature
//! `u = α x̃ + β ỹ` has a noise spectrum given by a quadratic form of the
//! 2×2 position (or momentum) spectral matrix. This module builds those
//! sector matrices in a locally rescaled frame, diagonalizes them to get
//! the minimal/maximal noise quadratures per frequency, produces the
//! zero-temperature reference spectra of the symmetric and antisymmetric
//! combinations, and evaluates spectra of fixed EPR-like quadrature pairs.
//!
//! Spectra are reported in the rescaled frame (each oscillator scaled by
//! its own uncoupled frequency, the locally accessible normalization); the
//! raw laboratory frame stays available behind the [`Frame`] flag. No
//! causality constraint is imposed on the per-frequency eigenvectors: they
//! describe the noise floor of an ideal linear filter, not a realizable
//! one.

use crate::bath::BathSpec;
use crate::gaussian::EprPair;
use crate::response::OscillatorPair;
use crate::spectra::{cross_spectrum, SpectralMatrix4};
use crate::Result;
use num_complex::Complex64;

/// Canonical local rescaling `x̃_i = √(m_i ω_{i0}) x_i`,
/// `p̃_i = p_i / √(m_i ω_{i0})` with the uncoupled frequencies
/// `ω_{i0} = √(k_i/m_i)`.
///
/// The transformation is symplectic mode by mode (the two scale factors are
/// reciprocal), and in this frame the free motion obeys `d x̃_i/dt =
/// ω_{i0} p̃_i`, so momentum spectra are position spectra dressed with
/// `(ω/ω_{i0})` factors.
#[derive(Debug, Clone, Copy)]
pub struct RescaledFrame {
    /// Position scale factors `√(m_i ω_{i0})` per oscillator.
    pub position_scale: [f64; 2],
    /// Momentum scale factors `1/√(m_i ω_{i0})` per oscillator.
    pub momentum_scale: [f64; 2],
}

impl RescaledFrame {
    /// Builds the frame from the oscillator parameters.
    pub fn for_pair(pair: &OscillatorPair) -> Self {
        let s1 = (pair.m1 * pair.bare_frequency_1()).sqrt();
        let s2 = (pair.m2 * pair.bare_frequency_2()).sqrt();
        Self {
            position_scale: [s1, s2],
            momentum_scale: [1.0 / s1, 1.0 / s2],
        }
    }
}

/// Which pair of quadratures the 2×2 sector matrix is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Collective combinations of `x̃` and `ỹ`.
    Position,
    /// Collective combinations of `p̃_x` and `p̃_y`.
    Momentum,
}

/// Coordinate frame for reported spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Locally rescaled coordinates (the default for every witness).
    Rescaled,
    /// Raw laboratory coordinates.
    Raw,
}

/// Eigen-decomposition of a 2×2 sector matrix: the extremal noise spectra
/// and the quadrature coefficients attaining them.
#[derive(Debug, Clone)]
pub struct OptimalQuadratures {
    /// Minimal noise spectrum at this frequency.
    pub s_min: f64,
    /// Maximal noise spectrum at this frequency.
    pub s_max: f64,
    /// Unit coefficient vector `(α, β)` attaining `s_min` (phase fixed by
    /// making the leading component real positive; the global phase does
    /// not affect the spectrum).
    pub min_vector: [Complex64; 2],
    /// Unit coefficient vector attaining `s_max`.
    pub max_vector: [Complex64; 2],
}

/// 2×2 spectral matrix of the chosen sector and frame.
///
/// Hermitian and positive semidefinite at every frequency. In the rescaled
/// momentum sector the entries carry `(ω/ω_{i0})(ω/ω_{j0})` relative to the
/// position sector, reflecting `d x̃_i/dt = ω_{i0} p̃_i`.
pub fn sector_spectral_matrix(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
    sector: Sector,
    frame: Frame,
) -> Result<[[Complex64; 2]; 2]> {
    let sm = cross_spectrum(pair, baths, omega)?;
    let rescale = RescaledFrame::for_pair(pair);
    let (block, scale) = match sector {
        Sector::Position => (sm.position_block(), rescale.position_scale),
        Sector::Momentum => (sm.momentum_block(), rescale.momentum_scale),
    };
    let scale = match frame {
        Frame::Rescaled => scale,
        Frame::Raw => [1.0, 1.0],
    };
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = block[i][j] * (scale[i] * scale[j]);
        }
    }
    Ok(out)
}

/// Rescaled-frame position spectral matrix (the witness default).
pub fn position_spectral_matrix(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
) -> Result<[[Complex64; 2]; 2]> {
    sector_spectral_matrix(pair, baths, omega, Sector::Position, Frame::Rescaled)
}

/// Closed-form eigen-decomposition of a Hermitian 2×2 matrix.
fn hermitian2_eigen(m: &[[Complex64; 2]; 2]) -> OptimalQuadratures {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let s_min = mean - radius;
    let s_max = mean + radius;
    let scale = a.abs().max(d.abs()).max(b.norm());
    let vector_for = |lambda: f64, fallback: [Complex64; 2]| -> [Complex64; 2] {
        // the two analytic null vectors of (M − λ); pick the better
        // conditioned one
        let c1 = [Complex64::new(lambda - d, 0.0), b.conj()];
        let c2 = [b, Complex64::new(lambda - a, 0.0)];
        let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
        let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
        let mut v = if n1 >= n2 { c1 } else { c2 };
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if norm <= 1e-14 * scale.max(1e-300) {
            return fallback;
        }
        v[0] /= norm;
        v[1] /= norm;
        let lead = if v[0].norm() >= 1e-9 { v[0] } else { v[1] };
        let phase = lead.conj() / lead.norm();
        [v[0] * phase, v[1] * phase]
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    OptimalQuadratures {
        s_min,
        s_max,
        min_vector: vector_for(s_min, [one, zero]),
        max_vector: vector_for(s_max, [zero, one]),
    }
}

/// Minimal and maximal collective noise spectra with their quadratures, in
/// the rescaled frame.
///
/// `s_min` is the variational floor: no unit combination of the two
/// sector quadratures has lower noise at this frequency.
pub fn optimal_quadrature_spectra(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
    sector: Sector,
) -> Result<OptimalQuadratures> {
    optimal_quadrature_spectra_in_frame(pair, baths, omega, sector, Frame::Rescaled)
}

/// Frame-explicit variant of [`optimal_quadrature_spectra`].
pub fn optimal_quadrature_spectra_in_frame(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
    sector: Sector,
    frame: Frame,
) -> Result<OptimalQuadratures> {
    let m = sector_spectral_matrix(pair, baths, omega, sector, frame)?;
    Ok(hermitian2_eigen(&m))
}

/// Zero-temperature reference spectra `(S_sum, S_diff)` of the symmetric
/// and antisymmetric combinations `(x̃ ± ỹ)/√2` (or the momentum
/// analogues), in the rescaled frame.
///
/// Both bath temperatures are forced to zero while keeping friction and
/// memory time, so the curves are the quantum noise floors of the two
/// normal-mode-like combinations: the sum peaks at the lower normal mode
/// `ω₋` (in-phase motion) and the difference at `ω₊` (phase opposition).
pub fn reference_spectra_t0(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
    sector: Sector,
) -> Result<(f64, f64)> {
    let cold1 = BathSpec {
        temperature: 0.0,
        ..*baths.0
    };
    let cold2 = BathSpec {
        temperature: 0.0,
        ..*baths.1
    };
    let m = sector_spectral_matrix(pair, (&cold1, &cold2), omega, sector, Frame::Rescaled)?;
    let mean = 0.5 * (m[0][0].re + m[1][1].re);
    Ok((mean + m[0][1].re, mean - m[0][1].re))
}

/// Real quadratic form `uᵀ S(ω) u` of the full 4×4 spectral matrix.
fn quadratic_form(sm: &SpectralMatrix4, u: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    for a in 0..4 {
        acc += u[a] * u[a] * sm.entry(a, a).re;
    }
    for a in 0..4 {
        for b in a + 1..4 {
            acc += 2.0 * u[a] * u[b] * sm.entry(a, b).re;
        }
    }
    acc
}

/// Noise spectra `(S_QQ, S_PP)` of a fixed collective quadrature pair in
/// the raw laboratory frame.
///
/// The coefficient vectors come from the covariance-level EPR analysis on
/// the same parameters; integrating `S_QQ` over `∫₀^∞ dω/2π` recovers the
/// variance of `Q` (the minimal PPT symplectic eigenvalue for the optimal
/// pair).
pub fn epr_fixed_pair_spectra(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
    epr: &EprPair,
) -> Result<(f64, f64)> {
    let sm = cross_spectrum(pair, baths, omega)?;
    Ok((
        quadratic_form(&sm, &epr.q_coefficients),
        quadratic_form(&sm, &epr.p_coefficients),
    ))
}
