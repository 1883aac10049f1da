//! Frequency-domain dynamics of the coupled pair: inverse susceptibilities,
//! response matrix, normal-mode frequencies, and absorption spectra.
//!
//! Fourier-transforming the quantum Langevin equations turns them into a
//! 2×2 linear system. With the convention `x(t) = ∫ x(ω) e^{−iωt} dω/2π`
//! the diagonal terms are the inverse susceptibilities
//!
//! ```text
//! K_i(ω) = −m_i ω² − iω μ_i(ω) + k_i′,    k_i′ = k_i + λ,
//! ```
//!
//! the determinant `D = K₁K₂ − λ²` carries the normal modes (its zeros are
//! the resonance poles, all strictly below the real axis for any nonzero
//! damping), and the response matrix `R = [[K₂, λ], [λ, K₁]]/D` maps drive
//! forces to coordinates.

use crate::bath::BathSpec;
use crate::{DuetError, Result};
use num_complex::Complex64;

/// Two harmonic oscillators joined by a spring.
///
/// The interaction potential is `½λ(x − y)²`, so each spring constant is
/// shifted to `k_i′ = k_i + λ` and the product form of the static stability
/// condition reads `λ² < k₁′k₂′` (automatically true for λ ≥ 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorPair {
    /// Mass of the first oscillator.
    pub m1: f64,
    /// Mass of the second oscillator.
    pub m2: f64,
    /// Bare spring constant of the first oscillator.
    pub k1: f64,
    /// Bare spring constant of the second oscillator.
    pub k2: f64,
    /// Coupling spring constant `λ` of the interaction `½λ(x − y)²`.
    pub lambda: f64,
}

impl OscillatorPair {
    /// Validates masses, spring constants, and the stability bound
    /// `λ² < k₁′k₂′`.
    pub fn new(m1: f64, m2: f64, k1: f64, k2: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [("m1", m1), ("m2", m2), ("k1", k1), ("k2", k2)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(DuetError::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if !lambda.is_finite() {
            return Err(DuetError::InvalidParameter(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        let pair = Self { m1, m2, k1, k2, lambda };
        let (k1p, k2p) = (pair.k1_shifted(), pair.k2_shifted());
        if !(lambda * lambda < k1p * k2p) {
            return Err(DuetError::InvalidParameter(format!(
                "stability violated: lambda^2 = {} must be < k1'*k2' = {}",
                lambda * lambda,
                k1p * k2p
            )));
        }
        Ok(pair)
    }

    /// Shifted spring constant `k₁′ = k₁ + λ`.
    pub fn k1_shifted(&self) -> f64 {
        self.k1 + self.lambda
    }

    /// Shifted spring constant `k₂′ = k₂ + λ`.
    pub fn k2_shifted(&self) -> f64 {
        self.k2 + self.lambda
    }

    /// Bare frequency `ω_{10} = √(k₁/m₁)` of the uncoupled first oscillator.
    pub fn bare_frequency_1(&self) -> f64 {
        (self.k1 / self.m1).sqrt()
    }

    /// Bare frequency `ω_{20} = √(k₂/m₂)` of the uncoupled second oscillator.
    pub fn bare_frequency_2(&self) -> f64 {
        (self.k2 / self.m2).sqrt()
    }

    /// Coupling-shifted frequency `ω_1 = √(k₁′/m₁)`.
    pub fn shifted_frequency_1(&self) -> f64 {
        (self.k1_shifted() / self.m1).sqrt()
    }

    /// Coupling-shifted frequency `ω_2 = √(k₂′/m₂)`.
    pub fn shifted_frequency_2(&self) -> f64 {
        (self.k2_shifted() / self.m2).sqrt()
    }
}

/// One evaluation of the frequency-domain response at real `ω`.
#[derive(Debug, Clone, Copy)]
pub struct ResponseEval {
    /// Evaluation frequency.
    pub omega: f64,
    /// Inverse susceptibility `K₁(ω)` of the first oscillator.
    pub k1: Complex64,
    /// Inverse susceptibility `K₂(ω)` of the second oscillator.
    pub k2: Complex64,
    /// Determinant `D = K₁K₂ − λ²`.
    pub det: Complex64,
    /// Symmetric response matrix `R = [[K₂, λ], [λ, K₁]]/D` (row-major).
    pub response: [[Complex64; 2]; 2],
}

/// Inverse susceptibility `K(z) = −m z² − iz μ(z) + k′` continued to complex
/// `z` (the Drude kernel `μ(z) = γ/(1 − izτ_c)` is meromorphic).
fn inverse_susceptibility(mass: f64, k_shifted: f64, bath: &BathSpec, z: Complex64) -> Complex64 {
    let mu = bath.gamma / (Complex64::new(1.0, 0.0) - Complex64::i() * z * bath.tau_c);
    -mass * z * z - Complex64::i() * z * mu + k_shifted
}

/// Determinant `D(z) = K₁(z)K₂(z) − λ²` continued to complex `z`.
pub fn determinant_complex(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    z: Complex64,
) -> Complex64 {
    let k1 = inverse_susceptibility(pair.m1, pair.k1_shifted(), baths.0, z);
    let k2 = inverse_susceptibility(pair.m2, pair.k2_shifted(), baths.1, z);
    k1 * k2 - pair.lambda * pair.lambda
}

/// `dD/dz`, used by the Newton pole refinement.
fn determinant_derivative(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    z: Complex64,
) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let eval = |mass: f64, k_shifted: f64, bath: &BathSpec| {
        let denom = one - Complex64::i() * z * bath.tau_c;
        let mu = bath.gamma / denom;
        let dmu = bath.gamma * Complex64::i() * bath.tau_c / (denom * denom);
        let k = -mass * z * z - Complex64::i() * z * mu + k_shifted;
        let dk = -2.0 * mass * z - Complex64::i() * (mu + z * dmu);
        (k, dk)
    };
    let (k1, dk1) = eval(pair.m1, pair.k1_shifted(), baths.0);
    let (k2, dk2) = eval(pair.m2, pair.k2_shifted(), baths.1);
    dk1 * k2 + k1 * dk2
}

/// Evaluates `K₁`, `K₂`, `D`, and the response matrix at real `ω`.
///
/// Fails with a numerical error if `D` vanishes (to machine precision,
/// relative to `|K₁||K₂| + λ²`) — possible only for undamped oscillators
/// probed exactly on a normal mode, where no steady response exists.
pub fn evaluate_response(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
) -> Result<ResponseEval> {
    let z = Complex64::new(omega, 0.0);
    let k1 = inverse_susceptibility(pair.m1, pair.k1_shifted(), baths.0, z);
    let k2 = inverse_susceptibility(pair.m2, pair.k2_shifted(), baths.1, z);
    let det = k1 * k2 - pair.lambda * pair.lambda;
    let scale = k1.norm() * k2.norm() + pair.lambda * pair.lambda;
    if det.norm() <= 1e-14 * scale {
        return Err(DuetError::Numerics(format!(
            "response determinant vanishes at omega = {omega} (undamped resonance); \
             steady-state response requires dissipation"
        )));
    }
    let lam = Complex64::new(pair.lambda, 0.0);
    let response = [[k2 / det, lam / det], [lam / det, k1 / det]];
    Ok(ResponseEval { omega, k1, k2, det, response })
}

/// Normal-mode frequencies `(ω₊, ω₋)` of the coupled pair with damping
/// neglected:
///
/// ```text
/// ω±² = (ω₁² + ω₂²)/2 ± ½√((ω₁² − ω₂²)² + 4g⁴),
/// ω_i² = k_i′/m_i,  g² = λ/√(m₁m₂).
/// ```
///
/// Returns `(omega_plus, omega_minus)` with `ω₊ ≥ ω₋ > 0` (positivity is
/// guaranteed by the stability bound).
pub fn lossless_eigenfrequencies(pair: &OscillatorPair) -> (f64, f64) {
    let w1sq = pair.k1_shifted() / pair.m1;
    let w2sq = pair.k2_shifted() / pair.m2;
    let g4 = pair.lambda * pair.lambda / (pair.m1 * pair.m2);
    let mean = 0.5 * (w1sq + w2sq);
    let split = 0.5 * ((w1sq - w2sq).powi(2) + 4.0 * g4).sqrt();
    ((mean + split).sqrt(), (mean - split).sqrt())
}

/// Complex secular frequencies `(ω₊, ω₋)` of the rotating-wave
/// (weak-coupling, near-resonant) approximation:
///
/// ```text
/// ω± = (Ω₁ + Ω₂)/2 ± ½√((Ω₁ − Ω₂)² + g_r²),
/// Ω_i = ω_i − iγ_i/2,  γ_i = μ_i(ω_i)/m_i,  g_r = λ/√(m₁m₂ω₁ω₂)
/// ```
///
/// with `ω_i` the coupling-shifted frequencies. The kernel is evaluated at
/// resonance, so `γ_i` (and hence `Ω_i`) picks up the Drude phase. Computed
/// unconditionally; judging whether the near-resonant regime applies is the
/// caller's business. Used here to seed the exact pole search.
pub fn rwa_eigenfrequencies(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
) -> (Complex64, Complex64) {
    let w1 = pair.shifted_frequency_1();
    let w2 = pair.shifted_frequency_2();
    let gamma1 = baths.0.friction_kernel_fourier(w1) / pair.m1;
    let gamma2 = baths.1.friction_kernel_fourier(w2) / pair.m2;
    let big1 = Complex64::new(w1, 0.0) - Complex64::i() * gamma1 / 2.0;
    let big2 = Complex64::new(w2, 0.0) - Complex64::i() * gamma2 / 2.0;
    let gr = pair.lambda / (pair.m1 * pair.m2 * w1 * w2).sqrt();
    let mean = 0.5 * (big1 + big2);
    let split = 0.5 * ((big1 - big2) * (big1 - big2) + gr * gr).sqrt();
    (mean + split, mean - split)
}

/// Power absorbed from stationary harmonic drives of weights
/// `(|f₁|², |f₂|²)` applied to the two oscillators:
///
/// ```text
/// P(ω) = ω |f₁|² Im(K₂/D) + ω |f₂|² Im(K₁/D),
/// ```
///
/// non-negative for `ω > 0` whenever the drive weights are.
pub fn absorption_spectrum(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega: f64,
    drive_weights: (f64, f64),
) -> Result<f64> {
    let (w1, w2) = drive_weights;
    if w1 < 0.0 || w2 < 0.0 {
        return Err(DuetError::InvalidParameter(format!(
            "drive weights are squared amplitudes and must be >= 0, got ({w1}, {w2})"
        )));
    }
    let r = evaluate_response(pair, baths, omega)?;
    Ok(omega * (w1 * r.response[0][0].im + w2 * r.response[1][1].im))
}

/// Counts zeros of `D(z)` inside the upper-half-plane rectangle
/// `[−half_width, half_width] × [0, height]` by the argument principle
/// (winding number of the image of the boundary).
///
/// `D` is analytic there (the Drude kernel's pole sits at `z = −i/τ_c`), so
/// the count is exact once the boundary is resolved; the contour is marched
/// adaptively until every step turns the phase by less than 1 radian. For
/// any damped, stable configuration the result is 0 — all resonance poles
/// lie below the real axis.
pub fn upper_half_plane_zero_count(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    half_width: f64,
    height: f64,
) -> Result<i32> {
    if half_width <= 0.0 || height <= 0.0 {
        return Err(DuetError::InvalidParameter(
            "contour rectangle must have positive extent".into(),
        ));
    }
    // Keep a hair above the real axis so that γ = 0 resonances (zeros ON the
    // axis) are not sampled directly; interior counts are unaffected.
    let eps = 1e-9 * height;
    let corners = [
        Complex64::new(-half_width, eps),
        Complex64::new(half_width, eps),
        Complex64::new(half_width, height),
        Complex64::new(-half_width, height),
        Complex64::new(-half_width, eps),
    ];
    let mut total_turn = 0.0;
    for pair_pts in corners.windows(2) {
        total_turn += winding_along_segment(pair, baths, pair_pts[0], pair_pts[1])?;
    }
    let winding = total_turn / std::f64::consts::TAU;
    let count = winding.round();
    if (winding - count).abs() > 0.05 {
        return Err(DuetError::Numerics(format!(
            "argument-principle contour did not close: winding = {winding}"
        )));
    }
    Ok(count as i32)
}

/// Accumulated phase turn of `D` along a straight contour segment.
///
/// A fixed step count cannot be trusted here: a zero sitting just below
/// the segment produces a phase dip of a full turn over a width set by its
/// distance, invisible to principal-value steps that straddle it. The walk
/// therefore adapts its stride to the local Newton length `|D|/|D'|`,
/// which lower-bounds the distance to the nearest zero, so no step can
/// ever skip a complete turn; a recursive bisection keeps each recorded
/// step below one radian on top of that.
fn winding_along_segment(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    a: Complex64,
    b: Complex64,
) -> Result<f64> {
    const MAX_EVALS: usize = 500_000;
    let length = (b - a).norm();
    let coarse = length / 48.0;
    let floor = length * 1e-9;
    let mut turn = 0.0;
    let mut s = 0.0;
    let mut prev_z = a;
    let mut prev_d = determinant_complex(pair, baths, a);
    for _ in 0..MAX_EVALS {
        let dprime = determinant_derivative(pair, baths, prev_z);
        let newton = if dprime.norm() == 0.0 {
            coarse
        } else {
            0.25 * prev_d.norm() / dprime.norm()
        };
        let h = newton.clamp(floor, coarse).min(length - s);
        s += h;
        let z = if s >= length { b } else { a + (b - a) * (s / length) };
        let d = determinant_complex(pair, baths, z);
        turn += phase_step(pair, baths, prev_z, prev_d, z, d, 0)?;
        prev_z = z;
        prev_d = d;
        if s >= length {
            return Ok(turn);
        }
    }
    Err(DuetError::Numerics(
        "argument-principle contour walk exhausted its budget (a determinant \
         zero sits on or nearly on the contour)"
            .into(),
    ))
}

fn phase_step(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    z0: Complex64,
    d0: Complex64,
    z1: Complex64,
    d1: Complex64,
    depth: usize,
) -> Result<f64> {
    if d0.norm() == 0.0 || d1.norm() == 0.0 {
        return Err(DuetError::Numerics(
            "argument-principle contour passes through a zero of the determinant".into(),
        ));
    }
    let dphi = (d1 / d0).arg();
    if dphi.abs() < 1.0 {
        return Ok(dphi);
    }
    if depth >= 48 {
        return Err(DuetError::Numerics(
            "argument-principle contour refinement exhausted (zero on or \
             too close to the contour)"
                .into(),
        ));
    }
    let zm = 0.5 * (z0 + z1);
    let dm = determinant_complex(pair, baths, zm);
    Ok(phase_step(pair, baths, z0, d0, zm, dm, depth + 1)?
        + phase_step(pair, baths, zm, dm, z1, d1, depth + 1)?)
}

/// Locates the two resonance poles (zeros of `D`) nearest the physical
/// normal modes by Newton iteration seeded at the rotating-wave secular
/// frequencies.
///
/// Returns the refined pole locations; for damped stable parameters both
/// have strictly negative imaginary part. Fails if an iteration does not
/// converge to `|Δz| < 10⁻¹²(1 + |z|)` within 60 steps.
pub fn resonance_poles(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
) -> Result<[Complex64; 2]> {
    let (seed_plus, seed_minus) = rwa_eigenfrequencies(pair, baths);
    let mut poles = [Complex64::default(); 2];
    for (slot, seed) in poles.iter_mut().zip([seed_plus, seed_minus]) {
        let mut z = seed;
        let mut converged = false;
        for _ in 0..60 {
            let d = determinant_complex(pair, baths, z);
            let dprime = determinant_derivative(pair, baths, z);
            if dprime.norm() == 0.0 {
                break;
            }
            let step = d / dprime;
            z -= step;
            if step.norm() < 1e-12 * (1.0 + z.norm()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(DuetError::Numerics(format!(
                "Newton refinement of the resonance pole seeded at {seed} did not converge"
            )));
        }
        *slot = z;
    }
    Ok(poles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Detuned weakly damped pair used across the frozen-value tests:
    /// ω₂₀ = 1.15, λ = 0.09, equal unit masses, γ = 0.1, cutoff 50.
    fn detuned_pair() -> OscillatorPair {
        OscillatorPair::new(1.0, 1.0, 1.0, 1.3225, 0.09).unwrap()
    }

    fn detuned_baths() -> (BathSpec, BathSpec) {
        (
            BathSpec::new(0.1, 0.02, 0.0).unwrap(),
            BathSpec::new(0.1, 0.02, 0.0).unwrap(),
        )
    }

    fn random_stable_draw(rng: &mut ChaCha8Rng) -> (OscillatorPair, BathSpec, BathSpec) {
        let m1 = rng.gen_range(0.3..3.0);
        let m2 = rng.gen_range(0.3..3.0);
        let k1: f64 = rng.gen_range(0.3..3.0);
        let k2: f64 = rng.gen_range(0.3..3.0);
        // λ ≥ 0 keeps stability automatic
        let lambda = rng.gen_range(0.0..1.0) * (k1 * k2).sqrt();
        let pair = OscillatorPair::new(m1, m2, k1, k2, lambda).unwrap();
        let b1 = BathSpec::new(
            rng.gen_range(1e-3..1.0),
            rng.gen_range(0.02..5.0),
            rng.gen_range(0.0..10.0),
        )
        .unwrap();
        let b2 = BathSpec::new(
            rng.gen_range(1e-3..1.0),
            rng.gen_range(0.02..5.0),
            rng.gen_range(0.0..10.0),
        )
        .unwrap();
        (pair, b1, b2)
    }

    #[test]
    fn rejects_unstable_coupling() {
        // λ² ≥ k₁′k₂′: λ = −0.5 gives k′ = 0.5 each, λ² = 0.25 = k₁′k₂′
        assert!(OscillatorPair::new(1.0, 1.0, 1.0, 1.0, -0.5).is_err());
        assert!(OscillatorPair::new(1.0, 1.0, 1.0, 1.0, -0.4).is_ok());
        assert!(OscillatorPair::new(1.0, 1.0, 1.0, 1.0, 5.0).is_ok()); // λ ≥ 0 always stable
        assert!(OscillatorPair::new(0.0, 1.0, 1.0, 1.0, 0.1).is_err());
        assert!(OscillatorPair::new(1.0, 1.0, -1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn static_response_is_real_and_stable() {
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths();
        let r = evaluate_response(&pair, (&b1, &b2), 0.0).unwrap();
        assert_eq!(r.k1, Complex64::new(pair.k1_shifted(), 0.0));
        assert_eq!(r.k2, Complex64::new(pair.k2_shifted(), 0.0));
        let d_expect = pair.k1_shifted() * pair.k2_shifted() - pair.lambda * pair.lambda;
        assert!((r.det - d_expect).norm() < 1e-14 * d_expect);
        assert!(r.det.re > 0.0);
    }

    #[test]
    fn decoupled_response_is_diagonal() {
        let pair = OscillatorPair::new(1.0, 2.0, 1.0, 0.7, 0.0).unwrap();
        let (b1, b2) = detuned_baths();
        let r = evaluate_response(&pair, (&b1, &b2), 0.9).unwrap();
        assert_eq!(r.response[0][1], Complex64::new(0.0, 0.0));
        assert_eq!(r.response[1][0], Complex64::new(0.0, 0.0));
        assert!((r.response[0][0] - 1.0 / r.k1).norm() < 1e-15 * r.response[0][0].norm());
        assert!((r.response[1][1] - 1.0 / r.k2).norm() < 1e-15 * r.response[1][1].norm());
    }

    #[test]
    fn response_obeys_reality_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (pair, b1, b2) = random_stable_draw(&mut rng);
            let w: f64 = rng.gen_range(0.01..20.0);
            let rp = evaluate_response(&pair, (&b1, &b2), w).unwrap();
            let rm = evaluate_response(&pair, (&b1, &b2), -w).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let diff = (rm.response[i][j] - rp.response[i][j].conj()).norm();
                    assert!(diff <= 1e-12 * rp.response[i][j].norm());
                }
            }
        }
    }

    #[test]
    fn response_inverts_the_coupling_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let (pair, b1, b2) = random_stable_draw(&mut rng);
            let w: f64 = rng.gen_range(-15.0..15.0);
            let r = evaluate_response(&pair, (&b1, &b2), w).unwrap();
            let lam = Complex64::new(pair.lambda, 0.0);
            // K = [[K₁, −λ], [−λ, K₂]];  R·K must be the identity.
            let k = [[r.k1, -lam], [-lam, r.k2]];
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for l in 0..2 {
                        acc += r.response[i][l] * k[l][j];
                    }
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (acc - expect).norm() < 1e-12,
                        "R*K [{i}][{j}] = {acc} at omega = {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn undamped_resonance_reports_singularity() {
        let pair = OscillatorPair::new(1.0, 1.0, 1.0, 1.0, 0.2).unwrap();
        let b0 = BathSpec::new(0.0, 0.02, 0.0).unwrap();
        let (_, w_minus) = lossless_eigenfrequencies(&pair);
        // With γ = 0 the symmetric mode sits exactly at ω₋ = ω₀ = 1.
        let err = evaluate_response(&pair, (&b0, &b0), w_minus).unwrap_err();
        assert!(matches!(err, crate::DuetError::Numerics(_)));
        // Slightly off resonance the response exists even without damping.
        assert!(evaluate_response(&pair, (&b0, &b0), w_minus + 1e-3).is_ok());
    }

    #[test]
    fn lossless_frequencies_match_frozen_values() {
        // Independently computed from the closed form for the detuned pair.
        let (wp, wm) = lossless_eigenfrequencies(&detuned_pair());
        assert!((wp - 1.198_297_160_049_908_8).abs() < 1e-12);
        assert!((wm - 1.032_755_496_822_129_3).abs() < 1e-12);
        assert!(wp >= wm && wm > 0.0);
    }

    #[test]
    fn lossless_frequencies_decoupled_and_degenerate_limits() {
        // λ = 0: the bare frequencies come back, ordered.
        let pair = OscillatorPair::new(2.0, 1.0, 2.0 * 0.49, 1.44, 0.0).unwrap();
        let (wp, wm) = lossless_eigenfrequencies(&pair);
        assert!((wp - 1.2).abs() < 1e-15);
        assert!((wm - 0.7).abs() < 1e-15);
        // identical oscillators: the symmetric mode is unshifted by a
        // relative-coordinate coupling, ω₋ = ω₀, while ω₊² = ω₀² + 2λ/m.
        let sym = OscillatorPair::new(1.5, 1.5, 1.5, 1.5, 0.6).unwrap();
        let (wp, wm) = lossless_eigenfrequencies(&sym);
        assert!((wm - 1.0).abs() < 1e-14);
        assert!((wp - (1.0 + 2.0 * 0.6 / 1.5_f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rwa_frequencies_limits() {
        // undamped resonant pair: real splitting ω₀ ± g_r/2
        let pair = OscillatorPair::new(1.0, 1.0, 1.0, 1.0, 0.1).unwrap();
        let b0 = BathSpec::new(0.0, 0.02, 0.0).unwrap();
        let (plus, minus) = rwa_eigenfrequencies(&pair, (&b0, &b0));
        let w0 = pair.shifted_frequency_1();
        let gr = 0.1 / w0;
        assert!((plus - Complex64::new(w0 + gr / 2.0, 0.0)).norm() < 1e-14);
        assert!((minus - Complex64::new(w0 - gr / 2.0, 0.0)).norm() < 1e-14);
        // decoupled: the two damped single-oscillator frequencies come back
        let pair0 = OscillatorPair::new(1.0, 2.0, 1.0, 1.8, 0.0).unwrap();
        let b1 = BathSpec::new(0.2, 0.02, 0.0).unwrap();
        let b2 = BathSpec::new(0.05, 0.1, 0.0).unwrap();
        let (plus, minus) = rwa_eigenfrequencies(&pair0, (&b1, &b2));
        let w1 = pair0.shifted_frequency_1();
        let w2 = pair0.shifted_frequency_2();
        let big1 = Complex64::new(w1, 0.0)
            - Complex64::i() * b1.friction_kernel_fourier(w1) / (2.0 * pair0.m1);
        let big2 = Complex64::new(w2, 0.0)
            - Complex64::i() * b2.friction_kernel_fourier(w2) / (2.0 * pair0.m2);
        // ordering by the ± branch of the square root
        assert!((plus - big2).norm().min((plus - big1).norm()) < 1e-13);
        assert!((minus - big1).norm().min((minus - big2).norm()) < 1e-13);
    }

    #[test]
    fn rwa_frequencies_sit_below_the_real_axis_when_damped() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let (pair, b1, b2) = random_stable_draw(&mut rng);
            let (plus, minus) = rwa_eigenfrequencies(&pair, (&b1, &b2));
            assert!(plus.im < 0.0, "Im ω₊ = {} should be negative", plus.im);
            assert!(minus.im < 0.0, "Im ω₋ = {} should be negative", minus.im);
        }
    }

    #[test]
    fn absorption_is_nonnegative_and_peaks_at_the_modes() {
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths();
        let (wp, wm) = lossless_eigenfrequencies(&pair);
        // scan a 10⁻³-spaced grid around the doublet
        let mut peak1 = (0.0, 0.0);
        let mut peak2 = (0.0, 0.0);
        let mut w = 0.85;
        while w < 1.35 {
            let a1 = absorption_spectrum(&pair, (&b1, &b2), w, (1.0, 0.0)).unwrap();
            let a2 = absorption_spectrum(&pair, (&b1, &b2), w, (0.0, 1.0)).unwrap();
            assert!(a1 >= 0.0 && a2 >= 0.0);
            if a1 > peak1.1 {
                peak1 = (w, a1);
            }
            if a2 > peak2.1 {
                peak2 = (w, a2);
            }
            w += 1e-3;
        }
        // With the pair detuned, each oscillator overlaps mostly its own
        // normal mode: driving the first peaks at the lower mode, driving
        // the second at the upper one (within two grid points).
        assert!(
            (peak1.0 - wm).abs() <= 2e-3,
            "drive-1 peak at {} vs omega_minus = {}",
            peak1.0,
            wm
        );
        assert!(
            (peak2.0 - wp).abs() <= 2e-3,
            "drive-2 peak at {} vs omega_plus = {}",
            peak2.0,
            wp
        );
        // shoulder near ω₊: absorption there is a sizable fraction of the peak
        let a_plus = absorption_spectrum(&pair, (&b1, &b2), wp, (1.0, 0.0)).unwrap();
        assert!(a_plus > 0.1 * peak1.1);
    }

    #[test]
    fn absorption_without_damping_vanishes_off_resonance() {
        let pair = detuned_pair();
        let b0 = BathSpec::new(0.0, 0.02, 0.0).unwrap();
        for &w in &[0.3, 0.77, 1.5, 2.4] {
            let a = absorption_spectrum(&pair, (&b0, &b0), w, (1.0, 1.0)).unwrap();
            assert!(a.abs() < 1e-14, "absorption {a} at omega = {w}");
        }
    }

    #[test]
    fn decoupled_absorption_is_a_single_oscillator_spectrum() {
        let pair = OscillatorPair::new(1.0, 1.0, 1.0, 1.3225, 0.0).unwrap();
        let (b1, b2) = detuned_baths();
        for &w in &[0.5, 0.9, 1.0, 1.4] {
            let a = absorption_spectrum(&pair, (&b1, &b2), w, (1.0, 0.0)).unwrap();
            let k1 = evaluate_response(&pair, (&b1, &b2), w).unwrap().k1;
            let single = w * (1.0 / k1).im;
            assert!((a - single).abs() < 1e-14 * single.abs().max(1e-300));
        }
        assert!(absorption_spectrum(&pair, (&b1, &b2), 1.0, (-1.0, 0.0)).is_err());
    }

    #[test]
    fn absorption_nonnegative_over_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..300 {
            let (pair, b1, b2) = random_stable_draw(&mut rng);
            let w: f64 = rng.gen_range(1e-3..20.0);
            let weights = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
            let a = absorption_spectrum(&pair, (&b1, &b2), w, weights).unwrap();
            assert!(a >= -1e-13, "absorption {a} at omega {w}");
        }
    }

    #[test]
    fn no_determinant_zeros_in_the_upper_half_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..25 {
            let (pair, b1, b2) = random_stable_draw(&mut rng);
            let (wp, _) = lossless_eigenfrequencies(&pair);
            let reach = 6.0 * wp.max(1.0 / b1.tau_c).max(1.0 / b2.tau_c);
            let n = upper_half_plane_zero_count(&pair, (&b1, &b2), reach, reach).unwrap();
            assert_eq!(
                n, 0,
                "pair {pair:?} baths {b1:?} {b2:?} reach {reach:.6e}"
            );
        }
    }

    #[test]
    fn argument_principle_sees_synthetic_zeros() {
        // Sanity-check the winding machinery itself on D(z)·(contour around
        // a region that surely contains poles): count zeros of D in the
        // LOWER half-plane mirrored upward by relabeling z → conj(z) — the
        // damped pair has all its zeros there, and the count must be the
        // full set of 6 Drude-regularized roots or at least the 4 resonant
        // ones within reach. We avoid that ambiguity and instead verify a
        // known-zero case: an undamped pair has its zeros ON the axis, so a
        // rectangle just above it still counts 0.
        let pair = OscillatorPair::new(1.0, 1.0, 1.0, 1.0, 0.2).unwrap();
        let b0 = BathSpec::new(0.0, 0.02, 0.0).unwrap();
        let n = upper_half_plane_zero_count(&pair, (&b0, &b0), 8.0, 8.0).unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn newton_poles_refine_the_rwa_seeds() {
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths();
        let poles = resonance_poles(&pair, (&b1, &b2)).unwrap();
        for z in poles {
            // verified roots, strictly below the axis
            assert!(determinant_complex(&pair, (&b1, &b2), z).norm() < 1e-10);
            assert!(z.im < 0.0);
        }
        // weak damping: the real parts track the lossless frequencies to O(γ)
        let weak1 = BathSpec::new(0.01, 0.02, 0.0).unwrap();
        let weak2 = BathSpec::new(0.01, 0.02, 0.0).unwrap();
        let poles = resonance_poles(&pair, (&weak1, &weak2)).unwrap();
        let (wp, wm) = lossless_eigenfrequencies(&pair);
        let err_plus = (poles[0].re - wp).abs().min((poles[0].re - wm).abs());
        let err_minus = (poles[1].re - wp).abs().min((poles[1].re - wm).abs());
        assert!(err_plus < 0.01, "pole offset {err_plus}");
        assert!(err_minus < 0.01, "pole offset {err_minus}");
    }
}
