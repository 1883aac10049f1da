//! Stationary covariance matrix of the coupled pair by adaptive frequency
//! quadrature.
//!
//! Every equal-time second moment is the one-sided integral
//! `C_AB = ∫₀^∞ dω/2π · Re S_AB(ω)` of the cross-spectra from
//! [`crate::spectra`]. All ten independent entries are integrated
//! simultaneously (one spectral-matrix evaluation per node serves every
//! component), each carrying an error estimate that combines the quadrature
//! error with an analytic bound on the truncated Drude tail. Entries that
//! must vanish in a stationary state are integrated anyway and asserted
//! small — a built-in self-test of the whole spectral stack.

use crate::bath::BathSpec;
use crate::quad::integrate_adaptive;
use crate::response::{lossless_eigenfrequencies, OscillatorPair};
use crate::spectra::cross_spectrum;
use crate::{DuetError, Result};
use std::f64::consts::TAU;

/// Settings for the adaptive frequency quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Upper integration limit; the Drude tail beyond it enters the error
    /// budget through an analytic bound.
    pub omega_max: f64,
    /// Per-component relative tolerance.
    pub rel_tol: f64,
    /// Per-component absolute floor (also the acceptance threshold for
    /// entries that vanish identically).
    pub abs_tol: f64,
    /// Frequencies forced to be panel edges from the start (normal modes,
    /// kernel cutoffs); values outside `(0, omega_max)` are ignored.
    pub seed_points: Vec<f64>,
}

impl QuadratureConfig {
    /// Validates the cutoff and tolerances.
    pub fn new(omega_max: f64, rel_tol: f64, abs_tol: f64, seed_points: Vec<f64>) -> Result<Self> {
        if !(omega_max.is_finite() && omega_max > 0.0) {
            return Err(DuetError::InvalidParameter(format!(
                "omega_max must be finite and > 0, got {omega_max}"
            )));
        }
        for (name, v) in [("rel_tol", rel_tol), ("abs_tol", abs_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(DuetError::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if seed_points.iter().any(|s| !s.is_finite()) {
            return Err(DuetError::InvalidParameter(
                "seed points must be finite".into(),
            ));
        }
        Ok(Self { omega_max, rel_tol, abs_tol, seed_points })
    }

    /// Canonical settings for a given pair and baths: cutoff at
    /// `max(20·ω₊, 20/τ_c)` (Drude tail below 10⁻¹⁰ of the peak
    /// contribution), subdivision seeded at both normal modes and both
    /// kernel cutoffs.
    pub fn default_for(pair: &OscillatorPair, baths: (&BathSpec, &BathSpec)) -> Self {
        let (omega_plus, omega_minus) = lossless_eigenfrequencies(pair);
        let cut1 = 1.0 / baths.0.tau_c;
        let cut2 = 1.0 / baths.1.tau_c;
        Self {
            omega_max: (20.0 * omega_plus).max(20.0 * cut1).max(20.0 * cut2),
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            seed_points: vec![omega_minus, omega_plus, cut1, cut2],
        }
    }
}

/// Real symmetric 4×4 covariance matrix over `(x, p_x, y, p_y)`, with
/// per-entry error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    /// Symmetrized second moments `½⟨{A, B}⟩`.
    pub c: [[f64; 4]; 4],
    /// Error budget per entry: accumulated quadrature estimate plus the
    /// analytic bound on the tail truncated at `omega_max`. Symmetric.
    pub error: [[f64; 4]; 4],
}

impl CovarianceMatrix {
    /// Wraps an externally supplied matrix with a zero error budget.
    ///
    /// Entries must be finite and symmetric to within `1e-12` of the
    /// largest magnitude; the stored matrix is symmetrized exactly.
    pub fn from_entries(c: [[f64; 4]; 4]) -> Result<Self> {
        let mut scale = 0.0_f64;
        for row in &c {
            for &v in row {
                if !v.is_finite() {
                    return Err(DuetError::InvalidParameter(
                        "covariance entries must be finite".into(),
                    ));
                }
                scale = scale.max(v.abs());
            }
        }
        let mut sym = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                if (c[a][b] - c[b][a]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(DuetError::InvalidParameter(
                        "covariance matrix must be symmetric".into(),
                    ));
                }
                sym[a][b] = 0.5 * (c[a][b] + c[b][a]);
            }
        }
        Ok(Self {
            c: sym,
            error: [[0.0; 4]; 4],
        })
    }

    /// Entry accessor, indices as in [`crate::spectra::IDX_X`] etc.
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.c[a][b]
    }

    /// 2×2 diagonal block of the first oscillator, `(x, p_x)`.
    pub fn block_first(&self) -> [[f64; 2]; 2] {
        [[self.c[0][0], self.c[0][1]], [self.c[1][0], self.c[1][1]]]
    }

    /// 2×2 diagonal block of the second oscillator, `(y, p_y)`.
    pub fn block_second(&self) -> [[f64; 2]; 2] {
        [[self.c[2][2], self.c[2][3]], [self.c[3][2], self.c[3][3]]]
    }

    /// 2×2 cross block coupling the oscillators: rows `(x, p_x)`, columns
    /// `(y, p_y)`.
    pub fn block_cross(&self) -> [[f64; 2]; 2] {
        [[self.c[0][2], self.c[0][3]], [self.c[1][2], self.c[1][3]]]
    }

    /// Largest error-budget entry, a scalar summary used in robustness
    /// checks.
    pub fn max_error(&self) -> f64 {
        let mut m = 0.0_f64;
        for row in &self.error {
            for &e in row {
                m = m.max(e);
            }
        }
        m
    }
}

/// Upper-triangle order in which the ten independent entries are
/// integrated.
const UPPER: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Analytic bound on the neglected tail `∫_Ω^∞ dω/2π |S_AB|`, assuming the
/// slowest admissible decay `|S| ≤ A/ω³` past the cutoff (the true Drude
/// momentum tail; position entries fall even faster). `A` is calibrated on
/// samples at and beyond the cutoff and the result carries a safety factor
/// of two: `2·A/(4πΩ²)`.
fn tail_bounds(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    omega_max: f64,
) -> [f64; 10] {
    let mut amp = [0.0_f64; 10];
    for c in [1.0, 1.3, 1.7] {
        let w = c * omega_max;
        let sm = cross_spectrum(pair, baths, w)
            .expect("damped response is nonsingular beyond the cutoff");
        for (k, &(a, b)) in UPPER.iter().enumerate() {
            amp[k] = amp[k].max(sm.s[a][b].norm() * w.powi(3));
        }
    }
    amp.map(|a| a / (TAU * omega_max * omega_max))
}

/// Computes the stationary covariance matrix.
///
/// Both dampings must be strictly positive (otherwise no steady state
/// exists). After assembly the result passes two gates:
///
/// * stationarity self-test — the identically vanishing moments `⟨x, p_x⟩`
///   and `⟨y, p_y⟩` (plus `⟨x, p_y⟩`, `⟨p_x, y⟩` when the bath temperatures
///   are equal) must come out below `quad.abs_tol`;
/// * physicality — all eigenvalues of `C + (i/2)σ` must be ≥ −10⁻⁸, the
///   uncertainty relation every Gaussian state obeys. A violation signals a
///   misconfigured quadrature (for example a cutoff below the resonances)
///   and is reported as a physicality failure.
pub fn stationary_covariance(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    quad: &QuadratureConfig,
) -> Result<CovarianceMatrix> {
    if baths.0.gamma <= 0.0 || baths.1.gamma <= 0.0 {
        return Err(DuetError::InvalidParameter(
            "stationary covariance requires gamma > 0 for both baths".into(),
        ));
    }
    let f = |w: f64| {
        let sm = cross_spectrum(pair, baths, w)
            .expect("damped response is nonsingular at interior quadrature nodes");
        UPPER.iter().map(|&(a, b)| sm.s[a][b].re).collect()
    };
    let est = integrate_adaptive(
        &f,
        0.0,
        quad.omega_max,
        quad.rel_tol,
        quad.abs_tol,
        &quad.seed_points,
    )?;
    let tails = tail_bounds(pair, baths, quad.omega_max);

    let mut c = [[0.0_f64; 4]; 4];
    let mut error = [[0.0_f64; 4]; 4];
    for (k, &(a, b)) in UPPER.iter().enumerate() {
        c[a][b] = est.value[k] / TAU;
        c[b][a] = c[a][b];
        error[a][b] = est.error[k] / TAU + tails[k];
        error[b][a] = error[a][b];
    }

    // stationarity self-test on the moments that must vanish
    let mut vanishing = vec![((0, 1), "<x,p_x>"), ((2, 3), "<y,p_y>")];
    if baths.0.temperature == baths.1.temperature {
        vanishing.push(((0, 3), "<x,p_y>"));
        vanishing.push(((1, 2), "<p_x,y>"));
    }
    for ((a, b), name) in vanishing {
        if c[a][b].abs() >= quad.abs_tol {
            return Err(DuetError::Numerics(format!(
                "stationarity self-test failed: {name} = {:.3e} exceeds abs_tol = {:.3e}",
                c[a][b], quad.abs_tol
            )));
        }
    }

    // uncertainty-relation gate
    let half_sigma = crate::gaussian::SymplecticForm::SIGMA.map(|row| row.map(|v| 0.5 * v));
    let min_eig = crate::gaussian::hermitian_min_eigenvalue(&c, &half_sigma);
    if min_eig < -1e-8 {
        return Err(DuetError::Physicality(format!(
            "uncertainty relation violated: min eig of C + (i/2)sigma = {min_eig:.3e} \
             (quadrature misconfiguration, e.g. omega_max below the resonances?)"
        )));
    }

    Ok(CovarianceMatrix { c, error })
}

/// Stationary variance of the interaction coordinate `x − y`, integrated
/// directly from its own spectral density
/// `|(K₂−λ)/D|² S_F1 + |(K₁−λ)/D|² S_F2`.
///
/// Coincides with `C_xx + C_yy − 2C_xy` assembled from
/// [`stationary_covariance`]; keeping the direct route exercises the
/// response assembly independently of the full matrix.
pub fn interaction_coordinate_variance(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    quad: &QuadratureConfig,
) -> Result<f64> {
    if baths.0.gamma <= 0.0 || baths.1.gamma <= 0.0 {
        return Err(DuetError::InvalidParameter(
            "stationary covariance requires gamma > 0 for both baths".into(),
        ));
    }
    let f = |w: f64| {
        let r = crate::response::evaluate_response(pair, baths, w)
            .expect("damped response is nonsingular at interior quadrature nodes");
        let rel1 = (r.k2 - pair.lambda) / r.det;
        let rel2 = (r.k1 - pair.lambda) / r.det;
        vec![
            rel1.norm_sqr() * baths.0.force_noise_spectrum(w)
                + rel2.norm_sqr() * baths.1.force_noise_spectrum(w),
        ]
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

#[cfg(test)]
mod tests {
    use super::*;

    /// Detuned reference pair (ω₂₀ = 1.15, λ = 0.09) with equal Markovian
    /// baths γ = 0.1, 1/τ_c = 50.
    fn detuned_pair() -> OscillatorPair {
        OscillatorPair::new(1.0, 1.0, 1.0, 1.3225, 0.09).unwrap()
    }

    fn detuned_baths(t1: f64, t2: f64) -> (BathSpec, BathSpec) {
        (
            BathSpec::new(0.1, 0.02, t1).unwrap(),
            BathSpec::new(0.1, 0.02, t2).unwrap(),
        )
    }

    fn tight(pair: &OscillatorPair, baths: (&BathSpec, &BathSpec)) -> QuadratureConfig {
        let mut q = QuadratureConfig::default_for(pair, baths);
        q.rel_tol = 1e-11;
        q.abs_tol = 1e-13;
        q
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(100.0, 1e-9, 1e-12, vec![]).is_ok());
        assert!(QuadratureConfig::new(0.0, 1e-9, 1e-12, vec![]).is_err());
        assert!(QuadratureConfig::new(100.0, 0.0, 1e-12, vec![]).is_err());
        assert!(QuadratureConfig::new(100.0, 1e-9, 0.0, vec![]).is_err());
        assert!(QuadratureConfig::new(100.0, 1e-9, 1e-12, vec![f64::NAN]).is_err());
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths(0.0, 0.0);
        let q = QuadratureConfig::default_for(&pair, (&b1, &b2));
        assert_eq!(q.omega_max, 1000.0); // 20/τ_c dominates 20·ω₊
        assert_eq!(q.seed_points.len(), 4);
    }

    #[test]
    fn frozen_ground_state_covariances() {
        // T₁ = T₂ = 0; all ten entries frozen from an independent adaptive
        // integrator over the same truncated interval
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths(0.0, 0.0);
        let cov = stationary_covariance(&pair, (&b1, &b2), &tight(&pair, (&b1, &b2))).unwrap();
        let expect = [
            ((0, 0), 0.46616575283030137),
            ((0, 2), 0.01542448083685708),
            ((1, 1), 0.6289163300860336),
            ((1, 3), -0.019124214536350537),
            ((2, 2), 0.4108946964982301),
            ((3, 3), 0.6974447655079564),
        ];
        for ((a, b), v) in expect {
            assert!(
                (cov.c[a][b] - v).abs() <= 1e-9 * v.abs(),
                "C[{a}][{b}] = {} vs {v}",
                cov.c[a][b]
            );
            assert_eq!(cov.c[b][a], cov.c[a][b]);
        }
        // moments that vanish identically integrate to exactly zero (their
        // integrand is exactly zero by the spectral factor rule)
        assert_eq!(cov.c[0][1], 0.0);
        assert_eq!(cov.c[2][3], 0.0);
        // equal temperatures: mixed position-momentum moments at noise level
        assert!(cov.c[0][3].abs() < 1e-13);
        assert!(cov.c[1][2].abs() < 1e-13);
        // diagonal positive, errors bounded and positive
        for i in 0..4 {
            assert!(cov.c[i][i] > 0.0);
            assert!(cov.error[i][i] > 0.0 && cov.error[i][i] < 1e-3);
        }
    }

    #[test]
    fn frozen_two_temperature_covariances() {
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths(0.5, 0.25);
        let cov = stationary_covariance(&pair, (&b1, &b2), &tight(&pair, (&b1, &b2))).unwrap();
        let expect = [
            ((0, 0), 0.6050487188593499),
            ((0, 2), 0.040048609167912565),
            ((0, 3), 0.01174816892767133),
            ((1, 1), 0.7586274041228319),
            ((1, 2), -0.011748168927671335),
            ((1, 3), 0.0039624567582112165),
            ((2, 2), 0.43110614793510277),
            ((3, 3), 0.7184988427897911),
        ];
        for ((a, b), v) in expect {
            assert!(
                (cov.c[a][b] - v).abs() <= 1e-9 * v.abs(),
                "C[{a}][{b}] = {} vs {v}",
                cov.c[a][b]
            );
        }
        // unequal temperatures leave a genuine ⟨x,p_y⟩ = −⟨p_x,y⟩ pair
        // (stationarity of ⟨xy⟩ for equal masses)
        assert!((cov.c[0][3] + cov.c[1][2]).abs() <= 1e-12);
    }

    #[test]
    fn truncating_below_the_resonances_fails_physicality() {
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths(0.0, 0.0);
        let quad = QuadratureConfig::new(1.5, 1e-10, 1e-12, vec![1.03, 1.2]).unwrap();
        let err = stationary_covariance(&pair, (&b1, &b2), &quad).unwrap_err();
        assert!(matches!(err, DuetError::Physicality(_)), "got {err}");
    }

    #[test]
    fn undamped_bath_is_rejected() {
        let pair = detuned_pair();
        let b1 = BathSpec::new(0.0, 0.02, 0.0).unwrap();
        let b2 = BathSpec::new(0.1, 0.02, 0.0).unwrap();
        let quad = QuadratureConfig::new(100.0, 1e-9, 1e-12, vec![]).unwrap();
        assert!(stationary_covariance(&pair, (&b1, &b2), &quad).is_err());
        assert!(interaction_coordinate_variance(&pair, (&b1, &b2), &quad).is_err());
    }

    #[test]
    fn impossible_tolerance_reports_non_convergence() {
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths(0.0, 0.0);
        let quad = QuadratureConfig::new(1000.0, 1e-300, 1e-300, vec![]).unwrap();
        let err = stationary_covariance(&pair, (&b1, &b2), &quad).unwrap_err();
        assert!(matches!(err, DuetError::Numerics(_)), "got {err}");
    }

    #[test]
    fn weakly_damped_uncoupled_oscillator_reaches_its_ground_state() {
        // λ = 0, T = 0, γ → 0⁺: the x-variance approaches the ground-state
        // value 1/(2m₁ω₁₀) = 0.5; frozen value at γ = 10⁻³ from the
        // independent integrator
        let pair = OscillatorPair::new(1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let b = BathSpec::new(1e-3, 0.02, 0.0).unwrap();
        let cov = stationary_covariance(&pair, (&b, &b), &tight(&pair, (&b, &b))).unwrap();
        assert!((cov.c[0][0] - 0.4998454644880205).abs() <= 1e-9);
        assert!((cov.c[0][0] - 0.5).abs() <= 1e-3 * 0.5);
        // no coupling: the cross block vanishes identically
        for a in 0..2 {
            for b in 2..4 {
                assert_eq!(cov.c[a][b], 0.0);
            }
        }
    }

    #[test]
    fn interaction_variance_two_routes_agree() {
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths(0.0, 0.0);
        let quad = tight(&pair, (&b1, &b2));
        let direct = interaction_coordinate_variance(&pair, (&b1, &b2), &quad).unwrap();
        // frozen from the independent integrator
        assert!((direct - 0.8462114876548172).abs() <= 1e-9 * direct);
        let cov = stationary_covariance(&pair, (&b1, &b2), &quad).unwrap();
        let assembled = cov.c[0][0] + cov.c[2][2] - 2.0 * cov.c[0][2];
        assert!(
            (direct - assembled).abs() <= 1e-8 * direct,
            "direct {direct} vs assembled {assembled}"
        );
        // λ = 0 degenerates to the plain sum of variances
        let solo = OscillatorPair::new(1.0, 1.0, 1.0, 1.3225, 0.0).unwrap();
        let quad0 = tight(&solo, (&b1, &b2));
        let v0 = interaction_coordinate_variance(&solo, (&b1, &b2), &quad0).unwrap();
        let cov0 = stationary_covariance(&solo, (&b1, &b2), &quad0).unwrap();
        let sum0 = cov0.c[0][0] + cov0.c[2][2];
        assert!((v0 - sum0).abs() <= 1e-8 * v0);
    }

    #[test]
    fn exchange_symmetric_configuration_has_equal_variances() {
        let pair = OscillatorPair::new(1.2, 1.2, 0.9, 0.9, 0.3).unwrap();
        let b = BathSpec::new(0.2, 0.1, 0.7).unwrap();
        let cov = stationary_covariance(&pair, (&b, &b), &tight(&pair, (&b, &b))).unwrap();
        assert!((cov.c[0][0] - cov.c[2][2]).abs() <= 1e-10 * cov.c[0][0]);
        assert!((cov.c[1][1] - cov.c[3][3]).abs() <= 1e-10 * cov.c[1][1]);
    }

    #[test]
    fn doubling_the_cutoff_stays_within_the_error_budget() {
        let pair = detuned_pair();
        let (b1, b2) = detuned_baths(0.5, 0.25);
        let quad = tight(&pair, (&b1, &b2));
        let cov = stationary_covariance(&pair, (&b1, &b2), &quad).unwrap();
        let mut wide = quad.clone();
        wide.omega_max *= 2.0;
        let cov2 = stationary_covariance(&pair, (&b1, &b2), &wide).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let shift = (cov.c[a][b] - cov2.c[a][b]).abs();
                assert!(
                    shift <= cov.error[a][b],
                    "entry [{a}][{b}] moved by {shift:.3e}, budget {:.3e}",
                    cov.error[a][b]
                );
            }
        }
    }
}
