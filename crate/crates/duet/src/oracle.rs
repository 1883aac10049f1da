//! Independent time-domain validation with explicitly discretized baths.
//!
//! Each continuous bath is replaced by `N` harmonic modes on a uniform
//! frequency grid whose couplings midpoint-sample the Drude spectral
//! density. The full quadratic Hamiltonian (system + counterterms + modes)
//! is diagonalized once; covariances then propagate along the *exact*
//! normal-mode flow, with no integrator error. Steady-state system
//! covariances, heat currents, and energy bookkeeping extracted from the
//! relaxation plateau cross-check the frequency-domain results through an
//! entirely independent route.
//!
//! Finite baths re-cohere at the recurrence time `t_rec = 2π/Δω`; all
//! extraction times are guarded to stay below `t_rec/2`.

use crate::bath::{effective_temperature, BathSpec};
use crate::covariance::CovarianceMatrix;
use crate::response::{lossless_eigenfrequencies, OscillatorPair};
use crate::{DuetError, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::sync::OnceLock;

/// Number of plateau samples (spread over two slow-mode periods).
const PLATEAU_SAMPLES: usize = 33;

/// Discretized two-bath model with a lazily computed normal-mode form.
#[derive(Debug)]
pub struct FiniteBathModel {
    pair: OscillatorPair,
    baths: [BathSpec; 2],
    bath_omegas: [Vec<f64>; 2],
    /// Effective coupling weights `k_j c_j² = (2/π) ρ(ω_j) Δω` per mode.
    bath_weights: [Vec<f64>; 2],
    delta_omega: [f64; 2],
    t_recurrence: f64,
    decomp: OnceLock<ModeDecomposition>,
}

/// Normal-mode form of the mass-weighted stiffness matrix, plus the
/// (diagonal) initial covariances in the original coordinates.
#[derive(Debug)]
struct ModeDecomposition {
    /// Orthogonal eigenvector matrix (columns are mass-weighted modes).
    modes: DMatrix<f64>,
    /// Normal-mode angular frequencies, all positive.
    frequencies: DVector<f64>,
    /// √(mass) per position coordinate `(x, y, bath 1 modes, bath 2 modes)`.
    sqrt_mass: DVector<f64>,
    /// Initial position variances per coordinate (diagonal initial state).
    init_pos_var: DVector<f64>,
    /// Initial momentum variances per coordinate.
    init_mom_var: DVector<f64>,
}

/// Exact-flow coefficient row of one observable over the initial phase
/// space: `A(t) = Σ_a pos[a]·x_a(0) + mom[a]·p_a(0)`.
struct FlowRow {
    pos: DVector<f64>,
    mom: DVector<f64>,
}

/// Full covariance matrix over `(x, p_x, y, p_y, q_{1,1}, p_{1,1}, …)`,
/// dimension `4 + 2N₁ + 2N₂`.
#[derive(Debug, Clone)]
pub struct FullCovariance {
    matrix: DMatrix<f64>,
    n1: usize,
}

impl FullCovariance {
    /// Phase-space dimension `4 + 2N₁ + 2N₂`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Entry accessor in the interleaved `(coordinate, momentum)` basis.
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.matrix[(a, b)]
    }

    /// The 4×4 system block over `(x, p_x, y, p_y)`.
    pub fn system_block(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                out[a][b] = self.matrix[(a, b)];
            }
        }
        out
    }

    /// Number of modes in the first bath (for index bookkeeping).
    pub fn first_bath_modes(&self) -> usize {
        self.n1
    }
}

/// Builds a finite-bath model with `n1`/`n2` modes per bath on midpoint
/// grids up to `omega_max`.
///
/// Preconditions: at least 100 modes per bath, and `omega_max ≥ 10·ω₊` so
/// the grid covers both normal modes with a wide margin (the Drude weights
/// fall off as `ω⁻²`, so full-tail coverage is a matter of accuracy, not
/// validity, and is probed by the convergence tests). A coupled bath whose
/// grid spacing exceeds the oscillator linewidth `γ_i/m_i` cannot resolve
/// the dissipative dynamics before recurrence and is rejected.
pub fn build_model(
    pair: &OscillatorPair,
    baths: (&BathSpec, &BathSpec),
    n1: usize,
    n2: usize,
    omega_max: f64,
) -> Result<FiniteBathModel> {
    for (label, n) in [("first", n1), ("second", n2)] {
        if n < 100 {
            return Err(DuetError::InvalidParameter(format!(
                "finite-bath model needs at least 100 modes per bath, got {n} for the {label}"
            )));
        }
    }
    let (omega_plus, _) = lossless_eigenfrequencies(pair);
    if !(omega_max.is_finite() && omega_max >= 10.0 * omega_plus) {
        return Err(DuetError::InvalidParameter(format!(
            "bath grid cutoff {omega_max} must be at least ten times the upper normal mode \
             {omega_plus:.6}"
        )));
    }
    let specs = [*baths.0, *baths.1];
    let masses = [pair.m1, pair.m2];
    let counts = [n1, n2];
    let mut bath_omegas: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    let mut bath_weights: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    let mut delta_omega = [0.0_f64; 2];
    for i in 0..2 {
        let n = counts[i];
        let d = omega_max / n as f64;
        delta_omega[i] = d;
        if specs[i].gamma > 0.0 && d > specs[i].gamma / masses[i] {
            return Err(DuetError::InvalidParameter(format!(
                "bath grid spacing {d:.6} exceeds the oscillator linewidth {:.6}; \
                 increase the mode count",
                specs[i].gamma / masses[i]
            )));
        }
        let mut omegas = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let w = (j as f64 + 0.5) * d;
            omegas.push(w);
            weights.push(2.0 / std::f64::consts::PI * specs[i].spectral_density(w) * d);
        }
        bath_omegas[i] = omegas;
        bath_weights[i] = weights;
    }
    let t_recurrence = std::f64::consts::TAU / delta_omega[0].max(delta_omega[1]);
    Ok(FiniteBathModel {
        pair: *pair,
        baths: specs,
        bath_omegas,
        bath_weights,
        delta_omega,
        t_recurrence,
        decomp: OnceLock::new(),
    })
}

impl FiniteBathModel {
    /// First time at which the discrete baths re-cohere, `2π/max(Δω)`.
    pub fn recurrence_time(&self) -> f64 {
        self.t_recurrence
    }

    /// Uniform grid spacing `Δω` of one bath.
    pub fn grid_spacing(&self, bath: usize) -> f64 {
        self.delta_omega[bath]
    }

    /// Mode frequencies of one bath.
    pub fn mode_frequencies(&self, bath: usize) -> &[f64] {
        &self.bath_omegas[bath]
    }

    /// Effective coupling weights `k_j c_j²` of one bath.
    pub fn mode_weights(&self, bath: usize) -> &[f64] {
        &self.bath_weights[bath]
    }

    /// Total discrete spectral weight `Σ_j (π/2) k_j c_j²`, which must
    /// approximate `∫₀^{Ω} ρ = (γ/τ_c)·arctan(Ω τ_c)`.
    pub fn spectral_weight_sum(&self, bath: usize) -> f64 {
        self.bath_weights[bath]
            .iter()
            .map(|w| 0.5 * std::f64::consts::PI * w)
            .sum()
    }

    /// Friction kernel reproduced by the discrete bath at `z = ω + iε`:
    /// `μ_N(z) = Σ_j k_j c_j² · iz/(ω_j² − z²)`.
    ///
    /// The small positive broadening `ε` regularizes the mode poles; the
    /// discretization error of this quantity shrinks at second order in
    /// the grid spacing.
    pub fn discrete_friction_kernel(&self, bath: usize, omega: f64, broadening: f64) -> Complex64 {
        let z = Complex64::new(omega, broadening);
        let z2 = z * z;
        let iz = Complex64::new(0.0, 1.0) * z;
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, weight) in self.bath_omegas[bath].iter().zip(&self.bath_weights[bath]) {
            acc += weight * iz / (w * w - z2);
        }
        acc
    }

    /// Number of position coordinates `2 + N₁ + N₂`.
    fn coords(&self) -> usize {
        2 + self.bath_omegas[0].len() + self.bath_omegas[1].len()
    }

    fn decomposition(&self) -> Result<&ModeDecomposition> {
        if let Some(d) = self.decomp.get() {
            return Ok(d);
        }
        let d = self.compute_decomposition()?;
        let _ = self.decomp.set(d);
        Ok(self.decomp.get().expect("decomposition was just stored"))
    }

    /// One-time normal-mode diagonalization of the mass-weighted stiffness
    /// matrix.
    fn compute_decomposition(&self) -> Result<ModeDecomposition> {
        let n = self.coords();
        let n1 = self.bath_omegas[0].len();
        let mut sqrt_mass = DVector::from_element(n, 1.0);
        sqrt_mass[0] = self.pair.m1.sqrt();
        sqrt_mass[1] = self.pair.m2.sqrt();

        let counter: [f64; 2] = [
            self.bath_weights[0].iter().sum(),
            self.bath_weights[1].iter().sum(),
        ];
        let mut v = DMatrix::<f64>::zeros(n, n);
        v[(0, 0)] = self.pair.k1_shifted() + counter[0];
        v[(1, 1)] = self.pair.k2_shifted() + counter[1];
        v[(0, 1)] = -self.pair.lambda;
        v[(1, 0)] = -self.pair.lambda;
        for bath in 0..2 {
            let sys = bath; // x couples to bath 1, y to bath 2
            let base = 2 + bath * n1;
            for (j, (&w, &weight)) in self.bath_omegas[bath]
                .iter()
                .zip(&self.bath_weights[bath])
                .enumerate()
            {
                let idx = base + j;
                v[(idx, idx)] = w * w;
                let g = w * weight.sqrt(); // k_j c_j = ω_j √(k_j c_j²)
                v[(sys, idx)] = -g;
                v[(idx, sys)] = -g;
            }
        }
        // mass weighting Ṽ = M^{-1/2} V M^{-1/2}
        for a in 0..n {
            for b in 0..n {
                let val = v[(a, b)] / (sqrt_mass[a] * sqrt_mass[b]);
                v[(a, b)] = val;
            }
        }
        let eig = nalgebra::linalg::SymmetricEigen::new(v);
        let mut frequencies = DVector::zeros(n);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= 0.0 {
                return Err(DuetError::Numerics(format!(
                    "normal-mode form is not positive definite (eigenvalue {lambda:.3e}); \
                     the discretized Hamiltonian lost stability"
                )));
            }
            frequencies[k] = lambda.sqrt();
        }

        // diagonal initial covariances: system in the ground state of the
        // uncoupled, unshifted oscillators at the origin (so the clamped
        // bath shift vanishes identically), baths thermal mode by mode
        let mut init_pos_var = DVector::zeros(n);
        let mut init_mom_var = DVector::zeros(n);
        let bare = [self.pair.bare_frequency_1(), self.pair.bare_frequency_2()];
        let masses = [self.pair.m1, self.pair.m2];
        for i in 0..2 {
            init_pos_var[i] = 0.5 / (masses[i] * bare[i]);
            init_mom_var[i] = 0.5 * masses[i] * bare[i];
        }
        for bath in 0..2 {
            let base = 2 + bath * n1;
            let temp = self.baths[bath].temperature;
            for (j, &w) in self.bath_omegas[bath].iter().enumerate() {
                let theta = effective_temperature(temp, w);
                init_pos_var[base + j] = theta / (w * w);
                init_mom_var[base + j] = theta;
            }
        }
        Ok(ModeDecomposition {
            modes: eig.eigenvectors,
            frequencies,
            sqrt_mass,
            init_pos_var,
            init_mom_var,
        })
    }
}

impl ModeDecomposition {
    /// Row of the exact flow for the observable `wᵀ·x(t)` (`momentum_like`
    /// false) or `wᵀ·p(t)` (true), where `w` lives on the position
    /// coordinates.
    fn observable_row(&self, w: &DVector<f64>, momentum_like: bool, t: f64) -> FlowRow {
        let n = w.len();
        // project onto the mass-weighted normal modes
        let mut scaled = DVector::zeros(n);
        for a in 0..n {
            scaled[a] = if momentum_like {
                w[a] * self.sqrt_mass[a]
            } else {
                w[a] / self.sqrt_mass[a]
            };
        }
        let amp = self.modes.tr_mul(&scaled);
        self.row_from_projection(&amp, momentum_like, t)
    }

    /// Same as [`observable_row`] for a single unit coordinate, avoiding
    /// the dense projection.
    fn unit_row(&self, coord: usize, momentum_like: bool, t: f64) -> FlowRow {
        let n = self.frequencies.len();
        let mut amp = DVector::zeros(n);
        for k in 0..n {
            amp[k] = if momentum_like {
                self.modes[(coord, k)] * self.sqrt_mass[coord]
            } else {
                self.modes[(coord, k)] / self.sqrt_mass[coord]
            };
        }
        self.row_from_projection(&amp, momentum_like, t)
    }

    fn row_from_projection(&self, amp: &DVector<f64>, momentum_like: bool, t: f64) -> FlowRow {
        let n = amp.len();
        let mut cos_part = DVector::zeros(n);
        let mut sin_part = DVector::zeros(n);
        for k in 0..n {
            let nu = self.frequencies[k];
            let (s, c) = (nu * t).sin_cos();
            if momentum_like {
                // p(t) = −O ν sin(νt) Oᵀ ξ(0) + O cos(νt) Oᵀ π(0)
                cos_part[k] = -amp[k] * nu * s;
                sin_part[k] = amp[k] * c;
            } else {
                // x(t) = O cos(νt) Oᵀ ξ(0) + O ν⁻¹ sin(νt) Oᵀ π(0)
                cos_part[k] = amp[k] * c;
                sin_part[k] = amp[k] * s / nu;
            }
        }
        let mut pos = &self.modes * cos_part;
        let mut mom = &self.modes * sin_part;
        for a in 0..n {
            pos[a] *= self.sqrt_mass[a];
            mom[a] /= self.sqrt_mass[a];
        }
        FlowRow { pos, mom }
    }

    /// Covariance of two propagated observables under the diagonal initial
    /// state.
    fn covariance(&self, r1: &FlowRow, r2: &FlowRow) -> f64 {
        let mut acc = 0.0;
        for a in 0..r1.pos.len() {
            acc += r1.pos[a] * r2.pos[a] * self.init_pos_var[a];
            acc += r1.mom[a] * r2.mom[a] * self.init_mom_var[a];
        }
        acc
    }
}

/// Exact-flow propagation of the full covariance matrix to time `t`.
///
/// The initial state is the ground state of the uncoupled, unshifted
/// oscillators times the thermal state of each (clamped) bath mode. The
/// result is `Σ(t) = Φ(t) Σ(0) Φ(t)ᵀ` with `Φ` the exact normal-mode flow;
/// the only numerical content is one symmetric diagonalization. Memory and
/// time scale as the square and cube of the phase-space dimension — meant
/// for modest mode counts (the plateau extraction below never materializes
/// these matrices).
pub fn propagate_covariance(model: &FiniteBathModel, t: f64) -> Result<FullCovariance> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(DuetError::InvalidParameter(format!(
            "propagation time must be finite and nonnegative, got {t}"
        )));
    }
    if t > 0.5 * model.t_recurrence {
        return Err(DuetError::InvalidParameter(format!(
            "propagation time {t:.3} exceeds the recurrence guard {:.3} (= t_rec/2)",
            0.5 * model.t_recurrence
        )));
    }
    let d = model.decomposition()?;
    let (pxx, pxp, ppx, ppp) = flow_blocks(d, t);
    let n = model.coords();
    let dx = &d.init_pos_var;
    let dp = &d.init_mom_var;
    let scale_cols = |m: &DMatrix<f64>, s: &DVector<f64>| {
        let mut out = m.clone();
        for c in 0..n {
            for r in 0..n {
                out[(r, c)] *= s[c];
            }
        }
        out
    };
    let sig_xx = &scale_cols(&pxx, dx) * pxx.transpose() + &scale_cols(&pxp, dp) * pxp.transpose();
    let sig_xp = &scale_cols(&pxx, dx) * ppx.transpose() + &scale_cols(&pxp, dp) * ppp.transpose();
    let sig_pp = &scale_cols(&ppx, dx) * ppx.transpose() + &scale_cols(&ppp, dp) * ppp.transpose();

    // interleave into (x, p_x, y, p_y, q_{1,1}, p_{1,1}, …)
    let n1 = model.bath_omegas[0].len();
    let perm = external_permutation(n, n1);
    let dim = 2 * n;
    let mut matrix = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let (ia, pa) = perm[a];
            let (ib, pb) = perm[b];
            matrix[(a, b)] = match (pa, pb) {
                (false, false) => sig_xx[(ia, ib)],
                (false, true) => sig_xp[(ia, ib)],
                (true, false) => sig_xp[(ib, ia)],
                (true, true) => sig_pp[(ia, ib)],
            };
        }
    }
    Ok(FullCovariance { matrix, n1 })
}

/// External index → (coordinate index, is-momentum).
fn external_permutation(n: usize, n1: usize) -> Vec<(usize, bool)> {
    let mut perm = Vec::with_capacity(2 * n);
    perm.push((0, false)); // x
    perm.push((0, true)); // p_x
    perm.push((1, false)); // y
    perm.push((1, true)); // p_y
    for j in 0..n - 2 {
        let coord = 2 + j;
        let _ = n1;
        perm.push((coord, false));
        perm.push((coord, true));
    }
    perm
}

/// Dense flow blocks `(Φ_xx, Φ_xp, Φ_px, Φ_pp)` in the
/// `(positions | momenta)` ordering.
fn flow_blocks(
    d: &ModeDecomposition,
    t: f64,
) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let n = d.frequencies.len();
    let mut cos_d = DVector::zeros(n);
    let mut sinnu = DVector::zeros(n);
    let mut nusin = DVector::zeros(n);
    for k in 0..n {
        let nu = d.frequencies[k];
        let (s, c) = (nu * t).sin_cos();
        cos_d[k] = c;
        sinnu[k] = s / nu;
        nusin[k] = nu * s;
    }
    let core = |diag: &DVector<f64>| -> DMatrix<f64> {
        let mut scaled = d.modes.clone();
        for c in 0..n {
            for r in 0..n {
                scaled[(r, c)] *= diag[c];
            }
        }
        scaled * d.modes.transpose()
    };
    let kc = core(&cos_d);
    let ks = core(&sinnu);
    let kn = core(&nusin);
    let mut pxx = kc.clone();
    let mut pxp = ks;
    let mut ppx = kn;
    let mut ppp = kc;
    for r in 0..n {
        for c in 0..n {
            let (mr, mc) = (d.sqrt_mass[r], d.sqrt_mass[c]);
            pxx[(r, c)] *= mc / mr;
            pxp[(r, c)] /= mr * mc;
            ppx[(r, c)] *= -(mr * mc);
            ppp[(r, c)] *= mr / mc;
        }
    }
    (pxx, pxp, ppx, ppp)
}

/// Worst-case violation of `Φ(t) σ Φ(t)ᵀ = σ` over the full phase space,
/// testing that the flow preserves the canonical commutators exactly (up
/// to roundoff).
pub fn flow_symplectic_defect(model: &FiniteBathModel, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(DuetError::InvalidParameter(format!(
            "checkpoint time must be finite and nonnegative, got {t}"
        )));
    }
    let d = model.decomposition()?;
    let (pxx, pxp, ppx, ppp) = flow_blocks(d, t);
    let n = model.coords();
    let id = DMatrix::<f64>::identity(n, n);
    let r1 = &pxx * pxp.transpose() - &pxp * pxx.transpose();
    let r2 = &pxx * ppp.transpose() - &pxp * ppx.transpose() - id;
    let r3 = &ppx * ppp.transpose() - &ppp * ppx.transpose();
    let worst = |m: &DMatrix<f64>| m.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    Ok(worst(&r1).max(worst(&r2)).max(worst(&r3)))
}

/// Sample times spanning two slow-mode periods past `t_relax`, plus the
/// recurrence guard.
fn plateau_times(model: &FiniteBathModel, t_relax: f64) -> Result<Vec<f64>> {
    if !(t_relax.is_finite() && t_relax > 0.0) {
        return Err(DuetError::InvalidParameter(format!(
            "relaxation time must be finite and positive, got {t_relax}"
        )));
    }
    let (_, omega_minus) = lossless_eigenfrequencies(&model.pair);
    let window = 2.0 * std::f64::consts::TAU / omega_minus;
    let t_end = t_relax + window;
    if t_end > 0.5 * model.t_recurrence {
        return Err(DuetError::InvalidParameter(format!(
            "averaging window [{t_relax:.3}, {t_end:.3}] exceeds the recurrence guard {:.3} \
             (= t_rec/2); reduce t_relax or refine the bath grid",
            0.5 * model.t_recurrence
        )));
    }
    Ok((0..PLATEAU_SAMPLES)
        .map(|s| t_relax + window * s as f64 / (PLATEAU_SAMPLES - 1) as f64)
        .collect())
}

/// Steady-state system covariance extracted from the relaxation plateau.
///
/// The 4×4 system block is sampled at [`PLATEAU_SAMPLES`] times over two
/// slow-mode periods past `t_relax` and averaged; the in-window standard
/// deviation of each entry is stored as its error estimate. If any entry
/// still varies by more than 1% of the covariance scale across the window
/// — the signature of an undecayed transient — the plateau has not been
/// reached and the call fails, pointing at a larger `t_relax` or mode
/// count.
pub fn steady_system_covariance(
    model: &FiniteBathModel,
    t_relax: f64,
) -> Result<CovarianceMatrix> {
    let times = plateau_times(model, t_relax)?;
    let d = model.decomposition()?;
    let mut sum = [[0.0_f64; 4]; 4];
    let mut sum_sq = [[0.0_f64; 4]; 4];
    for &t in &times {
        let rows = [
            d.unit_row(0, false, t),
            d.unit_row(0, true, t),
            d.unit_row(1, false, t),
            d.unit_row(1, true, t),
        ];
        for a in 0..4 {
            for b in a..4 {
                let c = d.covariance(&rows[a], &rows[b]);
                sum[a][b] += c;
                sum_sq[a][b] += c * c;
            }
        }
    }
    let samples = times.len() as f64;
    let mut mean = [[0.0_f64; 4]; 4];
    let mut err = [[0.0_f64; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let m = sum[a][b] / samples;
            let sd = (sum_sq[a][b] / samples - m * m).max(0.0).sqrt();
            mean[a][b] = m;
            mean[b][a] = m;
            err[a][b] = sd;
            err[b][a] = sd;
        }
    }
    let scale = (0..4).map(|a| mean[a][a]).fold(0.0_f64, f64::max);
    for a in 0..4 {
        for b in a..4 {
            if err[a][b] > 0.01 * scale {
                return Err(DuetError::Numerics(format!(
                    "plateau not reached: window variation of entry ({a},{b}) is \
                     {:.3e} against scale {scale:.3e}; increase t_relax or the mode count",
                    err[a][b]
                )));
            }
        }
    }
    Ok(CovarianceMatrix {
        c: mean,
        error: err,
    })
}

/// Steady heat current through the spring, `(λ/2)⟨x ẏ − ẋ y⟩`, from the
/// plateau-averaged covariance.
pub fn steady_heat_current(model: &FiniteBathModel, t_relax: f64) -> Result<f64> {
    let cov = steady_system_covariance(model, t_relax)?;
    Ok(0.5
        * model.pair.lambda
        * (cov.entry(0, 3) / model.pair.m2 - cov.entry(1, 2) / model.pair.m1))
}

/// Time-averaged three-term energy bookkeeping of the first oscillator.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBalance {
    /// Spring power `λ⟨ẋ y⟩` flowing in through the coupling.
    pub spring_power: f64,
    /// Net bath power `⟨ẋ F_bath⟩` (Langevin work minus dissipation).
    pub bath_power: f64,
    /// Measured drift `d⟨H₁⟩/dt` across the window (least-squares slope).
    pub energy_drift: f64,
}

/// Evaluates the steady-state energy balance of oscillator 1:
/// `spring_power + bath_power − energy_drift = 0` holds identically for the
/// exact flow, and the plateau drift itself tends to zero, so both the sum
/// and the drift probe the discretization quality.
pub fn steady_energy_balance(model: &FiniteBathModel, t_relax: f64) -> Result<EnergyBalance> {
    let times = plateau_times(model, t_relax)?;
    let d = model.decomposition()?;
    let n = model.coords();
    let n1 = model.bath_omegas[0].len();
    // bath force on x: F = Σ_j k_j c_j q_j − (Σ_j k_j c_j²) x
    let mut force = DVector::zeros(n);
    force[0] = -model.bath_weights[0].iter().sum::<f64>();
    for (j, (&w, &weight)) in model.bath_omegas[0]
        .iter()
        .zip(&model.bath_weights[0])
        .enumerate()
    {
        force[2 + j] = w * weight.sqrt();
        debug_assert!(2 + j < 2 + n1);
    }
    let m1 = model.pair.m1;
    let k1s = model.pair.k1_shifted();
    let lambda = model.pair.lambda;

    let mut spring = 0.0;
    let mut bath = 0.0;
    let mut h_samples = Vec::with_capacity(times.len());
    for &t in &times {
        let row_x = d.unit_row(0, false, t);
        let row_px = d.unit_row(0, true, t);
        let row_y = d.unit_row(1, false, t);
        let row_f = d.observable_row(&force, false, t);
        spring += lambda * d.covariance(&row_px, &row_y) / m1;
        bath += d.covariance(&row_px, &row_f) / m1;
        let h1 = 0.5 * d.covariance(&row_px, &row_px) / m1
            + 0.5 * k1s * d.covariance(&row_x, &row_x);
        h_samples.push((t, h1));
    }
    let samples = times.len() as f64;
    spring /= samples;
    bath /= samples;
    let t_mean = h_samples.iter().map(|(t, _)| t).sum::<f64>() / samples;
    let h_mean = h_samples.iter().map(|(_, h)| h).sum::<f64>() / samples;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(t, h) in &h_samples {
        num += (t - t_mean) * (h - h_mean);
        den += (t - t_mean) * (t - t_mean);
    }
    Ok(EnergyBalance {
        spring_power: spring,
        bath_power: bath,
        energy_drift: num / den,
    })
}
