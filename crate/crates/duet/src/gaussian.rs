//! Gaussian-state information measures over 4×4 covariance matrices.
//!
//! All quantities derive from the covariance matrix of the canonical basis
//! `(x, p_x, y, p_y)` with `ħ = 1`: Williamson normal form, PPT symplectic
//! eigenvalue and logarithmic negativity, the Duan–Simon separability
//! margin, the optimal EPR-like quadrature pair, and von Neumann entropies.
//! The symplectic eigenproblem `−iσC v = ηv` is non-Hermitian and is solved
//! with the in-crate complex eigensolver.

use crate::covariance::CovarianceMatrix;
use crate::{smalleig, DuetError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// The symplectic form of two canonical degrees of freedom.
pub struct SymplecticForm;

impl SymplecticForm {
    /// `σ` over `(x, p_x, y, p_y)`: `[x_a, x_b] = i σ_ab`.
    pub const SIGMA: [[f64; 4]; 4] = [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ];
}

/// Williamson normal form of a positive-definite covariance matrix.
#[derive(Debug, Clone)]
pub struct SymplecticResult {
    /// Symplectic eigenvalues in ascending order.
    pub eigenvalues: [f64; 2],
    /// Symplectic transform rows `(Q₁, P₁, Q₂, P₂)`: the normal-mode
    /// quadratures expressed as coefficient vectors over the canonical
    /// basis, satisfying `S σ Sᵀ = σ` and `S C Sᵀ = diag(η₁, η₁, η₂, η₂)`.
    pub transform: [[f64; 4]; 4],
}

/// Optimal EPR-like quadrature pair extracted from the partial transpose.
#[derive(Debug, Clone)]
pub struct EprPair {
    /// Coefficients of the collective quadrature `Q` over `(x, p_x, y, p_y)`.
    pub q_coefficients: [f64; 4],
    /// Coefficients of the conjugate collective quadrature `P`.
    pub p_coefficients: [f64; 4],
    /// Uncertainty product `ΔQ·ΔP` evaluated on the physical state.
    pub uncertainty: f64,
}

/// Minimum eigenvalue of the Hermitian matrix `re + i·im`, computed through
/// the real symmetric 8×8 embedding `[[re, −im], [im, re]]`.
pub(crate) fn hermitian_min_eigenvalue(re: &[[f64; 4]; 4], im: &[[f64; 4]; 4]) -> f64 {
    let mut m = nalgebra::SMatrix::<f64, 8, 8>::zeros();
    for a in 0..4 {
        for b in 0..4 {
            m[(a, b)] = re[a][b];
            m[(a + 4, b + 4)] = re[a][b];
            m[(a, b + 4)] = -im[a][b];
            m[(a + 4, b)] = im[a][b];
        }
    }
    let sym = 0.5 * (m + m.transpose());
    sym.symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |acc, &v| acc.min(v))
}

fn mat4_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

fn mat4_transpose(a: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = a[c][r];
        }
    }
    out
}

fn quad_form(v: &[f64; 4], m: &[[f64; 4]; 4], w: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            acc += v[a] * m[a][b] * w[b];
        }
    }
    acc
}

fn det2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn mul2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Partial transposition of the second oscillator: `Γ C Γ` with
/// `Γ = diag(1, 1, 1, −1)`.
fn gamma_reflect(c: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = *c;
    for a in 0..3 {
        out[a][3] = -out[a][3];
        out[3][a] = -out[3][a];
    }
    out
}

/// `v† σ w` for complex coefficient vectors.
fn sigma_bilinear(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..4 {
        for b in 0..4 {
            if SymplecticForm::SIGMA[a][b] != 0.0 {
                acc += v[a].conj() * SymplecticForm::SIGMA[a][b] * w[b];
            }
        }
    }
    acc
}

/// 1-norm condition number of the eigenvector basis (columns), with ∞ for a
/// numerically singular basis.
fn basis_condition(vectors: &[Vec<Complex64>]) -> f64 {
    let n = vectors.len();
    let mut v = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (col, vec_col) in vectors.iter().enumerate() {
        for (row, &z) in vec_col.iter().enumerate() {
            v[row][col] = z;
        }
    }
    let one_norm = |m: &Vec<Vec<Complex64>>| -> f64 {
        (0..n)
            .map(|c| (0..n).map(|r| m[r][c].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let norm_v = one_norm(&v);
    // Gauss–Jordan inverse with partial pivoting
    let mut aug = v.clone();
    let mut inv = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (k, row) in inv.iter_mut().enumerate() {
        row[k] = Complex64::new(1.0, 0.0);
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| aug[a][col].norm().total_cmp(&aug[b][col].norm()))
            .unwrap();
        if aug[pivot_row][col].norm() < 1e-300 {
            return f64::INFINITY;
        }
        aug.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = aug[col][col];
        for c in 0..n {
            aug[col][c] /= pivot;
            inv[col][c] /= pivot;
        }
        for r in 0..n {
            if r != col {
                let factor = aug[r][col];
                if factor.norm() != 0.0 {
                    for c in 0..n {
                        let a = aug[col][c];
                        let i = inv[col][c];
                        aug[r][c] -= factor * a;
                        inv[r][c] -= factor * i;
                    }
                }
            }
        }
    }
    norm_v * one_norm(&inv)
}

/// Normalizes one symplectic eigenvector into transform rows `(Q, P)` with
/// `Qᵀ σ P = 1`, a deterministic phase that maximizes the position weight
/// `|Q_x| + |Q_y|`, and a canonical overall sign.
fn mode_rows(v: &[Complex64]) -> Result<([f64; 4], [f64; 4])> {
    let mut q = [0.0; 4];
    let mut p = [0.0; 4];
    for k in 0..4 {
        q[k] = v[k].re;
        p[k] = v[k].im;
    }
    let norm = quad_form(&q, &SymplecticForm::SIGMA, &p);
    if !(norm.is_finite() && norm > 1e-300) {
        return Err(DuetError::Numerics(
            "symplectic normalization Qᵀ σ P = 1 degenerated while diagonalizing".into(),
        ));
    }
    let scale = 1.0 / norm.sqrt();
    for k in 0..4 {
        q[k] *= scale;
        p[k] *= scale;
    }

    // Candidate phases: stationary points and kinks of
    // φ ↦ |Q_x cos φ − P_x sin φ| + |Q_y cos φ − P_y sin φ|.
    let r0 = (q[0] * q[0] + p[0] * p[0]).sqrt();
    let r2 = (q[2] * q[2] + p[2] * p[2]).sqrt();
    let psi0 = p[0].atan2(q[0]);
    let psi2 = p[2].atan2(q[2]);
    let mut candidates = vec![0.0_f64];
    for (s0, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let z = s0 * r0 * Complex64::new(psi0.cos(), psi0.sin())
            + s2 * r2 * Complex64::new(psi2.cos(), psi2.sin());
        if z.norm() > 0.0 {
            candidates.push(-z.arg());
            candidates.push(-z.arg() + PI);
        }
    }
    for psi in [psi0, psi2] {
        for k in 0..4 {
            candidates.push(-psi + 0.5 * PI * k as f64);
        }
    }
    let objective = |phi: f64| -> f64 {
        let (s, c) = phi.sin_cos();
        (q[0] * c - p[0] * s).abs() + (q[2] * c - p[2] * s).abs()
    };
    let mut best_phi = 0.0;
    let mut best = -1.0;
    for &phi in &candidates {
        let obj = objective(phi);
        if obj > best + 1e-15 {
            best = obj;
            best_phi = phi;
        }
    }
    let (s, c) = best_phi.sin_cos();
    let mut qn = [0.0; 4];
    let mut pn = [0.0; 4];
    for k in 0..4 {
        qn[k] = q[k] * c - p[k] * s;
        pn[k] = p[k] * c + q[k] * s;
    }
    // canonical sign: first significant entry of (Q, P) made positive
    let max_abs = qn
        .iter()
        .chain(pn.iter())
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
    for &entry in qn.iter().chain(pn.iter()) {
        if entry.abs() > 1e-9 * max_abs {
            if entry < 0.0 {
                for k in 0..4 {
                    qn[k] = -qn[k];
                    pn[k] = -pn[k];
                }
            }
            break;
        }
    }
    Ok((qn, pn))
}

fn williamson_matrix(c: &[[f64; 4]; 4]) -> Result<SymplecticResult> {
    let mut scale = 0.0_f64;
    for row in c {
        for &v in row {
            if !v.is_finite() {
                return Err(DuetError::InvalidParameter(
                    "covariance entries must be finite".into(),
                ));
            }
            scale = scale.max(v.abs());
        }
    }
    let min_eig = hermitian_min_eigenvalue(c, &[[0.0; 4]; 4]);
    if min_eig <= 0.0 {
        return Err(DuetError::InvalidParameter(format!(
            "covariance matrix must be positive definite (minimum eigenvalue {min_eig:.3e})"
        )));
    }

    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    for a in 0..4 {
        for b in 0..4 {
            let acc: f64 = (0..4).map(|k| SymplecticForm::SIGMA[a][k] * c[k][b]).sum();
            m[(a, b)] = Complex64::new(0.0, -acc);
        }
    }
    let eig = smalleig::eigen(&m)?;

    let cond = basis_condition(&eig.vectors);
    if cond > 1e8 {
        let mut gap = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                gap = gap.min((eig.values[i] - eig.values[j]).norm());
            }
        }
        return Err(DuetError::Numerics(format!(
            "symplectic eigenvector basis is near-defective: condition number {cond:.3e} \
             exceeds 1e8 (smallest eigenvalue gap {gap:.3e})"
        )));
    }

    let mut modes: Vec<(f64, Vec<Complex64>)> = Vec::new();
    for (lambda, vector) in eig.values.iter().zip(&eig.vectors) {
        if lambda.im.abs() > 1e-8 * lambda.norm().max(1.0) {
            return Err(DuetError::Numerics(format!(
                "symplectic eigenvalue {lambda} has a non-real part beyond tolerance"
            )));
        }
        if lambda.re > 0.0 {
            modes.push((lambda.re, vector.clone()));
        }
    }
    if modes.len() != 2 {
        return Err(DuetError::Numerics(format!(
            "expected two positive symplectic eigenvalues, found {}",
            modes.len()
        )));
    }
    modes.sort_by(|a, b| a.0.total_cmp(&b.0));

    // σ-orthogonalize the second eigenvector against the first; this is a
    // no-op away from degeneracy and repairs the arbitrary QR mixing of a
    // degenerate pair
    let s00 = sigma_bilinear(&modes[0].1, &modes[0].1);
    let s01 = sigma_bilinear(&modes[0].1, &modes[1].1);
    if s00.norm() > 0.0 {
        let coef = s01 / s00;
        let (head, tail) = modes.split_at_mut(1);
        for k in 0..4 {
            let correction = coef * head[0].1[k];
            tail[0].1[k] -= correction;
        }
    }

    let (q1, p1) = mode_rows(&modes[0].1)?;
    let (q2, p2) = mode_rows(&modes[1].1)?;
    let transform = [q1, p1, q2, p2];

    // defensive check: the assembled transform must be symplectic
    let sig = mat4_mul(
        &mat4_mul(&transform, &SymplecticForm::SIGMA),
        &mat4_transpose(&transform),
    );
    let mut worst = 0.0_f64;
    for a in 0..4 {
        for b in 0..4 {
            worst = worst.max((sig[a][b] - SymplecticForm::SIGMA[a][b]).abs());
        }
    }
    if worst > 1e-8 {
        return Err(DuetError::Numerics(format!(
            "assembled normal-mode transform violates S σ Sᵀ = σ by {worst:.3e}"
        )));
    }

    Ok(SymplecticResult {
        eigenvalues: [modes[0].0, modes[1].0],
        transform,
    })
}

/// Williamson normal form: symplectic eigenvalues (ascending) and the
/// normal-mode transform of a positive-definite covariance matrix.
///
/// Fails on non-positive-definite input, on a near-defective eigenvector
/// basis (condition number above 10⁸, reported together with the smallest
/// eigenvalue gap), or if the QR iteration stalls.
pub fn williamson(cov: &CovarianceMatrix) -> Result<SymplecticResult> {
    williamson_matrix(&cov.c)
}

/// Minimum symplectic eigenvalue of the partial transpose `Γ C Γ`.
///
/// Values below `1/2` certify entanglement of the Gaussian state.
pub fn ppt_min_symplectic_eigenvalue(cov: &CovarianceMatrix) -> Result<f64> {
    let reflected = gamma_reflect(&cov.c);
    Ok(williamson_matrix(&reflected)?.eigenvalues[0])
}

/// Logarithmic negativity `E = max(0, ln 1/(2η̃min))` (natural logarithm).
pub fn logarithmic_negativity(cov: &CovarianceMatrix) -> Result<f64> {
    let eta = ppt_min_symplectic_eigenvalue(cov)?;
    if eta < 0.5 {
        Ok((1.0 / (2.0 * eta)).ln())
    } else {
        Ok(0.0)
    }
}

/// Duan–Simon separability margin.
///
/// Returns `(separable, margin)` with
/// `margin = det A · det B + (|det C| − 1/4)² − I₄ − (det A + det B)/4`,
/// where `I₄ = tr(A J C J B J Cᵀ J)` over the 2×2 blocks of the covariance
/// matrix and `J` is the single-mode symplectic form. A non-negative margin
/// certifies that the partial transpose is physical (state separable for
/// two-mode Gaussian states); the vacuum sits exactly on the boundary.
pub fn duan_simon_separable(cov: &CovarianceMatrix) -> (bool, f64) {
    let a = cov.block_first();
    let b = cov.block_second();
    let cc = cov.block_cross();
    let j = [[0.0, 1.0], [-1.0, 0.0]];
    let det_a = det2(&a);
    let det_b = det2(&b);
    let det_c = det2(&cc);
    let ct = [[cc[0][0], cc[1][0]], [cc[0][1], cc[1][1]]];
    let m = mul2(
        &mul2(&mul2(&a, &j), &mul2(&cc, &j)),
        &mul2(&mul2(&b, &j), &mul2(&ct, &j)),
    );
    let i4 = m[0][0] + m[1][1];
    let margin = det_a * det_b + (det_c.abs() - 0.25) * (det_c.abs() - 0.25)
        - i4
        - 0.25 * (det_a + det_b);
    (margin >= 0.0, margin)
}

/// Minimum eigenvalue of the Hermitian physicality witness of the partial
/// transpose, `Γ C Γ + (i/2) σ`; negative values certify entanglement.
pub fn ppt_hermitian_min_eigenvalue(cov: &CovarianceMatrix) -> f64 {
    let reflected = gamma_reflect(&cov.c);
    let half_sigma = SymplecticForm::SIGMA.map(|row| row.map(|v| 0.5 * v));
    hermitian_min_eigenvalue(&reflected, &half_sigma)
}

/// Optimal EPR-like quadrature pair.
///
/// The collective quadratures are the minimum-eigenvalue normal mode of the
/// partially transposed state mapped back through `Γ`; their uncertainty
/// product on the physical state equals the PPT symplectic eigenvalue.
pub fn epr_pair(cov: &CovarianceMatrix) -> Result<EprPair> {
    let reflected = gamma_reflect(&cov.c);
    let w = williamson_matrix(&reflected)?;
    let mut q = w.transform[0];
    let mut p = w.transform[1];
    q[3] = -q[3];
    p[3] = -p[3];
    let var_q = quad_form(&q, &cov.c, &q);
    let var_p = quad_form(&p, &cov.c, &p);
    Ok(EprPair {
        q_coefficients: q,
        p_coefficients: p,
        uncertainty: (var_q * var_p).sqrt(),
    })
}

/// Binary-entropy-like kernel `f(x) = ((x+1)/2) ln((x+1)/2) −
/// ((x−1)/2) ln((x−1)/2)` entering Gaussian von Neumann entropies at
/// `x = 2ν`.
///
/// Switches to the series `f(1+ε) ≈ (ε/2)(1 − ln(ε/2))` for
/// `x ∈ [1, 1 + 10⁻⁸)` so the pure-state limit is continuous and free of
/// `0 · ln 0` artifacts; arguments below 1 (roundoff from a clamped
/// eigenvalue) evaluate to 0.
fn entropy_kernel(x: f64) -> f64 {
    let eps = x - 1.0;
    if eps < 1e-8 {
        if eps <= 0.0 {
            0.0
        } else {
            0.5 * eps * (1.0 - (0.5 * eps).ln())
        }
    } else {
        let p = 0.5 * (x + 1.0);
        let q = 0.5 * (x - 1.0);
        p * p.ln() - q * q.ln()
    }
}

/// Von Neumann entropies `(S_total, S_1, S_2, S_mutual)` in nats.
///
/// `S_total` uses the global symplectic eigenvalues, the marginal entropies
/// use the local purities `ν_i = √det(block_i)`, and the mutual information
/// is `S_1 + S_2 − S_total`. Symplectic eigenvalues below the vacuum floor
/// `1/2` (beyond a `10⁻⁶` relative tolerance) are rejected as unphysical.
pub fn entropies(cov: &CovarianceMatrix) -> Result<(f64, f64, f64, f64)> {
    let floor = 0.5 * (1.0 - 1e-6);
    let w = williamson(cov)?;
    let mut total = 0.0;
    for &nu in &w.eigenvalues {
        if nu < floor {
            return Err(DuetError::Physicality(format!(
                "symplectic eigenvalue {nu:.12} violates the vacuum uncertainty floor 1/2"
            )));
        }
        total += entropy_kernel(2.0 * nu);
    }
    let mut locals = [0.0; 2];
    for (slot, block) in locals
        .iter_mut()
        .zip([cov.block_first(), cov.block_second()])
    {
        let det = det2(&block);
        let nu = det.max(0.0).sqrt();
        if nu < floor {
            return Err(DuetError::Physicality(format!(
                "local purity ν = {nu:.12} violates the vacuum uncertainty floor 1/2"
            )));
        }
        *slot = entropy_kernel(2.0 * nu);
    }
    let [s1, s2] = locals;
    Ok((total, s1, s2, s1 + s2 - total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cm(c: [[f64; 4]; 4]) -> CovarianceMatrix {
        CovarianceMatrix::from_entries(c).unwrap()
    }

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol,
            "got {got:.17e}, want {want:.17e} (tol {tol:.1e})"
        );
    }

    /// `exp(G)` by scaling and squaring with a Taylor core.
    fn expm4(g: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
        let norm = g
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
        let squarings = if norm > 0.25 {
            (norm / 0.25).log2().ceil() as u32
        } else {
            0
        };
        let scale = 0.5_f64.powi(squarings as i32);
        let a = g.map(|row| row.map(|v| v * scale));
        let mut sum = [[0.0; 4]; 4];
        let mut term = [[0.0; 4]; 4];
        for k in 0..4 {
            sum[k][k] = 1.0;
            term[k][k] = 1.0;
        }
        for j in 1..=16 {
            term = mat4_mul(&term, &a);
            let inv = 1.0 / j as f64;
            for row in &mut term {
                for v in row.iter_mut() {
                    *v *= inv;
                }
            }
            for (sr, tr) in sum.iter_mut().zip(&term) {
                for (sv, tv) in sr.iter_mut().zip(tr) {
                    *sv += tv;
                }
            }
        }
        for _ in 0..squarings {
            sum = mat4_mul(&sum, &sum);
        }
        sum
    }

    /// Random symplectic `exp(σR)` with symmetric `R`.
    fn random_symplectic(rng: &mut ChaCha8Rng) -> [[f64; 4]; 4] {
        let mut r = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in a..4 {
                let v = rng.gen_range(-0.6..0.6);
                r[a][b] = v;
                r[b][a] = v;
            }
        }
        expm4(&mat4_mul(&SymplecticForm::SIGMA, &r))
    }

    /// Random local (block-diagonal) symplectic.
    fn random_local_symplectic(rng: &mut ChaCha8Rng) -> [[f64; 4]; 4] {
        let mut r = [[0.0; 4]; 4];
        for base in [0usize, 2] {
            for a in base..base + 2 {
                for b in a..base + 2 {
                    let v = rng.gen_range(-0.6..0.6);
                    r[a][b] = v;
                    r[b][a] = v;
                }
            }
        }
        expm4(&mat4_mul(&SymplecticForm::SIGMA, &r))
    }

    fn congruence(s: &[[f64; 4]; 4], c: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
        mat4_mul(&mat4_mul(s, c), &mat4_transpose(s))
    }

    fn random_state(rng: &mut ChaCha8Rng, nu1: f64, nu2: f64) -> [[f64; 4]; 4] {
        let s = random_symplectic(rng);
        let d = [
            [nu1, 0.0, 0.0, 0.0],
            [0.0, nu1, 0.0, 0.0],
            [0.0, 0.0, nu2, 0.0],
            [0.0, 0.0, 0.0, nu2],
        ];
        congruence(&s, &d)
    }

    /// Two-mode squeezed vacuum covariance with squeezing parameter `r`.
    fn two_mode_squeezed(r: f64) -> [[f64; 4]; 4] {
        let ch = 0.5 * (2.0 * r).cosh();
        let sh = 0.5 * (2.0 * r).sinh();
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]
    }

    /// Stationary covariance of the resonant–detuned benchmark pair at
    /// equal zero temperature (vanishing mixed entries dropped; they are
    /// below 10⁻¹³).
    fn benchmark_cold() -> [[f64; 4]; 4] {
        let c_xx = 0.46616575283030137;
        let c_xy = 0.01542448083685708;
        let c_pxpx = 0.6289163300860336;
        let c_pxpy = -0.019124214536350537;
        let c_yy = 0.4108946964982301;
        let c_pypy = 0.6974447655079564;
        [
            [c_xx, 0.0, c_xy, 0.0],
            [0.0, c_pxpx, 0.0, c_pxpy],
            [c_xy, 0.0, c_yy, 0.0],
            [0.0, c_pxpy, 0.0, c_pypy],
        ]
    }

    /// Same pair at bath temperatures (0.5, 0.25): the temperature bias
    /// populates the x–p_y / p_x–y entries.
    fn benchmark_biased() -> [[f64; 4]; 4] {
        let c_xx = 0.6050487188593499;
        let c_xy = 0.040048609167912565;
        let c_xpy = 0.01174816892767133;
        let c_pxpx = 0.7586274041228319;
        let c_pxy = -0.011748168927671335;
        let c_pxpy = 0.0039624567582112165;
        let c_yy = 0.43110614793510277;
        let c_pypy = 0.7184988427897911;
        [
            [c_xx, 0.0, c_xy, c_xpy],
            [0.0, c_pxpx, c_pxy, c_pxpy],
            [c_xy, c_pxy, c_yy, 0.0],
            [c_xpy, c_pxpy, 0.0, c_pypy],
        ]
    }

    #[test]
    fn symplectic_form_identities() {
        let sigma = SymplecticForm::SIGMA;
        let sq = mat4_mul(&sigma, &sigma);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(sigma[a][b], -sigma[b][a]);
                assert_eq!(sq[a][b], if a == b { -1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn vacuum_normal_form_is_trivial() {
        let vac = cm([
            [0.5, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.5],
        ]);
        let w = williamson(&vac).unwrap();
        assert_close(w.eigenvalues[0], 0.5, 1e-12);
        assert_close(w.eigenvalues[1], 0.5, 1e-12);
        let diag = congruence(&w.transform, &vac.c);
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { 0.5 } else { 0.0 };
                assert_close(diag[a][b], want, 1e-12);
            }
        }
        // Duan–Simon margin of the vacuum is exactly zero in IEEE arithmetic
        let (separable, margin) = duan_simon_separable(&vac);
        assert!(separable);
        assert_eq!(margin, 0.0);
        assert_eq!(logarithmic_negativity(&vac).unwrap(), 0.0);
        assert!(ppt_hermitian_min_eigenvalue(&vac).abs() < 1e-12);
        let (s_total, s1, s2, s12) = entropies(&vac).unwrap();
        assert!(s_total.abs() < 1e-12 && s1.abs() < 1e-12);
        assert!(s2.abs() < 1e-12 && s12.abs() < 1e-12);
    }

    #[test]
    fn thermal_product_state_recovers_its_occupations() {
        let th = cm([
            [0.8, 0.0, 0.0, 0.0],
            [0.0, 0.8, 0.0, 0.0],
            [0.0, 0.0, 3.0, 0.0],
            [0.0, 0.0, 0.0, 3.0],
        ]);
        let w = williamson(&th).unwrap();
        assert_close(w.eigenvalues[0], 0.8, 1e-12);
        assert_close(w.eigenvalues[1], 3.0, 1e-12);
        // x = 3 evaluates the entropy kernel at 2 ln 2 exactly
        let half = cm([
            [1.5, 0.0, 0.0, 0.0],
            [0.0, 1.5, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.5],
        ]);
        let (s_total, s1, s2, s12) = entropies(&half).unwrap();
        let two_ln_two = 2.0 * 2.0_f64.ln();
        assert_close(s_total, two_ln_two, 1e-12);
        assert_close(s1, two_ln_two, 1e-12);
        assert!(s2.abs() < 1e-12);
        assert!(s12.abs() < 1e-11);
    }

    #[test]
    fn frozen_cold_benchmark_state() {
        let cov = cm(benchmark_cold());
        let w = williamson(&cov).unwrap();
        assert_close(w.eigenvalues[0], 0.5346044806976221, 1e-9);
        assert_close(w.eigenvalues[1], 0.5416305907038961, 1e-9);
        let ppt = ppt_min_symplectic_eigenvalue(&cov).unwrap();
        assert_close(ppt, 0.5208609320837598, 1e-9);
        // PPT eigenvalue above 1/2: no entanglement, zero negativity
        assert_eq!(logarithmic_negativity(&cov).unwrap(), 0.0);
        let (separable, margin) = duan_simon_separable(&cov);
        assert!(separable);
        assert_close(margin, 0.001257523857429943, 1e-10);
        let epr = epr_pair(&cov).unwrap();
        assert_close(epr.uncertainty, 0.5208609320837598, 1e-9);
        let (s_total, s1, s2, s12) = entropies(&cov).unwrap();
        assert_close(s_total, 0.326423694910152, 1e-9);
        assert_close(s1, 0.17427705449649894, 1e-9);
        assert_close(s2, 0.15405002987671135, 1e-9);
        assert_close(s12, 0.0019033894630582915, 1e-9);
    }

    #[test]
    fn frozen_biased_benchmark_state() {
        let cov = cm(benchmark_biased());
        let w = williamson(&cov).unwrap();
        assert_close(w.eigenvalues[0], 0.5498433981663242, 1e-9);
        assert_close(w.eigenvalues[1], 0.6833896879309597, 1e-9);
        let ppt = ppt_min_symplectic_eigenvalue(&cov).unwrap();
        assert_close(ppt, 0.5518627815786011, 1e-9);
        let (separable, margin) = duan_simon_separable(&cov);
        assert!(separable);
        assert_close(margin, 0.011356247709307321, 1e-10);
        let epr = epr_pair(&cov).unwrap();
        assert_close(epr.uncertainty, 0.5518627815786012, 1e-9);
        let (s_total, s1, s2, s12) = entropies(&cov).unwrap();
        assert_close(s_total, 0.7108568485713221, 1e-9);
        assert_close(s1, 0.4992555839316498, 1e-9);
        assert_close(s2, 0.22057045874513675, 1e-9);
        assert_close(s12, 0.008969194105464484, 1e-9);
    }

    #[test]
    fn two_mode_squeezed_closed_forms() {
        for r in [0.1, 0.5, 1.0] {
            let cov = cm(two_mode_squeezed(r));
            // pure state: both global symplectic eigenvalues at 1/2
            let w = williamson(&cov).unwrap();
            assert_close(w.eigenvalues[0], 0.5, 1e-10);
            assert_close(w.eigenvalues[1], 0.5, 1e-10);
            let eta = ppt_min_symplectic_eigenvalue(&cov).unwrap();
            let want_eta = 0.5 * (-2.0 * r).exp();
            assert_close(eta, want_eta, 1e-10 * want_eta.max(1.0));
            assert_close(
                logarithmic_negativity(&cov).unwrap(),
                2.0 * r,
                1e-10,
            );
            let (separable, margin) = duan_simon_separable(&cov);
            assert!(!separable);
            let want_margin = -0.25 * (2.0 * r).sinh().powi(2);
            assert_close(margin, want_margin, 1e-10 * want_margin.abs());
            assert!(ppt_hermitian_min_eigenvalue(&cov) < 0.0);

            let epr = epr_pair(&cov).unwrap();
            assert_close(epr.uncertainty, want_eta, 1e-10);
            // the optimal pair mixes positions with positions and momenta
            // with momenta, with equal weight on both oscillators
            let q = epr.q_coefficients;
            let p = epr.p_coefficients;
            assert!(q[1].abs() < 1e-9 && q[3].abs() < 1e-9);
            assert!(p[0].abs() < 1e-9 && p[2].abs() < 1e-9);
            assert_close(q[0].abs(), q[2].abs(), 1e-9);
            assert_close(p[1].abs(), p[3].abs(), 1e-9);

            let (s_total, s1, s2, s12) = entropies(&cov).unwrap();
            assert!(s_total.abs() < 1e-9);
            let want_s1 = entropy_kernel((2.0 * r).cosh());
            assert_close(s1, want_s1, 1e-9);
            assert_close(s2, want_s1, 1e-9);
            assert_close(s12, 2.0 * want_s1, 1e-8);
        }
    }

    #[test]
    fn random_states_satisfy_the_structural_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..200 {
            let nu1 = rng.gen_range(0.5..3.0);
            let nu2 = rng.gen_range(0.5..3.0);
            let c = random_state(&mut rng, nu1, nu2);
            let cov = cm(c);
            let w = williamson(&cov).unwrap();
            let (want_lo, want_hi) = if nu1 <= nu2 { (nu1, nu2) } else { (nu2, nu1) };
            assert_close(w.eigenvalues[0], want_lo, 1e-9 * want_lo);
            assert_close(w.eigenvalues[1], want_hi, 1e-9 * want_hi);

            // S σ Sᵀ = σ
            let s = w.transform;
            let sig = congruence(&s, &SymplecticForm::SIGMA);
            for a in 0..4 {
                for b in 0..4 {
                    assert_close(sig[a][b], SymplecticForm::SIGMA[a][b], 1e-10);
                }
            }
            // S C Sᵀ diagonal with paired eigenvalues
            let d = congruence(&s, &c);
            for a in 0..4 {
                for b in 0..4 {
                    let want = if a == b {
                        w.eigenvalues[a / 2]
                    } else {
                        0.0
                    };
                    assert_close(d[a][b], want, 1e-9 * want_hi.max(1.0));
                }
            }
            // reconstruction through the closed-form symplectic inverse
            // S⁻¹ = −σ Sᵀ σ
            let s_inv = mat4_mul(
                &mat4_mul(&SymplecticForm::SIGMA, &mat4_transpose(&s)),
                &SymplecticForm::SIGMA,
            )
            .map(|row| row.map(|v| -v));
            let recon = congruence(&s_inv, &d);
            let scale = c
                .iter()
                .flatten()
                .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
            for a in 0..4 {
                for b in 0..4 {
                    assert_close(recon[a][b], c[a][b], 1e-10 * scale);
                }
            }

            // entanglement indicators agree on the verdict
            let eta = ppt_min_symplectic_eigenvalue(&cov).unwrap();
            let (separable, margin) = duan_simon_separable(&cov);
            let hermitian = ppt_hermitian_min_eigenvalue(&cov);
            if (eta - 0.5).abs() > 1e-9 {
                assert_eq!(separable, eta >= 0.5, "margin {margin} vs η̃ {eta}");
                assert_eq!(hermitian < 0.0, eta < 0.5);
            }
            let epr = epr_pair(&cov).unwrap();
            assert_close(epr.uncertainty, eta, 1e-10 * eta.max(1.0));

            let (_, _, _, s12) = entropies(&cov).unwrap();
            assert!(s12 >= -1e-10, "mutual information came out at {s12}");
        }
    }

    #[test]
    fn measures_are_invariant_under_local_symplectics() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for _ in 0..50 {
            let nu1 = rng.gen_range(0.5..2.0);
            let nu2 = rng.gen_range(0.5..2.0);
            let c = random_state(&mut rng, nu1, nu2);
            let l = random_local_symplectic(&mut rng);
            let cl = congruence(&l, &c);
            let cov = cm(c);
            let cov_l = cm(cl);

            let w = williamson(&cov).unwrap();
            let wl = williamson(&cov_l).unwrap();
            for k in 0..2 {
                assert_close(wl.eigenvalues[k], w.eigenvalues[k], 1e-9 * w.eigenvalues[k]);
            }
            let eta = ppt_min_symplectic_eigenvalue(&cov).unwrap();
            let eta_l = ppt_min_symplectic_eigenvalue(&cov_l).unwrap();
            assert_close(eta_l, eta, 1e-9 * eta);
            assert_close(
                logarithmic_negativity(&cov_l).unwrap(),
                logarithmic_negativity(&cov).unwrap(),
                1e-9,
            );
            let (_, margin) = duan_simon_separable(&cov);
            let (_, margin_l) = duan_simon_separable(&cov_l);
            assert_close(margin_l, margin, 1e-9 * margin.abs().max(1.0));
            let e = entropies(&cov).unwrap();
            let el = entropies(&cov_l).unwrap();
            assert_close(el.0, e.0, 1e-9 * e.0.abs().max(1.0));
            assert_close(el.1, e.1, 1e-9);
            assert_close(el.2, e.2, 1e-9);
            assert_close(el.3, e.3, 1e-9);
        }
    }

    #[test]
    fn degenerate_spectrum_is_diagonalized_cleanly() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..20 {
            let c = random_state(&mut rng, 0.9, 0.9);
            let cov = cm(c);
            let w = williamson(&cov).unwrap();
            assert_close(w.eigenvalues[0], 0.9, 1e-9);
            assert_close(w.eigenvalues[1], 0.9, 1e-9);
            let sig = congruence(&w.transform, &SymplecticForm::SIGMA);
            let d = congruence(&w.transform, &c);
            for a in 0..4 {
                for b in 0..4 {
                    assert_close(sig[a][b], SymplecticForm::SIGMA[a][b], 1e-9);
                    let want = if a == b { 0.9 } else { 0.0 };
                    assert_close(d[a][b], want, 1e-9);
                }
            }
        }
    }

    #[test]
    fn near_defective_basis_is_reported_with_the_gap() {
        // positive definite but with condition number 10¹⁷: the symplectic
        // eigenvector basis collapses and must be rejected, naming the gap
        let c = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1e-17, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let err = williamson_matrix(&c).unwrap_err();
        match err {
            DuetError::Numerics(msg) => assert!(msg.contains("gap"), "message: {msg}"),
            other => panic!("expected a numerical error, got {other:?}"),
        }
    }

    #[test]
    fn non_positive_definite_matrices_are_rejected() {
        let c = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        assert!(matches!(
            williamson_matrix(&c),
            Err(DuetError::InvalidParameter(_))
        ));
        // asymmetric input is caught at construction
        let mut bad = benchmark_cold();
        bad[0][2] += 1e-3;
        assert!(CovarianceMatrix::from_entries(bad).is_err());
    }

    #[test]
    fn entropy_kernel_series_branch_matches_the_direct_formula() {
        assert_eq!(entropy_kernel(1.0), 0.0);
        assert_close(entropy_kernel(3.0), 2.0 * 2.0_f64.ln(), 1e-15);
        // series value just inside the branch vs the direct formula at the
        // same argument
        let x = 1.0 + 9e-9;
        let series = entropy_kernel(x);
        let p = 0.5 * (x + 1.0);
        let q = 0.5 * (x - 1.0);
        let direct = p * p.ln() - q * q.ln();
        assert_close(series, direct, 1e-6 * direct);
        // monotone growth across the branch point
        assert!(entropy_kernel(1.0 + 2e-8) > entropy_kernel(1.0 + 0.5e-8));
        assert!(entropy_kernel(1.0 + 0.5e-8) > 0.0);
    }

    #[test]
    fn unphysical_states_fail_the_entropy_floor() {
        let below = cm([
            [0.49, 0.0, 0.0, 0.0],
            [0.0, 0.49, 0.0, 0.0],
            [0.0, 0.0, 0.49, 0.0],
            [0.0, 0.0, 0.0, 0.49],
        ]);
        assert!(matches!(
            entropies(&below),
            Err(DuetError::Physicality(_))
        ));
        // within the 10⁻⁶ tolerance band: clamped to the vacuum
        let v = 0.5 * (1.0 - 1e-7);
        let grazing = cm([
            [v, 0.0, 0.0, 0.0],
            [0.0, v, 0.0, 0.0],
            [0.0, 0.0, v, 0.0],
            [0.0, 0.0, 0.0, v],
        ]);
        let (s_total, ..) = entropies(&grazing).unwrap();
        assert!(s_total.abs() < 1e-9);
    }
}
