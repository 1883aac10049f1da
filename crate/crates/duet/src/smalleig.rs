//! Dense complex eigensolver for small matrices.
//!
//! The symplectic diagonalization solves the non-Hermitian 4×4 eigenproblem
//! `−iσC v = ηv`; this module provides the required general complex
//! eigensolver so the crate carries no assumption about external LAPACK-like
//! facilities. The algorithm is the classical chain: unitary Householder
//! reduction to upper Hessenberg form, explicitly shifted QR iteration with
//! Wilkinson shifts and Givens rotations down to upper triangular (Schur)
//! form, then triangular back-substitution for right eigenvectors. Intended
//! for tiny sizes (n ≲ 10); the costs are cubic with small constants.

use crate::{DuetError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues and unit-norm right eigenvectors of a complex matrix.
#[derive(Debug, Clone)]
pub struct ComplexEigen {
    /// Eigenvalues in the order produced by the Schur form.
    pub values: Vec<Complex64>,
    /// `vectors[k]` is the right eigenvector for `values[k]`, normalized to
    /// unit Euclidean norm.
    pub vectors: Vec<Vec<Complex64>>,
}

/// Complex Givens pair `(c, s)` such that `[[c̄, s̄], [−s, c]]` maps
/// `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (Complex64, Complex64) {
    let r = (f.norm_sqr() + g.norm_sqr()).sqrt();
    if r == 0.0 {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (f / r, g / r)
    }
}

/// Householder reduction to upper Hessenberg form; returns the accumulated
/// unitary `U` with `M = U H U†` (H overwrites the input).
fn hessenberg(h: &mut DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = h.nrows();
    let mut u = DMatrix::<Complex64>::identity(n, n);
    for col in 0..n.saturating_sub(2) {
        // build the reflector annihilating h[col+2.., col]
        let mut norm_sqr = 0.0;
        for row in col + 1..n {
            norm_sqr += h[(row, col)].norm_sqr();
        }
        let alpha = h[(col + 1, col)];
        let norm = norm_sqr.sqrt();
        if norm == 0.0 {
            continue;
        }
        // phase choice avoiding cancellation: v = x + e^{iφ}‖x‖ e₁
        let phase = if alpha.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            alpha / alpha.norm()
        };
        let mut v: Vec<Complex64> = (col + 1..n).map(|row| h[(row, col)]).collect();
        v[0] += phase * norm;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;
        // H ← (I − βvv†) H: rows col+1..n
        for c in col..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (k, vv) in v.iter().enumerate() {
                dot += vv.conj() * h[(col + 1 + k, c)];
            }
            let dot = dot * beta;
            for (k, vv) in v.iter().enumerate() {
                let val = h[(col + 1 + k, c)] - vv * dot;
                h[(col + 1 + k, c)] = val;
            }
        }
        // H ← H (I − βvv†): columns col+1..n
        for r in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (k, vv) in v.iter().enumerate() {
                dot += h[(r, col + 1 + k)] * *vv;
            }
            let dot = dot * beta;
            for (k, vv) in v.iter().enumerate() {
                let val = h[(r, col + 1 + k)] - dot * vv.conj();
                h[(r, col + 1 + k)] = val;
            }
        }
        // U ← U (I − βvv†)
        for r in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (k, vv) in v.iter().enumerate() {
                dot += u[(r, col + 1 + k)] * *vv;
            }
            let dot = dot * beta;
            for (k, vv) in v.iter().enumerate() {
                let val = u[(r, col + 1 + k)] - dot * vv.conj();
                u[(r, col + 1 + k)] = val;
            }
        }
        // enforce the exact zeros below the subdiagonal
        for row in col + 2..n {
            h[(row, col)] = Complex64::new(0.0, 0.0);
        }
    }
    u
}

/// Wilkinson shift: the eigenvalue of the trailing 2×2 block closer to its
/// bottom-right entry.
fn wilkinson_shift(h: &DMatrix<Complex64>, hi: usize) -> Complex64 {
    let d = h[(hi, hi)];
    if hi == 0 {
        return d;
    }
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Computes eigenvalues and right eigenvectors of a general complex matrix.
///
/// Fails with a numerical error if the QR iteration does not deflate within
/// a generous iteration budget (practically unreachable for the
/// diagonalizable matrices this crate produces).
pub fn eigen(matrix: &DMatrix<Complex64>) -> Result<ComplexEigen> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(DuetError::InvalidParameter(
            "eigensolver requires a square, non-empty matrix".into(),
        ));
    }
    let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !scale.is_finite() {
        return Err(DuetError::InvalidParameter(
            "eigensolver requires finite matrix entries".into(),
        ));
    }
    if scale == 0.0 {
        // the zero matrix: eigenvalue 0, canonical basis vectors
        return Ok(ComplexEigen {
            values: vec![Complex64::new(0.0, 0.0); n],
            vectors: (0..n)
                .map(|k| {
                    let mut v = vec![Complex64::new(0.0, 0.0); n];
                    v[k] = Complex64::new(1.0, 0.0);
                    v
                })
                .collect(),
        });
    }

    let mut t = matrix.clone();
    let mut u = hessenberg(&mut t);

    const EPS: f64 = 1e-15;
    let mut hi = n - 1;
    let mut stall = 0usize;
    let mut total_iters = 0usize;
    let budget = 60 * n;
    while hi > 0 {
        // deflate converged subdiagonals
        let sub = t[(hi, hi - 1)].norm();
        let local = t[(hi - 1, hi - 1)].norm() + t[(hi, hi)].norm();
        if sub <= EPS * local.max(scale * 1e-3) {
            t[(hi, hi - 1)] = Complex64::new(0.0, 0.0);
            hi -= 1;
            stall = 0;
            continue;
        }
        total_iters += 1;
        if total_iters > budget {
            return Err(DuetError::Numerics(
                "QR eigeniteration failed to deflate within its budget".into(),
            ));
        }
        // working block [lo, hi]: walk up while subdiagonals are alive
        let mut lo = hi;
        while lo > 0 {
            let s = t[(lo, lo - 1)].norm();
            let l = t[(lo - 1, lo - 1)].norm() + t[(lo, lo)].norm();
            if s <= EPS * l.max(scale * 1e-3) {
                t[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        stall += 1;
        let mut mu = wilkinson_shift(&t, hi);
        if stall % 12 == 0 {
            // exceptional shift to break rare symmetric stalls
            mu += Complex64::new(0.75, 0.4375) * t[(hi, hi - 1)].norm();
        }
        // explicit shifted QR sweep on [lo, hi]
        for i in lo..=hi {
            t[(i, i)] -= mu;
        }
        let mut rot: Vec<(Complex64, Complex64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s) = givens(t[(i, i)], t[(i + 1, i)]);
            rot.push((c, s));
            for col in i..n {
                let top = t[(i, col)];
                let bot = t[(i + 1, col)];
                t[(i, col)] = c.conj() * top + s.conj() * bot;
                t[(i + 1, col)] = -s * top + c * bot;
            }
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let i = lo + idx;
            for row in 0..=(i + 1).min(hi) {
                let left = t[(row, i)];
                let right = t[(row, i + 1)];
                t[(row, i)] = left * c + right * s;
                t[(row, i + 1)] = -left * s.conj() + right * c.conj();
            }
            for row in 0..n {
                let left = u[(row, i)];
                let right = u[(row, i + 1)];
                u[(row, i)] = left * c + right * s;
                u[(row, i + 1)] = -left * s.conj() + right * c.conj();
            }
        }
        for i in lo..=hi {
            t[(i, i)] += mu;
        }
    }

    // right eigenvectors of the triangular T by back-substitution, then
    // rotate back through the accumulated unitary
    let values: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = values[k];
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut rhs = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                rhs += t[(i, j)] * y[j];
            }
            let mut denom = t[(i, i)] - lambda;
            // clamp repeated-eigenvalue divisors; the result is still a
            // valid vector in the (numerical) eigenspace
            let floor = EPS * scale.max(1e-300);
            if denom.norm() < floor {
                denom = Complex64::new(floor, 0.0);
            }
            y[i] = -rhs / denom;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (row, slot) in v.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, &yc) in y.iter().enumerate().take(k + 1) {
                acc += u[(row, col)] * yc;
            }
            *slot = acc;
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm;
        }
        vectors.push(v);
    }
    Ok(ComplexEigen { values, vectors })
}
