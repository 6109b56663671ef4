//! Hermitian eigendecomposition via the cyclic complex Jacobi method.
//!
//! Dimensions here never exceed a few hundred, where Jacobi is simple,
//! dependency-free and accurate to machine precision.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::hilbert::Operator;
use crate::{Result, C64};

const HERMITICITY_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 60;

/// Eigendecomposition `H = V diag(w) V^dagger` of a Hermitian operator.
/// Returns the real eigenvalues and the unitary of eigenvectors (columns).
pub fn eigh(h: &Operator) -> Result<(Vec<f64>, Operator)> {
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev: defect });
    }
    let n = h.dim();
    let mut a = h.clone();
    // Symmetrize exactly so roundoff in the input cannot accumulate.
    for i in 0..n {
        for j in (i + 1)..n {
            let m = (a.get(i, j) + a.get(j, i).conj()) * C64::new(0.5, 0.0);
            a.set(i, j, m);
            a.set(j, i, m.conj());
        }
        let d = a.get(i, i);
        a.set(i, i, C64::new(d.re, 0.0));
    }
    let mut v = Operator::identity(n);

    let scale: f64 = a.max_abs().max(1.0);
    let stop = 1e-16 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= stop {
                    continue;
                }
                let phase = apq / C64::new(r, 0.0);
                let alpha = a.get(p, p).re;
                let beta = a.get(q, q).re;
                // Zero A'[p][q]: tan(2 theta) = 2 r / (alpha - beta).
                let t = if alpha == beta {
                    1.0
                } else {
                    let tau = (alpha - beta) / (2.0 * r);
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                rotate(&mut a, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
    }

    let w: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    Ok((w, v))
}

/// A <- R^dagger A R with R[pp] = c, R[pq] = -s e^{i phi}, R[qp] = s e^{-i phi},
/// R[qq] = c.
fn rotate(a: &mut Operator, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let n = a.dim();
    let cc = C64::new(c, 0.0);
    let ss = C64::new(s, 0.0);
    // Column update: B = A R.
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, cc * aip + ss * phase.conj() * aiq);
        a.set(i, q, -ss * phase * aip + cc * aiq);
    }
    // Row update: A' = R^dagger B.
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, cc * apj + ss * phase * aqj);
        a.set(q, j, -ss * phase.conj() * apj + cc * aqj);
    }
    // Clean the zeroed pair and keep the diagonal real.
    let dpp = a.get(p, p);
    let dqq = a.get(q, q);
    a.set(p, p, C64::new(dpp.re, 0.0));
    a.set(q, q, C64::new(dqq.re, 0.0));
    let m = (a.get(p, q) + a.get(q, p).conj()) * C64::new(0.5, 0.0);
    a.set(p, q, m);
    a.set(q, p, m.conj());
}

/// V <- V R (accumulates eigenvectors as columns).
fn rotate_columns(v: &mut Operator, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let n = v.dim();
    let cc = C64::new(c, 0.0);
    let ss = C64::new(s, 0.0);
    for i in 0..n {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, cc * vip + ss * phase.conj() * viq);
        v.set(i, q, -ss * phase * vip + cc * viq);
    }
}

/// `psi_out = V f(w) V^dagger psi` for a scalar function of the eigenvalues,
/// given the decomposition from [`eigh`].
pub fn apply_spectral_function(
    w: &[f64],
    v: &Operator,
    f: impl Fn(f64) -> C64,
    psi: &[C64],
) -> Vec<C64> {
    let n = v.dim();
    // coeffs = V^dagger psi
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            acc += v.get(i, k).conj() * psi[i];
        }
        coeffs[k] = acc * f(w[k]);
    }
    let mut out = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n {
            acc += v.get(i, k) * coeffs[k];
        }
        out[i] = acc;
    }
    out
}
