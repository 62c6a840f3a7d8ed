use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{expm, sqrtm_real};
use crate::error::{Error, Result};
use crate::linalg::{real_schur, solve, Matrix, Tolerances};
use crate::membership::{analyze_spectrum, negative_split, SpectralAnalysis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogKind {
    Principal,
    PairedNegativeSemisimple,
}

/// A real logarithm together with the relative residual
/// `||expm(log_matrix) - A||_F / ||A||_F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogResult {
    pub log_matrix: Matrix,
    pub kind: LogKind,
    pub roundtrip_residual: f64,
}

const QUADRATURE_POINTS: usize = 8;
const MAX_SQUARE_ROOTS: usize = 64;

/// Gauss-Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // three-term recurrence for P_m and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 + x), 0.5 * w));
    }
    out
}

/// `log(I + E) = ∫_0^1 E (I + sE)^{-1} ds` by Gauss-Legendre quadrature, which
/// equals the diagonal Padé approximant of the same degree.
fn log1p_pade(e: &Matrix) -> Result<Matrix> {
    let n = e.rows();
    let mut acc = Matrix::zeros(n, n);
    for (x, w) in gauss_legendre(QUADRATURE_POINTS) {
        let denom = &Matrix::identity(n) + &e.scale(x);
        acc = &acc + &solve(&denom, e)?.scale(w);
    }
    Ok(acc)
}

fn relative_residual(log: &Matrix, a: &Matrix) -> Result<f64> {
    let back = expm(log)?;
    Ok(back.distance(a) / a.frobenius().max(f64::MIN_POSITIVE))
}

/// Principal logarithm of a matrix with no eigenvalue on `(-inf, 0]`, by
/// inverse scaling and squaring on the real Schur form.
pub fn logm_principal(a: &Matrix, tol: &Tolerances) -> Result<LogResult> {
    let spectrum = analyze_spectrum(a, tol)?;
    principal_with_spectrum(a, &spectrum, tol)
}

fn principal_with_spectrum(a: &Matrix, spectrum: &SpectralAnalysis, tol: &Tolerances) -> Result<LogResult> {
    if let Some(w) = spectrum.in_k(tol).witness {
        return Err(Error::NotInK { eigenvalue: w.eigenvalue });
    }
    let log_matrix = principal_log_unchecked(a, tol)?;
    let roundtrip_residual = relative_residual(&log_matrix, a)?;
    Ok(LogResult { log_matrix, kind: LogKind::Principal, roundtrip_residual })
}

pub(crate) fn principal_log_unchecked(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let n = a.ensure_square()?;
    if n == 0 {
        return Ok(a.clone());
    }
    let schur = real_schur(a, tol)?;
    let mut t = schur.t.clone();
    let mut roots = 0;
    while t.shifted(1.0).norm_one() >= 0.25 {
        if roots == MAX_SQUARE_ROOTS {
            return Err(Error::ConvergenceFailure { sweeps: roots });
        }
        t = sqrtm_real(&t, tol)?;
        roots += 1;
    }
    let log_t = log1p_pade(&t.shifted(1.0))?.scale(2f64.powi(roots as i32));
    Ok(&(&schur.q * &log_t) * &schur.q.transpose())
}

/// A real logarithm of a matrix in `K*` whose negative eigenvalues are
/// semisimple. Each negative eigenvalue `μ` of even multiplicity `2k` is
/// given the logarithm `ln|μ| I + π J` on `k` invariant planes, with
/// `J = [[0, 1], [-1, 0]]`; the rest receives the principal logarithm.
pub fn real_log_paired(a: &Matrix, tol: &Tolerances) -> Result<LogResult> {
    let spectrum = analyze_spectrum(a, tol)?;
    if spectrum.in_k(tol).in_set {
        return principal_with_spectrum(a, &spectrum, tol);
    }
    if let Some(w) = spectrum.in_k_star(tol)?.witness {
        return Err(Error::NotInKStar { reason: w.reason });
    }
    let split = negative_split(a, &spectrum, tol)?;
    let n = a.rows();
    let inner = &(&split.x_inv * a) * &split.x;
    let mut log_inner = Matrix::zeros(n, n);
    let mut offset = 0;
    for &(mu, m) in &split.blocks {
        let pair = Matrix::from_rows(&[[mu.abs().ln(), PI], [-PI, mu.abs().ln()]]);
        for p in 0..m / 2 {
            log_inner.set_submatrix(offset + 2 * p, offset + 2 * p, &pair);
        }
        offset += m;
    }
    if split.rest > 0 {
        let b = inner.submatrix(offset, offset, split.rest, split.rest);
        log_inner.set_submatrix(offset, offset, &principal_log_unchecked(&b, tol)?);
    }
    let log_matrix = crate::membership::conjugate_back(&split, &log_inner);
    let roundtrip_residual = relative_residual(&log_matrix, a)?;
    Ok(LogResult { log_matrix, kind: LogKind::PairedNegativeSemisimple, roundtrip_residual })
}
