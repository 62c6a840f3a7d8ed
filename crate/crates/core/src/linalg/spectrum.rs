use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::schur::real_schur;
use super::{Matrix, Tolerances};
use crate::error::{Error, Result};

/// Eigenvalues of a real matrix, repeated by algebraic multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    /// Frobenius norm of the matrix the spectrum came from.
    pub source_norm: f64,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>, source_norm: f64) -> Self {
        Self { values, source_norm }
    }

    pub fn from_real(values: &[f64]) -> Self {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        Self { values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), source_norm: norm }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conjugate(&self) -> Spectrum {
        Spectrum { values: self.values.iter().map(|z| z.conj()).collect(), source_norm: self.source_norm }
    }
}

/// Eigenvalues via the real Schur form: 1x1 blocks give real values,
/// 2x2 blocks give conjugate pairs.
pub fn eigenvalues(a: &Matrix, tol: &Tolerances) -> Result<Spectrum> {
    let schur = real_schur(a, tol)?;
    Ok(Spectrum { values: schur.eigenvalues(), source_norm: a.frobenius() })
}

/// Optimal bottleneck matching distance between two eigenvalue multisets:
/// the minimum over bijections of the largest paired distance.
pub fn matching_distance(s1: &Spectrum, s2: &Spectrum) -> Result<f64> {
    let n = s1.len();
    if n != s2.len() {
        return Err(Error::LengthMismatch { left: n, right: s2.len() });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let dist: Vec<Vec<f64>> =
        s1.values.iter().map(|a| s2.values.iter().map(|b| (a - b).norm()).collect()).collect();
    let mut candidates: Vec<f64> = dist.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // smallest threshold admitting a perfect matching
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(&dist, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

fn has_perfect_matching(dist: &[Vec<f64>], threshold: f64) -> bool {
    let n = dist.len();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for left in 0..n {
        let mut seen = vec![false; n];
        if !augment(left, dist, threshold, &mut seen, &mut match_right) {
            return false;
        }
    }
    true
}

fn augment(
    left: usize,
    dist: &[Vec<f64>],
    threshold: f64,
    seen: &mut [bool],
    match_right: &mut [Option<usize>],
) -> bool {
    for right in 0..dist.len() {
        if dist[left][right] <= threshold && !seen[right] {
            seen[right] = true;
            let free = match match_right[right] {
                None => true,
                Some(other) => augment(other, dist, threshold, seen, match_right),
            };
            if free {
                match_right[right] = Some(left);
                return true;
            }
        }
    }
    false
}
