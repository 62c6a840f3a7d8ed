//! Deciding whether a bijective linear map on matrix space maps `K*` onto
//! itself: either recover `A ↦ c P A P^{-1}` (or with `A^T`), or exhibit a
//! matrix in the set whose image is not.

mod search;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, Matrix, Tolerances};
use crate::maps::{unit, MatrixSpaceMap, StandardForm};
use crate::membership::SetKind;

pub use search::{
    check_gl_preservation, falsify_preservation, membership_mismatch, preservation_failures, verify_theorem,
    GlCheck, GlDirection, GlWitness, TheoremReport, DEFAULT_BUDGET, THEOREM_SAMPLES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Homomorphism {
    Automorphism,
    AntiAutomorphism,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StandardPreserver,
    NotPreserver,
    NotBijective,
    /// No standard form and no witness within the search budget.
    Unresolved,
}

/// `matrix` is in `set` and `image = φ(matrix)` is not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub matrix: Matrix,
    pub image: Matrix,
    pub set: SetKind,
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    pub verdict: Verdict,
    pub form: Option<StandardForm>,
    pub witness: Option<Witness>,
    /// Why recovery of a standard form stopped, when it did.
    pub note: Option<String>,
}

fn residual_scale(m: &MatrixSpaceMap) -> f64 {
    m.big.frobenius().max(f64::MIN_POSITIVE)
}

/// `c` with `φ(I) = c I`, `c > 0`.
pub fn recover_scale(phi: &MatrixSpaceMap, tol: &Tolerances) -> Result<f64> {
    let n = phi.n;
    let image = phi.apply(&Matrix::identity(n))?;
    let c = image.trace() / n as f64;
    let residual = image.shifted(c).frobenius();
    if residual > tol.residual_rel * residual_scale(phi) || !(c > 0.0) {
        return Err(Error::NotScalarImage { residual, scale: c });
    }
    Ok(c)
}

/// Tests `ψ(E_ij E_kl) = ψ(E_ij) ψ(E_kl)` and the reversed identity on all
/// pairs of matrix units.
pub fn classify_homomorphism(psi: &MatrixSpaceMap, tol: &Tolerances) -> Result<Homomorphism> {
    let n = psi.n;
    if n == 1 {
        return Ok(Homomorphism::Automorphism);
    }
    let images: Vec<Matrix> = (0..n * n).map(|k| psi.apply(&unit(n, k / n, k % n))).collect::<Result<_>>()?;
    let largest = images.iter().map(Matrix::frobenius).fold(1.0, f64::max);
    let threshold = tol.residual_rel * largest * largest;
    let zero = Matrix::zeros(n, n);
    let product = |i: usize, j: usize, k: usize, l: usize| if j == k { &images[i * n + l] } else { &zero };
    let holds = |reversed: bool| {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let (x, y) = (&images[i * n + j], &images[k * n + l]);
                        let prod = if reversed { y * x } else { x * y };
                        if prod.distance(product(i, j, k, l)) > threshold {
                            return false;
                        }
                    }
                }
            }
        }
        true
    };
    Ok(if holds(false) {
        Homomorphism::Automorphism
    } else if holds(true) {
        Homomorphism::AntiAutomorphism
    } else {
        Homomorphism::Neither
    })
}

/// Normalized `P` with `ψ(A) = P A P^{-1}` for an automorphism `ψ`.
///
/// `ψ(E_11)` is a rank-one idempotent `P E_11 P^{-1}`; its largest column
/// is a multiple of `P e_1`, and `ψ(E_j1)` carries that to the same
/// multiple of `P e_j`.
pub fn recover_conjugator(psi: &MatrixSpaceMap, tol: &Tolerances) -> Result<Matrix> {
    let n = psi.n;
    let f = psi.apply(&unit(n, 0, 0))?;
    let best = (0..n)
        .max_by(|&a, &b| {
            let na: f64 = f.column(a).iter().map(|x| x * x).sum();
            let nb: f64 = f.column(b).iter().map(|x| x * x).sum();
            na.total_cmp(&nb)
        })
        .unwrap_or(0);
    let p1 = f.column(best);
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        columns.push(psi.apply(&unit(n, j, 0))?.matvec(&p1));
    }
    let p = Matrix::from_columns(n, &columns);
    if !p.is_finite() || numerical_rank(&p, tol) < n {
        return Err(Error::DegenerateRecovery);
    }
    crate::maps::normalize_conjugator(&p)
}

/// Recovers the standard form of `phi` or explains why it has none.
fn recover_form(phi: &MatrixSpaceMap, tol: &Tolerances) -> Result<StandardForm> {
    let n = phi.n;
    if n == 1 {
        let c = phi.big[(0, 0)];
        if !(c > 0.0) {
            return Err(Error::NotScalarImage { residual: 0.0, scale: c });
        }
        return StandardForm::new(c, &Matrix::identity(1), false);
    }
    let c = recover_scale(phi, tol)?;
    let psi = phi.scaled(1.0 / c);
    let (psi, transposed) = match classify_homomorphism(&psi, tol)? {
        Homomorphism::Automorphism => (psi, false),
        Homomorphism::AntiAutomorphism => (psi.compose(&MatrixSpaceMap::transpose_map(n))?, true),
        Homomorphism::Neither => {
            return Err(Error::InvalidArgument("map is neither multiplicative nor anti-multiplicative".into()))
        }
    };
    let p = recover_conjugator(&psi, tol)?;
    let form = StandardForm::new(c, &p, transposed)?;
    let rebuilt = MatrixSpaceMap::from_standard(&form, tol)?;
    let scale = residual_scale(phi);
    let conditioning = (scale / (c * n as f64)).max(1.0);
    let gap = rebuilt.basis_distance(phi);
    if gap > tol.residual_rel * scale * conditioning {
        return Err(Error::InvalidArgument(format!("standard form does not reproduce the map (gap {gap:e})")));
    }
    Ok(form)
}

/// Full analysis with the default witness search (`K*`, budget
/// [`DEFAULT_BUDGET`], seed 0).
pub fn analyze(phi: &MatrixSpaceMap, tol: &Tolerances) -> AnalysisResult {
    analyze_with(phi, DEFAULT_BUDGET, 0, tol)
}

pub fn analyze_with(phi: &MatrixSpaceMap, budget: usize, seed: u64, tol: &Tolerances) -> AnalysisResult {
    if !phi.is_bijective(tol) {
        return AnalysisResult { verdict: Verdict::NotBijective, form: None, witness: None, note: None };
    }
    let note = match recover_form(phi, tol) {
        Ok(form) => {
            return AnalysisResult { verdict: Verdict::StandardPreserver, form: Some(form), witness: None, note: None }
        }
        Err(e) => e.to_string(),
    };
    match falsify_preservation(phi, SetKind::KStar, budget, seed, tol) {
        Ok(Some(w)) => AnalysisResult { verdict: Verdict::NotPreserver, form: None, witness: Some(w), note: Some(note) },
        Ok(None) => AnalysisResult { verdict: Verdict::Unresolved, form: None, witness: None, note: Some(note) },
        Err(e) => AnalysisResult {
            verdict: Verdict::Unresolved,
            form: None,
            witness: None,
            note: Some(format!("{note}; witness search failed: {e}")),
        },
    }
}
