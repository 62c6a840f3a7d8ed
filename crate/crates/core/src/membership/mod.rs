//! Membership in the set `K` of matrices with a principal logarithm, in the
//! set `K*` of matrices with some real logarithm, and in their common
//! closure.
//!
//! * `A ∈ K` iff no eigenvalue lies on `(-inf, 0]`.
//! * `A ∈ K*` iff `A` is invertible and, at every negative eigenvalue, each
//!   Jordan block size occurs an even number of times.
//! * `A` is in the closure iff every negative eigenvalue has even geometric
//!   multiplicity; zero eigenvalues are allowed.

mod clusters;
mod jordan;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{invert, Matrix, PivotedQr, Tolerances};

pub use clusters::{analyze_spectrum, Cluster, SpectralAnalysis, CLUSTER_LADDER};
pub use jordan::JordanProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigTag {
    PositiveReal,
    NegativeReal,
    Zero,
    NonRealPair,
}

/// One eigenvalue cluster with its sign classification. A `NonRealPair`
/// stands for a conjugate pair of clusters; `value` is the member with
/// positive imaginary part and the multiplicity counts both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigClass {
    pub value: Complex64,
    pub tag: EigTag,
    pub cluster_multiplicity: usize,
}

/// Which of the three sets a query is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetKind {
    K,
    KStar,
    Closure,
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetKind::K => "K",
            SetKind::KStar => "Kstar",
            SetKind::Closure => "closure",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipWitness {
    pub reason: String,
    pub eigenvalue: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<JordanProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub in_set: bool,
    pub witness: Option<MembershipWitness>,
}

impl MembershipVerdict {
    fn member() -> Self {
        Self { in_set: true, witness: None }
    }

    fn rejected(reason: String, eigenvalue: Complex64, profile: Option<JordanProfile>) -> Self {
        Self { in_set: false, witness: Some(MembershipWitness { reason, eigenvalue, profile }) }
    }
}

impl SpectralAnalysis {
    pub fn tag(&self, c: &Cluster, tol: &Tolerances) -> EigTag {
        let floor = tol.imag_zero * self.scale;
        if !c.is_real && c.center.im.abs() > floor {
            EigTag::NonRealPair
        } else if c.center.norm() <= floor {
            EigTag::Zero
        } else if c.center.re < 0.0 {
            EigTag::NegativeReal
        } else {
            EigTag::PositiveReal
        }
    }

    pub fn classes(&self, tol: &Tolerances) -> Vec<EigClass> {
        self.clusters
            .iter()
            .map(|c| EigClass { value: c.center, tag: self.tag(c, tol), cluster_multiplicity: c.multiplicity })
            .collect()
    }

    /// Jordan profile of a real cluster.
    pub fn profile(&self, c: &Cluster) -> Result<JordanProfile> {
        if c.rank_sequence.is_empty() {
            return Err(Error::NotAnEigenvalue { value: c.center.re });
        }
        JordanProfile::from_rank_sequence(c.center.re, &c.rank_sequence)
    }

    fn clusters_tagged<'a>(&'a self, tag: EigTag, tol: &'a Tolerances) -> impl Iterator<Item = &'a Cluster> + 'a {
        self.clusters.iter().filter(move |c| self.tag(c, tol) == tag)
    }

    pub fn in_k(&self, tol: &Tolerances) -> MembershipVerdict {
        for c in &self.clusters {
            match self.tag(c, tol) {
                EigTag::NegativeReal => {
                    return MembershipVerdict::rejected(
                        format!("eigenvalue {:.6} lies on the negative real axis", c.center.re),
                        c.center,
                        None,
                    )
                }
                EigTag::Zero => {
                    return MembershipVerdict::rejected("zero eigenvalue: matrix is singular".into(), c.center, None)
                }
                _ => {}
            }
        }
        MembershipVerdict::member()
    }

    pub fn in_k_star(&self, tol: &Tolerances) -> Result<MembershipVerdict> {
        if let Some(c) = self.clusters_tagged(EigTag::Zero, tol).next() {
            return Ok(MembershipVerdict::rejected("zero eigenvalue: matrix is singular".into(), c.center, None));
        }
        for c in self.clusters_tagged(EigTag::NegativeReal, tol) {
            let profile = self.profile(c)?;
            if let Some((size, count)) = profile.first_odd_size() {
                return Ok(MembershipVerdict::rejected(
                    format!(
                        "eigenvalue {:.6}: Jordan block size {size} occurs {count} time{} (odd count)",
                        c.center.re,
                        if count == 1 { "" } else { "s" }
                    ),
                    c.center,
                    Some(profile),
                ));
            }
        }
        Ok(MembershipVerdict::member())
    }

    pub fn in_closure(&self, tol: &Tolerances) -> Result<MembershipVerdict> {
        for c in self.clusters_tagged(EigTag::NegativeReal, tol) {
            let profile = self.profile(c)?;
            let g = profile.geometric_multiplicity();
            if g % 2 == 1 {
                return Ok(MembershipVerdict::rejected(
                    format!("eigenvalue {:.6} has odd geometric multiplicity {g}", c.center.re),
                    c.center,
                    Some(profile),
                ));
            }
        }
        Ok(MembershipVerdict::member())
    }

    pub fn membership(&self, set: SetKind, tol: &Tolerances) -> Result<MembershipVerdict> {
        match set {
            SetKind::K => Ok(self.in_k(tol)),
            SetKind::KStar => self.in_k_star(tol),
            SetKind::Closure => self.in_closure(tol),
        }
    }

    /// Smallest distance from a cluster centre to `(-inf, 0]`.
    pub fn distance_to_negative_axis(&self) -> f64 {
        self.clusters.iter().map(|c| distance_to_negative_axis(c.center)).fold(f64::INFINITY, f64::min)
    }
}

/// `dist(z, (-inf, 0])`.
pub fn distance_to_negative_axis(z: Complex64) -> f64 {
    if z.re >= 0.0 {
        z.norm()
    } else {
        z.im.abs()
    }
}

pub fn classify_spectrum(a: &Matrix, tol: &Tolerances) -> Result<Vec<EigClass>> {
    Ok(analyze_spectrum(a, tol)?.classes(tol))
}

/// Jordan profile at the clustered eigenvalue nearest to `mu`.
pub fn jordan_profile(a: &Matrix, mu: f64, tol: &Tolerances) -> Result<JordanProfile> {
    let s = analyze_spectrum(a, tol)?;
    let z = Complex64::new(mu, 0.0);
    let c = s
        .clusters
        .iter()
        .filter(|c| c.is_real)
        .filter(|c| (c.center - z).norm() <= c.radius.max(tol.eig_cluster * s.scale))
        .min_by(|x, y| (x.center - z).norm().total_cmp(&(y.center - z).norm()))
        .ok_or(Error::NotAnEigenvalue { value: mu })?;
    s.profile(c)
}

pub fn in_k(a: &Matrix, tol: &Tolerances) -> Result<MembershipVerdict> {
    Ok(analyze_spectrum(a, tol)?.in_k(tol))
}

pub fn in_k_star(a: &Matrix, tol: &Tolerances) -> Result<MembershipVerdict> {
    analyze_spectrum(a, tol)?.in_k_star(tol)
}

pub fn in_closure(a: &Matrix, tol: &Tolerances) -> Result<MembershipVerdict> {
    analyze_spectrum(a, tol)?.in_closure(tol)
}

pub fn membership(a: &Matrix, set: SetKind, tol: &Tolerances) -> Result<MembershipVerdict> {
    analyze_spectrum(a, tol)?.membership(set, tol)
}

fn require_in_k(s: &SpectralAnalysis, tol: &Tolerances) -> Result<()> {
    match s.in_k(tol).witness {
        None => Ok(()),
        Some(w) => Err(Error::NotInK { eigenvalue: w.eigenvalue }),
    }
}

/// Half the distance from the spectrum to `(-inf, 0]`: every matrix whose
/// spectrum is within this matching distance of `σ(A)` is still in `K`.
pub fn openness_radius(a: &Matrix, tol: &Tolerances) -> Result<f64> {
    let s = analyze_spectrum(a, tol)?;
    require_in_k(&s, tol)?;
    Ok(0.5 * s.distance_to_negative_axis())
}

/// Certified radius in the Frobenius norm: every `E` with `||E||_F < η`
/// keeps `A + E` in `K`.
///
/// `A + E` has an eigenvalue `z ≤ 0` only if `||E||_2 ≥ σ_min(A - zI)`. The
/// map `z ↦ σ_min(A - zI)` is 1-Lipschitz and is bounded below by
/// `1 / ||(A - zI)^{-1}||_F`, so bisecting `[-(2||A||_F + 1), 0]` until the
/// Lipschitz lower bound on each piece is at least half the sampled values
/// gives a rigorous lower bound; half of it is returned.
pub fn perturbation_radius(a: &Matrix, tol: &Tolerances) -> Result<f64> {
    let s = analyze_spectrum(a, tol)?;
    require_in_k(&s, tol)?;
    let g = |z: f64| -> f64 {
        match invert(&a.shifted(z), tol) {
            Ok(inv) => 1.0 / inv.frobenius(),
            Err(_) => 0.0,
        }
    };
    let reach = 2.0 * a.frobenius() + 1.0;
    const PIECES: usize = 32;
    const MAX_DEPTH: usize = 60;
    let mut stack: Vec<(f64, f64, f64, f64, usize)> = Vec::new();
    let mut prev = (-reach, g(-reach));
    for k in 1..=PIECES {
        let z = -reach + reach * k as f64 / PIECES as f64;
        let gz = g(z);
        stack.push((prev.0, z, prev.1, gz, 0));
        prev = (z, gz);
    }
    let mut lower = f64::INFINITY;
    while let Some((lo, hi, glo, ghi, depth)) = stack.pop() {
        let bound = 0.5 * (glo + ghi - (hi - lo));
        if bound >= 0.5 * glo.min(ghi) || depth >= MAX_DEPTH {
            lower = lower.min(bound.max(0.0));
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        stack.push((lo, mid, glo, gm, depth + 1));
        stack.push((mid, hi, gm, ghi, depth + 1));
    }
    Ok(0.5 * lower)
}

/// Real change of basis `A = X · diag(μ_1 I, …, μ_q I, B) · X^{-1}` splitting
/// off the eigenspaces of semisimple negative eigenvalues.
pub(crate) struct NegativeSplit {
    pub x: Matrix,
    pub x_inv: Matrix,
    /// Negative eigenvalue and its (even) multiplicity, in column order.
    pub blocks: Vec<(f64, usize)>,
    /// Dimension of the complementary invariant subspace.
    pub rest: usize,
}

pub(crate) fn negative_split(a: &Matrix, s: &SpectralAnalysis, tol: &Tolerances) -> Result<NegativeSplit> {
    let n = a.rows();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut blocks = Vec::new();
    let mut product = Matrix::identity(n);
    for c in s.clusters_tagged(EigTag::NegativeReal, tol) {
        let profile = s.profile(c)?;
        if !profile.is_semisimple() {
            return Err(Error::UnsupportedJordanStructure { eigenvalue: c.center.re });
        }
        let mu = c.center.re;
        let m = c.multiplicity;
        let shifted = a.shifted(mu);
        // trailing columns of Q in (A - μI)^T Π = Q R span the null space
        let qr = PivotedQr::new(&shifted.transpose());
        for j in n - m..n {
            columns.push(qr.q.column(j));
        }
        blocks.push((mu, m));
        product = &product * &shifted;
    }
    let neg_dim: usize = blocks.iter().map(|b| b.1).sum();
    let rest = n - neg_dim;
    let qr = PivotedQr::new(&product);
    for j in 0..rest {
        columns.push(qr.q.column(j));
    }
    let x = Matrix::from_columns(n, &columns);
    let x_inv = invert(&x, tol)?;
    Ok(NegativeSplit { x, x_inv, blocks, rest })
}

/// Rotation by `theta`.
pub(crate) fn rotation2(theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    Matrix::from_rows(&[[c, -s], [s, c]])
}

/// A matrix in `K` within Frobenius distance `eps` of `a ∈ K*`, obtained by
/// turning each negative eigenvalue pair `μ, μ` into `|μ| e^{±i(π-δ)}`.
pub fn approximate_from_k(a: &Matrix, eps: f64, tol: &Tolerances) -> Result<Matrix> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let s = analyze_spectrum(a, tol)?;
    if s.in_k(tol).in_set {
        return Ok(a.clone());
    }
    if let Some(w) = s.in_k_star(tol)?.witness {
        return Err(Error::NotInKStar { reason: w.reason });
    }
    let split = negative_split(a, &s, tol)?;
    let n = a.rows();
    let perturbation = |delta: f64| -> Matrix {
        let mut d = Matrix::zeros(n, n);
        let step = &rotation2(PI - delta) - &rotation2(PI);
        let mut offset = 0;
        for &(mu, m) in &split.blocks {
            for pair in 0..m / 2 {
                d.set_submatrix(offset + 2 * pair, offset + 2 * pair, &step.scale(mu.abs()));
            }
            offset += m;
        }
        &(&split.x * &d) * &split.x_inv
    };
    let target = 0.9 * eps;
    let mut delta = PI / 2.0;
    for _ in 0..60 {
        let d = perturbation(delta);
        let size = d.frobenius();
        if size <= eps {
            let candidate = a + &d;
            if in_k(&candidate, tol)?.in_set {
                return Ok(candidate);
            }
            return Err(Error::ToleranceFloor { eps });
        }
        delta *= target / size;
    }
    Err(Error::ToleranceFloor { eps })
}

/// `X · inner · X^{-1}`.
pub(crate) fn conjugate_back(split: &NegativeSplit, inner: &Matrix) -> Matrix {
    &(&split.x * inner) * &split.x_inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn j2(mu: f64) -> Matrix {
        Matrix::from_rows(&[[mu, 1.0], [0.0, mu]])
    }

    #[test]
    fn classify_examples() {
        let c = classify_spectrum(&Matrix::diag(&[1.0, 2.0]), &tol()).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|e| e.tag == EigTag::PositiveReal && e.cluster_multiplicity == 1));

        let c = classify_spectrum(&Matrix::from_rows(&[[0.0, -1.0], [-1.0, 0.0]]), &tol()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].tag, EigTag::NegativeReal);
        assert!((c[0].value.re + 1.0).abs() < 1e-15);
        assert_eq!(c[1].tag, EigTag::PositiveReal);

        let c = classify_spectrum(&rotation2(PI / 3.0), &tol()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].tag, EigTag::NonRealPair);
        assert_eq!(c[0].cluster_multiplicity, 2);
    }

    #[test]
    fn profile_examples() {
        let p = jordan_profile(&Matrix::scalar(2, -1.0), -1.0, &tol()).unwrap();
        assert_eq!(p.block_counts, BTreeMap::from([(1, 2)]));
        let p = jordan_profile(&j2(-1.0), -1.0, &tol()).unwrap();
        assert_eq!(p.block_counts, BTreeMap::from([(2, 1)]));
        let p = jordan_profile(&j2(-1.0).direct_sum(&j2(-1.0)), -1.0, &tol()).unwrap();
        assert_eq!(p.block_counts, BTreeMap::from([(2, 2)]));
    }

    #[test]
    fn profile_rejects_non_eigenvalue() {
        assert_eq!(jordan_profile(&Matrix::diag(&[1.0, 2.0]), -3.0, &tol()), Err(Error::NotAnEigenvalue { value: -3.0 }));
    }

    #[test]
    fn k_examples() {
        assert!(in_k(&Matrix::identity(2), &tol()).unwrap().in_set);
        assert!(!in_k(&Matrix::scalar(2, -1.0), &tol()).unwrap().in_set);
        assert!(in_k(&rotation2(2.0 * PI / 3.0), &tol()).unwrap().in_set);
    }

    #[test]
    fn k_star_examples() {
        assert!(in_k_star(&Matrix::scalar(2, -1.0), &tol()).unwrap().in_set);
        let v = in_k_star(&Matrix::from_rows(&[[0.0, -1.0], [-1.0, 0.0]]), &tol()).unwrap();
        assert!(!v.in_set);
        let w = v.witness.unwrap();
        assert!((w.eigenvalue.re + 1.0).abs() < 1e-12);
        assert_eq!(w.profile.unwrap().block_counts, BTreeMap::from([(1, 1)]));

        assert!(in_k_star(&j2(-1.0).direct_sum(&j2(-1.0)), &tol()).unwrap().in_set);
        let mixed = j2(-1.0).direct_sum(&Matrix::scalar(2, -1.0));
        let v = in_k_star(&mixed, &tol()).unwrap();
        assert!(!v.in_set);
        assert_eq!(v.witness.unwrap().profile.unwrap().block_counts, BTreeMap::from([(1, 2), (2, 1)]));
    }

    #[test]
    fn singular_is_not_in_k_star() {
        let v = in_k_star(&Matrix::diag(&[0.0, 1.0]), &tol()).unwrap();
        assert!(!v.in_set);
        assert!(v.witness.unwrap().reason.contains("singular"));
    }

    #[test]
    fn closure_examples() {
        assert!(in_closure(&Matrix::zeros(2, 2), &tol()).unwrap().in_set);
        assert!(in_closure(&Matrix::scalar(2, -1.0), &tol()).unwrap().in_set);
        assert!(!in_closure(&Matrix::diag(&[-1.0, 1.0]), &tol()).unwrap().in_set);
    }

    #[test]
    fn openness_radius_examples() {
        assert!((openness_radius(&Matrix::identity(2), &tol()).unwrap() - 0.5).abs() < 1e-15);
        assert!((openness_radius(&Matrix::diag(&[2.0, 3.0]), &tol()).unwrap() - 1.0).abs() < 1e-15);
        assert!((openness_radius(&rotation2(PI / 2.0), &tol()).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(openness_radius(&Matrix::scalar(2, -1.0), &tol()), Err(Error::NotInK { .. })));
    }

    #[test]
    fn perturbation_radius_of_identity() {
        // σ_min(I - zI) = 1 - z ≥ 1 on z ≤ 0, minimum 1 at z = 0; the Frobenius
        // bound gives 1/√2, halved.
        let eta = perturbation_radius(&Matrix::identity(2), &tol()).unwrap();
        assert!(eta > 0.25 && eta <= 0.5 / 2f64.sqrt() + 1e-12, "{eta}");
    }

    #[test]
    fn approximate_negative_identity() {
        let a = Matrix::scalar(2, -1.0);
        let b = approximate_from_k(&a, 0.1, &tol()).unwrap();
        assert!(b.distance(&a) <= 0.1);
        assert!(in_k(&b, &tol()).unwrap().in_set);
        let ev = crate::linalg::eigenvalues(&b, &tol()).unwrap();
        assert!(ev.values.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12 && z.im.abs() > 0.0));
    }

    #[test]
    fn approximate_leaves_members_alone() {
        let a = Matrix::identity(3);
        assert_eq!(approximate_from_k(&a, 1e-3, &tol()).unwrap(), a);
    }

    #[test]
    fn approximate_partial_pair() {
        let a = Matrix::diag(&[-2.0, -2.0, 5.0]);
        let b = approximate_from_k(&a, 0.01, &tol()).unwrap();
        assert!(b.distance(&a) <= 0.01);
        assert!(in_k(&b, &tol()).unwrap().in_set);
        assert!((b[(2, 2)] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn approximate_rejects_defective_and_non_members() {
        let d = j2(-1.0).direct_sum(&j2(-1.0));
        assert!(matches!(approximate_from_k(&d, 0.1, &tol()), Err(Error::UnsupportedJordanStructure { .. })));
        let odd = Matrix::diag(&[-1.0, 2.0]);
        assert!(matches!(approximate_from_k(&odd, 0.1, &tol()), Err(Error::NotInKStar { .. })));
    }
}
