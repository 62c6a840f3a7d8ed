//! Linear maps on `n x n` matrix space in column-stacked coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{invert, kron, numerical_rank, Matrix, Tolerances};

/// Column-stacking: entry `(i, j)` goes to position `j n + i`.
pub fn vec(a: &Matrix) -> Vec<f64> {
    let (r, c) = (a.rows(), a.cols());
    let mut v = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            v.push(a[(i, j)]);
        }
    }
    v
}

pub fn unvec(v: &[f64], n: usize) -> Result<Matrix> {
    if v.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, found: v.len() });
    }
    Ok(Matrix::from_fn(n, n, |i, j| v[j * n + i]))
}

/// Matrix unit `E_ij`.
pub fn unit(n: usize, i: usize, j: usize) -> Matrix {
    let mut e = Matrix::zeros(n, n);
    e[(i, j)] = 1.0;
    e
}

/// Commutation matrix: `vec(A^T) = K vec(A)`.
fn commutation(n: usize) -> Matrix {
    let mut k = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            k[(i * n + j, j * n + i)] = 1.0;
        }
    }
    k
}

/// A linear map `φ` with `vec(φ(A)) = big · vec(A)`.
///
/// JSON shape: `{"n", "big"}` with `big` the `n^4` entries in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct MatrixSpaceMap {
    pub n: usize,
    pub big: Matrix,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    n: usize,
    big: Vec<f64>,
}

impl TryFrom<RawMap> for MatrixSpaceMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        let m = raw.n * raw.n;
        if raw.big.len() != m * m {
            return Err(Error::LengthMismatch { left: m * m, right: raw.big.len() });
        }
        Self::new(raw.n, Matrix::from_row_major(m, m, raw.big)?)
    }
}

impl From<MatrixSpaceMap> for RawMap {
    fn from(m: MatrixSpaceMap) -> Self {
        Self { n: m.n, big: m.big.into_vec() }
    }
}

/// Factors of a two-sided map `A ↦ P A Q` (or `P A^T Q`).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSided {
    pub p: Matrix,
    pub q: Matrix,
    pub transposed: bool,
}

/// `A ↦ c P A P^{-1}` or `A ↦ c P A^T P^{-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardForm {
    pub c: f64,
    #[serde(rename = "P")]
    pub p: Matrix,
    pub transposed: bool,
}

impl StandardForm {
    /// Builds a standard form with `p` normalized.
    pub fn new(c: f64, p: &Matrix, transposed: bool) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {c}")));
        }
        p.ensure_square()?;
        Ok(Self { c, p: normalize_conjugator(p)?, transposed })
    }
}

/// Rescales `p` to unit Frobenius norm with its first non-negligible entry
/// (row-major) positive. This fixes the `P ↦ λP` freedom.
pub fn normalize_conjugator(p: &Matrix) -> Result<Matrix> {
    let norm = p.frobenius();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::SingularMatrix { rank: 0, n: p.rows() });
    }
    let floor = 1e-8 * p.max_abs();
    let lead = p.as_slice().iter().copied().find(|x| x.abs() > floor).unwrap_or(1.0);
    Ok(p.scale(lead.signum() / norm))
}

impl MatrixSpaceMap {
    pub fn new(n: usize, big: Matrix) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if big.rows() != n * n || big.cols() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: big.rows().max(big.cols()) });
        }
        if !big.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, big })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, big: Matrix::identity(n * n) }
    }

    pub fn transpose_map(n: usize) -> Self {
        Self { n, big: commutation(n) }
    }

    /// `A ↦ P A Q`, or `A ↦ P A^T Q` when `transposed`, via
    /// `vec(PAQ) = (Q^T ⊗ P) vec(A)`.
    pub fn from_two_sided(p: &Matrix, q: &Matrix, transposed: bool) -> Result<Self> {
        let n = p.ensure_square()?;
        if q.ensure_square()? != n {
            return Err(Error::DimensionMismatch { expected: n, found: q.rows() });
        }
        let mut big = kron(&q.transpose(), p);
        if transposed {
            big = &big * &commutation(n);
        }
        Ok(Self { n, big })
    }

    pub fn from_standard(sf: &StandardForm, tol: &Tolerances) -> Result<Self> {
        let p_inv = invert(&sf.p, tol)?;
        Self::from_two_sided(&sf.p.scale(sf.c), &p_inv, sf.transposed)
    }

    /// Builds the map from its action `f` on the basis `E_ij`.
    pub fn from_fn(n: usize, f: impl Fn(&Matrix) -> Matrix) -> Result<Self> {
        let mut columns = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let image = f(&unit(n, i, j));
                if image.rows() != n || image.cols() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: image.rows() });
                }
                columns.push(vec(&image));
            }
        }
        Self::new(n, Matrix::from_columns(n * n, &columns))
    }

    pub fn apply(&self, a: &Matrix) -> Result<Matrix> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.rows() });
        }
        unvec(&self.big.matvec(&vec(a)), self.n)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MatrixSpaceMap) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(Self { n: self.n, big: &self.big * &other.big })
    }

    pub fn inverse(&self, tol: &Tolerances) -> Result<Self> {
        match invert(&self.big, tol) {
            Ok(big) => Ok(Self { n: self.n, big }),
            Err(Error::SingularMatrix { .. }) => Err(Error::SingularMap),
            Err(e) => Err(e),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { n: self.n, big: self.big.scale(s) }
    }

    pub fn is_bijective(&self, tol: &Tolerances) -> bool {
        numerical_rank(&self.big, tol) == self.n * self.n
    }

    /// Factors `φ` as `A ↦ P A Q` or `A ↦ P A^T Q` when it has that form.
    ///
    /// `Q^T ⊗ P` has blocks `Q_lk P`, so its block rearrangement has rank
    /// one; the largest block is taken as `P` and `Q` is read off by
    /// projection. `P` and `Q` are determined up to `(λP, Q/λ)`.
    pub fn two_sided_factors(&self, tol: &Tolerances) -> Option<TwoSided> {
        let n = self.n;
        let scale = self.big.frobenius();
        if !(scale > 0.0) {
            return None;
        }
        for transposed in [false, true] {
            let b = if transposed { &self.big * &commutation(n) } else { self.big.clone() };
            let block = |k: usize, l: usize| b.submatrix(k * n, l * n, n, n);
            let (mut best, mut best_norm) = ((0, 0), -1.0);
            for k in 0..n {
                for l in 0..n {
                    let norm = block(k, l).frobenius();
                    if norm > best_norm {
                        best = (k, l);
                        best_norm = norm;
                    }
                }
            }
            let p = block(best.0, best.1);
            let pp = best_norm * best_norm;
            let q = Matrix::from_fn(n, n, |l, k| {
                let bk = block(k, l);
                bk.as_slice().iter().zip(p.as_slice()).map(|(x, y)| x * y).sum::<f64>() / pp
            });
            if (&b - &kron(&q.transpose(), &p)).frobenius() <= tol.residual_rel * scale {
                return Some(TwoSided { p, q, transposed });
            }
        }
        None
    }

    /// Largest `||φ(E_ij) - ψ(E_ij)||_F` over the basis.
    pub fn basis_distance(&self, other: &MatrixSpaceMap) -> f64 {
        let mut worst: f64 = 0.0;
        let m = self.n * self.n;
        for col in 0..m {
            let mut d: f64 = 0.0;
            for row in 0..m {
                let x = self.big[(row, col)] - other.big[(row, col)];
                d += x * x;
            }
            worst = worst.max(d.sqrt());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn m22() -> Matrix {
        Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]])
    }

    #[test]
    fn vec_examples() {
        assert_eq!(vec(&m22()), vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(unvec(&[1.0, 3.0, 2.0, 4.0], 2).unwrap(), m22());
        assert_eq!(vec(&Matrix::zeros(2, 2)), vec![0.0; 4]);
        assert!(matches!(unvec(&[1.0; 3], 2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn two_sided_examples() {
        let id = MatrixSpaceMap::from_two_sided(&Matrix::identity(2), &Matrix::identity(2), false).unwrap();
        assert_eq!(id, MatrixSpaceMap::identity(2));

        let q = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let swap = MatrixSpaceMap::from_two_sided(&Matrix::identity(2), &q, false).unwrap();
        let out = swap.apply(&Matrix::scalar(2, -1.0)).unwrap();
        assert_eq!(out, Matrix::from_rows(&[[0.0, -1.0], [-1.0, 0.0]]));

        let p = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        let p_inv = Matrix::from_rows(&[[1.0, -1.0], [0.0, 1.0]]);
        let conj = MatrixSpaceMap::from_two_sided(&p, &p_inv, false).unwrap();
        assert_eq!(conj.apply(&Matrix::identity(2)).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn two_sided_matches_direct_products_on_basis() {
        let p = Matrix::from_rows(&[[1.0, 2.0, 0.0], [0.5, -1.0, 3.0], [2.0, 0.0, 1.0]]);
        let q = Matrix::from_rows(&[[0.0, 1.0, 1.0], [-2.0, 1.0, 0.0], [1.0, 0.0, 4.0]]);
        for transposed in [false, true] {
            let map = MatrixSpaceMap::from_two_sided(&p, &q, transposed).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let e = unit(3, i, j);
                    let arg = if transposed { e.transpose() } else { e.clone() };
                    assert_eq!(map.apply(&e).unwrap(), &(&p * &arg) * &q);
                }
            }
        }
    }

    #[test]
    fn standard_examples() {
        let id = MatrixSpaceMap::from_standard(&StandardForm::new(1.0, &Matrix::identity(2), false).unwrap(), &tol()).unwrap();
        assert!(id.basis_distance(&MatrixSpaceMap::identity(2)) < 1e-15);

        let two = MatrixSpaceMap::from_standard(&StandardForm::new(2.0, &Matrix::identity(2), false).unwrap(), &tol()).unwrap();
        assert!(two.basis_distance(&MatrixSpaceMap::identity(2).scaled(2.0)) < 1e-15);

        let t = MatrixSpaceMap::from_standard(&StandardForm::new(1.0, &Matrix::identity(2), true).unwrap(), &tol()).unwrap();
        assert_eq!(t.apply(&m22()).unwrap(), m22().transpose());
        assert!(t.compose(&t).unwrap().basis_distance(&MatrixSpaceMap::identity(2)) < 1e-15);
    }

    #[test]
    fn transpose_map_examples() {
        let t = MatrixSpaceMap::transpose_map(2);
        assert_eq!(t.apply(&m22()).unwrap(), Matrix::from_rows(&[[1.0, 3.0], [2.0, 4.0]]));
        assert_eq!(t.compose(&t).unwrap(), MatrixSpaceMap::identity(2));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(MatrixSpaceMap::identity(3).inverse(&tol()).unwrap(), MatrixSpaceMap::identity(3));
        let p = Matrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]);
        let sf = StandardForm::new(3.0, &p, false).unwrap();
        let m = MatrixSpaceMap::from_standard(&sf, &tol()).unwrap();
        let inv = m.inverse(&tol()).unwrap();
        let expected = StandardForm::new(1.0 / 3.0, &invert(&p, &tol()).unwrap(), false).unwrap();
        let expected = MatrixSpaceMap::from_standard(&expected, &tol()).unwrap();
        assert!(inv.basis_distance(&expected) < 1e-13);
        assert!(m.compose(&inv).unwrap().basis_distance(&MatrixSpaceMap::identity(2)) < 1e-13);
    }

    #[test]
    fn singular_map_rejected() {
        let m = MatrixSpaceMap::from_two_sided(&Matrix::diag(&[1.0, 0.0]), &Matrix::identity(2), false).unwrap();
        assert!(!m.is_bijective(&tol()));
        assert_eq!(m.inverse(&tol()), Err(Error::SingularMap));
    }

    #[test]
    fn two_sided_factors_recovered() {
        let p = Matrix::from_rows(&[[1.0, 2.0], [0.5, -1.0]]);
        let q = Matrix::from_rows(&[[0.0, 3.0], [1.0, 1.0]]);
        for transposed in [false, true] {
            let m = MatrixSpaceMap::from_two_sided(&p, &q, transposed).unwrap();
            let f = m.two_sided_factors(&tol()).unwrap();
            assert_eq!(f.transposed, transposed);
            let again = MatrixSpaceMap::from_two_sided(&f.p, &f.q, f.transposed).unwrap();
            assert!(again.basis_distance(&m) < 1e-14);
        }
        let sum = MatrixSpaceMap::identity(2).compose(&MatrixSpaceMap::identity(2)).unwrap();
        assert!(sum.two_sided_factors(&tol()).is_some());
        let mixed = MatrixSpaceMap::new(2, &MatrixSpaceMap::identity(2).big + &MatrixSpaceMap::transpose_map(2).big).unwrap();
        assert!(mixed.two_sided_factors(&tol()).is_none());
    }

    #[test]
    fn normalization_fixes_gauge() {
        let p = Matrix::from_rows(&[[0.0, -2.0], [1.0, 3.0]]);
        let a = normalize_conjugator(&p).unwrap();
        let b = normalize_conjugator(&p.scale(-7.5)).unwrap();
        assert!(a.distance(&b) < 1e-15);
        assert!((a.frobenius() - 1.0).abs() < 1e-15);
        assert!(a[(0, 1)] > 0.0);
        let i = normalize_conjugator(&Matrix::identity(4)).unwrap();
        assert!(i.distance(&Matrix::scalar(4, 0.5)) < 1e-15);
    }
}
