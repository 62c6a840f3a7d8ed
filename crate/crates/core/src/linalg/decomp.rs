//! LU and column-pivoted QR factorizations, numerical rank, inversion and
//! orthonormal bases for null spaces and ranges.

use super::{Matrix, Tolerances};
use crate::error::{Error, Result};

/// Householder reflector `I - beta v v^T` mapping `x` to `alpha e_1`.
pub(crate) fn householder(x: &[f64]) -> (Vec<f64>, f64, f64) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut v = x.to_vec();
    if norm == 0.0 {
        return (v, 0.0, 0.0);
    }
    let alpha = if x[0] > 0.0 { -norm } else { norm };
    v[0] -= alpha;
    let vtv: f64 = v.iter().map(|t| t * t).sum();
    let beta = if vtv == 0.0 { 0.0 } else { 2.0 / vtv };
    (v, beta, alpha)
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &Matrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                return Err(Error::SingularMatrix { rank: k, n });
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &Matrix) -> Matrix {
        let cols: Vec<Vec<f64>> = (0..b.cols()).map(|j| self.solve_vec(&b.column(j))).collect();
        Matrix::from_columns(b.rows(), &cols)
    }

    pub fn determinant(&self) -> f64 {
        let n = self.lu.n();
        let mut det: f64 = (0..n).map(|i| self.lu[(i, i)]).product();
        // parity of the permutation
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.perm[k];
                len += 1;
            }
            if len % 2 == 0 {
                det = -det;
            }
        }
        det
    }
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    Ok(Lu::new(a)?.solve(b))
}

/// Column-pivoted Householder QR, `A Π = Q R`, for any rectangular `A`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    pub q: Matrix,
    pub r: Matrix,
    pub perm: Vec<usize>,
}

impl PivotedQr {
    pub fn new(a: &Matrix) -> Self {
        let (m, k) = (a.rows(), a.cols());
        let mut r = a.clone();
        let mut q = Matrix::identity(m);
        let mut perm: Vec<usize> = (0..k).collect();
        for j in 0..m.min(k) {
            let (p, _) = (j..k)
                .map(|c| (c, (j..m).map(|i| r[(i, c)] * r[(i, c)]).sum::<f64>()))
                .fold((j, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if p != j {
                for i in 0..m {
                    let t = r[(i, j)];
                    r[(i, j)] = r[(i, p)];
                    r[(i, p)] = t;
                }
                perm.swap(j, p);
            }
            let x: Vec<f64> = (j..m).map(|i| r[(i, j)]).collect();
            let (v, beta, alpha) = householder(&x);
            if beta == 0.0 {
                continue;
            }
            for c in j..k {
                let s: f64 = (j..m).map(|i| v[i - j] * r[(i, c)]).sum::<f64>() * beta;
                for i in j..m {
                    r[(i, c)] -= s * v[i - j];
                }
            }
            for i in 0..m {
                let s: f64 = (j..m).map(|l| q[(i, l)] * v[l - j]).sum::<f64>() * beta;
                for l in j..m {
                    q[(i, l)] -= s * v[l - j];
                }
            }
            r[(j, j)] = alpha;
            for i in j + 1..m {
                r[(i, j)] = 0.0;
            }
        }
        Self { q, r, perm }
    }

    /// Magnitudes of the diagonal of `R`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.r.rows().min(self.r.cols())).map(|i| self.r[(i, i)].abs()).collect()
    }

    /// Number of diagonal magnitudes strictly above `threshold`.
    pub fn rank_above(&self, threshold: f64) -> usize {
        self.diagonal().iter().take_while(|&&d| d > threshold).count()
    }

    /// Number of diagonal magnitudes above `rel` times the largest one.
    pub fn relative_rank(&self, rel: f64) -> usize {
        let d = self.diagonal();
        match d.first() {
            Some(&d0) if d0 > 0.0 => self.rank_above(rel * d0),
            _ => 0,
        }
    }
}

/// Numerical rank by column-pivoted QR relative to the largest pivot.
pub fn numerical_rank(a: &Matrix, tol: &Tolerances) -> usize {
    PivotedQr::new(a).relative_rank(tol.rank_rel)
}

/// Matrix inverse; fails when the numerical rank is deficient.
pub fn invert(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let n = a.ensure_square()?;
    let rank = numerical_rank(a, tol);
    if rank < n {
        return Err(Error::SingularMatrix { rank, n });
    }
    solve(a, &Matrix::identity(n))
}

pub fn determinant(a: &Matrix) -> Result<f64> {
    match Lu::new(a) {
        Ok(lu) => Ok(lu.determinant()),
        Err(Error::SingularMatrix { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Orthonormal basis (as columns) of the null space of `a`, where singular
/// directions are those with pivots at or below `threshold`.
pub fn null_space(a: &Matrix, threshold: f64) -> Matrix {
    let qr = PivotedQr::new(&a.transpose());
    let rank = qr.rank_above(threshold);
    let n = a.cols();
    qr.q.columns(rank, n - rank)
}

/// Orthonormal basis of the column space of `a` at the given pivot threshold.
pub fn range_basis(a: &Matrix, threshold: f64) -> Matrix {
    let qr = PivotedQr::new(a);
    let rank = qr.rank_above(threshold);
    qr.q.columns(0, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn invert_identity() {
        assert_eq!(invert(&Matrix::identity(3), &tol()).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn invert_diagonal() {
        let inv = invert(&Matrix::diag(&[2.0, 4.0]), &tol()).unwrap();
        assert_eq!(inv, Matrix::diag(&[0.5, 0.25]));
    }

    #[test]
    fn invert_shear() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        let inv = invert(&a, &tol()).unwrap();
        assert_eq!(inv, Matrix::from_rows(&[[1.0, -1.0], [0.0, 1.0]]));
        // direct 2x2 product
        assert_eq!(&a * &inv, Matrix::identity(2));
    }

    #[test]
    fn invert_rejects_rank_deficient() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(invert(&a, &tol()), Err(Error::SingularMatrix { rank: 1, n: 2 })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&Matrix::zeros(2, 2), &tol()), 0);
        assert_eq!(numerical_rank(&Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]), &tol()), 1);
        assert_eq!(numerical_rank(&Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]), &tol()), 2);
    }

    #[test]
    fn rectangular_rank() {
        let a = Matrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [1.0, 0.0, 1.0], [0.0, 0.0, 0.0]]);
        assert_eq!(numerical_rank(&a, &tol()), 2);
    }

    #[test]
    fn qr_reconstructs() {
        let a = Matrix::from_rows(&[[1.0, 2.0, 0.5], [3.0, -1.0, 2.0], [0.0, 4.0, 1.0]]);
        let qr = PivotedQr::new(&a);
        let ap = Matrix::from_fn(3, 3, |i, j| a[(i, qr.perm[j])]);
        assert!((&qr.q * &qr.r).distance(&ap) < 1e-13);
        assert!((&qr.q.transpose() * &qr.q).distance(&Matrix::identity(3)) < 1e-14);
    }

    #[test]
    fn null_space_of_projector() {
        let a = Matrix::diag(&[1.0, 0.0, 1.0]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.cols(), 1);
        assert!((ns[(1, 0)].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn determinant_sign() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert!((determinant(&a).unwrap() + 1.0).abs() < 1e-15);
    }
}
