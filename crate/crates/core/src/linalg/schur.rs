//! Real Schur decomposition by Householder reduction to Hessenberg form
//! followed by Francis double-shift QR sweeps.

use num_complex::Complex64;

use super::decomp::householder;
use super::{Matrix, Tolerances};
use crate::error::{Error, Result};

/// `A = Q T Q^T` with `Q` orthogonal and `T` quasi upper triangular.
///
/// Every 2x2 diagonal block of `T` has a complex conjugate pair of
/// eigenvalues; real eigenvalues always sit in 1x1 blocks.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: Matrix,
    pub t: Matrix,
}

/// Diagonal block of a quasi-triangular matrix: start index and size (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalBlock {
    pub start: usize,
    pub size: usize,
}

impl SchurForm {
    pub fn blocks(&self) -> Vec<DiagonalBlock> {
        quasi_triangular_blocks(&self.t)
    }

    /// Eigenvalues read off the diagonal blocks, in block order.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.t.rows());
        for b in self.blocks() {
            if b.size == 1 {
                out.push(Complex64::new(self.t[(b.start, b.start)], 0.0));
            } else {
                let (l1, l2) = block_eigenvalues(&self.t, b.start);
                out.push(l1);
                out.push(l2);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        &(&self.q * &self.t) * &self.q.transpose()
    }
}

/// Splits a quasi upper triangular matrix into its diagonal blocks, using
/// nonzero subdiagonal entries to detect 2x2 blocks.
pub fn quasi_triangular_blocks(t: &Matrix) -> Vec<DiagonalBlock> {
    let n = t.rows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            blocks.push(DiagonalBlock { start: i, size: 2 });
            i += 2;
        } else {
            blocks.push(DiagonalBlock { start: i, size: 1 });
            i += 1;
        }
    }
    blocks
}

/// Eigenvalues of the 2x2 block starting at `(i, i)`; the one with
/// nonnegative imaginary part comes first.
pub(crate) fn block_eigenvalues(t: &Matrix, i: usize) -> (Complex64, Complex64) {
    let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    let mid = 0.5 * (a + d);
    if disc >= 0.0 {
        let r = disc.sqrt();
        (Complex64::new(mid + r, 0.0), Complex64::new(mid - r, 0.0))
    } else {
        let w = (-disc).sqrt();
        (Complex64::new(mid, w), Complex64::new(mid, -w))
    }
}

fn reflect_rows(h: &mut Matrix, rows: &[usize], v: &[f64], beta: f64, cols: std::ops::Range<usize>) {
    for c in cols {
        let s: f64 = rows.iter().zip(v).map(|(&r, vi)| vi * h[(r, c)]).sum::<f64>() * beta;
        for (&r, vi) in rows.iter().zip(v) {
            h[(r, c)] -= s * vi;
        }
    }
}

fn reflect_cols(h: &mut Matrix, cols: &[usize], v: &[f64], beta: f64, rows: std::ops::Range<usize>) {
    for r in rows {
        let s: f64 = cols.iter().zip(v).map(|(&c, vi)| vi * h[(r, c)]).sum::<f64>() * beta;
        for (&c, vi) in cols.iter().zip(v) {
            h[(r, c)] -= s * vi;
        }
    }
}

fn hessenberg(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Matrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let (v, beta, alpha) = householder(&x);
        if beta == 0.0 {
            continue;
        }
        let idx: Vec<usize> = (k + 1..n).collect();
        reflect_rows(&mut h, &idx, &v, beta, k..n);
        reflect_cols(&mut h, &idx, &v, beta, 0..n);
        reflect_cols(&mut q, &idx, &v, beta, 0..n);
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = 0.0;
        }
    }
    (h, q)
}

/// Rotates a converged 2x2 block with real eigenvalues into upper
/// triangular form so that real eigenvalues live in 1x1 blocks.
fn standardize_block(h: &mut Matrix, q: &mut Matrix, i: usize) {
    let n = h.rows();
    let (a, b, c, d) = (h[(i, i)], h[(i, i + 1)], h[(i + 1, i)], h[(i + 1, i + 1)]);
    if c == 0.0 {
        return;
    }
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    if disc < 0.0 {
        return;
    }
    let sign = if p >= 0.0 { 1.0 } else { -1.0 };
    let lambda = 0.5 * (a + d) + sign * disc.sqrt();
    // eigenvector from either row of (B - lambda I) v = 0
    let v1 = (b, lambda - a);
    let v2 = (lambda - d, c);
    let (x, y) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) { v1 } else { v2 };
    let r = x.hypot(y);
    if r == 0.0 {
        h[(i + 1, i)] = 0.0;
        return;
    }
    let (cs, sn) = (x / r, y / r);
    // H <- G^T H G with G = [[cs, -sn], [sn, cs]]
    for col in 0..n {
        let (u, w) = (h[(i, col)], h[(i + 1, col)]);
        h[(i, col)] = cs * u + sn * w;
        h[(i + 1, col)] = -sn * u + cs * w;
    }
    for row in 0..n {
        let (u, w) = (h[(row, i)], h[(row, i + 1)]);
        h[(row, i)] = cs * u + sn * w;
        h[(row, i + 1)] = -sn * u + cs * w;
    }
    for row in 0..n {
        let (u, w) = (q[(row, i)], q[(row, i + 1)]);
        q[(row, i)] = cs * u + sn * w;
        q[(row, i + 1)] = -sn * u + cs * w;
    }
    h[(i + 1, i)] = 0.0;
}

/// Real Schur decomposition. Fails with `ConvergenceFailure` after `40 n`
/// Francis sweeps.
pub fn real_schur(a: &Matrix, _tol: &Tolerances) -> Result<SchurForm> {
    let n = a.ensure_square()?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let (mut h, mut q) = hessenberg(a);
    let max_sweeps = 40 * n.max(1);
    let norm = h.frobenius();
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n as isize - 1;

    while hi > 0 {
        let hu = hi as usize;
        let mut l = hu;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() <= f64::EPSILON * s {
                h[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }
        if l == hu {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if l + 1 == hu {
            standardize_block(&mut h, &mut q, l);
            hi -= 2;
            since_deflation = 0;
            continue;
        }

        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(Error::ConvergenceFailure { sweeps: max_sweeps });
        }
        francis_sweep(&mut h, &mut q, l, hu, since_deflation % 10 == 0);
    }

    Ok(SchurForm { q, t: h })
}

fn francis_sweep(h: &mut Matrix, q: &mut Matrix, p: usize, hi: usize, exceptional: bool) {
    let n = h.rows();
    let (s, t) = if exceptional {
        let w = h[(hi, hi - 1)].abs() + h[(hi - 1, hi - 2)].abs();
        let a = 0.75 * w + h[(hi, hi)];
        (2.0 * a, a * a + 0.4375 * w * w)
    } else {
        (
            h[(hi - 1, hi - 1)] + h[(hi, hi)],
            h[(hi - 1, hi - 1)] * h[(hi, hi)] - h[(hi - 1, hi)] * h[(hi, hi - 1)],
        )
    };
    let mut x = h[(p, p)] * h[(p, p)] + h[(p, p + 1)] * h[(p + 1, p)] - s * h[(p, p)] + t;
    let mut y = h[(p + 1, p)] * (h[(p, p)] + h[(p + 1, p + 1)] - s);
    let mut z = h[(p + 1, p)] * h[(p + 2, p + 1)];

    for k in p..=hi - 2 {
        let (v, beta, _) = householder(&[x, y, z]);
        if beta != 0.0 {
            let idx = [k, k + 1, k + 2];
            let c0 = if k > p { k - 1 } else { p };
            reflect_rows(h, &idx, &v, beta, c0..n);
            let rmax = (k + 3).min(hi);
            reflect_cols(h, &idx, &v, beta, 0..rmax + 1);
            reflect_cols(q, &idx, &v, beta, 0..n);
            if k > p {
                h[(k + 1, k - 1)] = 0.0;
                h[(k + 2, k - 1)] = 0.0;
            }
        }
        x = h[(k + 1, k)];
        y = h[(k + 2, k)];
        if k + 3 <= hi {
            z = h[(k + 3, k)];
        }
    }

    let (v, beta, _) = householder(&[x, y]);
    if beta != 0.0 {
        let idx = [hi - 1, hi];
        reflect_rows(h, &idx, &v, beta, hi - 2..n);
        reflect_cols(h, &idx, &v, beta, 0..hi + 1);
        reflect_cols(q, &idx, &v, beta, 0..n);
        h[(hi, hi - 2)] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &Matrix) -> SchurForm {
        let s = real_schur(a, &Tolerances::default()).unwrap();
        let n = a.rows();
        assert!((&s.q.transpose() * &s.q).distance(&Matrix::identity(n)) < 1e-13);
        assert!(s.reconstruct().distance(a) <= 1e-12 * a.frobenius().max(1.0));
        for i in 0..n {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(s.t[(i, j)], 0.0);
            }
        }
        for b in s.blocks() {
            if b.size == 2 {
                assert!(block_eigenvalues(&s.t, b.start).0.im > 0.0);
            }
        }
        s
    }

    #[test]
    fn diagonal_input() {
        let s = check(&Matrix::diag(&[3.0, 1.0]));
        let mut ev: Vec<f64> = s.eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        assert_eq!(ev, vec![1.0, 3.0]);
    }

    #[test]
    fn rotation_gives_one_block() {
        let th = std::f64::consts::FRAC_PI_3;
        let r = Matrix::from_rows(&[[th.cos(), -th.sin()], [th.sin(), th.cos()]]);
        let s = check(&r);
        assert_eq!(s.blocks(), vec![DiagonalBlock { start: 0, size: 2 }]);
        let ev = s.eigenvalues();
        // roots of x^2 - x + 1
        for z in ev {
            assert!((z * z - z + 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn nilpotent() {
        let s = check(&Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]));
        assert!(s.eigenvalues().iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn companion_matrix() {
        // roots 1, 2, 3, 4
        let a = Matrix::from_rows(&[
            [10.0, -35.0, 50.0, -24.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        let s = check(&a);
        let mut ev: Vec<f64> = s.eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        for (got, want) in ev.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn mixed_blocks() {
        let a = Matrix::from_rows(&[
            [1.0, 2.0, 0.0, 3.0, -1.0],
            [-2.0, 1.0, 4.0, 0.5, 0.0],
            [0.0, 1.0, -3.0, 2.0, 1.0],
            [1.0, 0.0, 1.0, 2.0, -2.0],
            [0.3, -1.0, 0.0, 1.0, 0.5],
        ]);
        let s = check(&a);
        let sum: Complex64 = s.eigenvalues().iter().sum();
        assert!((sum.re - a.trace()).abs() < 1e-12);
        assert!(sum.im.abs() < 1e-12);
    }
}
