use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, quasi_triangular_blocks, solve, DiagonalBlock, Matrix, Tolerances};

/// Principal square root of a 2x2 block whose eigenvalues avoid `(-inf, 0]`:
/// `(B + sqrt(det B) I) / sqrt(tr B + 2 sqrt(det B))`.
fn sqrt_2x2(b: &Matrix) -> Result<Matrix> {
    let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
    let tr = b[(0, 0)] + b[(1, 1)];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let lo = 0.5 * (tr - disc.sqrt());
        if lo <= 0.0 {
            return Err(Error::NegativeAxisEigenvalue { value: Complex64::new(lo, 0.0) });
        }
    }
    if det <= 0.0 {
        return Err(Error::NegativeAxisEigenvalue { value: Complex64::new(0.5 * tr, 0.0) });
    }
    let s = det.sqrt();
    let denom = tr + 2.0 * s;
    if denom <= 0.0 {
        return Err(Error::NegativeAxisEigenvalue { value: Complex64::new(0.5 * tr, 0.0) });
    }
    Ok(b.shifted(-s).scale(1.0 / denom.sqrt()))
}

/// Solves `A X + X B = C` for small blocks through the Kronecker form.
fn sylvester_small(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<Matrix> {
    let (p, q) = (a.rows(), b.rows());
    let lhs = &kron(&Matrix::identity(q), a) + &kron(&b.transpose(), &Matrix::identity(p));
    let rhs = Matrix::from_fn(p * q, 1, |k, _| c[(k % p, k / p)]);
    let x = solve(&lhs, &rhs)?;
    Ok(Matrix::from_fn(p, q, |i, j| x[(j * p + i, 0)]))
}

/// Principal real square root of a quasi upper triangular matrix, computed
/// block by block with the triangular recurrence. The result is quasi upper
/// triangular with the same block structure.
pub fn sqrtm_real(t: &Matrix, _tol: &Tolerances) -> Result<Matrix> {
    let n = t.ensure_square()?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let blocks = quasi_triangular_blocks(t);
    let mut u = Matrix::zeros(n, n);
    let block = |m: &Matrix, bi: &DiagonalBlock, bj: &DiagonalBlock| m.submatrix(bi.start, bj.start, bi.size, bj.size);

    for bd in &blocks {
        let tii = block(t, bd, bd);
        let root = if bd.size == 1 {
            let v = tii[(0, 0)];
            if v <= 0.0 {
                return Err(Error::NegativeAxisEigenvalue { value: Complex64::new(v, 0.0) });
            }
            Matrix::scalar(1, v.sqrt())
        } else {
            sqrt_2x2(&tii)?
        };
        u.set_submatrix(bd.start, bd.start, &root);
    }

    // superdiagonals of blocks, innermost first
    for gap in 1..blocks.len() {
        for i in 0..blocks.len() - gap {
            let (bi, bj) = (&blocks[i], &blocks[i + gap]);
            let mut rhs = block(t, bi, bj);
            for bk in &blocks[i + 1..i + gap] {
                rhs = &rhs - &(&block(&u, bi, bk) * &block(&u, bk, bj));
            }
            let x = sylvester_small(&block(&u, bi, bi), &block(&u, bj, bj), &rhs)?;
            u.set_submatrix(bi.start, bj.start, &x);
        }
    }
    Ok(u)
}
