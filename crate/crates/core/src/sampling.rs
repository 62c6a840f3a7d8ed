//! Random matrices with controlled structure.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::functions::expm;
use crate::linalg::Matrix;
use crate::maps::{MatrixSpaceMap, StandardForm};

/// Deterministic generator for trial `stream` of a run seeded with `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Orthogonal matrix from Gram-Schmidt (applied twice) on Gaussian columns.
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let g = gaussian(rng, n, n);
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(q).for_each(|(x, y)| *x -= d * y);
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
        if ok {
            return Matrix::from_columns(n, &cols);
        }
    }
}

/// `U diag(σ) V^T` with `log σ` uniform on `[0, ln max_cond)`, so the
/// 2-norm condition number is below `max_cond`.
pub fn conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> Matrix {
    let u = orthogonal(rng, n);
    let v = orthogonal(rng, n);
    let top = max_cond.ln();
    let sigma: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..top).exp()).collect();
    &(&u * &Matrix::diag(&sigma)) * &v.transpose()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockEigen {
    Real(f64),
    /// The pair `re ± i im`, `im > 0`.
    Complex { re: f64, im: f64 },
}

/// One real Jordan block: size counts Jordan chain length, so a complex
/// block occupies `2 * size` rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSpec {
    pub eigen: BlockEigen,
    pub size: usize,
}

impl BlockSpec {
    pub fn real(mu: f64, size: usize) -> Self {
        Self { eigen: BlockEigen::Real(mu), size }
    }

    pub fn complex(re: f64, im: f64, size: usize) -> Self {
        Self { eigen: BlockEigen::Complex { re, im }, size }
    }

    pub fn dim(&self) -> usize {
        match self.eigen {
            BlockEigen::Real(_) => self.size,
            BlockEigen::Complex { .. } => 2 * self.size,
        }
    }
}

/// Real Jordan form with the given blocks along the diagonal.
pub fn real_jordan(blocks: &[BlockSpec]) -> Matrix {
    let n = blocks.iter().map(BlockSpec::dim).sum();
    let mut j = Matrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        match b.eigen {
            BlockEigen::Real(mu) => {
                for k in 0..b.size {
                    j[(at + k, at + k)] = mu;
                    if k + 1 < b.size {
                        j[(at + k, at + k + 1)] = 1.0;
                    }
                }
            }
            BlockEigen::Complex { re, im } => {
                for k in 0..b.size {
                    let p = at + 2 * k;
                    j.set_submatrix(p, p, &Matrix::from_rows(&[[re, -im], [im, re]]));
                    if k + 1 < b.size {
                        j.set_submatrix(p, p + 2, &Matrix::identity(2));
                    }
                }
            }
        }
        at += b.dim();
    }
    j
}

/// `exp(G)` for a Gaussian `G` rescaled to Frobenius norm below `max_norm`.
/// With `max_norm < π` the result lies in `K`.
pub fn exp_of_small<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> Matrix {
    let g = gaussian(rng, n, n);
    let s = rng.gen_range(0.05..1.0) * max_norm / g.frobenius().max(f64::MIN_POSITIVE);
    expm(&g.scale(s)).expect("bounded norm")
}

/// `S (-r I_2 ⊕ D) S^{-1}` with `r > 0`, `D` positive diagonal and `S`
/// well conditioned: in `K*` but not in `K`.
pub fn negative_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let r = rng.gen_range(0.2..3.0);
    let mut d = vec![-r, -r];
    d.extend((2..n).map(|_| rng.gen_range(0.2..3.0)));
    let s = conditioned(rng, n, 10.0);
    let s_inv = crate::linalg::invert(&s, &Default::default()).expect("well conditioned");
    &(&s * &Matrix::diag(&d)) * &s_inv
}

/// A random element of `K*`, mixing exponentials of small and moderate
/// generators with conjugated negative pairs.
pub fn k_star_sample<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    match rng.gen_range(0..3) {
        0 => exp_of_small(rng, n, 3.0),
        1 => exp_of_small(rng, n, 8.0),
        _ if n >= 2 => negative_pair(rng, n),
        _ => exp_of_small(rng, n, 3.0),
    }
}

/// Scale log-uniform on `[0.1, 10]`, conjugator with condition number below
/// `max_cond`, fair coin for the transpose.
pub fn standard_form<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> StandardForm {
    let c = rng.gen_range(0.1f64.ln()..10f64.ln()).exp();
    let p = conditioned(rng, n, max_cond);
    StandardForm::new(c, &p, rng.gen_bool(0.5)).expect("positive scale and nonzero conjugator")
}

/// `A ↦ P A Q` (or with `A^T`) for Gaussian `P`, `Q` whose product `QP` is
/// not within `0.1` (relative) of a scalar matrix.
pub fn nonstandard_two_sided<R: Rng + ?Sized>(rng: &mut R, n: usize) -> MatrixSpaceMap {
    loop {
        let p = gaussian(rng, n, n);
        let q = gaussian(rng, n, n);
        let m = &q * &p;
        let off = m.shifted(m.trace() / n as f64).frobenius();
        if n > 1 && off > 0.1 * m.frobenius() {
            return MatrixSpaceMap::from_two_sided(&p, &q, rng.gen_bool(0.5)).expect("square factors");
        }
        if n == 1 {
            return MatrixSpaceMap::from_two_sided(&p, &q.scale(-q[(0, 0)].signum() * p[(0, 0)].signum()), false)
                .expect("square factors");
        }
    }
}
