//! Explicit gadgets: rotations, the shear `A_θ`, the product `B_θ = A_θ R(θ)`,
//! the rotated family `C(θ) = R(θ) M` and a Zariski density rank witness.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, PivotedQr, Tolerances};
use crate::membership::in_k;
use crate::sampling::{gaussian, rng_for};

/// Angles with `|sin θ|` below this are rejected by the shear constructions.
pub const MIN_SINE: f64 = 1e-8;

/// Trace targeted by `B_θ`; anything below `-2` gives two negative eigenvalues.
pub const B_TRACE: f64 = -3.0;

/// Counterclockwise rotation by `theta`.
pub fn rotation(theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    Matrix::from_rows(&[[c, -s], [s, c]])
}

fn shear_parameter(theta: f64) -> Result<f64> {
    let s = theta.sin();
    if !theta.is_finite() || s.abs() < MIN_SINE {
        return Err(Error::DegenerateAngle { theta });
    }
    Ok((B_TRACE - 2.0 * theta.cos()) / s)
}

/// `A_θ = [[1, b_θ], [0, 1]]` with `b_θ` chosen so that `trace(A_θ R(θ)) = -3`.
pub fn shear_a_theta(theta: f64) -> Result<Matrix> {
    let b = shear_parameter(theta)?;
    Ok(Matrix::from_rows(&[[1.0, b], [0.0, 1.0]]))
}

/// `B_θ = A_θ R(θ)`: determinant 1, trace -3, two distinct negative eigenvalues.
pub fn product_b_theta(theta: f64) -> Result<Matrix> {
    Ok(&shear_a_theta(theta)? * &rotation(theta))
}

/// Places the 2x2 `block` on rows and columns `i < j` of an `n x n` matrix
/// that is `fill · I` elsewhere.
pub fn embed_pair(block: &Matrix, n: usize, i: usize, j: usize, fill: f64) -> Result<Matrix> {
    if block.rows() != 2 || block.cols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: block.rows() });
    }
    if i >= j || j >= n {
        return Err(Error::InvalidArgument(format!("pair ({i}, {j}) invalid for n = {n}")));
    }
    let mut out = Matrix::scalar(n, fill);
    let idx = [i, j];
    for (a, &r) in idx.iter().enumerate() {
        for (b, &c) in idx.iter().enumerate() {
            out[(r, c)] = block[(a, b)];
        }
    }
    Ok(out)
}

/// `Â = A_θ ⊕ I_{n-2}`, unipotent and hence in `K*`.
pub fn embedded_witness(theta: f64, n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    embed_pair(&shear_a_theta(theta)?, n, 0, 1, 1.0)
}

/// Data of the family `C(θ) = R(θ) [[a, b], [c, d]]`, whose trace is
/// `R0 cos(θ - phase)` and whose determinant is `ad - bc` for every `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoAnalysis {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub r0: f64,
    pub phase: f64,
    pub det: f64,
    /// `max_θ (trace² - 4 det) = (a - d)² + (b + c)²`.
    pub max_discriminant: f64,
}

impl TwoByTwoAnalysis {
    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(&[[self.a, self.b], [self.c, self.d]])
    }

    pub fn rotated(&self, theta: f64) -> Matrix {
        &rotation(theta) * &self.matrix()
    }

    /// `trace(C(θ))² - 4 det`.
    pub fn discriminant(&self, theta: f64) -> f64 {
        let t = self.r0 * (theta - self.phase).cos();
        t * t - 4.0 * self.det
    }

    /// The angle in `(-π, π]` where the trace is most negative. When
    /// `max_discriminant > 0`, `C` there has two distinct negative eigenvalues.
    pub fn witness_angle(&self) -> f64 {
        let t = self.phase + PI;
        if t > PI {
            t - 2.0 * PI
        } else {
            t
        }
    }
}

pub fn analyze_two_by_two(a: f64, b: f64, c: f64, d: f64) -> Result<TwoByTwoAnalysis> {
    let det = a * d - b * c;
    if !(det > 0.0) {
        return Err(Error::NonpositiveDeterminant { det });
    }
    let (sum, skew) = (a + d, b - c);
    let (diff, sym) = (a - d, b + c);
    Ok(TwoByTwoAnalysis {
        a,
        b,
        c,
        d,
        r0: sum.hypot(skew),
        phase: skew.atan2(sum),
        det,
        max_discriminant: diff * diff + sym * sym,
    })
}

/// `|max over a uniform θ grid on [0, π) of Δ(θ) - ((a-d)² + (b+c)²)|`,
/// with `Δ` evaluated from the entries of `R(θ) M` directly.
pub fn discriminant_max_check(a: f64, b: f64, c: f64, d: f64, grid: usize) -> Result<f64> {
    if grid < 100 {
        return Err(Error::InvalidArgument(format!("grid must be at least 100, got {grid}")));
    }
    let m = Matrix::from_rows(&[[a, b], [c, d]]);
    let det = a * d - b * c;
    let best = (0..grid)
        .map(|k| {
            let theta = PI * k as f64 / grid as f64;
            let t = (&rotation(theta) * &m).trace();
            t * t - 4.0 * det
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((best - ((a - d).powi(2) + (b + c).powi(2))).abs())
}

/// Where the density witness draws its sample points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensitySource {
    /// Gaussian matrices conditioned on lying in `K`.
    K,
    /// Gaussian matrices with the last column a combination of the others,
    /// a control on which `det` vanishes.
    DeterminantVariety,
}

/// Exponent vectors in `vars` variables of total degree at most `degree`,
/// graded lexicographic order.
pub fn monomials(vars: usize, degree: usize) -> Vec<Vec<usize>> {
    fn fill(rest: usize, vars: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == vars {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=rest).rev() {
            prefix.push(e);
            fill(rest - e, vars, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=degree {
        if vars == 0 {
            if total == 0 {
                out.push(Vec::new());
            }
            continue;
        }
        fill(total, vars, &mut Vec::with_capacity(vars), &mut out);
    }
    out
}

/// Number of monomials in `vars` variables of degree at most `degree`.
pub fn monomial_count(vars: usize, degree: usize) -> usize {
    // C(vars + degree, degree)
    (1..=degree).fold(1usize, |acc, k| acc * (vars + k) / k)
}

/// Relative threshold for the full-column-rank test.
pub const DENSITY_RANK_REL: f64 = 1e-10;

const REJECTION_FACTOR: usize = 100;

/// Whether the monomials of degree `<= degree` in the `n²` entries are
/// linearly independent as functions on `samples` points drawn from
/// `source`. `true` certifies that no nonzero polynomial of that degree
/// vanishes on the sampled subset.
pub fn zariski_density_witness(
    n: usize,
    degree: usize,
    samples: usize,
    seed: u64,
    source: DensitySource,
    tol: &Tolerances,
) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let vars = n * n;
    let basis = monomials(vars, degree);
    if samples < 2 * basis.len() {
        return Err(Error::InvalidArgument(format!(
            "need at least {} samples for {} monomials, got {samples}",
            2 * basis.len(),
            basis.len()
        )));
    }
    let mut rng = rng_for(seed, 0);
    let mut points = Vec::with_capacity(samples);
    let mut attempts = 0;
    while points.len() < samples {
        if attempts >= REJECTION_FACTOR * samples {
            return Err(Error::SampleBudgetExceeded { attempts });
        }
        attempts += 1;
        let mut x = gaussian(&mut rng, n, n);
        match source {
            DensitySource::K => {
                if !in_k(&x, tol)?.in_set {
                    continue;
                }
            }
            DensitySource::DeterminantVariety => {
                let w: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let last: Vec<f64> = (0..n).map(|i| (0..n - 1).map(|j| w[j] * x[(i, j)]).sum()).collect();
                x.set_column(n - 1, &last);
            }
        }
        points.push(x);
    }
    let eval = Matrix::from_fn(samples, basis.len(), |s, k| {
        basis[k].iter().zip(points[s].as_slice()).map(|(&e, &v)| v.powi(e as i32)).product()
    });
    Ok(PivotedQr::new(&eval).relative_rank(DENSITY_RANK_REL) == basis.len())
}
