//! Dense real linear algebra: the matrix type, factorizations, the real
//! Schur form and eigenvalue spectra.

mod decomp;
mod matrix;
mod schur;
mod spectrum;

use serde::{Deserialize, Serialize};

pub use decomp::{determinant, invert, null_space, numerical_rank, range_basis, solve, Lu, PivotedQr};
pub use matrix::{kron, Matrix};
pub use schur::{quasi_triangular_blocks, real_schur, DiagonalBlock, SchurForm};
pub use spectrum::{eigenvalues, matching_distance, Spectrum};


/// Relative tolerances shared by every numerical decision in the crate.
///
/// All of them are scaled by the Frobenius norm of the matrix under study,
/// except for the zero matrix where an absolute floor of `1e-14` applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Radius for treating eigenvalues as one cluster.
    pub eig_cluster: f64,
    /// Pivot threshold for numerical rank.
    pub rank_rel: f64,
    /// Acceptable residual for reconstructions and certificates.
    pub residual_rel: f64,
    /// Imaginary parts below this are treated as zero.
    pub imag_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eig_cluster: 1e-8, rank_rel: 1e-10, residual_rel: 1e-9, imag_zero: 1e-8 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("eig_cluster", self.eig_cluster),
            ("rank_rel", self.rank_rel),
            ("residual_rel", self.residual_rel),
            ("imag_zero", self.imag_zero),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(crate::Error::InvalidArgument(format!("tolerance {name} = {v} is outside (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Reference magnitude for relative tolerances: `||a||_F`, or `1e-14` for
/// the zero matrix.
pub fn reference_scale(a: &Matrix) -> f64 {
    let f = a.frobenius();
    if f == 0.0 {
        1e-14
    } else {
        f
    }
}
