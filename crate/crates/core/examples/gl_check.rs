//! Invertibility preservation and sampled membership preservation of a map.

use logpreserve::linalg::{Matrix, Tolerances};
use logpreserve::maps::MatrixSpaceMap;
use logpreserve::membership::SetKind;
use logpreserve::preserver::{check_gl_preservation, membership_mismatch};

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    let p = Matrix::from_rows(&[[1.0, 1.0], [0.0, 2.0]]);
    let q = Matrix::from_rows(&[[3.0, 0.0], [1.0, 1.0]]);
    let phi = MatrixSpaceMap::from_two_sided(&p, &q, false)?;
    let gl = check_gl_preservation(&phi, 100, 0, &tol)?;
    println!("A -> P A Q preserves invertibility: {}", gl.preserved);
    match membership_mismatch(&phi, SetKind::KStar, 1000, 0, &tol)? {
        Some(a) => println!("but not K*: {a:?}"),
        None => println!("no K* mismatch among samples"),
    }

    // bijective, but diag(1, -2) maps to diag(0, -3)
    let shifted = MatrixSpaceMap::from_fn(2, |e| e + &Matrix::scalar(2, e.trace()))?;
    let gl = check_gl_preservation(&shifted, 100, 0, &tol)?;
    println!("A -> A + tr(A) I preserves invertibility: {}, witness {:?}", gl.preserved, gl.witness.map(|w| w.direction));
    Ok(())
}
