//! Principal and paired real logarithms, checked against the exponential.

use logpreserve::functions::{expm, logm_principal, real_log_paired};
use logpreserve::linalg::{Matrix, Tolerances};

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();

    let a = Matrix::from_rows(&[[2.0, 1.0, 0.0], [-1.0, 2.0, 0.5], [0.0, 0.0, 0.3]]);
    let l = logm_principal(&a, &tol)?;
    println!("principal log:\n{:?}", l.log_matrix);
    println!("relative residual {:.2e}", l.roundtrip_residual);

    // no principal log, but a real one pairing the two -3 eigenvalues
    let b = Matrix::diag(&[-3.0, -3.0, 2.0]);
    assert!(logm_principal(&b, &tol).is_err());
    let p = real_log_paired(&b, &tol)?;
    println!("paired log ({:?}):\n{:?}", p.kind, p.log_matrix);
    println!("exp of it:\n{:?}", expm(&p.log_matrix)?);
    Ok(())
}
