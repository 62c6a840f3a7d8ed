//! Approximating a matrix of K* with paired negative eigenvalues by matrices
//! of K.

use logpreserve::linalg::{invert, Matrix, Tolerances};
use logpreserve::membership::{approximate_from_k, in_k, in_k_star};

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    let s = Matrix::from_rows(&[[1.0, 2.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]]);
    let a = &(&s * &Matrix::diag(&[-2.0, -2.0, 1.0])) * &invert(&s, &tol)?;
    println!("in K* {}, in K {}", in_k_star(&a, &tol)?.in_set, in_k(&a, &tol)?.in_set);
    for eps in [1e-1, 1e-3, 1e-6] {
        let b = approximate_from_k(&a, eps, &tol)?;
        println!("eps {eps:.0e}: distance {:.3e}, in K {}", b.distance(&a), in_k(&b, &tol)?.in_set);
    }
    Ok(())
}
