//! Recovers `c P A P^{-1}` from a map given only as an n² × n² matrix, then
//! shows what happens for a map that is not of that form.

use logpreserve::linalg::{Matrix, Tolerances};
use logpreserve::maps::{MatrixSpaceMap, StandardForm};
use logpreserve::preserver::analyze;

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    let p = Matrix::from_rows(&[[1.0, 2.0, 0.0], [0.0, 1.0, -1.0], [1.0, 0.0, 3.0]]);
    let hidden = StandardForm::new(2.5, &p, true)?;
    let phi = MatrixSpaceMap::from_standard(&hidden, &tol)?;

    let r = analyze(&phi, &tol);
    let form = r.form.expect("standard form");
    println!("verdict {:?}", r.verdict);
    println!("c = {} (hidden {}), transposed = {}", form.c, hidden.c, form.transposed);
    println!("conjugator error {:.2e}", form.p.distance(&hidden.p));

    let swap = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
    let one_sided = MatrixSpaceMap::from_two_sided(&Matrix::identity(2), &swap, false)?;
    let r = analyze(&one_sided, &tol);
    println!("A -> A Q: {:?}, note {:?}", r.verdict, r.note);
    if let Some(w) = r.witness {
        println!("{}", w.explanation);
    }
    Ok(())
}
