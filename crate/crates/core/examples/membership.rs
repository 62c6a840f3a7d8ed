//! Membership in K, K* and the closure for a few hand-picked matrices.

use logpreserve::linalg::{Matrix, Tolerances};
use logpreserve::membership::{membership, SetKind};

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    let cases = [
        ("identity", Matrix::identity(2)),
        ("-I", Matrix::scalar(2, -1.0)),
        ("swap image of -I", Matrix::from_rows(&[[0.0, -1.0], [-1.0, 0.0]])),
        ("two Jordan blocks at -1", Matrix::from_rows(&[[-1.0, 1.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, -1.0, 1.0], [0.0, 0.0, 0.0, -1.0]])),
        ("one Jordan block at -1", Matrix::from_rows(&[[-1.0, 1.0], [0.0, -1.0]])),
        ("singular", Matrix::diag(&[0.0, 1.0])),
    ];
    for (name, a) in &cases {
        print!("{name:>26}:");
        for set in [SetKind::K, SetKind::KStar, SetKind::Closure] {
            print!("  {set}={}", membership(a, set, &tol)?.in_set);
        }
        println!();
    }
    let v = membership(&cases[4].1, SetKind::KStar, &tol)?;
    println!("reason for the single block: {}", v.witness.unwrap().reason);
    Ok(())
}
