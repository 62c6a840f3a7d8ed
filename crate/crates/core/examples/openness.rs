//! Radii of balls around a matrix in K that stay inside K.

use logpreserve::linalg::{Matrix, Tolerances};
use logpreserve::membership::{in_k, openness_radius, perturbation_radius};
use logpreserve::sampling::{gaussian, rng_for};

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    let a = Matrix::from_rows(&[[-0.9, 0.4, 1.0], [-0.3, -0.9, 0.0], [0.0, 0.0, 0.2]]);
    println!("in K: {}", in_k(&a, &tol)?.in_set);
    println!("spectral radius to the negative axis {:.4}", openness_radius(&a, &tol)?);
    let eta = perturbation_radius(&a, &tol)?;
    println!("certified Frobenius radius {eta:.4}");

    let mut rng = rng_for(0, 0);
    let mut kept = 0;
    for _ in 0..1000 {
        let e = gaussian(&mut rng, 3, 3);
        let b = &a + &e.scale(0.99 * eta / e.frobenius());
        kept += usize::from(in_k(&b, &tol)?.in_set);
    }
    println!("{kept}/1000 perturbations on the sphere of radius 0.99 eta stay in K");
    Ok(())
}
