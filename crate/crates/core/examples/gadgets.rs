//! The shear `A_θ`, the product `B_θ = A_θ R(θ)` and its embedding in 4 × 4.

use std::f64::consts::PI;

use logpreserve::constructions::{embedded_witness, product_b_theta, rotation, shear_a_theta};
use logpreserve::linalg::{determinant, eigenvalues, Matrix, Tolerances};
use logpreserve::membership::in_k_star;

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    for theta in [PI / 6.0, PI / 2.0, 2.0 * PI / 3.0] {
        let a = shear_a_theta(theta)?;
        let b = product_b_theta(theta)?;
        let ev = eigenvalues(&b, &tol)?;
        println!(
            "theta {theta:.4}: A in K* {}, tr B {:.3}, det B {:.3}, eigenvalues {:?}",
            in_k_star(&a, &tol)?.in_set,
            b.trace(),
            determinant(&b)?,
            ev.values.iter().map(|z| z.re).collect::<Vec<_>>()
        );
        let hat = embedded_witness(theta, 4)?;
        let m = rotation(theta).direct_sum(&Matrix::identity(2));
        println!("  embedded in K* {}, times R(theta)+I in K* {}", in_k_star(&hat, &tol)?.in_set, in_k_star(&(&hat * &m), &tol)?.in_set);
    }
    Ok(())
}
