//! Rotating a 2 × 2 matrix with positive determinant until its discriminant
//! is maximal.

use logpreserve::constructions::{analyze_two_by_two, discriminant_max_check};

fn main() -> logpreserve::Result<()> {
    let (a, b, c, d) = (1.0, -2.0, 0.5, 1.5);
    let info = analyze_two_by_two(a, b, c, d)?;
    let theta = info.witness_angle();
    println!("max discriminant {:.6} at angle {theta:.6}", info.max_discriminant);
    println!("discriminant there {:.6}", info.discriminant(theta));
    println!("rotated matrix {:?}", info.rotated(theta));
    println!("grid gap {:.2e}", discriminant_max_check(a, b, c, d, 10_000)?);
    Ok(())
}
