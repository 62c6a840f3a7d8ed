//! Witness search against non-standard two-sided maps.

use logpreserve::linalg::Tolerances;
use logpreserve::membership::SetKind;
use logpreserve::preserver::{falsify_preservation, DEFAULT_BUDGET};
use logpreserve::sampling::{nonstandard_two_sided, rng_for};

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    for trial in 0..5 {
        let n = 2 + trial as usize % 3;
        let phi = nonstandard_two_sided(&mut rng_for(11, trial), n);
        match falsify_preservation(&phi, SetKind::KStar, DEFAULT_BUDGET, trial, &tol)? {
            Some(w) => println!("n={n}: {}\n  A = {:?}", w.explanation, w.matrix),
            None => println!("n={n}: no witness within {DEFAULT_BUDGET} candidates"),
        }
    }
    Ok(())
}
