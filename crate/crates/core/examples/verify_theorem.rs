//! Both directions of the preserver characterization on random maps.

use logpreserve::linalg::Tolerances;
use logpreserve::preserver::verify_theorem;

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    for n in 1..=5 {
        let r = verify_theorem(n, 20, 0, &tol)?;
        println!(
            "n={n}: standard {}/{}, non-standard refuted {}/{}, max scale err {:.1e}, max conjugator err {:.1e}",
            r.standard_confirmed, r.trials, r.nonstandard_refuted, r.trials, r.max_scale_error, r.max_conjugator_error
        );
    }
    Ok(())
}
