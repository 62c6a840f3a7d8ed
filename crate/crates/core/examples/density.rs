//! Monomial evaluations on random elements of K have full column rank, while
//! on the determinant hypersurface they do not.

use logpreserve::constructions::{monomial_count, zariski_density_witness, DensitySource};
use logpreserve::linalg::Tolerances;

fn main() -> logpreserve::Result<()> {
    let tol = Tolerances::default();
    for (n, degree) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let samples = 2 * monomial_count(n * n, degree);
        let k = zariski_density_witness(n, degree, samples, 0, DensitySource::K, &tol)?;
        let det = zariski_density_witness(n, degree.max(n), samples.max(2 * monomial_count(n * n, n)), 0, DensitySource::DeterminantVariety, &tol)?;
        println!("n={n} degree={degree}: K full rank {k}; det = 0 full rank at degree {} {det}", degree.max(n));
    }
    Ok(())
}
