use proptest::prelude::*;
use rand::Rng;

use logpreserve::functions::expm;
use logpreserve::linalg::{invert, Matrix, Tolerances};
use logpreserve::membership::{
    approximate_from_k, in_closure, in_k, in_k_star, jordan_profile, openness_radius, perturbation_radius,
};
use logpreserve::sampling::{conditioned, exp_of_small, gaussian, real_jordan, rng_for, BlockSpec};

fn similar(s: &Matrix, j: &Matrix) -> Matrix {
    &(s * j) * &invert(s, &Tolerances::default()).unwrap()
}

/// Random sizes of Jordan blocks for one eigenvalue, total at most `cap`.
fn block_sizes<R: Rng>(rng: &mut R, cap: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut used = 0;
    while used < cap && (sizes.is_empty() || rng.gen_bool(0.6)) {
        let s = rng.gen_range(1..=(cap - used).min(3));
        sizes.push(s);
        used += s;
    }
    sizes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn parity_rule_on_constructed_forms(seed in any::<u64>()) {
        let tol = Tolerances::default();
        let mut rng = rng_for(seed, 0);
        let sizes = block_sizes(&mut rng, 6);
        let mut blocks: Vec<BlockSpec> = sizes.iter().map(|&s| BlockSpec::real(-1.5, s)).collect();
        blocks.push(BlockSpec::real(2.0, 1));
        let truth = sizes.iter().all(|s| sizes.iter().filter(|t| *t == s).count() % 2 == 0);
        let a = similar(&conditioned(&mut rng, real_jordan(&blocks).rows(), 20.0), &real_jordan(&blocks));
        prop_assert_eq!(in_k_star(&a, &tol).unwrap().in_set, truth);
        prop_assert!(!in_k(&a, &tol).unwrap().in_set);

        let profile = jordan_profile(&a, -1.5, &tol).unwrap();
        for (&size, &count) in &profile.block_counts {
            prop_assert_eq!(count, sizes.iter().filter(|&&s| s == size).count());
        }
        prop_assert_eq!(profile.algebraic_multiplicity(), sizes.iter().sum::<usize>());
        prop_assert_eq!(profile.geometric_multiplicity(), sizes.len());
        prop_assert_eq!(in_closure(&a, &tol).unwrap().in_set, sizes.len() % 2 == 0);
    }

    #[test]
    fn sets_are_nested(seed in any::<u64>(), n in 1usize..=6) {
        let tol = Tolerances::default();
        let mut rng = rng_for(seed, 0);
        let a = gaussian(&mut rng, n, n);
        let k = in_k(&a, &tol).unwrap().in_set;
        let ks = in_k_star(&a, &tol).unwrap().in_set;
        let cl = in_closure(&a, &tol).unwrap().in_set;
        prop_assert!(!k || ks);
        prop_assert!(!ks || cl);
    }

    #[test]
    fn exponentials_lie_in_k_star(seed in any::<u64>(), n in 1usize..=6, norm in 0.1f64..8.0) {
        let tol = Tolerances::default();
        let g = gaussian(&mut rng_for(seed, 0), n, n);
        let a = expm(&g.scale(norm / g.frobenius())).unwrap();
        prop_assert!(in_k_star(&a, &tol).unwrap().in_set);
    }

    #[test]
    fn membership_is_similarity_invariant(seed in any::<u64>(), n in 1usize..=6) {
        let tol = Tolerances::default();
        let mut rng = rng_for(seed, 0);
        let a = gaussian(&mut rng, n, n);
        let b = similar(&conditioned(&mut rng, n, 10.0), &a);
        prop_assert_eq!(in_k(&a, &tol).unwrap().in_set, in_k(&b, &tol).unwrap().in_set);
    }

    #[test]
    fn squares_of_invertible_matrices_are_in_k_star(seed in any::<u64>(), n in 1usize..=6) {
        // every real square of an invertible matrix has a real logarithm
        let tol = Tolerances::default();
        let b = conditioned(&mut rng_for(seed, 0), n, 10.0);
        prop_assert!(in_k_star(&(&b * &b), &tol).unwrap().in_set);
    }

    #[test]
    fn perturbations_inside_radius_stay_in_k(seed in any::<u64>(), n in 1usize..=5, t in 0.0f64..1.0) {
        let tol = Tolerances::default();
        let mut rng = rng_for(seed, 0);
        let a = exp_of_small(&mut rng, n, 3.0);
        let eta = perturbation_radius(&a, &tol).unwrap();
        prop_assert!(eta > 0.0);
        prop_assert!(openness_radius(&a, &tol).unwrap() > 0.0);
        let e = gaussian(&mut rng, n, n);
        let b = &a + &e.scale(t * eta / e.frobenius());
        prop_assert!(in_k(&b, &tol).unwrap().in_set);
    }

    #[test]
    fn approximation_from_k_is_close(seed in any::<u64>(), n in 2usize..=5, eps_exp in 1i32..=5) {
        let tol = Tolerances::default();
        let mut rng = rng_for(seed, 0);
        let mu: f64 = -rng.gen_range(0.5..2.0);
        let mut d = Matrix::scalar(2, mu);
        if n > 2 {
            d = d.direct_sum(&Matrix::diag(&vec![1.5; n - 2]));
        }
        let a = similar(&conditioned(&mut rng, n, 5.0), &d);
        let eps = 10f64.powi(-eps_exp);
        let b = approximate_from_k(&a, eps, &tol).unwrap();
        prop_assert!(b.distance(&a) <= eps);
        prop_assert!(in_k(&b, &tol).unwrap().in_set);
    }
}

#[test]
fn openness_radius_on_diagonal() {
    let tol = Tolerances::default();
    let r = openness_radius(&Matrix::diag(&[1.0, 4.0]), &tol).unwrap();
    assert!((r - 0.5).abs() < 1e-12);
    assert!(openness_radius(&Matrix::diag(&[-1.0, 4.0]), &tol).is_err());
}

#[test]
fn approximation_rejects_matrices_outside_k_star() {
    let tol = Tolerances::default();
    assert!(approximate_from_k(&Matrix::diag(&[-1.0, 2.0]), 0.1, &tol).is_err());
}
