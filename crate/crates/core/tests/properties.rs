mod common;

use common::*;
use localizer::eigen::{eigenvalues_hermitian, smallest_singular_value};
use localizer::pseudospectra::{clifford_pseudospectrum, quadratic_pseudospectrum, Evaluator};
use localizer::{ComplexMatrix, C64};
use proptest::prelude::*;
use rand::Rng;

fn complex_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng(seed);
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smallest_singular_value_is_one_lipschitz(n in 1usize..7, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = complex_matrix(n, s1);
        let b = complex_matrix(n, s2);
        let diff = &a - &b;
        let gap = (smallest_singular_value(&a) - smallest_singular_value(&b)).abs();
        prop_assert!(gap <= localizer::eigen::operator_norm(&diff) + 1e-10);
    }

    #[test]
    fn smallest_singular_value_is_submultiplicative(n in 1usize..7, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = complex_matrix(n, s1);
        let b = complex_matrix(n, s2);
        let lhs = smallest_singular_value(&(&a * &b));
        prop_assert!(lhs >= smallest_singular_value(&a) * smallest_singular_value(&b) - 1e-10);
    }

    #[test]
    fn hermitian_smallest_singular_value_is_smallest_absolute_eigenvalue(n in 1usize..9, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let h = random_hermitian(&mut rng, n, 1.0);
        let eig_min = eigenvalues_hermitian(&h).iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
        prop_assert!((smallest_singular_value(h.as_matrix()) - eig_min).abs() <= 1e-10);
    }

    #[test]
    fn banded_evaluator_agrees_with_dense_localizer(d in 1usize..5, n in 1usize..6, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = random_tuple(&mut rng, d, n, 1.0);
        let lambda = random_vector(&mut rng, d, 2.0);
        let ev = Evaluator::new(&a).unwrap();
        prop_assert!((ev.mu_c(&lambda) - clifford_pseudospectrum(&a, &lambda).unwrap()).abs() <= 1e-10);
        prop_assert!((ev.mu_q(&lambda) - quadratic_pseudospectrum(&a, &lambda).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn pseudospectra_are_nonnegative_and_close(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = random_tuple(&mut rng, 3, 4, 1.0);
        let lambda = random_vector(&mut rng, 3, 2.0);
        let ev = Evaluator::new(&a).unwrap();
        let (c, q) = (ev.mu_c(&lambda), ev.mu_q(&lambda));
        prop_assert!(c >= 0.0 && q >= 0.0);
        prop_assert!((c * c - q * q).abs() <= localizer::pseudospectra::commutator_bound(&a) + 1e-9);
    }
}
