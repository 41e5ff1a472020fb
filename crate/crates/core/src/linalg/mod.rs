//! Exact dense linear algebra over prime fields and the rationals.

mod field;
mod matrix;

pub use field::{
    to_primitive_integers, Field, PrimeField, Rationals, PRIMES, RATIONAL_SAMPLE_BOUND,
};
pub(crate) use matrix::det_in_place;
pub use matrix::{EchelonBasis, Matrix};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform random matrix, optionally with an all-ones first column.
pub fn sample_generic_matrix<F: Field>(
    field: F,
    rows: usize,
    cols: usize,
    seed: u64,
    first_column_ones: bool,
) -> Matrix<F> {
    let mut rng = trial_rng(seed, 0);
    let mut m = Matrix::random(field, rows, cols, &mut rng);
    if first_column_ones && cols > 0 {
        let one = m.field().one();
        for r in 0..rows {
            m.set(r, 0, one.clone());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_column_forced() {
        let m = sample_generic_matrix(PrimeField::default(), 3, 3, 1, true);
        assert_eq!(m.column(0), vec![1, 1, 1]);
    }

    #[test]
    fn deterministic_in_seed() {
        let f = PrimeField::default();
        assert_eq!(
            sample_generic_matrix(f, 4, 5, 9, false),
            sample_generic_matrix(f, 4, 5, 9, false)
        );
        assert_ne!(
            sample_generic_matrix(f, 4, 5, 9, false),
            sample_generic_matrix(f, 4, 5, 10, false)
        );
    }

    #[test]
    fn nonsingular_over_many_seeds() {
        // failure probability per sample is at most n/p; over a small prime
        // the bound is visible, over the default prime nothing fails
        let f = PrimeField::default();
        for seed in 0..200 {
            assert_eq!(
                sample_generic_matrix(f, 8, 8, seed, true).rank(),
                8,
                "seed {seed}"
            );
        }
        let small = PrimeField::new(101);
        let singular = (0..400)
            .filter(|&s| sample_generic_matrix(small, 8, 8, s, true).rank() < 8)
            .count();
        // Schwartz-Zippel: P(singular) <= 7/101 per draw
        assert!(singular as f64 / 400.0 <= 7.0 / 101.0 + 0.03, "{singular}");
    }
}
