//! Seeded random observables for dominance, convergence and Kadison runs.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::observable::{Observable, SymMatrix};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `cases` positive functions with values in `{0, 1/8, …, 1}`. The first
/// two cases are the indicator of state 0 and the constant 1.
pub fn function_battery(dim: usize, cases: usize, seed: u64) -> Vec<Observable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases)
        .map(|i| match i {
            0 => Observable::indicator(dim, &[0]).expect("state 0 exists"),
            1 => Observable::constant(dim, q(1, 1)),
            _ => {
                let sparse = rng.gen_bool(0.5);
                Observable::Function(
                    (0..dim)
                        .map(|_| {
                            if sparse && rng.gen_bool(0.7) {
                                q(0, 1)
                            } else {
                                q(rng.gen_range(0..=8), 8)
                            }
                        })
                        .collect(),
                )
            }
        })
        .collect()
}

/// Random symmetric matrix with entries in `{−4, …, 4}/4`.
pub fn random_symmetric<R: Rng>(rng: &mut R, dim: usize) -> SymMatrix {
    let mut upper = vec![vec![0i64; dim]; dim];
    for (i, row) in upper.iter_mut().enumerate() {
        for v in row.iter_mut().skip(i) {
            *v = rng.gen_range(-4..=4);
        }
    }
    SymMatrix::from_fn(dim, |i, j| q(upper[i.min(j)][i.max(j)], 4)).expect("symmetric by construction")
}

/// `cases` PSD matrices `B Bᵀ` with `B` of rank at most `dim`.
pub fn psd_battery(dim: usize, cases: usize, seed: u64) -> Vec<Observable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases)
        .map(|_| {
            let rank = rng.gen_range(1..=dim);
            let b: Vec<Vec<i64>> = (0..dim).map(|_| (0..rank).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let m = SymMatrix::from_fn(dim, |i, j| q((0..rank).map(|l| b[i][l] * b[j][l]).sum(), 9))
                .expect("Gram matrices are symmetric");
            Observable::Matrix(m)
        })
        .collect()
}

/// `cases` symmetric, not necessarily positive, matrices.
pub fn symmetric_battery(dim: usize, cases: usize, seed: u64) -> Vec<Observable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases).map(|_| Observable::Matrix(random_symmetric(&mut rng, dim))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batteries_are_positive_and_seeded() {
        let f = function_battery(8, 50, 7);
        assert!(f.iter().all(Observable::is_positive));
        assert_eq!(f, function_battery(8, 50, 7));
        assert_ne!(f, function_battery(8, 50, 8));
        assert!(psd_battery(4, 50, 1).iter().all(Observable::is_positive));
        assert_eq!(symmetric_battery(3, 5, 2).len(), 5);
    }
}
