//! Positive semidefiniteness by symmetric pivoted LDLᵀ elimination.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::observable::SymMatrix;

/// Outcome of the PSD test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdCertificate {
    pub psd: bool,
    /// Smallest pivot met during elimination. Zero when a zero block ends
    /// the elimination; the offending value when the test fails.
    pub min_pivot: BigRational,
}

/// Exact test. At each step the largest remaining diagonal entry is the
/// pivot; a negative diagonal, or a zero diagonal with a nonzero entry in
/// its row, refutes PSD.
pub fn psd_exact(m: &SymMatrix) -> PsdCertificate {
    let n = m.dim();
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut min_pivot: Option<BigRational> = None;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[perm[i]][perm[i]].cmp(&a[perm[j]][perm[j]]).then(j.cmp(&i))).expect("k < n");
        perm.swap(k, p);
        let pk = perm[k];
        let pivot = a[pk][pk].clone();
        if pivot.is_negative() {
            return PsdCertificate { psd: false, min_pivot: pivot };
        }
        if pivot.is_zero() {
            // every remaining diagonal is ≤ 0; PSD iff the block vanishes
            for &i in &perm[k..] {
                for &j in &perm[k..] {
                    if !a[i][j].is_zero() {
                        let witness = if i == j { a[i][j].clone() } else { -a[i][j].abs() };
                        return PsdCertificate { psd: false, min_pivot: witness };
                    }
                }
            }
            return PsdCertificate { psd: true, min_pivot: BigRational::zero() };
        }
        for ii in (k + 1)..n {
            let i = perm[ii];
            if a[i][pk].is_zero() {
                continue;
            }
            let factor = &a[i][pk] / &pivot;
            for jj in (k + 1)..n {
                let j = perm[jj];
                let delta = &factor * &a[pk][j];
                a[i][j] -= delta;
            }
        }
        min_pivot = Some(match min_pivot {
            Some(mp) if mp <= pivot => mp,
            _ => pivot,
        });
    }
    PsdCertificate { psd: true, min_pivot: min_pivot.unwrap_or_else(BigRational::zero) }
}

/// Float fallback with pivot tolerance `tol`: pivots in `(−tol, tol)` count
/// as zero. Returns `(psd, min_pivot)`.
pub fn psd_f64(m: &[f64], n: usize, tol: f64) -> (bool, f64) {
    assert_eq!(m.len(), n * n, "matrix must be n×n");
    let mut a = m.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[perm[i] * n + perm[i]].total_cmp(&a[perm[j] * n + perm[j]]))
            .expect("k < n");
        perm.swap(k, p);
        let pk = perm[k];
        let pivot = a[pk * n + pk];
        min_pivot = min_pivot.min(pivot);
        if pivot < -tol {
            return (false, pivot);
        }
        if pivot < tol {
            let off = perm[k..]
                .iter()
                .flat_map(|&i| perm[k..].iter().map(move |&j| (i, j)))
                .map(|(i, j)| a[i * n + j].abs())
                .fold(0.0, f64::max);
            return (off < tol.sqrt(), min_pivot.min(0.0));
        }
        for ii in (k + 1)..n {
            let i = perm[ii];
            let factor = a[i * n + pk] / pivot;
            for jj in (k + 1)..n {
                let j = perm[jj];
                a[i * n + j] -= factor * a[pk * n + j];
            }
        }
    }
    (true, if n == 0 { 0.0 } else { min_pivot })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn mat(rows: &[&[i64]]) -> SymMatrix {
        let n = rows.len();
        SymMatrix::from_fn(n, |i, j| frac(rows[i][j], 1)).unwrap()
    }

    #[test]
    fn small_cases() {
        assert!(psd_exact(&mat(&[&[1, 0], &[0, 0]])).psd);
        assert!(psd_exact(&mat(&[&[2, 1], &[1, 2]])).psd);
        assert!(!psd_exact(&mat(&[&[1, 2], &[2, 1]])).psd);
        assert!(!psd_exact(&mat(&[&[0, 1], &[1, 0]])).psd);
        assert!(!psd_exact(&mat(&[&[-1, 0], &[0, 3]])).psd);
        let c = psd_exact(&mat(&[&[4, 2], &[2, 2]]));
        assert!(c.psd);
        assert_eq!(c.min_pivot, frac(1, 1));
        // rank one: second pivot vanishes
        let r1 = psd_exact(&mat(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]));
        assert!(r1.psd);
        assert_eq!(r1.min_pivot, frac(0, 1));
    }

    #[test]
    fn float_fallback_agrees() {
        let (ok, _) = psd_f64(&[2.0, 1.0, 1.0, 2.0], 2, 1e-10);
        assert!(ok);
        let (ok, _) = psd_f64(&[1.0, 2.0, 2.0, 1.0], 2, 1e-10);
        assert!(!ok);
        let (ok, mp) = psd_f64(&[1.0, 1.0, 1.0, 1.0], 2, 1e-10);
        assert!(ok && mp.abs() < 1e-10);
    }
}
