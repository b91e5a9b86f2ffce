use num_rational::BigRational;

use super::ops::{power, product, ratio};
use super::FiniteSubset;
use crate::error::{Error, Result};
use crate::schedule::Schedule;

/// One step of the enveloping recursion:
/// `E = (prev^{exp})^{-1} F (prev^{exp})^{-1}`.
pub(crate) fn envelope(
    prev: &FiniteSubset,
    f: &FiniteSubset,
    exp: u64,
    cap: usize,
) -> Result<FiniteSubset> {
    let h_inv = power(prev, exp, cap)?.inverse_set()?;
    product(&product(&h_inv, f, cap)?, &h_inv, cap)
}

#[derive(Debug, Clone)]
pub struct ExtractionLevel {
    /// 1-based level `k`.
    pub k: usize,
    /// Index `n_k` into the original Følner sequence.
    pub index: u64,
    pub folner: FiniteSubset,
    pub envelope: FiniteSubset,
    /// `|E_k \ F_{n_k}| / |F_{n_k}|`
    pub ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtractionStatus {
    Certified,
    /// The search for level `level` ran out of indices (or hit the size cap)
    /// before the ratio dropped below `ε_level`. This is a budget outcome,
    /// not evidence against the existence of a subsequence.
    Budget {
        level: usize,
        best: Option<(u64, BigRational)>,
        reason: String,
    },
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub levels: Vec<ExtractionLevel>,
    pub status: ExtractionStatus,
}

impl Extraction {
    pub fn is_certified(&self) -> bool {
        self.status == ExtractionStatus::Certified
    }
}

/// Greedy subsequence extraction.
///
/// Level 1 takes `first_index`. For each later level `k` (up to
/// `schedule.depth()`), indices `n > n_{k-1}` are tried in order up to
/// `max_index`; the first with `|E_k \ F_n| / |F_n| < ε_k` is kept, where
/// `E_k = (E_{k-1}^{N(k)-2})^{-1} F_n (E_{k-1}^{N(k)-2})^{-1}`.
///
/// `folner(n)` must return symmetric sets containing the identity.
pub fn extract_subsequence<F>(
    mut folner: F,
    first_index: u64,
    schedule: &Schedule,
    max_index: u64,
    cap: usize,
) -> Result<Extraction>
where
    F: FnMut(u64) -> Result<FiniteSubset>,
{
    let f1 = folner(first_index)?;
    if !f1.is_symmetric() || !f1.contains_identity() {
        return Err(Error::invalid("first Følner set must be symmetric and contain e"));
    }
    let mut levels = vec![ExtractionLevel {
        k: 1,
        index: first_index,
        envelope: f1.clone(),
        folner: f1,
        ratio: ratio(0, 1),
    }];

    for k in 2..=schedule.depth() {
        let eps = schedule.eps(k);
        let exp = schedule.big_n(k)? - 2;
        let prev = levels.last().expect("level 1 exists");
        let mut best: Option<(u64, BigRational)> = None;
        let mut found = None;
        let mut reason = format!("no index up to {max_index} met ε_{k} = {eps}");

        for n in (prev.index + 1)..=max_index {
            let attempt = folner(n).and_then(|f| {
                let e = envelope(&prev.envelope, &f, exp, cap)?;
                Ok((f, e))
            });
            let (f, e) = match attempt {
                Ok(pair) => pair,
                Err(err @ Error::ResourceLimit { .. }) => {
                    reason = format!("index {n}: {err}");
                    break;
                }
                Err(err) => return Err(err.at_level(k)),
            };
            let r = ratio(e.difference_len(&f), f.len());
            if best.as_ref().map_or(true, |(_, b)| r < *b) {
                best = Some((n, r.clone()));
            }
            if r < eps {
                found = Some(ExtractionLevel {
                    k,
                    index: n,
                    folner: f,
                    envelope: e,
                    ratio: r,
                });
                break;
            }
        }

        match found {
            Some(level) => levels.push(level),
            None => {
                return Ok(Extraction {
                    levels,
                    status: ExtractionStatus::Budget {
                        level: k,
                        best,
                        reason,
                    },
                })
            }
        }
    }

    Ok(Extraction {
        levels,
        status: ExtractionStatus::Certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use num_traits::One;

    fn z_folner(n: u64) -> Result<FiniteSubset> {
        Ok(FiniteSubset::interval(-(n as i64), n as i64))
    }

    #[test]
    fn z_intervals_standard_schedule() {
        // E_1 = [-1,1]; H = E_1^2 = [-2,2]; E_2 = [-n-4, n+4];
        // ratio 8/(2n+1) < 1/4  <=>  n >= 16.
        let s = Schedule::standard(2);
        let ex = extract_subsequence(z_folner, 1, &s, 100, 1 << 20).unwrap();
        assert!(ex.is_certified());
        let l2 = &ex.levels[1];
        assert_eq!(l2.index, 16);
        assert_eq!(l2.envelope, FiniteSubset::interval(-20, 20));
        assert_eq!(l2.ratio, frac(8, 33));
        // |F|/|E| >= 1/(1+ε)
        let lhs = frac(l2.folner.len() as i64, l2.envelope.len() as i64);
        assert!(lhs >= (BigRational::one() + s.eps(2)).recip());
    }

    #[test]
    fn first_candidate_accepted_when_eps_is_loose() {
        let s = Schedule::new(2, 2, frac(400, 1), 2, 2).unwrap();
        let ex = extract_subsequence(z_folner, 1, &s, 2, 1 << 20).unwrap();
        assert!(ex.is_certified());
        assert_eq!(ex.levels[1].index, 2);
    }

    #[test]
    fn budget_exhaustion_reports_best() {
        let s = Schedule::standard(2);
        let ex = extract_subsequence(z_folner, 1, &s, 10, 1 << 20).unwrap();
        match ex.status {
            ExtractionStatus::Budget { level, best, .. } => {
                assert_eq!(level, 2);
                assert_eq!(best, Some((10, frac(8, 21))));
            }
            _ => panic!("expected budget status"),
        }
        assert_eq!(ex.levels.len(), 1);
    }

    #[test]
    fn cap_hit_is_a_budget_outcome() {
        let s = Schedule::standard(2);
        let ex = extract_subsequence(z_folner, 1, &s, 100, 30).unwrap();
        assert!(matches!(ex.status, ExtractionStatus::Budget { .. }));
    }

    #[test]
    fn asymmetric_start_rejected() {
        let s = Schedule::standard(2);
        let r = extract_subsequence(|_| Ok(FiniteSubset::interval(0, 3)), 1, &s, 5, 100);
        assert!(r.is_err());
    }
}
