//! Weight and length bookkeeping for the dominating measure.
//!
//! Weights are geometric, `t_n = (b-1)/b^n`, so the tails have the closed
//! form `r_n = Σ_{j≥n} t_j = b^{-(n-1)}`. Lengths are `N(n) = c^n` and the
//! extraction tolerances are `ε_k = s / a^k`. The defaults `b = c = a = 2`,
//! `s = 1` give `t_n = 2^{-n}`, `N(n) = 2^n`, `ε_k = 2^{-k}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    t_base: u32,
    n_base: u32,
    eps_scale: BigRational,
    eps_base: u32,
    depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(default = "two")]
    pub t_base: u32,
    #[serde(default = "two")]
    pub n_base: u32,
    #[serde(default = "one_str")]
    pub eps_scale: String,
    #[serde(default = "two")]
    pub eps_base: u32,
    #[serde(default = "two_usize")]
    pub depth: usize,
}

fn two() -> u32 {
    2
}
fn two_usize() -> usize {
    2
}
fn one_str() -> String {
    "1".to_string()
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            t_base: 2,
            n_base: 2,
            eps_scale: one_str(),
            eps_base: 2,
            depth: 2,
        }
    }
}

impl Schedule {
    pub fn new(t_base: u32, n_base: u32, eps_scale: BigRational, eps_base: u32, depth: usize) -> Result<Self> {
        if t_base < 2 {
            return Err(Error::invalid("t_base must be at least 2"));
        }
        // N(2) = n_base^2 > 2 and N strictly increasing
        if n_base < 2 {
            return Err(Error::invalid("n_base must be at least 2"));
        }
        if eps_base < 2 || eps_scale <= BigRational::zero() {
            return Err(Error::invalid("ε_k must be positive and strictly decreasing"));
        }
        if depth == 0 {
            return Err(Error::invalid("depth must be at least 1"));
        }
        Ok(Schedule {
            t_base,
            n_base,
            eps_scale,
            eps_base,
            depth,
        })
    }

    /// `t_n = 2^{-n}`, `N(n) = 2^n`, `ε_k = 2^{-k}`.
    pub fn standard(depth: usize) -> Self {
        Self::new(2, 2, BigRational::one(), 2, depth).expect("standard schedule is valid")
    }

    pub fn from_config(c: &ScheduleConfig) -> Result<Self> {
        Self::new(c.t_base, c.n_base, parse_rational(&c.eps_scale)?, c.eps_base, c.depth)
    }

    pub fn to_config(&self) -> ScheduleConfig {
        ScheduleConfig {
            t_base: self.t_base,
            n_base: self.n_base,
            eps_scale: self.eps_scale.to_string(),
            eps_base: self.eps_base,
            depth: self.depth,
        }
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        Schedule { depth, ..self.clone() }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn t_base(&self) -> u32 {
        self.t_base
    }

    pub fn n_base(&self) -> u32 {
        self.n_base
    }

    fn inv_pow(base: u32, e: u32) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(base).pow(e))
    }

    /// Weight `t_n` (1-based).
    pub fn t(&self, n: usize) -> BigRational {
        assert!(n >= 1, "weights are indexed from 1");
        Self::inv_pow(self.t_base, n as u32) * BigInt::from(self.t_base - 1)
    }

    /// Tail `r_n = Σ_{j≥n} t_j`.
    pub fn r(&self, n: usize) -> BigRational {
        assert!(n >= 1, "tails are indexed from 1");
        Self::inv_pow(self.t_base, (n - 1) as u32)
    }

    /// Length `N(n)`.
    pub fn big_n(&self, n: usize) -> Result<u64> {
        u64::from(self.n_base)
            .checked_pow(n as u32)
            .ok_or(Error::Overflow("N(n)"))
    }

    /// Extraction tolerance `ε_k`.
    pub fn eps(&self, k: usize) -> BigRational {
        &self.eps_scale * Self::inv_pow(self.eps_base, k as u32)
    }

    /// `Σ_{n≤K} t_n = 1 - r_{K+1}` for the truncation depth `K`.
    pub fn truncated_mass(&self) -> BigRational {
        BigRational::one() - self.r(self.depth + 1)
    }

    pub fn as_f64_pair(&self, n: usize) -> Result<(f64, f64)> {
        Ok((rational::to_f64(&self.r(n)), self.big_n(n)? as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn standard_values() {
        let s = Schedule::standard(3);
        assert_eq!(s.t(1), frac(1, 2));
        assert_eq!(s.t(3), frac(1, 8));
        assert_eq!(s.r(1), frac(1, 1));
        assert_eq!(s.r(3), frac(1, 4));
        assert_eq!(s.big_n(2).unwrap(), 4);
        assert_eq!(s.eps(2), frac(1, 4));
        assert_eq!(s.truncated_mass(), frac(7, 8));
    }

    #[test]
    fn tail_identity_and_monotonicity() {
        for b in 2..6 {
            let s = Schedule::new(b, 3, frac(1, 1), 2, 5).unwrap();
            let mut sum = BigRational::zero();
            for n in 1..12 {
                assert_eq!(s.r(n) - s.r(n + 1), s.t(n));
                assert!(s.r(n + 1) < s.r(n));
                assert!(s.big_n(n + 1).unwrap() > s.big_n(n).unwrap());
                sum += s.t(n);
                assert!(sum < BigRational::one());
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Schedule::new(1, 2, frac(1, 1), 2, 2).is_err());
        assert!(Schedule::new(2, 1, frac(1, 1), 2, 2).is_err());
        assert!(Schedule::new(2, 2, frac(0, 1), 2, 2).is_err());
        assert!(Schedule::new(2, 2, frac(1, 1), 2, 0).is_err());
    }

    #[test]
    fn config_round_trip() {
        let s = Schedule::new(3, 2, frac(80, 1), 2, 2).unwrap();
        let c = s.to_config();
        assert_eq!(Schedule::from_config(&c).unwrap(), s);
        assert_eq!(s.eps(2), frac(20, 1));
    }
}
