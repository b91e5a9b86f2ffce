//! Growth schedules for Følner indices and the closed-form counts used to
//! check them where enumeration is out of reach.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::symbolic::SymbolicSize;
use crate::error::{Error, Result};

/// Largest `n` accepted by [`poly_growth_schedule`]; `m(n)` is always
/// materialized and has about `n²` bits.
pub const POLY_GROWTH_MAX_N: u64 = 4096;

/// `l(n) = 2^{n²}` and `m(n) = l(n) + 2(2^n − 2) m(n−1)`, `m(1) = l(1)`.
pub fn poly_growth_schedule(n: u64) -> Result<(SymbolicSize, SymbolicSize)> {
    if n == 0 || n > POLY_GROWTH_MAX_N {
        return Err(Error::invalid(format!("poly growth index must be in 1..={POLY_GROWTH_MAX_N}")));
    }
    let l = |k: u64| BigUint::one() << (k * k);
    let mut m = l(1);
    for k in 2..=n {
        let factor = (BigUint::one() << k) - 2u32;
        m = l(k) + factor * 2u32 * m;
    }
    Ok((SymbolicSize::pow(BigUint::one(), 2, SymbolicSize::from(n * n)), SymbolicSize::Int(m)))
}

/// Exact terms of the growth estimate for `l(n) = 2^{n²}`, `n ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyGrowthBound {
    /// `2(2ⁿ−2) m(n−1) / l(n)`
    pub lhs: BigRational,
    /// `2(2ⁿ−2)(2^{−2n+1} + (n−2) 2^{−3n+2})`
    pub stated: BigRational,
    /// `2(2ⁿ−2)(2^{−2n+1} + (n−2) 2^{−3n+4})`, from the exact product
    /// `Π_{k=j}^{n−2} 2(2^{k+1}−2) = 2^{(n²+n−j²−3j−2)/2} Π_{k=j}^{n−2}(1 − 2^{−k})`.
    pub corrected: BigRational,
}

pub fn poly_growth_ratio_bound(n: u64) -> Result<PolyGrowthBound> {
    if n < 2 {
        return Err(Error::invalid("ratio bound needs n ≥ 2"));
    }
    let (_, m_prev) = poly_growth_schedule(n - 1)?;
    let m_prev = m_prev.as_int().expect("materialized").clone();
    let l_n = BigUint::one() << (n * n);
    let factor = BigRational::from_integer((((BigUint::one() << n) - 2u32) * 2u32).into());
    let pow2_neg = |e: u64| BigRational::new(1.into(), (BigUint::one() << e).into());
    let n_minus_2 = BigRational::from_integer((n - 2).into());
    let head = pow2_neg(2 * n - 1);
    Ok(PolyGrowthBound {
        lhs: &factor * BigRational::new(m_prev.into(), l_n.into()),
        stated: &factor * (&head + &n_minus_2 * pow2_neg(3 * n - 2)),
        corrected: &factor * (&head + &n_minus_2 * pow2_neg(3 * n - 4)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LamplighterSchedule {
    /// `l(1) = 1`, `l(n) = 3^{l(n−1)}`.
    Tempered,
    /// `l(1) = 1`, `l(n) = 17^{2ⁿ l(n−1)}`.
    Dominance,
}

pub fn lamplighter_schedule(kind: LamplighterSchedule, n: u64) -> Result<SymbolicSize> {
    if n == 0 {
        return Err(Error::invalid("schedule index starts at 1"));
    }
    let mut l = SymbolicSize::from(1u64);
    for k in 2..=n {
        l = match kind {
            LamplighterSchedule::Tempered => SymbolicSize::pow(BigUint::one(), 3, l),
            LamplighterSchedule::Dominance => {
                SymbolicSize::pow(BigUint::one(), 17, l.scale(&(BigUint::one() << k)))
            }
        };
    }
    Ok(l)
}

/// `|F̃_n| = (n+1) 2^{n+1}` for `F̃_n = {(t, K) : t ∈ [0,n] ⊇ K}`.
pub fn right_folner_size(n: u64) -> BigUint {
    BigUint::from(n + 1) << (n + 1)
}

/// `|F_n| = 2ⁿ (n² + 4n + 2)` for `F_n = F̃_n⁻¹ F̃_n`.
pub fn biinvariant_folner_size(n: u64) -> BigUint {
    BigUint::from(n * n + 4 * n + 2) << n
}

/// `|F̃_N F̃_m⁻¹| = Σ_{u=−m}^{N} 2^{|[0,N] ∪ [u,u+m]|}`.
///
/// An element of the product is `(u, S)` with `u ∈ [−m, N]` and `S` any
/// subset of `[0,N] ∪ [u,u+m]`.
pub fn right_product_size(big: u64, small: u64) -> BigUint {
    let (n, m) = (big as i128, small as i128);
    let mut total = BigUint::zero();
    for u in -m..=n {
        let overlap = (n.min(u + m) - u.max(0) + 1).max(0);
        let width = (n + 1) + (m + 1) - overlap;
        total += BigUint::one() << (width as u64);
    }
    total
}

/// Right temperedness constant `max_n |⋃_{i<n} F̃_{l_n} F̃_{l_i}⁻¹| / |F̃_{l_n}|`
/// of the prefix `F̃_{l_1}, F̃_{l_2}, …` from the closed form. The sets are
/// nested, so each union is its last term.
pub fn right_tempered_constant(indices: &[u64]) -> Result<BigRational> {
    if indices.len() < 2 {
        return Err(Error::invalid("temperedness needs at least two sets"));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("indices must be strictly increasing"));
    }
    let best = indices
        .windows(2)
        .map(|w| {
            BigRational::new(right_product_size(w[1], w[0]).into(), right_folner_size(w[1]).into())
        })
        .max()
        .expect("nonempty");
    Ok(best)
}
