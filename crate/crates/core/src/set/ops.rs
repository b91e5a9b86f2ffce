use num_bigint::BigInt;
use num_rational::BigRational;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::FiniteSubset;
use crate::error::{Error, Result};
use crate::group::GroupElement;

pub(crate) fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Set product `AB = {ab : a ∈ A, b ∈ B}`.
pub fn product(a: &FiniteSubset, b: &FiniteSubset, cap: usize) -> Result<FiniteSubset> {
    a.same_group(b)?;
    let mut out = FiniteSubset::empty(a.kind());
    // identity factors are common in the chain recursion
    if b.len() == 1 && b.contains_identity() {
        return Ok(a.clone());
    }
    if a.len() == 1 && a.contains_identity() {
        return Ok(b.clone());
    }
    for x in a {
        for y in b {
            if out.insert_unchecked(x.mul(y)?) && out.len() > cap {
                return Err(Error::ResourceLimit {
                    what: "set product",
                    cap,
                });
            }
        }
    }
    Ok(out)
}

/// `A^k` by square-and-multiply; every intermediate is held to `cap`.
pub fn power(a: &FiniteSubset, k: u64, cap: usize) -> Result<FiniteSubset> {
    if k == 0 {
        return Err(Error::invalid("set power exponent must be at least 1"));
    }
    let mut base = a.clone();
    let mut acc: Option<FiniteSubset> = None;
    let mut e = k;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(x) => product(&x, &base, cap)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = product(&base, &base, cap)?;
    }
    Ok(acc.expect("k >= 1"))
}

/// Left dynamical interior `{g ∈ K : Hg ⊆ K}`.
pub fn interior_left(h: &FiniteSubset, k: &FiniteSubset) -> Result<FiniteSubset> {
    h.same_group(k)?;
    let mut out = FiniteSubset::empty(k.kind());
    'scan: for g in k {
        for x in h {
            if !k.contains(&x.mul(g)?) {
                continue 'scan;
            }
        }
        out.insert_unchecked(g.clone());
    }
    Ok(out)
}

/// Right dynamical interior `{g ∈ K : gH ⊆ K}`.
pub fn interior_right(h: &FiniteSubset, k: &FiniteSubset) -> Result<FiniteSubset> {
    h.same_group(k)?;
    let mut out = FiniteSubset::empty(k.kind());
    'scan: for g in k {
        for x in h {
            if !k.contains(&g.mul(x)?) {
                continue 'scan;
            }
        }
        out.insert_unchecked(g.clone());
    }
    Ok(out)
}

/// Bilateral dynamical interior `{g ∈ K : H₁ g H₂ ⊆ K}`.
///
/// `H₁gH₂ ⊆ K` iff every `y ∈ gH₂` has `H₁y ⊆ K`; the per-`y` verdict is
/// memoized, which brings the cost down from `|K||H₁||H₂|` to roughly
/// `|K||H₂| + |KH₂||H₁|`.
pub fn interior_bilateral(
    h1: &FiniteSubset,
    h2: &FiniteSubset,
    k: &FiniteSubset,
) -> Result<FiniteSubset> {
    h1.same_group(k)?;
    h2.same_group(k)?;
    let mut absorbs: FxHashMap<GroupElement, bool> = FxHashMap::default();
    let mut left_ok = |y: GroupElement| -> Result<bool> {
        if let Some(&v) = absorbs.get(&y) {
            return Ok(v);
        }
        let mut ok = true;
        for x in h1 {
            if !k.contains(&x.mul(&y)?) {
                ok = false;
                break;
            }
        }
        absorbs.insert(y, ok);
        Ok(ok)
    };
    let mut out = FiniteSubset::empty(k.kind());
    'scan: for g in k {
        for x in h2 {
            if !left_ok(g.mul(x)?)? {
                continue 'scan;
            }
        }
        out.insert_unchecked(g.clone());
    }
    Ok(out)
}

/// `|K₁ F K₂ \ F| / |F|`, zero exactly when `F` is invariant under the two
/// translations.
pub fn folner_ratio(
    k1: &FiniteSubset,
    f: &FiniteSubset,
    k2: &FiniteSubset,
    cap: usize,
) -> Result<BigRational> {
    if f.is_empty() {
        return Err(Error::invalid("Følner ratio of an empty set"));
    }
    let kfk = product(&product(k1, f, cap)?, k2, cap)?;
    Ok(ratio(kfk.difference_len(f), f.len()))
}

/// Which side the earlier sets act on in the temperedness union.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `⋃_{i<n} F_i^{-1} F_n` (left Følner sequences)
    Left,
    /// `⋃_{i<n} F_n F_i^{-1}` (right Følner sequences)
    Right,
}

/// `max_n |⋃_{i<n} F_i^{-1} F_n| / |F_n|` over the prefix (or the mirrored
/// union for [`Side::Right`]).
pub fn temperedness_constant(
    prefix: &[FiniteSubset],
    side: Side,
    cap: usize,
) -> Result<BigRational> {
    if prefix.len() < 2 {
        return Err(Error::invalid("temperedness needs at least two sets"));
    }
    let mut best: Option<BigRational> = None;
    for n in 1..prefix.len() {
        let fnn = &prefix[n];
        if fnn.is_empty() {
            return Err(Error::invalid("empty set in temperedness prefix"));
        }
        let mut union = FiniteSubset::empty(fnn.kind());
        for fi in &prefix[..n] {
            let inv = fi.inverse_set()?;
            let part = match side {
                Side::Left => product(&inv, fnn, cap)?,
                Side::Right => product(fnn, &inv, cap)?,
            };
            for g in &part {
                if union.insert_unchecked(g.clone()) && union.len() > cap {
                    return Err(Error::ResourceLimit {
                        what: "temperedness union",
                        cap,
                    });
                }
            }
        }
        let r = ratio(union.len(), fnn.len());
        if best.as_ref().map_or(true, |b| r > *b) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one level"))
}
