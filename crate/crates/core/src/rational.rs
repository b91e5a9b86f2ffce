//! Exact rationals on the wire: every rational is a pair of decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPair {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalPair {
    fn from(r: &BigRational) -> Self {
        RationalPair {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalPair> for BigRational {
    type Error = Error;

    fn try_from(p: &RationalPair) -> Result<Self> {
        let n = BigInt::from_str(&p.num).map_err(|e| Error::Parse(e.to_string()))?;
        let d = BigInt::from_str(&p.den).map_err(|e| Error::Parse(e.to_string()))?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let d = BigInt::from_str(d).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("{s:?}: zero denominator")));
    }
    Ok(BigRational::new(n, d))
}

/// Lossy conversion for diagnostics; handles values whose numerator and
/// denominator individually overflow `f64`.
pub fn to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb.max(db) - 900;
    let n = (r.numer().abs() >> shift.max(0) as usize).to_f64().unwrap_or(f64::MAX);
    let d = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(f64::MAX);
    let v = if d == 0.0 { f64::INFINITY } else { n / d };
    if r.is_negative() {
        -v
    } else {
        v
    }
}

pub fn pow(r: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = r.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
