//! Exponent towers for sizes that outgrow positional representation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Values at most this many bits wide are materialized as integers.
pub const MATERIALIZE_BITS: u64 = 1 << 16;

/// A nonnegative integer, either explicit or as `coeff · base^exp`.
///
/// Constructors keep the form canonical: a `Pow` is only produced when the
/// value would exceed [`MATERIALIZE_BITS`], so two values of the same
/// magnitude class compare structurally when they were built the same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SymbolicSize {
    Int(BigUint),
    Pow {
        coeff: BigUint,
        base: u32,
        exp: Box<SymbolicSize>,
    },
}

impl From<u64> for SymbolicSize {
    fn from(v: u64) -> Self {
        SymbolicSize::Int(BigUint::from(v))
    }
}

impl From<BigUint> for SymbolicSize {
    fn from(v: BigUint) -> Self {
        SymbolicSize::Int(v)
    }
}

fn bits_estimate(coeff: &BigUint, base: u32, exp: &BigUint) -> Option<u64> {
    let e = exp.to_u64()?;
    let per = f64::from(base).log2();
    let b = (e as f64) * per + coeff.bits() as f64;
    (b.is_finite() && b < u64::MAX as f64).then_some(b.ceil() as u64)
}

impl SymbolicSize {
    /// `coeff · base^exp`, materialized when small enough.
    pub fn pow(coeff: BigUint, base: u32, exp: SymbolicSize) -> Self {
        assert!(base >= 2, "tower bases are at least 2");
        assert!(!coeff.is_zero(), "zero coefficient");
        if let SymbolicSize::Int(e) = &exp {
            if let Some(bits) = bits_estimate(&coeff, base, e) {
                if bits <= MATERIALIZE_BITS {
                    let e = e.to_u32().expect("bounded by the bit budget");
                    return SymbolicSize::Int(coeff * BigUint::from(base).pow(e));
                }
            }
        }
        SymbolicSize::Pow {
            coeff,
            base,
            exp: Box::new(exp),
        }
    }

    /// Multiplies by a small integer factor without materializing.
    pub fn scale(&self, k: &BigUint) -> Self {
        assert!(!k.is_zero(), "zero scale");
        match self {
            SymbolicSize::Int(v) => SymbolicSize::Int(v * k),
            SymbolicSize::Pow { coeff, base, exp } => SymbolicSize::Pow {
                coeff: coeff * k,
                base: *base,
                exp: exp.clone(),
            },
        }
    }

    pub fn as_int(&self) -> Option<&BigUint> {
        match self {
            SymbolicSize::Int(v) => Some(v),
            SymbolicSize::Pow { .. } => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_int().and_then(|v| v.to_u64())
    }

    /// Expands the tower if the result has at most `max_bits` bits.
    pub fn materialize(&self, max_bits: u64) -> Option<BigUint> {
        match self {
            SymbolicSize::Int(v) => (v.bits() <= max_bits).then(|| v.clone()),
            SymbolicSize::Pow { coeff, base, exp } => {
                let e = exp.materialize(64)?;
                let bits = bits_estimate(coeff, *base, &e)?;
                if bits > max_bits + 1 {
                    return None;
                }
                let v = coeff * BigUint::from(*base).pow(e.to_u32()?);
                (v.bits() <= max_bits).then_some(v)
            }
        }
    }

    /// Height of the tower (0 for explicit integers).
    pub fn height(&self) -> usize {
        match self {
            SymbolicSize::Int(_) => 0,
            SymbolicSize::Pow { exp, .. } => 1 + exp.height(),
        }
    }

    /// `(k, y)` with `value ≈ exp^k(y)` (natural exponentials) and
    /// `y` finite. Relative error is at double precision at the top level.
    fn exp_form(&self) -> (u32, f64) {
        match self {
            SymbolicSize::Int(v) => match v.to_f64().filter(|x| x.is_finite()) {
                Some(x) => (0, x),
                None => (1, ln_big(v)),
            },
            SymbolicSize::Pow { coeff, base, exp } => {
                let ln_b = f64::from(*base).ln();
                let ln_c = ln_big(coeff);
                match exp.exp_form() {
                    (0, e) => {
                        let z = ln_c + e * ln_b;
                        if z < 700.0 {
                            (0, z.exp())
                        } else {
                            (1, z)
                        }
                    }
                    // ln ln x = ln e + ln ln b + O(ln c / (e ln b))
                    (1, y) => (2, y + ln_b.ln()),
                    (k, y) => (k + 1, y),
                }
            }
        }
    }

    /// Level-index of the value: `ψ(x) = x` for `x < 1`, else
    /// `1 + ψ(ln x)`. Strictly increasing in the value.
    pub fn level_index(&self) -> f64 {
        let (mut k, mut y) = self.exp_form();
        while k > 0 && y < 700.0 {
            y = y.exp();
            k -= 1;
        }
        let mut levels = f64::from(k);
        while y >= 1.0 {
            y = y.ln();
            levels += 1.0;
        }
        levels + y
    }

    /// `log2` of the value as a float, `None` when that overflows `f64`.
    pub fn log2(&self) -> Option<f64> {
        match self.exp_form() {
            (0, x) => Some(x.log2()),
            (1, y) => Some(y / std::f64::consts::LN_2),
            _ => None,
        }
    }

    /// `2^lo ≤ value < 2^hi`, when the exponent fits in 64 bits.
    fn bit_bounds(&self) -> Option<(u128, u128)> {
        match self {
            SymbolicSize::Int(v) if v.is_zero() => None,
            SymbolicSize::Int(v) => Some((u128::from(v.bits() - 1), u128::from(v.bits()))),
            SymbolicSize::Pow { coeff, base, exp } => {
                let e = u128::from(exp.to_u64()?);
                let lb = u128::from(31 - base.leading_zeros());
                let ub = if base.is_power_of_two() { lb } else { lb + 1 };
                let c = u128::from(coeff.bits());
                Some((e * lb + c - 1, e * ub + c))
            }
        }
    }

    /// Exact when both sides fit the bit-length or same-base rules, or
    /// materialize; otherwise decided by level index with a relative margin
    /// of `1e-9` and `None` inside the margin.
    pub fn try_cmp(&self, other: &SymbolicSize) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        match (self, other) {
            (SymbolicSize::Int(a), SymbolicSize::Int(b)) => return Some(a.cmp(b)),
            (
                SymbolicSize::Pow { coeff: c1, base: b1, exp: e1 },
                SymbolicSize::Pow { coeff: c2, base: b2, exp: e2 },
            ) if b1 == b2 => {
                let ce = e1.try_cmp(e2);
                let cc = c1.cmp(c2);
                match (ce, cc) {
                    (Some(Ordering::Equal), c) => return Some(c),
                    (Some(o), c) if c == o || c == Ordering::Equal => return Some(o),
                    _ => {}
                }
            }
            _ => {}
        }
        if let (Some((lo1, hi1)), Some((lo2, hi2))) = (self.bit_bounds(), other.bit_bounds()) {
            if lo1 > hi2 {
                return Some(Ordering::Greater);
            }
            if hi1 < lo2 {
                return Some(Ordering::Less);
            }
        }
        // Materialize when both sides are modest.
        if let (Some(a), Some(b)) = (self.materialize(1 << 20), other.materialize(1 << 20)) {
            return Some(a.cmp(&b));
        }
        let (x, y) = (self.level_index(), other.level_index());
        let tol = 1e-9 * x.abs().max(y.abs()).max(1.0);
        if (x - y).abs() > tol {
            x.partial_cmp(&y)
        } else {
            None
        }
    }
}

fn ln_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("64 bits");
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

impl fmt::Display for SymbolicSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicSize::Int(v) => write!(f, "{v}"),
            SymbolicSize::Pow { coeff, base, exp } => {
                if !coeff.is_one() {
                    write!(f, "{coeff}*")?;
                }
                write!(f, "{base}^({exp})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: u64) -> SymbolicSize {
        SymbolicSize::from(v)
    }

    #[test]
    fn small_powers_materialize() {
        let v = SymbolicSize::pow(BigUint::one(), 17, int(4));
        assert_eq!(v, int(83521));
        assert_eq!(v.height(), 0);
    }

    #[test]
    fn large_powers_stay_symbolic() {
        let v = SymbolicSize::pow(BigUint::one(), 17, int(668_168));
        assert_eq!(v.height(), 1);
        assert_eq!(v.to_string(), "17^(668168)");
        let lg = v.log2().unwrap();
        assert!((lg - 668_168.0 * 17f64.log2()).abs() < 1e-6 * lg);
        assert!(v.materialize(1 << 16).is_none());
        assert_eq!(v.materialize(1 << 22).unwrap().bits(), 2_731_112);
    }

    #[test]
    fn comparisons() {
        let a = SymbolicSize::pow(BigUint::one(), 17, int(668_168));
        let b = SymbolicSize::pow(BigUint::one(), 17, int(668_169));
        assert_eq!(a.try_cmp(&b), Some(Ordering::Less));
        assert_eq!(a.try_cmp(&int(83521)), Some(Ordering::Greater));
        assert_eq!(a.try_cmp(&a.clone()), Some(Ordering::Equal));
        let t = SymbolicSize::pow(BigUint::one(), 3, a.clone());
        let t2 = SymbolicSize::pow(BigUint::from(2u32), 3, a.clone());
        assert_eq!(t.try_cmp(&t2), Some(Ordering::Less));
        assert_eq!(t.try_cmp(&a), Some(Ordering::Greater));
        assert!(t.level_index() > a.level_index());
        // different bases, towers of equal height but far apart
        let u = SymbolicSize::pow(BigUint::one(), 2, int(10_000_000));
        assert_eq!(a.try_cmp(&u), Some(Ordering::Less));
    }

    #[test]
    fn undecided_when_indistinguishable() {
        // 2^(2·3^100000) = 4^(3^100000), built differently
        let a = SymbolicSize::pow(BigUint::one(), 2, SymbolicSize::pow(BigUint::from(2u32), 3, int(100_000)));
        let b = SymbolicSize::pow(BigUint::one(), 4, SymbolicSize::pow(BigUint::one(), 3, int(100_000)));
        assert_eq!(a.try_cmp(&b), None);
    }

    #[test]
    fn level_index_monotone_on_integers() {
        let mut prev = -1.0;
        for v in [0u64, 1, 2, 3, 10, 1000, 1 << 40, u64::MAX] {
            let li = int(v).level_index();
            assert!(li > prev, "{v}");
            prev = li;
        }
    }
}
