//! Element algebra for the three concrete discrete groups the toolkit works
//! with: the free abelian groups `Z^d`, the discrete Heisenberg group of
//! upper unitriangular integer matrices, and the lamplighter group
//! `Z ⋉ ⊕_Z Z/2`.
//!
//! All three are discrete, so the counting measure is a bi-invariant Haar
//! measure and every set cardinality below is an exact Haar volume.
//!
//! Integers are stored as `i64` and every arithmetic step is checked; an
//! overflow is reported as [`Error::Overflow`] rather than wrapping.

mod descriptor;
mod encoding;

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use descriptor::{word_ball, GroupDescriptor};
pub use encoding::{read_sleb, read_uleb, write_sleb, write_uleb};

pub type Coords = SmallVec<[i64; 2]>;
pub type Lamps = SmallVec<[i64; 6]>;

/// Which group an element or set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    Zd { dim: usize },
    Heisenberg,
    Lamplighter,
}

impl GroupKind {
    pub fn identity(self) -> GroupElement {
        match self {
            GroupKind::Zd { dim } => GroupElement::Zd(std::iter::repeat(0).take(dim).collect()),
            GroupKind::Heisenberg => GroupElement::Heisenberg([0, 0, 0]),
            GroupKind::Lamplighter => GroupElement::Lamplighter {
                pos: 0,
                lamps: Lamps::new(),
            },
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            GroupKind::Zd { .. } => 0x01,
            GroupKind::Heisenberg => 0x02,
            GroupKind::Lamplighter => 0x03,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Zd { dim } => write!(f, "Z^{dim}"),
            GroupKind::Heisenberg => f.write_str("heisenberg"),
            GroupKind::Lamplighter => f.write_str("lamplighter"),
        }
    }
}

/// An element of one of the supported groups, in canonical form.
///
/// Lamplighter lamp sets are kept strictly increasing, so structural
/// equality coincides with group equality and with equality of
/// [`GroupElement::encode`] output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Zd(Coords),
    /// `(a, b, c)` is the matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
    Heisenberg([i64; 3]),
    Lamplighter { pos: i64, lamps: Lamps },
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("group law"))
}

fn neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow("group inverse"))
}

impl GroupElement {
    pub fn z(coords: &[i64]) -> Self {
        GroupElement::Zd(coords.iter().copied().collect())
    }

    pub fn z1(x: i64) -> Self {
        GroupElement::Zd(smallvec::smallvec![x])
    }

    pub fn heisenberg(a: i64, b: i64, c: i64) -> Self {
        GroupElement::Heisenberg([a, b, c])
    }

    /// Builds a lamplighter element, sorting the lamps and cancelling
    /// repeated positions in pairs (toggling a lamp twice leaves it off).
    pub fn lamplighter(pos: i64, lamps: &[i64]) -> Self {
        let mut v: Vec<i64> = lamps.to_vec();
        v.sort_unstable();
        let mut out = Lamps::new();
        for x in v {
            if out.last() == Some(&x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        GroupElement::Lamplighter { pos, lamps: out }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::Zd(c) => GroupKind::Zd { dim: c.len() },
            GroupElement::Heisenberg(_) => GroupKind::Heisenberg,
            GroupElement::Lamplighter { .. } => GroupKind::Lamplighter,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Zd(c) => c.iter().all(|&x| x == 0),
            GroupElement::Heisenberg(h) => *h == [0, 0, 0],
            GroupElement::Lamplighter { pos, lamps } => *pos == 0 && lamps.is_empty(),
        }
    }

    /// Group product `self · other`.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Zd(a), GroupElement::Zd(b)) if a.len() == b.len() => {
                let mut out = Coords::with_capacity(a.len());
                for (x, y) in a.iter().zip(b) {
                    out.push(add(*x, *y)?);
                }
                Ok(GroupElement::Zd(out))
            }
            (GroupElement::Heisenberg([a, b, c]), GroupElement::Heisenberg([a2, b2, c2])) => {
                let ab2 = a.checked_mul(*b2).ok_or(Error::Overflow("group law"))?;
                Ok(GroupElement::Heisenberg([
                    add(*a, *a2)?,
                    add(*b, *b2)?,
                    add(add(*c, *c2)?, ab2)?,
                ]))
            }
            (
                GroupElement::Lamplighter { pos: t1, lamps: k1 },
                GroupElement::Lamplighter { pos: t2, lamps: k2 },
            ) => Ok(GroupElement::Lamplighter {
                pos: add(*t1, *t2)?,
                lamps: sym_diff_shifted(k1, k2, *t1)?,
            }),
            _ => Err(Error::GroupMismatch {
                left: self.kind(),
                right: other.kind(),
            }),
        }
    }

    pub fn inv(&self) -> Result<GroupElement> {
        match self {
            GroupElement::Zd(a) => Ok(GroupElement::Zd(
                a.iter().map(|&x| neg(x)).collect::<Result<_>>()?,
            )),
            GroupElement::Heisenberg([a, b, c]) => {
                let ab = a.checked_mul(*b).ok_or(Error::Overflow("group inverse"))?;
                Ok(GroupElement::Heisenberg([neg(*a)?, neg(*b)?, add(neg(*c)?, ab)?]))
            }
            // (t, K)^{-1} = (-t, -t + K)
            GroupElement::Lamplighter { pos, lamps } => {
                let t = neg(*pos)?;
                Ok(GroupElement::Lamplighter {
                    pos: t,
                    lamps: lamps.iter().map(|&k| add(k, t)).collect::<Result<_>>()?,
                })
            }
        }
    }

    /// `self^k` for an integer `k` (negative exponents use the inverse).
    pub fn pow(&self, k: i64) -> Result<GroupElement> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.kind().identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn encode(&self) -> Vec<u8> {
        encoding::encode(self)
    }

    pub fn encode_hex(&self) -> String {
        hex::encode(self.encode())
    }

    pub fn decode(bytes: &[u8]) -> Result<GroupElement> {
        encoding::decode(bytes)
    }

    pub fn decode_hex(s: &str) -> Result<GroupElement> {
        let bytes = hex::decode(s.trim()).map_err(|e| Error::Decode(e.to_string()))?;
        Self::decode(&bytes)
    }
}

/// `a △ (shift + b)` for strictly increasing inputs, by a single merge pass.
fn sym_diff_shifted(a: &[i64], b: &[i64], shift: i64) -> Result<Lamps> {
    let mut out = Lamps::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let bj = add(b[j], shift)?;
        match a[i].cmp(&bj) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(bj);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for &x in &b[j..] {
        out.push(add(x, shift)?);
    }
    Ok(out)
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Zd(c) if c.len() == 1 => write!(f, "{}", c[0]),
            GroupElement::Zd(c) => {
                f.write_str("(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            GroupElement::Heisenberg([a, b, c]) => write!(f, "[{a},{b},{c}]"),
            GroupElement::Lamplighter { pos, lamps } => {
                write!(f, "({pos},{{")?;
                for (i, x) in lamps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("})")
            }
        }
    }
}
