//! Finite quotient groups used as state spaces. States are the quotient
//! elements, indexed `0..size`, and the group acts by left multiplication.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind};

/// Largest quotient for which the multiplication table is built.
pub const MAX_QUOTIENT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "quotient", rename_all = "snake_case", deny_unknown_fields)]
pub enum Quotient {
    /// `Z^d → (Z/m)^d`
    ZdMod { dim: usize, m: u32 },
    /// Heisenberg entries mod `m`.
    HeisenbergMod { m: u32 },
    /// `(t, K) ↦ (t mod m, parity of K on each residue class)`, onto
    /// `Z/m ⋉ (Z/2)^m` of size `m·2^m`.
    LamplighterMod { m: u32 },
}

impl Quotient {
    pub fn kind(&self) -> GroupKind {
        match *self {
            Quotient::ZdMod { dim, .. } => GroupKind::Zd { dim },
            Quotient::HeisenbergMod { .. } => GroupKind::Heisenberg,
            Quotient::LamplighterMod { .. } => GroupKind::Lamplighter,
        }
    }

    fn modulus(&self) -> u32 {
        match *self {
            Quotient::ZdMod { m, .. } | Quotient::HeisenbergMod { m } | Quotient::LamplighterMod { m } => m,
        }
    }

    pub fn size(&self) -> Result<usize> {
        let m = self.modulus() as usize;
        if m == 0 {
            return Err(Error::invalid("quotient modulus must be positive"));
        }
        let size = match *self {
            Quotient::ZdMod { dim, .. } => m.checked_pow(dim as u32),
            Quotient::HeisenbergMod { .. } => m.checked_pow(3),
            Quotient::LamplighterMod { .. } => {
                if m > 20 {
                    None
                } else {
                    Some(m << m)
                }
            }
        };
        match size {
            Some(s) if s <= MAX_QUOTIENT && s > 0 => Ok(s),
            _ => Err(Error::ResourceLimit { what: "quotient state space", cap: MAX_QUOTIENT }),
        }
    }

    fn residue(x: i64, m: u32) -> usize {
        x.rem_euclid(i64::from(m)) as usize
    }

    /// Index of the image of `g`.
    pub fn project(&self, g: &GroupElement) -> Result<usize> {
        if g.kind() != self.kind() {
            return Err(Error::GroupMismatch { left: self.kind(), right: g.kind() });
        }
        let m = self.modulus();
        let mu = m as usize;
        Ok(match g {
            GroupElement::Zd(c) => c.iter().rev().fold(0, |acc, &x| acc * mu + Self::residue(x, m)),
            GroupElement::Heisenberg([a, b, c]) => {
                Self::residue(*a, m) + mu * (Self::residue(*b, m) + mu * Self::residue(*c, m))
            }
            GroupElement::Lamplighter { pos, lamps } => {
                let mask = lamps.iter().fold(0usize, |acc, &k| acc ^ (1 << Self::residue(k, m)));
                Self::residue(*pos, m) + mu * mask
            }
        })
    }

    /// Product of two states in the quotient group.
    pub(crate) fn mul_states(&self, x: usize, y: usize) -> usize {
        let mu = self.modulus() as usize;
        match *self {
            Quotient::ZdMod { dim, .. } => {
                let (mut out, mut place, mut x, mut y) = (0, 1, x, y);
                for _ in 0..dim {
                    out += ((x % mu + y % mu) % mu) * place;
                    place *= mu;
                    x /= mu;
                    y /= mu;
                }
                out
            }
            Quotient::HeisenbergMod { .. } => {
                let (a1, b1, c1) = (x % mu, x / mu % mu, x / (mu * mu));
                let (a2, b2, c2) = (y % mu, y / mu % mu, y / (mu * mu));
                let a = (a1 + a2) % mu;
                let b = (b1 + b2) % mu;
                let c = (c1 + c2 + a1 * b2) % mu;
                a + mu * (b + mu * c)
            }
            Quotient::LamplighterMod { .. } => {
                let (p1, k1) = (x % mu, x / mu);
                let (p2, k2) = (y % mu, y / mu);
                // rotate k2 by p1 residues
                let full = (1usize << mu) - 1;
                let rot = if p1 == 0 { k2 } else { ((k2 << p1) | (k2 >> (mu - p1))) & full };
                (p1 + p2) % mu + mu * (k1 ^ rot)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{word_ball, GroupDescriptor};

    #[test]
    fn projection_is_a_homomorphism() {
        for q in [
            Quotient::ZdMod { dim: 2, m: 3 },
            Quotient::HeisenbergMod { m: 3 },
            Quotient::LamplighterMod { m: 3 },
            Quotient::LamplighterMod { m: 1 },
        ] {
            let ball = word_ball(&GroupDescriptor::standard(q.kind()), 3, 100_000).unwrap();
            let elems: Vec<_> = ball.sorted().into_iter().take(60).cloned().collect();
            for a in &elems {
                for b in &elems {
                    let ab = q.project(&a.mul(b).unwrap()).unwrap();
                    let want = q.mul_states(q.project(a).unwrap(), q.project(b).unwrap());
                    assert_eq!(ab, want, "{q:?} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(Quotient::LamplighterMod { m: 3 }.size().unwrap(), 24);
        assert_eq!(Quotient::ZdMod { dim: 1, m: 8 }.size().unwrap(), 8);
        assert!(Quotient::LamplighterMod { m: 12 }.size().is_err());
        assert!(Quotient::ZdMod { dim: 1, m: 0 }.size().is_err());
    }
}
