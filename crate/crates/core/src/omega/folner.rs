//! Concrete two-sided Følner sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{word_ball, GroupDescriptor, GroupElement, GroupKind, Lamps};
use crate::set::{product, FiniteSubset};

/// A symmetric Følner sequence `n ↦ F_n` with `e ∈ F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FolnerFamily {
    /// `[−n, n]^d`
    ZdCube { dim: usize },
    /// `[−2^{n²}, 2^{n²}]^d`
    ZdPolyGrowth { dim: usize },
    /// `{(a,b,c) : |a|, |b| ≤ n, |2c − ab| ≤ 2n²}`
    HeisenbergBox,
    /// `F_n = F̃_n⁻¹ F̃_n`
    Lamplighter,
    /// Word balls of the standard generators; Følner only under
    /// polynomial growth, so the lamplighter is rejected.
    Ball { group: GroupKind },
}

impl FolnerFamily {
    pub fn kind(&self) -> GroupKind {
        match *self {
            FolnerFamily::ZdCube { dim } | FolnerFamily::ZdPolyGrowth { dim } => GroupKind::Zd { dim },
            FolnerFamily::HeisenbergBox => GroupKind::Heisenberg,
            FolnerFamily::Lamplighter => GroupKind::Lamplighter,
            FolnerFamily::Ball { group } => group,
        }
    }

    pub fn set(&self, n: u64, cap: usize) -> Result<FiniteSubset> {
        if n == 0 {
            return Err(Error::invalid("Følner index starts at 1"));
        }
        match *self {
            FolnerFamily::ZdCube { dim } => {
                let r = i64::try_from(n).map_err(|_| Error::Overflow("cube radius"))?;
                cube(dim, r, cap)
            }
            FolnerFamily::ZdPolyGrowth { dim } => {
                let sq = n.checked_mul(n).filter(|&s| s < 62).ok_or(Error::Overflow("2^{n²}"))?;
                cube(dim, 1i64 << sq, cap)
            }
            FolnerFamily::HeisenbergBox => heisenberg_box(n, cap),
            FolnerFamily::Lamplighter => Ok(lamplighter_folner(n, cap)?.1),
            FolnerFamily::Ball { group: GroupKind::Lamplighter } => {
                Err(Error::invalid("word balls are not Følner sets in the lamplighter group"))
            }
            FolnerFamily::Ball { group } => word_ball(&GroupDescriptor::standard(group), n, cap),
        }
    }
}

fn check_size(size: u128, cap: usize, what: &'static str) -> Result<()> {
    if size > cap as u128 {
        Err(Error::ResourceLimit { what, cap })
    } else {
        Ok(())
    }
}

fn cube(dim: usize, r: i64, cap: usize) -> Result<FiniteSubset> {
    if dim == 0 {
        return Err(Error::invalid("Z^0 has no Følner cubes"));
    }
    let side = 2 * r as u128 + 1;
    check_size(side.checked_pow(dim as u32).unwrap_or(u128::MAX), cap, "Følner cube")?;
    let mut out = FiniteSubset::empty(GroupKind::Zd { dim });
    let mut coords = vec![-r; dim];
    loop {
        out.insert_unchecked(GroupElement::z(&coords));
        let mut i = 0;
        while i < dim && coords[i] == r {
            coords[i] = -r;
            i += 1;
        }
        if i == dim {
            break;
        }
        coords[i] += 1;
    }
    Ok(out)
}

fn heisenberg_box(n: u64, cap: usize) -> Result<FiniteSubset> {
    let n = i64::try_from(n).map_err(|_| Error::Overflow("box radius"))?;
    let side = 2 * n as u128 + 1;
    check_size(side * side * (2 * n as u128 * n as u128 + 1), cap, "Heisenberg box")?;
    let mut out = FiniteSubset::empty(GroupKind::Heisenberg);
    let bound = 2 * n.checked_mul(n).ok_or(Error::Overflow("box radius"))?;
    for a in -n..=n {
        for b in -n..=n {
            // |2c − ab| ≤ 2n²  ⇔  (ab − 2n²)/2 ≤ c ≤ (ab + 2n²)/2
            let lo = (a * b - bound).div_euclid(2) + i64::from((a * b - bound).rem_euclid(2) != 0);
            let hi = (a * b + bound).div_euclid(2);
            for c in lo..=hi {
                out.insert_unchecked(GroupElement::heisenberg(a, b, c));
            }
        }
    }
    Ok(out)
}

fn lamps_from_mask(mask: u64, offset: i64) -> Lamps {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + offset).collect()
}

/// `F̃_n = {(t, K) : t ∈ [0,n] ⊇ K}`, of size `(n+1) 2^{n+1}`.
pub fn lamplighter_right_folner(n: u64, cap: usize) -> Result<FiniteSubset> {
    if n >= 40 {
        return Err(Error::ResourceLimit { what: "lamplighter Følner set", cap });
    }
    check_size(u128::from(n + 1) << (n + 1), cap, "lamplighter Følner set")?;
    let mut out = FiniteSubset::empty(GroupKind::Lamplighter);
    for t in 0..=n as i64 {
        for mask in 0..(1u64 << (n + 1)) {
            out.insert_unchecked(GroupElement::Lamplighter { pos: t, lamps: lamps_from_mask(mask, 0) });
        }
    }
    Ok(out)
}

/// `(F̃_n, F_n)` with `F_n = F̃_n⁻¹ F̃_n` built as `T⁻¹ L T`, where
/// `T = {(t, ∅) : t ∈ [0,n]}` and `L = {(0, K) : K ⊆ [0,n]}` is a subgroup.
pub fn lamplighter_folner(n: u64, cap: usize) -> Result<(FiniteSubset, FiniteSubset)> {
    let tilde = lamplighter_right_folner(n, cap)?;
    check_size((u128::from(n * n + 4 * n + 2)) << n, cap, "lamplighter Følner set")?;
    let kind = GroupKind::Lamplighter;
    let t = FiniteSubset::from_elements(kind, (0..=n as i64).map(|t| GroupElement::lamplighter(t, &[])))?;
    let l = FiniteSubset::from_elements(
        kind,
        (0..(1u64 << (n + 1))).map(|mask| GroupElement::Lamplighter { pos: 0, lamps: lamps_from_mask(mask, 0) }),
    )?;
    let f = product(&product(&t.inverse_set()?, &l, cap)?, &t, cap)?;
    Ok((tilde, f))
}

/// `F̃_n⁻¹ F̃_n` by the plain set product; the oracle for [`lamplighter_folner`].
pub fn lamplighter_folner_direct(n: u64, cap: usize) -> Result<FiniteSubset> {
    let tilde = lamplighter_right_folner(n, cap)?;
    product(&tilde.inverse_set()?, &tilde, cap)
}
