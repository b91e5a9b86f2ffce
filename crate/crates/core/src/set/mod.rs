//! Finite subsets of a discrete group with exact cardinality.
//!
//! The counting measure is the Haar measure here, so `len()` is the volume
//! of the set. All operations that can grow a set take a `cap` and fail with
//! [`Error::ResourceLimit`] rather than returning a truncated result.

mod extract;
mod io;
mod ops;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind};

pub use extract::{extract_subsequence, Extraction, ExtractionLevel, ExtractionStatus};
pub use io::{read_set, write_set};
pub(crate) use io::{kind_token, parse_kind};
pub use ops::{
    folner_ratio, interior_bilateral, interior_left, interior_right, power, product,
    temperedness_constant, Side,
};

/// Default upper bound on the size of any materialized set.
pub const DEFAULT_CAP: usize = 4_000_000;

#[derive(Debug, Clone)]
pub struct FiniteSubset {
    kind: GroupKind,
    elems: FxHashSet<GroupElement>,
}

impl PartialEq for FiniteSubset {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.elems == other.elems
    }
}

impl Eq for FiniteSubset {}

impl FiniteSubset {
    pub fn empty(kind: GroupKind) -> Self {
        FiniteSubset {
            kind,
            elems: FxHashSet::default(),
        }
    }

    pub fn identity(kind: GroupKind) -> Self {
        let mut s = Self::empty(kind);
        s.elems.insert(kind.identity());
        s
    }

    pub fn from_elements<I>(kind: GroupKind, elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let mut s = Self::empty(kind);
        for g in elems {
            s.insert(g)?;
        }
        Ok(s)
    }

    /// Integer interval `[lo, hi]` in Z.
    pub fn interval(lo: i64, hi: i64) -> Self {
        let mut s = Self::empty(GroupKind::Zd { dim: 1 });
        s.elems.extend((lo..=hi).map(GroupElement::z1));
        s
    }

    pub fn insert(&mut self, g: GroupElement) -> Result<bool> {
        if g.kind() != self.kind {
            return Err(Error::GroupMismatch {
                left: self.kind,
                right: g.kind(),
            });
        }
        Ok(self.elems.insert(g))
    }

    pub(crate) fn insert_unchecked(&mut self, g: GroupElement) -> bool {
        self.elems.insert(g)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elems.contains(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> + '_ {
        self.elems.iter()
    }

    /// Elements ordered by canonical encoding.
    pub fn sorted(&self) -> Vec<&GroupElement> {
        let mut v: Vec<&GroupElement> = self.elems.iter().collect();
        v.sort_by_cached_key(|g| g.encode());
        v
    }

    pub fn contains_identity(&self) -> bool {
        self.elems.contains(&self.kind.identity())
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        self.kind == other.kind && self.elems.iter().all(|g| other.contains(g))
    }

    /// `|self \ other|`
    pub fn difference_len(&self, other: &FiniteSubset) -> usize {
        self.elems.iter().filter(|g| !other.contains(g)).count()
    }

    pub fn union(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.same_group(other)?;
        let mut out = self.clone();
        out.elems.extend(other.elems.iter().cloned());
        Ok(out)
    }

    pub fn intersection(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.same_group(other)?;
        let mut out = Self::empty(self.kind);
        out.elems
            .extend(self.elems.iter().filter(|g| other.contains(g)).cloned());
        Ok(out)
    }

    /// `A^{-1}`; same cardinality as `A`.
    pub fn inverse_set(&self) -> Result<FiniteSubset> {
        let mut out = Self::empty(self.kind);
        out.elems.reserve(self.len());
        for g in &self.elems {
            out.elems.insert(g.inv()?);
        }
        Ok(out)
    }

    /// `A ∪ A^{-1} ∪ {e}`.
    pub fn symmetrize(&self) -> Result<FiniteSubset> {
        let mut out = self.clone();
        for g in &self.elems {
            out.elems.insert(g.inv()?);
        }
        out.elems.insert(self.kind.identity());
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.elems
            .iter()
            .all(|g| g.inv().map(|h| self.contains(&h)).unwrap_or(false))
    }

    /// Left translate `g·A`.
    pub fn translate_left(&self, g: &GroupElement) -> Result<FiniteSubset> {
        let mut out = Self::empty(self.kind);
        for a in &self.elems {
            out.insert(g.mul(a)?)?;
        }
        Ok(out)
    }

    /// Right translate `A·g`.
    pub fn translate_right(&self, g: &GroupElement) -> Result<FiniteSubset> {
        let mut out = Self::empty(self.kind);
        for a in &self.elems {
            out.insert(a.mul(g)?)?;
        }
        Ok(out)
    }

    pub(crate) fn same_group(&self, other: &FiniteSubset) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::GroupMismatch {
                left: self.kind,
                right: other.kind,
            });
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a FiniteSubset {
    type Item = &'a GroupElement;
    type IntoIter = std::collections::hash_set::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ll(pos: i64, lamps: &[i64]) -> GroupElement {
        GroupElement::lamplighter(pos, lamps)
    }

    #[test]
    fn symmetrize_z() {
        let a = FiniteSubset::from_elements(
            GroupKind::Zd { dim: 1 },
            [GroupElement::z1(1), GroupElement::z1(2)],
        )
        .unwrap();
        assert_eq!(a.symmetrize().unwrap(), FiniteSubset::interval(-2, 2));
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let a = FiniteSubset::interval(-3, 3);
        assert_eq!(a.symmetrize().unwrap(), a);
    }

    #[test]
    fn symmetrize_lamplighter() {
        let a = FiniteSubset::from_elements(GroupKind::Lamplighter, [ll(1, &[0])]).unwrap();
        let s = a.symmetrize().unwrap();
        let expected =
            FiniteSubset::from_elements(GroupKind::Lamplighter, [ll(1, &[0]), ll(-1, &[-1]), ll(0, &[])])
                .unwrap();
        assert_eq!(s, expected);
        assert!(s.is_symmetric() && s.contains_identity());
    }

    #[test]
    fn kind_checked_on_insert() {
        let mut s = FiniteSubset::empty(GroupKind::Heisenberg);
        assert!(s.insert(GroupElement::z1(0)).is_err());
    }

    #[test]
    fn sorted_is_by_encoding() {
        let s = FiniteSubset::interval(-2, 2);
        let enc: Vec<Vec<u8>> = s.sorted().iter().map(|g| g.encode()).collect();
        let mut check = enc.clone();
        check.sort();
        assert_eq!(enc, check);
    }
}
