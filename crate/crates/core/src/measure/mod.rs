//! Finitely supported measures with exact rational masses.
//!
//! Masses are stored over a common denominator (`mass(g) = num(g) / denom`),
//! which makes convolution a sum of integer products followed by a single
//! normalization. The counting measure is the Haar measure, so the mass at
//! `g` is also the density `dμ/dλ(g)`.

mod cesaro;
mod csv;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind};
use crate::set::FiniteSubset;

pub use cesaro::{cesaro_density, convolve_on, power_densities, CesaroDensity, PowerDensities};
pub use csv::{read_measure_csv, write_measure_csv};

/// Whether a measure is exact or a pointwise lower bound of the exact one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    Exact,
    /// Some atoms were dropped by support capping here or upstream; every
    /// remaining mass is `≤` the exact value.
    MassDropped,
}

impl Truncation {
    pub fn join(self, other: Truncation) -> Truncation {
        if self == Truncation::Exact && other == Truncation::Exact {
            Truncation::Exact
        } else {
            Truncation::MassDropped
        }
    }
}

#[derive(Debug, Clone)]
pub struct FinSupMeasure {
    kind: GroupKind,
    denom: BigInt,
    atoms: FxHashMap<GroupElement, BigInt>,
    truncation: Truncation,
}

impl PartialEq for FinSupMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.denom == other.denom
            && self.atoms == other.atoms
            && self.truncation == other.truncation
    }
}

impl FinSupMeasure {
    pub fn zero(kind: GroupKind) -> Self {
        FinSupMeasure {
            kind,
            denom: BigInt::one(),
            atoms: FxHashMap::default(),
            truncation: Truncation::Exact,
        }
    }

    pub fn dirac(g: GroupElement) -> Self {
        let mut m = Self::zero(g.kind());
        m.atoms.insert(g, BigInt::one());
        m
    }

    /// `δ_e`, the zeroth convolution power of any measure.
    pub fn identity(kind: GroupKind) -> Self {
        Self::dirac(kind.identity())
    }

    /// Uniform probability measure `χ_A / |A|`.
    pub fn uniform(a: &FiniteSubset) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::invalid("uniform measure on an empty set"));
        }
        let mut m = Self::zero(a.kind());
        m.denom = BigInt::from(a.len());
        m.atoms.reserve(a.len());
        for g in a {
            m.atoms.insert(g.clone(), BigInt::one());
        }
        Ok(m)
    }

    /// Indicator function `χ_A` viewed as a measure (mass 1 per element).
    pub fn indicator(a: &FiniteSubset) -> Self {
        let mut m = Self::zero(a.kind());
        for g in a {
            m.atoms.insert(g.clone(), BigInt::one());
        }
        m
    }

    pub fn from_masses<I>(kind: GroupKind, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, BigRational)>,
    {
        let pairs: Vec<(GroupElement, BigRational)> = masses.into_iter().collect();
        let mut denom = BigInt::one();
        for (g, q) in &pairs {
            if g.kind() != kind {
                return Err(Error::GroupMismatch { left: kind, right: g.kind() });
            }
            if q.is_negative() {
                return Err(Error::invalid(format!("negative mass at {g}")));
            }
            denom = denom.lcm(q.denom());
        }
        let mut m = Self::zero(kind);
        for (g, q) in pairs {
            if q.is_zero() {
                continue;
            }
            let num = q.numer() * (&denom / q.denom());
            *m.atoms.entry(g).or_insert_with(BigInt::zero) += num;
        }
        m.denom = denom;
        m.normalize();
        Ok(m)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.truncation == Truncation::Exact
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.atoms.contains_key(g)
    }

    /// Mass (equivalently density w.r.t. counting measure) at `g`.
    pub fn mass(&self, g: &GroupElement) -> BigRational {
        match self.atoms.get(g) {
            Some(n) => BigRational::new(n.clone(), self.denom.clone()),
            None => BigRational::zero(),
        }
    }

    pub(crate) fn numerator(&self, g: &GroupElement) -> Option<&BigInt> {
        self.atoms.get(g)
    }

    pub(crate) fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn total_mass(&self) -> BigRational {
        let s: BigInt = self.atoms.values().sum();
        BigRational::new(s, self.denom.clone())
    }

    pub fn support(&self) -> FiniteSubset {
        let mut s = FiniteSubset::empty(self.kind);
        for g in self.atoms.keys() {
            s.insert_unchecked(g.clone());
        }
        s
    }

    /// Atoms in canonical encoding order.
    pub fn sorted_masses(&self) -> Vec<(GroupElement, BigRational)> {
        let mut v: Vec<(&GroupElement, &BigInt)> = self.atoms.iter().collect();
        v.sort_by_cached_key(|(g, _)| g.encode());
        v.into_iter()
            .map(|(g, n)| (g.clone(), BigRational::new(n.clone(), self.denom.clone())))
            .collect()
    }

    pub fn iter_masses(&self) -> impl Iterator<Item = (&GroupElement, BigRational)> + '_ {
        self.atoms
            .iter()
            .map(|(g, n)| (g, BigRational::new(n.clone(), self.denom.clone())))
    }

    pub fn scale(&self, c: &BigRational) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::invalid("negative scale factor"));
        }
        if c.is_zero() {
            return Ok(Self::zero(self.kind));
        }
        let mut m = self.clone();
        for n in m.atoms.values_mut() {
            *n *= c.numer();
        }
        m.denom *= c.denom();
        m.normalize();
        Ok(m)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &FinSupMeasure) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::GroupMismatch { left: self.kind, right: other.kind });
        }
        let denom = self.denom.lcm(&other.denom);
        let fa = &denom / &self.denom;
        let fb = &denom / &other.denom;
        let mut atoms: FxHashMap<GroupElement, BigInt> = FxHashMap::default();
        atoms.reserve(self.atoms.len().max(other.atoms.len()));
        for (g, n) in &self.atoms {
            atoms.insert(g.clone(), n * &fa);
        }
        for (g, n) in &other.atoms {
            *atoms.entry(g.clone()).or_insert_with(BigInt::zero) += n * &fb;
        }
        let mut m = FinSupMeasure {
            kind: self.kind,
            denom,
            atoms,
            truncation: self.truncation.join(other.truncation),
        };
        m.normalize();
        Ok(m)
    }

    /// `true` if `self(g) ≤ other(g)` at every `g`.
    pub fn is_dominated_by(&self, other: &FinSupMeasure) -> bool {
        self.atoms.iter().all(|(g, n)| match other.atoms.get(g) {
            None => false,
            Some(m) => n * &other.denom <= m * &self.denom,
        })
    }

    fn normalize(&mut self) {
        self.atoms.retain(|_, n| !n.is_zero());
        if self.atoms.is_empty() {
            self.denom = BigInt::one();
            return;
        }
        let mut g = self.denom.clone();
        for n in self.atoms.values() {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            self.denom /= &g;
            for n in self.atoms.values_mut() {
                *n /= &g;
            }
        }
    }

    /// Keeps the `cap` heaviest atoms. Among equal masses the atoms with the
    /// larger canonical encoding are dropped first. Marks the result
    /// [`Truncation::MassDropped`] if anything was removed.
    pub fn cap_support(&mut self, cap: usize) {
        if self.atoms.len() <= cap {
            return;
        }
        let mut entries: Vec<(GroupElement, BigInt)> = self.atoms.drain().collect();
        entries.sort_by_cached_key(|(g, _)| g.encode());
        // stable: equal masses keep ascending encoding order
        entries.sort_by(|(_, a), (_, b)| b.cmp(a));
        entries.truncate(cap);
        self.atoms = entries.into_iter().collect();
        self.truncation = Truncation::MassDropped;
        self.normalize();
    }
}

/// Groups atoms by numerator so each distinct mass is multiplied once.
fn by_numerator(m: &FinSupMeasure) -> Vec<(&BigInt, Vec<&GroupElement>)> {
    let mut groups: FxHashMap<&BigInt, Vec<&GroupElement>> = FxHashMap::default();
    for (g, n) in &m.atoms {
        groups.entry(n).or_default().push(g);
    }
    let mut v: Vec<_> = groups.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(b.0));
    v
}

/// Exact convolution `(μ ∗ ν)(g) = Σ_{ab = g} μ(a) ν(b)`.
///
/// With `cap = Some(c)` the result keeps only its `c` heaviest atoms and is
/// flagged as a lower bound; the flag also propagates from the inputs.
pub fn convolve(mu: &FinSupMeasure, nu: &FinSupMeasure, cap: Option<usize>) -> Result<FinSupMeasure> {
    if mu.kind != nu.kind {
        return Err(Error::GroupMismatch { left: mu.kind, right: nu.kind });
    }
    let mut atoms: FxHashMap<GroupElement, BigInt> = FxHashMap::default();
    let groups = by_numerator(nu);
    for (a, na) in &mu.atoms {
        for (nb, elems) in &groups {
            let coef = na * *nb;
            for b in elems {
                let g = a.mul(b)?;
                match atoms.get_mut(&g) {
                    Some(acc) => *acc += &coef,
                    None => {
                        atoms.insert(g, coef.clone());
                    }
                }
            }
        }
    }
    let mut out = FinSupMeasure {
        kind: mu.kind,
        denom: &mu.denom * &nu.denom,
        atoms,
        truncation: mu.truncation.join(nu.truncation),
    };
    out.normalize();
    if let Some(c) = cap {
        out.cap_support(c);
    }
    Ok(out)
}

/// `[ω^{(0)}, …, ω^{(J)}]` with `ω^{(0)} = δ_e`.
pub fn convolution_powers(omega: &FinSupMeasure, j_max: usize, cap: Option<usize>) -> Result<Vec<FinSupMeasure>> {
    let mut out = Vec::with_capacity(j_max + 1);
    out.push(FinSupMeasure::identity(omega.kind));
    for j in 1..=j_max {
        let next = if j == 1 {
            let mut w = omega.clone();
            if let Some(c) = cap {
                w.cap_support(c);
            }
            w
        } else {
            convolve(&out[j - 1], omega, cap)?
        };
        out.push(next);
    }
    Ok(out)
}
