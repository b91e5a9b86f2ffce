//! The enveloping sets `E_n`, the step measure `ω`, and the index schedules.
//!
//! `E_1 = F_1` and `E_n = (E_{n−1}^{N(n)−2})⁻¹ F_n (E_{n−1}^{N(n)−2})⁻¹`.
//! `ω = Σ_{n≤K} t_n · uniform(E_n)` is kept truncated, with total mass
//! `1 − r_{K+1}`.

mod folner;
mod schedules;
mod symbolic;

use serde::{Deserialize, Serialize};

pub use folner::{lamplighter_folner, lamplighter_folner_direct, lamplighter_right_folner, FolnerFamily};
pub use schedules::{
    biinvariant_folner_size, lamplighter_schedule, poly_growth_ratio_bound, PolyGrowthBound, poly_growth_schedule,
    right_folner_size, right_product_size, right_tempered_constant, LamplighterSchedule,
    POLY_GROWTH_MAX_N,
};
pub use symbolic::{SymbolicSize, MATERIALIZE_BITS};

use crate::error::{Error, Result};
use crate::group::{word_ball, GroupDescriptor, GroupKind};
use crate::measure::FinSupMeasure;
use crate::rational::RationalPair;
use crate::schedule::{Schedule, ScheduleConfig};
use crate::set::{
    extract_subsequence, interior_bilateral, power, product, ExtractionStatus, FiniteSubset,
};

/// `(E_{n−1}^{N(n)−2})⁻¹`, the set acting on both sides at level `n`.
pub fn envelope_factor(prev: &FiniteSubset, sched: &Schedule, n: usize, cap: usize) -> Result<FiniteSubset> {
    let exp = sched.big_n(n)? - 2;
    power(prev, exp, cap)?.inverse_set()
}

/// `E_1, …, E_depth` from `F_1, …, F_depth`. Errors carry the failing level.
pub fn build_e_sequence(
    fsub: &[FiniteSubset],
    sched: &Schedule,
    depth: usize,
    cap: usize,
) -> Result<Vec<FiniteSubset>> {
    if depth == 0 || depth > fsub.len() {
        return Err(Error::invalid(format!("depth {depth} with {} Følner sets", fsub.len())));
    }
    let f1 = &fsub[0];
    if !f1.is_symmetric() || !f1.contains_identity() {
        return Err(Error::invalid("F_1 must be symmetric and contain e").at_level(1));
    }
    let mut out = vec![f1.clone()];
    for n in 2..=depth {
        let step = || -> Result<FiniteSubset> {
            let h = envelope_factor(&out[n - 2], sched, n, cap)?;
            product(&product(&h, &fsub[n - 1], cap)?, &h, cap)
        };
        out.push(step().map_err(|e| e.at_level(n))?);
    }
    Ok(out)
}

/// `Σ_{n≤K} t_n · uniform(E_n)` with `K = e.len()`.
pub fn build_omega(e: &[FiniteSubset], sched: &Schedule) -> Result<FinSupMeasure> {
    let first = e.first().ok_or_else(|| Error::invalid("empty E sequence"))?;
    let mut omega = FinSupMeasure::zero(first.kind());
    for (i, en) in e.iter().enumerate() {
        let term = FinSupMeasure::uniform(en)
            .and_then(|u| u.scale(&sched.t(i + 1)))
            .map_err(|err| err.at_level(i + 1))?;
        omega = omega.add(&term)?;
    }
    Ok(omega)
}

#[derive(Debug, Clone)]
pub struct ChainLevel {
    pub level: usize,
    /// Index into the underlying Følner sequence.
    pub index: u64,
    pub folner: FiniteSubset,
    pub envelope: FiniteSubset,
}

/// A built `(F_{n_k}, E_k)` chain, possibly cut short by a budget.
#[derive(Debug, Clone)]
pub struct Chain {
    pub kind: GroupKind,
    pub schedule: Schedule,
    pub levels: Vec<ChainLevel>,
    pub status: ExtractionStatus,
}

/// How the Følner indices of a chain are chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChainMode {
    /// Use the listed indices as `n_1, n_2, …`.
    Explicit { indices: Vec<u64> },
    /// Greedy extraction starting at `first_index`.
    Extract { first_index: u64, max_index: u64 },
}

impl Chain {
    /// Chain on fixed indices; the depth is the schedule's depth.
    pub fn explicit(family: FolnerFamily, indices: &[u64], sched: &Schedule, cap: usize) -> Result<Chain> {
        let depth = sched.depth();
        if indices.len() < depth {
            return Err(Error::invalid(format!("{} indices for depth {depth}", indices.len())));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("chain indices must be strictly increasing"));
        }
        let sets = indices[..depth]
            .iter()
            .enumerate()
            .map(|(k, &n)| Ok((n, family.set(n, cap).map_err(|e| e.at_level(k + 1))?)))
            .collect::<Result<Vec<_>>>()?;
        Chain::from_sets(sets, sched, cap)
    }

    /// Chain on caller-supplied `(index, F)` pairs, one per level up to the
    /// schedule's depth.
    pub fn from_sets(sets: Vec<(u64, FiniteSubset)>, sched: &Schedule, cap: usize) -> Result<Chain> {
        let depth = sched.depth();
        if sets.len() < depth {
            return Err(Error::invalid(format!("{} sets for depth {depth}", sets.len())));
        }
        let kind = sets[0].1.kind();
        for (k, (_, f)) in sets.iter().enumerate() {
            if f.kind() != kind {
                return Err(Error::GroupMismatch { left: kind, right: f.kind() }.at_level(k + 1));
            }
            if !f.contains_identity() || !f.is_symmetric() {
                return Err(Error::invalid("Følner sets must be symmetric and contain e").at_level(k + 1));
            }
        }
        let (indices, fsub): (Vec<u64>, Vec<FiniteSubset>) = sets.into_iter().take(depth).unzip();
        let e = build_e_sequence(&fsub, sched, depth, cap)?;
        let levels = fsub
            .into_iter()
            .zip(e)
            .zip(indices)
            .enumerate()
            .map(|(k, ((folner, envelope), index))| ChainLevel { level: k + 1, index, folner, envelope })
            .collect();
        Ok(Chain { kind, schedule: sched.clone(), levels, status: ExtractionStatus::Certified })
    }

    /// Chain whose indices come from [`extract_subsequence`].
    pub fn extract(family: FolnerFamily, first_index: u64, max_index: u64, sched: &Schedule, cap: usize) -> Result<Chain> {
        let ex = extract_subsequence(|n| family.set(n, cap), first_index, sched, max_index, cap)?;
        let levels = ex
            .levels
            .into_iter()
            .map(|l| ChainLevel { level: l.k, index: l.index, folner: l.folner, envelope: l.envelope })
            .collect();
        Ok(Chain { kind: family.kind(), schedule: sched.clone(), levels, status: ex.status })
    }

    pub fn build(family: FolnerFamily, mode: &ChainMode, sched: &Schedule, cap: usize) -> Result<Chain> {
        match mode {
            ChainMode::Explicit { indices } => Chain::explicit(family, indices, sched, cap),
            ChainMode::Extract { first_index, max_index } => {
                Chain::extract(family, *first_index, *max_index, sched, cap)
            }
        }
    }

    /// Number of levels actually built.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn is_complete(&self) -> bool {
        self.status == ExtractionStatus::Certified
    }

    /// 1-based level accessor.
    pub fn level(&self, n: usize) -> Result<&ChainLevel> {
        n.checked_sub(1)
            .and_then(|i| self.levels.get(i))
            .ok_or_else(|| Error::invalid(format!("chain has no level {n} (depth {})", self.depth())))
    }

    pub fn envelopes(&self) -> Vec<FiniteSubset> {
        self.levels.iter().map(|l| l.envelope.clone()).collect()
    }

    /// `ω` truncated at depth `k`.
    pub fn omega(&self, k: usize) -> Result<FinSupMeasure> {
        if k == 0 || k > self.depth() {
            return Err(Error::invalid(format!("truncation depth {k} outside 1..={}", self.depth())));
        }
        let e: Vec<FiniteSubset> = self.levels[..k].iter().map(|l| l.envelope.clone()).collect();
        build_omega(&e, &self.schedule)
    }

    /// `ι(H, H, E_n)` with `H = (E_{n−1}^{N(n)−2})⁻¹`; contains `F_n` and, on
    /// many chains, equals it.
    pub fn interior(&self, n: usize, cap: usize) -> Result<FiniteSubset> {
        if n < 2 {
            return Err(Error::invalid("interior identity starts at level 2"));
        }
        let h = envelope_factor(&self.level(n - 1)?.envelope, &self.schedule, n, cap)?;
        interior_bilateral(&h, &h, &self.level(n)?.envelope)
    }

    pub fn manifest(&self) -> Result<ChainManifest> {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                Ok(LevelManifest {
                    level: l.level,
                    index: l.index,
                    folner_size: l.folner.len() as u64,
                    envelope_size: l.envelope.len() as u64,
                    big_n: self.schedule.big_n(l.level)?,
                    t: RationalPair::from(&self.schedule.t(l.level)),
                    r: RationalPair::from(&self.schedule.r(l.level)),
                    folner_file: None,
                    envelope_file: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainManifest {
            group: self.kind,
            schedule: self.schedule.to_config(),
            status: StatusManifest::from(&self.status),
            levels,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatusManifest {
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_ratio: Option<RationalPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl From<&ExtractionStatus> for StatusManifest {
    fn from(s: &ExtractionStatus) -> Self {
        match s {
            ExtractionStatus::Certified => StatusManifest {
                certified: true,
                budget_level: None,
                best_index: None,
                best_ratio: None,
                reason: None,
            },
            ExtractionStatus::Budget { level, best, reason } => StatusManifest {
                certified: false,
                budget_level: Some(*level),
                best_index: best.as_ref().map(|b| b.0),
                best_ratio: best.as_ref().map(|b| RationalPair::from(&b.1)),
                reason: Some(reason.clone()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelManifest {
    pub level: usize,
    pub index: u64,
    pub folner_size: u64,
    pub envelope_size: u64,
    pub big_n: u64,
    pub t: RationalPair,
    pub r: RationalPair,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub folner_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainManifest {
    pub group: GroupKind,
    pub schedule: ScheduleConfig,
    pub status: StatusManifest,
    pub levels: Vec<LevelManifest>,
}

/// Smallest `k ≤ max_len` with `ball(radius) ⊆ (S ∪ {e})^k`, or `None`.
///
/// A hit for a ball containing the generators shows that `S` generates the
/// group.
pub fn support_reaches_ball(
    support: &FiniteSubset,
    desc: &GroupDescriptor,
    radius: u64,
    max_len: u64,
    cap: usize,
) -> Result<Option<u64>> {
    if support.kind() != desc.kind() {
        return Err(Error::GroupMismatch { left: support.kind(), right: desc.kind() });
    }
    let ball = word_ball(desc, radius, cap)?;
    let mut step = support.clone();
    step.insert(desc.identity())?;
    let mut reach = FiniteSubset::identity(desc.kind());
    for k in 1..=max_len {
        reach = product(&reach, &step, cap)?;
        if ball.is_subset(&reach) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
