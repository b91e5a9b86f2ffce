//! Certificates for the measure comparison inequality
//! `C (|F_n| / N) Σ_{j<N} dω^{(j)}/dλ(g) ≥ 1` on `F_n`, and the finite-n
//! inequalities behind it. Verdicts use exact rationals only; the float
//! columns are diagnostics.

mod limits;

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use limits::{c_prime, limit_diagnostics, limit_profile, LimitRow};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::measure::{power_densities, FinSupMeasure, PowerDensities, Truncation};
use crate::omega::Chain;
use crate::rational::{self, RationalPair};
use crate::set::FiniteSubset;

/// `Σ_{j=0}^{N−1} j (1−r)^{j−1} = (1 − rN(1−r)^{N−1} − (1−r)^N) / r²`.
pub fn arithgeo_closed_form(r: &BigRational, n: u64) -> Result<BigRational> {
    if !r.is_positive() || *r >= BigRational::one() {
        return Err(Error::invalid(format!("r = {r} outside (0, 1)")));
    }
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let q = BigRational::one() - r;
    let q_nm1 = rational::pow(&q, n - 1);
    let q_n = &q_nm1 * &q;
    let num = BigRational::one() - r * BigRational::from_integer(n.into()) * &q_nm1 - q_n;
    Ok(num / (r * r))
}

/// Term-by-term sum; the oracle for [`arithgeo_closed_form`].
pub fn arithgeo_brute(r: &BigRational, n: u64) -> BigRational {
    let q = BigRational::one() - r;
    let mut acc = BigRational::zero();
    let mut q_pow = BigRational::one(); // (1−r)^{j−1}
    for j in 1..n {
        acc += &q_pow * BigRational::from_integer(j.into());
        q_pow *= &q;
    }
    acc
}

/// `(λF/λE)(1 − r_{n+1}/r_n)((1 − (1−r_n)^N)/(r_n N) − (1−r_n)^{N−1})`.
///
/// Requires `0 < r_{n+1} < r_n ≤ 1`; `r_n = 1` is the first tail of any
/// probability weight sequence and keeps the formula finite.
pub fn finite_n_lower_bound(
    lam_f: u64,
    lam_e: u64,
    r_n: &BigRational,
    r_np1: &BigRational,
    big_n: u64,
) -> Result<BigRational> {
    if lam_f == 0 || lam_e == 0 || big_n == 0 {
        return Err(Error::invalid("sizes and N must be positive"));
    }
    if !r_np1.is_positive() || r_np1 >= r_n || *r_n > BigRational::one() {
        return Err(Error::invalid(format!("tails must satisfy 0 < {r_np1} < {r_n} ≤ 1")));
    }
    let one = BigRational::one();
    let q = &one - r_n;
    let q_nm1 = rational::pow(&q, big_n - 1);
    let q_n = &q_nm1 * &q;
    let n = BigRational::from_integer(big_n.into());
    let bracket = (&one - q_n) / (r_n * &n) - q_nm1;
    let ratio = BigRational::new(lam_f.into(), lam_e.into());
    Ok(ratio * (one - r_np1 / r_n) * bracket)
}

/// Minimum over `eval` of `(|eval| / N) Σ_{j<N} dω^{(j)}/dλ`.
#[derive(Debug, Clone)]
pub struct MinScaled {
    pub value: BigRational,
    pub argmin: GroupElement,
    pub truncation: Truncation,
}

fn min_from_densities(pd: &PowerDensities, big_n: u64, size: usize) -> Result<MinScaled> {
    let rows = &pd.values[..big_n as usize];
    let scale = BigRational::new(BigInt::from(size), BigInt::from(big_n));
    let (i, sum) = (0..pd.eval.len())
        .map(|i| (i, rows.iter().map(|row| &row[i]).sum::<BigRational>()))
        .min_by(|a, b| a.1.cmp(&b.1))
        .ok_or_else(|| Error::invalid("empty evaluation set"))?;
    Ok(MinScaled { value: sum * scale, argmin: pd.eval[i].clone(), truncation: pd.truncation })
}

pub fn min_scaled_cesaro(
    omega: &FinSupMeasure,
    big_n: u64,
    fn_set: &FiniteSubset,
    cap: Option<usize>,
) -> Result<MinScaled> {
    if big_n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    if fn_set.is_empty() {
        return Err(Error::invalid("empty Følner set"));
    }
    let pd = power_densities(omega, (big_n - 1) as usize, fn_set, cap)?;
    min_from_densities(&pd, big_n, fn_set.len())
}

/// Densities `dω^{(j)}/dλ` on `F_n` for `j < N(n)`, computed once per level
/// and shared by the report and the lower-estimate check.
#[derive(Debug, Clone)]
pub struct LevelEvaluation {
    pub level: usize,
    pub index: u64,
    pub truncation_depth: usize,
    pub folner_size: u64,
    pub envelope_size: u64,
    pub big_n: u64,
    pub densities: PowerDensities,
}

impl LevelEvaluation {
    /// `ω` is the chain measure truncated at depth `k ≥ n`.
    pub fn compute(chain: &Chain, n: usize, k: usize, cap: Option<usize>) -> Result<LevelEvaluation> {
        Self::compute_with_length(chain, n, k, chain.schedule.big_n(n)?, cap)
    }

    /// As [`LevelEvaluation::compute`] with the Cesàro length `big_n` in
    /// place of `N(n)`.
    pub fn compute_with_length(
        chain: &Chain,
        n: usize,
        k: usize,
        big_n: u64,
        cap: Option<usize>,
    ) -> Result<LevelEvaluation> {
        if k < n {
            return Err(Error::invalid(format!("truncation depth {k} below level {n}")));
        }
        if big_n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        let lvl = chain.level(n)?;
        let omega = chain.omega(k)?;
        let densities = power_densities(&omega, (big_n - 1) as usize, &lvl.folner, cap)?;
        Ok(LevelEvaluation {
            level: n,
            index: lvl.index,
            truncation_depth: k,
            folner_size: lvl.folner.len() as u64,
            envelope_size: lvl.envelope.len() as u64,
            big_n,
            densities,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub level: usize,
    pub index: u64,
    pub truncation_depth: usize,
    pub folner_size: u64,
    pub envelope_size: u64,
    pub big_n: u64,
    pub min_scaled: RationalPair,
    /// Hex encoding of a minimizing element.
    pub argmin: String,
    pub bound: RationalPair,
    /// `1 / min_scaled`; `None` stands for `+∞` (zero minimum).
    pub c_emp: Option<RationalPair>,
    pub verdict: Verdict,
    /// Support capping occurred: `min_scaled` is a lower bound.
    pub taint: bool,
    pub diagnostics: ReportDiagnostics,
}

/// Float views of the exact columns; never used for the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDiagnostics {
    pub min_scaled: f64,
    pub bound: f64,
    /// `min_scaled · |E_n| / |F_n|`, comparable with `c_prime`.
    pub min_scaled_times_e_over_f: f64,
    pub c_prime: f64,
}

impl DominanceReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn min_scaled_exact(&self) -> Result<BigRational> {
        BigRational::try_from(&self.min_scaled)
    }

    pub fn bound_exact(&self) -> Result<BigRational> {
        BigRational::try_from(&self.bound)
    }

    pub fn c_emp_exact(&self) -> Result<Option<BigRational>> {
        self.c_emp.as_ref().map(BigRational::try_from).transpose()
    }

    pub fn from_evaluation(ev: &LevelEvaluation, chain: &Chain) -> Result<DominanceReport> {
        let n = ev.level;
        let min = min_from_densities(&ev.densities, ev.big_n, ev.folner_size as usize)?;
        let bound = finite_n_lower_bound(
            ev.folner_size,
            ev.envelope_size,
            &chain.schedule.r(n),
            &chain.schedule.r(n + 1),
            ev.big_n,
        )?;
        let pass = bound.is_positive() && min.value >= bound;
        let c_emp = (!min.value.is_zero()).then(|| min.value.recip());
        let ms = rational::to_f64(&min.value);
        Ok(DominanceReport {
            level: n,
            index: ev.index,
            truncation_depth: ev.truncation_depth,
            folner_size: ev.folner_size,
            envelope_size: ev.envelope_size,
            big_n: ev.big_n,
            min_scaled: RationalPair::from(&min.value),
            argmin: min.argmin.encode_hex(),
            bound: RationalPair::from(&bound),
            c_emp: c_emp.as_ref().map(RationalPair::from),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            taint: min.truncation == Truncation::MassDropped,
            diagnostics: ReportDiagnostics {
                min_scaled: ms,
                bound: rational::to_f64(&bound),
                min_scaled_times_e_over_f: ms * ev.envelope_size as f64 / ev.folner_size as f64,
                c_prime: c_prime(),
            },
        })
    }
}

/// Report for level `n` of `chain` with `ω` truncated at depth `k`.
pub fn dominance_report(chain: &Chain, n: usize, k: usize, cap: Option<usize>) -> Result<DominanceReport> {
    let ev = LevelEvaluation::compute(chain, n, k, cap)?;
    DominanceReport::from_evaluation(&ev, chain)
}

const CSV_HEADER: &str = "n,folner_size,envelope_size,N,min_density,bound,c_emp,verdict,taint";

fn frac_str(p: &RationalPair) -> String {
    if p.den == "1" {
        p.num.clone()
    } else {
        format!("{}/{}", p.num, p.den)
    }
}

/// One summary row per report.
pub fn write_reports_csv<W: Write>(reports: &[DominanceReport], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.level,
            r.folner_size,
            r.envelope_size,
            r.big_n,
            frac_str(&r.min_scaled),
            frac_str(&r.bound),
            r.c_emp.as_ref().map_or_else(|| "inf".to_string(), frac_str),
            match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
            },
            r.taint
        )?;
    }
    Ok(())
}

/// One row of the pointwise lower estimate at a fixed `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerEstimateRow {
    pub j: u64,
    /// `min_{g ∈ F_n} dω^{(j)}/dλ(g)`
    pub min_density: RationalPair,
    /// `(Σ_{i<n} t_i)^{j−1} t_n j / |E_n|`
    pub bound: RationalPair,
    pub holds: bool,
}

/// `dω^{(j)}/dλ(g) ≥ (Σ_{i<n} t_i)^{j−1} t_n j / |E_n|` on `F_n`, all
/// `1 ≤ j < N(n)`.
pub fn lower_estimate_check(ev: &LevelEvaluation, chain: &Chain) -> Result<Vec<LowerEstimateRow>> {
    let n = ev.level;
    let head: BigRational = (1..n).map(|i| chain.schedule.t(i)).sum();
    let t_n = chain.schedule.t(n);
    let e = BigRational::from_integer(ev.envelope_size.into());
    let mut rows = Vec::new();
    for j in 1..ev.big_n {
        let bound = rational::pow(&head, j - 1) * &t_n * BigRational::from_integer(j.into()) / &e;
        let min = ev.densities.values[j as usize]
            .iter()
            .min()
            .cloned()
            .ok_or_else(|| Error::invalid("empty evaluation set"))?;
        rows.push(LowerEstimateRow {
            j,
            holds: min >= bound,
            min_density: RationalPair::from(&min),
            bound: RationalPair::from(&bound),
        });
    }
    Ok(rows)
}
