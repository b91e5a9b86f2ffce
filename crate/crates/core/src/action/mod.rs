//! Measure-preserving actions through finite quotients.
//!
//! The state space is a finite quotient group `Q` with uniform probability;
//! `g` acts by left multiplication with its image. Observables transform as
//! `α_g(x)(s) = x(g⁻¹s)` and, for matrices, `α_g(x) = U_g x U_gᵀ`, so that
//! `α_{gh} = α_g ∘ α_h`. Every average over the group (Følner averages,
//! the Markov operator, the invariant projection) is first pushed forward
//! to a weight vector on `Q`.

mod battery;
mod observable;
mod psd;
mod quotient;

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use battery::{function_battery, psd_battery, random_symmetric, symmetric_battery};
pub use observable::{Observable, ObservableSpec, SymMatrix};
pub use psd::{psd_exact, psd_f64, PsdCertificate};
pub use quotient::{Quotient, MAX_QUOTIENT};

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::measure::FinSupMeasure;
use crate::omega::FolnerFamily;
use crate::set::FiniteSubset;

/// Weights on the states of the quotient, indexed like the states.
pub type Weights = Vec<BigRational>;

#[derive(Debug, Clone)]
pub struct FiniteAction {
    quotient: Quotient,
    size: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    prob: Vec<BigRational>,
}

impl FiniteAction {
    pub fn new(quotient: Quotient) -> Result<FiniteAction> {
        let size = quotient.size()?;
        let mut table = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                table.push(quotient.mul_states(x, y) as u32);
            }
        }
        let mut inverse = vec![0u32; size];
        for x in 0..size {
            inverse[x] = (0..size)
                .find(|&y| table[x * size + y] == 0)
                .ok_or_else(|| Error::invalid("quotient table has no inverse"))? as u32;
        }
        let p = BigRational::new(1.into(), size.into());
        Ok(FiniteAction { quotient, size, table, inverse, prob: vec![p; size] })
    }

    pub fn quotient(&self) -> Quotient {
        self.quotient
    }

    /// Number of states.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Probability of each state (uniform).
    pub fn probabilities(&self) -> &[BigRational] {
        &self.prob
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y] as usize
    }

    /// The permutation `s ↦ q·s`.
    pub fn perm_of_state(&self, q: usize) -> Vec<usize> {
        (0..self.size).map(|s| self.mul(q, s)).collect()
    }

    pub fn perm(&self, g: &GroupElement) -> Result<Vec<usize>> {
        Ok(self.perm_of_state(self.quotient.project(g)?))
    }

    /// `perm(ab) = perm(a) ∘ perm(b)` on every pair from `elems`.
    pub fn check_homomorphism(&self, elems: &[GroupElement]) -> Result<bool> {
        for a in elems {
            let pa = self.perm(a)?;
            for b in elems {
                let pb = self.perm(b)?;
                let pab = self.perm(&a.mul(b)?)?;
                if (0..self.size).any(|s| pab[s] != pa[pb[s]]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `p ∘ perm(q)⁻¹ = p` for every state `q`.
    pub fn is_measure_preserving(&self) -> bool {
        (0..self.size).all(|q| (0..self.size).all(|s| self.prob[self.mul(self.inverse[q] as usize, s)] == self.prob[s]))
    }

    /// `α_q(x)` for a single state `q`.
    pub fn act_state(&self, q: usize, x: &Observable) -> Observable {
        match x {
            Observable::Function(v) => {
                let qi = self.inverse[q] as usize;
                Observable::Function((0..self.size).map(|s| v[self.mul(qi, s)].clone()).collect())
            }
            Observable::Matrix(m) => Observable::Matrix(m.conjugate_by(&self.perm_of_state(q))),
        }
    }

    pub fn act(&self, g: &GroupElement, x: &Observable) -> Result<Observable> {
        Ok(self.act_state(self.quotient.project(g)?, x))
    }

    fn check_dim(&self, x: &Observable) -> Result<()> {
        if x.dim() != self.size {
            return Err(Error::invalid(format!("observable of dimension {} on {} states", x.dim(), self.size)));
        }
        Ok(())
    }

    /// `Σ_q w_q α_q(x)`.
    pub fn apply(&self, w: &[BigRational], x: &Observable) -> Result<Observable> {
        self.check_dim(x)?;
        if w.len() != self.size {
            return Err(Error::invalid("weight vector does not match the state space"));
        }
        match x {
            Observable::Function(v) => {
                let mut out = vec![BigRational::zero(); self.size];
                for (q, wq) in w.iter().enumerate().filter(|(_, wq)| !wq.is_zero()) {
                    let qi = self.inverse[q] as usize;
                    for (s, o) in out.iter_mut().enumerate() {
                        let val = &v[self.mul(qi, s)];
                        if !val.is_zero() {
                            *o += wq * val;
                        }
                    }
                }
                Ok(Observable::Function(out))
            }
            Observable::Matrix(m) => {
                let n = self.size;
                let mut out = SymMatrix::zero(n);
                for (q, wq) in w.iter().enumerate().filter(|(_, wq)| !wq.is_zero()) {
                    let perm = self.perm_of_state(q);
                    for s in 0..n {
                        for t in 0..n {
                            let val = m.get(s, t);
                            if !val.is_zero() {
                                *out.get_mut(perm[s], perm[t]) += wq * val;
                            }
                        }
                    }
                }
                Ok(Observable::Matrix(out))
            }
        }
    }

    /// Uniform weights over `f` pushed to the quotient.
    pub fn push_set(&self, f: &FiniteSubset) -> Result<Weights> {
        if f.is_empty() {
            return Err(Error::invalid("averaging over an empty set"));
        }
        let mut counts = vec![0u64; self.size];
        for g in f {
            counts[self.quotient.project(g)?] += 1;
        }
        let total = f.len() as u64;
        Ok(counts.into_iter().map(|c| BigRational::new(c.into(), total.into())).collect())
    }

    pub fn push_measure(&self, mu: &FinSupMeasure) -> Result<Weights> {
        let mut w = vec![BigRational::zero(); self.size];
        for (g, m) in mu.iter_masses() {
            w[self.quotient.project(g)?] += m;
        }
        Ok(w)
    }

    /// Pushed uniform weights of `family` at index `n`; lamplighter sets on
    /// a lamplighter quotient are counted instead of enumerated.
    pub fn folner_weights(&self, family: &FolnerFamily, n: u64, cap: usize) -> Result<Weights> {
        match (family, self.quotient) {
            (FolnerFamily::Lamplighter, Quotient::LamplighterMod { m }) => lamplighter_folner_weights(n, m),
            _ => self.push_set(&family.set(n, cap)?),
        }
    }

    /// `A_F(x) = (1/|F|) Σ_{g∈F} α_g(x)`.
    pub fn ergodic_average(&self, f: &FiniteSubset, x: &Observable) -> Result<Observable> {
        self.apply(&self.push_set(f)?, x)
    }

    /// `T(x) = Σ_g ω(g) α_g(x)`.
    pub fn markov_apply(&self, omega: &FinSupMeasure, x: &Observable) -> Result<Observable> {
        self.apply(&self.push_measure(omega)?, x)
    }

    /// `M_N(x) = (1/N) Σ_{j<N} T^j(x)` by iterating `T` on the quotient.
    pub fn cesaro_mean(&self, omega: &FinSupMeasure, big_n: u64, x: &Observable) -> Result<Observable> {
        if big_n == 0 {
            return Err(Error::invalid("Cesàro length must be positive"));
        }
        let w = self.push_measure(omega)?;
        let mut term = x.clone();
        let mut sum = x.clone();
        for _ in 1..big_n {
            term = self.apply(&w, &term)?;
            sum = sum.add(&term)?;
        }
        Ok(sum.scale(&BigRational::new(1.into(), big_n.into())))
    }

    /// Closure of `start` under left multiplication by `gens`.
    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(s) = queue.pop_front() {
            for &g in gens {
                let t = self.mul(g, s);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        (0..self.size).filter(|&s| seen[s]).collect()
    }

    /// States of the image of the group (all of `Q` for the shipped
    /// quotients, which are onto).
    pub fn image(&self) -> Result<Vec<usize>> {
        let desc = GroupDescriptor::standard(self.quotient.kind());
        let gens = desc.generators().iter().map(|g| self.quotient.project(g)).collect::<Result<Vec<_>>>()?;
        Ok(self.closure(&gens))
    }

    /// The images of `support` generate the image of the group.
    pub fn support_generates(&self, support: &FiniteSubset) -> Result<bool> {
        let gens = support.iter().map(|g| self.quotient.project(g)).collect::<Result<Vec<_>>>()?;
        Ok(self.closure(&gens).len() == self.image()?.len())
    }

    /// `𝒫(x)`, the average of `α_q(x)` over the image.
    pub fn invariant_projection(&self, x: &Observable) -> Result<Observable> {
        let image = self.image()?;
        let mut w = vec![BigRational::zero(); self.size];
        let share = BigRational::new(1.into(), image.len().into());
        for q in image {
            w[q] = share.clone();
        }
        self.apply(&w, x)
    }

    /// `A_n(x) ≤ c · M_N(x)` pointwise or in PSD order.
    pub fn check_dominance(
        &self,
        folner: &FiniteSubset,
        omega: &FinSupMeasure,
        big_n: u64,
        c: &BigRational,
        x: &Observable,
    ) -> Result<DominanceCheck> {
        if !x.is_positive() {
            return Err(Error::invalid("dominance is only asserted for positive observables"));
        }
        let a = self.ergodic_average(folner, x)?;
        let m = self.cesaro_mean(omega, big_n, x)?;
        let d = m.scale(c).sub(&a)?;
        Ok(order_slack(&d))
    }

    /// `‖A_n(x) − 𝒫(x)‖_∞` per pushed Følner average.
    pub fn convergence_diagnostics(&self, folner: &[(u64, Weights)], x: &Observable) -> Result<Vec<ConvergenceRow>> {
        let p = self.invariant_projection(x)?;
        folner
            .iter()
            .map(|(n, w)| {
                let d = self.apply(w, x)?.sub(&p)?.sup_norm();
                Ok(ConvergenceRow { n: *n, distance: d })
            })
            .collect()
    }

    /// `‖x‖₁ = Σ_s p(s)|x(s)|`.
    pub fn l1_norm(&self, x: &Observable) -> Result<BigRational> {
        let v = x.values().ok_or_else(|| Error::invalid("L1 norm is computed for functions"))?;
        Ok(v.iter().zip(&self.prob).map(|(a, p)| a.abs() * p).sum())
    }

    /// `e = {s : max_n A_n(x)(s) ≤ c·ε}` and the check
    /// `p(X \ e) ≤ (4c/ε)‖x‖₁`.
    pub fn weak11_probe(
        &self,
        folner: &[(u64, Weights)],
        x: &Observable,
        eps: &BigRational,
        c: &BigRational,
    ) -> Result<Weak11Probe> {
        if !eps.is_positive() {
            return Err(Error::invalid("ε must be positive"));
        }
        let v = x.values().ok_or_else(|| Error::invalid("weak (1,1) probe is for functions"))?;
        if v.iter().any(|a| a.is_negative()) {
            return Err(Error::invalid("weak (1,1) probe needs x ≥ 0"));
        }
        let mut maxima = vec![BigRational::zero(); self.size];
        for (_, w) in folner {
            let a = self.apply(w, x)?;
            for (m, val) in maxima.iter_mut().zip(a.values().expect("function in, function out")) {
                if val > m {
                    *m = val.clone();
                }
            }
        }
        let threshold = c * eps;
        let good: Vec<usize> = (0..self.size).filter(|&s| maxima[s] <= threshold).collect();
        let complement_mass: BigRational = (0..self.size)
            .filter(|s| maxima[*s] > threshold)
            .map(|s| self.prob[s].clone())
            .sum();
        let bound = BigRational::from_integer(4.into()) * c / eps * self.l1_norm(x)?;
        Ok(Weak11Probe { holds: complement_mass <= bound, good_states: good, complement_mass, bound })
    }

    /// `A(x)² ≤ A(x²)` in PSD order for `A = A_F`.
    pub fn kadison_check(&self, f: &FiniteSubset, x: &Observable) -> Result<DominanceCheck> {
        let m = x.matrix().ok_or_else(|| Error::invalid("Kadison check is for matrices"))?;
        let ax = self.ergodic_average(f, x)?;
        let ax2 = self.ergodic_average(f, &Observable::Matrix(m.square()))?;
        let lhs = ax.matrix().expect("matrix in, matrix out").square();
        Ok(order_slack(&ax2.sub(&Observable::Matrix(lhs))?))
    }
}

/// Uniform weights over the lamplighter set `F_n` pushed to
/// `LamplighterMod { m }`, counted without enumerating `F_n`.
///
/// Elements are grouped by the hull `[lo, hi] ⊇ {0, p}` of `M ∪ {0, p}`:
/// a hull endpoint outside `{0, p}` is forced into `M`, every other site is
/// free, and the free sites map onto the span of their residues with
/// fibres of equal size.
pub fn lamplighter_folner_weights(n: u64, m: u32) -> Result<Weights> {
    // |F_n| = 2^n(n²+4n+2) stays below 2^128
    const MAX_N: u64 = 100;
    if n == 0 {
        return Err(Error::invalid("Følner index starts at 1"));
    }
    if n > MAX_N {
        return Err(Error::ResourceLimit { what: "lamplighter pushforward radius", cap: MAX_N as usize });
    }
    let q = Quotient::LamplighterMod { m };
    let size = q.size()?;
    let (mu, n) = (m as i64, n as i64);
    let res = |x: i64| x.rem_euclid(mu) as usize;
    let mut counts = vec![0u128; size];
    let mut span_counts = vec![0u128; 1 << m];
    for p in -n..=n {
        let (a, b) = (p.min(0), p.max(0));
        for lo in (b - n)..=a {
            for hi in b..=(lo + n) {
                let mut forced = 0usize;
                let mut free = hi - lo + 1;
                if lo < a {
                    forced ^= 1 << res(lo);
                    free -= 1;
                }
                if hi > b {
                    forced ^= 1 << res(hi);
                    free -= 1;
                }
                // residues of the free sites
                let mut covered = 0usize;
                let first = if lo < a { lo + 1 } else { lo };
                for j in first..first + free.min(mu) {
                    covered |= 1 << res(j);
                }
                let fibre = 1u128 << (free - i64::from(covered.count_ones()));
                // every mask in the span of `covered`
                span_counts.iter_mut().for_each(|c| *c = 0);
                let mut sub = covered;
                loop {
                    span_counts[sub] += fibre;
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & covered;
                }
                let pos = res(p);
                for (mask, &c) in span_counts.iter().enumerate().filter(|(_, c)| **c > 0) {
                    counts[pos + m as usize * (mask ^ forced)] += c;
                }
            }
        }
    }
    let total: u128 = counts.iter().sum();
    debug_assert_eq!(total, (1u128 << n) * (n * n + 4 * n + 2) as u128);
    Ok(counts.into_iter().map(|c| BigRational::new(c.into(), total.into())).collect())
}

/// Verdict of an order inequality `d ≥ 0` with its exact slack: the
/// minimum value for functions, the minimum LDLᵀ pivot for matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceCheck {
    pub holds: bool,
    pub slack: BigRational,
}

fn order_slack(d: &Observable) -> DominanceCheck {
    match d {
        Observable::Function(v) => {
            let slack = v.iter().min().cloned().unwrap_or_else(BigRational::zero);
            DominanceCheck { holds: !slack.is_negative(), slack }
        }
        Observable::Matrix(m) => {
            let cert = psd_exact(m);
            DominanceCheck { holds: cert.psd, slack: cert.min_pivot }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub distance: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weak11Probe {
    pub good_states: Vec<usize>,
    pub complement_mass: BigRational,
    pub bound: BigRational,
    pub holds: bool,
}

/// Action section of a run configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionConfig {
    #[serde(flatten)]
    pub quotient: Quotient,
    #[serde(default)]
    pub observables: Vec<ObservableSpec>,
}

/// Unit constant observable on `n` states.
pub fn one(n: usize) -> Observable {
    Observable::constant(n, BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn z4() -> FiniteAction {
        FiniteAction::new(Quotient::ZdMod { dim: 1, m: 4 }).unwrap()
    }

    #[test]
    fn z4_average_of_indicator() {
        let act = z4();
        let x = Observable::indicator(4, &[0]).unwrap();
        let a = act.ergodic_average(&FiniteSubset::interval(-1, 1), &x).unwrap();
        assert_eq!(a.values().unwrap(), &[frac(1, 3), frac(1, 3), frac(0, 1), frac(1, 3)]);
        let e = act.ergodic_average(&FiniteSubset::identity(act.quotient().kind()), &x).unwrap();
        assert_eq!(e, x);
    }

    #[test]
    fn z4_markov_and_projection() {
        let act = z4();
        let x = Observable::indicator(4, &[0]).unwrap();
        let u = FinSupMeasure::uniform(&FiniteSubset::interval(-1, 1)).unwrap();
        let t = act.markov_apply(&u, &x).unwrap();
        assert_eq!(t.values().unwrap(), &[frac(1, 3), frac(1, 3), frac(0, 1), frac(1, 3)]);
        let d = FinSupMeasure::identity(act.quotient().kind());
        assert_eq!(act.cesaro_mean(&d, 5, &x).unwrap(), x);
        let p = act.invariant_projection(&x).unwrap();
        assert_eq!(p, Observable::constant(4, frac(1, 4)));
        assert_eq!(act.invariant_projection(&p).unwrap(), p);
    }

    #[test]
    fn swap_matrix_examples() {
        let act = FiniteAction::new(Quotient::ZdMod { dim: 1, m: 2 }).unwrap();
        let x = Observable::Matrix(SymMatrix::from_fn(2, |i, j| frac(i64::from(i == 0 && j == 0), 1)).unwrap());
        let f = FiniteSubset::interval(0, 1);
        let a = act.ergodic_average(&f, &x).unwrap();
        assert_eq!(a, Observable::Matrix(SymMatrix::identity(2)).scale(&frac(1, 2)));
        let k = act.kadison_check(&f, &x).unwrap();
        assert!(k.holds);
        assert_eq!(k.slack, frac(1, 4));
        let id = Observable::Matrix(SymMatrix::identity(2));
        let k = act.kadison_check(&f, &id).unwrap();
        assert!(k.holds && k.slack.is_zero());
    }

    #[test]
    fn projection_commutes_with_unitaries() {
        let act = FiniteAction::new(Quotient::ZdMod { dim: 1, m: 3 }).unwrap();
        let x = Observable::Matrix(SymMatrix::from_fn(3, |i, j| frac((i * 3 + j * 3 + i * j) as i64, 1)).unwrap());
        let p = act.invariant_projection(&x).unwrap();
        for q in 0..3 {
            assert!(p.matrix().unwrap().commutator_norm(&act.perm_of_state(q)).is_zero());
        }
    }

    #[test]
    fn homomorphism_and_preservation() {
        let act = FiniteAction::new(Quotient::LamplighterMod { m: 2 }).unwrap();
        let elems: Vec<_> = [(0, vec![]), (1, vec![0]), (-1, vec![2, 3]), (3, vec![-1])]
            .iter()
            .map(|(p, l)| GroupElement::lamplighter(*p, l))
            .collect();
        assert!(act.check_homomorphism(&elems).unwrap());
        assert!(act.is_measure_preserving());
    }

    #[test]
    fn counted_pushforward_matches_enumeration() {
        for m in [1u32, 2, 3] {
            let act = FiniteAction::new(Quotient::LamplighterMod { m }).unwrap();
            for n in 1..=6u64 {
                let f = crate::omega::FolnerFamily::Lamplighter.set(n, 1_000_000).unwrap();
                assert_eq!(lamplighter_folner_weights(n, m).unwrap(), act.push_set(&f).unwrap(), "m={m} n={n}");
            }
        }
    }
}
