//! Finite quotient actions: averages, Markov operator, projection and the
//! order checks, against direct-sum oracles.

use ergodom::action::{
    one, psd_exact, psd_battery, FiniteAction, Observable, Quotient, SymMatrix, MAX_QUOTIENT,
};
use ergodom::dominance::dominance_report;
use ergodom::measure::convolution_powers;
use ergodom::omega::{Chain, FolnerFamily};
use ergodom::rational::frac;
use ergodom::set::DEFAULT_CAP;
use ergodom::{FinSupMeasure, FiniteSubset, GroupElement, GroupKind, Schedule};
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn zmod(m: u32) -> FiniteAction {
    FiniteAction::new(Quotient::ZdMod { dim: 1, m }).unwrap()
}

fn indicator(dim: usize, s: usize) -> Observable {
    Observable::indicator(dim, &[s]).unwrap()
}

#[test]
fn z4_cube_convergence_table() {
    let act = zmod(4);
    let x = indicator(4, 0);
    let cube = FolnerFamily::ZdCube { dim: 1 };
    let weights: Vec<_> = (1..=12).map(|n| (n, act.folner_weights(&cube, n, DEFAULT_CAP).unwrap())).collect();
    let rows = act.convergence_diagnostics(&weights, &x).unwrap();
    for row in rows {
        let n = row.n as i64;
        // A_n(x)(s) = #{g ∈ [−n, n] : g ≡ s} / (2n+1)
        let oracle = (0..4i64)
            .map(|s| {
                let hits = (-n..=n).filter(|g| g.rem_euclid(4) == s).count() as i64;
                (frac(hits, 2 * n + 1) - frac(1, 4)).abs()
            })
            .max()
            .unwrap();
        assert_eq!(row.distance, oracle, "n = {n}");
        // 2n+1 is odd, so the residues are never equidistributed
        assert!(!row.distance.is_zero());
    }
}

#[test]
fn invariant_observables_have_zero_distance() {
    let act = zmod(6);
    let c = Observable::constant(6, frac(3, 2));
    let cube = FolnerFamily::ZdCube { dim: 1 };
    let weights: Vec<_> = (1..=5).map(|n| (n, act.folner_weights(&cube, n, DEFAULT_CAP).unwrap())).collect();
    assert!(act.convergence_diagnostics(&weights, &c).unwrap().iter().all(|r| r.distance.is_zero()));
    assert_eq!(act.invariant_projection(&c).unwrap(), c);
}

#[test]
fn z16_weak_type_probe() {
    let act = zmod(16);
    let x = indicator(16, 0);
    let cube = FolnerFamily::ZdCube { dim: 1 };
    let weights: Vec<_> = (1..=8).map(|n| (n, act.folner_weights(&cube, n, DEFAULT_CAP).unwrap())).collect();
    let eps = frac(1, 8);
    let c = BigRational::one();
    let probe = act.weak11_probe(&weights, &x, &eps, &c).unwrap();
    // max_n A_n(x)(s) = 1/(2|s|+1) for |s| ≤ 8, above 1/8 exactly for |s| ≤ 3
    let bad: Vec<usize> = (0..16).filter(|s| probe.good_states.binary_search(s).is_err()).collect();
    assert_eq!(bad, vec![0, 1, 2, 3, 13, 14, 15]);
    assert_eq!(probe.complement_mass, frac(7, 16));
    assert_eq!(probe.bound, frac(2, 1));
    assert!(probe.holds);
    // doubling x and ε keeps the good set
    let doubled = act.weak11_probe(&weights, &x.scale(&frac(2, 1)), &frac(1, 4), &c).unwrap();
    assert_eq!(doubled.good_states, probe.good_states);
    assert_eq!(act.l1_norm(&x.scale(&frac(2, 1))).unwrap(), frac(2, 16));
    // ε above every average: nothing is excluded
    let loose = act.weak11_probe(&weights, &x, &frac(1, 2), &c).unwrap();
    assert_eq!(loose.good_states.len(), 16);
    assert!(loose.complement_mass.is_zero());
}

fn z_chain() -> Chain {
    Chain::explicit(FolnerFamily::ZdCube { dim: 1 }, &[1, 3], &Schedule::standard(2), DEFAULT_CAP).unwrap()
}

#[test]
fn markov_operator_and_projection_identities() {
    let act = zmod(8);
    let omega = z_chain().omega(2).unwrap();
    let mass = omega.total_mass();
    let normalized = omega.scale(&mass.recip()).unwrap();
    assert!(act.support_generates(&omega.support()).unwrap());
    for x in ergodom::action::function_battery(8, 20, 1) {
        let p = act.invariant_projection(&x).unwrap();
        assert_eq!(act.invariant_projection(&p).unwrap(), p, "𝒫² = 𝒫");
        assert_eq!(act.markov_apply(&normalized, &p).unwrap(), p, "T𝒫 = 𝒫");
        assert_eq!(act.invariant_projection(&act.markov_apply(&normalized, &x).unwrap()).unwrap(), p, "𝒫T = 𝒫");
        assert_eq!(act.markov_apply(&omega, &p).unwrap(), p.scale(&mass), "sub-probability ω scales 𝒫");
    }
}

#[test]
fn positive_unital_maps() {
    let act = zmod(5);
    let omega = z_chain().omega(2).unwrap();
    let mass = omega.total_mass();
    let u = one(5);
    let f = FiniteSubset::interval(-2, 4);
    assert_eq!(act.ergodic_average(&f, &u).unwrap(), u);
    assert_eq!(act.markov_apply(&omega, &u).unwrap(), u.scale(&mass));
    let big_n = 6u64;
    let geometric: BigRational = (0..big_n).map(|j| ergodom::rational::pow(&mass, j)).sum();
    assert_eq!(act.cesaro_mean(&omega, big_n, &u).unwrap(), u.scale(&(geometric / BigRational::from_integer(6.into()))));
    for x in ergodom::action::function_battery(5, 20, 2) {
        assert!(act.ergodic_average(&f, &x).unwrap().is_positive());
        assert!(act.cesaro_mean(&omega, 4, &x).unwrap().is_positive());
    }
}

#[test]
fn cesaro_mean_matches_pushed_density() {
    let act = zmod(8);
    let omega = z_chain().omega(2).unwrap();
    let big_n = 4u64;
    let powers = convolution_powers(&omega, (big_n - 1) as usize, None).unwrap();
    let avg = powers
        .iter()
        .try_fold(FinSupMeasure::zero(GroupKind::Zd { dim: 1 }), |acc, p| acc.add(p))
        .unwrap()
        .scale(&frac(1, big_n as i64))
        .unwrap();
    for x in ergodom::action::function_battery(8, 10, 3) {
        assert_eq!(act.cesaro_mean(&omega, big_n, &x).unwrap(), act.markov_apply(&avg, &x).unwrap());
    }
}

#[test]
fn z8_level_two_dominance_for_an_indicator() {
    let chain =
        Chain::explicit(FolnerFamily::ZdPolyGrowth { dim: 1 }, &[1, 2], &Schedule::standard(2), DEFAULT_CAP).unwrap();
    let report = dominance_report(&chain, 2, 2, None).unwrap();
    let c = report.c_emp_exact().unwrap().unwrap();
    let act = zmod(8);
    let check = act
        .check_dominance(&chain.level(2).unwrap().folner, &chain.omega(2).unwrap(), 4, &c, &indicator(8, 0))
        .unwrap();
    assert!(check.holds && check.slack >= BigRational::zero());
    assert!(act.check_dominance(&chain.level(2).unwrap().folner, &chain.omega(2).unwrap(), 4, &c, &Observable::Function(vec![frac(-1, 1); 8])).is_err());
}

#[test]
fn quotients_are_homomorphic_and_measure_preserving() {
    let cases = [
        (Quotient::ZdMod { dim: 2, m: 3 }, GroupKind::Zd { dim: 2 }),
        (Quotient::HeisenbergMod { m: 3 }, GroupKind::Heisenberg),
        (Quotient::LamplighterMod { m: 3 }, GroupKind::Lamplighter),
    ];
    for (q, kind) in cases {
        let act = FiniteAction::new(q).unwrap();
        assert!(act.is_measure_preserving());
        let ball = ergodom::group::word_ball(&ergodom::GroupDescriptor::standard(kind), 2, DEFAULT_CAP).unwrap();
        let elems: Vec<GroupElement> = ball.iter().cloned().collect();
        assert!(act.check_homomorphism(&elems).unwrap(), "{q:?}");
        // conjugation by permutation unitaries keeps the trace
        let n = act.size();
        let x = SymMatrix::from_fn(n, |i, j| frac((i * j % 5) as i64 + (i == j) as i64, 3)).unwrap();
        for g in &elems {
            let y = act.act(g, &Observable::Matrix(x.clone())).unwrap();
            assert_eq!(y.matrix().unwrap().trace(), x.trace());
        }
    }
    assert!(FiniteAction::new(Quotient::LamplighterMod { m: 12 }).is_err(), "exceeds {MAX_QUOTIENT} states");
}

fn min_eigenvalue(m: &SymMatrix) -> f64 {
    let n = m.dim();
    let dm = DMatrix::from_row_slice(n, n, &m.to_f64());
    dm.symmetric_eigen().eigenvalues.min()
}

proptest! {
    #[test]
    fn pivoted_test_agrees_with_eigenvalues(n in 1usize..5, entries in prop::collection::vec(-4i64..=4, 16)) {
        let m = SymMatrix::from_fn(n, |i, j| frac(entries[i.min(j) * 4 + i.max(j)], 2)).unwrap();
        let lambda = min_eigenvalue(&m);
        let cert = psd_exact(&m);
        if lambda > 1e-9 {
            prop_assert!(cert.psd);
        } else if lambda < -1e-9 {
            prop_assert!(!cert.psd);
        }
    }

    #[test]
    fn gram_matrices_are_psd(seed in any::<u64>()) {
        for x in psd_battery(4, 5, seed) {
            prop_assert!(psd_exact(x.matrix().unwrap()).psd);
            prop_assert!(min_eigenvalue(x.matrix().unwrap()) > -1e-9);
        }
    }
}
