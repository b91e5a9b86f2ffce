//! Envelope chains, the measure `ω` and the exact dominance certificates.

use ergodom::dominance::{
    arithgeo_closed_form, dominance_report, finite_n_lower_bound, min_scaled_cesaro, LevelEvaluation,
};
use ergodom::omega::{poly_growth_schedule, Chain, FolnerFamily};
use ergodom::rational::frac;
use ergodom::set::DEFAULT_CAP;
use ergodom::{FiniteSubset, Schedule};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn chains() -> Vec<(&'static str, Chain)> {
    let lamplighter_sched = Schedule::new(2, 2, frac(80, 1), 2, 2).unwrap();
    vec![
        (
            "Z poly growth",
            Chain::explicit(FolnerFamily::ZdPolyGrowth { dim: 1 }, &[1, 2], &Schedule::standard(2), DEFAULT_CAP).unwrap(),
        ),
        ("Z² cubes", Chain::explicit(FolnerFamily::ZdCube { dim: 2 }, &[1, 3], &Schedule::standard(2), DEFAULT_CAP).unwrap()),
        ("Heisenberg", Chain::explicit(FolnerFamily::HeisenbergBox, &[1, 2], &Schedule::standard(2), DEFAULT_CAP).unwrap()),
        ("lamplighter", Chain::explicit(FolnerFamily::Lamplighter, &[1, 3], &lamplighter_sched, DEFAULT_CAP).unwrap()),
    ]
}

#[test]
fn envelope_and_omega_invariants() {
    for (name, chain) in chains() {
        let e = chain.envelopes();
        for (i, en) in e.iter().enumerate() {
            let f = &chain.level(i + 1).unwrap().folner;
            assert!(en.contains_identity() && en.is_symmetric(), "{name}: E_{} not symmetric with e", i + 1);
            assert!(f.is_subset(en), "{name}: F_{} ⊄ E_{}", i + 1, i + 1);
            if let Some(next) = e.get(i + 1) {
                assert!(en.is_subset(next), "{name}: E_{} ⊄ E_{}", i + 1, i + 2);
            }
        }
        let k = chain.depth();
        let omega = chain.omega(k).unwrap();
        assert_eq!(omega.total_mass(), BigRational::one() - chain.schedule.r(k + 1), "{name}: mass of ω");
        let support = omega.support();
        for n in 1..=k {
            assert!(chain.level(n).unwrap().folner.is_subset(&support), "{name}: F_{n} ⊄ supp ω");
        }
        // F_n sits inside ι(H, H, E_n); equality is checked where it holds
        for n in 2..=k {
            let interior = chain.interior(n, DEFAULT_CAP).unwrap();
            let f = &chain.level(n).unwrap().folner;
            assert!(f.is_subset(&interior), "{name}: F_{n} ⊄ ι");
            if name.starts_with('Z') {
                assert_eq!(&interior, f, "{name}: ι ≠ F_{n}");
            }
        }
    }
}

#[test]
fn noncommutative_interiors_strictly_contain_folner_sets() {
    for (name, chain) in chains().into_iter().filter(|(n, _)| !n.starts_with('Z')) {
        let interior = chain.interior(2, DEFAULT_CAP).unwrap();
        let f = &chain.level(2).unwrap().folner;
        assert!(interior.len() > f.len(), "{name}: interior {} vs |F| {}", interior.len(), f.len());
    }
}

#[test]
fn z_envelopes_are_the_recursion_intervals() {
    let chain =
        Chain::explicit(FolnerFamily::ZdPolyGrowth { dim: 1 }, &[1, 2, 3], &Schedule::standard(3), DEFAULT_CAP).unwrap();
    for n in 1..=3u64 {
        let m = poly_growth_schedule(n).unwrap().1.to_u64().unwrap() as i64;
        assert_eq!(chain.level(n as usize).unwrap().envelope, FiniteSubset::interval(-m, m), "E_{n}");
    }
}

#[test]
fn reports_are_consistent() {
    for (name, chain) in chains() {
        let k = chain.depth();
        for n in 1..=k {
            let r = dominance_report(&chain, n, k, None).unwrap();
            let min = r.min_scaled_exact().unwrap();
            let bound = r.bound_exact().unwrap();
            assert_eq!(r.c_emp_exact().unwrap().unwrap() * &min, BigRational::one(), "{name} level {n}");
            assert_eq!(r.passed(), bound.is_positive() && min >= bound, "{name} level {n}");
            assert!(r.passed(), "{name} level {n}: {min} < {bound}");
            assert!(!r.taint);
        }
    }
}

#[test]
fn capping_never_raises_the_minimum() {
    let chain =
        Chain::explicit(FolnerFamily::ZdCube { dim: 1 }, &[1, 4], &Schedule::standard(2), DEFAULT_CAP).unwrap();
    let omega = chain.omega(2).unwrap();
    let f = &chain.level(2).unwrap().folner;
    let big_n = chain.schedule.big_n(2).unwrap();
    let exact = min_scaled_cesaro(&omega, big_n, f, None).unwrap().value;
    let mut prev = None::<BigRational>;
    for cap in [2, 4, 8, 16, 64] {
        let v = min_scaled_cesaro(&omega, big_n, f, Some(cap)).unwrap().value;
        assert!(v <= exact, "cap {cap}");
        if let Some(p) = &prev {
            assert!(*p <= v, "cap {cap} lowered the minimum");
        }
        prev = Some(v);
    }
}

#[test]
fn longer_cesaro_length_is_evaluated_as_given() {
    let chain =
        Chain::explicit(FolnerFamily::ZdCube { dim: 1 }, &[1, 4], &Schedule::standard(2), DEFAULT_CAP).unwrap();
    let ev = LevelEvaluation::compute_with_length(&chain, 2, 2, 7, None).unwrap();
    assert_eq!(ev.big_n, 7);
    assert_eq!(ev.densities.values.len(), 7);
}

proptest! {
    #[test]
    fn bound_equals_arithgeo_form(
        f in 1u64..200, extra in 0u64..400, rn_den in 2i64..40, ratio in 2i64..6, big_n in 1u64..40,
    ) {
        let e = f + extra;
        let r_n = frac(1, rn_den);
        let r_next = frac(1, rn_den * ratio);
        let lhs = finite_n_lower_bound(f, e, &r_n, &r_next, big_n).unwrap();
        let rhs = BigRational::new(BigInt::from(f), BigInt::from(e)) * (&r_n - &r_next)
            * arithgeo_closed_form(&r_n, big_n).unwrap()
            / BigRational::from_integer(big_n.into());
        prop_assert_eq!(lhs, rhs);
    }
}
