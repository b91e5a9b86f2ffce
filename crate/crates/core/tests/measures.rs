//! Convolution algebra, capping soundness and CSV round trips.

use std::io::BufReader;

use ergodom::measure::{
    cesaro_density, convolution_powers, convolve, convolve_on, read_measure_csv, write_measure_csv,
};
use ergodom::rational::frac;
use ergodom::{FinSupMeasure, FiniteSubset, GroupElement, GroupKind};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn element(kind: GroupKind) -> BoxedStrategy<GroupElement> {
    match kind {
        GroupKind::Zd { .. } => (-4i64..=4).prop_map(GroupElement::z1).boxed(),
        GroupKind::Heisenberg => (-1i64..=1, -1i64..=1, -2i64..=2)
            .prop_map(|(a, b, c)| GroupElement::heisenberg(a, b, c))
            .boxed(),
        _ => (-2i64..=2, prop::collection::vec(-2i64..=2, 0..3))
            .prop_map(|(p, l)| GroupElement::lamplighter(p, &l))
            .boxed(),
    }
}

/// Sub-probability measure with small dyadic and triadic masses.
fn measure(kind: GroupKind) -> impl Strategy<Value = FinSupMeasure> {
    prop::collection::vec((element(kind), 1i64..=4, prop::sample::select(vec![8i64, 9, 12])), 1..6).prop_map(
        move |atoms| {
            let total: BigRational = atoms.iter().map(|(_, n, d)| frac(*n, *d)).sum();
            let scale = if total > frac(1, 1) { total.recip() } else { frac(1, 1) };
            FinSupMeasure::from_masses(kind, atoms.into_iter().map(|(g, n, d)| (g, frac(n, d) * &scale))).unwrap()
        },
    )
}

fn three() -> impl Strategy<Value = (FinSupMeasure, FinSupMeasure, FinSupMeasure)> {
    prop::sample::select(vec![GroupKind::Zd { dim: 1 }, GroupKind::Heisenberg, GroupKind::Lamplighter])
        .prop_flat_map(|k| (measure(k), measure(k), measure(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn convolution_associates_and_multiplies_mass((a, b, c) in three()) {
        let ab_c = convolve(&convolve(&a, &b, None).unwrap(), &c, None).unwrap();
        let a_bc = convolve(&a, &convolve(&b, &c, None).unwrap(), None).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert_eq!(ab_c.total_mass(), a.total_mass() * b.total_mass() * c.total_mass());
        prop_assert!(ab_c.is_exact());
    }

    #[test]
    fn capped_convolution_is_a_lower_bound((a, b, _) in three(), cap in 1usize..6) {
        let exact = convolve(&a, &b, None).unwrap();
        let capped = convolve(&a, &b, Some(cap)).unwrap();
        prop_assert!(capped.support_len() <= cap);
        prop_assert!(capped.is_dominated_by(&exact));
        if capped.support_len() < exact.support_len() {
            prop_assert!(!capped.is_exact());
        }
    }

    #[test]
    fn pointwise_convolution_agrees((a, b, _) in three()) {
        let full = convolve(&a, &b, None).unwrap();
        let eval: Vec<GroupElement> = full.support().iter().cloned().collect();
        let vals = convolve_on(&a, &b, &eval).unwrap();
        for (g, v) in eval.iter().zip(vals) {
            prop_assert_eq!(full.mass(g), v);
        }
    }

    #[test]
    fn csv_round_trips((a, _, _) in three()) {
        let mut buf = Vec::new();
        write_measure_csv(&a, &mut buf).unwrap();
        prop_assert_eq!(read_measure_csv(BufReader::new(&buf[..])).unwrap(), a);
    }
}

#[test]
fn cesaro_density_is_average_of_powers() {
    let b = FiniteSubset::interval(-1, 1);
    let omega = FinSupMeasure::uniform(&b).unwrap().scale(&frac(1, 2)).unwrap();
    let powers = convolution_powers(&omega, 3, None).unwrap();
    let eval = FiniteSubset::interval(-3, 3);
    let dens = cesaro_density(&omega, 4, &eval, None).unwrap();
    for g in &eval {
        let avg = powers.iter().map(|p| p.mass(g)).fold(BigRational::zero(), |s, m| s + m) * frac(1, 4);
        assert_eq!(dens.get(g).unwrap(), &avg, "at {g}");
    }
    // ω^{(0)} = δ_e
    assert_eq!(powers[0].mass(&GroupElement::z1(0)), frac(1, 1));
    assert_eq!(powers[0].support_len(), 1);
}
