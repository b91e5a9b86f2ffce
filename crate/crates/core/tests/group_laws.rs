//! Group axioms, encodings, word balls and bi-invariance of counting measure.

use ergodom::group::word_ball;
use ergodom::set::DEFAULT_CAP;
use ergodom::{FiniteSubset, GroupDescriptor, GroupElement, GroupKind};
use proptest::prelude::*;

const KINDS: [GroupKind; 4] =
    [GroupKind::Zd { dim: 1 }, GroupKind::Zd { dim: 3 }, GroupKind::Heisenberg, GroupKind::Lamplighter];

/// Bounded coordinates keep every product of three elements far from `i64`
/// overflow.
fn element(kind: GroupKind) -> BoxedStrategy<GroupElement> {
    let c = -1_000_000i64..=1_000_000;
    match kind {
        GroupKind::Zd { dim } => prop::collection::vec(c, dim).prop_map(|v| GroupElement::z(&v)).boxed(),
        GroupKind::Heisenberg => (c.clone(), c.clone(), c).prop_map(|(a, b, z)| GroupElement::heisenberg(a, b, z)).boxed(),
        GroupKind::Lamplighter => (-50i64..=50, prop::collection::vec(-60i64..=60, 0..10))
            .prop_map(|(p, lamps)| GroupElement::lamplighter(p, &lamps))
            .boxed(),
    }
}

fn triple() -> impl Strategy<Value = (GroupElement, GroupElement, GroupElement)> {
    prop::sample::select(KINDS.to_vec()).prop_flat_map(|k| (element(k), element(k), element(k)))
}

fn small_set(kind: GroupKind) -> impl Strategy<Value = FiniteSubset> {
    prop::collection::vec(element(kind), 0..12)
        .prop_map(move |v| FiniteSubset::from_elements(kind, v).expect("one group"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn associativity_identity_inverse((a, b, c) in triple()) {
        let e = a.kind().identity();
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&e).unwrap(), a.clone());
        prop_assert_eq!(e.mul(&a).unwrap(), a.clone());
        let inv = a.inv().unwrap();
        prop_assert!(a.mul(&inv).unwrap().is_identity());
        prop_assert!(inv.mul(&a).unwrap().is_identity());
        prop_assert_eq!(GroupElement::decode(&a.encode()).unwrap(), a);
    }
}

proptest! {
    #[test]
    fn counting_measure_is_bi_invariant(
        (g, set) in prop::sample::select(KINDS.to_vec()).prop_flat_map(|k| (element(k), small_set(k)))
    ) {
        prop_assert_eq!(set.translate_left(&g).unwrap().len(), set.len());
        prop_assert_eq!(set.translate_right(&g).unwrap().len(), set.len());
    }
}

#[test]
fn word_balls_grow_and_are_symmetric() {
    for kind in KINDS {
        let desc = GroupDescriptor::standard(kind);
        let mut prev = 0;
        for r in 0..=4 {
            let ball = word_ball(&desc, r, DEFAULT_CAP).unwrap();
            assert!(ball.len() >= prev, "{kind}: ball {r} shrank");
            assert_eq!(ball.inverse_set().unwrap(), ball, "{kind}: ball {r} is not symmetric");
            assert!(ball.contains_identity());
            prev = ball.len();
        }
    }
}

#[test]
fn word_ball_sizes() {
    let size = |kind, r| word_ball(&GroupDescriptor::standard(kind), r, DEFAULT_CAP).unwrap().len();
    // (2r+1) on Z; centred octahedral numbers on Z³
    assert_eq!(size(GroupKind::Zd { dim: 1 }, 4), 9);
    assert_eq!(size(GroupKind::Zd { dim: 3 }, 2), 25);
    // move ±1 and toggle: ball 1 is {e, (±1, ∅), (0, {0})}
    assert_eq!(size(GroupKind::Lamplighter, 1), 4);
}
