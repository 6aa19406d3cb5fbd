//! Randomized ring laws and bracket properties.

use itertools::Itertools;
use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::lattice::{IntVector, WedgeIndex};

fn laurent() -> impl Strategy<Value = LaurentZ> {
    prop::collection::vec((-6i64..=6, -5i128..=5), 0..6).prop_map(LaurentZ::from_terms)
}

fn refined() -> impl Strategy<Value = RefinedValue> {
    (laurent(), 0u32..3).prop_map(|(p, k)| RefinedValue::new(p, k))
}

fn group(m: usize) -> impl Strategy<Value = GroupRingValue> {
    let w = m * (m - 1) / 2;
    prop::collection::vec((prop::collection::vec(-3i64..=3, w), -4i128..=4), 0..5).prop_map(|terms| {
        let mut v = GroupRingValue::default();
        for (e, c) in terms {
            v.add_term(WedgeIndex(e), c);
        }
        v
    })
}

/// Balanced tuples of 2..=5 plane vectors with entries in [-3, 3].
fn balanced() -> impl Strategy<Value = Vec<IntVector>> {
    prop::collection::vec((-3i64..=3, -3i64..=3), 1..=4).prop_filter_map("last vector out of range", |free| {
        let (sx, sy) = free.iter().fold((0, 0), |a, v| (a.0 + v.0, a.1 + v.1));
        if sx.abs() > 3 || sy.abs() > 3 {
            return None;
        }
        let mut out: Vec<IntVector> = free.iter().map(|&(x, y)| IntVector::new(vec![x, y])).collect();
        out.push(IntVector::new(vec![-sx, -sy]));
        Some(out)
    })
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn refined_ring_laws(a in refined(), b in refined(), c in refined()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn group_ring_laws(a in group(3), b in group(3), c in group(3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn lambda_push_is_multiplicative(a in group(3), b in group(3), l in prop::collection::vec(-4i64..=4, 3)) {
        let ab = lambda_push(&(&a * &b), &l).unwrap();
        prop_assert_eq!(ab, &lambda_push(&a, &l).unwrap() * &lambda_push(&b, &l).unwrap());
    }

    #[test]
    fn mu_plus_is_order_independent_and_palindromic(a in balanced()) {
        let base = mu_plus(&a).unwrap();
        prop_assert!(base.is_palindromic());
        for p in a.iter().cloned().permutations(a.len()) {
            prop_assert_eq!(&mu_plus(&p).unwrap(), &base);
        }
    }

    #[test]
    fn brackets_are_palindromic(a in -60i64..=60) {
        prop_assert!(bracket_minus(a).is_palindromic());
        prop_assert!(bracket_plus(a).is_palindromic());
    }
}
