use proptest::prelude::*;
use qfrm_core::field::{Elem, FiniteField};

const ORDERS: [u64; 9] = [2, 3, 4, 5, 8, 9, 16, 25, 27];

fn field_and_elems(n: usize) -> impl Strategy<Value = (FiniteField, Vec<Elem>)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(move |q| {
        prop::collection::vec(0..q as u32, n).prop_map(move |v| {
            (
                FiniteField::with_order(q).unwrap(),
                v.into_iter().map(Elem).collect(),
            )
        })
    })
}

proptest! {
    #[test]
    fn ring_axioms((f, v) in field_and_elems(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
    }

    #[test]
    fn inverses_and_frobenius((f, v) in field_and_elems(2)) {
        let (a, b) = (v[0], v[1]);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(f.mul(f.div(b, a).unwrap(), a), b);
        }
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn trace_is_additive_into_prime_field((f, v) in field_and_elems(2)) {
        let (a, b) = (v[0], v[1]);
        let t = f.trace(f.add(a, b));
        prop_assert_eq!(t, f.add(f.trace(a), f.trace(b)));
        prop_assert!(t.index() < f.characteristic());
    }

    #[test]
    fn quadratic_character_is_multiplicative((f, v) in field_and_elems(2)) {
        prop_assume!(!f.is_even() && !v[0].is_zero() && !v[1].is_zero());
        let chi = |x| f.quadratic_character(x).unwrap();
        prop_assert_eq!(chi(f.mul(v[0], v[1])), chi(v[0]) * chi(v[1]));
        prop_assert_eq!(chi(f.square(v[0])), 1);
    }
}

#[test]
fn exactly_half_the_units_are_squares() {
    for q in [3u64, 5, 7, 9, 25, 27, 49] {
        let f = FiniteField::with_order(q).unwrap();
        let squares = f
            .elements()
            .skip(1)
            .filter(|&x| f.quadratic_character(x).unwrap() == 1)
            .count() as u64;
        assert_eq!(squares, (q - 1) / 2, "q={q}");
    }
}

#[test]
fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
    for q in [4u64, 8, 9, 16, 32, 81, 125] {
        let f = FiniteField::with_order(q).unwrap();
        let max_order = f
            .elements()
            .skip(1)
            .map(|a| (1..q).find(|&k| f.pow(a, k) == Elem::ONE).unwrap())
            .max()
            .unwrap();
        assert_eq!(max_order, q - 1, "q={q}");
    }
}
