use std::sync::Arc;

use proptest::prelude::*;
use qfrm_core::census::{form_count, form_from_index};
use qfrm_core::field::{Elem, FiniteField};
use qfrm_core::forms::{
    canonical_form, admissible_classes, vector_from_index, zero_count_formula, QuadraticForm,
    Substitution, DEFAULT_POINT_BUDGET,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PARAMS: [(u64, usize); 8] = [(2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2), (8, 2)];

fn random_form() -> impl Strategy<Value = QuadraticForm> {
    prop::sample::select(PARAMS.to_vec()).prop_flat_map(|(q, m)| {
        let total = form_count(q, m).unwrap() as u64;
        (0..total).prop_map(move |idx| {
            let f = Arc::new(FiniteField::with_order(q).unwrap());
            form_from_index(&f, m, idx)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn zero_count_matches_class(form in random_form()) {
        let class = form.classify().unwrap();
        let q = form.field().order() as u64;
        prop_assert_eq!(
            form.zero_count_exhaustive(DEFAULT_POINT_BUDGET).unwrap(),
            zero_count_formula(class, q, form.m()).unwrap()
        );
        prop_assert_eq!(form.rank(), class.rank);
    }

    #[test]
    fn class_survives_substitution(form in random_form(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sub = Substitution::random(form.field(), form.m(), &mut rng);
        let moved = form.substitute(&sub).unwrap();
        prop_assert_eq!(moved.classify().unwrap(), form.classify().unwrap());
    }

    #[test]
    fn homogeneity_and_polarization(form in random_form(), a in any::<u64>(), b in any::<u64>(), l in any::<u32>()) {
        let f = form.field().clone();
        let q = f.order() as u64;
        let m = form.m();
        let points = q.pow(m as u32);
        let x = vector_from_index(a % points, q, m);
        let y = vector_from_index(b % points, q, m);
        let lambda = Elem(l % f.order());
        let scaled: Vec<Elem> = x.iter().map(|&v| f.mul(lambda, v)).collect();
        let qx = form.evaluate(&x).unwrap();
        prop_assert_eq!(form.evaluate(&scaled).unwrap(), f.mul(f.square(lambda), qx));

        let sum: Vec<Elem> = x.iter().zip(&y).map(|(&u, &v)| f.add(u, v)).collect();
        let polar = f.sub(f.sub(form.evaluate(&sum).unwrap(), qx), form.evaluate(&y).unwrap());
        prop_assert_eq!(form.bilinear().evaluate(&x, &y).unwrap(), polar);
    }

    #[test]
    fn text_round_trip(form in random_form()) {
        let back: QuadraticForm = form.to_string().parse().unwrap();
        prop_assert_eq!(back.table(), form.table());
    }
}

#[test]
fn canonical_forms_classify_to_their_class() {
    for (q, m) in [(2u64, 4usize), (3, 4), (4, 3), (5, 3), (9, 2)] {
        let f = Arc::new(FiniteField::with_order(q).unwrap());
        for class in admissible_classes(f.is_even(), m) {
            let form = canonical_form(f.clone(), m, class).unwrap();
            let got = form.classify().unwrap();
            assert_eq!(got, class, "q={q} m={m}");
        }
    }
}
