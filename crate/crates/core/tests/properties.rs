use halfshuffle::hall::{HallOrder, HallSet};
use halfshuffle::identities::{verify, IdentityName};
use halfshuffle::json;
use halfshuffle::pbw::Pbw;
use halfshuffle::products::{area, half_shuffle, shuffle};
use halfshuffle::signature::{check_shuffle_identity, signature, word_coefficient, PiecewisePath};
use halfshuffle::words::{int, FreeElement, Rational, Word};
use proptest::prelude::*;

fn word(d: usize, max_len: usize, min_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=d, min_len..=max_len).prop_map(|v| Word::from_indices(&v))
}

fn element_with(d: usize, max_len: usize, min_len: usize, big: bool) -> impl Strategy<Value = FreeElement> {
    let coeff = if big { -1_000_000i64..=1_000_000 } else { -3i64..=3 };
    prop::collection::vec((word(d, max_len, min_len), coeff, 1i64..=4), 0..=4).prop_map(|terms| {
        FreeElement::from_terms(
            terms
                .into_iter()
                .map(|(w, p, q)| (w, Rational::new(p.into(), q.into()))),
        )
    })
}

fn element() -> impl Strategy<Value = FreeElement> {
    element_with(3, 3, 0, false)
}

fn positive() -> impl Strategy<Value = FreeElement> {
    element_with(3, 3, 1, false)
}

fn scalar() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=5).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_are_bilinear(f in element(), g in element(), h in element(), c in scalar()) {
        for product in [shuffle, half_shuffle, area] {
            let left = product(&(&f.scale(&c) + &g), &h);
            let right = &product(&f, &h).scale(&c) + &product(&g, &h);
            prop_assert_eq!(left, right);
            let left = product(&h, &(&f.scale(&c) + &g));
            let right = &product(&h, &f).scale(&c) + &product(&h, &g);
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn shuffle_is_commutative_and_associative(f in element(), g in element(), h in element()) {
        prop_assert_eq!(shuffle(&f, &g), shuffle(&g, &f));
        prop_assert_eq!(shuffle(&shuffle(&f, &g), &h), shuffle(&f, &shuffle(&g, &h)));
        prop_assert_eq!(shuffle(&f, &FreeElement::unit()), f);
    }

    #[test]
    fn area_is_antisymmetric(f in element(), g in element()) {
        prop_assert_eq!(area(&f, &g), area(&g, &f).scale(&int(-1)));
    }

    #[test]
    fn exact_identities_hold(f in element(), g in element(), h in element()) {
        for name in [IdentityName::ChainRule, IdentityName::ModifiedZinbiel, IdentityName::ShufflePullout, IdentityName::AreaJacobi] {
            prop_assert!(verify(name, &[f.clone(), g.clone(), h.clone()]).unwrap().is_zero(), "{}", name);
        }
        prop_assert!(verify(IdentityName::IntegrationByParts, &[f, g]).unwrap().is_zero());
    }

    #[test]
    fn positive_identities_hold(f in positive(), g in positive(), h in positive()) {
        for name in [IdentityName::ZinbielPositive, IdentityName::PermutationShuffle] {
            prop_assert!(verify(name, &[f.clone(), g.clone(), h.clone()]).unwrap().is_zero(), "{}", name);
        }
    }

    #[test]
    fn large_coefficients_take_the_exact_path(f in element_with(3, 3, 0, true), g in element_with(3, 3, 0, true)) {
        // Coefficients near 10^6 with small denominators push the integer
        // kernel toward overflow; the result must not depend on it.
        let big = Rational::from_integer(num_bigint::BigInt::from(1u64 << 62));
        let (fb, gb) = (f.scale(&big), g.scale(&big));
        prop_assert_eq!(shuffle(&fb, &gb), shuffle(&f, &g).scale(&(&big * &big)));
        prop_assert_eq!(half_shuffle(&fb, &gb), half_shuffle(&f, &g).scale(&(&big * &big)));
    }

    #[test]
    fn long_letters_agree_with_short_ones(f in element_with(2, 3, 0, false), g in element_with(2, 3, 0, false)) {
        // Relabel 1 → 17 and 2 → 20 so the packed kernel cannot be used.
        let relabel = |x: &FreeElement| x.map_words(|w| Word::from_indices(&w.letters().iter().map(|a| a.index() * 3 + 14).collect::<Vec<_>>()));
        prop_assert_eq!(relabel(&half_shuffle(&f, &g)), half_shuffle(&relabel(&f), &relabel(&g)));
        prop_assert_eq!(relabel(&area(&f, &g)), area(&relabel(&f), &relabel(&g)));
    }

    #[test]
    fn dual_basis_expansion_round_trips(f in element_with(2, 4, 0, false)) {
        let hall = HallSet::generate(2, HallOrder::Lyndon, 4).unwrap();
        let mut pbw = Pbw::new(&hall);
        let p = pbw.expand(&f).unwrap();
        prop_assert_eq!(pbw.evaluate(&p), f);
    }

    #[test]
    fn json_round_trips(f in element()) {
        prop_assert_eq!(json::parse_free_element(&json::free_element(&f)).unwrap(), f);
    }

    #[test]
    fn signatures_are_grouplike(seed in 0u64..10_000, f in element_with(2, 3, 0, false), g in element_with(2, 3, 0, false)) {
        let path = PiecewisePath::random(seed, 4, 2);
        prop_assert!(check_shuffle_identity(&f, &g, &path, 6).unwrap() <= 1e-9);
    }

    #[test]
    fn word_recursion_matches_dense_levels(seed in 0u64..10_000, w in word(3, 5, 0)) {
        let path = PiecewisePath::random(seed, 3, 3);
        let dense = signature(&path, 5).coeff(&w).unwrap();
        prop_assert!((word_coefficient(&path, &w).unwrap() - dense).abs() <= 1e-12);
    }
}
