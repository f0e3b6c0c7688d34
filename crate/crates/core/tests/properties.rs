use std::sync::OnceLock;

use homforge::deform::{LinearSeries, Matrix, PrimeField};
use homforge::search::{self, canonicalize, relabel, AlphaFilter, SearchConstraints};
use homforge::{
    is_hom_associative, is_twist, opposite, sections, twist, untwist_via_section,
    FiniteHomStructure,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn size_three() -> &'static [FiniteHomStructure] {
    static ALL: OnceLock<Vec<FiniteHomStructure>> = OnceLock::new();
    ALL.get_or_init(|| search::enumerate(&SearchConstraints::new(3)).unwrap())
}

fn any_structure() -> impl Strategy<Value = FiniteHomStructure> {
    (0..size_three().len()).prop_map(|i| size_three()[i].clone())
}

fn permutation3() -> impl Strategy<Value = Vec<usize>> {
    Just(vec![0usize, 1, 2]).prop_shuffle()
}

proptest! {
    #[test]
    fn opposite_is_an_involution(h in any_structure()) {
        prop_assert_eq!(opposite(&opposite(&h)), h.clone());
        prop_assert!(is_hom_associative(&opposite(&h)));
    }

    #[test]
    fn canonical_form_is_a_class_invariant(h in any_structure(), sigma in permutation3()) {
        let c = canonicalize(&h);
        prop_assert_eq!(canonicalize(c.structure()), c.clone());
        prop_assert_eq!(canonicalize(&relabel(&h, &sigma)), c);
    }

    #[test]
    fn relabeling_preserves_hom_associativity(h in any_structure(), sigma in permutation3()) {
        prop_assert!(is_hom_associative(&relabel(&h, &sigma)));
    }

    #[test]
    fn found_untwists_twist_back(h in any_structure()) {
        if let Some(table) = is_twist(&h).unwrap() {
            prop_assert!(table.is_associative());
            prop_assert_eq!(twist(&table, &h.alpha_map()).unwrap(), h.clone());
        }
        for beta in sections(&h) {
            let u = untwist_via_section(&h, &beta).unwrap();
            if u.associative {
                prop_assert_eq!(twist(&u.induced_table, &h.alpha_map()).unwrap(), h.clone());
            }
        }
    }

    #[test]
    fn json_round_trip(h in any_structure()) {
        let s = serde_json::to_string(&h).unwrap();
        prop_assert_eq!(serde_json::from_str::<FiniteHomStructure>(&s).unwrap(), h);
    }

    #[test]
    fn series_inverse_is_two_sided(
        p in prop::sample::select(vec![2u32, 3, 5]),
        d in 1usize..=3,
        n in 0usize..=5,
        seed in any::<u64>(),
    ) {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = LinearSeries::random(f, d, n, &mut rng);
        prop_assume!(s.coeff(0).is_invertible());
        let inv = s.invert().unwrap();
        let id = LinearSeries::identity(f, d, n);
        prop_assert_eq!(s.compose(&inv), id.clone());
        prop_assert_eq!(inv.compose(&s), id);
    }

    #[test]
    fn matrix_inverse_is_two_sided(p in prop::sample::select(vec![2u32, 3, 5, 7]), seed in any::<u64>()) {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::random(f, 3, &mut rng);
        match m.inverse() {
            Some(inv) => {
                prop_assert_eq!(m.compose(&inv), Matrix::identity(f, 3));
                prop_assert_eq!(inv.compose(&m), Matrix::identity(f, 3));
            }
            None => prop_assert!(!m.is_invertible()),
        }
    }
}

#[test]
fn surjective_structures_have_one_section() {
    let c = SearchConstraints::new(3).alpha(AlphaFilter::Surjective);
    for h in search::enumerate(&c).unwrap() {
        assert_eq!(sections(&h).len(), 1);
    }
}
