use proptest::prelude::*;
use stirling_gamma::eulerian::{c_polynomial_enum, gamma_count_perms, gamma_count_trees};
use stirling_gamma::gamma::{gamma_extract, gamma_reconstruct};
use stirling_gamma::grammar::{c_polynomial_grammar, gamma_polynomial_grammar};
use stirling_gamma::{GammaError, GammaTable, Multiset, Poly3, Vars};

fn small_multiset() -> impl Strategy<Value = Multiset> {
    proptest::collection::vec(1u32..=3, 1..=3).prop_map(|m| Multiset::new(m).unwrap())
}

#[test]
fn json_round_trips() {
    let c = c_polynomial_enum(&Multiset::uniform(3, 2));
    let back: Poly3 = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(back, c);
    let g = gamma_count_trees(&Multiset::uniform(3, 2));
    let back: GammaTable = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
    assert_eq!(back, g);
}

#[test]
fn extraction_rejects_what_has_no_expansion() {
    let asym = Poly3::from_terms(Vars::Xyz, [([2, 1, 0], 1)]);
    assert!(matches!(
        gamma_extract(&asym, 2),
        Err(GammaError::Asymmetric { .. })
    ));
    let squares = Poly3::from_terms(Vars::Xyz, [([2, 0, 0], 1), ([0, 2, 0], 1)]);
    assert!(gamma_extract(&squares, 1).is_err());
}

#[test]
fn sample_multiset_routes_agree() {
    let m: Multiset = "2,1,2,2".parse().unwrap();
    let c = c_polynomial_enum(&m);
    let g = gamma_extract(&c, m.size()).unwrap();
    assert!(g.is_positive());
    assert_eq!(gamma_count_trees(&m), g);
    assert_eq!(gamma_count_perms(&m), g);
    assert_eq!(gamma_reconstruct(&g), c);
    assert_eq!(c_polynomial_grammar(&m), c);
    assert_eq!(gamma_polynomial_grammar(&m).unwrap(), g.to_uvz());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grammar_matches_enumeration(m in small_multiset()) {
        let c = c_polynomial_enum(&m);
        prop_assert_eq!(&c_polynomial_grammar(&m), &c);
        prop_assert!(c.is_symmetric(&[0, 1]));
        let g = gamma_extract(&c, m.size()).unwrap();
        prop_assert_eq!(gamma_polynomial_grammar(&m).unwrap(), g.to_uvz());
        prop_assert_eq!(GammaTable::from_uvz(&g.to_uvz(), m.size()).unwrap(), g);
    }
}
