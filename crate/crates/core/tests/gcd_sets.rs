use std::collections::BTreeMap;

use olymp_core::gcd_sets::{
    construct, factorize, is_prime, search_sizes, structural_checks, verify_property, GcdSet, SearchMode,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn primes_below(limit: u64) -> Vec<u64> {
    (2..limit).filter(|&p| is_prime(p)).collect()
}

/// Apply `map` to every prime factor of every element.
fn relabel(set: &GcdSet, map: &BTreeMap<u64, u64>) -> GcdSet {
    let elements = set
        .elements()
        .iter()
        .map(|&s| factorize(s).into_iter().map(|(p, e)| map[&p].pow(e)).product())
        .collect();
    GcdSet::new(elements).unwrap()
}

fn all_prime_factors(sets: &[&GcdSet]) -> Vec<u64> {
    let mut ps: Vec<u64> = sets
        .iter()
        .flat_map(|s| s.elements().iter().flat_map(|&x| factorize(x).into_iter().map(|(p, _)| p)))
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn construction_always_works(
        k in 1usize..=5,
        chosen in subsequence(primes_below(120), 10).prop_shuffle(),
    ) {
        let (p, q) = (&chosen[..k], &chosen[k..2 * k]);
        let set = construct(p, q).unwrap();
        prop_assert_eq!(set.len(), 1 << k);
        prop_assert!(verify_property(&set).holds);
        let rep = structural_checks(&set);
        prop_assert!(rep.passed);
        prop_assert_eq!(rep.common_prime_count, Some(k as u32));
    }

    #[test]
    fn relabeling_primes_preserves_verdict(
        k in 1usize..=3,
        chosen in subsequence(primes_below(60), 6).prop_shuffle(),
        image in subsequence(primes_below(60), 17).prop_shuffle(),
        extra in 2u64..60,
    ) {
        let good = construct(&chosen[..k], &chosen[k..2 * k]).unwrap();
        // adding an element usually breaks the property
        let mut elements = good.elements().to_vec();
        if !elements.contains(&extra) {
            elements.push(extra);
        }
        let other = GcdSet::new(elements).unwrap();
        let support = all_prime_factors(&[&good, &other]);
        let map: BTreeMap<u64, u64> = support.iter().copied().zip(image.iter().copied()).collect();
        prop_assume!(map.len() == support.len());
        for set in [&good, &other] {
            prop_assert_eq!(verify_property(set).holds, verify_property(&relabel(set, &map)).holds);
        }
    }
}

#[test]
fn every_valid_small_set_is_structured() {
    // all subsets of {1..16} with at most 4 elements
    let universe: Vec<u64> = (1..=16).collect();
    let mut valid = 0;
    for mask in 1u32..(1 << universe.len()) {
        if mask.count_ones() > 4 {
            continue;
        }
        let set = GcdSet::new((0..16).filter(|b| mask >> b & 1 == 1).map(|b| universe[b]).collect()).unwrap();
        if verify_property(&set).holds {
            valid += 1;
            let rep = structural_checks(&set);
            assert!(rep.passed, "{set:?}: {rep:?}");
        }
    }
    // {1} and {p, q} for distinct primes p, q ≤ 16
    assert_eq!(valid, 1 + 15);
}

#[test]
fn pruning_matches_unpruned_search() {
    let pruned = search_sizes(30, 4, SearchMode::Pruned);
    let unpruned = search_sizes(30, 4, SearchMode::Unpruned);
    assert_eq!(pruned.achievable(), unpruned.achievable());
    for (a, b) in pruned.per_size.iter().zip(&unpruned.per_size) {
        assert_eq!(a.witness, b.witness);
    }
}

#[test]
fn set_json_round_trip() {
    let set = construct(&[2, 5], &[3, 7]).unwrap();
    let s = serde_json::to_string(&set).unwrap();
    assert_eq!(s, r#"{"elements":[10,14,15,21]}"#);
    assert_eq!(serde_json::from_str::<GcdSet>(&s).unwrap(), set);
    assert!(serde_json::from_str::<GcdSet>(r#"{"elements":[3,3]}"#).is_err());
}
