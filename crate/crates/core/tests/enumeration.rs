use std::collections::BTreeSet;

use proptest::prelude::*;
use stirling_gamma::stirling::{count_stirling, enumerate_stirling, is_stirling};
use stirling_gamma::{Multiset, StirlingPermutation};

/// Builds Q_M from Q_{M minus its largest value} by dropping the block of
/// copies of the largest value into every gap.
fn by_block_insertion(m: &Multiset) -> BTreeSet<Vec<u32>> {
    let mut words: BTreeSet<Vec<u32>> = BTreeSet::from([Vec::new()]);
    for (idx, &k) in m.mults().iter().enumerate() {
        let v = idx as u32 + 1;
        let mut next = BTreeSet::new();
        for w in &words {
            for gap in 0..=w.len() {
                let mut x = w[..gap].to_vec();
                x.extend(std::iter::repeat_n(v, k as usize));
                x.extend_from_slice(&w[gap..]);
                next.insert(x);
            }
        }
        words = next;
    }
    words
}

fn small_multiset() -> impl Strategy<Value = Multiset> {
    proptest::collection::vec(1u32..=3, 0..=4).prop_map(|m| Multiset::new(m).unwrap())
}

#[test]
fn insertion_generator_agrees() {
    for spec in ["1", "2", "1,1,1", "2,1,2", "3,3,2", "2,2,2,2", "1,3,1,2"] {
        let m: Multiset = spec.parse().unwrap();
        let listed: Vec<Vec<u32>> = enumerate_stirling(&m).map(|s| s.word().to_vec()).collect();
        let generated: Vec<Vec<u32>> = by_block_insertion(&m).into_iter().collect();
        assert_eq!(listed, generated, "{spec}");
    }
}

#[test]
fn sample_multiset_count() {
    let m: Multiset = "2,1,2,2,2,3,1".parse().unwrap();
    assert_eq!(m.size(), 13);
    assert_eq!(
        count_stirling(&m),
        (enumerate_stirling(&m).count() as u64).into()
    );
}

#[test]
fn parse_errors_name_the_token() {
    let err = "2,x,1".parse::<Multiset>().unwrap_err().to_string();
    assert!(err.contains('x'), "{err}");
    assert!("2,0".parse::<Multiset>().is_err());
    assert!("2,-1".parse::<Multiset>().is_err());
    assert!("1221".parse::<StirlingPermutation>().is_ok());
    assert!("2121".parse::<StirlingPermutation>().is_err());
}

proptest! {
    #[test]
    fn enumeration_is_sorted_valid_and_complete(m in small_multiset()) {
        let words: Vec<Vec<u32>> = enumerate_stirling(&m).map(|s| s.word().to_vec()).collect();
        prop_assert!(words.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(words.iter().all(|w| is_stirling(w, &m)));
        prop_assert_eq!(count_stirling(&m), (words.len() as u64).into());
    }

    #[test]
    fn statistics_partition_the_gaps(m in small_multiset().prop_filter("nonempty", |m| !m.is_empty()), pick in any::<prop::sample::Index>()) {
        let perms: Vec<StirlingPermutation> = enumerate_stirling(&m).collect();
        let s = pick.get(&perms);
        let p = s.statistics();
        prop_assert_eq!(p.asc + p.des + p.plat, m.size() + 1);
        prop_assert!(p.asc >= 1 && p.des >= 1);
        prop_assert_eq!(p.plat, p.plat_by_j.values().sum::<usize>());
        prop_assert!(p.aplat + p.dplat <= p.plat);
        prop_assert!(p.dfall <= p.des);
    }

    #[test]
    fn reversal_is_an_involution_swapping_rises_and_falls(m in small_multiset().prop_filter("nonempty", |m| !m.is_empty()), pick in any::<prop::sample::Index>()) {
        let perms: Vec<StirlingPermutation> = enumerate_stirling(&m).collect();
        let s = pick.get(&perms);
        let r = s.reverse();
        prop_assert!(is_stirling(r.word(), &m));
        prop_assert_eq!(&r.reverse(), s);
        let (p, q) = (s.statistics(), r.statistics());
        prop_assert_eq!((p.asc, p.des, p.plat), (q.des, q.asc, q.plat));
    }
}
