use proptest::prelude::*;

use posetpat::decomp::{dilworth, gallai_tree, is_module, width};
use posetpat::generate::{random_permutation, random_poset};
use posetpat::lecount::{count_le_downset_dp, count_linear_extensions};
use posetpat::occur::{count_occurrences, enumerate_occurrences};
use posetpat::poset::is_occurrence;
use posetpat::{OccurrenceFlavor, Permutation, Poset};

fn poset(max: usize) -> impl Strategy<Value = Poset> {
    (1..=max, 0.0..0.7f64, any::<u64>()).prop_map(|(n, p, seed)| random_poset(n, p, seed))
}

fn permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| random_permutation(n, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relation_is_transitive_and_irreflexive(p in poset(10)) {
        let n = p.len();
        for a in 0..n {
            prop_assert!(!p.less(a, a));
            for b in 0..n {
                for c in 0..n {
                    if p.less(a, b) && p.less(b, c) {
                        prop_assert!(p.less(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn text_format_round_trips(p in poset(12)) {
        prop_assert_eq!(Poset::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn restriction_composes(p in poset(9), keep in proptest::collection::vec(any::<bool>(), 9)) {
        let outer: Vec<usize> = (1..=p.len()).filter(|&i| keep[i - 1]).collect();
        let sub = p.restrict(&outer).unwrap();
        // restricting `sub` to its odd positions equals restricting `p` to those elements directly
        let inner: Vec<usize> = (1..=sub.len()).step_by(2).collect();
        let direct: Vec<usize> = inner.iter().map(|&i| outer[i - 1]).collect();
        prop_assert_eq!(sub.restrict(&inner).unwrap(), p.restrict(&direct).unwrap());
    }

    #[test]
    fn induced_counts_never_exceed_plain_ones(p in poset(3), q in poset(6)) {
        for injective in [false, true] {
            for unlabeled in [false, true] {
                let plain = count_occurrences(&p, &q, OccurrenceFlavor::new(false, injective, unlabeled));
                let induced = count_occurrences(&p, &q, OccurrenceFlavor::new(true, injective, unlabeled));
                prop_assert!(induced.0 <= plain.0);
            }
        }
        let injective = count_occurrences(&p, &q, OccurrenceFlavor::new(false, true, false));
        let any_map = count_occurrences(&p, &q, OccurrenceFlavor::new(false, false, false));
        prop_assert!(injective.0 <= any_map.0);
    }

    #[test]
    fn enumerated_maps_are_occurrences(p in poset(3), q in poset(5)) {
        for flavor in OccurrenceFlavor::all() {
            let maps = enumerate_occurrences(&p, &q, flavor).unwrap();
            prop_assert_eq!(maps.len() as u64, u64::try_from(count_occurrences(&p, &q, flavor).0).unwrap());
            for m in &maps {
                prop_assert!(is_occurrence(m, &p, &q, flavor).unwrap());
            }
        }
    }

    #[test]
    fn decomposition_nodes_are_modules(p in poset(9)) {
        let tree = gallai_tree(&p);
        prop_assert_eq!(tree.reconstruct(p.len()), p.clone());
        for node in tree.nodes() {
            let elems: Vec<usize> = node.elements.iter().map(|e| e + 1).collect();
            prop_assert!(is_module(&p, &elems).unwrap());
        }
    }

    #[test]
    fn chain_cover_is_minimum(p in poset(12)) {
        let cover = dilworth(&p);
        prop_assert!(cover.covers(&p));
        prop_assert_eq!(cover.len(), width(&p));
    }

    #[test]
    fn extension_routes_agree(s in permutation(9)) {
        let p = Poset::from_permutation(&s);
        prop_assert_eq!(count_linear_extensions(&p).unwrap(), count_le_downset_dp(&p).unwrap());
    }

    #[test]
    fn reversal_dual_has_same_extension_count(p in poset(9)) {
        // reversing the order maps linear extensions onto linear extensions
        let n = p.len();
        let pairs: Vec<(usize, usize)> = p.relations().map(|(a, b)| (b + 1, a + 1)).collect();
        let dual = Poset::from_relations(n, &pairs).unwrap();
        prop_assert_eq!(count_linear_extensions(&dual).unwrap(), count_linear_extensions(&p).unwrap());
    }
}
