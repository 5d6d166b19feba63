mod common;

use interdep_core::construct::from_rows;
use interdep_core::entropy::joint_entropy;
use interdep_core::hypergraph::{infer, Threshold};
use interdep_core::lattice::subsets_by_size;
use interdep_core::measures::{delta, entropy_from_interactions, interaction_table, symmetric_delta};
use interdep_core::{complexity, Dataset, DeltaSign, EntropyCache, InferConfig, LogBase, VariableSubset};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dataset() -> impl Strategy<Value = Dataset> {
    (3usize..=5, 8usize..=120, any::<u64>())
        .prop_map(|(n, m, seed)| common::random_dataset(&mut ChaCha8Rng::seed_from_u64(seed), n, m))
}

fn cache(ds: &Dataset) -> EntropyCache {
    EntropyCache::populate(ds, ds.n_vars(), LogBase::BITS).unwrap()
}

fn permuted(ds: &Dataset, seed: u64) -> Dataset {
    let mut order: Vec<usize> = (0..ds.n_samples()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    ds.select_rows(&order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropies_ignore_row_order(ds in dataset(), seed in any::<u64>()) {
        let a = cache(&ds);
        let b = cache(&permuted(&ds, seed));
        for (s, h) in a.entries() {
            prop_assert_eq!(h.to_bits(), b.get(s).unwrap().to_bits());
        }
    }

    #[test]
    fn entropies_ignore_uniform_duplication(ds in dataset(), k in 2usize..4) {
        let rows: Vec<usize> = (0..ds.n_samples()).flat_map(|r| std::iter::repeat_n(r, k)).collect();
        let a = cache(&ds);
        let b = cache(&ds.select_rows(&rows));
        for (s, h) in a.entries() {
            prop_assert!((h - b.get(s).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn entropy_matches_row_oracle(ds in dataset()) {
        let rows = common::rows(&ds);
        for s in subsets_by_size(ds.n_vars(), 1, ds.n_vars()) {
            let h = joint_entropy(&ds, &s, LogBase::BITS).unwrap();
            prop_assert!((h - common::entropy(&rows, &s.members())).abs() < 1e-9);
        }
    }

    #[test]
    fn entropy_is_monotone_and_subadditive(ds in dataset()) {
        let c = cache(&ds);
        for s in subsets_by_size(ds.n_vars(), 2, ds.n_vars()) {
            let h = c.get(&s).unwrap();
            for i in s.iter() {
                let rest = s.without(i).unwrap();
                prop_assert!(c.get(&rest).unwrap() <= h + 1e-9);
                prop_assert!(h <= c.get(&rest).unwrap() + c.singleton(i).unwrap() + 1e-9);
            }
            let bound = (ds.n_samples() as f64).log2();
            prop_assert!(h <= bound + 1e-9);
        }
    }

    #[test]
    fn triple_delta_is_negative_conditional_mi(ds in dataset()) {
        let c = cache(&ds);
        let rows = common::rows(&ds);
        for s in subsets_by_size(ds.n_vars(), 3, 3) {
            let m = s.members();
            for k in 0..3 {
                let (a, b, t) = (m[(k + 1) % 3], m[(k + 2) % 3], m[k]);
                let d = delta(&c, &s, t).unwrap();
                prop_assert!((d + common::conditional_mi(&rows, a, b, t)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn inversion_recovers_entropy(ds in dataset()) {
        let c = cache(&ds);
        let full = VariableSubset::from_indices(0..ds.n_vars()).unwrap();
        let table = interaction_table(&c, &full).unwrap();
        for s in full.subsets() {
            prop_assert!((entropy_from_interactions(&table, &s).unwrap() - c.get(&s).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_delta_ignores_member_order(ds in dataset(), seed in any::<u64>()) {
        let n = ds.n_vars();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let rows: Vec<Vec<u32>> = common::rows(&ds).iter().map(|r| order.iter().map(|&j| r[j]).collect()).collect();
        let shuffled = from_rows(&rows);
        let (a, b) = (cache(&ds), cache(&shuffled));
        for s in subsets_by_size(n, 2, n) {
            // position p of the shuffled set holds original column order[p]
            let mapped = VariableSubset::from_indices(s.iter().map(|p| order[p])).unwrap();
            let x = symmetric_delta(&b, &s, DeltaSign::Product).unwrap();
            let y = symmetric_delta(&a, &mapped, DeltaSign::Product).unwrap();
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn pair_components_agree(ds in dataset()) {
        let c = cache(&ds);
        for i in 0..ds.n_vars() {
            for j in i + 1..ds.n_vars() {
                let d = complexity::information_distance(&c, i, j).unwrap();
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&d));
                let phi = complexity::phi_pair(&c, i, j).unwrap();
                prop_assert!((phi - complexity::phi_pair_from_delta(&c, i, j).unwrap()).abs() < 1e-9);
                prop_assert!((phi - complexity::phi_pair_from_mutual_information(&c, i, j).unwrap()).abs() < 1e-9);
            }
        }
        prop_assert!((complexity::psi(&c).unwrap() - complexity::psi_from_mutual_information(&c).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn phi_ignores_relabeling(ds in dataset(), shift in 1u32..4) {
        let rows: Vec<Vec<u32>> = common::rows(&ds)
            .iter()
            .map(|r| r.iter().enumerate().map(|(j, &v)| {
                let card = ds.variables()[j].cardinality;
                (v + shift) % card
            }).collect())
            .collect();
        let relabeled = from_rows(&rows);
        let (a, b) = (cache(&ds), cache(&relabeled));
        for s in subsets_by_size(ds.n_vars(), 2, ds.n_vars()) {
            let x = complexity::phi_subset(&a, &s, DeltaSign::Product).unwrap();
            let y = complexity::phi_subset(&b, &s, DeltaSign::Product).unwrap();
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn alternating_sign_only_flips_odd_sizes(ds in dataset()) {
        let c = cache(&ds);
        for s in subsets_by_size(ds.n_vars(), 2, ds.n_vars()) {
            let p = symmetric_delta(&c, &s, DeltaSign::Product).unwrap();
            let a = symmetric_delta(&c, &s, DeltaSign::Alternating).unwrap();
            let expected = if s.len() >= 3 && s.len() % 2 == 1 { -p } else { p };
            prop_assert_eq!(a.to_bits(), expected.to_bits());
        }
    }

    #[test]
    fn raising_threshold_only_removes_edges(ds in dataset(), lo in 0.0f64..0.05, extra in 0.0f64..0.5) {
        let c = cache(&ds);
        let subsets: Vec<_> = subsets_by_size(ds.n_vars(), 2, 3).collect();
        let config = InferConfig { sigma: 3, ..Default::default() };
        let low = infer(&ds, &c, &subsets, &Threshold::Absolute(lo), &config).unwrap();
        let high = infer(&ds, &c, &subsets, &Threshold::Absolute(lo + extra), &config).unwrap();
        for e in &high.edges {
            prop_assert!(low.edges.iter().any(|o| o.members == e.members));
        }
        for e in &low.edges {
            let d = symmetric_delta(&c, &e.members, DeltaSign::Product).unwrap();
            prop_assert_eq!(e.weight.to_bits(), d.to_bits());
            prop_assert!(d.abs() > lo);
        }
    }
}
