mod common;

use std::collections::{BTreeMap, HashSet};

use corpsim::analysis::{homogeneity, mean_posterior, profile, similarity_matrix, ward_linkage};
use corpsim::corpus::{build_pair_set, sample_subcorpus, TokenStream};
use corpsim::features::{select_features, FeatureSpace, FeatureType, FrequencyVector};
use corpsim::similarity::{build_benchmark, spearman_rho, SamplingParams};
use corpsim::validation::{compute_threshold, select_best_feature_type};
use proptest::prelude::*;

fn counts(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u64>> {
    len.prop_flat_map(|n| proptest::collection::vec(0u64..8, n))
        .prop_filter("non-constant", |v| v.iter().any(|&x| x != v[0]))
}

fn pair_of_vectors() -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (2usize..60).prop_flat_map(|n| {
        let v = || proptest::collection::vec(0u64..8, n).prop_filter("non-constant", |v| v.iter().any(|&x| x != v[0]));
        (v(), v())
    })
}

fn rho(a: &[u64], b: &[u64]) -> f64 {
    let space = FeatureSpace::new(FeatureType::C2, a.len(), "p", (0..a.len()).map(|i| i.to_string()).collect()).unwrap();
    let v = |c: &[u64]| FrequencyVector::from_counts(space.id(), c.to_vec(), c.iter().sum());
    spearman_rho(&v(a), &v(b)).unwrap()
}

fn words(n: usize, seed: u64) -> TokenStream {
    let lang = corpsim::synthetic::SyntheticLanguage::new(1, Default::default(), seed);
    TokenStream::from_words(format!("c{seed}"), lang.register_words(0, n, seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rho_symmetric_and_bounded((a, b) in pair_of_vectors()) {
        let (ab, ba) = (rho(&a, &b), rho(&b, &a));
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
        prop_assert!((-1.0..=1.0).contains(&ab));
        prop_assert_eq!(rho(&a, &a), 1.0);
    }

    #[test]
    fn rho_ignores_increasing_maps((a, b) in pair_of_vectors(), scale in 1u64..1000, shift in 0u64..1000) {
        let mapped: Vec<u64> = a.iter().map(|&x| x * x * scale + shift).collect();
        prop_assert!((rho(&a, &b) - rho(&mapped, &b)).abs() <= 1e-12);
    }

    #[test]
    fn reversing_one_vector_negates_rho(a in counts(2..40)) {
        let max = *a.iter().max().unwrap();
        let flipped: Vec<u64> = a.iter().map(|&x| max - x).collect();
        prop_assert!((rho(&a, &flipped) + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn threshold_recomputes_bit_exactly(same in proptest::array::uniform3(-1.0f64..1.0), cross in proptest::array::uniform3(-1.0f64..1.0)) {
        let t = compute_threshold(same, cross);
        prop_assert_eq!(t.recompute().to_bits(), t.value.to_bits());
    }

    #[test]
    fn best_type_attains_maximum(acc in proptest::collection::vec(0u8..=4, 5)) {
        let map: BTreeMap<FeatureType, f64> = FeatureType::ALL.iter().zip(&acc).map(|(t, a)| (*t, *a as f64 / 4.0)).collect();
        let best = select_best_feature_type(&map).unwrap();
        let top = map.values().copied().fold(f64::MIN, f64::max);
        prop_assert_eq!(map[&best], top);
        // among the tied, no other type is character-preferred or longer
        for (t, a) in &map {
            if *a == top && *t != best {
                prop_assert!((best.is_character(), best.n()) > (t.is_character(), t.n()));
            }
        }
        prop_assert_eq!(select_best_feature_type(&map.clone()), Some(best));
    }

    #[test]
    fn credible_interval_brackets_mean(values in proptest::collection::vec(-5.0f64..5.0, 2..80)) {
        let p = mean_posterior(&values, 0.9).unwrap();
        prop_assert!(p.low <= p.mean && p.mean <= p.high);
        let wider = mean_posterior(&values, 0.99).unwrap();
        prop_assert!(wider.low <= p.low && p.high <= wider.high);
    }

    #[test]
    fn ward_on_squared_euclidean_is_monotone(points in proptest::collection::vec(proptest::array::uniform3(-10.0f64..10.0), 2..12)) {
        let d: Vec<Vec<f64>> = points
            .iter()
            .map(|p| points.iter().map(|q| p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum()).collect())
            .collect();
        let merges = ward_linkage(&d);
        prop_assert_eq!(merges.len(), points.len() - 1);
        for w in merges.windows(2) {
            prop_assert!(w[1].height >= w[0].height - 1e-9);
        }
        prop_assert_eq!(merges.last().unwrap().merged_size, points.len());
    }

    #[test]
    fn pair_sets_are_exact_and_deterministic(n_pairs in 1usize..40, size in 100usize..400, seed: u64) {
        let a = words(2_000, 1);
        let b = words(1_500, 2);
        for (x, y) in [(&a, &a), (&a, &b)] {
            let set = build_pair_set(x, y, n_pairs, size, seed).unwrap();
            prop_assert_eq!(set.n_pairs(), n_pairs);
            let mut seen = HashSet::new();
            for (p, q) in &set.pairs {
                prop_assert_eq!(p.len(), size);
                prop_assert_eq!(q.len(), size);
                prop_assert!(!(p.corpus_id() == q.corpus_id() && p.start() == q.start()));
                let key = |s: &corpsim::corpus::SubCorpus| (s.corpus_id().to_owned(), s.start());
                let (kp, kq) = (key(p), key(q));
                let unordered = if kp <= kq { (kp, kq) } else { (kq, kp) };
                prop_assert!(seen.insert(unordered));
            }
            prop_assert_eq!(&set, &build_pair_set(x, y, n_pairs, size, seed).unwrap());
        }
        let s = sample_subcorpus(&a, 3, size, seed).unwrap();
        prop_assert_eq!(s.words(), &a.words()[s.start()..s.start() + size]);
    }

    #[test]
    fn feature_space_json_round_trips(items in proptest::collection::btree_set("\\PC{1,6}", 1..30)) {
        let items: Vec<String> = items.into_iter().collect();
        let space = FeatureSpace::new(FeatureType::C4, 40, "src", items.clone()).unwrap();
        let back = FeatureSpace::from_json(&space.to_json()).unwrap();
        prop_assert_eq!(back.items(), items.as_slice());
        prop_assert_eq!(back.id(), space.id());
    }
}

#[test]
fn profile_tw_points_reproduce_homogeneity() {
    let r = common::registers(3, 40_000, 100_000);
    let space = select_features(&r.background, FeatureType::C3, 2_000);
    let params = SamplingParams {
        sample_size: 4_000,
        n_pairs: 60,
        seed: 21,
    };
    let bench = build_benchmark("syn", &r.tw, &r.wk, &r.cc, &space, params).unwrap().distribution;
    let (h, _) = homogeneity(&r.tw, &bench, &space, params).unwrap();
    let prof = profile(&r.tw, &r.wk, &[], &bench, &space, params).unwrap();
    let tw: Vec<f64> = prof.points.iter().filter(|p| p.source_corpus_id == "tw").map(|p| p.z_to_tw).collect();
    assert_eq!(tw.len(), params.n_pairs);
    let mean = tw.iter().sum::<f64>() / tw.len() as f64;
    assert!((mean - h.mean_z).abs() <= 1e-9, "{mean} vs {}", h.mean_z);
}

#[test]
fn similarity_matrix_is_symmetric_and_bounded() {
    let r = common::registers(3, 20_000, 60_000);
    let space = select_features(&r.background, FeatureType::W1, 1_000);
    let params = SamplingParams {
        sample_size: 2_000,
        n_pairs: 20,
        seed: 3,
    };
    let corpora = [r.tw.clone(), r.wk.clone(), r.cc.clone()];
    let m = similarity_matrix(&corpora, &space, params).unwrap();
    assert_eq!(m.ids, ["tw", "wk", "cc"]);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(m.values[i][j].to_bits(), m.values[j][i].to_bits());
            assert!((-1.0..=1.0).contains(&m.values[i][j]));
        }
        // self-similarity beats similarity to other registers
        for j in 0..3 {
            if i != j {
                assert!(m.values[i][i] > m.values[i][j]);
            }
        }
    }
    assert_eq!(similarity_matrix(&corpora, &space, params).unwrap(), m);
}
