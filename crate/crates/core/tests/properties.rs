mod support;

use proptest::prelude::*;
use tcmnn_core::data::{min_max_normalize, random_split, read_data_file, write_data_file, LabeledExample, SplitSpec};
use tcmnn_core::eval::{compute_statistics, histogram, mark_significance, separate_test, Classifier, StatsOptions};
use tcmnn_core::neighbors::{dwknn_classify, dwknn_regress, k_nearest, knn_classify, RegressionExample};
use tcmnn_core::tcm::{deserialize_cache, serialize_cache};
use tcmnn_core::{DataSet, DistanceSpec, StrangenessCache, TcmConfig, TcmModel};

fn spec_strategy() -> impl Strategy<Value = DistanceSpec> {
    prop_oneof![
        Just(DistanceSpec::Euclidean),
        prop::sample::select(vec![0.25, 0.5, 1.0, 1.5, 2.0, 3.0]).prop_map(|p| DistanceSpec::minkowski(p).unwrap()),
        (1u32..=3, prop::sample::select(vec![0.0, 0.5, 1.0, 10.0])).prop_map(|(d, c)| DistanceSpec::poly(d, c).unwrap()),
    ]
}

fn homogeneous_spec() -> impl Strategy<Value = DistanceSpec> {
    prop_oneof![
        Just(DistanceSpec::Euclidean),
        prop::sample::select(vec![0.5, 1.0, 1.5, 3.0]).prop_map(|p| DistanceSpec::minkowski(p).unwrap()),
    ]
}

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n)
}

/// Labelled dataset of `n`-vectors with `c` classes, each holding at least `k` examples.
fn dataset(n: usize, c: usize, k: usize, max_extra: usize) -> impl Strategy<Value = DataSet> {
    prop::collection::vec((vector(n), 0..c), 0..=max_extra).prop_map(move |extra| {
        let mut rows: Vec<(Vec<f64>, usize)> = (0..c * k).map(|i| (vec![i as f64 * 0.37 - 3.0; n], i % c)).collect();
        rows.extend(extra);
        DataSet::labeled("prop", c, rows).unwrap()
    })
}

fn tcm_case() -> impl Strategy<Value = (DataSet, usize, DistanceSpec, Vec<f64>)> {
    (1usize..=4, 2usize..=3, 1usize..=3).prop_flat_map(|(n, c, k)| (dataset(n, c, k, 25), Just(k), spec_strategy(), vector(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_axioms(spec in spec_strategy(), (a, b) in (1usize..6).prop_flat_map(|n| (vector(n), vector(n)))) {
        let ab = spec.eval(&a, &b).unwrap();
        prop_assert_eq!(ab.to_bits(), spec.eval(&b, &a).unwrap().to_bits());
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(spec.eval(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn scale_equivariance(spec in homogeneous_spec(), s in 0.01f64..100.0, (a, b) in (1usize..6).prop_flat_map(|n| (vector(n), vector(n)))) {
        let sa: Vec<f64> = a.iter().map(|v| v * s).collect();
        let sb: Vec<f64> = b.iter().map(|v| v * s).collect();
        let d = spec.eval(&a, &b).unwrap();
        let ds = spec.eval(&sa, &sb).unwrap();
        prop_assert!((ds - s * d).abs() <= 1e-12 * (s * d).max(1e-300));
    }

    #[test]
    fn triangle_inequality_for_p_at_least_one(
        p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 7.0]),
        (a, b, c) in (1usize..6).prop_flat_map(|n| (vector(n), vector(n), vector(n))),
    ) {
        let spec = DistanceSpec::minkowski(p).unwrap();
        let ac = spec.eval(&a, &c).unwrap();
        let bound = spec.eval(&a, &b).unwrap() + spec.eval(&b, &c).unwrap();
        prop_assert!(ac <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn p_values_lie_on_the_grid((data, k, spec, x) in tcm_case()) {
        let model = TcmModel::fit(data.clone(), TcmConfig::new(k, spec)).unwrap();
        let (pred, p) = model.classify(&x).unwrap();
        let l1 = (data.len() + 1) as f64;
        for &v in p.as_slice() {
            prop_assert!(v >= 1.0 / l1 && v <= 1.0);
            let count = v * l1;
            prop_assert!((count - count.round()).abs() < 1e-9);
        }
        prop_assert!((0.0..=1.0).contains(&pred.confidence));
        prop_assert!((0.0..=1.0).contains(&pred.credibility));
        prop_assert_eq!(pred.credibility, p.as_slice()[pred.label]);
        prop_assert!(p.as_slice().iter().all(|&v| v <= pred.credibility));
    }

    #[test]
    fn cached_equals_naive((data, k, spec, x) in tcm_case()) {
        let model = TcmModel::fit(data.clone(), TcmConfig::new(k, spec)).unwrap();
        let (_, p) = model.classify(&x).unwrap();
        prop_assert_eq!(p.0, support::naive_p_values(&data, k, &spec, &x));
    }

    #[test]
    fn training_order_is_irrelevant((data, k, spec, x) in tcm_case(), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..data.len()).collect();
        let mut rng = tcmnn_core::SeededRng::new(seed);
        for i in (1..order.len()).rev() {
            order.swap(i, rng.below(i + 1));
        }
        let shuffled = data.subset("shuffled", &order);
        let config = TcmConfig::new(k, spec);
        let a = TcmModel::fit(data, config).unwrap().classify(&x).unwrap();
        let b = TcmModel::fit(shuffled, config).unwrap().classify(&x).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn power_of_two_scaling_leaves_p_values_unchanged(
        (data, k, _, x) in tcm_case(),
        spec in homogeneous_spec(),
        e in -4i32..=4,
    ) {
        let s = 2f64.powi(e);
        let scaled_rows = data.examples().iter().map(|ex| LabeledExample::new(ex.features.iter().map(|v| v * s).collect(), ex.label.unwrap())).collect();
        let scaled = data.with_examples(scaled_rows).unwrap();
        let xs: Vec<f64> = x.iter().map(|v| v * s).collect();
        let config = TcmConfig::new(k, spec);
        let (pa, a) = TcmModel::fit(data, config).unwrap().classify(&x).unwrap();
        let (pb, b) = TcmModel::fit(scaled, config).unwrap().classify(&xs).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(pa.label, pb.label);
    }

    #[test]
    fn cache_round_trip((data, k, spec, _) in tcm_case()) {
        let config = TcmConfig::new(k, spec);
        let cache = StrangenessCache::build(&data, &config).unwrap();
        let back = deserialize_cache(&serialize_cache(&cache), &data, &config).unwrap();
        prop_assert_eq!(back, cache);
    }

    #[test]
    fn data_file_round_trip(
        data in (1usize..5, 1usize..4).prop_flat_map(|(n, c)| dataset(n, c, 1, 20)),
        named in any::<bool>(),
    ) {
        let data = if named {
            let names = (0..data.n_attributes()).map(|i| format!("attr {i}")).collect();
            data.with_attribute_names(Some(names), Some("class".into())).unwrap()
        } else {
            data
        };
        let bytes = write_data_file(&data).unwrap();
        let back = read_data_file(&bytes).unwrap();
        prop_assert_eq!(back.examples(), data.examples());
        prop_assert_eq!(back.class_names(), data.class_names());
        prop_assert_eq!(back.attribute_names(), data.attribute_names());
        prop_assert_eq!(write_data_file(&back).unwrap(), bytes);
    }

    #[test]
    fn split_partitions(data in dataset(2, 2, 1, 30), frac in 0.01f64..0.99, seed in any::<u64>()) {
        let test_count = ((data.len() as f64 * frac) as usize).clamp(1, data.len() - 1);
        let spec = SplitSpec { test_count, seed };
        let (train, test) = random_split(&data, spec).unwrap();
        prop_assert_eq!(test.len(), test_count);
        prop_assert_eq!(train.len() + test.len(), data.len());
        let mut all: Vec<String> = train.examples().iter().chain(test.examples()).map(|e| format!("{:?}", e)).collect();
        let mut orig: Vec<String> = data.examples().iter().map(|e| format!("{:?}", e)).collect();
        all.sort();
        orig.sort();
        prop_assert_eq!(all, orig);
        let (train2, test2) = random_split(&data, spec).unwrap();
        prop_assert_eq!(train2.examples(), train.examples());
        prop_assert_eq!(test2.examples(), test.examples());
    }

    #[test]
    fn normalisation_maps_train_into_unit_box(data in dataset(3, 2, 2, 20)) {
        let (train, _) = min_max_normalize(&data, &[]).unwrap();
        for j in 0..3 {
            let col: Vec<f64> = train.examples().iter().map(|e| e.features[j]).collect();
            prop_assert!(col.iter().all(|&v| (0.0..=1.0).contains(&v)));
            let raw: Vec<f64> = data.examples().iter().map(|e| e.features[j]).collect();
            let constant = raw.iter().all(|&v| v == raw[0]);
            if !constant {
                prop_assert!(col.contains(&0.0) && col.contains(&1.0));
            }
        }
    }

    #[test]
    fn knn_equals_dwknn_on_equal_distances(k in 1usize..6, labels in prop::collection::vec(0usize..3, 6), r in 0.1f64..5.0) {
        // Points on a circle around the query: every distance equals r.
        let rows: Vec<(Vec<f64>, usize)> = labels
            .iter()
            .enumerate()
            .map(|(i, &y)| {
                let t = i as f64 * std::f64::consts::FRAC_PI_2;
                (vec![r * t.cos().round(), r * t.sin().round()], y)
            })
            .collect();
        let rows: Vec<_> = rows.into_iter().take(4).collect();
        let data = DataSet::labeled("circle", 3, rows).unwrap();
        let k = k.min(data.len());
        let e = DistanceSpec::Euclidean;
        let nn = k_nearest(&data, &[0.0, 0.0], k, &e).unwrap();
        prop_assert!(nn.iter().all(|n| n.distance == r));
        prop_assert_eq!(knn_classify(&data, &[0.0, 0.0], k, &e).unwrap(), dwknn_classify(&data, &[0.0, 0.0], k, &e).unwrap());
    }

    #[test]
    fn regression_stays_within_neighbour_targets(
        rows in prop::collection::vec((vector(2), -50.0f64..50.0), 1..20),
        x in vector(2),
        k in 1usize..8,
        spec in spec_strategy(),
    ) {
        let train: Vec<RegressionExample> = rows.into_iter().map(|(features, target)| RegressionExample { features, target }).collect();
        let k = k.min(train.len());
        let y = dwknn_regress(&train, &x, k, &spec).unwrap();
        let order = support::brute_order(&train.iter().map(|e| e.features.clone()).collect::<Vec<_>>(), &x, &spec);
        let near: Vec<f64> = order.iter().take(k).map(|&(i, _)| train[i].target).collect();
        let lo = near.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = near.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(y >= lo - 1e-9 * lo.abs().max(1.0) && y <= hi + 1e-9 * hi.abs().max(1.0));
    }

    #[test]
    fn baselines_are_scale_invariant(data in dataset(2, 2, 1, 15), x in vector(2), k in 1usize..4, e in -3i32..=3, spec in homogeneous_spec()) {
        let s = 2f64.powi(e);
        let k = k.min(data.len());
        let rows = data.examples().iter().map(|ex| LabeledExample::new(ex.features.iter().map(|v| v * s).collect(), ex.label.unwrap())).collect();
        let scaled = data.with_examples(rows).unwrap();
        let xs: Vec<f64> = x.iter().map(|v| v * s).collect();
        prop_assert_eq!(knn_classify(&data, &x, k, &spec).unwrap(), knn_classify(&scaled, &xs, k, &spec).unwrap());
        prop_assert_eq!(dwknn_classify(&data, &x, k, &spec).unwrap(), dwknn_classify(&scaled, &xs, k, &spec).unwrap());
    }

    #[test]
    fn histogram_sums_to_hundred(values in prop::collection::vec(0.0f64..=1.0, 1..200), interval in prop::sample::select(vec![1u32, 2, 5, 10, 20, 25, 50, 100])) {
        let bins = histogram(&values, interval).unwrap();
        prop_assert_eq!(bins.len(), (100 / interval) as usize);
        prop_assert!((bins.iter().sum::<f64>() - 100.0).abs() < 1e-9);
        prop_assert!(bins.iter().all(|&b| (0.0..=100.0).contains(&b)));
    }

    #[test]
    fn statistics_identities((train, test) in (dataset(2, 3, 2, 25), dataset(2, 3, 1, 25)), k in 1usize..=2, rs in prop::collection::vec(0.0f64..=100.0, 1..6)) {
        let run = separate_test(&train, &test, &Classifier::Tcm(TcmConfig::new(k, DistanceSpec::Euclidean)), false).unwrap();
        let opts = StatsOptions::default();
        let base = compute_statistics(&run, &opts).unwrap();
        prop_assert_eq!(&mark_significance(&run, 0.0, &opts).unwrap(), &base);
        prop_assert_eq!(base.not_classified, 0.0);

        let mut rs = rs;
        rs.sort_by(f64::total_cmp);
        let mut last = 0.0;
        for r in rs {
            let s = mark_significance(&run, r, &opts).unwrap();
            prop_assert!(s.not_classified >= last);
            last = s.not_classified;
            if let Some(overall) = s.overall_accuracy {
                let weighted: f64 = s.class_accuracy.iter().zip(&s.class_counts).filter_map(|(a, &n)| a.map(|a| a * n as f64)).sum::<f64>() / s.classified as f64;
                prop_assert!((overall - weighted).abs() < 1e-9);
                prop_assert!((0.0..=100.0).contains(&overall));
            }
            for row in s.confusion.iter().flatten() {
                prop_assert!((row.iter().sum::<f64>() - 100.0).abs() < 1e-9);
            }
            for v in [s.avg_confidence, s.avg_credibility].into_iter().flatten() {
                prop_assert!((0.0..=100.0).contains(&v));
            }
        }
    }
}
