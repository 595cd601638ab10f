//! Acceptance gate. Runs every primary criterion, prints one PASS/FAIL line
//! each, and exits non-zero if any fails.

mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use support::*;
use tcmnn_core::data::{read_data_file, write_data_file, DataError, LabeledExample};
use tcmnn_core::distance::{kernel_distance, poly_feature_count};
use tcmnn_core::eval::{leave_one_out, mark_significance, paired_t_from_sums, Classifier, StatsOptions};
use tcmnn_core::mlp::{read_weights, write_weights};
use tcmnn_core::neighbors::{dwknn_classify, dwknn_regress, knn_classify, RegressionExample};
use tcmnn_core::tcm::{deserialize_cache, serialize_cache};
use tcmnn_core::{DataSet, DistanceSpec, Mlp, MlpConfig, SeededRng, StrangenessCache, TcmConfig, TcmModel};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn wisconsin_loo() -> Outcome {
    let data = load_wbc();
    ensure(data.len() == 683 && data.n_attributes() == 9, || format!("dataset shape {}x{}", data.len(), data.n_attributes()))?;
    let start = Instant::now();
    let run = leave_one_out(&data, &Classifier::Tcm(TcmConfig::default()), false).map_err(|e| e.to_string())?;
    let stats = mark_significance(&run, 0.0, &StatsOptions::default()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let overall = stats.overall_accuracy.unwrap();
    let benign = stats.class_accuracy[0].unwrap();
    let malignant = stats.class_accuracy[1].unwrap();
    let detail = format!("overall {overall:.2}% benign {benign:.2}% malignant {malignant:.2}% in {secs:.1}s");
    ensure(within(overall, 95.5, 0.7) && within(benign, 97.3, 0.7) && within(malignant, 92.1, 0.7), || detail.clone())?;
    ensure(secs < 120.0, || detail.clone())?;
    Ok(detail)
}

fn wisconsin_significance() -> Outcome {
    let data = load_wbc();
    let run = leave_one_out(&data, &Classifier::Tcm(TcmConfig::default()), false).map_err(|e| e.to_string())?;
    let opts = StatsOptions::default();
    let mut trend = Vec::new();
    for r in [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0] {
        let s = mark_significance(&run, r, &opts).map_err(|e| e.to_string())?;
        trend.push((r, s.overall_accuracy.unwrap(), s.not_classified));
    }
    let shown: Vec<String> = trend.iter().map(|(r, a, n)| format!("r={r}: {a:.2}%/{n:.2}%")).collect();
    let detail = shown.join(", ");
    let (_, acc30, nc30) = trend[6];
    ensure(format!("{acc30:.1}") == "100.0" && within(nc30, 28.9, 2.0), || detail.clone())?;
    let monotone = trend[1..].windows(2).all(|w| w[1].1 >= w[0].1 && w[1].2 >= w[0].2);
    ensure(monotone, || format!("not monotone: {detail}"))?;
    Ok(detail)
}

fn incremental_vs_naive() -> Outcome {
    let mut rng = SeededRng::new(3);
    let start = Instant::now();
    let mut checked = 0;
    let mut specs_seen = [false; 3];
    for case in 0..240 {
        let c = 2 + rng.below(2);
        let k = 1 + rng.below(3);
        let l = (c * k + rng.below(60)).min(60);
        let n = 1 + rng.below(5);
        let coarse = case % 4 == 0;
        let data = random_dataset(&mut rng, l, n, c, k, coarse);
        let spec = match case % 3 {
            0 => DistanceSpec::Euclidean,
            1 => DistanceSpec::minkowski([0.5, 1.0, 1.5, 3.0][rng.below(4)]).unwrap(),
            _ => DistanceSpec::poly(1 + rng.below(3) as u32, [0.0, 0.5, 10.0][rng.below(3)]).unwrap(),
        };
        specs_seen[case % 3] = true;
        let model = TcmModel::fit(data.clone(), TcmConfig::new(k, spec)).map_err(|e| e.to_string())?;
        for _ in 0..2 {
            let x = random_point(&mut rng, n, coarse);
            let (_, p) = model.classify(&x).map_err(|e| e.to_string())?;
            let naive = naive_p_values(&data, k, &spec, &x);
            let worst = p.0.iter().zip(&naive).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            ensure(worst <= 1e-12, || format!("case {case} ({spec}, k={k}): {:?} vs {naive:?}", p.0))?;
        }
        checked += 1;
    }
    ensure(specs_seen.iter().all(|&s| s), || "not every spec exercised".into())?;
    Ok(format!("{checked} datasets, 2 queries each, {:.2}s", start.elapsed().as_secs_f64()))
}

fn kernel_dual_form() -> Outcome {
    let mut rng = SeededRng::new(17);
    let mut worst: f64 = 0.0;
    let pairs = 1200;
    for _ in 0..pairs {
        let n = 1 + rng.below(4);
        let degree = 1 + rng.below(3) as u32;
        let c = [0.0, 0.5, 10.0][rng.below(3)];
        let a = random_point(&mut rng, n, false);
        let b = random_point(&mut rng, n, false);
        let explicit = plain_euclidean(&monomial_features(&a, degree, c), &monomial_features(&b, degree, c));
        let dual = kernel_distance(&a, &b, degree, c).map_err(|e| e.to_string())?;
        worst = worst.max((dual - explicit).abs() / explicit.max(f64::MIN_POSITIVE));
    }
    let count = poly_feature_count(135, 2, false).map_err(|e| e.to_string())?;
    let detail = format!("{pairs} pairs, worst relative error {worst:.2e}; poly_feature_count(135,2,false) = {count}");
    ensure(worst <= 1e-9 && count == 9180, || detail.clone())?;
    Ok(detail)
}

fn statistical_validity() -> Outcome {
    let l = 200;
    let data = two_clusters(11, l, 2, 6.0);
    let run = leave_one_out(&data, &Classifier::Tcm(TcmConfig::default()), false).map_err(|e| e.to_string())?;
    let true_p: Vec<f64> = run
        .results
        .iter()
        .map(|r| r.p_values.as_ref().unwrap().0[r.true_label.unwrap()])
        .collect();
    let floor = 1.0 / l as f64; // each fold trains on l - 1 examples
    let all_in_range = run
        .results
        .iter()
        .flat_map(|r| r.p_values.as_ref().unwrap().0.iter())
        .all(|&p| p >= floor && p <= 1.0);
    ensure(all_in_range, || "a p-value left [1/(l+1), 1]".into())?;
    let mut parts = Vec::new();
    for r in [0.05, 0.1, 0.2, 0.5] {
        let frac = true_p.iter().filter(|&&p| p <= r).count() as f64 / l as f64;
        let bound = r + 3.0 * (r * (1.0 - r) / l as f64).sqrt();
        parts.push(format!("r={r}: {frac:.3} <= {bound:.3}"));
        ensure(frac <= bound, || parts.join(", "))?;
    }
    Ok(parts.join(", "))
}

fn scaled(data: &DataSet, s: f64) -> DataSet {
    let rows = data
        .examples()
        .iter()
        .map(|e| LabeledExample::new(e.features.iter().map(|v| v * s).collect(), e.label.unwrap()))
        .collect();
    data.with_examples(rows).unwrap()
}

fn invariance_suite() -> Outcome {
    let mut rng = SeededRng::new(23);
    let max_diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut trials = 0;
    for _ in 0..40 {
        let classes = 2 + rng.below(2);
        let data = random_dataset(&mut rng, 40, 3, classes, 3, false);
        let k = 1 + rng.below(3);
        let x = random_point(&mut rng, 3, false);

        // (a) training order
        let mut order: Vec<usize> = (0..data.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.below(i + 1));
        }
        let shuffled = data.subset("shuffled", &order);
        for spec in [DistanceSpec::Euclidean, DistanceSpec::minkowski(0.5).unwrap(), DistanceSpec::poly(2, 0.5).unwrap()] {
            let config = TcmConfig::new(k, spec);
            let a = TcmModel::fit(data.clone(), config).unwrap().classify(&x).unwrap().1;
            let b = TcmModel::fit(shuffled.clone(), config).unwrap().classify(&x).unwrap().1;
            ensure(max_diff(&a.0, &b.0) <= 1e-12, || format!("order changed p-values under {spec}"))?;
        }

        // (b) uniform scaling
        for s in [0.001, 0.37, 3.7, 1000.0] {
            let sd = scaled(&data, s);
            let xs: Vec<f64> = x.iter().map(|v| v * s).collect();
            for spec in [DistanceSpec::Euclidean, DistanceSpec::minkowski(1.0).unwrap(), DistanceSpec::minkowski(0.5).unwrap(), DistanceSpec::minkowski(3.0).unwrap()] {
                let config = TcmConfig::new(k, spec);
                let (pa, a) = TcmModel::fit(data.clone(), config).unwrap().classify(&x).unwrap();
                let (pb, b) = TcmModel::fit(sd.clone(), config).unwrap().classify(&xs).unwrap();
                ensure(max_diff(&a.0, &b.0) <= 1e-12 && pa.label == pb.label, || format!("scale {s} changed p-values under {spec}"))?;
                let knn = knn_classify(&data, &x, k, &spec).unwrap() == knn_classify(&sd, &xs, k, &spec).unwrap();
                let dw = dwknn_classify(&data, &x, k, &spec).unwrap() == dwknn_classify(&sd, &xs, k, &spec).unwrap();
                ensure(knn && dw, || format!("scale {s} changed a baseline label under {spec}"))?;
            }
        }

        // (c) Minkowski p = 2 against Euclidean
        let euclid = TcmModel::fit(data.clone(), TcmConfig::new(k, DistanceSpec::Euclidean)).unwrap().classify(&x).unwrap().1;
        let mink2 = TcmModel::fit(data.clone(), TcmConfig::new(k, DistanceSpec::minkowski(2.0).unwrap())).unwrap().classify(&x).unwrap().1;
        ensure(max_diff(&euclid.0, &mink2.0) <= 1e-12, || "minkowski:2 differs from euclidean".into())?;
        trials += 1;
    }

    // (d) fractional exponent breaks the triangle inequality
    let half = DistanceSpec::minkowski(0.5).unwrap();
    let (a, b, c) = ([0.0, 0.0], [1.0, 0.0], [1.0, 1.0]);
    let d = [half.eval(&a, &b).unwrap(), half.eval(&b, &c).unwrap(), half.eval(&a, &c).unwrap()];
    ensure(d == [1.0, 1.0, 4.0], || format!("L1/2 distances {d:?}"))?;
    Ok(format!("{trials} datasets; L1/2 distances {d:?}"))
}

fn t_statistics() -> Outcome {
    let first = paired_t_from_sums(10, 38.0, 244.0).map_err(|e| e.to_string())?;
    let second = paired_t_from_sums(7, 15.0, 71.24).map_err(|e| e.to_string())?;
    let (a, b) = (format!("{:.3}", first.t), format!("{:.3}", second.t));
    let detail = format!("t = {a} (df {}), t = {b} (df {})", first.df, second.df);
    ensure(a == "3.612" && b == "2.221", || detail.clone())?;
    Ok(detail)
}

fn baseline_oracles() -> Outcome {
    let mut rng = SeededRng::new(55);
    let instances = 600;
    for case in 0..instances {
        let c = 2 + rng.below(2);
        let l = 4 + rng.below(40);
        let n = 1 + rng.below(4);
        let coarse = case % 2 == 0;
        let data = random_dataset(&mut rng, l, n, c, 1, coarse);
        let spec = random_spec(&mut rng);
        let k = 1 + rng.below(l.min(9));
        let x = random_point(&mut rng, n, coarse);
        ensure(knn_classify(&data, &x, k, &spec).unwrap() == brute_knn(&data, &x, k, &spec), || format!("knn case {case}"))?;
        ensure(dwknn_classify(&data, &x, k, &spec).unwrap() == brute_dwknn(&data, &x, k, &spec), || format!("dwknn case {case}"))?;
        let points: Vec<Vec<f64>> = (0..l).map(|i| data.features(i).to_vec()).collect();
        let targets: Vec<f64> = (0..l).map(|_| rng.symmetric(5.0)).collect();
        let train: Vec<RegressionExample> = points
            .iter()
            .zip(&targets)
            .map(|(p, &t)| RegressionExample { features: p.clone(), target: t })
            .collect();
        let got = dwknn_regress(&train, &x, k, &spec).unwrap();
        let want = brute_regress(&points, &targets, &x, k, &spec);
        ensure((got - want).abs() <= 1e-12 * want.abs().max(1.0), || format!("regression case {case}: {got} vs {want}"))?;
    }
    // Two benign neighbours closest, three malignant just beyond.
    let fig = DataSet::labeled(
        "neighbourhood",
        2,
        vec![
            (vec![0.5, 0.2], 0),
            (vec![-0.3, 0.6], 0),
            (vec![1.2, 0.9], 1),
            (vec![-1.1, -1.0], 1),
            (vec![0.2, -1.6], 1),
            (vec![4.0, 4.0], 0),
        ],
    )
    .unwrap();
    let e = DistanceSpec::Euclidean;
    let k2 = knn_classify(&fig, &[0.0, 0.0], 2, &e).unwrap();
    let k5 = knn_classify(&fig, &[0.0, 0.0], 5, &e).unwrap();
    ensure(k2 == 0 && k5 == 1, || format!("k=2 -> {k2}, k=5 -> {k5}"))?;
    Ok(format!("{instances} random instances; k=2 -> benign, k=5 -> malignant"))
}

fn mlp_numerics() -> Outcome {
    let mut rng = SeededRng::new(8);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for _ in 0..60 {
        let sizes = vec![1 + rng.below(4), 1 + rng.below(5), 1 + rng.below(3)];
        let config = MlpConfig { init_range: 1.0, seed: rng.next_u64(), ..MlpConfig::new(sizes.clone()) };
        let mut net = Mlp::init(&config).unwrap();
        let x: Vec<f64> = (0..sizes[0]).map(|_| rng.symmetric(2.0)).collect();
        let target = config.encode_targets(rng.below(sizes[2]));
        let analytic = net.backprop(&x, &target).unwrap().flatten();
        let params = net.params();
        for (i, &g) in analytic.iter().enumerate() {
            let mut p = params.clone();
            p[i] += h;
            net.set_params(&p);
            let up = net.loss(&x, &target).unwrap();
            p[i] = params[i] - h;
            net.set_params(&p);
            let down = net.loss(&x, &target).unwrap();
            net.set_params(&params);
            let numeric = (up - down) / (2.0 * h);
            worst = worst.max((g - numeric).abs() / g.abs().max(numeric.abs()).max(1e-8));
            checked += 1;
        }
    }
    ensure(worst <= 1e-4, || format!("gradient relative error {worst:.2e}"))?;

    let xor = DataSet::labeled(
        "xor",
        2,
        vec![(vec![0.0, 0.0], 0), (vec![0.0, 1.0], 1), (vec![1.0, 0.0], 1), (vec![1.0, 1.0], 0)],
    )
    .unwrap();
    let config = MlpConfig { eta: 0.5, init_range: 0.5, updates: 40_000, seed: 3, ..MlpConfig::new(vec![2, 2, 2]) };
    let mut net = Mlp::init(&config).unwrap();
    net.train_stochastic(&xor, &config).map_err(|e| e.to_string())?;
    let correct = (0..4).filter(|&i| net.predict_class(xor.features(i)).unwrap() == xor.label(i)).count();
    ensure(correct == 4, || format!("XOR {correct}/4"))?;

    let aug = net.augment(&xor, 0).map_err(|e| e.to_string())?;
    ensure(aug.labels() == xor.labels() && aug.n_attributes() == 2, || "augment changed labels or width".into())?;
    let wide = Mlp::init(&MlpConfig::new(vec![2, 7, 3, 2])).unwrap();
    let widths = (wide.augment(&xor, 0).unwrap().n_attributes(), wide.augment(&xor, 1).unwrap().n_attributes());
    ensure(widths == (7, 3), || format!("hidden widths {widths:?}"))?;
    Ok(format!("{checked} gradients, worst relative error {worst:.2e}; XOR 4/4; augment widths {widths:?}"))
}

fn format_round_trips() -> Outcome {
    let data = load_wbc();
    let bytes = write_data_file(&data).map_err(|e| e.to_string())?;
    let back = read_data_file(&bytes).map_err(|e| e.to_string())?;
    ensure(back == data, || ".data round trip changed the dataset".into())?;

    let config = TcmConfig::new(3, DistanceSpec::poly(2, 0.5).unwrap());
    let cache = StrangenessCache::build(&data, &config).map_err(|e| e.to_string())?;
    let reread = deserialize_cache(&serialize_cache(&cache), &data, &config).map_err(|e| e.to_string())?;
    ensure(reread == cache, || "cache round trip changed entries".into())?;

    let net = Mlp::init(&MlpConfig { seed: 5, ..MlpConfig::new(vec![9, 5, 2]) }).unwrap();
    let weights = read_weights(&write_weights(&net)).map_err(|e| e.to_string())?;
    ensure(weights == net, || "weight file round trip changed the network".into())?;

    let image = String::from_utf8(bytes).unwrap().replace("[IMAGE_FILE]\nfalse", "[IMAGE_FILE]\ntrue");
    let err = read_data_file(image.as_bytes()).err();
    ensure(matches!(err, Some(DataError::ImageFile)), || format!("image file gave {err:?}"))?;
    Ok(format!(".data, cache and weight files equal after round trip; image file rejected: {}", err.unwrap()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("Wisconsin leave-one-out accuracy", wisconsin_loo),
        ("Wisconsin significance marking", wisconsin_significance),
        ("incremental classify equals full recompute", incremental_vs_naive),
        ("kernel dual form equals explicit features", kernel_dual_form),
        ("statistical validity of p-values", statistical_validity),
        ("invariance suite", invariance_suite),
        ("paired t statistic fixtures", t_statistics),
        ("baseline oracles", baseline_oracles),
        ("MLP numerics", mlp_numerics),
        ("format round trips", format_round_trips),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
