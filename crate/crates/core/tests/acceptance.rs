//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero if any fails.

mod common;

use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::split_oracle::check_attempt;
use common::spy::{Call, CountingStream, Spy};
use common::*;
use serde_json::json;
use streamlearn::drift::{Adwin, Ddm, Eddm, PageHinkley};
use streamlearn::evaluation::{
    holdout_run, kappa, prequential_run, EvalConfig, HoldoutConfig, MetricSet, NamedModel,
};
use streamlearn::generators::*;
use streamlearn::learners::*;
use streamlearn::rng::derive_seed;
use streamlearn::{Classifier, DetectionStatus, DriftDetector, Instance, Stream};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn statuses(d: &mut dyn DriftDetector, seq: &[f64]) -> Vec<Signal> {
    seq.iter()
        .map(|&v| match d.update(v).unwrap() {
            DetectionStatus::Normal => Signal::Normal,
            DetectionStatus::Warning => Signal::Warning,
            DetectionStatus::Drift => Signal::Drift,
        })
        .collect()
}

fn reproducible_runs() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let experiments = [
        json!({
            "stream": {"type": "sea", "params": {"noise_fraction": 0.1}},
            "models": [{"name": "ht", "type": "hoeffding_tree"}, {"name": "nb", "type": "naive_bayes"}],
            "evaluator": {"type": "prequential", "max_samples": 20000}
        }),
        json!({
            "stream": {"type": "rbf_drift"},
            "models": [{"name": "knn", "type": "knn_adwin"}],
            "evaluator": {"type": "prequential", "max_samples": 10000}
        }),
        json!({
            "stream": {"type": "waveform"},
            "models": [{"name": "oza", "type": "oza_bagging", "params": {"n_estimators": 5}}],
            "evaluator": {"type": "holdout", "max_samples": 10000, "test_interval": 2500}
        }),
        json!({
            "stream": {"type": "multilabel"},
            "models": [{"name": "mo", "type": "multi_output"}],
            "evaluator": {"type": "prequential", "max_samples": 10000}
        }),
        json!({
            "stream": {"type": "sea", "params": {"switch_at": 5000, "switch_variant": 2}},
            "models": [{"name": "lb", "type": "leverage_bagging", "params": {"n_estimators": 5}}],
            "evaluator": {"type": "prequential", "max_samples": 10000}
        }),
    ];
    let start = Instant::now();
    let mut differing = Vec::new();
    for (i, exp) in experiments.iter().enumerate() {
        let mut traces = Vec::new();
        for run in 0..2 {
            let mut config = exp.clone();
            config["seed"] = json!(42);
            config["output"] = json!(format!("trace_{i}_{run}.csv"));
            let path = dir.path().join(format!("exp_{i}_{run}.json"));
            fs::write(&path, config.to_string()).map_err(|e| e.to_string())?;
            let out = Command::new(env!("CARGO_BIN_EXE_streamlearn"))
                .args(["run", "--no-timing", path.to_str().unwrap()])
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!(
                    "config {i} failed: {}",
                    String::from_utf8_lossy(&out.stderr)
                ));
            }
            traces.push(fs::read(dir.path().join(format!("trace_{i}_{run}.csv"))).unwrap());
        }
        if traces[0] != traces[1] {
            differing.push(i);
        }
    }
    let elapsed = start.elapsed();
    check(
        differing.is_empty() && elapsed < Duration::from_secs(60),
        format!("5 configs byte-identical across reruns in {elapsed:.1?}"),
        format!("differing configs {differing:?}, elapsed {elapsed:.1?}"),
    )
}

fn test_then_train_order() -> Outcome {
    let (spy, log) = Spy::new(false);
    let mut models = vec![NamedModel::new("spy", Box::new(spy))];
    let config = EvalConfig {
        max_samples: 10_000,
        pretrain_size: 0,
        ..Default::default()
    };
    prequential_run(&mut CountingStream::new(None), &mut models, &config)
        .map_err(|e| e.to_string())?;
    let want: Vec<Call> = (0..10_000)
        .flat_map(|i| [Call::Predict(i), Call::Fit(i)])
        .collect();
    let ordered = *log.lock().unwrap() == want;

    let (spy, log) = Spy::new(false);
    let mut models = vec![NamedModel::new("spy", Box::new(spy))];
    let config = EvalConfig {
        max_samples: 10_000,
        pretrain_size: 0,
        holdout: HoldoutConfig {
            test_size: 500,
            test_interval: 2000,
        },
        ..Default::default()
    };
    holdout_run(&mut CountingStream::new(None), &mut models, &config).map_err(|e| e.to_string())?;
    let log = log.lock().unwrap();
    let fit: std::collections::HashSet<usize> = log
        .iter()
        .filter_map(|c| if let Call::Fit(i) = c { Some(*i) } else { None })
        .collect();
    let disjoint = log
        .iter()
        .all(|c| !matches!(c, Call::Predict(i) if fit.contains(i)));
    check(
        ordered && disjoint,
        "10000 instances predicted before training; holdout sets disjoint".into(),
        format!("prequential order {ordered}, holdout disjoint {disjoint}"),
    )
}

fn adwin_against_naive() -> Outcome {
    let mut worst = 0;
    let mut missed = 0;
    for seed in 0..20 {
        let seq = bernoulli_shift(100 + seed, 5000, 2500, 0.2, 0.8);
        let bucketed = statuses(&mut Adwin::default(), &seq)
            .iter()
            .skip(2500)
            .position(|s| *s == Signal::Drift);
        let naive = naive_adwin_detections(&seq, 0.002)
            .into_iter()
            .find(|&t| t >= 2500)
            .map(|t| t - 2500);
        match (bucketed, naive) {
            (Some(b), Some(n)) => worst = worst.max(b.abs_diff(n)),
            _ => missed += 1,
        }
    }
    let mut false_alarms = 0;
    for seed in 0..20 {
        let seq = bernoulli_shift(200 + seed, 5000, 5000, 0.2, 0.2);
        false_alarms += statuses(&mut Adwin::default(), &seq)
            .iter()
            .filter(|s| **s == Signal::Drift)
            .count();
    }
    check(
        missed == 0 && worst <= 32 && false_alarms <= 1,
        format!(
            "ADWIN within {worst} steps of naive on 20 shifts; {false_alarms} stationary alarms"
        ),
        format!("missed {missed}, worst gap {worst}, stationary alarms {false_alarms}"),
    )
}

fn detector_delays() -> Outcome {
    let mut report = Vec::new();
    let mut ok = true;
    let names = ["DDM", "EDDM", "Page-Hinkley"];
    for (d, name) in names.iter().enumerate() {
        let mut on_time = 0;
        let mut exact = true;
        for seed in 0..20 {
            let seq = bernoulli_shift(500 + seed, 3000, 1000, 0.2, 0.8);
            let (got, want) = match d {
                0 => (statuses(&mut Ddm::default(), &seq), ddm_reference(&seq, 30)),
                1 => (
                    statuses(&mut Eddm::default(), &seq),
                    eddm_reference(&seq, 0.95, 0.9, 30),
                ),
                _ => (
                    statuses(&mut PageHinkley::default(), &seq),
                    page_hinkley_reference(&seq, 0.005, 50.0, 30),
                ),
            };
            exact &= got == want;
            if let Some(delay) = got[1000..].iter().position(|s| *s == Signal::Drift) {
                on_time += usize::from(delay <= 300);
            }
        }
        ok &= exact && on_time >= 18;
        report.push(format!("{name} {on_time}/20 (exact {exact})"));
    }
    let line = format!("delay <= 300: {}", report.join(", "));
    check(ok, line.clone(), line)
}

fn hoeffding_bound_values() -> Outcome {
    let b = hoeffding_bound(1.0, 1e-7, 1000.0).map_err(|e| e.to_string())?;
    let mut mismatches = 0;
    for i in 0..10 {
        for j in 0..10 {
            let range = 0.5 + 0.4 * i as f64;
            let n = 10.0 * 3f64.powi(j);
            let delta = 10f64.powi(-(1 + (i + j) % 9));
            let a = hoeffding_bound(range, delta, n).unwrap();
            let q = hoeffding_bound(range, delta, 4.0 * n).unwrap();
            mismatches += usize::from(q != a / 2.0);
        }
    }
    check(
        (b - 0.08977).abs() <= 1e-5 && mismatches == 0,
        format!("bound(1, 1e-7, 1000) = {b:.6}; 4n halves it exactly on 100 points"),
        format!("bound {b}, {mismatches} of 100 grid points not exactly halved"),
    )
}

fn hoeffding_tree_on_sea() -> Outcome {
    let mut stream = SeaGenerator::new(SeaConfig::default()).unwrap();
    let mut models = vec![NamedModel::new(
        "ht",
        Box::new(HoeffdingTree::new(HoeffdingTreeConfig::default()).unwrap()),
    )];
    let config = EvalConfig {
        max_samples: 50_000,
        ..Default::default()
    };
    let start = Instant::now();
    let records = prequential_run(&mut stream, &mut models, &config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let acc = records.last().unwrap().metric(0, "accuracy").unwrap();

    let tree_config = HoeffdingTreeConfig {
        record_attempts: true,
        ..Default::default()
    };
    let mut tree = HoeffdingTree::new(tree_config).unwrap();
    let mut stream = SeaGenerator::new(SeaConfig::default()).unwrap();
    tree.partial_fit(&stream.next_sample(50_000).unwrap(), Some(&[2]))
        .unwrap();
    let checked = tree
        .attempts()
        .iter()
        .filter(|a| check_attempt(a, &tree_config))
        .count();
    check(
        acc >= 0.90 && elapsed < Duration::from_secs(10) && checked == tree.attempts().len(),
        format!(
            "accuracy {acc:.4} in {elapsed:.1?}; {checked}/{} split attempts match the oracle",
            tree.attempts().len()
        ),
        format!("accuracy {acc:.4}, elapsed {elapsed:.1?}, checked {checked}"),
    )
}

/// Share of correct test-then-train predictions on instances 5000..7000.
fn post_switch_accuracy(model: &mut dyn Classifier, seed: u64) -> f64 {
    let s = derive_seed(seed, 0);
    let before = SeaGenerator::new(SeaConfig {
        variant: 2,
        noise_fraction: 0.0,
        seed: s,
    })
    .unwrap();
    let after = SeaGenerator::new(SeaConfig {
        variant: 3,
        noise_fraction: 0.0,
        seed: derive_seed(s, 1),
    })
    .unwrap();
    let mut stream = AbruptDriftStream::new(Box::new(before), Box::new(after), 5000).unwrap();
    model.partial_fit(&[], Some(&[2])).unwrap();
    let mut correct = 0;
    for t in 0..7000 {
        let inst = stream.next_instance().unwrap().unwrap();
        if t >= 5000 && model.predict(&inst.features).unwrap() == inst.targets {
            correct += 1;
        }
        model
            .partial_fit(std::slice::from_ref(&inst), None)
            .unwrap();
    }
    f64::from(correct) / 2000.0
}

fn knn_adwin_recovers() -> Outcome {
    let start = Instant::now();
    let (mut plain, mut adaptive) = (0.0, 0.0);
    for seed in 0..10 {
        plain += post_switch_accuracy(&mut Knn::new(5, 5000).unwrap(), seed) / 10.0;
        adaptive += post_switch_accuracy(&mut KnnAdwin::new(5, 5000, 0.002).unwrap(), seed) / 10.0;
    }
    let gain = 100.0 * (adaptive - plain);
    let elapsed = start.elapsed();
    check(
        gain >= 5.0 && elapsed < Duration::from_secs(60),
        format!("after the switch kNN {plain:.4}, kNN+ADWIN {adaptive:.4} (+{gain:.2} points) in {elapsed:.1?}"),
        format!("kNN {plain:.4}, kNN+ADWIN {adaptive:.4}, gain {gain:.2} points, {elapsed:.1?}"),
    )
}

fn bits(model: &dyn Classifier, x: &[f64]) -> Vec<u64> {
    model
        .predict_proba(x)
        .unwrap()
        .iter()
        .flat_map(|d| d.probs().iter().map(|p| p.to_bits()).collect::<Vec<_>>())
        .collect()
}

fn same_predictions(a: &mut dyn Classifier, b: &mut dyn Classifier, data: &[Instance]) -> bool {
    a.partial_fit(&[], Some(&[3])).unwrap();
    b.partial_fit(&[], Some(&[3])).unwrap();
    data.chunks(5).all(|chunk| {
        a.partial_fit(chunk, None).unwrap();
        b.partial_fit(chunk, None).unwrap();
        chunk
            .iter()
            .all(|i| bits(a, &i.features) == bits(b, &i.features))
    })
}

fn degenerate_wrappers() -> Outcome {
    let mut waves = WaveformGenerator::new(WaveformConfig::default()).unwrap();
    let data = waves.next_sample(3000).unwrap();
    let tree = || HoeffdingTree::new(HoeffdingTreeConfig::default()).unwrap();
    let base = factory(tree);

    let oza = same_predictions(
        &mut OzaBagging::with_resampling(base.clone(), 1, Resampling::Fixed(1), 7).unwrap(),
        &mut tree(),
        &data,
    );
    let multi = same_predictions(
        &mut MultiOutputLearner::new(base.clone()),
        &mut tree(),
        &data,
    );
    let leverage = same_predictions(
        &mut LeverageBagging::with_options(
            base.clone(),
            4,
            Resampling::Poisson(6.0),
            0.002,
            false,
            7,
        )
        .unwrap(),
        &mut OzaBagging::with_resampling(base, 4, Resampling::Poisson(6.0), 7).unwrap(),
        &data,
    );
    let line = format!(
        "bitwise equal: single Oza member {oza}, single-target wrapper {multi}, Leverage without detection {leverage}"
    );
    check(oza && multi && leverage, line.clone(), line)
}

fn metric_values() -> Outcome {
    let mut problems = Vec::new();
    let k = kappa(&[vec![40, 10], vec![20, 30]]).unwrap();
    if (k - 0.4).abs() > 1e-12 {
        problems.push(format!("kappa {k}"));
    }
    let diagonal = kappa(&[vec![12, 0, 0], vec![0, 7, 0], vec![0, 0, 30]]).unwrap();
    if diagonal != 1.0 {
        problems.push(format!("diagonal kappa {diagonal}"));
    }
    let mut multi = MetricSet::new(&[2, 2, 2]);
    multi.update(&[1, 0, 1], &[1, 1, 1]).unwrap();
    if (multi.hamming_loss() - 1.0 / 3.0).abs() > 1e-12 {
        problems.push(format!("hamming {}", multi.hamming_loss()));
    }

    struct Alternating(usize, streamlearn::StreamSchema);
    impl Stream for Alternating {
        fn schema(&self) -> &streamlearn::StreamSchema {
            &self.1
        }
        fn next_instance(&mut self) -> streamlearn::Result<Option<Instance>> {
            self.0 += 1;
            Ok(Some(Instance::single(vec![0.0], self.0 % 2)))
        }
        fn remaining(&self) -> streamlearn::Remaining {
            streamlearn::Remaining::Unbounded
        }
        fn restart(&mut self) -> streamlearn::Result<()> {
            self.0 = 0;
            Ok(())
        }
    }
    let mut stream = Alternating(0, streamlearn::StreamSchema::new(1, vec![2]).unwrap());
    let mut models = vec![NamedModel::new("nc", Box::new(NoChange::new()))];
    let config = EvalConfig {
        max_samples: 1000,
        pretrain_size: 1,
        ..Default::default()
    };
    let records = prequential_run(&mut stream, &mut models, &config).map_err(|e| e.to_string())?;
    let nc = records.last().unwrap().metric(0, "accuracy").unwrap();
    if nc != 0.0 {
        problems.push(format!("no-change on alternating labels {nc}"));
    }
    check(
        problems.is_empty(),
        "kappa 0.4, diagonal kappa 1, hamming 1/3, alternating no-change 0".into(),
        problems.join("; "),
    )
}

fn generator_statistics() -> Outcome {
    let n = 50_000;
    let mut sea = SeaGenerator::new(SeaConfig {
        noise_fraction: 0.1,
        seed: 3,
        ..Default::default()
    })
    .unwrap();
    let mut flips = 0;
    for _ in 0..n {
        let inst = sea.next_instance().unwrap().unwrap();
        flips += usize::from(Some(inst.targets[0]) != sea.last_clean_label());
    }
    let flip_rate = flips as f64 / n as f64;

    let centroid = |x: f64, class: usize, weight: f64| Centroid {
        center: vec![x, 0.5],
        class,
        std_dev: 0.05,
        weight,
    };
    let mut rbf = RbfGenerator::from_centroids(
        vec![centroid(0.25, 0, 3.0), centroid(0.75, 1, 1.0)],
        2,
        0.0,
        1,
        4,
    )
    .unwrap();
    let zeros = rbf
        .next_sample(n)
        .unwrap()
        .iter()
        .filter(|i| i.targets[0] == 0)
        .count();
    let rbf_freq = zeros as f64 / n as f64;

    let mut wave = WaveformGenerator::new(WaveformConfig::default()).unwrap();
    let mut counts = [0usize; 3];
    for inst in wave.next_sample(n).unwrap() {
        counts[inst.targets[0]] += 1;
    }
    let worst_marginal = counts
        .iter()
        .map(|&c| (c as f64 / n as f64 - 1.0 / 3.0).abs())
        .fold(0.0, f64::max);

    let ok = (flip_rate - 0.1).abs() <= 0.01
        && (rbf_freq - 0.75).abs() <= 0.02
        && worst_marginal <= 0.01;
    let line = format!(
        "SEA flip rate {flip_rate:.4}, RBF class-0 share {rbf_freq:.4}, waveform max marginal gap {worst_marginal:.4}"
    );
    check(ok, line.clone(), line)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("reproducible CLI runs", reproducible_runs),
        ("test-then-train ordering", test_then_train_order),
        ("ADWIN against exhaustive search", adwin_against_naive),
        ("drift detector delays", detector_delays),
        ("Hoeffding bound", hoeffding_bound_values),
        ("Hoeffding tree on SEA", hoeffding_tree_on_sea),
        ("kNN with ADWIN after drift", knn_adwin_recovers),
        ("degenerate ensembles", degenerate_wrappers),
        ("metric values", metric_values),
        ("generator statistics", generator_statistics),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
