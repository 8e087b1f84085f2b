//! Exhaustive recomputation of Hoeffding tree split attempts.

use statrs::distribution::{ContinuousCDF, Normal};
use streamlearn::learners::{GaussianStats, HoeffdingTreeConfig, LeafSnapshot, SplitAttempt};

pub fn log2_entropy(w: &[f64]) -> f64 {
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    -w.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| (x / total) * (x / total).ln())
        .sum::<f64>()
        / std::f64::consts::LN_2
}

pub fn side_masses(stats: &[GaussianStats], t: f64) -> (Vec<f64>, Vec<f64>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for s in stats {
        let l = if s.count <= 0.0 || t < s.min {
            0.0
        } else if t >= s.max {
            s.count
        } else if s.std_dev() > 0.0 {
            s.count * Normal::new(s.mean, s.std_dev()).unwrap().cdf(t)
        } else if s.mean <= t {
            s.count
        } else {
            0.0
        };
        left.push(l);
        right.push(s.count - l);
    }
    (left, right)
}

/// `(feature, threshold, gain)` of every feature's best candidate, in feature order.
pub fn oracle_candidates(leaf: &LeafSnapshot) -> Vec<(usize, f64, f64)> {
    let pre = log2_entropy(&leaf.class_counts);
    let mut out = Vec::new();
    for (f, stats) in leaf.observers.iter().enumerate() {
        let seen: Vec<&GaussianStats> = stats.iter().filter(|s| s.count > 0.0).collect();
        let lo = seen.iter().map(|s| s.min).fold(f64::INFINITY, f64::min);
        let hi = seen.iter().map(|s| s.max).fold(f64::NEG_INFINITY, f64::max);
        if hi <= lo {
            continue;
        }
        let mut best: Option<(f64, f64)> = None;
        for i in 1..=10 {
            let t = lo + (hi - lo) * i as f64 / 11.0;
            let (l, r) = side_masses(stats, t);
            let (wl, wr) = (l.iter().sum::<f64>(), r.iter().sum::<f64>());
            let g = pre - wl / (wl + wr) * log2_entropy(&l) - wr / (wl + wr) * log2_entropy(&r);
            if best.is_none_or(|(_, bg)| g > bg) {
                best = Some((t, g));
            }
        }
        let (t, g) = best.unwrap();
        out.push((f, t, g));
    }
    out
}

/// Checks one recorded attempt against an exhaustive recomputation.
/// Returns false when the decision sits within rounding of the bound.
pub fn check_attempt(a: &SplitAttempt, config: &HoeffdingTreeConfig) -> bool {
    let n: f64 = a.leaf.class_counts.iter().sum();
    let c = a.leaf.class_counts.len() as f64;
    let eps = (c.log2().powi(2) * (1.0 / config.split_confidence).ln() / (2.0 * n)).sqrt();
    assert!((eps - a.epsilon).abs() < 1e-12);

    let mut ranked = oracle_candidates(&a.leaf);
    ranked.sort_by(|x, y| y.2.partial_cmp(&x.2).unwrap().then(x.0.cmp(&y.0)));
    let Some(&(feature, threshold, best)) = ranked.first() else {
        assert!(a.decision.is_none());
        return true;
    };
    if best <= 0.0 {
        assert!(a.decision.is_none(), "tree split a leaf with no gain");
        return true;
    }
    let second = ranked.get(1).map_or(0.0, |r| r.2.max(0.0));
    let margin = best - second - eps;
    if margin.abs() < 1e-9 || (ranked.len() > 1 && (ranked[0].2 - ranked[1].2).abs() < 1e-12) {
        return false;
    }
    let split = best > 0.0 && (margin > 0.0 || eps < config.tie_threshold);
    match &a.decision {
        Some(d) => {
            assert!(
                split,
                "tree split where the oracle would not: {best} {second} {eps}"
            );
            assert_eq!(d.feature, feature);
            assert_eq!(d.threshold, threshold);
            assert!((d.gain - best).abs() < 1e-12);
        }
        None => assert!(
            !split,
            "oracle splits on {feature} at {threshold} but tree did not"
        ),
    }
    true
}
