//! Very fast decision tree for numeric features.
//!
//! Each leaf keeps class counts and, per feature and class, a Gaussian
//! summary of the values it has seen. Every `grace_period` training weight a
//! leaf evaluates [`N_PROBES`] candidate thresholds per feature, estimating
//! the class mass on each side from the Gaussian summaries, and splits when
//! the best feature's information gain beats the runner-up by more than the
//! Hoeffding bound (or the bound has shrunk below the tie threshold).

use statrs::function::erf::erfc;

use super::naive_bayes::{require_single_target, GaussianStats};
use crate::base::{ClassDistribution, Classifier, Instance, Layout};
use crate::error::{Error, Result};

/// Candidate thresholds evaluated per feature at each split attempt.
pub const N_PROBES: usize = 10;

/// `sqrt(R² ln(1/δ) / (2n))`: with probability `1 − δ` the mean of `n`
/// observations of a variable with range `R` is within this distance of
/// its expectation.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> Result<f64> {
    if !(range > 0.0) || !range.is_finite() {
        return Err(Error::Domain {
            what: "Hoeffding bound range",
            value: range,
        });
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain {
            what: "Hoeffding bound confidence",
            value: delta,
        });
    }
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain {
            what: "Hoeffding bound sample count",
            value: n,
        });
    }
    Ok((range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt())
}

/// Per-feature, per-class value summaries of one leaf: `observers[feature][class]`.
pub type FeatureObservers = Vec<Vec<GaussianStats>>;

fn entropy(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum()
}

/// Information gain (bits) of splitting `pre` into `left` and `right`.
pub fn info_gain(pre: &[f64], left: &[f64], right: &[f64]) -> f64 {
    let wl: f64 = left.iter().sum();
    let wr: f64 = right.iter().sum();
    let total = wl + wr;
    if total <= 0.0 {
        return 0.0;
    }
    entropy(pre) - (wl / total) * entropy(left) - (wr / total) * entropy(right)
}

/// Evenly spaced interior thresholds across the observed range of a feature.
pub fn probe_thresholds(per_class: &[GaussianStats]) -> Vec<f64> {
    let seen = per_class.iter().filter(|s| s.count > 0.0);
    let lo = seen.clone().map(|s| s.min).fold(f64::INFINITY, f64::min);
    let hi = seen.map(|s| s.max).fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Vec::new();
    }
    (1..=N_PROBES)
        .map(|i| lo + (hi - lo) * i as f64 / (N_PROBES + 1) as f64)
        .collect()
}

fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Estimated class weights on each side of `x <= threshold`.
pub fn split_class_weights(per_class: &[GaussianStats], threshold: f64) -> (Vec<f64>, Vec<f64>) {
    per_class
        .iter()
        .map(|s| {
            if s.count <= 0.0 {
                (0.0, 0.0)
            } else if threshold < s.min {
                (0.0, s.count)
            } else if threshold >= s.max {
                (s.count, 0.0)
            } else {
                let sd = s.std_dev();
                let left = if sd > 0.0 {
                    s.count * standard_normal_cdf((threshold - s.mean) / sd)
                } else if s.mean <= threshold {
                    s.count
                } else {
                    0.0
                };
                (left, s.count - left)
            }
        })
        .unzip()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoeffdingTreeConfig {
    pub grace_period: usize,
    /// δ of the Hoeffding bound.
    pub split_confidence: f64,
    /// τ: split anyway once the bound falls below this.
    pub tie_threshold: f64,
    /// Predict with naive Bayes over the leaf summaries instead of leaf counts.
    pub nb_leaves: bool,
    /// Keep a [`SplitAttempt`] record of every split attempt.
    pub record_attempts: bool,
}

impl Default for HoeffdingTreeConfig {
    fn default() -> Self {
        Self {
            grace_period: 200,
            split_confidence: 1e-7,
            tie_threshold: 0.05,
            nb_leaves: false,
            record_attempts: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeafSnapshot {
    pub class_counts: Vec<f64>,
    pub observers: FeatureObservers,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitDecision {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
}

/// What a leaf saw and decided at one split attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitAttempt {
    pub leaf: LeafSnapshot,
    pub epsilon: f64,
    pub decision: Option<SplitDecision>,
}

#[derive(Debug, Clone)]
struct Leaf {
    stats: LeafSnapshot,
    weight_at_last_attempt: f64,
}

impl Leaf {
    fn new(n_classes: usize, n_features: usize) -> Self {
        Self {
            stats: LeafSnapshot {
                class_counts: vec![0.0; n_classes],
                observers: vec![vec![GaussianStats::default(); n_classes]; n_features],
            },
            weight_at_last_attempt: 0.0,
        }
    }

    fn weight(&self) -> f64 {
        self.stats.class_counts.iter().sum()
    }

    fn learn(&mut self, x: &[f64], y: usize, w: f64) {
        self.stats.class_counts[y] += w;
        for (obs, &v) in self.stats.observers.iter_mut().zip(x) {
            obs[y].update(v, w);
        }
    }

    fn distribution(&self, x: &[f64], nb: bool) -> ClassDistribution {
        let counts = &self.stats.class_counts;
        let n: f64 = counts.iter().sum();
        if nb && n > 0.0 {
            return leaf_naive_bayes(&self.stats, x);
        }
        let c = counts.len() as f64;
        ClassDistribution::from_scores(counts.iter().map(|k| (k + 1.0) / (n + c)).collect())
    }

    /// Best threshold and its gain for each feature (`None` if the feature has no candidates).
    fn best_per_feature(&self) -> Vec<Option<(f64, f64)>> {
        self.stats
            .observers
            .iter()
            .map(|per_class| {
                let mut best: Option<(f64, f64)> = None;
                for t in probe_thresholds(per_class) {
                    let (l, r) = split_class_weights(per_class, t);
                    let g = info_gain(&self.stats.class_counts, &l, &r);
                    if best.is_none_or(|(_, bg)| g > bg) {
                        best = Some((t, g));
                    }
                }
                best
            })
            .collect()
    }
}

fn leaf_naive_bayes(stats: &LeafSnapshot, x: &[f64]) -> ClassDistribution {
    let total: f64 = stats.class_counts.iter().sum();
    let logs: Vec<f64> = stats
        .class_counts
        .iter()
        .enumerate()
        .map(|(c, &w)| {
            if w <= 0.0 {
                return f64::NEG_INFINITY;
            }
            (w / total).ln()
                + stats
                    .observers
                    .iter()
                    .zip(x)
                    .map(|(obs, &v)| obs[c].log_density(v))
                    .sum::<f64>()
        })
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return ClassDistribution::from_scores(stats.class_counts.clone());
    }
    ClassDistribution::from_scores(logs.iter().map(|l| (l - max).exp()).collect())
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(Leaf),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Hoeffding tree classifier for a single target.
#[derive(Debug, Clone)]
pub struct HoeffdingTree {
    config: HoeffdingTreeConfig,
    layout: Layout,
    nodes: Vec<Node>,
    n_splits: usize,
    weight_seen: f64,
    attempts: Vec<SplitAttempt>,
}

impl Default for HoeffdingTree {
    fn default() -> Self {
        Self::new(HoeffdingTreeConfig::default()).expect("defaults are valid")
    }
}

impl HoeffdingTree {
    pub fn new(config: HoeffdingTreeConfig) -> Result<Self> {
        if config.grace_period == 0 {
            return Err(Error::param("grace_period", "must be at least 1"));
        }
        if !(config.split_confidence > 0.0 && config.split_confidence < 1.0) {
            return Err(Error::param("split_confidence", "must be in (0, 1)"));
        }
        if !(config.tie_threshold >= 0.0) {
            return Err(Error::param("tie_threshold", "must be >= 0"));
        }
        Ok(Self {
            config,
            layout: Layout::new(),
            nodes: Vec::new(),
            n_splits: 0,
            weight_seen: 0.0,
            attempts: Vec::new(),
        })
    }

    pub fn config(&self) -> &HoeffdingTreeConfig {
        &self.config
    }

    pub fn n_splits(&self) -> usize {
        self.n_splits
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.len() - self.n_splits
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn weight_seen(&self) -> f64 {
        self.weight_seen
    }

    /// Recorded split attempts, oldest first (empty unless `record_attempts`).
    pub fn attempts(&self) -> &[SplitAttempt] {
        &self.attempts
    }

    /// Split nodes as `(feature, threshold)` in creation order.
    pub fn splits(&self) -> Vec<(usize, f64)> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split {
                    feature, threshold, ..
                } => Some((*feature, *threshold)),
                Node::Leaf(_) => None,
            })
            .collect()
    }

    /// Statistics of the leaf `x` falls into.
    pub fn leaf_for(&self, x: &[f64]) -> Option<&LeafSnapshot> {
        match self.nodes.get(self.route(x)?) {
            Some(Node::Leaf(leaf)) => Some(&leaf.stats),
            _ => None,
        }
    }

    fn route(&self, x: &[f64]) -> Option<usize> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf(_) => return Some(i),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
            }
        }
    }

    fn n_classes(&self) -> usize {
        self.layout.cardinality().map_or(2, |k| k[0])
    }

    fn attempt_split(&mut self, index: usize) {
        let n_classes = self.n_classes();
        let Node::Leaf(leaf) = &mut self.nodes[index] else {
            unreachable!("split attempts only happen at leaves");
        };
        let n = leaf.weight();
        leaf.weight_at_last_attempt = n;
        let range = (n_classes as f64).log2();
        let epsilon = hoeffding_bound(range, self.config.split_confidence, n)
            .expect("validated parameters and positive weight");

        let candidates = leaf.best_per_feature();
        let mut ranked: Vec<(usize, f64, f64)> = candidates
            .iter()
            .enumerate()
            .filter_map(|(f, c)| c.map(|(t, g)| (f, t, g)))
            .collect();
        // stable: equal gains keep the lower feature index first
        ranked.sort_by(|a, b| b.2.total_cmp(&a.2));

        let decision = ranked.first().and_then(|&(feature, threshold, best)| {
            let second = ranked.get(1).map_or(0.0, |c| c.2.max(0.0));
            let separated = best - second > epsilon || epsilon < self.config.tie_threshold;
            (best > 0.0 && separated).then_some(SplitDecision {
                feature,
                threshold,
                gain: best,
            })
        });

        if self.config.record_attempts {
            self.attempts.push(SplitAttempt {
                leaf: leaf.stats.clone(),
                epsilon,
                decision,
            });
        }

        if let Some(d) = decision {
            let n_features = leaf.stats.observers.len();
            let left = self.nodes.len();
            self.nodes
                .push(Node::Leaf(Leaf::new(n_classes, n_features)));
            self.nodes
                .push(Node::Leaf(Leaf::new(n_classes, n_features)));
            self.nodes[index] = Node::Split {
                feature: d.feature,
                threshold: d.threshold,
                left,
                right: left + 1,
            };
            self.n_splits += 1;
        }
    }
}

impl Classifier for HoeffdingTree {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        self.layout.admit(batch, classes)?;
        require_single_target(&self.layout, "the Hoeffding tree")?;
        for inst in batch {
            if self.nodes.is_empty() {
                self.nodes
                    .push(Node::Leaf(Leaf::new(self.n_classes(), inst.features.len())));
            }
            if inst.weight <= 0.0 {
                continue;
            }
            let index = self.route(&inst.features).expect("tree has a root");
            let Node::Leaf(leaf) = &mut self.nodes[index] else {
                unreachable!("routing ends at a leaf");
            };
            leaf.learn(&inst.features, inst.targets[0], inst.weight);
            self.weight_seen += inst.weight;
            if leaf.weight() - leaf.weight_at_last_attempt >= self.config.grace_period as f64 {
                self.attempt_split(index);
            }
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.layout.check_features(x)?;
        match self.route(x).map(|i| &self.nodes[i]) {
            Some(Node::Leaf(leaf)) => Ok(vec![leaf.distribution(x, self.config.nb_leaves)]),
            _ => Ok(self.layout.uniform()),
        }
    }

    fn reset(&mut self) {
        *self = Self::new(self.config).expect("validated");
    }
}
