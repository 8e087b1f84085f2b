//! Data model and the contracts shared by streams, classifiers and detectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One element of a stream: a dense feature vector and one class label per target.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub features: Vec<f64>,
    pub targets: Vec<usize>,
    pub weight: f64,
}

impl Instance {
    pub fn new(features: Vec<f64>, targets: Vec<usize>) -> Self {
        Self {
            features,
            targets,
            weight: 1.0,
        }
    }

    pub fn single(features: Vec<f64>, target: usize) -> Self {
        Self::new(features, vec![target])
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    /// Copy of this instance restricted to target `j`.
    pub fn project_target(&self, j: usize) -> Instance {
        Instance {
            features: self.features.clone(),
            targets: vec![self.targets[j]],
            weight: self.weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamSchema {
    pub n_features: usize,
    /// Number of classes of each target; its length is the number of targets.
    pub target_cardinality: Vec<usize>,
    pub feature_names: Vec<String>,
    pub target_names: Vec<String>,
}

impl StreamSchema {
    pub fn new(n_features: usize, target_cardinality: Vec<usize>) -> Result<Self> {
        let feature_names = (0..n_features).map(|i| format!("f{i}")).collect();
        let target_names = (0..target_cardinality.len())
            .map(|j| format!("y{j}"))
            .collect();
        Self::with_names(n_features, target_cardinality, feature_names, target_names)
    }

    pub fn with_names(
        n_features: usize,
        target_cardinality: Vec<usize>,
        feature_names: Vec<String>,
        target_names: Vec<String>,
    ) -> Result<Self> {
        if n_features == 0 {
            return Err(Error::Schema("a stream needs at least one feature".into()));
        }
        if target_cardinality.is_empty() {
            return Err(Error::Schema("a stream needs at least one target".into()));
        }
        if let Some(k) = target_cardinality.iter().find(|&&k| k < 2) {
            return Err(Error::Schema(format!(
                "every target needs at least two classes, got {k}"
            )));
        }
        if feature_names.len() != n_features || target_names.len() != target_cardinality.len() {
            return Err(Error::Schema("name count does not match arity".into()));
        }
        Ok(Self {
            n_features,
            target_cardinality,
            feature_names,
            target_names,
        })
    }

    /// `n_labels` binary targets.
    pub fn multi_label(n_features: usize, n_labels: usize) -> Result<Self> {
        Self::new(n_features, vec![2; n_labels])
    }

    pub fn n_targets(&self) -> usize {
        self.target_cardinality.len()
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if instance.features.len() != self.n_features {
            return Err(Error::FeatureArity {
                expected: self.n_features,
                found: instance.features.len(),
            });
        }
        check_targets(&self.target_cardinality, &instance.targets)?;
        if !(instance.weight >= 0.0) {
            return Err(Error::Domain {
                what: "instance weight",
                value: instance.weight,
            });
        }
        Ok(())
    }
}

fn check_targets(cardinality: &[usize], targets: &[usize]) -> Result<()> {
    if targets.len() != cardinality.len() {
        return Err(Error::TargetArity {
            expected: cardinality.len(),
            found: targets.len(),
        });
    }
    for (j, (&y, &k)) in targets.iter().zip(cardinality).enumerate() {
        if y >= k {
            return Err(Error::UndeclaredClass {
                target: j,
                class: y,
                declared: k,
            });
        }
    }
    Ok(())
}

/// Probability vector over the classes of a single target.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDistribution(Vec<f64>);

impl ClassDistribution {
    pub fn uniform(n_classes: usize) -> Self {
        assert!(n_classes > 0, "a distribution needs at least one class");
        Self(vec![1.0 / n_classes as f64; n_classes])
    }

    /// Normalizes nonnegative scores; an all-zero (or non-finite) total yields the uniform distribution.
    pub fn from_scores(scores: Vec<f64>) -> Self {
        let total: f64 = scores.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Self::uniform(scores.len());
        }
        Self(scores.into_iter().map(|s| s / total).collect())
    }

    /// Wraps probabilities that already sum to one, without renormalizing.
    pub fn from_probs(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Self(probs)
    }

    pub fn one_hot(n_classes: usize, class: usize) -> Self {
        let mut p = vec![0.0; n_classes];
        p[class] = 1.0;
        Self(p)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Most probable class, lowest index on ties.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectionStatus {
    Normal,
    Warning,
    Drift,
}

impl fmt::Display for DetectionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectionStatus::Normal => "normal",
            DetectionStatus::Warning => "warning",
            DetectionStatus::Drift => "drift",
        })
    }
}

/// How many instances a stream can still produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Remaining {
    Finite(usize),
    Unbounded,
}

pub trait Stream: Send {
    fn schema(&self) -> &StreamSchema;

    /// Next instance, or `None` once the stream is exhausted.
    fn next_instance(&mut self) -> Result<Option<Instance>>;

    fn remaining(&self) -> Remaining;

    /// Returns the stream to its freshly constructed state.
    fn restart(&mut self) -> Result<()>;

    /// Up to `n` instances; empty iff the stream is exhausted.
    fn next_sample(&mut self, n: usize) -> Result<Vec<Instance>> {
        let mut out = Vec::with_capacity(n.min(4096));
        for _ in 0..n {
            match self.next_instance()? {
                Some(instance) => out.push(instance),
                None => break,
            }
        }
        Ok(out)
    }
}

impl<S: Stream + ?Sized> Stream for Box<S> {
    fn schema(&self) -> &StreamSchema {
        (**self).schema()
    }
    fn next_instance(&mut self) -> Result<Option<Instance>> {
        (**self).next_instance()
    }
    fn remaining(&self) -> Remaining {
        (**self).remaining()
    }
    fn restart(&mut self) -> Result<()> {
        (**self).restart()
    }
}

/// An incrementally trained classifier.
///
/// Untrained models predict the uniform distribution and class 0 for every
/// target. `predict` is the lowest-index argmax of `predict_proba`.
pub trait Classifier: Send {
    /// Updates the model with `batch`. `classes` gives the number of classes of
    /// each target and is only consulted on the first call; when it is absent
    /// the class counts are inferred from that first batch.
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()>;

    /// One distribution per target.
    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>>;

    fn predict(&self, x: &[f64]) -> Result<Vec<usize>> {
        Ok(self
            .predict_proba(x)?
            .iter()
            .map(ClassDistribution::argmax)
            .collect())
    }

    /// Forgets everything learned, including the declared layout.
    fn reset(&mut self);

    /// Batch training: reset followed by a single pass over `batch` in order.
    fn fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        self.reset();
        self.partial_fit(batch, classes)
    }
}

impl<C: Classifier + ?Sized> Classifier for Box<C> {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        (**self).partial_fit(batch, classes)
    }
    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        (**self).predict_proba(x)
    }
    fn predict(&self, x: &[f64]) -> Result<Vec<usize>> {
        (**self).predict(x)
    }
    fn reset(&mut self) {
        (**self).reset()
    }
    fn fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        (**self).fit(batch, classes)
    }
}

/// A change detector fed one scalar per time step.
pub trait DriftDetector: Send {
    fn update(&mut self, value: f64) -> Result<DetectionStatus>;

    /// Restores the freshly constructed state, keeping parameters.
    fn reset(&mut self);

    /// Current mean of the monitored signal as seen by the detector.
    fn estimation(&self) -> f64;
}

/// Feature and target layout a model commits to on its first update.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layout {
    n_features: Option<usize>,
    cardinality: Option<Vec<usize>>,
}

impl Layout {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_schema(schema: &StreamSchema) -> Self {
        Self {
            n_features: Some(schema.n_features),
            cardinality: Some(schema.target_cardinality.clone()),
        }
    }

    pub fn is_declared(&self) -> bool {
        self.cardinality.is_some()
    }

    pub fn n_features(&self) -> Option<usize> {
        self.n_features
    }

    pub fn cardinality(&self) -> Option<&[usize]> {
        self.cardinality.as_deref()
    }

    pub fn n_targets(&self) -> Option<usize> {
        self.cardinality.as_ref().map(Vec::len)
    }

    /// Fixes the layout from `classes` (or the batch, if absent) and validates
    /// every instance of `batch` against it. Returns true when the class
    /// layout was declared by this call.
    pub fn admit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<bool> {
        let mut declared_now = false;
        match (&self.cardinality, classes) {
            (None, Some(classes)) => {
                if classes.is_empty() || classes.iter().any(|&k| k < 2) {
                    return Err(Error::Schema(format!(
                        "declared classes must name at least two classes per target, got {classes:?}"
                    )));
                }
                self.cardinality = Some(classes.to_vec());
                declared_now = true;
            }
            (None, None) => {
                if let Some(first) = batch.first() {
                    let mut k = vec![2usize; first.targets.len()];
                    for inst in batch {
                        if inst.targets.len() != k.len() {
                            return Err(Error::TargetArity {
                                expected: k.len(),
                                found: inst.targets.len(),
                            });
                        }
                        for (kj, &y) in k.iter_mut().zip(&inst.targets) {
                            *kj = (*kj).max(y + 1);
                        }
                    }
                    self.cardinality = Some(k);
                    declared_now = true;
                }
            }
            (Some(existing), Some(classes)) if existing.as_slice() != classes => {
                return Err(Error::Schema(format!(
                    "classes {classes:?} differ from the declared {existing:?}"
                )));
            }
            _ => {}
        }
        for inst in batch {
            self.check_features(&inst.features)?;
            if self.n_features.is_none() {
                self.n_features = Some(inst.features.len());
            }
            check_targets(self.cardinality.as_deref().unwrap_or(&[]), &inst.targets)?;
            if !(inst.weight >= 0.0) {
                return Err(Error::Domain {
                    what: "instance weight",
                    value: inst.weight,
                });
            }
        }
        Ok(declared_now)
    }

    pub fn check_features(&self, x: &[f64]) -> Result<()> {
        match self.n_features {
            Some(n) if n != x.len() => Err(Error::FeatureArity {
                expected: n,
                found: x.len(),
            }),
            _ => Ok(()),
        }
    }

    /// Uniform distribution for every target; a single binary target if no layout is known.
    pub fn uniform(&self) -> Vec<ClassDistribution> {
        match &self.cardinality {
            Some(k) => k.iter().map(|&k| ClassDistribution::uniform(k)).collect(),
            None => vec![ClassDistribution::uniform(2)],
        }
    }

    pub fn clear(&mut self) {
        self.n_features = None;
        self.cardinality = None;
    }
}
