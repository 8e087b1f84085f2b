use std::f64::consts::PI;

use crate::base::{ClassDistribution, Classifier, Instance, Layout};
use crate::error::{Error, Result};

/// Added to every variance before evaluating a Gaussian density.
pub const VARIANCE_FLOOR: f64 = 1e-9;

/// One-pass weighted mean/variance (West's update) plus observed range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianStats {
    pub count: f64,
    pub mean: f64,
    pub m2: f64,
    pub min: f64,
    pub max: f64,
}

impl Default for GaussianStats {
    fn default() -> Self {
        Self {
            count: 0.0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl GaussianStats {
    pub fn update(&mut self, x: f64, weight: f64) {
        if weight <= 0.0 {
            return;
        }
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        self.count += weight;
        let delta = x - self.mean;
        self.mean += delta * weight / self.count;
        self.m2 += weight * delta * (x - self.mean);
    }

    /// Population variance `m2 / count`; 0 before any data.
    pub fn variance(&self) -> f64 {
        if self.count > 0.0 {
            (self.m2 / self.count).max(0.0)
        } else {
            0.0
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let var = self.variance() + VARIANCE_FLOOR;
        let d = x - self.mean;
        -0.5 * (2.0 * PI * var).ln() - d * d / (2.0 * var)
    }
}

/// Posterior `∝ prior · Π_f N(x_f; mean, var + floor)`, normalized in log space.
///
/// `class_weights[c]` are the prior masses; a class with zero mass gets zero
/// probability. If no class has mass the result is uniform.
pub(crate) fn gaussian_posterior(
    class_weights: &[f64],
    stats: &[Vec<GaussianStats>],
    x: &[f64],
) -> ClassDistribution {
    let total: f64 = class_weights.iter().sum();
    if !(total > 0.0) {
        return ClassDistribution::uniform(class_weights.len());
    }
    let log_post: Vec<f64> = class_weights
        .iter()
        .zip(stats)
        .map(|(&w, per_feature)| {
            if w <= 0.0 {
                return f64::NEG_INFINITY;
            }
            (w / total).ln()
                + per_feature
                    .iter()
                    .zip(x)
                    .map(|(s, &v)| s.log_density(v))
                    .sum::<f64>()
        })
        .collect();
    let max = log_post.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        // every seen class underflowed; fall back to the priors
        return ClassDistribution::from_scores(class_weights.to_vec());
    }
    ClassDistribution::from_scores(log_post.iter().map(|l| (l - max).exp()).collect())
}

/// Gaussian naive Bayes for a single target.
#[derive(Debug, Clone, Default)]
pub struct NaiveBayes {
    layout: Layout,
    class_weights: Vec<f64>,
    /// `stats[class][feature]`
    stats: Vec<Vec<GaussianStats>>,
}

impl NaiveBayes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn class_weights(&self) -> &[f64] {
        &self.class_weights
    }

    pub fn stats(&self, class: usize, feature: usize) -> &GaussianStats {
        &self.stats[class][feature]
    }
}

pub(crate) fn require_single_target(layout: &Layout, model: &str) -> Result<()> {
    match layout.n_targets() {
        Some(n) if n != 1 => Err(Error::Schema(format!(
            "{model} handles a single target, got {n}; wrap it in a multi-output learner"
        ))),
        _ => Ok(()),
    }
}

impl Classifier for NaiveBayes {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        let declared = self.layout.admit(batch, classes)?;
        require_single_target(&self.layout, "naive Bayes")?;
        if declared {
            self.class_weights = vec![0.0; self.layout.cardinality().expect("declared")[0]];
        }
        for inst in batch {
            if self.stats.is_empty() {
                self.stats = vec![
                    vec![GaussianStats::default(); inst.features.len()];
                    self.class_weights.len()
                ];
            }
            let c = inst.targets[0];
            self.class_weights[c] += inst.weight;
            for (s, &v) in self.stats[c].iter_mut().zip(&inst.features) {
                s.update(v, inst.weight);
            }
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.layout.check_features(x)?;
        if self.stats.is_empty() {
            return Ok(self.layout.uniform());
        }
        Ok(vec![gaussian_posterior(
            &self.class_weights,
            &self.stats,
            x,
        )])
    }

    fn reset(&mut self) {
        *self = Self::default();
    }
}
