//! Prequential and holdout evaluation.
//!
//! Both evaluators pull batches from one stream and feed the same batch to
//! every model, so models are compared on identical data. Before anything
//! else each model is told the stream's classes.

mod holdout;
mod metrics;
mod prequential;

pub use holdout::holdout_run;
pub use metrics::{kappa, MetricSet, DEFAULT_WINDOW};
pub use prequential::prequential_run;

use crate::base::{Classifier, Stream};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoldoutConfig {
    /// Instances drawn for each test.
    pub test_size: usize,
    /// Training instances between two tests.
    pub test_interval: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    /// Total instances to draw (prequential) or to train on (holdout), pretraining included.
    pub max_samples: usize,
    pub batch_size: usize,
    /// Prequential: emit a record every this many instances.
    pub sample_frequency: usize,
    /// Instances used for training only before evaluation starts.
    pub pretrain_size: usize,
    pub window_size: usize,
    pub holdout: HoldoutConfig,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            max_samples: 100_000,
            batch_size: 1,
            sample_frequency: 200,
            pretrain_size: 200,
            window_size: DEFAULT_WINDOW,
            holdout: HoldoutConfig {
                test_size: 1000,
                test_interval: 5000,
            },
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let positive = [
            ("batch_size", self.batch_size),
            ("sample_frequency", self.sample_frequency),
            ("window_size", self.window_size),
            ("test_size", self.holdout.test_size),
            ("test_interval", self.holdout.test_interval),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::param(name, "must be at least 1"));
            }
        }
        Ok(())
    }
}

/// A model under evaluation and the name its metrics are reported under.
pub struct NamedModel {
    pub name: String,
    pub model: Box<dyn Classifier>,
}

impl NamedModel {
    pub fn new(name: impl Into<String>, model: Box<dyn Classifier>) -> Self {
        Self {
            name: name.into(),
            model,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRecord {
    pub samples_seen: usize,
    pub wall_time_s: f64,
    /// Per model (in input order), metric `(name, value)` pairs.
    pub metrics: Vec<Vec<(&'static str, f64)>>,
    /// Holdout only: the test batch came up short because the stream ran out.
    pub truncated: bool,
}

impl EvaluationRecord {
    pub fn metric(&self, model: usize, name: &str) -> Option<f64> {
        self.metrics[model]
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
    }
}

/// Failure during a run, with the number of instances consumed when it happened.
#[derive(Debug, thiserror::Error)]
#[error("{source} (samples_seen={samples_seen})")]
pub struct RunError {
    pub samples_seen: usize,
    #[source]
    pub source: Error,
}

fn fail(samples_seen: usize) -> impl FnOnce(Error) -> RunError {
    move |source| RunError {
        samples_seen,
        source,
    }
}

/// Declares the stream's classes to every model.
fn declare(stream: &dyn Stream, models: &mut [NamedModel]) -> Result<Vec<usize>, RunError> {
    let classes = stream.schema().target_cardinality.clone();
    for m in models.iter_mut() {
        m.model.partial_fit(&[], Some(&classes)).map_err(fail(0))?;
    }
    Ok(classes)
}

/// Trains on `pretrain` instances; returns how many were consumed.
fn pretrain(
    stream: &mut dyn Stream,
    models: &mut [NamedModel],
    classes: &[usize],
    config: &EvalConfig,
) -> Result<usize, RunError> {
    let target = config.pretrain_size.min(config.max_samples);
    let mut seen = 0;
    while seen < target {
        let n = config.batch_size.min(target - seen);
        let batch = stream.next_sample(n).map_err(fail(seen))?;
        if batch.is_empty() {
            return Err(RunError {
                samples_seen: seen,
                source: Error::Config(format!(
                    "stream exhausted after {seen} of {target} pretraining instances"
                )),
            });
        }
        for m in models.iter_mut() {
            m.model
                .partial_fit(&batch, Some(classes))
                .map_err(fail(seen))?;
        }
        seen += batch.len();
    }
    Ok(seen)
}
