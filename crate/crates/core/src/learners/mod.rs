//! Incremental classifiers.

mod bagging;
mod baseline;
mod hoeffding_tree;
mod knn;
mod multi_output;
mod naive_bayes;

use std::sync::Arc;

pub use bagging::{
    average_distributions, poisson_inversion, LeverageBagging, OzaBagging, Resampling,
};
pub use baseline::{MajorityClass, NoChange};
pub use hoeffding_tree::{
    hoeffding_bound, info_gain, probe_thresholds, split_class_weights, FeatureObservers,
    HoeffdingTree, HoeffdingTreeConfig, LeafSnapshot, SplitAttempt, SplitDecision, N_PROBES,
};
pub use knn::{Knn, KnnAdwin, WindowBuffer};
pub use multi_output::MultiOutputLearner;
pub use naive_bayes::{GaussianStats, NaiveBayes, VARIANCE_FLOOR};

use crate::base::Classifier;

/// Builds fresh, untrained base models for ensembles and wrappers.
pub type ModelFactory = Arc<dyn Fn() -> Box<dyn Classifier> + Send + Sync>;

pub fn factory<C, F>(build: F) -> ModelFactory
where
    C: Classifier + 'static,
    F: Fn() -> C + Send + Sync + 'static,
{
    Arc::new(move || Box::new(build()) as Box<dyn Classifier>)
}
