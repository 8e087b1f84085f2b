//! Named components and their JSON parameters.
//!
//! Each builder consumes the parameters it knows and rejects anything left
//! over, so a typo in a config file is reported with the offending key.

use std::path::Path;

use serde_json::{Map, Value};

use crate::base::{Classifier, DriftDetector, Stream};
use crate::drift::{Adwin, Ddm, Eddm, PageHinkley};
use crate::generators::{
    AbruptDriftStream, CsvStream, CsvStreamConfig, MultiLabelConfig, MultiLabelGenerator,
    RbfConfig, RbfGenerator, SeaConfig, SeaGenerator, WaveformConfig, WaveformGenerator,
};
use crate::learners::{
    HoeffdingTree, HoeffdingTreeConfig, Knn, KnnAdwin, LeverageBagging, MajorityClass,
    ModelFactory, MultiOutputLearner, NaiveBayes, NoChange, OzaBagging, Resampling,
};
use crate::rng::derive_seed;

pub const GENERATORS: &[&str] = &["sea", "rbf", "rbf_drift", "waveform", "multilabel", "csv"];
pub const LEARNERS: &[&str] = &[
    "majority_class",
    "no_change",
    "knn",
    "knn_adwin",
    "naive_bayes",
    "hoeffding_tree",
    "oza_bagging",
    "leverage_bagging",
    "multi_output",
];
pub const DETECTORS: &[&str] = &["adwin", "ddm", "eddm", "page_hinkley"];
pub const EVALUATORS: &[&str] = &["prequential", "holdout"];

/// Error raised while interpreting a configuration; the message names the key.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

type Built<T> = std::result::Result<T, ConfigError>;

/// Parameters of one component, consumed key by key.
pub struct Params {
    context: String,
    map: Map<String, Value>,
}

impl Params {
    pub fn new(context: impl Into<String>, map: Map<String, Value>) -> Self {
        Self {
            context: context.into(),
            map,
        }
    }

    pub fn from_value(context: impl Into<String>, value: Option<&Value>) -> Built<Self> {
        let context = context.into();
        match value {
            None | Some(Value::Null) => Ok(Self::new(context, Map::new())),
            Some(Value::Object(m)) => Ok(Self::new(context, m.clone())),
            Some(_) => Err(ConfigError(format!("{context}: expected an object"))),
        }
    }

    fn key(&self, key: &str) -> String {
        format!("{}.{key}", self.context)
    }

    fn bad(&self, key: &str, expected: &str) -> ConfigError {
        ConfigError(format!("{}: expected {expected}", self.key(key)))
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Built<f64> {
        match self.map.remove(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| self.bad(key, "a number")),
        }
    }

    pub fn u64_or(&mut self, key: &str, default: u64) -> Built<u64> {
        match self.map.remove(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .ok_or_else(|| self.bad(key, "a nonnegative integer")),
        }
    }

    pub fn usize_or(&mut self, key: &str, default: usize) -> Built<usize> {
        let v = self.u64_or(key, default as u64)?;
        usize::try_from(v).map_err(|_| self.bad(key, "a smaller integer"))
    }

    pub fn opt_usize(&mut self, key: &str) -> Built<Option<usize>> {
        if self.map.contains_key(key) {
            self.usize_or(key, 0).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn bool_or(&mut self, key: &str, default: bool) -> Built<bool> {
        match self.map.remove(key) {
            None => Ok(default),
            Some(v) => v.as_bool().ok_or_else(|| self.bad(key, "true or false")),
        }
    }

    pub fn string(&mut self, key: &str) -> Built<String> {
        match self.map.remove(key) {
            None => Err(ConfigError(format!("{}: missing", self.key(key)))),
            Some(Value::String(s)) => Ok(s),
            Some(_) => Err(self.bad(key, "a string")),
        }
    }

    pub fn usize_list(&mut self, key: &str) -> Built<Option<Vec<usize>>> {
        let Some(v) = self.map.remove(key) else {
            return Ok(None);
        };
        let items = v
            .as_array()
            .ok_or_else(|| self.bad(key, "a list of integers"))?;
        items
            .iter()
            .map(|x| x.as_u64().map(|n| n as usize))
            .collect::<Option<Vec<_>>>()
            .map(Some)
            .ok_or_else(|| self.bad(key, "a list of integers"))
    }

    pub fn take(&mut self, key: &str) -> Option<Value> {
        self.map.remove(key)
    }

    /// Fails if any key was not consumed.
    pub fn finish(self) -> Built<()> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(k) => Err(ConfigError(format!("{}: unknown parameter", self.key(k)))),
        }
    }
}

fn lib(context: &str) -> impl Fn(crate::Error) -> ConfigError + '_ {
    move |e| ConfigError(format!("{context}: {e}"))
}

/// Builds a stream generator. `seed` is used for any seed not given explicitly.
/// Relative CSV paths resolve against `base_dir`.
pub fn build_stream(
    kind: &str,
    mut p: Params,
    seed: u64,
    base_dir: &Path,
) -> Built<Box<dyn Stream>> {
    let ctx = p.context.clone();
    let stream: Box<dyn Stream> = match kind {
        "sea" => {
            let config = SeaConfig {
                variant: p.usize_or("variant", 0)?,
                noise_fraction: p.f64_or("noise_fraction", 0.0)?,
                seed: p.u64_or("seed", derive_seed(seed, 0))?,
            };
            let switch_at = p.opt_usize("switch_at")?;
            let switch_variant = p.opt_usize("switch_variant")?;
            let before = SeaGenerator::new(config.clone()).map_err(lib(&ctx))?;
            match (switch_at, switch_variant) {
                (None, None) => Box::new(before),
                (Some(at), Some(variant)) => {
                    let after = SeaGenerator::new(SeaConfig {
                        variant,
                        seed: derive_seed(config.seed, 1),
                        ..config
                    })
                    .map_err(lib(&ctx))?;
                    Box::new(
                        AbruptDriftStream::new(Box::new(before), Box::new(after), at)
                            .map_err(lib(&ctx))?,
                    )
                }
                (Some(_), None) => {
                    return Err(ConfigError(format!("{ctx}.switch_variant: missing")))
                }
                (None, Some(_)) => return Err(ConfigError(format!("{ctx}.switch_at: missing"))),
            }
        }
        "rbf" | "rbf_drift" => {
            let default_speed = if kind == "rbf" { 0.0 } else { 0.001 };
            let config = RbfConfig {
                n_centroids: p.usize_or("n_centroids", 50)?,
                n_features: p.usize_or("n_features", 10)?,
                n_classes: p.usize_or("n_classes", 2)?,
                drift_speed: p.f64_or("drift_speed", default_speed)?,
                seed_model: p.u64_or("seed_model", derive_seed(seed, 0))?,
                seed_sample: p.u64_or("seed_sample", derive_seed(seed, 1))?,
            };
            Box::new(RbfGenerator::new(config).map_err(lib(&ctx))?)
        }
        "waveform" => Box::new(
            WaveformGenerator::new(WaveformConfig {
                noise_sigma: p.f64_or("noise_sigma", 1.0)?,
                seed: p.u64_or("seed", derive_seed(seed, 0))?,
            })
            .map_err(lib(&ctx))?,
        ),
        "multilabel" => Box::new(
            MultiLabelGenerator::new(MultiLabelConfig {
                n_features: p.usize_or("n_features", 20)?,
                n_labels: p.usize_or("n_labels", 5)?,
                label_dependence: p.f64_or("label_dependence", 0.5)?,
                seed: p.u64_or("seed", derive_seed(seed, 0))?,
            })
            .map_err(lib(&ctx))?,
        ),
        "csv" => {
            let path = base_dir.join(p.string("path")?);
            let config = CsvStreamConfig {
                n_target_columns: p.usize_or("n_targets", 1)?,
                header_present: p.bool_or("header", true)?,
                target_cardinality: p.usize_list("target_cardinality")?,
                path,
            };
            Box::new(CsvStream::open(config).map_err(lib(&ctx))?)
        }
        other => {
            return Err(ConfigError(format!(
                "{ctx}.type: unknown generator \"{other}\""
            )))
        }
    };
    p.finish()?;
    Ok(stream)
}

/// A learner description `{type, params}` checked once and buildable many times.
#[derive(Debug, Clone)]
struct ModelEntry {
    kind: String,
    params: Map<String, Value>,
    context: String,
}

impl ModelEntry {
    fn parse(context: String, value: &Value) -> Built<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| ConfigError(format!("{context}: expected an object")))?;
        let mut kind = None;
        let mut params = Map::new();
        for (k, v) in obj {
            match k.as_str() {
                "type" => {
                    kind =
                        Some(v.as_str().ok_or_else(|| {
                            ConfigError(format!("{context}.type: expected a string"))
                        })?)
                }
                "params" => {
                    params = Params::from_value(format!("{context}.params"), Some(v))?.map;
                }
                "name" => {}
                other => return Err(ConfigError(format!("{context}.{other}: unknown key"))),
            }
        }
        let kind = kind.ok_or_else(|| ConfigError(format!("{context}.type: missing")))?;
        Ok(Self {
            kind: kind.to_string(),
            params,
            context,
        })
    }

    fn build(&self, seed: u64) -> Built<Box<dyn Classifier>> {
        build_model(
            &self.kind,
            Params::new(format!("{}.params", self.context), self.params.clone()),
            seed,
        )
    }
}

fn base_factory(p: &mut Params, seed: u64) -> Built<ModelFactory> {
    let ctx = p.key("base");
    let value = p
        .take("base")
        .unwrap_or_else(|| serde_json::json!({"type": "hoeffding_tree"}));
    let entry = ModelEntry::parse(ctx, &value)?;
    // validate once so the factory below cannot fail
    entry.build(seed)?;
    Ok(std::sync::Arc::new(move || {
        entry.build(seed)
            .expect("validated when the factory was made")
    }))
}

/// Builds a learner from its type name and parameters.
pub fn build_model(kind: &str, mut p: Params, seed: u64) -> Built<Box<dyn Classifier>> {
    let ctx = p.context.clone();
    let model: Box<dyn Classifier> = match kind {
        "majority_class" => Box::new(MajorityClass::new()),
        "no_change" => Box::new(NoChange::new()),
        "naive_bayes" => Box::new(NaiveBayes::new()),
        "knn" => Box::new(
            Knn::new(p.usize_or("k", 5)?, p.usize_or("max_window", 1000)?).map_err(lib(&ctx))?,
        ),
        "knn_adwin" => Box::new(
            KnnAdwin::new(
                p.usize_or("k", 5)?,
                p.usize_or("max_window", 1000)?,
                p.f64_or("delta", 0.002)?,
            )
            .map_err(lib(&ctx))?,
        ),
        "hoeffding_tree" => {
            let d = HoeffdingTreeConfig::default();
            Box::new(
                HoeffdingTree::new(HoeffdingTreeConfig {
                    grace_period: p.usize_or("grace_period", d.grace_period)?,
                    split_confidence: p.f64_or("split_confidence", d.split_confidence)?,
                    tie_threshold: p.f64_or("tie_threshold", d.tie_threshold)?,
                    nb_leaves: p.bool_or("nb_leaves", d.nb_leaves)?,
                    record_attempts: false,
                })
                .map_err(lib(&ctx))?,
            )
        }
        "oza_bagging" => {
            let factory = base_factory(&mut p, seed)?;
            let n = p.usize_or("n_estimators", 10)?;
            let lambda = p.f64_or("lambda", 1.0)?;
            let seed = p.u64_or("seed", seed)?;
            Box::new(
                OzaBagging::with_resampling(factory, n, Resampling::Poisson(lambda), seed)
                    .map_err(lib(&ctx))?,
            )
        }
        "leverage_bagging" => {
            let factory = base_factory(&mut p, seed)?;
            let n = p.usize_or("n_estimators", 10)?;
            let lambda = p.f64_or("lambda", 6.0)?;
            let delta = p.f64_or("delta", 0.002)?;
            let detect = p.bool_or("detect_drift", true)?;
            let seed = p.u64_or("seed", seed)?;
            Box::new(
                LeverageBagging::with_options(
                    factory,
                    n,
                    Resampling::Poisson(lambda),
                    delta,
                    detect,
                    seed,
                )
                .map_err(lib(&ctx))?,
            )
        }
        "multi_output" => Box::new(MultiOutputLearner::new(base_factory(&mut p, seed)?)),
        other => {
            return Err(ConfigError(format!(
                "{ctx}: unknown model type \"{other}\""
            )))
        }
    };
    p.finish()?;
    Ok(model)
}

/// Builds a learner from a `{type, params}` object.
pub fn build_model_value(context: &str, value: &Value, seed: u64) -> Built<Box<dyn Classifier>> {
    ModelEntry::parse(context.to_string(), value)?.build(seed)
}

/// Builds a drift detector from its name and parameters.
pub fn build_detector(kind: &str, mut p: Params) -> Built<Box<dyn DriftDetector>> {
    let ctx = p.context.clone();
    let detector: Box<dyn DriftDetector> = match kind {
        "adwin" => Box::new(Adwin::new(p.f64_or("delta", 0.002)?).map_err(lib(&ctx))?),
        "ddm" => Box::new(Ddm::new(p.usize_or("min_num_instances", 30)?).map_err(lib(&ctx))?),
        "eddm" => Box::new(
            Eddm::new(
                p.f64_or("alpha", 0.95)?,
                p.f64_or("beta", 0.9)?,
                p.usize_or("min_errors", 30)?,
            )
            .map_err(lib(&ctx))?,
        ),
        "page_hinkley" => Box::new(
            PageHinkley::new(
                p.f64_or("delta", 0.005)?,
                p.f64_or("lambda", 50.0)?,
                p.usize_or("min_instances", 30)?,
            )
            .map_err(lib(&ctx))?,
        ),
        other => return Err(ConfigError(format!("{ctx}: unknown detector \"{other}\""))),
    };
    p.finish()?;
    Ok(detector)
}
