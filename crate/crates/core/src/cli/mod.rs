//! Experiment runner behind the `streamlearn` binary.
//!
//! An experiment is a JSON file naming a stream, a list of models, an
//! evaluator and an output path. All seeds come from the master `seed`:
//! the stream gets `derive_seed(seed, 0)` and model `i` (in config order)
//! gets `derive_seed(seed, i + 1)`, where `derive_seed` is SplitMix64 over
//! `seed + index·0x9E3779B97F4A7C15`. Seeds given explicitly in a
//! component's `params` take precedence.

pub mod registry;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::evaluation::{
    holdout_run, prequential_run, EvalConfig, EvaluationRecord, HoldoutConfig, MetricSet,
    NamedModel,
};
use crate::rng::derive_seed;
pub use registry::{ConfigError, Params};

/// Failure of a CLI command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSection {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluatorSection {
    #[serde(rename = "type")]
    pub kind: String,
    pub max_samples: Option<usize>,
    pub batch_size: Option<usize>,
    pub sample_frequency: Option<usize>,
    pub pretrain_size: Option<usize>,
    pub window_size: Option<usize>,
    pub test_size: Option<usize>,
    pub test_interval: Option<usize>,
}

impl EvaluatorSection {
    pub fn eval_config(&self) -> EvalConfig {
        let d = EvalConfig::default();
        EvalConfig {
            max_samples: self.max_samples.unwrap_or(d.max_samples),
            batch_size: self.batch_size.unwrap_or(d.batch_size),
            sample_frequency: self.sample_frequency.unwrap_or(d.sample_frequency),
            pretrain_size: self.pretrain_size.unwrap_or(d.pretrain_size),
            window_size: self.window_size.unwrap_or(d.window_size),
            holdout: HoldoutConfig {
                test_size: self.test_size.unwrap_or(d.holdout.test_size),
                test_interval: self.test_interval.unwrap_or(d.holdout.test_interval),
            },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub stream: ComponentSection,
    pub models: Vec<ModelSection>,
    pub evaluator: EvaluatorSection,
    /// Trace CSV path; relative paths resolve against the config's directory.
    pub output: PathBuf,
}

fn default_seed() -> u64 {
    1
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output: PathBuf,
    pub records: Vec<EvaluationRecord>,
    pub model_names: Vec<String>,
}

impl RunSummary {
    /// One line describing the final record.
    pub fn line(&self) -> String {
        let Some(last) = self.records.last() else {
            return format!("no records written to {}", self.output.display());
        };
        let mut parts = vec![format!("samples_seen={}", last.samples_seen)];
        for (name, metrics) in self.model_names.iter().zip(&last.metrics) {
            for (metric, v) in metrics.iter().filter(|(m, _)| !m.starts_with("window_")) {
                parts.push(format!("{name}.{metric}={v:.4}"));
            }
        }
        if last.truncated {
            parts.push("truncated=true".into());
        }
        parts.push(format!("output={}", self.output.display()));
        parts.join(" ")
    }
}

/// Loads and runs an experiment file, writing its metric trace.
pub fn run_file(config_path: &Path, no_timing: bool) -> Result<RunSummary, CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("{}: {e}", config_path.display())))?;
    let config = ExperimentConfig::from_json(&text)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    run_experiment(&config, base, no_timing)
}

/// Runs a parsed experiment. Relative paths resolve against `base_dir`.
pub fn run_experiment(
    config: &ExperimentConfig,
    base_dir: &Path,
    no_timing: bool,
) -> Result<RunSummary, CliError> {
    if !registry::EVALUATORS.contains(&config.evaluator.kind.as_str()) {
        return Err(CliError::Config(format!(
            "evaluator.type: unknown evaluator \"{}\"",
            config.evaluator.kind
        )));
    }
    if config.models.is_empty() {
        return Err(CliError::Config(
            "models: at least one model is required".into(),
        ));
    }
    let mut stream = registry::build_stream(
        &config.stream.kind,
        Params::new("stream.params", config.stream.params.clone()),
        derive_seed(config.seed, 0),
        base_dir,
    )?;
    let mut models = Vec::with_capacity(config.models.len());
    for (i, m) in config.models.iter().enumerate() {
        if m.name.is_empty() || models.iter().any(|x: &NamedModel| x.name == m.name) {
            return Err(CliError::Config(format!(
                "models[{i}].name: must be nonempty and unique, got \"{}\"",
                m.name
            )));
        }
        let model = registry::build_model(
            &m.kind,
            Params::new(format!("models[{i}].params"), m.params.clone()),
            derive_seed(config.seed, i as u64 + 1),
        )
        .map_err(|e| {
            if e.0.contains("unknown model type") {
                ConfigError(format!(
                    "models[{i}].type: unknown model type \"{}\"",
                    m.kind
                ))
            } else {
                e
            }
        })?;
        models.push(NamedModel::new(m.name.clone(), model));
    }
    let eval = config.evaluator.eval_config();
    eval.validate()
        .map_err(|e| CliError::Config(format!("evaluator: {e}")))?;

    let prequential = config.evaluator.kind == "prequential";
    let metric_names = MetricSet::new(&stream.schema().target_cardinality).names(prequential);
    let result = if prequential {
        prequential_run(stream.as_mut(), &mut models, &eval)
    } else {
        holdout_run(stream.as_mut(), &mut models, &eval)
    };
    let records = result.map_err(|e| match e.source {
        crate::Error::Config(msg) => CliError::Config(format!("evaluator.pretrain_size: {msg}")),
        _ => CliError::Runtime(e.to_string()),
    })?;

    let output = base_dir.join(&config.output);
    let names: Vec<String> = models.into_iter().map(|m| m.name).collect();
    write_trace(&output, &names, &metric_names, &records, no_timing)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", output.display())))?;
    Ok(RunSummary {
        output,
        records,
        model_names: names,
    })
}

/// Writes the metric trace: `samples_seen`, `wall_time_s`, then
/// `<model>.<metric>` for every model in order. With `no_timing` the time
/// column holds 0 so runs compare byte for byte.
pub fn write_trace(
    path: &Path,
    model_names: &[String],
    metric_names: &[&str],
    records: &[EvaluationRecord],
    no_timing: bool,
) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    let mut header = vec!["samples_seen".to_string(), "wall_time_s".to_string()];
    for m in model_names {
        header.extend(metric_names.iter().map(|k| format!("{m}.{k}")));
    }
    writeln!(out, "{}", header.join(","))?;
    for r in records {
        let mut row = vec![
            r.samples_seen.to_string(),
            if no_timing {
                "0".into()
            } else {
                r.wall_time_s.to_string()
            },
        ];
        for metrics in &r.metrics {
            row.extend(metrics.iter().map(|(_, v)| v.to_string()));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()
}

/// Writes `n` instances of a named generator as CSV. `params` are `k=v`
/// pairs whose values are read as JSON, falling back to plain strings.
pub fn generate(
    name: &str,
    n: usize,
    seed: u64,
    params: &[String],
    out: &Path,
) -> Result<usize, CliError> {
    let mut map = Map::new();
    for kv in params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--param {kv}: expected key=value")))?;
        let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        map.insert(k.to_string(), value);
    }
    let cwd = Path::new(".");
    let mut stream =
        registry::build_stream(name, Params::new("param", map), seed, cwd).map_err(|e| {
            if e.0.contains("unknown generator") {
                CliError::Config(format!("unknown generator \"{name}\""))
            } else {
                e.into()
            }
        })?;
    let file =
        fs::File::create(out).map_err(|e| CliError::Runtime(format!("{}: {e}", out.display())))?;
    crate::generators::write_csv(stream.as_mut(), n, std::io::BufWriter::new(file))
        .map_err(|e| CliError::Runtime(e.to_string()))
}

/// Every registered component as `<kind> <name>`, in a fixed order.
pub fn list() -> Vec<String> {
    let groups = [
        ("generator", registry::GENERATORS),
        ("learner", registry::LEARNERS),
        ("detector", registry::DETECTORS),
        ("evaluator", registry::EVALUATORS),
    ];
    groups
        .iter()
        .flat_map(|(kind, names)| names.iter().map(move |n| format!("{kind} {n}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_top_level_key() {
        let err = ExperimentConfig::from_json(
            r#"{"stream":{"type":"sea"},"models":[],"evaluator":{"type":"prequential"},"output":"o.csv","extra":1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("extra"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn list_is_grouped_and_stable() {
        let l = list();
        assert_eq!(l[0], "generator sea");
        assert_eq!(l.last().unwrap(), "evaluator holdout");
        assert_eq!(l, list());
    }
}
