use std::time::Instant;

use super::{
    declare, fail, pretrain, EvalConfig, EvaluationRecord, MetricSet, NamedModel, RunError,
};
use crate::base::Stream;

/// Interleaved test-then-train evaluation.
///
/// After the optional pretraining phase, each batch is first predicted by
/// every model (updating its metrics) and then used to train it. A record is
/// emitted whenever `samples_seen` reaches `pretrain_size + k·sample_frequency`,
/// plus a final one when the run ends between two such points.
pub fn prequential_run(
    stream: &mut dyn Stream,
    models: &mut [NamedModel],
    config: &EvalConfig,
) -> Result<Vec<EvaluationRecord>, RunError> {
    config.validate().map_err(fail(0))?;
    let start = Instant::now();
    let classes = declare(stream, models)?;
    let mut seen = pretrain(stream, models, &classes, config)?;
    let mut metrics: Vec<MetricSet> = models
        .iter()
        .map(|_| MetricSet::with_window(&classes, config.window_size))
        .collect();

    let snapshot = |seen: usize, metrics: &[MetricSet]| EvaluationRecord {
        samples_seen: seen,
        wall_time_s: start.elapsed().as_secs_f64(),
        metrics: metrics.iter().map(|m| m.snapshot(true)).collect(),
        truncated: false,
    };

    let mut records = Vec::new();
    let mut next_record = seen + config.sample_frequency;
    while seen < config.max_samples {
        let n = config
            .batch_size
            .min(config.max_samples - seen)
            .min(next_record - seen);
        let batch = stream.next_sample(n).map_err(fail(seen))?;
        if batch.is_empty() {
            break;
        }
        for (m, ms) in models.iter_mut().zip(metrics.iter_mut()) {
            for inst in &batch {
                let predicted = m.model.predict(&inst.features).map_err(fail(seen))?;
                ms.update(&inst.targets, &predicted).map_err(fail(seen))?;
            }
            m.model
                .partial_fit(&batch, Some(&classes))
                .map_err(fail(seen))?;
        }
        seen += batch.len();
        if seen == next_record {
            records.push(snapshot(seen, &metrics));
            next_record += config.sample_frequency;
        }
    }
    if records.last().is_none_or(|r| r.samples_seen < seen) {
        records.push(snapshot(seen, &metrics));
    }
    Ok(records)
}
