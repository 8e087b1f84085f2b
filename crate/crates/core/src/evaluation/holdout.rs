use std::time::Instant;

use super::{
    declare, fail, pretrain, EvalConfig, EvaluationRecord, MetricSet, NamedModel, RunError,
};
use crate::base::Stream;

/// Periodic holdout evaluation with a freshly drawn test set.
///
/// Models train on `test_interval` instances, then a new batch of
/// `test_size` instances is drawn and scored without training on it. Each
/// record's metrics describe that test batch alone and its `samples_seen`
/// counts training instances. If the stream runs dry while a test batch is
/// being drawn, the final record is flagged `truncated`.
pub fn holdout_run(
    stream: &mut dyn Stream,
    models: &mut [NamedModel],
    config: &EvalConfig,
) -> Result<Vec<EvaluationRecord>, RunError> {
    config.validate().map_err(fail(0))?;
    let start = Instant::now();
    let classes = declare(stream, models)?;
    let mut trained = pretrain(stream, models, &classes, config)?;
    let interval = config.holdout.test_interval;
    let mut records = Vec::new();

    loop {
        let next_test = (trained + interval).min(config.max_samples);
        let mut exhausted = false;
        while trained < next_test {
            let n = config.batch_size.min(next_test - trained);
            let batch = stream.next_sample(n).map_err(fail(trained))?;
            if batch.is_empty() {
                exhausted = true;
                break;
            }
            for m in models.iter_mut() {
                m.model
                    .partial_fit(&batch, Some(&classes))
                    .map_err(fail(trained))?;
            }
            trained += batch.len();
        }
        if exhausted
            && records
                .last()
                .is_some_and(|r: &EvaluationRecord| r.samples_seen == trained)
        {
            break;
        }

        let test = stream
            .next_sample(config.holdout.test_size)
            .map_err(fail(trained))?;
        let mut metrics: Vec<MetricSet> = models
            .iter()
            .map(|_| MetricSet::with_window(&classes, config.window_size))
            .collect();
        for (m, ms) in models.iter().zip(metrics.iter_mut()) {
            for inst in &test {
                let predicted = m.model.predict(&inst.features).map_err(fail(trained))?;
                ms.update(&inst.targets, &predicted)
                    .map_err(fail(trained))?;
            }
        }
        let truncated = test.len() < config.holdout.test_size;
        records.push(EvaluationRecord {
            samples_seen: trained,
            wall_time_s: start.elapsed().as_secs_f64(),
            metrics: metrics.iter().map(|m| m.snapshot(false)).collect(),
            truncated,
        });
        if truncated || exhausted || trained >= config.max_samples {
            break;
        }
    }
    Ok(records)
}
