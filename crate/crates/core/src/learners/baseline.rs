use crate::base::{ClassDistribution, Classifier, Instance, Layout};
use crate::error::Result;

/// Predicts the class frequencies seen so far, per target.
#[derive(Debug, Clone, Default)]
pub struct MajorityClass {
    layout: Layout,
    counts: Vec<Vec<f64>>,
}

impl MajorityClass {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn class_counts(&self, target: usize) -> &[f64] {
        &self.counts[target]
    }
}

impl Classifier for MajorityClass {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        if self.layout.admit(batch, classes)? {
            let k = self.layout.cardinality().expect("declared");
            self.counts = k.iter().map(|&k| vec![0.0; k]).collect();
        }
        for inst in batch {
            for (counts, &y) in self.counts.iter_mut().zip(&inst.targets) {
                counts[y] += inst.weight;
            }
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.layout.check_features(x)?;
        if self.counts.is_empty() {
            return Ok(self.layout.uniform());
        }
        Ok(self
            .counts
            .iter()
            .map(|c| ClassDistribution::from_scores(c.clone()))
            .collect())
    }

    fn reset(&mut self) {
        *self = Self::default();
    }
}

/// Predicts the targets of the most recent training instance.
#[derive(Debug, Clone, Default)]
pub struct NoChange {
    layout: Layout,
    last: Option<Vec<usize>>,
}

impl NoChange {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Classifier for NoChange {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        self.layout.admit(batch, classes)?;
        if let Some(inst) = batch.last() {
            self.last = Some(inst.targets.clone());
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.layout.check_features(x)?;
        match (&self.last, self.layout.cardinality()) {
            (Some(last), Some(k)) => Ok(last
                .iter()
                .zip(k)
                .map(|(&y, &k)| ClassDistribution::one_hot(k, y))
                .collect()),
            _ => Ok(self.layout.uniform()),
        }
    }

    fn reset(&mut self) {
        *self = Self::default();
    }
}
