use super::ModelFactory;
use crate::base::{ClassDistribution, Classifier, Instance, Layout};
use crate::error::Result;

/// Binary relevance: one independent base model per target.
pub struct MultiOutputLearner {
    factory: ModelFactory,
    layout: Layout,
    models: Vec<Box<dyn Classifier>>,
}

impl MultiOutputLearner {
    pub fn new(factory: ModelFactory) -> Self {
        Self {
            factory,
            layout: Layout::new(),
            models: Vec::new(),
        }
    }

    pub fn model(&self, target: usize) -> &dyn Classifier {
        self.models[target].as_ref()
    }

    pub fn n_models(&self) -> usize {
        self.models.len()
    }
}

impl Classifier for MultiOutputLearner {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        if self.layout.admit(batch, classes)? {
            let k = self.layout.cardinality().expect("declared").to_vec();
            self.models = k
                .iter()
                .map(|&kj| {
                    let mut m = (self.factory)();
                    m.partial_fit(&[], Some(&[kj])).map(|()| m)
                })
                .collect::<Result<_>>()?;
        }
        let Some(k) = self.layout.cardinality().map(<[usize]>::to_vec) else {
            return Ok(());
        };
        for (j, model) in self.models.iter_mut().enumerate() {
            let projected: Vec<Instance> =
                batch.iter().map(|inst| inst.project_target(j)).collect();
            model.partial_fit(&projected, Some(&k[j..=j]))?;
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.layout.check_features(x)?;
        if self.models.is_empty() {
            return Ok(self.layout.uniform());
        }
        let mut out = Vec::with_capacity(self.models.len());
        for m in &self.models {
            out.extend(m.predict_proba(x)?);
        }
        Ok(out)
    }

    fn reset(&mut self) {
        self.layout.clear();
        self.models.clear();
    }
}
