use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::base::{Instance, Remaining, Stream, StreamSchema};
use crate::error::{Error, Result};
use crate::rng::{seeded, StreamRng};

#[derive(Debug, Clone, PartialEq)]
pub struct MultiLabelConfig {
    pub n_features: usize,
    pub n_labels: usize,
    /// Share of each label's hyperplane taken from the common direction, in [0, 1].
    pub label_dependence: f64,
    pub seed: u64,
}

impl Default for MultiLabelConfig {
    fn default() -> Self {
        Self {
            n_features: 20,
            n_labels: 5,
            label_dependence: 0.5,
            seed: 1,
        }
    }
}

/// Multi-label stream built from per-label hyperplanes through the origin.
///
/// Features are uniform on `[-1, 1]^d`; label `l` is on iff `w_l · x > 0`
/// with `w_l = dep·w_shared + (1 − dep)·w_l_private`. The shared and
/// private directions are drawn once and orthonormalized, so with
/// `dep = 0` the labels are close to uncorrelated and with `dep = 1` they
/// coincide.
#[derive(Debug, Clone)]
pub struct MultiLabelGenerator {
    config: MultiLabelConfig,
    schema: StreamSchema,
    hyperplanes: Vec<Vec<f64>>,
    rng: StreamRng,
}

impl MultiLabelGenerator {
    pub fn new(config: MultiLabelConfig) -> Result<Self> {
        if config.n_labels < 2 {
            return Err(Error::param("n_labels", "must be at least 2"));
        }
        if config.n_features < config.n_labels + 1 {
            return Err(Error::param(
                "n_features",
                "must exceed n_labels so that label directions can be orthogonal",
            ));
        }
        if !(0.0..=1.0).contains(&config.label_dependence) {
            return Err(Error::param("label_dependence", "must be in [0, 1]"));
        }
        let mut rng = seeded(crate::rng::derive_seed(config.seed, 0));
        let basis = orthonormal_directions(&mut rng, config.n_labels + 1, config.n_features);
        let dep = config.label_dependence;
        let hyperplanes = basis[1..]
            .iter()
            .map(|private| {
                basis[0]
                    .iter()
                    .zip(private)
                    .map(|(s, p)| dep * s + (1.0 - dep) * p)
                    .collect()
            })
            .collect();
        Ok(Self {
            schema: StreamSchema::multi_label(config.n_features, config.n_labels)?,
            hyperplanes,
            rng: seeded(crate::rng::derive_seed(config.seed, 1)),
            config,
        })
    }

    pub fn hyperplanes(&self) -> &[Vec<f64>] {
        &self.hyperplanes
    }
}

/// `count` orthonormal vectors in `d` dimensions (Gram–Schmidt on Gaussian draws).
fn orthonormal_directions(rng: &mut StreamRng, count: usize, d: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

impl Stream for MultiLabelGenerator {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        let features: Vec<f64> = (0..self.config.n_features)
            .map(|_| self.rng.random_range(-1.0..=1.0))
            .collect();
        let targets = self
            .hyperplanes
            .iter()
            .map(|w| {
                let s: f64 = w.iter().zip(&features).map(|(a, b)| a * b).sum();
                usize::from(s > 0.0)
            })
            .collect();
        Ok(Some(Instance::new(features, targets)))
    }

    fn remaining(&self) -> Remaining {
        Remaining::Unbounded
    }

    fn restart(&mut self) -> Result<()> {
        self.rng = seeded(crate::rng::derive_seed(self.config.seed, 1));
        Ok(())
    }
}
