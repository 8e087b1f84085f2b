use rand::Rng;

use crate::base::{Instance, Remaining, Stream, StreamSchema};
use crate::error::{Error, Result};
use crate::rng::{seeded, StreamRng};

/// Decision thresholds of the four SEA concepts.
pub const SEA_THRESHOLDS: [f64; 4] = [8.0, 9.0, 7.0, 9.5];

#[derive(Debug, Clone, PartialEq)]
pub struct SeaConfig {
    pub variant: usize,
    pub noise_fraction: f64,
    pub seed: u64,
}

impl Default for SeaConfig {
    fn default() -> Self {
        Self {
            variant: 0,
            noise_fraction: 0.0,
            seed: 1,
        }
    }
}

/// SEA concepts: three features uniform on [0, 10], label 1 iff `a1 + a2 <= θ`.
#[derive(Debug, Clone)]
pub struct SeaGenerator {
    config: SeaConfig,
    schema: StreamSchema,
    rng: StreamRng,
    last_clean: Option<usize>,
}

impl SeaGenerator {
    pub fn new(config: SeaConfig) -> Result<Self> {
        if config.variant >= SEA_THRESHOLDS.len() {
            return Err(Error::param(
                "variant",
                format!("must be in 0..=3, got {}", config.variant),
            ));
        }
        if !(0.0..1.0).contains(&config.noise_fraction) {
            return Err(Error::param(
                "noise_fraction",
                format!("must be in [0, 1), got {}", config.noise_fraction),
            ));
        }
        let schema = StreamSchema::new(3, vec![2])?;
        Ok(Self {
            rng: seeded(config.seed),
            config,
            schema,
            last_clean: None,
        })
    }

    pub fn threshold(&self) -> f64 {
        SEA_THRESHOLDS[self.config.variant]
    }

    /// Noise-free label of `features` under `variant`.
    pub fn concept(variant: usize, features: &[f64]) -> usize {
        usize::from(features[0] + features[1] <= SEA_THRESHOLDS[variant])
    }

    /// Label of the last emitted instance before noise was applied.
    pub fn last_clean_label(&self) -> Option<usize> {
        self.last_clean
    }

    pub fn config(&self) -> &SeaConfig {
        &self.config
    }
}

impl Stream for SeaGenerator {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        let features: Vec<f64> = (0..3).map(|_| self.rng.random::<f64>() * 10.0).collect();
        let clean = Self::concept(self.config.variant, &features);
        let flip = self.rng.random::<f64>() < self.config.noise_fraction;
        self.last_clean = Some(clean);
        Ok(Some(Instance::single(
            features,
            if flip { 1 - clean } else { clean },
        )))
    }

    fn remaining(&self) -> Remaining {
        Remaining::Unbounded
    }

    fn restart(&mut self) -> Result<()> {
        self.rng = seeded(self.config.seed);
        self.last_clean = None;
        Ok(())
    }
}
