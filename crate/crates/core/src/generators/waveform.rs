use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::base::{Instance, Remaining, Stream, StreamSchema};
use crate::error::{Error, Result};
use crate::rng::{seeded, StreamRng};

pub const N_ATTRIBUTES: usize = 21;

/// The three triangular base waves of the waveform task (Breiman, Friedman,
/// Olshen & Stone, "Classification and Regression Trees", 1984, sec. 2.6.2):
/// `h1(i) = max(6 - |i - 11|, 0)`, `h2(i) = h1(i - 4)`, `h3(i) = h1(i + 4)`
/// for attributes `i = 1..=21`.
pub const BASE_WAVES: [[f64; N_ATTRIBUTES]; 3] = [
    [
        0., 0., 0., 0., 0., 1., 2., 3., 4., 5., 6., 5., 4., 3., 2., 1., 0., 0., 0., 0., 0.,
    ],
    [
        0., 0., 0., 0., 0., 0., 0., 0., 0., 1., 2., 3., 4., 5., 6., 5., 4., 3., 2., 1., 0.,
    ],
    [
        0., 1., 2., 3., 4., 5., 6., 5., 4., 3., 2., 1., 0., 0., 0., 0., 0., 0., 0., 0., 0.,
    ],
];

/// Base-wave pair `(a, b)` combined for each class.
pub const CLASS_WAVES: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Debug, Clone, PartialEq)]
pub struct WaveformConfig {
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for WaveformConfig {
    fn default() -> Self {
        Self {
            noise_sigma: 1.0,
            seed: 1,
        }
    }
}

/// 21 attributes, 3 classes; each instance is `u·h_a + (1−u)·h_b` plus Gaussian noise.
#[derive(Debug, Clone)]
pub struct WaveformGenerator {
    config: WaveformConfig,
    schema: StreamSchema,
    noise: Option<Normal<f64>>,
    rng: StreamRng,
    forced_mix: Option<f64>,
}

impl WaveformGenerator {
    pub fn new(config: WaveformConfig) -> Result<Self> {
        if !(config.noise_sigma >= 0.0) || !config.noise_sigma.is_finite() {
            return Err(Error::param("noise_sigma", "must be a finite value >= 0"));
        }
        let noise = (config.noise_sigma > 0.0)
            .then(|| Normal::new(0.0, config.noise_sigma).expect("validated sigma"));
        Ok(Self {
            schema: StreamSchema::new(N_ATTRIBUTES, vec![3])?,
            rng: seeded(config.seed),
            noise,
            config,
            forced_mix: None,
        })
    }

    /// Pins the mixing coefficient `u` (testing hook); `None` restores sampling.
    pub fn force_mix(&mut self, u: Option<f64>) {
        self.forced_mix = u;
    }
}

impl Stream for WaveformGenerator {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        let class = self.rng.random_range(0..3);
        let u: f64 = self.rng.random();
        let u = self.forced_mix.unwrap_or(u);
        let (a, b) = CLASS_WAVES[class];
        let mut features = Vec::with_capacity(N_ATTRIBUTES);
        for (ha, hb) in BASE_WAVES[a].iter().zip(&BASE_WAVES[b]) {
            let mut v = u * ha + (1.0 - u) * hb;
            if let Some(noise) = &self.noise {
                v += noise.sample(&mut self.rng);
            }
            features.push(v);
        }
        Ok(Some(Instance::single(features, class)))
    }

    fn remaining(&self) -> Remaining {
        Remaining::Unbounded
    }

    fn restart(&mut self) -> Result<()> {
        self.rng = seeded(self.config.seed);
        Ok(())
    }
}
