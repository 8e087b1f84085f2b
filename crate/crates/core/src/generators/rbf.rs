use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::base::{Instance, Remaining, Stream, StreamSchema};
use crate::error::{Error, Result};
use crate::rng::{seeded, StreamRng};

#[derive(Debug, Clone, PartialEq)]
pub struct RbfConfig {
    pub n_centroids: usize,
    pub n_features: usize,
    pub n_classes: usize,
    /// Distance each centroid travels per emitted instance; 0 gives the static stream.
    pub drift_speed: f64,
    /// Seeds centroid geometry, classes, weights and drift directions.
    pub seed_model: u64,
    /// Seeds the instance draws.
    pub seed_sample: u64,
}

impl Default for RbfConfig {
    fn default() -> Self {
        Self {
            n_centroids: 50,
            n_features: 10,
            n_classes: 2,
            drift_speed: 0.0,
            seed_model: 1,
            seed_sample: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Centroid {
    pub center: Vec<f64>,
    pub class: usize,
    pub std_dev: f64,
    pub weight: f64,
}

#[derive(Debug, Clone)]
struct Model {
    centroids: Vec<Centroid>,
    directions: Vec<Vec<f64>>,
    cumulative: Vec<f64>,
}

/// Random radial-basis-function stream, optionally with moving centroids.
///
/// An instance is drawn by choosing a centroid in proportion to its weight,
/// picking a uniformly random direction and a Gaussian magnitude scaled by
/// the centroid's spread. With `drift_speed > 0` every centroid then moves
/// along its own fixed unit direction, reflecting off the faces of the unit
/// hypercube.
#[derive(Debug, Clone)]
pub struct RbfGenerator {
    schema: StreamSchema,
    drift_speed: f64,
    seed_sample: u64,
    initial: Model,
    model: Model,
    rng: StreamRng,
}

impl RbfGenerator {
    pub fn new(config: RbfConfig) -> Result<Self> {
        if config.n_centroids == 0 {
            return Err(Error::param("n_centroids", "must be at least 1"));
        }
        if config.n_features == 0 {
            return Err(Error::param("n_features", "must be at least 1"));
        }
        if config.n_classes < 2 {
            return Err(Error::param("n_classes", "must be at least 2"));
        }
        let mut rng = seeded(config.seed_model);
        let centroids = (0..config.n_centroids)
            .map(|_| {
                let center = (0..config.n_features)
                    .map(|_| rng.random::<f64>())
                    .collect();
                let class = rng.random_range(0..config.n_classes);
                let std_dev = rng.random::<f64>() * 0.1;
                // (0, 1]
                let weight = 1.0 - rng.random::<f64>();
                Centroid {
                    center,
                    class,
                    std_dev,
                    weight,
                }
            })
            .collect();
        Self::build(
            centroids,
            config.n_classes,
            config.drift_speed,
            &mut rng,
            config.seed_sample,
        )
    }

    /// Generator over explicit centroids. `seed_model` only draws the drift directions.
    pub fn from_centroids(
        centroids: Vec<Centroid>,
        n_classes: usize,
        drift_speed: f64,
        seed_model: u64,
        seed_sample: u64,
    ) -> Result<Self> {
        let Some(first) = centroids.first() else {
            return Err(Error::param(
                "centroids",
                "at least one centroid is required",
            ));
        };
        let d = first.center.len();
        for c in &centroids {
            if c.center.len() != d || d == 0 {
                return Err(Error::param(
                    "centroids",
                    "all centers need the same nonzero dimension",
                ));
            }
            if !(c.weight > 0.0) {
                return Err(Error::param("weight", "centroid weights must be positive"));
            }
            if !(c.std_dev >= 0.0) {
                return Err(Error::param("std_dev", "must be nonnegative"));
            }
            if c.class >= n_classes {
                return Err(Error::param("class", "centroid class exceeds n_classes"));
            }
        }
        Self::build(
            centroids,
            n_classes,
            drift_speed,
            &mut seeded(seed_model),
            seed_sample,
        )
    }

    fn build(
        centroids: Vec<Centroid>,
        n_classes: usize,
        drift_speed: f64,
        rng: &mut StreamRng,
        seed_sample: u64,
    ) -> Result<Self> {
        if !(drift_speed >= 0.0) || !drift_speed.is_finite() {
            return Err(Error::param("drift_speed", "must be a finite value >= 0"));
        }
        let d = centroids[0].center.len();
        let directions = centroids
            .iter()
            .map(|_| random_unit_vector(rng, d))
            .collect();
        let mut acc = 0.0;
        let cumulative = centroids
            .iter()
            .map(|c| {
                acc += c.weight;
                acc
            })
            .collect();
        let model = Model {
            centroids,
            directions,
            cumulative,
        };
        Ok(Self {
            schema: StreamSchema::new(d, vec![n_classes])?,
            drift_speed,
            seed_sample,
            initial: model.clone(),
            model,
            rng: seeded(seed_sample),
        })
    }

    pub fn centroids(&self) -> &[Centroid] {
        &self.model.centroids
    }

    fn choose_centroid(&mut self) -> usize {
        let total = *self.model.cumulative.last().expect("nonempty");
        let r = self.rng.random::<f64>() * total;
        self.model
            .cumulative
            .iter()
            .position(|&c| r < c)
            .unwrap_or(self.model.cumulative.len() - 1)
    }

    fn move_centroids(&mut self) {
        let speed = self.drift_speed;
        for (c, dir) in self
            .model
            .centroids
            .iter_mut()
            .zip(self.model.directions.iter_mut())
        {
            for (x, v) in c.center.iter_mut().zip(dir.iter_mut()) {
                *x += *v * speed;
                // reflect off the faces of [0, 1]
                while *x < 0.0 || *x > 1.0 {
                    if *x > 1.0 {
                        *x = 2.0 - *x;
                    } else {
                        *x = -*x;
                    }
                    *v = -*v;
                }
            }
        }
    }
}

fn random_unit_vector(rng: &mut StreamRng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

impl Stream for RbfGenerator {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        let i = self.choose_centroid();
        let d = self.schema.n_features;
        let direction = random_unit_vector(&mut self.rng, d);
        let z: f64 = StandardNormal.sample(&mut self.rng);
        let c = &self.model.centroids[i];
        let magnitude = z * c.std_dev;
        let features = c
            .center
            .iter()
            .zip(&direction)
            .map(|(x, u)| x + u * magnitude)
            .collect();
        let class = c.class;
        if self.drift_speed > 0.0 {
            self.move_centroids();
        }
        Ok(Some(Instance::single(features, class)))
    }

    fn remaining(&self) -> Remaining {
        Remaining::Unbounded
    }

    fn restart(&mut self) -> Result<()> {
        self.model = self.initial.clone();
        self.rng = seeded(self.seed_sample);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_centroid_emits_its_center() {
        let c = Centroid {
            center: vec![0.0, 0.0],
            class: 2,
            std_dev: 0.0,
            weight: 1.0,
        };
        let mut g = RbfGenerator::from_centroids(vec![c], 3, 0.0, 1, 1).unwrap();
        for inst in g.next_sample(100).unwrap() {
            assert_eq!(inst.features, vec![0.0, 0.0]);
            assert_eq!(inst.targets, vec![2]);
        }
    }

    #[test]
    fn static_variant_keeps_centroids() {
        let mut g = RbfGenerator::new(RbfConfig::default()).unwrap();
        let before = g.centroids().to_vec();
        g.next_sample(10_000).unwrap();
        assert_eq!(before, g.centroids());
        assert!(before.iter().all(|c| c.weight > 0.0));
    }

    #[test]
    fn drifting_centroids_stay_in_unit_cube() {
        let mut g = RbfGenerator::new(RbfConfig {
            drift_speed: 0.01,
            n_centroids: 5,
            ..Default::default()
        })
        .unwrap();
        let before = g.centroids().to_vec();
        g.next_sample(5_000).unwrap();
        assert_ne!(before, g.centroids());
        for c in g.centroids() {
            assert!(c.center.iter().all(|x| (0.0..=1.0).contains(x)));
        }
        g.restart().unwrap();
        assert_eq!(before, g.centroids());
    }

    #[test]
    fn seeds_are_independent() {
        let cfg = RbfConfig::default();
        let a = RbfGenerator::new(cfg.clone()).unwrap();
        let b = RbfGenerator::new(RbfConfig {
            seed_sample: 99,
            ..cfg
        })
        .unwrap();
        assert_eq!(a.centroids(), b.centroids());
    }
}
