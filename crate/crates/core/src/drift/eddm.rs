use crate::base::{DetectionStatus, DriftDetector};
use crate::error::{Error, Result};

/// Early drift detection method: watches the distance between consecutive errors.
///
/// Distances are counted in elements since the previous error; the first
/// error only starts the clock. With `p'` and `s'` the running mean and
/// standard deviation of the distances, the detector compares
/// `(p' + 2s') / (p'_max + 2s'_max)` against `alpha` (warning) and `beta`
/// (drift) once `min_errors` errors have been seen.
#[derive(Debug, Clone)]
pub struct Eddm {
    alpha: f64,
    beta: f64,
    min_errors: usize,
    n: usize,
    last_error: Option<usize>,
    n_errors: usize,
    n_distances: usize,
    mean: f64,
    m2: f64,
    max_level: f64,
    max_mean: f64,
    max_std: f64,
}

impl Default for Eddm {
    fn default() -> Self {
        Self::new(0.95, 0.9, 30).expect("defaults are valid")
    }
}

impl Eddm {
    pub fn new(alpha: f64, beta: f64, min_errors: usize) -> Result<Self> {
        if !(beta > 0.0 && beta <= alpha && alpha <= 1.0) {
            return Err(Error::param("alpha/beta", "need 0 < beta <= alpha <= 1"));
        }
        Ok(Self {
            alpha,
            beta,
            min_errors,
            n: 0,
            last_error: None,
            n_errors: 0,
            n_distances: 0,
            mean: 0.0,
            m2: 0.0,
            max_level: 0.0,
            max_mean: 0.0,
            max_std: 0.0,
        })
    }

    pub fn n_errors(&self) -> usize {
        self.n_errors
    }

    pub fn mean_distance(&self) -> f64 {
        self.mean
    }

    pub fn std_distance(&self) -> f64 {
        if self.n_distances == 0 {
            0.0
        } else {
            (self.m2 / self.n_distances as f64).sqrt()
        }
    }

    /// `(p'_max, s'_max)`.
    pub fn maximum(&self) -> (f64, f64) {
        (self.max_mean, self.max_std)
    }
}

impl DriftDetector for Eddm {
    fn update(&mut self, value: f64) -> Result<DetectionStatus> {
        let error = super::binary_input("EDDM input", value)?;
        self.n += 1;
        if !error {
            return Ok(DetectionStatus::Normal);
        }
        self.n_errors += 1;
        let Some(last) = self.last_error.replace(self.n) else {
            return Ok(DetectionStatus::Normal);
        };
        let distance = (self.n - last) as f64;
        self.n_distances += 1;
        let delta = distance - self.mean;
        self.mean += delta / self.n_distances as f64;
        self.m2 += delta * (distance - self.mean);
        let std = self.std_distance();
        let level = self.mean + 2.0 * std;
        if level > self.max_level {
            self.max_level = level;
            self.max_mean = self.mean;
            self.max_std = std;
        }
        if self.n_errors < self.min_errors {
            return Ok(DetectionStatus::Normal);
        }
        let ratio = level / self.max_level;
        if ratio < self.beta {
            self.reset();
            Ok(DetectionStatus::Drift)
        } else if ratio < self.alpha {
            Ok(DetectionStatus::Warning)
        } else {
            Ok(DetectionStatus::Normal)
        }
    }

    fn reset(&mut self) {
        *self = Self::new(self.alpha, self.beta, self.min_errors).expect("validated");
    }

    fn estimation(&self) -> f64 {
        self.mean
    }
}
