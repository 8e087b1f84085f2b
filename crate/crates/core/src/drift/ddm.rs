use crate::base::{DetectionStatus, DriftDetector};
use crate::error::{Error, Result};

/// Drift detection method on the running error rate.
///
/// Tracks `p_i` (error rate after `i` samples) and
/// `s_i = sqrt(p_i (1 − p_i) / i)`, remembers the pair minimising `p + s`
/// and signals a warning at `p_min + 2 s_min`, a drift at `p_min + 3 s_min`.
/// The minimum is only recorded once an error has been observed.
#[derive(Debug, Clone)]
pub struct Ddm {
    min_num_instances: usize,
    n: usize,
    p: f64,
    s: f64,
    p_min: f64,
    s_min: f64,
    seen_error: bool,
}

impl Default for Ddm {
    fn default() -> Self {
        Self::new(30).expect("default is valid")
    }
}

impl Ddm {
    pub fn new(min_num_instances: usize) -> Result<Self> {
        if min_num_instances == 0 {
            return Err(Error::param("min_num_instances", "must be at least 1"));
        }
        Ok(Self {
            min_num_instances,
            n: 0,
            p: 0.0,
            s: 0.0,
            p_min: f64::INFINITY,
            s_min: f64::INFINITY,
            seen_error: false,
        })
    }

    pub fn min_num_instances(&self) -> usize {
        self.min_num_instances
    }

    pub fn samples_seen(&self) -> usize {
        self.n
    }

    pub fn error_rate(&self) -> f64 {
        self.p
    }

    pub fn std(&self) -> f64 {
        self.s
    }

    /// `(p_min, s_min)`; infinite until recorded.
    pub fn minimum(&self) -> (f64, f64) {
        (self.p_min, self.s_min)
    }
}

impl DriftDetector for Ddm {
    fn update(&mut self, value: f64) -> Result<DetectionStatus> {
        let error = super::binary_input("DDM input", value)?;
        self.n += 1;
        self.p += (value - self.p) / self.n as f64;
        self.s = (self.p * (1.0 - self.p) / self.n as f64).sqrt();
        self.seen_error |= error;

        if self.n < self.min_num_instances {
            return Ok(DetectionStatus::Normal);
        }
        if self.seen_error && self.p + self.s < self.p_min + self.s_min {
            self.p_min = self.p;
            self.s_min = self.s;
        }
        if !self.p_min.is_finite() {
            return Ok(DetectionStatus::Normal);
        }
        let level = self.p + self.s;
        if level >= self.p_min + 3.0 * self.s_min {
            self.reset();
            Ok(DetectionStatus::Drift)
        } else if level >= self.p_min + 2.0 * self.s_min {
            Ok(DetectionStatus::Warning)
        } else {
            Ok(DetectionStatus::Normal)
        }
    }

    fn reset(&mut self) {
        *self = Self::new(self.min_num_instances).expect("parameters were validated");
    }

    fn estimation(&self) -> f64 {
        self.p
    }
}
