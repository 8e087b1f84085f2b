use crate::base::{DetectionStatus, DriftDetector};
use crate::error::{Error, Result};

/// Page-Hinkley test for an increase of the mean.
///
/// `m_T = Σ (x_t − x̄_t − δ)` with `x̄_t` the running mean including `x_t`,
/// `M_T = min m_t`; drift iff `m_T − M_T > λ` after `min_instances` values.
#[derive(Debug, Clone)]
pub struct PageHinkley {
    delta: f64,
    lambda: f64,
    min_instances: usize,
    n: usize,
    mean: f64,
    cumulative: f64,
    minimum: f64,
}

impl Default for PageHinkley {
    fn default() -> Self {
        Self::new(0.005, 50.0, 30).expect("defaults are valid")
    }
}

impl PageHinkley {
    pub fn new(delta: f64, lambda: f64, min_instances: usize) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::param("delta", "must be a finite value >= 0"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::param("lambda", "must be a finite value > 0"));
        }
        Ok(Self {
            delta,
            lambda,
            min_instances,
            n: 0,
            mean: 0.0,
            cumulative: 0.0,
            minimum: f64::INFINITY,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `(m_T, M_T)`.
    pub fn statistic(&self) -> (f64, f64) {
        (self.cumulative, self.minimum)
    }

    pub fn samples_seen(&self) -> usize {
        self.n
    }
}

impl DriftDetector for PageHinkley {
    fn update(&mut self, value: f64) -> Result<DetectionStatus> {
        if !value.is_finite() {
            return Err(Error::Domain {
                what: "Page-Hinkley input",
                value,
            });
        }
        self.n += 1;
        self.mean += (value - self.mean) / self.n as f64;
        self.cumulative += value - self.mean - self.delta;
        self.minimum = self.minimum.min(self.cumulative);
        if self.n >= self.min_instances && self.cumulative - self.minimum > self.lambda {
            self.reset();
            return Ok(DetectionStatus::Drift);
        }
        Ok(DetectionStatus::Normal)
    }

    fn reset(&mut self) {
        *self = Self::new(self.delta, self.lambda, self.min_instances).expect("validated");
    }

    fn estimation(&self) -> f64 {
        self.mean
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_input_never_alarms() {
        let mut ph = PageHinkley::default();
        let mut last = f64::INFINITY;
        for _ in 0..10_000 {
            assert_eq!(ph.update(0.2).unwrap(), DetectionStatus::Normal);
            let (m, min) = ph.statistic();
            assert!(m <= last);
            assert!(min <= m);
            last = m;
        }
    }

    #[test]
    fn reset_after_drift_matches_fresh() {
        let mut ph = PageHinkley::default();
        let mut drifted = false;
        for t in 0..3000 {
            let status = ph.update(if t < 1000 { 0.0 } else { 1.0 }).unwrap();
            if status == DetectionStatus::Drift {
                drifted = true;
                let fresh = PageHinkley::default();
                assert_eq!(ph.statistic(), fresh.statistic());
                assert_eq!(ph.samples_seen(), 0);
                break;
            }
        }
        assert!(drifted);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(PageHinkley::default().update(f64::NAN).is_err());
        assert!(PageHinkley::default().update(f64::INFINITY).is_err());
    }
}
