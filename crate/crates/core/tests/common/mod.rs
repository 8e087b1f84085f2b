//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use streamlearn::rng::seeded;

/// Bernoulli(p0) for `shift` steps, then Bernoulli(p1), as 0/1 values.
pub fn bernoulli_shift(seed: u64, n: usize, shift: usize, p0: f64, p1: f64) -> Vec<f64> {
    let mut rng = seeded(seed);
    (0..n)
        .map(|t| {
            let p = if t < shift { p0 } else { p1 };
            f64::from(u8::from(rng.random::<f64>() < p))
        })
        .collect()
}

/// Straightforward ADWIN: keeps every value and tests every split point.
pub struct NaiveAdwin {
    delta: f64,
    window: std::collections::VecDeque<f64>,
}

impl NaiveAdwin {
    pub fn new(delta: f64) -> Self {
        Self {
            delta,
            window: Default::default(),
        }
    }

    pub fn width(&self) -> usize {
        self.window.len()
    }

    fn threshold(&self, n0: usize, n1: usize) -> f64 {
        let n = (n0 + n1) as f64;
        let harmonic = 1.0 / (1.0 / n0 as f64 + 1.0 / n1 as f64);
        ((4.0 * n / self.delta).ln() / (2.0 * harmonic)).sqrt()
    }

    fn cut_exists(&self) -> bool {
        let n = self.window.len();
        let total: f64 = self.window.iter().sum();
        let mut head = 0.0;
        for (i, v) in self.window.iter().enumerate().take(n - 1) {
            head += v;
            let n0 = i + 1;
            let n1 = n - n0;
            let gap = (head / n0 as f64 - (total - head) / n1 as f64).abs();
            if gap >= self.threshold(n0, n1) {
                return true;
            }
        }
        false
    }

    /// Returns whether the window shrank.
    pub fn add(&mut self, v: f64) -> bool {
        self.window.push_back(v);
        let mut shrank = false;
        while self.window.len() > 1 && self.cut_exists() {
            self.window.pop_front();
            shrank = true;
        }
        shrank
    }
}

/// Steps (0-based) at which a naive ADWIN shrinks its window.
pub fn naive_adwin_detections(seq: &[f64], delta: f64) -> Vec<usize> {
    let mut a = NaiveAdwin::new(delta);
    seq.iter()
        .enumerate()
        .filter_map(|(t, &v)| a.add(v).then_some(t))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    Normal,
    Warning,
    Drift,
}

/// DDM written out as a loop over the error sequence.
pub fn ddm_reference(seq: &[f64], min_n: usize) -> Vec<Signal> {
    let (mut i, mut p) = (0.0f64, 0.0f64);
    let (mut p_min, mut s_min) = (f64::INFINITY, f64::INFINITY);
    let mut any_error = false;
    let mut out = Vec::with_capacity(seq.len());
    for &x in seq {
        i += 1.0;
        p = p + (x - p) / i;
        let s = (p * (1.0 - p) / i).sqrt();
        any_error = any_error || x == 1.0;
        let mut signal = Signal::Normal;
        if i >= min_n as f64 {
            if any_error && p + s < p_min + s_min {
                p_min = p;
                s_min = s;
            }
            if p_min.is_finite() {
                if p + s >= p_min + 3.0 * s_min {
                    signal = Signal::Drift;
                } else if p + s >= p_min + 2.0 * s_min {
                    signal = Signal::Warning;
                }
            }
        }
        if signal == Signal::Drift {
            i = 0.0;
            p = 0.0;
            p_min = f64::INFINITY;
            s_min = f64::INFINITY;
            any_error = false;
        }
        out.push(signal);
    }
    out
}

/// EDDM written out as a loop: distances between consecutive errors,
/// population mean and std recomputed from the stored distances.
pub fn eddm_reference(seq: &[f64], alpha: f64, beta: f64, min_errors: usize) -> Vec<Signal> {
    let mut distances: Vec<f64> = Vec::new();
    let mut errors = 0usize;
    let mut last: Option<usize> = None;
    let mut best = f64::NEG_INFINITY;
    let mut t = 0usize;
    let mut out = Vec::with_capacity(seq.len());
    for &x in seq {
        t += 1;
        let mut signal = Signal::Normal;
        if x == 1.0 {
            errors += 1;
            if let Some(prev) = last {
                distances.push((t - prev) as f64);
                let k = distances.len() as f64;
                let mean = distances.iter().sum::<f64>() / k;
                let var = distances.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / k;
                let level = mean + 2.0 * var.sqrt();
                best = best.max(level);
                if errors >= min_errors {
                    let ratio = level / best;
                    if ratio < beta {
                        signal = Signal::Drift;
                    } else if ratio < alpha {
                        signal = Signal::Warning;
                    }
                }
            }
            last = Some(t);
        }
        if signal == Signal::Drift {
            distances.clear();
            errors = 0;
            last = None;
            best = f64::NEG_INFINITY;
            t = 0;
        }
        out.push(signal);
    }
    out
}

/// Page-Hinkley for upward shifts written out as a loop.
pub fn page_hinkley_reference(seq: &[f64], delta: f64, lambda: f64, min_n: usize) -> Vec<Signal> {
    let (mut t, mut sum, mut m, mut m_min) = (0usize, 0.0f64, 0.0f64, f64::INFINITY);
    let mut out = Vec::with_capacity(seq.len());
    for &x in seq {
        t += 1;
        sum += x;
        let mean = sum / t as f64;
        m += x - mean - delta;
        m_min = m_min.min(m);
        if t >= min_n && m - m_min > lambda {
            out.push(Signal::Drift);
            t = 0;
            sum = 0.0;
            m = 0.0;
            m_min = f64::INFINITY;
        } else {
            out.push(Signal::Normal);
        }
    }
    out
}

pub fn first_drift(signals: &[Signal]) -> Option<usize> {
    signals.iter().position(|s| *s == Signal::Drift)
}

pub mod split_oracle;
pub mod spy;
