use std::collections::VecDeque;

use crate::base::{DetectionStatus, DriftDetector};
use crate::error::{Error, Result};

/// Buckets kept per row before the two oldest are merged into the next row.
pub const MAX_BUCKETS: usize = 5;

/// Adaptive windowing over a signal in `[0, 1]`.
///
/// The window is stored as an exponential histogram: row `r` holds up to
/// [`MAX_BUCKETS`] buckets summarising `2^r` consecutive values each.
/// After every insertion each bucket boundary is tested as a split point
/// between an older sub-window `W0` and a newer `W1`; while some split has
/// `|mean(W0) - mean(W1)| >= ε_cut`, the oldest bucket is dropped.
///
/// `ε_cut = sqrt(ln(4n/δ) / (2m))` with `n` the window width and
/// `m = 1 / (1/n0 + 1/n1)`.
#[derive(Debug, Clone)]
pub struct Adwin {
    delta: f64,
    /// `rows[r]` holds bucket sums, newest at the front.
    rows: Vec<VecDeque<f64>>,
    width: usize,
    total: f64,
    detected: bool,
}

impl Default for Adwin {
    fn default() -> Self {
        Self::new(0.002).expect("default delta is valid")
    }
}

impl Adwin {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param("delta", "must be in (0, 1)"));
        }
        Ok(Self {
            delta,
            rows: Vec::new(),
            width: 0,
            total: 0.0,
            detected: false,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of values currently in the window.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn mean(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            self.total / self.width as f64
        }
    }

    /// Whether the last update shrank the window.
    pub fn detected_change(&self) -> bool {
        self.detected
    }

    /// Buckets as `(sum, count)`, oldest first.
    pub fn buckets(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .rev()
            .flat_map(|(r, row)| row.iter().rev().map(move |&s| (s, 1usize << r)))
    }

    pub fn n_buckets(&self) -> usize {
        self.rows.iter().map(VecDeque::len).sum()
    }

    /// Cut threshold for sub-windows of `n0` (older) and `n1` (newer) values.
    pub fn cut_threshold(delta: f64, n0: usize, n1: usize) -> f64 {
        let n = (n0 + n1) as f64;
        let m = 1.0 / (1.0 / n0 as f64 + 1.0 / n1 as f64);
        ((4.0 * n / delta).ln() / (2.0 * m)).sqrt()
    }

    fn insert(&mut self, value: f64) {
        if self.rows.is_empty() {
            self.rows.push(VecDeque::new());
        }
        self.rows[0].push_front(value);
        self.width += 1;
        self.total += value;
        let mut r = 0;
        while r < self.rows.len() && self.rows[r].len() > MAX_BUCKETS {
            let oldest = self.rows[r].pop_back().expect("row over capacity");
            let next = self.rows[r].pop_back().expect("row over capacity");
            if r + 1 == self.rows.len() {
                self.rows.push(VecDeque::new());
            }
            self.rows[r + 1].push_front(oldest + next);
            r += 1;
        }
    }

    fn drop_oldest(&mut self) {
        let Some(r) = self.rows.iter().rposition(|row| !row.is_empty()) else {
            return;
        };
        let sum = self.rows[r].pop_back().expect("nonempty row");
        self.width -= 1 << r;
        self.total -= sum;
        while self.rows.last().is_some_and(VecDeque::is_empty) {
            self.rows.pop();
        }
        if self.width == 0 {
            self.total = 0.0;
        }
    }

    /// Finds whether any bucket boundary splits the window significantly.
    fn has_cut(&self) -> bool {
        let n = self.width;
        let mut n0 = 0usize;
        let mut s0 = 0.0;
        for (sum, count) in self.buckets() {
            n0 += count;
            s0 += sum;
            let n1 = n - n0;
            if n1 == 0 {
                break;
            }
            let u0 = s0 / n0 as f64;
            let u1 = (self.total - s0) / n1 as f64;
            if (u0 - u1).abs() >= Self::cut_threshold(self.delta, n0, n1) {
                return true;
            }
        }
        false
    }

    fn check_invariants(&self) {
        debug_assert_eq!(self.buckets().map(|(_, c)| c).sum::<usize>(), self.width);
        debug_assert!(self.rows.iter().all(|row| row.len() <= MAX_BUCKETS));
        debug_assert!({
            let s: f64 = self.buckets().map(|(s, _)| s).sum();
            (s - self.total).abs() <= 1e-9 * (1.0 + s.abs())
        });
    }

    /// Adds `value` and shrinks the window while a significant cut exists.
    pub fn add(&mut self, value: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Domain {
                what: "ADWIN input",
                value,
            });
        }
        self.insert(value);
        self.detected = false;
        while self.width > 1 && self.has_cut() {
            self.drop_oldest();
            self.detected = true;
        }
        self.check_invariants();
        Ok(self.detected)
    }
}

impl DriftDetector for Adwin {
    fn update(&mut self, value: f64) -> Result<DetectionStatus> {
        Ok(if self.add(value)? {
            DetectionStatus::Drift
        } else {
            DetectionStatus::Normal
        })
    }

    fn reset(&mut self) {
        *self = Self {
            delta: self.delta,
            rows: Vec::new(),
            width: 0,
            total: 0.0,
            detected: false,
        };
    }

    fn estimation(&self) -> f64 {
        self.mean()
    }
}
