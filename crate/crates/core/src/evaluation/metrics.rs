use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Default length of the sliding window over recent outcomes.
pub const DEFAULT_WINDOW: usize = 200;

/// Cohen's kappa of a square confusion matrix (`rows = truth`, `cols = prediction`).
///
/// When the chance agreement is 1 every count sits in a single diagonal
/// cell, so agreement is perfect and the result is 1.
pub fn kappa(confusion: &[Vec<u64>]) -> Result<f64> {
    let k = confusion.len();
    if k == 0 || confusion.iter().any(|row| row.len() != k) {
        return Err(Error::Config(
            "kappa needs a nonempty square confusion matrix".into(),
        ));
    }
    let total: u64 = confusion.iter().flatten().sum();
    if total == 0 {
        return Err(Error::Config("kappa of an empty confusion matrix".into()));
    }
    let n = total as f64;
    let observed = (0..k).map(|i| confusion[i][i]).sum::<u64>() as f64 / n;
    let chance: f64 = (0..k)
        .map(|i| {
            let row: u64 = confusion[i].iter().sum();
            let col: u64 = confusion.iter().map(|r| r[i]).sum();
            row as f64 * col as f64
        })
        .sum::<f64>()
        / (n * n);
    if chance >= 1.0 {
        return Ok(1.0);
    }
    Ok((observed - chance) / (1.0 - chance))
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Accumulator {
    n: u64,
    exact: u64,
    label_errors: u64,
    confusions: Vec<Vec<Vec<u64>>>,
}

impl Accumulator {
    fn new(cardinality: &[usize]) -> Self {
        Self {
            confusions: cardinality.iter().map(|&k| vec![vec![0; k]; k]).collect(),
            ..Default::default()
        }
    }

    fn apply(&mut self, y: &[usize], y_hat: &[usize], add: bool) {
        let mismatches = y.iter().zip(y_hat).filter(|(a, b)| a != b).count() as u64;
        let exact = u64::from(mismatches == 0);
        let step = |v: &mut u64, d: u64| {
            if add {
                *v += d
            } else {
                *v -= d
            }
        };
        step(&mut self.n, 1);
        step(&mut self.exact, exact);
        step(&mut self.label_errors, mismatches);
        for (j, (&t, &p)) in y.iter().zip(y_hat).enumerate() {
            step(&mut self.confusions[j][t][p], 1);
        }
    }

    fn accuracy(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.exact as f64 / self.n as f64
        }
    }

    fn hamming_loss(&self) -> f64 {
        let labels = self.n * self.confusions.len() as u64;
        if labels == 0 {
            f64::NAN
        } else {
            self.label_errors as f64 / labels as f64
        }
    }

    /// Mean of the per-target kappas.
    fn kappa(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        let sum: f64 = self
            .confusions
            .iter()
            .map(|c| kappa(c).expect("nonempty square matrix"))
            .sum();
        sum / self.confusions.len() as f64
    }
}

/// Running accuracy, kappa and (for several targets) hamming loss and exact
/// match, both over everything seen and over a sliding window.
#[derive(Debug, Clone)]
pub struct MetricSet {
    cardinality: Vec<usize>,
    window_size: usize,
    global: Accumulator,
    window: Accumulator,
    recent: VecDeque<(Vec<usize>, Vec<usize>)>,
}

impl MetricSet {
    pub fn new(cardinality: &[usize]) -> Self {
        Self::with_window(cardinality, DEFAULT_WINDOW)
    }

    pub fn with_window(cardinality: &[usize], window_size: usize) -> Self {
        assert!(window_size > 0, "window must hold at least one outcome");
        Self {
            cardinality: cardinality.to_vec(),
            window_size,
            global: Accumulator::new(cardinality),
            window: Accumulator::new(cardinality),
            recent: VecDeque::with_capacity(window_size + 1),
        }
    }

    pub fn is_multi_target(&self) -> bool {
        self.cardinality.len() > 1
    }

    pub fn update(&mut self, y: &[usize], y_hat: &[usize]) -> Result<()> {
        if y.len() != self.cardinality.len() || y_hat.len() != self.cardinality.len() {
            return Err(Error::TargetArity {
                expected: self.cardinality.len(),
                found: if y.len() != self.cardinality.len() {
                    y.len()
                } else {
                    y_hat.len()
                },
            });
        }
        for (j, (&t, &p)) in y.iter().zip(y_hat).enumerate() {
            let k = self.cardinality[j];
            if t >= k || p >= k {
                return Err(Error::UndeclaredClass {
                    target: j,
                    class: t.max(p),
                    declared: k,
                });
            }
        }
        self.global.apply(y, y_hat, true);
        self.window.apply(y, y_hat, true);
        self.recent.push_back((y.to_vec(), y_hat.to_vec()));
        if self.recent.len() > self.window_size {
            let (old_y, old_hat) = self.recent.pop_front().expect("nonempty");
            self.window.apply(&old_y, &old_hat, false);
        }
        Ok(())
    }

    pub fn n_seen(&self) -> u64 {
        self.global.n
    }

    pub fn accuracy(&self) -> f64 {
        self.global.accuracy()
    }

    pub fn kappa(&self) -> f64 {
        self.global.kappa()
    }

    pub fn hamming_loss(&self) -> f64 {
        self.global.hamming_loss()
    }

    /// Fraction of instances with every target right; equals accuracy.
    pub fn exact_match(&self) -> f64 {
        self.global.accuracy()
    }

    pub fn window_accuracy(&self) -> f64 {
        self.window.accuracy()
    }

    pub fn window_kappa(&self) -> f64 {
        self.window.kappa()
    }

    pub fn window_hamming_loss(&self) -> f64 {
        self.window.hamming_loss()
    }

    pub fn window_exact_match(&self) -> f64 {
        self.window.accuracy()
    }

    /// Outcomes `(truth, prediction)` currently covered by the window, oldest first.
    pub fn window_outcomes(&self) -> impl Iterator<Item = &(Vec<usize>, Vec<usize>)> {
        self.recent.iter()
    }

    pub fn global_confusion(&self, target: usize) -> &[Vec<u64>] {
        &self.global.confusions[target]
    }

    /// Metric names reported for this target layout, in column order.
    pub fn names(&self, with_window: bool) -> Vec<&'static str> {
        let mut names = vec!["accuracy", "kappa"];
        if self.is_multi_target() {
            names.extend(["hamming_loss", "exact_match"]);
        }
        if with_window {
            names.extend(["window_accuracy", "window_kappa"]);
            if self.is_multi_target() {
                names.extend(["window_hamming_loss", "window_exact_match"]);
            }
        }
        names
    }

    /// `(name, value)` pairs in the order of [`MetricSet::names`].
    pub fn snapshot(&self, with_window: bool) -> Vec<(&'static str, f64)> {
        self.names(with_window)
            .into_iter()
            .map(|name| {
                let v = match name {
                    "accuracy" => self.accuracy(),
                    "kappa" => self.kappa(),
                    "hamming_loss" => self.hamming_loss(),
                    "exact_match" => self.exact_match(),
                    "window_accuracy" => self.window_accuracy(),
                    "window_kappa" => self.window_kappa(),
                    "window_hamming_loss" => self.window_hamming_loss(),
                    "window_exact_match" => self.window_exact_match(),
                    _ => unreachable!("unknown metric {name}"),
                };
                (name, v)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_reference_values() {
        assert_eq!(kappa(&[vec![7, 0], vec![0, 3]]).unwrap(), 1.0);
        assert_eq!(kappa(&[vec![25, 25], vec![25, 25]]).unwrap(), 0.0);
        // p_o = 0.7, p_e = (50·60 + 50·40) / 100² = 0.5
        let k = kappa(&[vec![40, 10], vec![20, 30]]).unwrap();
        assert!((k - 0.4).abs() < 1e-12);
        assert_eq!(kappa(&[vec![9, 0], vec![0, 0]]).unwrap(), 1.0);
        assert!(kappa(&[vec![0, 0], vec![0, 0]]).is_err());
        assert!(kappa(&[]).is_err());
    }

    #[test]
    fn hamming_and_exact_match() {
        let mut m = MetricSet::new(&[2, 2, 2]);
        m.update(&[1, 0, 1], &[1, 1, 1]).unwrap();
        assert!((m.hamming_loss() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.exact_match(), 0.0);
        m.update(&[0, 0, 0], &[0, 0, 0]).unwrap();
        assert!((m.hamming_loss() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(m.exact_match(), 0.5);
    }

    #[test]
    fn perfect_predictions() {
        let mut m = MetricSet::new(&[3]);
        for i in 0..30 {
            m.update(&[i % 3], &[i % 3]).unwrap();
        }
        assert_eq!(m.accuracy(), 1.0);
        assert_eq!(m.kappa(), 1.0);
        assert_eq!(m.window_kappa(), 1.0);
    }

    #[test]
    fn window_evicts_oldest() {
        let mut m = MetricSet::with_window(&[2], 3);
        for (y, p) in [(0, 1), (0, 0), (1, 1), (1, 1)] {
            m.update(&[y], &[p]).unwrap();
        }
        assert_eq!(m.window_outcomes().count(), 3);
        assert_eq!(m.window_accuracy(), 1.0);
        assert_eq!(m.accuracy(), 0.75);
    }

    #[test]
    fn arity_checked() {
        let mut m = MetricSet::new(&[2, 2]);
        assert!(m.update(&[0], &[0]).is_err());
        assert!(m.update(&[0, 2], &[0, 0]).is_err());
        assert_eq!(m.n_seen(), 0);
        assert!(m.accuracy().is_nan());
    }

    #[test]
    fn names_follow_layout() {
        assert_eq!(
            MetricSet::new(&[2]).names(true),
            vec!["accuracy", "kappa", "window_accuracy", "window_kappa"]
        );
        assert_eq!(MetricSet::new(&[2, 2]).names(false).len(), 4);
        assert_eq!(MetricSet::new(&[2, 2]).names(true).len(), 8);
    }
}
