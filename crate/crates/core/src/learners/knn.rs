use std::collections::VecDeque;

use crate::base::{ClassDistribution, Classifier, Instance, Layout};
use crate::drift::Adwin;
use crate::error::{Error, Result};

/// FIFO buffer of the most recent `(features, targets)` pairs.
#[derive(Debug, Clone)]
pub struct WindowBuffer {
    max_size: usize,
    items: VecDeque<(Vec<f64>, Vec<usize>)>,
}

impl WindowBuffer {
    pub fn new(max_size: usize) -> Self {
        assert!(max_size > 0, "window size must be positive");
        Self {
            max_size,
            items: VecDeque::with_capacity(max_size.min(1 << 16)),
        }
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, features: Vec<f64>, targets: Vec<usize>) {
        if self.items.len() == self.max_size {
            self.items.pop_front();
        }
        self.items.push_back((features, targets));
    }

    /// Keeps only the `w` most recent entries.
    pub fn shrink_to(&mut self, w: usize) {
        while self.items.len() > w {
            self.items.pop_front();
        }
    }

    /// Oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &(Vec<f64>, Vec<usize>)> {
        self.items.iter()
    }

    pub fn clear(&mut self) {
        self.items.clear();
    }
}

/// k-nearest-neighbours over a sliding window, Euclidean distance on raw features.
#[derive(Debug, Clone)]
pub struct Knn {
    k: usize,
    window: WindowBuffer,
    layout: Layout,
}

impl Default for Knn {
    fn default() -> Self {
        Self::new(5, 1000).expect("defaults are valid")
    }
}

impl Knn {
    pub fn new(k: usize, max_window: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("k", "must be at least 1"));
        }
        if max_window == 0 {
            return Err(Error::param("max_window", "must be at least 1"));
        }
        Ok(Self {
            k,
            window: WindowBuffer::new(max_window),
            layout: Layout::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn window(&self) -> &WindowBuffer {
        &self.window
    }

    pub fn window_mut(&mut self) -> &mut WindowBuffer {
        &mut self.window
    }

    /// Indices (oldest = 0) of the `k` nearest stored points; equal distances keep insertion order.
    fn neighbours(&self, x: &[f64]) -> Vec<usize> {
        let mut dist: Vec<(f64, usize)> = self
            .window
            .iter()
            .enumerate()
            .map(|(i, (f, _))| {
                let d: f64 = f.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                (d, i)
            })
            .collect();
        let k = self.k.min(dist.len());
        if k < dist.len() {
            dist.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            dist.truncate(k);
        }
        dist.into_iter().map(|(_, i)| i).collect()
    }
}

impl Classifier for Knn {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        self.layout.admit(batch, classes)?;
        for inst in batch {
            self.window
                .push(inst.features.clone(), inst.targets.clone());
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.layout.check_features(x)?;
        let Some(cardinality) = self.layout.cardinality() else {
            return Ok(self.layout.uniform());
        };
        if self.window.is_empty() {
            return Ok(self.layout.uniform());
        }
        let neighbours = self.neighbours(x);
        let mut votes: Vec<Vec<f64>> = cardinality.iter().map(|&k| vec![0.0; k]).collect();
        for i in neighbours {
            let (_, targets) = &self.window.items[i];
            for (v, &y) in votes.iter_mut().zip(targets) {
                v[y] += 1.0;
            }
        }
        Ok(votes
            .into_iter()
            .map(ClassDistribution::from_scores)
            .collect())
    }

    fn reset(&mut self) {
        self.window.clear();
        self.layout.clear();
    }
}

/// kNN whose window is cut back to ADWIN's width whenever ADWIN, fed the
/// model's own error indicator, signals a change.
#[derive(Debug, Clone)]
pub struct KnnAdwin {
    knn: Knn,
    adwin: Adwin,
}

impl Default for KnnAdwin {
    fn default() -> Self {
        Self::new(5, 1000, 0.002).expect("defaults are valid")
    }
}

impl KnnAdwin {
    pub fn new(k: usize, max_window: usize, delta: f64) -> Result<Self> {
        Ok(Self {
            knn: Knn::new(k, max_window)?,
            adwin: Adwin::new(delta)?,
        })
    }

    pub fn knn(&self) -> &Knn {
        &self.knn
    }

    pub fn adwin(&self) -> &Adwin {
        &self.adwin
    }

    /// Response to a change signal: keep the `width` most recent window entries.
    pub fn on_drift(&mut self, width: usize) {
        self.knn.window.shrink_to(width);
    }
}

impl Classifier for KnnAdwin {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        self.knn.layout.admit(batch, classes)?;
        for inst in batch {
            let predicted = self.knn.predict(&inst.features)?;
            let error = if predicted == inst.targets { 0.0 } else { 1.0 };
            if self.adwin.add(error)? {
                self.on_drift(self.adwin.width());
            }
            self.knn
                .window
                .push(inst.features.clone(), inst.targets.clone());
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.knn.predict_proba(x)
    }

    fn reset(&mut self) {
        self.knn.reset();
        crate::DriftDetector::reset(&mut self.adwin);
    }
}
