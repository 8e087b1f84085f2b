use rand::Rng;

use super::ModelFactory;
use crate::base::{ClassDistribution, Classifier, Instance, Layout};
use crate::drift::Adwin;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded, StreamRng};
use crate::DriftDetector;

/// Draws `k ~ Poisson(lambda)` by inverting the CDF at `u ∈ [0, 1)`.
pub fn poisson_inversion(lambda: f64, u: f64) -> u32 {
    let mut k = 0u32;
    let mut p = (-lambda).exp();
    let mut cdf = p;
    // the tail beyond a few hundred is below f64 resolution for the rates used here
    while u >= cdf && k < 1000 {
        k += 1;
        p *= lambda / f64::from(k);
        cdf += p;
    }
    k
}

/// How many times each member trains on an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resampling {
    /// `k ~ Poisson(λ)` from the member's own random substream.
    Poisson(f64),
    /// Always `k`; a deterministic stand-in for the sampler.
    Fixed(u32),
}

/// Equal-weight mean of member distributions.
pub fn average_distributions(members: &[Vec<ClassDistribution>]) -> Vec<ClassDistribution> {
    let n_targets = members[0].len();
    let n = members.len() as f64;
    (0..n_targets)
        .map(|j| {
            let mut acc = vec![0.0; members[0][j].len()];
            for m in members {
                for (a, p) in acc.iter_mut().zip(m[j].probs()) {
                    *a += p;
                }
            }
            ClassDistribution::from_probs(acc.into_iter().map(|a| a / n).collect())
        })
        .collect()
}

/// State shared by both bagging variants.
struct Members {
    factory: ModelFactory,
    models: Vec<Box<dyn Classifier>>,
    rngs: Vec<StreamRng>,
    resampling: Resampling,
    seed: u64,
    layout: Layout,
}

impl Members {
    fn new(factory: ModelFactory, n: usize, resampling: Resampling, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n_estimators", "must be at least 1"));
        }
        if let Resampling::Poisson(l) = resampling {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::param("lambda", "must be a finite value > 0"));
            }
        }
        Ok(Self {
            models: (0..n).map(|_| factory()).collect(),
            rngs: (0..n)
                .map(|i| seeded(derive_seed(seed, i as u64)))
                .collect(),
            factory,
            resampling,
            seed,
            layout: Layout::new(),
        })
    }

    fn draw(&mut self, member: usize) -> u32 {
        match self.resampling {
            Resampling::Poisson(lambda) => {
                let u: f64 = self.rngs[member].random();
                poisson_inversion(lambda, u)
            }
            Resampling::Fixed(k) => k,
        }
    }

    /// Declares the layout once and returns the classes to hand to members.
    fn admit(
        &mut self,
        batch: &[Instance],
        classes: Option<&[usize]>,
    ) -> Result<Option<Vec<usize>>> {
        if self.layout.admit(batch, classes)? {
            let k = self.layout.cardinality().expect("declared").to_vec();
            for m in &mut self.models {
                m.partial_fit(&[], Some(&k))?;
            }
        }
        Ok(self.layout.cardinality().map(<[usize]>::to_vec))
    }

    fn fresh_member(&self) -> Box<dyn Classifier> {
        let mut m = (self.factory)();
        if let Some(k) = self.layout.cardinality() {
            m.partial_fit(&[], Some(k))
                .expect("an empty batch with validated classes is accepted");
        }
        m
    }

    fn train_member(&mut self, i: usize, inst: &Instance, classes: Option<&[usize]>) -> Result<()> {
        let k = self.draw(i);
        for _ in 0..k {
            self.models[i].partial_fit(std::slice::from_ref(inst), classes)?;
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.layout.check_features(x)?;
        if !self.layout.is_declared() {
            return Ok(self.layout.uniform());
        }
        let outputs = self
            .models
            .iter()
            .map(|m| m.predict_proba(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(average_distributions(&outputs))
    }

    fn reset(&mut self) {
        self.models = (0..self.models.len()).map(|_| (self.factory)()).collect();
        self.rngs = (0..self.models.len())
            .map(|i| seeded(derive_seed(self.seed, i as u64)))
            .collect();
        self.layout.clear();
    }
}

/// Online bagging: each member trains `k ~ Poisson(1)` times on every instance.
pub struct OzaBagging {
    members: Members,
}

impl OzaBagging {
    pub fn new(factory: ModelFactory, n_estimators: usize, seed: u64) -> Result<Self> {
        Self::with_resampling(factory, n_estimators, Resampling::Poisson(1.0), seed)
    }

    pub fn with_resampling(
        factory: ModelFactory,
        n_estimators: usize,
        resampling: Resampling,
        seed: u64,
    ) -> Result<Self> {
        Ok(Self {
            members: Members::new(factory, n_estimators, resampling, seed)?,
        })
    }

    pub fn n_estimators(&self) -> usize {
        self.members.models.len()
    }

    pub fn member(&self, i: usize) -> &dyn Classifier {
        self.members.models[i].as_ref()
    }
}

impl Classifier for OzaBagging {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        let classes = self.members.admit(batch, classes)?;
        for inst in batch {
            for i in 0..self.members.models.len() {
                self.members.train_member(i, inst, classes.as_deref())?;
            }
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.members.predict_proba(x)
    }

    fn reset(&mut self) {
        self.members.reset();
    }
}

/// Leveraging bagging: Poisson(6) resampling plus one ADWIN per member on
/// its error indicator. When any member's ADWIN signals a change, the member
/// with the highest estimated error is replaced by a fresh model and detector.
pub struct LeverageBagging {
    members: Members,
    detectors: Vec<Adwin>,
    delta: f64,
    detect_drift: bool,
    n_resets: usize,
}

impl LeverageBagging {
    pub fn new(factory: ModelFactory, n_estimators: usize, seed: u64) -> Result<Self> {
        Self::with_options(
            factory,
            n_estimators,
            Resampling::Poisson(6.0),
            0.002,
            true,
            seed,
        )
    }

    pub fn with_options(
        factory: ModelFactory,
        n_estimators: usize,
        resampling: Resampling,
        delta: f64,
        detect_drift: bool,
        seed: u64,
    ) -> Result<Self> {
        let members = Members::new(factory, n_estimators, resampling, seed)?;
        let detectors = (0..n_estimators)
            .map(|_| Adwin::new(delta))
            .collect::<Result<_>>()?;
        Ok(Self {
            members,
            detectors,
            delta,
            detect_drift,
            n_resets: 0,
        })
    }

    pub fn n_estimators(&self) -> usize {
        self.members.models.len()
    }

    pub fn member(&self, i: usize) -> &dyn Classifier {
        self.members.models[i].as_ref()
    }

    pub fn detector(&self, i: usize) -> &Adwin {
        &self.detectors[i]
    }

    pub fn detector_mut(&mut self, i: usize) -> &mut Adwin {
        &mut self.detectors[i]
    }

    /// Number of member replacements so far.
    pub fn n_resets(&self) -> usize {
        self.n_resets
    }

    /// Replaces the member whose detector estimates the highest error
    /// (lowest index on ties) and returns its index.
    pub fn reset_worst_member(&mut self) -> usize {
        let estimates: Vec<f64> = self.detectors.iter().map(Adwin::estimation).collect();
        let worst = crate::base::argmax(&estimates);
        self.members.models[worst] = self.members.fresh_member();
        self.detectors[worst] = Adwin::new(self.delta).expect("validated");
        self.n_resets += 1;
        worst
    }
}

impl Classifier for LeverageBagging {
    fn partial_fit(&mut self, batch: &[Instance], classes: Option<&[usize]>) -> Result<()> {
        let classes = self.members.admit(batch, classes)?;
        for inst in batch {
            let mut change = false;
            for i in 0..self.members.models.len() {
                self.members.train_member(i, inst, classes.as_deref())?;
                if self.detect_drift {
                    let wrong = self.members.models[i].predict(&inst.features)? != inst.targets;
                    change |= self.detectors[i].add(if wrong { 1.0 } else { 0.0 })?;
                }
            }
            if change {
                self.reset_worst_member();
            }
        }
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        self.members.predict_proba(x)
    }

    fn reset(&mut self) {
        self.members.reset();
        self.detectors.iter_mut().for_each(DriftDetector::reset);
        self.n_resets = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{factory, MajorityClass, NaiveBayes};

    #[test]
    fn poisson_inversion_boundaries() {
        assert_eq!(poisson_inversion(1.0, 0.0), 0);
        // P(0) = e^-1 ≈ 0.3679, P(<=1) ≈ 0.7358
        assert_eq!(poisson_inversion(1.0, 0.36), 0);
        assert_eq!(poisson_inversion(1.0, 0.37), 1);
        assert_eq!(poisson_inversion(1.0, 0.74), 2);
        assert!(poisson_inversion(6.0, 0.999_999) > 10);
    }

    #[test]
    fn averaging() {
        let a = vec![ClassDistribution::one_hot(2, 0)];
        let b = vec![ClassDistribution::one_hot(2, 1)];
        assert_eq!(
            average_distributions(&[a.clone(), b])[0].probs(),
            &[0.5, 0.5]
        );
        assert_eq!(average_distributions(&[a.clone(), a.clone()]), a);
    }

    #[test]
    fn zero_draw_leaves_member_untouched() {
        let mut ens =
            OzaBagging::with_resampling(factory(MajorityClass::new), 2, Resampling::Fixed(0), 1)
                .unwrap();
        ens.partial_fit(&[Instance::single(vec![0.0], 1)], Some(&[2]))
            .unwrap();
        assert_eq!(ens.predict_proba(&[0.0]).unwrap()[0].probs(), &[0.5, 0.5]);
    }

    #[test]
    fn forced_reset_replaces_worst_member_only() {
        let mut ens = LeverageBagging::new(factory(NaiveBayes::new), 4, 3).unwrap();
        let batch: Vec<Instance> = (0..200)
            .map(|i| Instance::single(vec![f64::from(i % 10)], usize::from(i % 10 > 4)))
            .collect();
        ens.partial_fit(&batch, None).unwrap();
        let before: Vec<_> = (0..4)
            .map(|i| ens.member(i).predict_proba(&[7.0]).unwrap())
            .collect();
        for i in 0..4 {
            crate::DriftDetector::reset(ens.detector_mut(i));
            for _ in 0..100 {
                ens.detector_mut(i)
                    .add(if i == 2 { 1.0 } else { 0.0 })
                    .unwrap();
            }
        }
        assert_eq!(ens.reset_worst_member(), 2);
        assert_eq!(ens.detector(2).width(), 0);
        assert_eq!(
            ens.member(2).predict_proba(&[7.0]).unwrap()[0].probs(),
            &[0.5, 0.5]
        );
        for i in [0, 1, 3] {
            assert_eq!(ens.member(i).predict_proba(&[7.0]).unwrap(), before[i]);
        }
    }
}
