use std::sync::{Arc, Mutex};

use streamlearn::{
    ClassDistribution, Classifier, Instance, Remaining, Result, Stream, StreamSchema,
};

/// Emits instances whose first feature is a serial number starting at 0.
/// Labels alternate in blocks of three.
pub struct CountingStream {
    schema: StreamSchema,
    next: usize,
    len: Option<usize>,
}

impl CountingStream {
    pub fn new(len: Option<usize>) -> Self {
        Self {
            schema: StreamSchema::new(2, vec![2]).unwrap(),
            next: 0,
            len,
        }
    }
}

impl Stream for CountingStream {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        if self.len.is_some_and(|n| self.next >= n) {
            return Ok(None);
        }
        let i = self.next;
        self.next += 1;
        Ok(Some(Instance::single(vec![i as f64, 0.5], (i / 3) % 2)))
    }

    fn remaining(&self) -> Remaining {
        match self.len {
            Some(n) => Remaining::Finite(n - self.next),
            None => Remaining::Unbounded,
        }
    }

    fn restart(&mut self) -> Result<()> {
        self.next = 0;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Call {
    Predict(usize),
    Fit(usize),
}

/// Records every serial it is asked to predict or train on. With `oracle`
/// it answers with the label rule of [`CountingStream`].
pub struct Spy {
    pub log: Arc<Mutex<Vec<Call>>>,
    pub oracle: bool,
}

impl Spy {
    pub fn new(oracle: bool) -> (Self, Arc<Mutex<Vec<Call>>>) {
        let log = Arc::new(Mutex::new(Vec::new()));
        (
            Self {
                log: log.clone(),
                oracle,
            },
            log,
        )
    }
}

impl Classifier for Spy {
    fn partial_fit(&mut self, batch: &[Instance], _classes: Option<&[usize]>) -> Result<()> {
        let mut log = self.log.lock().unwrap();
        log.extend(batch.iter().map(|i| Call::Fit(i.features[0] as usize)));
        Ok(())
    }

    fn predict_proba(&self, x: &[f64]) -> Result<Vec<ClassDistribution>> {
        let serial = x[0] as usize;
        self.log.lock().unwrap().push(Call::Predict(serial));
        let class = if self.oracle { (serial / 3) % 2 } else { 0 };
        Ok(vec![ClassDistribution::one_hot(2, class)])
    }

    fn reset(&mut self) {}
}
