use crate::base::{Instance, Remaining, Stream, StreamSchema};
use crate::error::{Error, Result};

/// Emits `before` for the first `position` instances and `after` from then on.
pub struct AbruptDriftStream {
    before: Box<dyn Stream>,
    after: Box<dyn Stream>,
    position: usize,
    emitted: usize,
}

impl AbruptDriftStream {
    pub fn new(before: Box<dyn Stream>, after: Box<dyn Stream>, position: usize) -> Result<Self> {
        if before.schema() != after.schema() {
            return Err(Error::Schema(
                "both concepts of a drifting stream must share a schema".into(),
            ));
        }
        Ok(Self {
            before,
            after,
            position,
            emitted: 0,
        })
    }

    pub fn position(&self) -> usize {
        self.position
    }
}

impl Stream for AbruptDriftStream {
    fn schema(&self) -> &StreamSchema {
        self.before.schema()
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        let next = if self.emitted < self.position {
            self.before.next_instance()?
        } else {
            self.after.next_instance()?
        };
        if next.is_some() {
            self.emitted += 1;
        }
        Ok(next)
    }

    fn remaining(&self) -> Remaining {
        match (self.before.remaining(), self.after.remaining()) {
            (Remaining::Finite(a), Remaining::Finite(b)) => {
                let left_before = a.min(self.position.saturating_sub(self.emitted));
                Remaining::Finite(left_before + b)
            }
            _ => Remaining::Unbounded,
        }
    }

    fn restart(&mut self) -> Result<()> {
        self.before.restart()?;
        self.after.restart()?;
        self.emitted = 0;
        Ok(())
    }
}
