//! Change detectors over scalar signals.
//!
//! All detectors implement [`DriftDetector`](crate::DriftDetector). Binary
//! detectors (DDM, EDDM) expect error indicators: 1 for a misclassified
//! instance, 0 otherwise.

mod adwin;
mod ddm;
mod eddm;
mod page_hinkley;

pub use adwin::{Adwin, MAX_BUCKETS};
pub use ddm::Ddm;
pub use eddm::Eddm;
pub use page_hinkley::PageHinkley;

use crate::error::{Error, Result};

fn binary_input(what: &'static str, value: f64) -> Result<bool> {
    if value == 0.0 {
        Ok(false)
    } else if value == 1.0 {
        Ok(true)
    } else {
        Err(Error::Domain { what, value })
    }
}
