//! Seeded synthetic streams and a CSV-backed stream.
//!
//! Every generator is fully determined by its configuration and seed(s):
//! two generators built from equal inputs emit identical sequences, and
//! [`Stream::restart`] is equivalent to rebuilding.

mod file;
mod multilabel;
mod rbf;
mod sea;
mod switch;
mod waveform;

pub use file::{CsvStream, CsvStreamConfig};
pub use multilabel::{MultiLabelConfig, MultiLabelGenerator};
pub use rbf::{Centroid, RbfConfig, RbfGenerator};
pub use sea::{SeaConfig, SeaGenerator};
pub use switch::AbruptDriftStream;
pub use waveform::{WaveformConfig, WaveformGenerator, BASE_WAVES, CLASS_WAVES};

use std::io::Write;

use crate::base::Stream;
use crate::error::Result;

/// Writes `n` instances of `stream` as CSV: header row, features then targets.
///
/// Values use the shortest representation that parses back to the same
/// `f64`, so a [`CsvStream`] over the output replays the exact instances.
pub fn write_csv<W: Write>(stream: &mut dyn Stream, n: usize, out: W) -> Result<usize> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let schema = stream.schema().clone();
    let header: Vec<&str> = schema
        .feature_names
        .iter()
        .chain(&schema.target_names)
        .map(String::as_str)
        .collect();
    writer.write_record(&header).map_err(csv_io)?;
    let mut written = 0;
    let mut row = Vec::with_capacity(header.len());
    while written < n {
        let Some(inst) = stream.next_instance()? else {
            break;
        };
        row.clear();
        row.extend(inst.features.iter().map(|v| v.to_string()));
        row.extend(inst.targets.iter().map(|y| y.to_string()));
        writer.write_record(&row).map_err(csv_io)?;
        written += 1;
    }
    writer.flush()?;
    Ok(written)
}

fn csv_io(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e))
}
