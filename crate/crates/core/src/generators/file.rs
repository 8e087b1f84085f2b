use std::fs::File;
use std::path::{Path, PathBuf};

use crate::base::{Instance, Remaining, Stream, StreamSchema};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvStreamConfig {
    pub path: PathBuf,
    /// Targets are the rightmost columns.
    pub n_target_columns: usize,
    pub header_present: bool,
    /// Classes per target; inferred as `max label + 1` (at least 2) when absent.
    pub target_cardinality: Option<Vec<usize>>,
}

impl CsvStreamConfig {
    pub fn new(path: impl AsRef<Path>, n_target_columns: usize) -> Self {
        Self {
            path: path.as_ref().to_path_buf(),
            n_target_columns,
            header_present: true,
            target_cardinality: None,
        }
    }
}

/// File-backed stream over a numeric CSV file.
///
/// Opening the file makes one pass to count rows and size the target
/// classes; malformed rows are reported when they are reached by
/// [`Stream::next_instance`], with their 1-based data row number.
pub struct CsvStream {
    config: CsvStreamConfig,
    schema: StreamSchema,
    n_rows: usize,
    consumed: usize,
    records: csv::StringRecordsIntoIter<File>,
}

fn reader(config: &CsvStreamConfig) -> Result<csv::Reader<File>> {
    let file = File::open(&config.path)?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(config.header_present)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn csv_error(row: usize, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            row,
            message: format!("{other:?}"),
        },
    }
}

impl CsvStream {
    pub fn open(config: CsvStreamConfig) -> Result<Self> {
        if config.n_target_columns == 0 {
            return Err(Error::param("n_target_columns", "must be at least 1"));
        }
        let mut rdr = reader(&config)?;
        let header = if config.header_present {
            Some(rdr.headers().map_err(|e| csv_error(0, e))?.clone())
        } else {
            None
        };

        let mut n_columns = header.as_ref().map(|h| h.len());
        let mut max_label = vec![1usize; config.n_target_columns];
        let mut n_rows = 0;
        for record in rdr.records() {
            n_rows += 1;
            let Ok(record) = record else { continue };
            let width = *n_columns.get_or_insert(record.len());
            if record.len() != width || width <= config.n_target_columns {
                continue;
            }
            for (j, cell) in record
                .iter()
                .skip(width - config.n_target_columns)
                .enumerate()
            {
                if let Ok(y) = parse_label(cell) {
                    max_label[j] = max_label[j].max(y);
                }
            }
        }

        let n_columns = n_columns.ok_or_else(|| {
            Error::Schema(format!("{} contains no columns", config.path.display()))
        })?;
        if n_columns <= config.n_target_columns {
            return Err(Error::Schema(format!(
                "{n_columns} columns leave no features for {} target columns",
                config.n_target_columns
            )));
        }
        let n_features = n_columns - config.n_target_columns;
        let cardinality = match &config.target_cardinality {
            Some(k) if k.len() != config.n_target_columns => {
                return Err(Error::param(
                    "target_cardinality",
                    "needs one entry per target column",
                ))
            }
            Some(k) => k.clone(),
            None => max_label.iter().map(|m| m + 1).collect(),
        };
        let schema = match header {
            Some(h) => {
                let names: Vec<String> = h.iter().map(str::to_owned).collect();
                StreamSchema::with_names(
                    n_features,
                    cardinality,
                    names[..n_features].to_vec(),
                    names[n_features..].to_vec(),
                )?
            }
            None => StreamSchema::new(n_features, cardinality)?,
        };

        let records = reader(&config)?.into_records();
        Ok(Self {
            config,
            schema,
            n_rows,
            consumed: 0,
            records,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    fn parse_row(&self, row: usize, record: &csv::StringRecord) -> Result<Instance> {
        let width = self.schema.n_features + self.schema.n_targets();
        if record.len() != width {
            return Err(Error::Parse {
                row,
                message: format!("expected {width} cells, found {}", record.len()),
            });
        }
        let mut features = Vec::with_capacity(self.schema.n_features);
        for (col, cell) in record.iter().take(self.schema.n_features).enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                message: format!("column {}: `{cell}` is not a number", col + 1),
            })?;
            features.push(v);
        }
        let mut targets = Vec::with_capacity(self.schema.n_targets());
        for (j, cell) in record.iter().skip(self.schema.n_features).enumerate() {
            let y = parse_label(cell).map_err(|message| Error::Parse {
                row,
                message: format!("column {}: {message}", self.schema.n_features + j + 1),
            })?;
            if y >= self.schema.target_cardinality[j] {
                return Err(Error::Parse {
                    row,
                    message: format!(
                        "label {y} exceeds the declared {} classes",
                        self.schema.target_cardinality[j]
                    ),
                });
            }
            targets.push(y);
        }
        Ok(Instance::new(features, targets))
    }
}

fn parse_label(cell: &str) -> std::result::Result<usize, String> {
    let v: f64 = cell
        .parse()
        .map_err(|_| format!("`{cell}` is not a number"))?;
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(format!("`{cell}` is not a nonnegative integer label"));
    }
    Ok(v as usize)
}

impl Stream for CsvStream {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        let row = self.consumed + 1;
        match self.records.next() {
            None => Ok(None),
            Some(record) => {
                self.consumed += 1;
                let record = record.map_err(|e| csv_error(row, e))?;
                self.parse_row(row, &record).map(Some)
            }
        }
    }

    fn remaining(&self) -> Remaining {
        Remaining::Finite(self.n_rows.saturating_sub(self.consumed))
    }

    fn restart(&mut self) -> Result<()> {
        self.records = reader(&self.config)?.into_records();
        self.consumed = 0;
        Ok(())
    }
}
