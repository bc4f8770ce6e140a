//! Sample-table ingestion.
//!
//! A sample file is UTF-8 CSV whose header is exactly `t,H` (log-line
//! samples) or `x,F` (positive-ratio samples), followed by one pair per line
//! with strictly increasing abscissas.

use std::fs::File;
use std::path::{Path, PathBuf};

use reccost_core::{Domain, FunctionHandle};

#[derive(Debug, thiserror::Error)]
pub enum SampleError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Line { line: u64, message: String },
    #[error("header `{found}` declares {declared} samples but --domain is {requested}")]
    DomainMismatch {
        found: String,
        declared: Domain,
        requested: Domain,
    },
    #[error("invalid sample table: {0}")]
    Table(#[from] reccost_core::Error),
}

fn at(line: u64, message: impl Into<String>) -> SampleError {
    SampleError::Line {
        line,
        message: message.into(),
    }
}

/// Loads a sample table. `domain` must agree with the header when given.
pub fn load_samples(path: &Path, domain: Option<Domain>) -> Result<FunctionHandle, SampleError> {
    let file = File::open(path).map_err(|source| SampleError::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file);
    let mut records = reader.records();

    let header = match records.next() {
        None => return Err(at(1, "empty file, expected header `t,H` or `x,F`")),
        Some(r) => r.map_err(|e| at(csv_line(&e), e.to_string()))?,
    };
    let line = header.position().map_or(1, |p| p.line());
    let found = header.iter().collect::<Vec<_>>().join(",");
    let declared = match found.as_str() {
        "t,H" => Domain::LogLine,
        "x,F" => Domain::PositiveRatios,
        _ => return Err(at(line, format!("header must be exactly `t,H` or `x,F`, found `{found}`"))),
    };
    if let Some(requested) = domain.filter(|&d| d != declared) {
        return Err(SampleError::DomainMismatch {
            found,
            declared,
            requested,
        });
    }

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for record in records {
        let record = record.map_err(|e| at(csv_line(&e), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(at(line, format!("expected 2 fields, found {}", record.len())));
        }
        let parse = |s: &str| -> Result<f64, SampleError> {
            let v: f64 = s
                .parse()
                .map_err(|_| at(line, format!("`{s}` is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(at(line, format!("non-finite value `{s}`")))
            }
        };
        let (x, y) = (parse(&record[0])?, parse(&record[1])?);
        if declared == Domain::PositiveRatios && x <= 0.0 {
            return Err(at(line, format!("ratio abscissa must be positive, found {x}")));
        }
        if let Some(&prev) = xs.last() {
            if x <= prev {
                return Err(at(line, format!("abscissas must increase strictly: {x} after {prev}")));
            }
        }
        xs.push(x);
        ys.push(y);
    }
    Ok(FunctionHandle::sample_table(declared, xs, ys)?)
}

fn csv_line(e: &csv::Error) -> u64 {
    e.position().map_or(0, |p| p.line())
}
