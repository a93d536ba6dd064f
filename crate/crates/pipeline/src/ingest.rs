//! CSV ingestion and canonical re-emission.

use std::collections::{HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use clustat_core::FeatureMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_error, InputError, PipelineError, Result};
use crate::schema::{MunicipalityRecord, COLUMNS, CORRELATION_COLUMNS, NAME_COLUMN};

/// Identifies the exact table a run was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub rows: usize,
    pub columns: Vec<String>,
    /// SHA-256 of the canonical CSV rendering.
    pub sha256: String,
}

/// A validated municipality table.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub records: Vec<MunicipalityRecord>,
    /// All 16 columns, rows named after the municipalities.
    pub matrix: FeatureMatrix<f64>,
}

impl Dataset {
    pub fn from_records(records: Vec<MunicipalityRecord>) -> Result<Self> {
        if records.len() < 2 {
            return Err(InputError::TooFewRows(records.len()).into());
        }
        let mut seen = HashSet::new();
        for r in &records {
            if !seen.insert(r.name.as_str()) {
                return Err(InputError::DuplicateName(r.name.clone()).into());
            }
        }
        let matrix = FeatureMatrix::new(
            records.iter().map(|r| r.values().to_vec()).collect(),
            records.iter().map(|r| r.name.clone()).collect(),
            COLUMNS.iter().map(|c| c.to_string()).collect(),
        )
        .map_err(PipelineError::numeric("building feature matrix"))?;
        Ok(Self { records, matrix })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The correlation variables, IDEB years replaced by their mean.
    pub fn correlation_matrix(&self) -> FeatureMatrix<f64> {
        FeatureMatrix::new(
            self.records
                .iter()
                .map(|r| r.correlation_values().to_vec())
                .collect(),
            self.records.iter().map(|r| r.name.clone()).collect(),
            CORRELATION_COLUMNS.iter().map(|c| c.to_string()).collect(),
        )
        .expect("validated records form a valid matrix")
    }

    pub fn to_csv(&self) -> String {
        write_csv(&self.records)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint {
            rows: self.len(),
            columns: COLUMNS.iter().map(|c| c.to_string()).collect(),
            sha256: hex::encode(Sha256::digest(self.to_csv().as_bytes())),
        }
    }
}

pub fn ingest_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(io_error(path))?;
    ingest_reader(file)
}

/// Parses and validates a table. Columns are matched by exact header name;
/// extra columns are ignored.
pub fn ingest_reader(reader: impl Read) -> Result<Dataset> {
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv.headers().map_err(InputError::from)?.clone();
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let position = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| PipelineError::from(InputError::MissingColumn(name.to_string())))
    };
    let name_at = position(NAME_COLUMN)?;
    let positions = COLUMNS
        .iter()
        .map(|c| position(c))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let row = row.map_err(InputError::from)?;
        let line = i + 1;
        let mut values = [0.0; 16];
        for ((slot, &at), column) in values.iter_mut().zip(&positions).zip(COLUMNS) {
            let cell = row.get(at).unwrap_or("");
            *slot = cell.parse::<f64>().map_err(|_| InputError::NonNumeric {
                row: line,
                column: column.to_string(),
                value: cell.to_string(),
            })?;
        }
        let name = row.get(name_at).unwrap_or("").to_string();
        records.push(MunicipalityRecord::from_values(name, &values, line)?);
    }
    Dataset::from_records(records)
}

/// Canonical CSV: `NAME` then the 16 columns, numbers in shortest
/// round-tripping decimal form.
pub fn write_csv(records: &[MunicipalityRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once(NAME_COLUMN).chain(COLUMNS).collect();
    w.write_record(&header).expect("writing to memory");
    for r in records {
        w.write_record(r.cells()).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}
