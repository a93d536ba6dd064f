//! Municipality-table ingestion, synthetic data, end-to-end analysis runs
//! and report emission.

// `!(a >= b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod ingest;
pub mod report;
pub mod schema;
pub mod svg;
pub mod synth;

pub use analysis::{run_analysis, AlgorithmConfig, AnalysisConfig, RunReport, Stages};
pub use error::{InputError, PipelineError, Result};
pub use ingest::{ingest_csv, ingest_reader, write_csv, Dataset, Fingerprint};
pub use report::{emit_report, Format};
pub use schema::MunicipalityRecord;
pub use synth::{synthesize, synthesize_records, synthesize_with, SynthParams, Synthetic};
