//! Configuration files, the cotype table and the artifact formats.

pub mod artifacts;
pub mod config;
pub mod cotype;
pub mod report;

pub use artifacts::{
    format_float, input_digest, read_csv, read_jsonl, run_records, write_csv, write_jsonl,
    CsvArtifact, Record, RunRecord, CSV_COLUMNS,
};
pub use config::{ConfigFile, ConfigOverrides};
pub use cotype::{CotypeTable, BUILTIN_TABLE};
pub use report::{build_report, merge_records, Report, ReportRow};
