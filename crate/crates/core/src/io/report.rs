//! Merging estimate artifacts into one table.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::artifacts::{read_jsonl, Record};
use crate::experiments::{EstimateSummary, Verdict};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario: String,
    pub version: String,
    pub seeds: Vec<Option<u64>>,
    pub median_slope: f64,
    pub tolerance: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub exact: Option<f64>,
    pub verdict: Option<Verdict>,
    /// Set when the run was verified and the verdict is not `consistent`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub series_records: usize,
    pub duplicates_removed: usize,
}

impl Report {
    pub fn flagged(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.flagged)
    }
}

fn row(version: &str, summary: &EstimateSummary) -> ReportRow {
    let v = summary.verification.as_ref();
    let value = |f: fn(&crate::bounds::AggregateBounds) -> Option<f64>| {
        v.and_then(|r| f(&r.theoretical))
    };
    let verdict = v.map(|r| r.verdict);
    ReportRow {
        scenario: summary.scenario.clone(),
        version: version.to_string(),
        seeds: summary.fits.iter().map(|f| f.seed).collect(),
        median_slope: summary.median.slope,
        tolerance: summary.tolerance,
        lower: value(|b| b.lower.as_ref().map(|x| x.value)),
        upper: value(|b| b.upper.as_ref().map(|x| x.value)),
        exact: value(|b| b.exact.as_ref().map(|x| x.value)),
        verdict,
        flagged: verdict.is_some_and(|v| v != Verdict::Consistent),
    }
}

/// Merges records, dropping exact duplicates. Rows are sorted by scenario
/// and then by their serialized form, so the report does not depend on the
/// order of the inputs.
pub fn merge_records(records: Vec<Record>) -> Result<Report> {
    let mut seen = BTreeSet::new();
    let mut duplicates_removed = 0;
    let mut series_records = 0;
    let mut rows = Vec::new();
    for r in records {
        let key = serde_json::to_string(&r).map_err(|e| Error::Data(e.to_string()))?;
        if !seen.insert(key) {
            duplicates_removed += 1;
            continue;
        }
        match &r {
            Record::Series { .. } => series_records += 1,
            Record::Summary {
                version, summary, ..
            } => rows.push(row(version, summary)),
        }
    }
    rows.sort_by(|a, b| {
        a.scenario.cmp(&b.scenario).then_with(|| {
            let ka = serde_json::to_string(a).unwrap_or_default();
            let kb = serde_json::to_string(b).unwrap_or_default();
            ka.cmp(&kb)
        })
    });
    Ok(Report {
        rows,
        series_records,
        duplicates_removed,
    })
}

pub fn build_report(paths: &[&Path]) -> Result<Report> {
    if paths.is_empty() {
        return Err(Error::Parameter("report needs at least one artifact".into()));
    }
    let mut records = Vec::new();
    for path in paths {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        records.extend(read_jsonl(
            std::io::BufReader::new(file),
            &path.display().to_string(),
        )?);
    }
    merge_records(records)
}
