//! On-disk artifacts: CSV tables, JSON-lines records and the run record.
//!
//! The CSV and JSON-lines files depend only on the inputs, so two runs with
//! equal inputs produce byte-identical files. The wall-clock timestamp lives
//! in the separate [`RunRecord`].

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::experiments::{
    EstimateSummary, ExperimentConfig, ExponentFit, RatioPoint, RatioSeries, SeriesFit,
};
use crate::numerics::NormKind;
use crate::{Error, Result, VERSION};

pub const CSV_COLUMNS: [&str; 16] = [
    "version",
    "scenario",
    "record",
    "seed",
    "n",
    "mixed_sum",
    "norm",
    "norm_kind",
    "converged",
    "weak_product",
    "ratio",
    "slope",
    "intercept",
    "residual_rms",
    "n_used",
    "tolerance",
];

/// Seventeen significant digits, enough to read back the same `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn norm_kind_name(kind: NormKind) -> &'static str {
    match kind {
        NormKind::ExactAnalytic => "exact_analytic",
        NormKind::AscentLowerEstimate => "ascent_lower_estimate",
        NormKind::Bruteforce => "bruteforce",
    }
}

fn parse_norm_kind(s: &str) -> Option<NormKind> {
    match s {
        "exact_analytic" => Some(NormKind::ExactAnalytic),
        "ascent_lower_estimate" => Some(NormKind::AscentLowerEstimate),
        "bruteforce" => Some(NormKind::Bruteforce),
        _ => None,
    }
}

fn opt_seed(seed: Option<u64>) -> String {
    seed.map(|s| s.to_string()).unwrap_or_default()
}

fn fit_cells(fit: &ExponentFit) -> [String; 4] {
    [
        format_float(fit.slope),
        format_float(fit.intercept),
        format_float(fit.residual_rms),
        fit.n_used.to_string(),
    ]
}

/// Writes one `point` row per grid point, one `fit` row per series and a
/// final `median` row.
pub fn write_csv<W: Write>(
    out: W,
    series: &[RatioSeries],
    summary: &EstimateSummary,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    let blank = String::new;
    for s in series {
        for p in &s.points {
            w.write_record([
                VERSION.to_string(),
                s.scenario.clone(),
                "point".into(),
                opt_seed(s.seed),
                p.n.to_string(),
                format_float(p.mixed_sum),
                format_float(p.norm_estimate),
                norm_kind_name(p.norm_kind).into(),
                p.norm_converged.to_string(),
                format_float(p.weak_norm_product),
                format_float(p.ratio),
                blank(),
                blank(),
                blank(),
                blank(),
                blank(),
            ])
            .map_err(csv_err)?;
        }
    }
    let mut fit_row = |record: &str, seed: Option<u64>, fit: &ExponentFit| {
        let [slope, intercept, rms, used] = fit_cells(fit);
        w.write_record([
            VERSION.to_string(),
            summary.scenario.clone(),
            record.into(),
            opt_seed(seed),
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
            slope,
            intercept,
            rms,
            used,
            format_float(summary.tolerance),
        ])
        .map_err(csv_err)
    };
    for f in &summary.fits {
        fit_row("fit", f.seed, &f.fit)?;
    }
    fit_row("median", None, &summary.median)?;
    w.flush()?;
    Ok(())
}

/// The contents of a CSV artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvArtifact {
    pub version: String,
    pub series: Vec<RatioSeries>,
    pub fits: Vec<SeriesFit>,
    pub median: Option<ExponentFit>,
    pub tolerance: Option<f64>,
}

struct Row<'a> {
    record: &'a csv::StringRecord,
    line: u64,
}

impl Row<'_> {
    fn cell(&self, column: &str) -> &str {
        let i = CSV_COLUMNS.iter().position(|c| *c == column).expect("known column");
        self.record.get(i).unwrap_or("")
    }

    fn err(&self, column: &str, what: &str) -> Error {
        Error::Schema(format!(
            "line {}: field `{column}`: {what} (got {:?})",
            self.line,
            self.cell(column)
        ))
    }

    fn float(&self, column: &str) -> Result<f64> {
        let s = self.cell(column);
        match s {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            _ => s.parse().map_err(|_| self.err(column, "expected a number")),
        }
    }

    fn int<T: std::str::FromStr>(&self, column: &str) -> Result<T> {
        self.cell(column)
            .parse()
            .map_err(|_| self.err(column, "expected a non-negative integer"))
    }

    fn seed(&self) -> Result<Option<u64>> {
        if self.cell("seed").is_empty() {
            Ok(None)
        } else {
            self.int("seed").map(Some)
        }
    }

    fn fit(&self) -> Result<ExponentFit> {
        Ok(ExponentFit {
            slope: self.float("slope")?,
            intercept: self.float("intercept")?,
            residual_rms: self.float("residual_rms")?,
            n_used: self.int("n_used")?,
        })
    }
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<CsvArtifact> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Schema(format!("csv header: {e}")))?
        .clone();
    if headers.iter().ne(CSV_COLUMNS.iter().copied()) {
        let missing: Vec<&str> = CSV_COLUMNS
            .iter()
            .copied()
            .filter(|c| !headers.iter().any(|h| h == *c))
            .collect();
        return Err(Error::Schema(format!(
            "csv header does not match; missing or misplaced field(s): {}",
            if missing.is_empty() { "order".to_string() } else { missing.join(", ") }
        )));
    }
    let mut out = CsvArtifact {
        version: String::new(),
        series: Vec::new(),
        fits: Vec::new(),
        median: None,
        tolerance: None,
    };
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Schema(format!("csv: {e}")))?;
        let row = Row {
            record: &record,
            line: i as u64 + 2,
        };
        if out.version.is_empty() {
            out.version = row.cell("version").to_string();
        }
        match row.cell("record") {
            "point" => {
                let seed = row.seed()?;
                let scenario = row.cell("scenario").to_string();
                let point = RatioPoint {
                    n: row.int("n")?,
                    mixed_sum: row.float("mixed_sum")?,
                    norm_estimate: row.float("norm")?,
                    norm_kind: parse_norm_kind(row.cell("norm_kind"))
                        .ok_or_else(|| row.err("norm_kind", "unknown norm kind"))?,
                    norm_converged: row.int("converged")?,
                    weak_norm_product: row.float("weak_product")?,
                    ratio: row.float("ratio")?,
                };
                match out
                    .series
                    .iter_mut()
                    .find(|s| s.seed == seed && s.scenario == scenario)
                {
                    Some(s) => s.points.push(point),
                    None => out.series.push(RatioSeries {
                        scenario,
                        seed,
                        points: vec![point],
                    }),
                }
            }
            "fit" => out.fits.push(SeriesFit {
                seed: row.seed()?,
                fit: row.fit()?,
            }),
            "median" => {
                out.median = Some(row.fit()?);
                out.tolerance = Some(row.float("tolerance")?);
            }
            _ => return Err(row.err("record", "expected point, fit or median")),
        }
    }
    Ok(out)
}

/// One line of a JSON-lines artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case", deny_unknown_fields)]
pub enum Record {
    Series {
        version: String,
        series: RatioSeries,
    },
    Summary {
        version: String,
        config: ExperimentConfig,
        summary: EstimateSummary,
    },
}

impl Record {
    pub fn version(&self) -> &str {
        match self {
            Record::Series { version, .. } | Record::Summary { version, .. } => version,
        }
    }
}

/// The records of one estimate run: every series, then the summary.
pub fn run_records(
    config: &ExperimentConfig,
    series: &[RatioSeries],
    summary: &EstimateSummary,
) -> Vec<Record> {
    let mut out: Vec<Record> = series
        .iter()
        .map(|s| Record::Series {
            version: VERSION.to_string(),
            series: s.clone(),
        })
        .collect();
    out.push(Record::Summary {
        version: VERSION.to_string(),
        config: config.clone(),
        summary: summary.clone(),
    });
    out
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[Record]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(|e| Error::Io(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a JSON-lines artifact; `source` names the input in error messages.
/// Blank lines are skipped.
pub fn read_jsonl<R: BufRead>(input: R, source: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line)
            .map_err(|e| Error::Schema(format!("{source}:{}: {e}", i + 1)))?;
        out.push(record);
    }
    Ok(out)
}

/// Hex SHA-256 of the canonical JSON of `input`.
///
/// Struct fields serialize in declaration order and floats in their
/// shortest round-trip form, so the digest does not depend on the platform.
pub fn input_digest<T: Serialize>(input: &T) -> Result<String> {
    let bytes = serde_json::to_vec(input).map_err(|e| Error::Data(e.to_string()))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Provenance of one command-line invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub timestamp: String,
    pub version: String,
    pub invocation: Vec<String>,
    pub input_digest: String,
    pub payload: serde_json::Value,
}

impl RunRecord {
    pub fn new<I: Serialize, P: Serialize>(
        timestamp: String,
        invocation: Vec<String>,
        input: &I,
        payload: &P,
    ) -> Result<Self> {
        Ok(RunRecord {
            timestamp,
            version: VERSION.to_string(),
            invocation,
            input_digest: input_digest(input)?,
            payload: serde_json::to_value(payload).map_err(|e| Error::Data(e.to_string()))?,
        })
    }
}
