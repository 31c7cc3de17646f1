use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use summability::bounds::{AggregateBounds, BoundResult, IndexQuery};
use summability::experiments::{EstimateSummary, Preset, Verdict};
use summability::io::{format_float, Report};
use summability::numerics::{FormHeader, NormEstimate};

use crate::args::Format;

/// Text for stdout plus lines for stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

impl Output {
    fn text(stdout: String) -> Self {
        Output {
            stdout,
            warnings: Vec::new(),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Left-aligned columns separated by two spaces; the first row is the
/// header.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn tabular(format: Format, rows: Vec<Vec<String>>) -> String {
    match format {
        Format::Csv => csv(&rows),
        _ => table(&rows),
    }
}

fn num(x: f64) -> String {
    // Short form for tables, full precision is in the JSON and CSV output.
    let r = format!("{x}");
    if r.len() <= 12 {
        r
    } else {
        format!("{x:.10}")
    }
}

fn bound_row(label: &str, b: &BoundResult, format: Format) -> Vec<String> {
    vec![
        label.to_string(),
        if format == Format::Csv {
            format_float(b.value)
        } else {
            num(b.value)
        },
        format!("{:?}", b.direction).to_lowercase(),
        b.region.clone(),
        b.citation.clone(),
    ]
}

fn header_row() -> Vec<String> {
    ["bound", "value", "direction", "region", "citation"]
        .map(String::from)
        .to_vec()
}

pub fn bounds(format: Format, query: &IndexQuery, agg: &AggregateBounds) -> Output {
    if format == Format::Json {
        #[derive(Serialize)]
        struct Out<'a> {
            query: &'a IndexQuery,
            bounds: &'a AggregateBounds,
        }
        return Output::text(json(&Out { query, bounds: agg }));
    }
    let mut rows = vec![header_row()];
    for (label, b) in [("exact", &agg.exact), ("lower", &agg.lower), ("upper", &agg.upper)] {
        if let Some(b) = b {
            rows.push(bound_row(label, b, format));
        }
    }
    for b in &agg.applied {
        rows.push(bound_row("applied", b, format));
    }
    let mut out = Output::text(tabular(format, rows));
    if agg.is_empty() {
        out.warnings.push("no known bound applies to this query".into());
    }
    out
}

pub fn single_bound(format: Format, b: &BoundResult) -> Output {
    if format == Format::Json {
        return Output::text(json(b));
    }
    Output::text(tabular(format, vec![header_row(), bound_row("result", b, format)]))
}

pub fn formula_value<T: Serialize>(format: Format, v: &T) -> Output {
    let value = serde_json::to_value(v).expect("serializable");
    if format == Format::Json {
        return Output::text(json(&value));
    }
    let name = value["formula"].as_str().unwrap_or_default().to_string();
    let x = value["value"].as_f64().unwrap_or(f64::NAN);
    Output::text(tabular(
        format,
        vec![
            vec!["formula".into(), "value".into()],
            vec![name, format_float(x)],
        ],
    ))
}

pub fn header(format: Format, h: &FormHeader, path: &Path) -> Output {
    if format == Format::Json {
        return Output::text(json(h));
    }
    let exps: Vec<String> = h.exponents.iter().map(|e| e.to_string()).collect();
    Output::text(tabular(
        format,
        vec![
            ["path", "order", "dim", "exponents", "coefficients", "seed"]
                .map(String::from)
                .to_vec(),
            vec![
                path.display().to_string(),
                h.order.to_string(),
                h.dim.to_string(),
                exps.join(" "),
                h.coefficients.clone(),
                h.seed.map(|s| s.to_string()).unwrap_or_default(),
            ],
        ],
    ))
}

pub fn norm(format: Format, e: &NormEstimate) -> Output {
    if format == Format::Json {
        return Output::text(json(e));
    }
    Output::text(tabular(
        format,
        vec![
            ["value", "kind", "exact", "restarts", "converged"]
                .map(String::from)
                .to_vec(),
            vec![
                format_float(e.value),
                format!("{:?}", e.kind),
                e.is_exact().to_string(),
                e.restarts_used.to_string(),
                e.converged.to_string(),
            ],
        ],
    ))
}

pub fn estimate(format: Format, s: &EstimateSummary, artifacts: &[&Path]) -> Output {
    let mut out = if format == Format::Json {
        Output::text(json(s))
    } else {
        let mut rows = vec![["fit", "seed", "slope", "intercept", "residual_rms", "n_used"]
            .map(String::from)
            .to_vec()];
        let mut push = |label: &str, seed: Option<u64>, f: &summability::experiments::ExponentFit| {
            rows.push(vec![
                label.to_string(),
                seed.map(|s| s.to_string()).unwrap_or_default(),
                format_float(f.slope),
                format_float(f.intercept),
                format_float(f.residual_rms),
                f.n_used.to_string(),
            ])
        };
        for f in &s.fits {
            push("series", f.seed, &f.fit);
        }
        push("median", None, &s.median);
        let mut text = tabular(format, rows);
        if format == Format::Table {
            if let Some(v) = &s.verification {
                let shown = |b: &Option<BoundResult>| {
                    b.as_ref().map(|b| num(b.value)).unwrap_or_else(|| "-".into())
                };
                let _ = writeln!(
                    text,
                    "verdict: {} (slope {}, exact {}, upper {}, tolerance {})",
                    v.verdict,
                    num(s.median.slope),
                    shown(&v.theoretical.exact),
                    shown(&v.theoretical.upper),
                    v.tolerance
                );
            }
        }
        Output::text(text)
    };
    out.warnings.extend(s.region_warnings.iter().map(|w| format!("region check: {w}")));
    if format == Format::Table {
        for a in artifacts {
            out.warnings.push(format!("wrote {}", a.display()));
        }
    }
    out
}

pub fn verdict(
    format: Format,
    slope: f64,
    agg: &AggregateBounds,
    verdict: Verdict,
    tolerance: f64,
) -> Output {
    if format == Format::Json {
        #[derive(Serialize)]
        struct Out<'a> {
            slope: f64,
            verdict: Verdict,
            tolerance: f64,
            bounds: &'a AggregateBounds,
        }
        return Output::text(json(&Out {
            slope,
            verdict,
            tolerance,
            bounds: agg,
        }));
    }
    let value = |b: &Option<BoundResult>| b.as_ref().map(|b| format_float(b.value)).unwrap_or_default();
    Output::text(tabular(
        format,
        vec![
            ["slope", "verdict", "lower", "exact", "upper", "tolerance"]
                .map(String::from)
                .to_vec(),
            vec![
                format_float(slope),
                verdict.to_string(),
                value(&agg.lower),
                value(&agg.exact),
                value(&agg.upper),
                format_float(tolerance),
            ],
        ],
    ))
}

pub fn presets(format: Format, presets: &[Preset]) -> Output {
    if format == Format::Json {
        return Output::text(presets.iter().map(json).collect());
    }
    let mut rows = vec![["name", "scenario", "m", "p", "q", "norm", "seeds", "description"]
        .map(String::from)
        .to_vec()];
    for p in presets {
        let c = &p.config;
        rows.push(vec![
            p.name.clone(),
            c.scenario.name().to_string(),
            c.m.to_string(),
            c.p.to_string(),
            c.q.to_string(),
            format!("{:?}", c.norm_method).to_lowercase(),
            c.seeds.len().to_string(),
            p.description.clone(),
        ]);
    }
    Output::text(tabular(format, rows))
}

pub fn report(format: Format, r: &Report) -> Output {
    let mut out = if format == Format::Json {
        Output::text(json(r))
    } else {
        let opt = |x: Option<f64>| x.map(format_float).unwrap_or_default();
        let mut rows = vec![[
            "scenario", "seeds", "median_slope", "lower", "exact", "upper", "tolerance", "verdict",
            "flag",
        ]
        .map(String::from)
        .to_vec()];
        for row in &r.rows {
            rows.push(vec![
                row.scenario.clone(),
                row.seeds.len().to_string(),
                format_float(row.median_slope),
                opt(row.lower),
                opt(row.exact),
                opt(row.upper),
                format_float(row.tolerance),
                row.verdict.map(|v| v.to_string()).unwrap_or_else(|| "unverified".into()),
                if row.flagged { "FLAGGED".into() } else { String::new() },
            ]);
        }
        Output::text(tabular(format, rows))
    };
    if r.duplicates_removed > 0 {
        out.warnings
            .push(format!("{} duplicate record(s) merged", r.duplicates_removed));
    }
    for row in r.flagged() {
        out.warnings.push(format!(
            "{}: verdict {}",
            row.scenario,
            row.verdict.map(|v| v.to_string()).unwrap_or_default()
        ));
    }
    out
}
