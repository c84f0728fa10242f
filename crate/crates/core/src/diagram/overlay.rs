use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const OVERLAY_HEADER: [&str; 2] = ["rc_m", "lambda_per_s"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlayKind {
    ExcludedAbove,
    ExcludedBelow,
    ExcludedRegion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlaySample {
    pub rc_m: f64,
    pub lambda_per_s: f64,
}

/// Third-party bound drawn on the diagram as data only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlayBound {
    pub label: String,
    pub kind: OverlayKind,
    pub samples: Vec<OverlaySample>,
    pub source: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OverlayMeta {
    label: String,
    kind: OverlayKind,
    source: String,
}

fn parse_error(path: &Path, message: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message,
    }
}

/// Parses one `rc_m,lambda_per_s` table. Every malformed row is reported.
pub fn parse_overlay_csv(path: &Path, text: &str) -> Result<Vec<OverlaySample>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(parse_error(path, format!("line 1: {e}"))),
        None => {
            return Err(parse_error(
                path,
                "empty file, expected header rc_m,lambda_per_s".into(),
            ))
        }
    };
    if header.iter().collect::<Vec<_>>() != OVERLAY_HEADER {
        return Err(parse_error(
            path,
            format!(
                "line 1: expected header rc_m,lambda_per_s, found {:?}",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut samples = Vec::new();
    let mut problems = Vec::new();
    let mut previous: Option<f64> = None;
    for record in records {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                problems.push(e.to_string());
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            problems.push(format!(
                "line {line}: expected 2 fields, found {}",
                record.len()
            ));
            continue;
        }
        let parsed: Vec<Option<f64>> = record.iter().map(|f| f.parse::<f64>().ok()).collect();
        let (rc, lambda) = match (parsed[0], parsed[1]) {
            (Some(rc), Some(l)) => (rc, l),
            _ => {
                problems.push(format!(
                    "line {line}: non-numeric value in {:?}",
                    record.iter().collect::<Vec<_>>().join(",")
                ));
                continue;
            }
        };
        if !(rc > 0.0 && lambda > 0.0 && rc.is_finite() && lambda.is_finite()) {
            problems.push(format!("line {line}: values must be positive and finite"));
            continue;
        }
        if let Some(prev) = previous {
            if rc <= prev {
                problems.push(format!(
                    "line {line}: rc_m {rc:e} not above previous {prev:e} (unsorted)"
                ));
            }
        }
        previous = Some(rc);
        samples.push(OverlaySample {
            rc_m: rc,
            lambda_per_s: lambda,
        });
    }
    if !problems.is_empty() {
        return Err(parse_error(path, problems.join("; ")));
    }
    if samples.is_empty() {
        return Err(parse_error(path, "no data rows".into()));
    }
    Ok(samples)
}

pub fn load_overlay(csv_path: &Path) -> Result<OverlayBound> {
    let meta_path = csv_path.with_extension("json");
    let meta_text = fs::read_to_string(&meta_path)
        .map_err(|e| parse_error(&meta_path, format!("cannot read overlay metadata: {e}")))?;
    let meta: OverlayMeta =
        serde_json::from_str(&meta_text).map_err(|e| parse_error(&meta_path, e.to_string()))?;
    let text = fs::read_to_string(csv_path)?;
    Ok(OverlayBound {
        label: meta.label,
        kind: meta.kind,
        samples: parse_overlay_csv(csv_path, &text)?,
        source: meta.source,
    })
}

/// Loads every `*.csv` in `dir` (sorted by file name) with its `*.json`
/// sidecar.
pub fn load_overlays(dir: &Path) -> Result<Vec<OverlayBound>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "csv"));
    paths.sort();
    paths.iter().map(|p| load_overlay(p)).collect()
}
