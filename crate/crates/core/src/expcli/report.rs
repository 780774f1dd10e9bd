//! Report serialization.
//!
//! CSV columns per experiment, in order:
//!
//! ```text
//! E1  polynomial,classification,reason,numerator_terms
//! E2  pin_index,pin_x,pin_y,triangle_area,inner_count,outer_count,exponent
//! E3  projection,inner_count,outer_count,exponent
//! E4  polynomial,scale_k,image_inner,image_outer,image_exponent,energy,
//!     energy_exponent,epsilon_hat,audit_a_ratio,audit_b_ratio,cs_bound
//! E5  set,r,fraction
//! ```
//!
//! E2 pins 0..=2 are the collinear triple, 3..=5 the triangle triple. JSON
//! carries the whole report (config echo, rows, metrics, audits, verdicts).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::run::{ExperimentReport, Rows};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format `{s}` (csv or json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

pub const E1_COLUMNS: [&str; 4] = ["polynomial", "classification", "reason", "numerator_terms"];
pub const E2_COLUMNS: [&str; 7] =
    ["pin_index", "pin_x", "pin_y", "triangle_area", "inner_count", "outer_count", "exponent"];
pub const E3_COLUMNS: [&str; 4] = ["projection", "inner_count", "outer_count", "exponent"];
pub const E4_COLUMNS: [&str; 11] = [
    "polynomial",
    "scale_k",
    "image_inner",
    "image_outer",
    "image_exponent",
    "energy",
    "energy_exponent",
    "epsilon_hat",
    "audit_a_ratio",
    "audit_b_ratio",
    "cs_bound",
];
pub const E5_COLUMNS: [&str; 3] = ["set", "r", "fraction"];

fn csv_of<T: Serialize>(header: &[&str], rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

/// Deterministic bytes for a report.
pub fn emit_report(r: &ExperimentReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(r).map_err(|e| Error::Io(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => match &r.rows {
            Rows::E1(rows) => csv_of(&E1_COLUMNS, rows),
            Rows::E2(rows) => csv_of(&E2_COLUMNS, rows),
            Rows::E3(rows) => csv_of(&E3_COLUMNS, rows),
            Rows::E4(rows) => csv_of(&E4_COLUMNS, rows),
            Rows::E5(rows) => csv_of(&E5_COLUMNS, rows),
        },
    }
}

pub fn parse_report_json(bytes: &[u8]) -> Result<ExperimentReport> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
}
