//! Sweep results as CSV, one row per SNR point.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sweep::SweepRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 16] = [
    "code",
    "stage1",
    "wsd_r",
    "wsd_m",
    "wsd_J",
    "L_init",
    "snr_db",
    "trials",
    "errors",
    "bler",
    "bler_lo",
    "bler_hi",
    "p_act",
    "ed_units",
    "avg_iters",
    "seed",
];

/// Parsed CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub code: String,
    pub stage1: String,
    pub wsd_r: usize,
    pub wsd_m: usize,
    #[serde(rename = "wsd_J")]
    pub wsd_j: usize,
    #[serde(rename = "L_init")]
    pub l_init: usize,
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub bler: f64,
    pub bler_lo: f64,
    pub bler_hi: f64,
    pub p_act: f64,
    pub ed_units: f64,
    pub avg_iters: f64,
    pub seed: u64,
}

/// Formats like C's `%g`: 6 significant digits, trailing zeros dropped,
/// exponent form outside `[1e-4, 1e6)`.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn record_fields(r: &SweepRecord) -> [String; 16] {
    [
        r.code.clone(),
        r.stage1.clone(),
        r.wsd_r.to_string(),
        r.wsd_m.to_string(),
        r.wsd_j.to_string(),
        r.l_init.to_string(),
        format_g(r.snr_db),
        r.trials.to_string(),
        r.errors.to_string(),
        format_g(r.bler),
        format_g(r.bler_lo),
        format_g(r.bler_hi),
        format_g(r.p_act),
        format_g(r.ed_units),
        format_g(r.avg_iters),
        r.seed.to_string(),
    ]
}

pub fn write_csv(records: &[SweepRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in records {
        w.write_record(record_fields(r)).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(records: &[SweepRecord], path: impl AsRef<Path>) -> Result<()> {
    write_csv(records, File::create(path)?)
}

pub fn parse_csv(input: impl Read) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r
        .headers()
        .map_err(|e| Error::Config(format!("bad CSV header: {e}")))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config(
            "CSV header does not match the sweep schema".into(),
        ));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Config(format!("bad CSV row: {e}"))))
        .collect()
}
