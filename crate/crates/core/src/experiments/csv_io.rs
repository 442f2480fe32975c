//! Sweep CSV files.
//!
//! Layout: any number of `#`-prefixed metadata lines, one header row with
//! [`COLUMNS`], then one row per [`SweepRow`]. Floats are written with 17
//! significant digits so parsing reproduces every value exactly. Absent
//! Monte-Carlo columns are empty; a continuous quantizer is written `inf`.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::quantizer::QuantizerSpec;

use super::SweepRow;

pub const COLUMNS: [&str; 16] = [
    "n",
    "m",
    "k1",
    "k2",
    "snr_npl_db",
    "snr_pl_db",
    "snr_apl_db",
    "loss_pl_db",
    "loss_apl_db",
    "rate_npl",
    "rate_pl",
    "rate_apl",
    "mc_loss_db",
    "mc_stderr",
    "trials",
    "seed",
];

fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn fmt_opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

fn row_record(r: &SweepRow) -> [String; 16] {
    [
        r.n.to_string(),
        r.m.to_string(),
        r.k1.to_string(),
        r.k2.to_string(),
        fmt_f64(r.snr_npl_db),
        fmt_f64(r.snr_pl_db),
        fmt_f64(r.snr_apl_db),
        fmt_f64(r.loss_pl_db),
        fmt_f64(r.loss_apl_db),
        fmt_f64(r.rate_npl),
        fmt_f64(r.rate_pl),
        fmt_f64(r.rate_apl),
        fmt_opt(r.mc_loss_db, fmt_f64),
        fmt_opt(r.mc_stderr, fmt_f64),
        fmt_opt(r.trials, |t| t.to_string()),
        fmt_opt(r.seed, |s| s.to_string()),
    ]
}

/// Write metadata lines (each prefixed with `# `), the header and the rows.
pub fn write_csv<W: Write>(mut out: W, metadata: &[String], rows: &[SweepRow]) -> Result<()> {
    for line in metadata {
        writeln!(out, "# {line}")?;
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(COLUMNS)?;
    for r in rows {
        writer.write_record(row_record(r))?;
    }
    writer.flush()?;
    Ok(())
}

fn field(rec: &csv::StringRecord, idx: usize) -> &str {
    rec.get(idx).unwrap_or("")
}

fn parse<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    field(rec, idx)
        .trim()
        .parse::<T>()
        .map_err(|e| Error::CsvField {
            field: COLUMNS[idx].to_string(),
            reason: e.to_string(),
        })
}

fn parse_opt<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if field(rec, idx).trim().is_empty() {
        Ok(None)
    } else {
        parse(rec, idx).map(Some)
    }
}

fn parse_bits(rec: &csv::StringRecord, idx: usize) -> Result<QuantizerSpec> {
    field(rec, idx)
        .parse::<QuantizerSpec>()
        .map_err(|reason| Error::CsvField {
            field: COLUMNS[idx].to_string(),
            reason,
        })
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(Error::CsvField {
            field: "header".into(),
            reason: format!("expected {}", COLUMNS.join(",")),
        });
    }
    reader
        .records()
        .map(|rec| {
            let rec = rec?;
            Ok(SweepRow {
                n: parse(&rec, 0)?,
                m: parse(&rec, 1)?,
                k1: parse_bits(&rec, 2)?,
                k2: parse_bits(&rec, 3)?,
                snr_npl_db: parse(&rec, 4)?,
                snr_pl_db: parse(&rec, 5)?,
                snr_apl_db: parse(&rec, 6)?,
                loss_pl_db: parse(&rec, 7)?,
                loss_apl_db: parse(&rec, 8)?,
                rate_npl: parse(&rec, 9)?,
                rate_pl: parse(&rec, 10)?,
                rate_apl: parse(&rec, 11)?,
                mc_loss_db: parse_opt(&rec, 12)?,
                mc_stderr: parse_opt(&rec, 13)?,
                trials: parse_opt(&rec, 14)?,
                seed: parse_opt(&rec, 15)?,
            })
        })
        .collect()
}
