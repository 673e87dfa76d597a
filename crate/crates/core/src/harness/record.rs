//! Trial records and their CSV encoding.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Exact CSV header.
pub const CSV_HEADER: [&str; 16] = [
    "model",
    "n",
    "d",
    "r",
    "k",
    "noise",
    "gamma",
    "rho",
    "replicate",
    "seed",
    "err_2inf",
    "err_frob",
    "lower_bound",
    "deloc_scaled_max",
    "runtime_ms",
    "status",
];

/// One Monte Carlo outcome for a single embedding dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub model: String,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub k: i64,
    pub noise: String,
    pub gamma: Option<f64>,
    pub rho: f64,
    pub replicate: usize,
    pub seed: u64,
    pub err_2inf: Option<f64>,
    pub err_frob: Option<f64>,
    pub lower_bound: Option<f64>,
    pub deloc_scaled_max: Option<f64>,
    pub runtime_ms: Option<f64>,
    /// `ok`, or `failed: <reason>`.
    pub status: String,
}

impl TrialRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Sort key: condition coordinates then replicate.
    pub fn sort_key(&self) -> (String, String, u64, usize, usize, usize) {
        (
            self.model.clone(),
            self.noise.clone(),
            self.gamma.map_or(0, f64::to_bits),
            self.n,
            self.replicate,
            self.d,
        )
    }
}

/// 17 significant digits, scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn write_records<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.model.clone(),
            r.n.to_string(),
            r.d.to_string(),
            r.r.to_string(),
            r.k.to_string(),
            r.noise.clone(),
            opt(r.gamma),
            format_float(r.rho),
            r.replicate.to_string(),
            r.seed.to_string(),
            opt(r.err_2inf),
            opt(r.err_frob),
            opt(r.lower_bound),
            opt(r.deloc_scaled_max),
            opt(r.runtime_ms),
            r.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_string(records: &[TrialRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_records(&mut buf, records)?;
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers()?.clone();
    let got: Vec<&str> = header.iter().collect();
    if got != CSV_HEADER {
        let missing: Vec<&str> = CSV_HEADER.iter().copied().filter(|c| !got.contains(c)).collect();
        return Err(Error::Format(format!(
            "unexpected CSV header; missing columns: {}",
            if missing.is_empty() {
                "none (order differs)".to_string()
            } else {
                missing.join(", ")
            }
        )));
    }
    let mut out = Vec::new();
    for (row_idx, row) in rdr.records().enumerate() {
        let row = row?;
        let line = row_idx + 2;
        let field = |i: usize| row.get(i).unwrap_or("");
        let bad = |col: &str| Error::Format(format!("line {line}: bad value in column `{col}`"));
        let num = |i: usize| -> Result<f64> { field(i).parse().map_err(|_| bad(CSV_HEADER[i])) };
        let opt_num = |i: usize| -> Result<Option<f64>> {
            if field(i).is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        out.push(TrialRecord {
            model: field(0).to_string(),
            n: field(1).parse().map_err(|_| bad("n"))?,
            d: field(2).parse().map_err(|_| bad("d"))?,
            r: field(3).parse().map_err(|_| bad("r"))?,
            k: field(4).parse().map_err(|_| bad("k"))?,
            noise: field(5).to_string(),
            gamma: opt_num(6)?,
            rho: num(7)?,
            replicate: field(8).parse().map_err(|_| bad("replicate"))?,
            seed: field(9).parse().map_err(|_| bad("seed"))?,
            err_2inf: opt_num(10)?,
            err_frob: opt_num(11)?,
            lower_bound: opt_num(12)?,
            deloc_scaled_max: opt_num(13)?,
            runtime_ms: opt_num(14)?,
            status: field(15).to_string(),
        });
    }
    Ok(out)
}
