//! Plain-text dense matrix files.
//!
//! ```text
//! rdpg-matrix rows=3 cols=3 kind=binary symmetric=1
//! 0 1 0
//! 1 0 1
//! 0 1 0
//! ```
//!
//! The header is one line of `key=value` pairs after the `rdpg-matrix` tag;
//! `rows` and `cols` are required, `kind` and `symmetric` are informational.
//! Each following line is one row of whitespace-separated values printed in
//! shortest round-trip form, so reading a written file restores every bit.
//! Lines starting with `#` are ignored.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use faer::Mat;

use crate::error::{Error, Result};
use crate::linalg;

pub const MAGIC: &str = "rdpg-matrix";

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub matrix: Mat<f64>,
    /// `weighted`, `binary`, `latent`, `embedding` or `dense`.
    pub kind: String,
}

pub fn write_matrix<W: Write>(mut out: W, m: &Mat<f64>, kind: &str) -> Result<()> {
    let symmetric = m.nrows() == m.ncols() && linalg::is_bit_symmetric(m.as_ref());
    writeln!(
        out,
        "{MAGIC} rows={} cols={} kind={kind} symmetric={}",
        m.nrows(),
        m.ncols(),
        u8::from(symmetric)
    )?;
    let mut line = String::new();
    for i in 0..m.nrows() {
        line.clear();
        for j in 0..m.ncols() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&m[(i, j)].to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_matrix(path: &Path, m: &Mat<f64>, kind: &str) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_matrix(std::io::BufWriter::new(f), m, kind)
}

pub fn read_matrix<R: Read>(input: R) -> Result<MatrixFile> {
    let mut lines = BufReader::new(input).lines().enumerate().filter(|(_, l)| {
        l.as_ref()
            .map_or(true, |s| !s.trim_start().starts_with('#') && !s.trim().is_empty())
    });
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Format("empty matrix file".to_string()))?;
    let header = header?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(Error::Format(format!("line 1: expected `{MAGIC}` header")));
    }
    let (mut rows, mut cols, mut kind) = (None, None, "dense".to_string());
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("header field `{p}` is not key=value")))?;
        let num = || {
            v.parse::<usize>()
                .map_err(|_| Error::Format(format!("header field `{p}`")))
        };
        match k {
            "rows" => rows = Some(num()?),
            "cols" => cols = Some(num()?),
            "kind" => kind = v.to_string(),
            _ => {}
        }
    }
    let rows = rows.ok_or_else(|| Error::Format("header lacks rows=".to_string()))?;
    let cols = cols.ok_or_else(|| Error::Format("header lacks cols=".to_string()))?;
    let mut m = Mat::<f64>::zeros(rows, cols);
    let mut seen = 0;
    for (idx, line) in lines {
        let line = line?;
        if seen == rows {
            return Err(Error::Format(format!("line {}: more than {rows} rows", idx + 1)));
        }
        let mut count = 0;
        for (j, tok) in line.split_whitespace().enumerate() {
            if j >= cols {
                return Err(Error::Format(format!("line {}: more than {cols} values", idx + 1)));
            }
            m[(seen, j)] = tok
                .parse()
                .map_err(|_| Error::Format(format!("line {}: bad number `{tok}`", idx + 1)))?;
            count += 1;
        }
        if count != cols {
            return Err(Error::Format(format!(
                "line {}: expected {cols} values, found {count}",
                idx + 1
            )));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::Format(format!("expected {rows} rows, found {seen}")));
    }
    Ok(MatrixFile { matrix: m, kind })
}

pub fn load_matrix(path: &Path) -> Result<MatrixFile> {
    let f = std::fs::File::open(path)?;
    read_matrix(f)
}
