//! Report serialization. Numbers are written in shortest round-trip form, so
//! identical inputs give byte-identical output and re-reading a report
//! recovers the exact values.

use std::f64::consts::LN_2;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use lossinfo::{ExtendedReal, Partition};
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// An extended real: a JSON number when finite, `"inf"` or `"-inf"`
/// otherwise. `-0` is written as `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub ExtendedReal);

impl Num {
    pub fn finite(v: f64) -> Num {
        Num(ExtendedReal::from(v))
    }

    /// The same quantity in bits: `nats / ln 2`.
    pub fn bits(self) -> Num {
        match self.0 {
            ExtendedReal::Finite(v) => Num::finite(v / LN_2),
            inf => Num(inf),
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            ExtendedReal::Finite(v) => s.serialize_f64(v + 0.0),
            ExtendedReal::PosInf => s.serialize_str("inf"),
            ExtendedReal::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            ExtendedReal::Finite(v) => write_f64(f, v),
            other => write!(f, "{other}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Engine {
    pub name: &'static str,
    pub version: &'static str,
}

pub const ENGINE: Engine = Engine {
    name: "lossinfo",
    version: lossinfo::VERSION,
};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Block notation such as `[{0,1},{2}]`, atoms being row-major cell indices.
pub fn blocks(p: &Partition) -> String {
    p.to_string()
}

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-5, 1e16)` so tiny residuals stay short.
fn write_f64(f: &mut std::fmt::Formatter<'_>, v: f64) -> std::fmt::Result {
    let v = v + 0.0;
    if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        write!(f, "{v}")
    } else {
        write!(f, "{v:e}")
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `text` to `out`, or to stdout when `out` is `None`.
pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::schema(format!("--out {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::schema(format!("stdout: {e}"))),
    }
}

/// Left-aligned plain-text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}
