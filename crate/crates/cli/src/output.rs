//! Report sinks and number formatting shared by the subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::{CliError, CliResult};

/// Version of the CSV headers and JSON keys.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Same as `--format json`.
    #[arg(long)]
    pub json: bool,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }

    pub fn sink(&self) -> CliResult<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Io(format!("{p}: {e}")))?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }

    pub fn csv(&self) -> CliResult<csv::Writer<Box<dyn Write>>> {
        Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(self.sink()?))
    }

    pub fn write_json<T: Serialize>(&self, value: &T) -> CliResult<()> {
        let mut w = self.sink()?;
        serde_json::to_writer_pretty(&mut w, value).map_err(json_error)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}

pub fn json_error(e: serde_json::Error) -> CliError {
    match e.io_error_kind() {
        Some(io::ErrorKind::BrokenPipe) => CliError::Closed,
        _ => CliError::Io(e.to_string()),
    }
}

/// 17 significant digits, so every double round-trips.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Comma- or whitespace-separated list of reals, or `lo:hi:step` (inclusive,
/// either direction).
pub fn parse_real_list(s: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Config(format!("bad number list `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<CliResult<_>>()?;
        let (lo, hi, step) = (v[0], v[1], v[2]);
        if !(step != 0.0 && step.is_finite() && (hi - lo) / step >= 0.0) {
            return Err(bad());
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| lo + step * i as f64).collect());
    }
    let v: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    if v.is_empty() {
        return Err(bad());
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_f64(f64::NAN), "nan");
        assert_eq!(fmt_opt(None), "");
        let x = 1.0 / 3.0;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_real_list("0:-20:-2").unwrap().len(), 11);
        assert_eq!(parse_real_list("0,-2, -4").unwrap(), vec![0.0, -2.0, -4.0]);
        assert_eq!(parse_real_list("4.6").unwrap(), vec![4.6]);
        assert!(parse_real_list("0:1:-1").is_err());
        assert!(parse_real_list("").is_err());
    }
}
