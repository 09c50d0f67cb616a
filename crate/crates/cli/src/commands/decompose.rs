use std::io::Write;

use horospherical::iwasawa::{compose, decompose, GroupElement, GroupSpec, KElement};
use horospherical::linalg::{self, CMatrix};
use num_complex::Complex64;
use serde::Serialize;

use crate::output::{fmt_f64, json_error, SCHEMA_VERSION};
use crate::{CliError, CliResult};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// sl2r, sl2c or so1n:N.
    #[arg(long)]
    pub group: String,
    /// Row-major entries separated by whitespace or commas; complex as `a+bi`.
    /// Takes every remaining argument, so options go before it.
    #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
    pub matrix: Vec<String>,
    #[arg(long)]
    pub json: bool,
}

/// `2`, `-1.5e-3`, `3i`, `-i`, `1+2i`, `0.5-0.25i`.
pub fn parse_complex(tok: &str) -> CliResult<Complex64> {
    let bad = || CliError::Config(format!("bad matrix entry `{tok}`"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let Some(body) = tok.strip_suffix('i') else {
        return Ok(Complex64::new(num(tok)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => num(s)?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_matrix(spec: GroupSpec, tokens: &[String]) -> CliResult<CMatrix> {
    let entries: Vec<Complex64> = tokens
        .iter()
        .flat_map(|t| t.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(parse_complex)
        .collect::<CliResult<_>>()?;
    let n = spec.matrix_size();
    if entries.len() != n * n {
        return Err(CliError::Config(format!("{} needs {} entries, got {}", spec.name(), n * n, entries.len())));
    }
    Ok(CMatrix::from_row_slice(n, n, &entries))
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    group: String,
    v: Vec<f64>,
    z: Vec<f64>,
    t: f64,
    /// SO(2) angle, or the K-matrix row-major as `[re, im]` pairs.
    k_angle: Option<f64>,
    k_matrix: Option<Vec<[f64; 2]>>,
    residual: f64,
}

fn fmt_complex(z: Complex64) -> String {
    format!("{}{}{}i", fmt_f64(z.re), if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) { "" } else { "+" }, fmt_f64(z.im))
}

pub fn run(args: Args) -> CliResult<()> {
    let spec = GroupSpec::parse(&args.group)?;
    let g = GroupElement::new(spec, parse_matrix(spec, &args.matrix)?)?;
    let c = decompose(&g)?;
    let residual = linalg::max_entry_error(compose(&c, spec)?.entries(), g.entries());
    let (k_angle, k_matrix) = match &c.k {
        KElement::Angle(th) => (Some(*th), None),
        k => (None, Some(k.to_matrix().transpose().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())),
    };
    let mut out = std::io::BufWriter::new(std::io::stdout());
    if args.json {
        let r = Report { schema_version: SCHEMA_VERSION, group: spec.name(), v: c.v, z: c.z, t: c.t, k_angle, k_matrix, residual };
        serde_json::to_writer_pretty(&mut out, &r).map_err(json_error)?;
        writeln!(out)?;
    } else {
        let list = |xs: &[f64]| xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(" ");
        writeln!(out, "group {}", spec.name())?;
        writeln!(out, "v {}", list(&c.v))?;
        writeln!(out, "z {}", list(&c.z))?;
        writeln!(out, "t {}", fmt_f64(c.t))?;
        match (&k_angle, &c.k) {
            (Some(th), _) => writeln!(out, "k angle {}", fmt_f64(*th))?,
            (None, k) => {
                let m = k.to_matrix();
                let rows: Vec<String> = m
                    .row_iter()
                    .map(|r| r.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(" "))
                    .collect();
                writeln!(out, "k {}", rows.join(" ; "))?;
            }
        }
        writeln!(out, "residual {}", fmt_f64(residual))?;
    }
    out.flush()?;
    Ok(())
}
