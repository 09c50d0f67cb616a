use horospherical::domain::KRegion;
use horospherical::stats::{angular_discrepancy, geometric_shells, ks_statistic, rate_fit, star_discrepancy, RateFit, Shell, Target};
use serde::Serialize;

use crate::output::{fmt_f64, Format, OutputArgs, SCHEMA_VERSION};
use crate::{CliError, CliResult};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// CSV report of an earlier run (for example `gcd-scan`).
    #[arg(long = "in")]
    pub input: String,
    /// Column holding the sample values.
    #[arg(long, default_value = "ratio")]
    pub column: String,
    /// Column used to assign rows to shells.
    #[arg(long, default_value = "norm_v")]
    pub shell_column: String,
    /// ks, star or angular.
    #[arg(long, default_value = "ks")]
    pub statistic: String,
    /// `half`, `uniform:a:b`, `nu:d`, `arc` or `cap:r`.
    #[arg(long, default_value = "half")]
    pub target: String,
    /// `geometric:R0` (shells (R0, 2R0], ... fully inside the data) or
    /// `edges:r0,r1,...`.
    #[arg(long, default_value = "geometric:10")]
    pub shells: String,
    /// Keep only rows whose `sign` column equals this value.
    #[arg(long)]
    pub sign: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub const HEADER: [&str; 6] = ["shell_lo", "shell_hi", "count", "statistic_name", "value", "target"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Statistic {
    Ks,
    Star,
    Angular,
}

impl Statistic {
    fn parse(s: &str) -> CliResult<Self> {
        match s {
            "ks" => Ok(Statistic::Ks),
            "star" => Ok(Statistic::Star),
            "angular" => Ok(Statistic::Angular),
            _ => Err(CliError::Config(format!("unknown statistic `{s}`"))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Statistic::Ks => "ks",
            Statistic::Star => "star",
            Statistic::Angular => "angular",
        }
    }
}

#[derive(Serialize)]
struct Row {
    shell_lo: f64,
    shell_hi: f64,
    count: usize,
    statistic_name: &'static str,
    value: f64,
    target: String,
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    rows: Vec<Row>,
    /// Log-log fit of value against the shell's lower radius, when at least
    /// three shells are non-empty.
    fit: Option<RateFit>,
}

fn column(headers: &csv::StringRecord, name: &str) -> CliResult<usize> {
    headers.iter().position(|h| h == name).ok_or_else(|| CliError::Config(format!("input has no column `{name}`")))
}

fn shells_from(spec: &str, max_radius: f64) -> CliResult<Vec<Shell>> {
    let bad = || CliError::Config(format!("bad shell spec `{spec}`"));
    if let Some(r0) = spec.strip_prefix("geometric:") {
        let r0: f64 = r0.trim().parse().map_err(|_| bad())?;
        if !(r0 > 0.0) {
            return Err(bad());
        }
        if max_radius <= r0 {
            return Ok(Vec::new());
        }
        let covered = max_radius * (1.0 + 1e-9);
        return Ok(geometric_shells(r0, max_radius)?.into_iter().filter(|s| s.hi <= covered).collect());
    }
    if let Some(edges) = spec.strip_prefix("edges:") {
        let e: Vec<f64> = edges.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| bad())).collect::<CliResult<_>>()?;
        if e.len() < 2 {
            return Err(bad());
        }
        return e.windows(2).map(|w| Shell::new(w[0], w[1]).map_err(CliError::from)).collect();
    }
    Err(bad())
}

pub fn run(args: Args) -> CliResult<()> {
    let statistic = Statistic::parse(&args.statistic)?;
    let target = if statistic == Statistic::Angular { Target::UniformArc } else { Target::parse(&args.target)? };
    let mut reader = csv::Reader::from_path(&args.input).map_err(|e| {
        if e.is_io_error() {
            CliError::Io(format!("{}: {e}", args.input))
        } else {
            CliError::from(e)
        }
    })?;
    let headers = reader.headers()?.clone();
    let (vi, si) = (column(&headers, &args.column)?, column(&headers, &args.shell_column)?);
    let sign_col = match &args.sign {
        Some(_) => Some(column(&headers, "sign")?),
        None => None,
    };
    let mut data: Vec<(f64, f64)> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if let (Some(c), Some(want)) = (sign_col, &args.sign) {
            if &rec[c] != want {
                continue;
            }
        }
        let num = |i: usize| rec[i].trim().parse::<f64>().map_err(|_| CliError::Config(format!("non-numeric `{}` in input", &rec[i])));
        data.push((num(si)?, num(vi)?));
    }
    let max_radius = data.iter().map(|d| d.0).fold(0.0, f64::max);
    let mut rows = Vec::new();
    for shell in shells_from(&args.shells, max_radius)? {
        let values: Vec<f64> = data.iter().filter(|(r, _)| *r > shell.lo && *r <= shell.hi).map(|d| d.1).collect();
        if values.is_empty() {
            continue;
        }
        let value = match statistic {
            Statistic::Ks => ks_statistic(&values, |x| target.cdf(x))?,
            Statistic::Star => star_discrepancy(&values, |x| target.cdf(x))?,
            Statistic::Angular => angular_discrepancy(&values, &KRegion::Full)?,
        };
        rows.push(Row {
            shell_lo: shell.lo,
            shell_hi: shell.hi,
            count: values.len(),
            statistic_name: statistic.name(),
            value,
            target: target.to_string(),
        });
    }
    match args.output.format() {
        Format::Json => {
            let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.value > 0.0).map(|r| (r.shell_lo, r.value)).collect();
            let fit = if pts.len() >= 3 { Some(rate_fit(&pts)?) } else { None };
            args.output.write_json(&Report { schema_version: SCHEMA_VERSION, rows, fit })
        }
        Format::Csv => {
            let mut w = args.output.csv()?;
            w.write_record(HEADER)?;
            for r in &rows {
                w.write_record([
                    fmt_f64(r.shell_lo),
                    fmt_f64(r.shell_hi),
                    r.count.to_string(),
                    r.statistic_name.to_string(),
                    fmt_f64(r.value),
                    r.target.clone(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
