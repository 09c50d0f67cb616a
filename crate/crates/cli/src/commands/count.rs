use std::f64::consts::PI;

use horospherical::counting::{count_difference, count_sl2od, count_sl2z, horosphere_lift_count, CountReport, Lattice, LatticeConfig};
use horospherical::domain::{DomainSpec, KRegion, PsiBox};
use horospherical::quadratic::ImagQuadRing;
use serde::Serialize;

use crate::output::{fmt_f64, fmt_opt, parse_real_list, Format, OutputArgs, SCHEMA_VERSION};
use crate::{CliError, CliResult};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `sl2z` or `sl2o<d>` with d in {1, 2, 3, 7, 11}.
    #[arg(long, default_value = "sl2z")]
    pub lattice: String,
    /// Box `lo:hi[,lo:hi]`; for O_d in (Re, Im / Im omega) coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
    /// `full`, `arc:a:b` or `cap:c0:c1:c2:c3:r`.
    #[arg(long, default_value = "full")]
    pub phi: String,
    /// One value, a comma list, or `lo:hi:step`; several values give one row each.
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long = "S", default_value_t = 0.0)]
    pub s: f64,
    /// Error exponent; 7/8 by default for SL(2,Z), required otherwise.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Covolume of the lattice; pi^2/3 by default for SL(2,Z). Without it O_d
    /// counts report densities only.
    #[arg(long)]
    pub covolume: Option<f64>,
    /// Count lifts of the horosphere at height y meeting the T-ball instead.
    #[arg(long, allow_hyphen_values = true)]
    pub horosphere_y: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub const HEADER: [&str; 11] =
    ["lattice", "psi", "phi", "T", "S", "observed", "main_term", "relative_dev", "kappa", "error_bound_shape", "density"];

#[derive(Serialize)]
struct Versioned<'a> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a CountReport,
}

fn lattice_config(args: &Args) -> CliResult<LatticeConfig> {
    let lattice = match args.lattice.as_str() {
        "sl2z" => Lattice::Sl2Z,
        other => {
            let d = other
                .strip_prefix("sl2o")
                .and_then(|d| d.parse::<i64>().ok())
                .ok_or_else(|| CliError::Config(format!("unknown lattice `{other}`")))?;
            Lattice::Sl2Od(d)
        }
    };
    let (kappa, covolume) = match lattice {
        Lattice::Sl2Z => (args.kappa.unwrap_or(7.0 / 8.0), Some(args.covolume.unwrap_or(PI * PI / 3.0))),
        _ => (
            args.kappa.ok_or_else(|| CliError::Config(format!("--kappa is required for {}", args.lattice)))?,
            args.covolume,
        ),
    };
    Ok(LatticeConfig::new(lattice, kappa, covolume)?)
}

pub fn run(args: Args) -> CliResult<()> {
    let config = lattice_config(&args)?;
    let phi = KRegion::parse(&args.phi)?;
    let psi = match (&args.psi, config.lattice) {
        (Some(p), _) => PsiBox::parse(p)?,
        (None, Lattice::Sl2Z) => PsiBox::parse("-1/2:1/2")?,
        (None, _) => PsiBox::parse("-1/2:1/2,-1/2:1/2")?,
    };
    let ts = parse_real_list(&args.t)?;
    let mut reports = Vec::with_capacity(ts.len());
    for &t in &ts {
        let r = if let Some(y) = args.horosphere_y {
            horosphere_lift_count(t, y, &config)?
        } else {
            let domain = DomainSpec::new(psi.clone(), phi.clone(), t, args.s)?;
            match config.lattice {
                _ if args.s > 0.0 => count_difference(&domain, &config)?,
                Lattice::Sl2Z => count_sl2z(&domain, &config)?,
                Lattice::Sl2Od(d) => count_sl2od(&ImagQuadRing::new(d)?, &domain, &config)?,
                Lattice::So1nZ(_) => unreachable!("not parsed from the command line"),
            }
        };
        reports.push(r);
    }
    match args.output.format() {
        Format::Json => {
            let wrapped: Vec<Versioned> = reports.iter().map(|r| Versioned { schema_version: SCHEMA_VERSION, report: r }).collect();
            if wrapped.len() == 1 {
                args.output.write_json(&wrapped[0])
            } else {
                args.output.write_json(&wrapped)
            }
        }
        Format::Csv => {
            let mut w = args.output.csv()?;
            w.write_record(HEADER)?;
            for r in &reports {
                w.write_record([
                    r.lattice.clone(),
                    r.psi.clone(),
                    r.phi.clone(),
                    fmt_f64(r.t),
                    fmt_f64(r.s),
                    r.observed.to_string(),
                    fmt_opt(r.main_term),
                    fmt_opt(r.relative_dev),
                    fmt_f64(r.kappa),
                    fmt_f64(r.error_bound_shape),
                    fmt_f64(r.density),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
