use horospherical::domain::KRegion;
use horospherical::gcd::{enumerate_primitive_z2, shortest_solution_z};
use horospherical::quadratic::{enumerate_primitive_od, shortest_solution_od, ImagQuadRing};
use serde::Serialize;

use crate::output::{fmt_f64, Format, OutputArgs, SCHEMA_VERSION};
use crate::{CliError, CliResult};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `z`, or `o1`, `o2`, `o3`, `o7`, `o11` for the ring of integers of Q(sqrt(-d)).
    #[arg(long, default_value = "z")]
    pub ring: String,
    /// Largest norm |v| listed.
    #[arg(long)]
    pub rmax: f64,
    /// `full`, `arc:a:b` (Z) or `cap:c0:c1:c2:c3:r` (O_d).
    #[arg(long, default_value = "full")]
    pub sector: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub const Z_HEADER: [&str; 11] = ["a", "b", "x", "y", "ncomp_num", "ncomp_den", "ratio", "theta_v", "sign", "angle_v", "norm_v"];
pub const OD_HEADER: [&str; 16] = [
    "alpha_u", "alpha_w", "beta_u", "beta_w", "xi_u", "xi_w", "eta_u", "eta_w", "ncomp_re_num", "ncomp_re_den", "ncomp_om_num",
    "ncomp_om_den", "ratio", "s_v", "norm_sq", "norm_v",
];

#[derive(Serialize)]
struct ZRow {
    a: i64,
    b: i64,
    x: i64,
    y: i64,
    ncomp_num: i64,
    ncomp_den: i64,
    ratio: f64,
    theta_v: f64,
    sign: &'static str,
    angle_v: f64,
    norm_v: f64,
}

#[derive(Serialize)]
struct OdRow {
    alpha: [i64; 2],
    beta: [i64; 2],
    xi: [i64; 2],
    eta: [i64; 2],
    ncomp_re: [i64; 2],
    ncomp_om: [i64; 2],
    ratio: f64,
    s_v: f64,
    norm_sq: i64,
    norm_v: f64,
}

#[derive(Serialize)]
struct Report<R> {
    schema_version: u32,
    ring: String,
    rmax: f64,
    sector: String,
    count: usize,
    rows: Vec<R>,
}

fn parse_ring(s: &str) -> CliResult<Option<ImagQuadRing>> {
    if s == "z" {
        return Ok(None);
    }
    let d = s
        .strip_prefix('o')
        .and_then(|d| d.parse::<i64>().ok())
        .ok_or_else(|| CliError::Config(format!("unknown ring `{s}`")))?;
    Ok(Some(ImagQuadRing::new(d)?))
}

pub fn run(args: Args) -> CliResult<()> {
    let sector = KRegion::parse(&args.sector)?;
    match parse_ring(&args.ring)? {
        None => scan_z(&args, &sector),
        Some(ring) => scan_od(&args, &ring, &sector),
    }
}

fn scan_z(args: &Args, sector: &KRegion) -> CliResult<()> {
    if matches!(sector, KRegion::Cap { .. }) {
        return Err(CliError::Config("caps apply to O_d scans; use an arc for z".into()));
    }
    let rows: Vec<ZRow> = enumerate_primitive_z2(args.rmax, sector)?
        .into_iter()
        .map(|v| {
            let s = shortest_solution_z(v).expect("enumerated vectors are primitive");
            ZRow {
                a: v.a,
                b: v.b,
                x: s.x,
                y: s.y,
                ncomp_num: *s.n_comp.numer(),
                ncomp_den: *s.n_comp.denom(),
                ratio: s.ratio,
                theta_v: s.theta_v,
                sign: s.sign.as_str(),
                angle_v: v.angle(),
                norm_v: v.norm(),
            }
        })
        .collect();
    match args.output.format() {
        Format::Json => args.output.write_json(&Report {
            schema_version: SCHEMA_VERSION,
            ring: "z".into(),
            rmax: args.rmax,
            sector: sector.to_string(),
            count: rows.len(),
            rows,
        }),
        Format::Csv => {
            let mut w = args.output.csv()?;
            w.write_record(Z_HEADER)?;
            for r in &rows {
                w.write_record([
                    r.a.to_string(),
                    r.b.to_string(),
                    r.x.to_string(),
                    r.y.to_string(),
                    r.ncomp_num.to_string(),
                    r.ncomp_den.to_string(),
                    fmt_f64(r.ratio),
                    fmt_f64(r.theta_v),
                    r.sign.to_string(),
                    fmt_f64(r.angle_v),
                    fmt_f64(r.norm_v),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn scan_od(args: &Args, ring: &ImagQuadRing, cap: &KRegion) -> CliResult<()> {
    if matches!(cap, KRegion::Arc { .. }) {
        return Err(CliError::Config("arcs apply to z scans; use a cap for O_d".into()));
    }
    let mut rows = Vec::new();
    for (a, b) in enumerate_primitive_od(ring, args.rmax, cap)? {
        let s = shortest_solution_od(ring, a, b)?;
        let pair = |x: &num_rational::Ratio<i64>| [*x.numer(), *x.denom()];
        rows.push(OdRow {
            alpha: [a.u, a.w],
            beta: [b.u, b.w],
            xi: [s.xi.u, s.xi.w],
            eta: [s.eta.u, s.eta.w],
            ncomp_re: pair(&s.n_coords.re),
            ncomp_om: pair(&s.n_coords.im),
            ratio: s.ratio,
            s_v: s.s_v,
            norm_sq: s.norm_sq,
            norm_v: (s.norm_sq as f64).sqrt(),
        });
    }
    match args.output.format() {
        Format::Json => args.output.write_json(&Report {
            schema_version: SCHEMA_VERSION,
            ring: ring.name(),
            rmax: args.rmax,
            sector: cap.to_string(),
            count: rows.len(),
            rows,
        }),
        Format::Csv => {
            let mut w = args.output.csv()?;
            w.write_record(OD_HEADER)?;
            for r in &rows {
                let mut rec: Vec<String> = [r.alpha, r.beta, r.xi, r.eta, r.ncomp_re, r.ncomp_om]
                    .iter()
                    .flat_map(|p| p.iter().map(|x| x.to_string()))
                    .collect();
                rec.extend([fmt_f64(r.ratio), fmt_f64(r.s_v), r.norm_sq.to_string(), fmt_f64(r.norm_v)]);
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

