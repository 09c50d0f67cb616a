use horospherical::iwasawa::{GroupFamily, GroupSpec, KElement};
use horospherical::perturb::{contrast_scan, t_scan, ScanConfig, DEFAULT_EPSILON, DEFAULT_PARTITIONS};
use serde::Serialize;

use crate::output::{fmt_f64, parse_real_list, Format, OutputArgs, SCHEMA_VERSION};
use crate::{CliError, CliResult};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// sl2r, sl2c or so1n:N.
    #[arg(long, default_value = "sl2r")]
    pub group: String,
    /// N-coordinates of the base point; zeros when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// K-angle of the base point (SL(2,R) only; other groups use the identity).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Values of t: comma list or `lo:hi:step`.
    #[arg(long, allow_hyphen_values = true, default_value = "0:-20:-2")]
    pub t_grid: String,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of RNG streams; part of the experiment definition.
    #[arg(long, default_value_t = DEFAULT_PARTITIONS)]
    pub partitions: u64,
    /// Allow t > 0 (outside the range where the constants are uniform).
    #[arg(long)]
    pub contrast: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct Base {
    v: Vec<f64>,
    t: f64,
    phi: f64,
}

#[derive(Serialize)]
struct Point {
    group: String,
    base: Base,
    epsilon: f64,
    samples: usize,
    seed: u64,
    c_n: f64,
    c_a: f64,
    c_k: f64,
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    partitions: u64,
    points: Vec<Point>,
    ratio_n: f64,
    ratio_a: f64,
    ratio_k: f64,
}

pub const HEADER: [&str; 11] = ["group", "v", "t", "phi", "epsilon", "samples", "seed", "partitions", "c_n", "c_a", "c_k"];

pub fn run(args: Args) -> CliResult<()> {
    let spec = GroupSpec::parse(&args.group)?;
    let v = match &args.v {
        Some(s) => parse_real_list(s)?,
        None => vec![0.0; spec.p],
    };
    if v.len() != spec.p {
        return Err(CliError::Config(format!("{} needs {} N-coordinates, got {}", spec.name(), spec.p, v.len())));
    }
    let k = match spec.family {
        GroupFamily::Sl2R => KElement::angle(args.phi),
        _ if args.phi != 0.0 => return Err(CliError::Config("--phi applies to sl2r only".into())),
        _ => KElement::identity(spec),
    };
    if args.partitions == 0 {
        return Err(CliError::Config("--partitions must be positive".into()));
    }
    let phi = if let KElement::Angle(a) = k { a } else { 0.0 };
    let cfg = ScanConfig { spec, v: v.clone(), k, epsilon: args.epsilon, samples: args.samples, seed: args.seed, partitions: args.partitions };
    let grid = parse_real_list(&args.t_grid)?;
    let scan = if args.contrast { contrast_scan(&cfg, &grid)? } else { t_scan(&cfg, &grid)? };
    let points: Vec<Point> = scan
        .points
        .iter()
        .map(|p| Point {
            group: spec.name(),
            base: Base { v: v.clone(), t: p.t, phi },
            epsilon: args.epsilon,
            samples: args.samples,
            seed: args.seed,
            c_n: p.constants.c_n,
            c_a: p.constants.c_a,
            c_k: p.constants.c_k,
        })
        .collect();
    match args.output.format() {
        Format::Json => args.output.write_json(&Report {
            schema_version: SCHEMA_VERSION,
            partitions: args.partitions,
            points,
            ratio_n: scan.ratio_n,
            ratio_a: scan.ratio_a,
            ratio_k: scan.ratio_k,
        }),
        Format::Csv => {
            let mut w = args.output.csv()?;
            w.write_record(HEADER)?;
            let vs = v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(" ");
            for p in &points {
                w.write_record([
                    p.group.clone(),
                    vs.clone(),
                    fmt_f64(p.base.t),
                    fmt_f64(p.base.phi),
                    fmt_f64(p.epsilon),
                    p.samples.to_string(),
                    p.seed.to_string(),
                    args.partitions.to_string(),
                    fmt_f64(p.c_n),
                    fmt_f64(p.c_a),
                    fmt_f64(p.c_k),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
