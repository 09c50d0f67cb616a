use horospherical::lorentz::{enumerate_lorentz, reduce_mod_parity};
use serde::Serialize;

use crate::output::{fmt_f64, Format, OutputArgs, SCHEMA_VERSION};
use crate::CliResult;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Dimension n of x0^2 - x1^2 - ... - xn^2 = 1, in {2, 3, 4}.
    #[arg(long)]
    pub n: usize,
    /// Largest x0 enumerated.
    #[arg(long)]
    pub x0_max: i64,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    h.push("height".into());
    for prefix in ["v", "reduced_v"] {
        for i in 1..n {
            h.push(format!("{prefix}_{i}_num"));
            h.push(format!("{prefix}_{i}_den"));
        }
    }
    h
}

#[derive(Serialize)]
struct Row {
    x: Vec<i64>,
    height: f64,
    v: Vec<[i128; 2]>,
    reduced_v: Vec<[i128; 2]>,
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    n: usize,
    x0_max: i64,
    count: usize,
    rows: Vec<Row>,
}

pub fn run(args: Args) -> CliResult<()> {
    let mut rows = Vec::new();
    for sol in enumerate_lorentz(args.n, args.x0_max)? {
        let (height, v) = sol.height_and_v()?;
        let reduced = reduce_mod_parity(&v, args.n)?;
        let pairs = |q: &[horospherical::domain::Q]| q.iter().map(|q| [*q.numer(), *q.denom()]).collect::<Vec<_>>();
        rows.push(Row { x: sol.x.clone(), height, v: pairs(&v), reduced_v: pairs(&reduced) });
    }
    match args.output.format() {
        Format::Json => args.output.write_json(&Report {
            schema_version: SCHEMA_VERSION,
            n: args.n,
            x0_max: args.x0_max,
            count: rows.len(),
            rows,
        }),
        Format::Csv => {
            let mut w = args.output.csv()?;
            w.write_record(header(args.n))?;
            for r in &rows {
                let mut rec: Vec<String> = r.x.iter().map(|x| x.to_string()).collect();
                rec.push(fmt_f64(r.height));
                for p in r.v.iter().chain(&r.reduced_v) {
                    rec.push(p[0].to_string());
                    rec.push(p[1].to_string());
                }
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
