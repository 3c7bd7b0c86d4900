use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;

use suphase::triangle::GeodesicTriangle;
use suphase::{
    phase_bargmann, phase_closed_form_su3, phase_closed_form_su4, phase_operator_cycle, TriangleParamsSU3,
    TriangleParamsSU4,
};

use super::format::exact;
use super::{write_file, Failure, Group, TriangleArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Param {
    S1,
    S2,
    Alpha,
    Beta,
    Beta1,
    Beta2,
    Beta3,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Fixed values for the parameters that are not swept.
    #[command(flatten)]
    pub triangle: TriangleArgs,
    #[arg(long, value_enum)]
    pub param: Param,
    #[arg(long, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: f64,
    /// Number of rows, endpoints included.
    #[arg(long)]
    pub steps: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const HEADER: &str = "param,phi_closed,phi_operator,phi_bargmann,residual";

#[derive(Clone, Copy)]
struct Row {
    value: f64,
    closed: f64,
    operator: f64,
    bargmann: f64,
    residual: f64,
}

impl Row {
    fn is_complete(&self) -> bool {
        [self.closed, self.operator, self.bargmann, self.residual]
            .iter()
            .all(|x| !x.is_nan())
    }

    fn csv(&self) -> String {
        [self.value, self.closed, self.operator, self.bargmann, self.residual]
            .map(exact)
            .join(",")
    }
}

fn set(args: &mut TriangleArgs, param: Param, value: f64) {
    let slot = match param {
        Param::S1 => &mut args.s1,
        Param::S2 => &mut args.s2,
        Param::Alpha => &mut args.alpha,
        Param::Beta => &mut args.beta,
        Param::Beta1 => &mut args.beta1,
        Param::Beta2 => &mut args.beta2,
        Param::Beta3 => &mut args.beta3,
    };
    *slot = Some(value);
}

/// Rejects a parameter set before any row is evaluated, so that bad input
/// fails the command instead of filling the table with `nan`.
fn probe(args: &TriangleArgs) -> Result<(), Failure> {
    match args.group {
        Group::Su3 => args.su3().map(|_| ()),
        Group::Su4 => args.su4().map(|_| ()),
    }
}

fn row(base: &TriangleArgs, param: Param, value: f64) -> Row {
    let mut args = base.clone();
    set(&mut args, param, value);
    let (closed, vertices) = match args.group {
        Group::Su3 => match args.su3() {
            Ok(p) => (phase_closed_form_su3(&p).map(|r| r.phi_g), TriangleParamsSU3::vertices(&p)),
            Err(_) => return Row::nan(value),
        },
        Group::Su4 => match args.su4() {
            Ok(p) => (phase_closed_form_su4(&p).map(|r| r.phi_g), TriangleParamsSU4::vertices(&p)),
            Err(_) => return Row::nan(value),
        },
    };
    // coincident vertices become zero-length legs so that the operator
    // method still sees the cycle
    let triangle = GeodesicTriangle::from_vertices_lenient(vertices);
    let operator = triangle.as_ref().ok().map(phase_operator_cycle);
    let bargmann = triangle.as_ref().ok().map(phase_bargmann);
    let (op_phi, residual) = match operator {
        Some(Ok(r)) => (r.phi_g, r.residual),
        _ => (f64::NAN, f64::NAN),
    };
    Row {
        value,
        closed: closed.unwrap_or(f64::NAN),
        operator: op_phi,
        bargmann: match bargmann {
            Some(Ok(r)) => r.phi_g,
            _ => f64::NAN,
        },
        residual,
    }
}

impl Row {
    fn nan(value: f64) -> Self {
        Row {
            value,
            closed: f64::NAN,
            operator: f64::NAN,
            bargmann: f64::NAN,
            residual: f64::NAN,
        }
    }
}

fn check_param(group: Group, param: Param) -> Result<(), Failure> {
    let ok = match group {
        Group::Su3 => !matches!(param, Param::Beta1 | Param::Beta2 | Param::Beta3),
        Group::Su4 => param != Param::Beta,
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{param:?} is not a parameter of --group {group}").to_lowercase()))
    }
}

pub fn run(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    if args.steps < 2 {
        return Err(Failure::Validation("--steps must be at least 2".into()));
    }
    if !(args.start.is_finite() && args.stop.is_finite()) || args.start == args.stop {
        return Err(Failure::Validation("--start and --stop must be finite and distinct".into()));
    }
    check_param(args.triangle.group, args.param)?;
    let (start, stop) = (args.triangle.angle(args.start), args.triangle.angle(args.stop));
    let base = args.triangle.in_radians();
    let mut first = base.clone();
    set(&mut first, args.param, start);
    probe(&first)?;

    let last = (args.steps - 1) as f64;
    let rows: Vec<Row> = (0..args.steps)
        .into_par_iter()
        .map(|k| {
            let value = if k + 1 == args.steps {
                stop
            } else {
                start + (stop - start) * (k as f64 / last)
            };
            row(&base, args.param, value)
        })
        .collect();

    let mut csv = String::from(HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv());
        csv.push('\n');
    }
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    let degenerate = rows.iter().filter(|r| !r.is_complete()).count();
    if degenerate > 0 {
        writeln!(err, "warning: {degenerate} of {} rows have undefined entries (nan)", rows.len())?;
    }
    Ok(())
}
