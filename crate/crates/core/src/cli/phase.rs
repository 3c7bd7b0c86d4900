use std::io::Write;

use clap::Args;
use serde::Serialize;

use suphase::angle::circular_distance;
use suphase::{
    phase_bargmann, phase_closed_form_su3, phase_closed_form_su4, phase_operator_cycle, GeodesicTriangle,
    PhaseResult,
};

use super::format::short;
use super::{Failure, Format, Group, TriangleArgs};

#[derive(Args, Debug)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub triangle: TriangleArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest accepted disagreement between methods.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Serialize)]
struct Report {
    group: String,
    params: serde_json::Value,
    results: Vec<PhaseResult>,
    max_disagreement: f64,
    tolerance: f64,
    agree: bool,
}

/// Coincident vertices are accepted as zero-length legs; a triangle whose
/// phase is undefined still fails.
fn all_methods(args: &TriangleArgs) -> Result<(serde_json::Value, Vec<PhaseResult>), Failure> {
    match args.group {
        Group::Su3 => {
            let p = args.su3()?;
            let t = GeodesicTriangle::from_vertices_lenient(p.vertices())?;
            let results = vec![phase_closed_form_su3(&p)?, phase_operator_cycle(&t)?, phase_bargmann(&t)?];
            Ok((serde_json::to_value(p).expect("parameters serialize"), results))
        }
        Group::Su4 => {
            let p = args.su4()?;
            let t = GeodesicTriangle::from_vertices_lenient(p.vertices())?;
            let results = vec![phase_closed_form_su4(&p)?, phase_operator_cycle(&t)?, phase_bargmann(&t)?];
            Ok((serde_json::to_value(p).expect("parameters serialize"), results))
        }
    }
}

fn max_disagreement(results: &[PhaseResult]) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, a) in results.iter().enumerate() {
        for b in &results[k + 1..] {
            worst = worst.max(circular_distance(a.phi_g, b.phi_g));
        }
    }
    worst
}

pub fn run(args: &PhaseArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if !(args.tolerance > 0.0) {
        return Err(Failure::Validation("--tolerance must be positive".into()));
    }
    if args.format == Format::Csv {
        return Err(Failure::Validation("phase reports are text or json".into()));
    }
    let (params, results) = all_methods(&args.triangle)?;
    let worst = max_disagreement(&results);
    let agree = worst <= args.tolerance;
    match args.format {
        Format::Json => {
            let report = Report {
                group: args.triangle.group.to_string(),
                params,
                results,
                max_disagreement: worst,
                tolerance: args.tolerance,
                agree,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
        }
        Format::Text | Format::Csv => {
            writeln!(out, "group {}", args.triangle.group)?;
            for r in &results {
                let name = serde_json::to_value(r.method).expect("method serializes");
                writeln!(
                    out,
                    "{:<15} phi_g {:>10}  residual {}",
                    name.as_str().unwrap_or_default(),
                    short(r.phi_g),
                    short(r.residual)
                )?;
            }
            writeln!(out, "max disagreement {}", short(worst))?;
        }
    }
    if agree {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "methods disagree by {} (tolerance {})",
            short(worst),
            short(args.tolerance)
        )))
    }
}
