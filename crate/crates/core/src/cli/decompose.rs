use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use suphase::matrix_io::parse_matrix;
use suphase::{decompose_su3_pattern, decompose_su4_pattern, decompose_sun, recompose, NullingOrder, UnitaryMatrix};

use super::format::short;
use super::{read_file, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pattern {
    /// su3 for 3x3 input, su4 for 4x4, reck otherwise.
    Auto,
    Su3,
    Su4,
    Reck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Columns,
    Rows,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Matrix file: a line with N, then N rows of entries like 0.5-0.25i.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Pattern::Auto)]
    pub pattern: Pattern,
    /// Elimination order for the reck pattern.
    #[arg(long, value_enum, default_value_t = Order::Columns)]
    pub order: Order,
    /// Largest accepted round-trip error.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

pub fn run(args: &DecomposeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let text = read_file(&args.file)?;
    let u = UnitaryMatrix::new(parse_matrix(&text)?)?;
    u.check_special()?;
    let pattern = match (args.pattern, u.dim()) {
        (Pattern::Auto, 3) => Pattern::Su3,
        (Pattern::Auto, 4) => Pattern::Su4,
        (Pattern::Auto, _) => Pattern::Reck,
        (p, _) => p,
    };
    let chain = match pattern {
        Pattern::Su3 => decompose_su3_pattern(&u)?,
        Pattern::Su4 => decompose_su4_pattern(&u)?,
        _ => decompose_sun(
            &u,
            match args.order {
                Order::Columns => NullingOrder::Columns,
                Order::Rows => NullingOrder::Rows,
            },
        )?,
    };
    let residual = recompose(&chain)?.max_abs_diff(&u);
    writeln!(out, "{}", chain.to_json())?;
    writeln!(err, "round-trip residual {}", short(residual))?;
    if residual <= args.tolerance {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "round-trip residual {} exceeds {}",
            short(residual),
            short(args.tolerance)
        )))
    }
}
