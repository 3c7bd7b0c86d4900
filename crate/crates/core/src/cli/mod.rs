//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for invalid input (bad parameters, parse
//! errors, degenerate geometry), 2 when a numerical consistency check fails.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use suphase::{Error, TriangleParamsSU3, TriangleParamsSU4};

mod circuit;
mod decompose;
mod format;
mod phase;
mod sweep;

#[derive(Parser, Debug)]
#[command(name = "suphase", version, about = "Geometric phases of geodesic triangles and their SU(N) interferometers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Triangle phase by every available method.
    Phase(phase::PhaseArgs),
    /// Factor a special unitary from a matrix file into two-channel elements.
    Decompose(decompose::DecomposeArgs),
    /// Build the interferometer for a triangle and simulate port 1.
    Circuit(circuit::CircuitArgs),
    /// Re-simulate a saved netlist.
    Simulate(circuit::SimulateArgs),
    /// Tabulate the phase along one triangle parameter.
    Sweep(sweep::SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Su3,
    Su4,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Su3 => "su3",
            Group::Su4 => "su4",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Triangle parameters; angles in radians unless `--degrees` is given.
#[derive(Args, Debug, Clone)]
pub struct TriangleArgs {
    #[arg(long, value_enum, default_value_t = Group::Su3)]
    pub group: Group,
    #[arg(long, allow_negative_numbers = true)]
    pub s1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta3: Option<f64>,
    /// Read every angle in degrees.
    #[arg(long)]
    pub degrees: bool,
}

impl TriangleArgs {
    pub fn angle(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }

    /// The same parameters with every angle converted to radians.
    pub fn in_radians(&self) -> TriangleArgs {
        let f = |v: Option<f64>| v.map(|x| self.angle(x));
        TriangleArgs {
            group: self.group,
            s1: f(self.s1),
            s2: f(self.s2),
            alpha: f(self.alpha),
            beta: f(self.beta),
            beta1: f(self.beta1),
            beta2: f(self.beta2),
            beta3: f(self.beta3),
            degrees: false,
        }
    }

    fn required(&self, name: &str, v: Option<f64>) -> Result<f64, Failure> {
        v.map(|x| self.angle(x))
            .ok_or_else(|| Failure::Validation(format!("--{name} is required for --group {}", self.group)))
    }

    fn forbid(&self, names: &[(&str, Option<f64>)]) -> Result<(), Failure> {
        for (name, v) in names {
            if v.is_some() {
                return Err(Failure::Validation(format!("--{name} does not apply to --group {}", self.group)));
            }
        }
        Ok(())
    }

    pub fn su3(&self) -> Result<TriangleParamsSU3, Failure> {
        self.forbid(&[("beta1", self.beta1), ("beta2", self.beta2), ("beta3", self.beta3)])?;
        let p = TriangleParamsSU3 {
            s1: self.required("s1", self.s1)?,
            s2: self.required("s2", self.s2)?,
            alpha: self.required("alpha", self.alpha)?,
            beta: self.required("beta", self.beta)?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn su4(&self) -> Result<TriangleParamsSU4, Failure> {
        self.forbid(&[("beta", self.beta)])?;
        let p = TriangleParamsSU4 {
            s1: self.required("s1", self.s1)?,
            s2: self.required("s2", self.s2)?,
            alpha: self.required("alpha", self.alpha)?,
            beta1: self.required("beta1", self.beta1)?,
            beta2: self.required("beta2", self.beta2)?,
            beta3: self.required("beta3", self.beta3)?,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InconsistentCycle { .. } | Error::DecompositionFailure { .. } => {
                Failure::Numerical(e.to_string())
            }
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

pub(crate) fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

pub(crate) fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Phase(a) => phase::run(&a, out),
        Command::Decompose(a) => decompose::run(&a, out, err),
        Command::Circuit(a) => circuit::run(&a, out),
        Command::Simulate(a) => circuit::simulate(&a, out),
        Command::Sweep(a) => sweep::run(&a, out, err),
    }
}
