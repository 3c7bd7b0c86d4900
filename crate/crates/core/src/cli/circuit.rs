use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use suphase::angle::wrap;
use suphase::circuit::{su3_end_values, su4_end_values};
use suphase::{
    build_su3_circuit, build_su4_circuit, simulate_single_photon, simulate_two_channel_multiphoton, tol, Circuit,
    PhotonNumber, StateVector,
};

use super::format::{exact, short, short_complex};
use super::{read_file, write_file, Failure, Format, Group, TriangleArgs};

#[derive(Args, Debug)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub triangle: TriangleArgs,
    /// Path parameter of leg 1; defaults to the leg's end value.
    #[arg(long, allow_negative_numbers = true)]
    pub path_s1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub path_s2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub path_s3: Option<f64>,
    /// Where to write the netlist JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest accepted closure residual at the end values.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Netlist JSON written by `circuit --out`.
    #[arg(long)]
    pub netlist: PathBuf,
    /// Send photons through one element (one-based index) instead of the
    /// single photon through the whole circuit.
    #[arg(long, requires = "photons")]
    pub element: Option<usize>,
    /// Number of photons, all entering the element's first channel.
    #[arg(long, requires = "element")]
    pub photons: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// What port 1 light looks like at the output.
#[derive(Serialize)]
struct PortReport {
    elements: usize,
    /// `[re, im]` per output port.
    output: Vec<[f64; 2]>,
    /// `-arg` of the channel 1 amplitude; absent when it vanishes.
    phi_g: Option<f64>,
    /// Distance of the output from the ray of the input.
    residual: Option<f64>,
}

fn port_report(c: &Circuit) -> Result<PortReport, Failure> {
    let out = simulate_single_photon(c, &StateVector::basis(c.n(), 0))?;
    let z = out.amplitudes()[0];
    let (phi_g, residual) = if z.norm() <= tol::ORTHOGONAL {
        (None, None)
    } else {
        let phi = wrap(-z.arg());
        (Some(phi), Some(out.distance(&StateVector::basis(c.n(), 0).with_phase(-phi))))
    };
    Ok(PortReport {
        elements: c.len(),
        output: out.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        phi_g,
        residual,
    })
}

fn print_report(r: &PortReport, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(r).expect("report serializes"))?,
        Format::Text => {
            writeln!(out, "elements {}", r.elements)?;
            writeln!(out, "output for a photon entering port 1_in")?;
            for (k, [re, im]) in r.output.iter().enumerate() {
                let z = suphase::Complex64::new(*re, *im);
                writeln!(out, "  {}_out {:>24}  probability {}", k + 1, short_complex(z), short(z.norm_sqr()))?;
            }
            match (r.phi_g, r.residual) {
                (Some(phi), Some(res)) => {
                    writeln!(out, "phi_g {}", short(phi))?;
                    writeln!(out, "distance from input ray {}", short(res))?;
                }
                _ => writeln!(out, "phi_g undefined (no amplitude left in channel 1)")?,
            }
        }
        Format::Csv => {
            writeln!(out, "port,re,im")?;
            for (k, [re, im]) in r.output.iter().enumerate() {
                writeln!(out, "{},{},{}", k + 1, exact(*re), exact(*im))?;
            }
        }
    }
    Ok(())
}

pub fn run(args: &CircuitArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let t = &args.triangle;
    let path = |v: Option<f64>, end: f64| v.map(|x| t.angle(x)).unwrap_or(end);
    let (circuit, at_end) = match t.group {
        Group::Su3 => {
            let p = t.su3()?;
            let end = su3_end_values(&p)?;
            let s = (path(args.path_s1, end.0), path(args.path_s2, end.1), path(args.path_s3, end.2));
            (build_su3_circuit(&p, s.0, s.1, s.2)?, s == end)
        }
        Group::Su4 => {
            let p = t.su4()?;
            let end = su4_end_values(&p)?;
            let s = (path(args.path_s1, end.0), path(args.path_s2, end.1), path(args.path_s3, end.2));
            (build_su4_circuit(&p, s.0, s.1, s.2)?, s == end)
        }
    };
    if let Some(file) = &args.out {
        write_file(file, &(circuit.to_json() + "\n"))?;
    }
    let report = port_report(&circuit)?;
    print_report(&report, args.format, out)?;
    if at_end {
        let residual = report.residual.unwrap_or(f64::INFINITY);
        if residual > args.tolerance {
            return Err(Failure::Numerical(format!(
                "the circuit does not close: residual {}",
                short(residual)
            )));
        }
    }
    Ok(())
}

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let circuit = Circuit::from_json(&read_file(&args.netlist)?)?;
    let (Some(k), Some(photons)) = (args.element, args.photons) else {
        return print_report(&port_report(&circuit)?, args.format, out);
    };
    let element = k
        .checked_sub(1)
        .and_then(|i| circuit.elements().get(i))
        .ok_or_else(|| Failure::Validation(format!("element {k} not in 1..={}", circuit.len())))?;
    let n = PhotonNumber(photons);
    let input = StateVector::basis(n.dim(), 0);
    let output = simulate_two_channel_multiphoton(element, n, &input)?;
    let (i, j) = element.pair.channels();
    match args.format {
        Format::Json => {
            let amps: Vec<[f64; 2]> = output.amplitudes().iter().map(|z| [z.re, z.im]).collect();
            let v = serde_json::json!({
                "element": k,
                "label": element.label,
                "pair": [i, j],
                "photons": photons,
                "output": amps,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("report serializes"))?;
        }
        Format::Text => {
            writeln!(out, "element {k} ({}) on ({i},{j}), {photons} photons entering channel {i}", element.label)?;
            for (m, z) in output.amplitudes().iter().enumerate() {
                writeln!(
                    out,
                    "  |{},{}> {:>24}  probability {}",
                    photons as usize - m,
                    m,
                    short_complex(*z),
                    short(z.norm_sqr())
                )?;
            }
        }
        Format::Csv => {
            writeln!(out, "photons_in_second_channel,re,im")?;
            for (m, z) in output.amplitudes().iter().enumerate() {
                writeln!(out, "{m},{},{}", exact(z.re), exact(z.im))?;
            }
        }
    }
    Ok(())
}
