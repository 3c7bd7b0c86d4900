//! The Abelian geometric phase of a geodesic triangle, computed three
//! independent ways.
//!
//! Sign convention: `phi_g` is the argument of the Bargmann invariant
//! `<v1|v2><v2|v3><v3|v1>`. For the standard vertex family this is
//! `arg(cos s1 cos s2 - e^{-i alpha} sin s1 sin s2 cos beta)`. Transporting
//! `v1` around the legs lands on `e^{-i phi_g} v1`, so the operator method
//! reports `-arg <v1|U3 U2 U1 v1>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{cis, wrap};
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::tol;
use crate::triangle::{GeodesicTriangle, TriangleParamsSU3, TriangleParamsSU4};
use crate::unitary::apply;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    ClosedForm,
    OperatorCycle,
    Bargmann,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    /// Geometric phase on (-pi, pi].
    pub phi_g: f64,
    pub method: PhaseMethod,
    /// Closure defect for the operator method, zero otherwise.
    pub residual: f64,
}

impl PhaseResult {
    fn exact(phi_g: f64, method: PhaseMethod) -> Self {
        Self {
            phi_g,
            method,
            residual: 0.0,
        }
    }
}

fn phase_of(z: Complex64, what: &str) -> Result<f64> {
    if z.norm() <= tol::ORTHOGONAL {
        return Err(Error::UndefinedPhase(format!("{what} vanishes")));
    }
    Ok(wrap(z.arg()))
}

/// `arg(cos s1 cos s2 - e^{-i alpha} sin s1 sin s2 cos beta)`.
pub fn phase_closed_form_su3(p: &TriangleParamsSU3) -> Result<PhaseResult> {
    p.validate()?;
    let (s1, c1) = p.s1.sin_cos();
    let (s2, c2) = p.s2.sin_cos();
    let z = Complex64::new(c1 * c2, 0.0) - cis(-p.alpha) * (s1 * s2 * p.beta.cos());
    let phi = phase_of(z, "overlap of the third vertex with the first")?;
    Ok(PhaseResult::exact(phi, PhaseMethod::ClosedForm))
}

/// SU(4) analogue, with `cos beta` replaced by the first direction
/// component `cos b1 cos b2 - sin b1 sin b2 cos b3`.
pub fn phase_closed_form_su4(p: &TriangleParamsSU4) -> Result<PhaseResult> {
    p.validate()?;
    let (s1, c1) = p.s1.sin_cos();
    let (s2, c2) = p.s2.sin_cos();
    let k = p.direction()[0];
    let z = Complex64::new(c1 * c2, 0.0) - cis(-p.alpha) * (s1 * s2 * k);
    let phi = phase_of(z, "overlap of the third vertex with the first")?;
    Ok(PhaseResult::exact(phi, PhaseMethod::ClosedForm))
}

/// `U3 U2 U1 v1`, the image of the first vertex after the full cycle.
pub fn cycle_image(t: &GeodesicTriangle) -> StateVector {
    t.legs()
        .iter()
        .fold(t.vertices()[0].clone(), |psi, leg| {
            apply(leg.evolution(), &psi).expect("legs share the triangle dimension")
        })
}

/// Composes the three leg evolutions and reads the phase off
/// `<v1|U3 U2 U1 v1>`.
pub fn phase_operator_cycle(t: &GeodesicTriangle) -> Result<PhaseResult> {
    let [v1, _, v3] = t.vertices();
    if v1.braket(v3).norm() <= tol::ORTHOGONAL {
        return Err(Error::UndefinedPhase(
            "third vertex is orthogonal to the first".into(),
        ));
    }
    let psi4 = cycle_image(t);
    let phi = wrap(-v1.braket(&psi4).arg());
    let residual = psi4.distance(&v1.with_phase(-phi));
    if residual > tol::CYCLE_RESIDUAL {
        return Err(Error::InconsistentCycle { residual });
    }
    Ok(PhaseResult {
        phi_g: phi,
        method: PhaseMethod::OperatorCycle,
        residual,
    })
}

/// `arg(<v1|v2><v2|v3><v3|v1>)` for arbitrary representatives.
pub fn bargmann_phase(vertices: &[StateVector; 3]) -> Result<f64> {
    let [a, b, c] = vertices;
    let pairs = [(a, b), (b, c), (c, a)];
    let mut product = Complex64::new(1.0, 0.0);
    for (k, (x, y)) in pairs.iter().enumerate() {
        let z = x.braket(y);
        if z.norm() <= tol::ORTHOGONAL {
            return Err(Error::UndefinedPhase(format!(
                "vertices {} and {} are orthogonal",
                k + 1,
                (k + 1) % 3 + 1
            )));
        }
        product *= z;
    }
    Ok(wrap(product.arg()))
}

pub fn phase_bargmann(t: &GeodesicTriangle) -> Result<PhaseResult> {
    Ok(PhaseResult::exact(bargmann_phase(t.vertices())?, PhaseMethod::Bargmann))
}
