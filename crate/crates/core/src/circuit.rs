//! N-channel interferometers as ordered lists of two-channel elements, built
//! from geodesic triangles and simulated on field amplitudes.
//!
//! Elements are stored in the order the light meets them, so the transfer
//! matrix is `E_m ... E_2 E_1`.

use serde::{Deserialize, Serialize};

use crate::angle::{arg_or_zero, wrap};
use crate::decompose::solve_column_pattern;
use crate::error::{Error, Result};
use crate::lift::{lift_su2, PhotonNumber};
use crate::state::StateVector;
use crate::tol;
use crate::triangle::{reparametrize_psi3, TriangleParamsSU3, TriangleParamsSU4};
use crate::unitary::{apply, beam_splitter, embed, BeamSplitterParams, ChannelPair, UnitaryMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct OpticalElement {
    pub pair: ChannelPair,
    pub params: BeamSplitterParams,
    pub label: String,
}

impl OpticalElement {
    pub fn new(pair: ChannelPair, params: BeamSplitterParams, label: impl Into<String>) -> Self {
        Self {
            pair,
            params,
            label: label.into(),
        }
    }

    pub fn block(&self) -> Result<UnitaryMatrix> {
        beam_splitter(self.params)
    }

    pub fn materialize(&self) -> Result<UnitaryMatrix> {
        embed(&self.block()?, self.pair)
    }

    pub fn is_phase_shifter(&self) -> bool {
        self.params.theta == 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetlistRecord", into = "NetlistRecord")]
pub struct Circuit {
    n: usize,
    elements: Vec<OpticalElement>,
}

impl Circuit {
    pub fn new(n: usize, elements: Vec<OpticalElement>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("a circuit needs at least two channels".into()));
        }
        for e in &elements {
            if e.pair.n() != n {
                return Err(Error::InvalidArgument(format!(
                    "element '{}' on {} belongs to a {}-channel system, circuit has {n}",
                    e.label,
                    e.pair,
                    e.pair.n()
                )));
            }
            e.block()?;
        }
        Ok(Self { n, elements })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[OpticalElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn input_ports(&self) -> Vec<String> {
        (1..=self.n).map(|k| format!("{k}_in")).collect()
    }

    pub fn output_ports(&self) -> Vec<String> {
        (1..=self.n).map(|k| format!("{k}_out")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuits serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: NetlistRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        Self::try_from(record)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRecord {
    pair: [usize; 2],
    params: [f64; 3],
    label: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetlistRecord {
    n: usize,
    elements: Vec<ElementRecord>,
}

impl TryFrom<NetlistRecord> for Circuit {
    type Error = Error;

    fn try_from(r: NetlistRecord) -> Result<Self> {
        let elements = r
            .elements
            .into_iter()
            .map(|e| {
                let [phi_t, theta, phi_r] = e.params;
                Ok(OpticalElement::new(
                    ChannelPair::new(e.pair[0], e.pair[1], r.n)?,
                    BeamSplitterParams::new(phi_t, theta, phi_r),
                    e.label,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::new(r.n, elements)
    }
}

impl From<Circuit> for NetlistRecord {
    fn from(c: Circuit) -> Self {
        NetlistRecord {
            n: c.n,
            elements: c
                .elements
                .into_iter()
                .map(|e| {
                    let (i, j) = e.pair.channels();
                    ElementRecord {
                        pair: [i, j],
                        params: [e.params.phi_t, e.params.theta, e.params.phi_r],
                        label: e.label,
                    }
                })
                .collect(),
        }
    }
}

/// Sign given to `xi` in the reflected phase of the third-leg frame element
/// `R23(chi, tau, -+xi)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum XiSign {
    /// `(chi, tau, -xi)`: closes the cycle.
    #[default]
    Negative,
    /// `(chi, tau, xi)`: kept for comparison; closes only when `xi = 0`.
    Positive,
}

fn check_path(name: &str, s: f64, end: f64) -> Result<()> {
    if !s.is_finite() || s < -tol::CONSTRUCTION || s > end + tol::CONSTRUCTION {
        return Err(Error::InvalidArgument(format!(
            "{name} = {s} outside its leg range [0, {end}]"
        )));
    }
    Ok(())
}

struct Builder {
    n: usize,
    elements: Vec<OpticalElement>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Self {
            n,
            elements: Vec::new(),
        }
    }

    fn push(&mut self, i: usize, j: usize, params: BeamSplitterParams, label: &str) -> Result<()> {
        let pair = ChannelPair::new(i, j, self.n)?;
        self.elements.push(OpticalElement::new(pair, params, label));
        Ok(())
    }

    fn rotation(&mut self, s: f64, label: &str) -> Result<()> {
        self.push(1, 2, BeamSplitterParams::rotation(s), label)
    }

    fn finish(self) -> Result<Circuit> {
        Circuit::new(self.n, self.elements)
    }
}

/// Nine-element SU(3) interferometer traversing the triangle of `p` up to
/// path parameters `s1`, `s2`, `s3`.
///
/// Leg 1 is `R_{s1}`. Leg 2 is `R_{s1_0} . R23(alpha, beta, 0) . R_{s2} .
/// R23(alpha, beta, 0)^-1 . R_{-s1_0}`. Leg 3 is `W . R_{-s3} . W^-1` with
/// `W = R23(chi, tau, -xi)` from [`reparametrize_psi3`]; its end value is
/// `eta`.
pub fn build_su3_circuit(p: &TriangleParamsSU3, s1: f64, s2: f64, s3: f64) -> Result<Circuit> {
    build_su3_circuit_with(p, s1, s2, s3, XiSign::default())
}

pub fn build_su3_circuit_with(
    p: &TriangleParamsSU3,
    s1: f64,
    s2: f64,
    s3: f64,
    sign: XiSign,
) -> Result<Circuit> {
    p.validate()?;
    let r = reparametrize_psi3(&p.vertices()[2])?;
    check_path("s1", s1, p.s1)?;
    check_path("s2", s2, p.s2)?;
    check_path("s3", s3, r.eta)?;

    let omega1 = BeamSplitterParams::new(p.alpha, p.beta, 0.0);
    let xi = match sign {
        XiSign::Negative => -r.xi,
        XiSign::Positive => r.xi,
    };
    let omega2 = BeamSplitterParams::new(r.chi, r.tau, xi);

    let mut b = Builder::new(3);
    b.rotation(s1, "U1.leg")?;
    b.rotation(-p.s1, "U2.unrotate")?;
    b.push(2, 3, omega1.inverse(), "U2.Omega1_inv")?;
    b.rotation(s2, "U2.leg")?;
    b.push(2, 3, omega1, "U2.Omega1")?;
    b.rotation(p.s1, "U2.rotate")?;
    b.push(2, 3, omega2.inverse(), "U3.Omega2_inv")?;
    b.rotation(-s3, "U3.leg")?;
    b.push(2, 3, omega2, "U3.Omega2")?;
    b.finish()
}

/// Frame of the third leg: `e1` is fixed and `e2` is sent to the direction
/// from `e1` toward `v`, with `v = e^{i xi}(cos eta, sin eta w)`.
/// Returns `(eta, [A, B, C])` for the pattern `R23 . R34 . R23`.
fn closing_frame(v: &StateVector) -> (f64, [BeamSplitterParams; 3]) {
    let a = v.amplitudes();
    let xi = arg_or_zero(a[0]);
    let tail = [a[1], a[2], a[3]];
    let rest = tail.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let eta = rest.atan2(a[0].norm());
    if rest <= tol::ORTHOGONAL {
        return (eta, [BeamSplitterParams::IDENTITY; 3]);
    }
    let scale = crate::angle::cis(-xi) / rest;
    (eta, solve_column_pattern(tail.map(|z| z * scale)))
}

/// Seventeen-element SU(4) interferometer.
///
/// Leg 2 uses `V2 = A . B . C` on pairs (2,3), (3,4), (2,3) with `V2 e2`
/// equal to the direction `(e^{i alpha} K, L, M)` of the third vertex; leg 3
/// uses a frame of the same shape fixed by closure. Both are solved by
/// [`solve_column_pattern`], so the leading (2,3) element of each is the
/// identity and the (3,4) elements are the identity when the direction
/// has no fourth component.
pub fn build_su4_circuit(p: &TriangleParamsSU4, s1: f64, s2: f64, s3: f64) -> Result<Circuit> {
    p.validate()?;
    let [k, l, m] = p.direction();
    let v2 = solve_column_pattern([
        crate::angle::cis(p.alpha) * k,
        l.into(),
        m.into(),
    ]);
    let psi3 = &p.vertices()[2];
    let (eta, v3) = closing_frame(psi3);
    check_path("s1", s1, p.s1)?;
    check_path("s2", s2, p.s2)?;
    check_path("s3", s3, eta)?;

    let pairs = [(2, 3), (3, 4), (2, 3)];
    let names = ["A", "B", "C"];
    let mut b = Builder::new(4);
    b.rotation(s1, "U1.leg")?;
    b.rotation(-p.s1, "U2.unrotate")?;
    for idx in 0..3 {
        let (i, j) = pairs[idx];
        b.push(i, j, v2[idx].inverse(), &format!("U2.V2.{}_inv", names[idx]))?;
    }
    b.rotation(s2, "U2.leg")?;
    for idx in (0..3).rev() {
        let (i, j) = pairs[idx];
        b.push(i, j, v2[idx], &format!("U2.V2.{}", names[idx]))?;
    }
    b.rotation(p.s1, "U2.rotate")?;
    for idx in 0..3 {
        let (i, j) = pairs[idx];
        b.push(i, j, v3[idx].inverse(), &format!("U3.V3.{}_inv", names[idx]))?;
    }
    b.rotation(-s3, "U3.leg")?;
    for idx in (0..3).rev() {
        let (i, j) = pairs[idx];
        b.push(i, j, v3[idx], &format!("U3.V3.{}", names[idx]))?;
    }
    let circuit = b.finish()?;

    // the frames must send the second vertex to the third and the third to
    // the ray of the first
    let t = transfer_matrix(&circuit);
    if (s1, s2, s3) == (p.s1, p.s2, eta) {
        let out = apply(&t, &StateVector::basis(4, 0))?;
        let residual = out.amplitudes()[1..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if residual > tol::CYCLE_RESIDUAL {
            return Err(Error::DecompositionFailure { residual });
        }
    }
    Ok(circuit)
}

/// End values `(s1_0, s2_0, s3_0)` of an SU(3) triangle's circuit.
pub fn su3_end_values(p: &TriangleParamsSU3) -> Result<(f64, f64, f64)> {
    p.validate()?;
    let r = reparametrize_psi3(&p.vertices()[2])?;
    Ok((p.s1, p.s2, r.eta))
}

pub fn su4_end_values(p: &TriangleParamsSU4) -> Result<(f64, f64, f64)> {
    p.validate()?;
    let (eta, _) = closing_frame(&p.vertices()[2]);
    Ok((p.s1, p.s2, eta))
}

/// `E_m ... E_1`.
pub fn transfer_matrix(c: &Circuit) -> UnitaryMatrix {
    c.elements().iter().fold(UnitaryMatrix::identity(c.n()), |acc, e| {
        e.materialize().expect("validated element").compose(&acc)
    })
}

pub fn simulate_single_photon(c: &Circuit, input: &StateVector) -> Result<StateVector> {
    check_dim(c, input)?;
    apply(&transfer_matrix(c), input)
}

/// Amplitudes after each element, starting with the input.
pub fn simulate_trace(c: &Circuit, input: &StateVector) -> Result<Vec<StateVector>> {
    check_dim(c, input)?;
    let mut out = Vec::with_capacity(c.len() + 1);
    out.push(input.clone());
    for e in c.elements() {
        let next = apply(&e.materialize()?, out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

fn check_dim(c: &Circuit, input: &StateVector) -> Result<()> {
    if input.dim() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: c.n(),
            found: input.dim(),
        });
    }
    Ok(())
}

/// One element acting on `lambda` photons shared between its two channels;
/// basis index is the number of photons in the element's second channel.
pub fn simulate_two_channel_multiphoton(
    e: &OpticalElement,
    photons: PhotonNumber,
    input: &StateVector,
) -> Result<StateVector> {
    let lifted = lift_su2(&e.block()?, photons)?;
    if input.dim() != lifted.dim() {
        return Err(Error::DimensionMismatch {
            expected: lifted.dim(),
            found: input.dim(),
        });
    }
    apply(&lifted, input)
}

/// Phase picked up by port 1 light: `phi_g` with `T e1 = e^{-i phi_g} e1`,
/// and the distance of `T e1` from that ray.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub phi_g: f64,
    pub residual: f64,
}

pub fn closure(c: &Circuit) -> Result<ClosureReport> {
    let e1 = StateVector::basis(c.n(), 0);
    let out = simulate_single_photon(c, &e1)?;
    let z = out.amplitudes()[0];
    if z.norm() <= tol::ORTHOGONAL {
        return Err(Error::UndefinedPhase("port 1 output has no amplitude on channel 1".into()));
    }
    let phi_g = wrap(-z.arg());
    Ok(ClosureReport {
        phi_g,
        residual: out.distance(&e1.with_phase(-phi_g)),
    })
}
