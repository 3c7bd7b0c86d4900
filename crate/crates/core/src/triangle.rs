//! Geodesic triangles on SU(3)/U(2) and SU(4)/U(3).
//!
//! The first vertex is the pole `e_1`, the second lies on the reference
//! geodesic at distance `s1`, and the third carries the remaining
//! parameters. Every leg is a [`GeodesicLeg`]; the third leg ends on the
//! ray of the first vertex, on the representative that makes its overlap
//! with the third vertex real and positive.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{arg_or_zero, cis};
use crate::error::{Error, Result};
use crate::geodesic::{geodesic_evolution, leg_rephase, GeodesicLeg};
use crate::state::StateVector;
use crate::tol;

fn check_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be finite")));
    }
    if value < lo - tol::CONSTRUCTION || value > hi + tol::CONSTRUCTION {
        return Err(Error::InvalidParameter(format!(
            "{name} = {value} outside [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Generating parameters of an SU(3)/U(2) triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleParamsSU3 {
    pub s1: f64,
    pub s2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl TriangleParamsSU3 {
    /// `s1, s2` in [0, pi/2], `alpha` in [-pi, pi], `beta` in [0, pi].
    pub fn validate(&self) -> Result<()> {
        check_range("s1", self.s1, 0.0, FRAC_PI_2)?;
        check_range("s2", self.s2, 0.0, FRAC_PI_2)?;
        check_range("alpha", self.alpha, -PI, PI)?;
        check_range("beta", self.beta, 0.0, PI)
    }

    pub fn vertices(&self) -> [StateVector; 3] {
        let (s1, c1) = self.s1.sin_cos();
        let (s2, c2) = self.s2.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        let e = cis(self.alpha);
        let third = vec![
            Complex64::new(c1 * c2, 0.0) - e * (s1 * s2 * cb),
            Complex64::new(s1 * c2, 0.0) + e * (c1 * s2 * cb),
            Complex64::new(sb * s2, 0.0),
        ];
        [
            StateVector::basis(3, 0),
            StateVector::from_unchecked(vec![
                Complex64::new(c1, 0.0),
                Complex64::new(s1, 0.0),
                Complex64::new(0.0, 0.0),
            ]),
            StateVector::from_unchecked(third),
        ]
    }
}

/// Generating parameters of an SU(4)/U(3) triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleParamsSU4 {
    pub s1: f64,
    pub s2: f64,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

impl TriangleParamsSU4 {
    pub fn validate(&self) -> Result<()> {
        check_range("s1", self.s1, 0.0, FRAC_PI_2)?;
        check_range("s2", self.s2, 0.0, FRAC_PI_2)?;
        check_range("alpha", self.alpha, -PI, PI)?;
        check_range("beta1", self.beta1, 0.0, PI)?;
        check_range("beta2", self.beta2, 0.0, PI)?;
        check_range("beta3", self.beta3, 0.0, PI)
    }

    /// Unit direction `(k, l, m)` that the third vertex leaves along in
    /// channels 2..4 of the frame rotated by `s1`:
    /// `k = cos b1 cos b2 - sin b1 sin b2 cos b3`,
    /// `l = cos b1 sin b2 + sin b1 cos b2 cos b3`, `m = sin b1 sin b3`.
    pub fn direction(&self) -> [f64; 3] {
        let (sb1, cb1) = self.beta1.sin_cos();
        let (sb2, cb2) = self.beta2.sin_cos();
        let (sb3, cb3) = self.beta3.sin_cos();
        [
            cb1 * cb2 - sb1 * sb2 * cb3,
            cb1 * sb2 + sb1 * cb2 * cb3,
            sb1 * sb3,
        ]
    }

    pub fn vertices(&self) -> [StateVector; 3] {
        let (s1, c1) = self.s1.sin_cos();
        let (s2, c2) = self.s2.sin_cos();
        let [k, l, m] = self.direction();
        let e = cis(self.alpha);
        let zero = Complex64::new(0.0, 0.0);
        let third = vec![
            Complex64::new(c1 * c2, 0.0) - e * (s1 * s2 * k),
            Complex64::new(s1 * c2, 0.0) + e * (c1 * s2 * k),
            Complex64::new(l * s2, 0.0),
            Complex64::new(m * s2, 0.0),
        ];
        [
            StateVector::basis(4, 0),
            StateVector::from_unchecked(vec![Complex64::new(c1, 0.0), Complex64::new(s1, 0.0), zero, zero]),
            StateVector::from_unchecked(third),
        ]
    }

    /// The SU(3) triangle this one reduces to when `beta3 = 0`: the
    /// direction becomes `(cos(b1 + b2), sin(b1 + b2), 0)`, so
    /// `beta = beta1 + beta2`. `None` when `beta3 != 0` or the sum leaves
    /// [0, pi].
    pub fn su3_reduction(&self) -> Option<TriangleParamsSU3> {
        if self.beta3 != 0.0 {
            return None;
        }
        let beta = self.beta1 + self.beta2;
        if beta > PI {
            return None;
        }
        Some(TriangleParamsSU3 {
            s1: self.s1,
            s2: self.s2,
            alpha: self.alpha,
            beta,
        })
    }
}

/// Three vertices joined by geodesic legs.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicTriangle {
    vertices: [StateVector; 3],
    legs: [GeodesicLeg; 3],
}

impl GeodesicTriangle {
    /// Joins the vertices by geodesics, rephasing each endpoint against the
    /// previous one. Coincident consecutive rays are an error.
    pub fn from_vertices(vertices: [StateVector; 3]) -> Result<Self> {
        Self::build(vertices, true)
    }

    /// Like [`GeodesicTriangle::from_vertices`], but coincident rays give a
    /// zero-length leg instead of an error.
    pub fn from_vertices_lenient(vertices: [StateVector; 3]) -> Result<Self> {
        Self::build(vertices, false)
    }

    fn build(vertices: [StateVector; 3], strict: bool) -> Result<Self> {
        let n = vertices[0].dim();
        if n < 2 {
            return Err(Error::InvalidArgument("triangle vertices need at least two channels".into()));
        }
        for v in &vertices[1..] {
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                });
            }
        }
        let [v1, v2, v3] = vertices;
        let leg1 = link(&v1, &v2, 1, strict)?;
        let leg2 = link(leg1.end(), &v3, 2, strict)?;
        let leg3 = link(leg2.end(), &v1, 3, strict)?;
        Ok(Self {
            vertices: [v1, leg1.end().clone(), leg2.end().clone()],
            legs: [leg1, leg2, leg3],
        })
    }

    /// The vertex representatives the legs run between.
    pub fn vertices(&self) -> &[StateVector; 3] {
        &self.vertices
    }

    pub fn legs(&self) -> &[GeodesicLeg; 3] {
        &self.legs
    }

    pub fn group_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Where the third leg lands: the first vertex's ray, rephased.
    pub fn closing_target(&self) -> &StateVector {
        self.legs[2].end()
    }

    pub fn has_trivial_leg(&self) -> bool {
        self.legs.iter().any(GeodesicLeg::is_trivial)
    }

    /// The same triangle traversed as `v1 -> v3 -> v2 -> v1`.
    pub fn reversed(&self) -> Result<Self> {
        let [a, b, c] = self.vertices.clone();
        Self::build([a, c, b], !self.has_trivial_leg())
    }
}

fn link(a: &StateVector, b: &StateVector, k: usize, strict: bool) -> Result<GeodesicLeg> {
    let target = match leg_rephase(a, b) {
        Ok(r) => r.state,
        // orthogonal rays: the overlap is already real, and the geodesic is
        // still finite
        Err(Error::UndefinedRephase) => b.clone(),
        Err(e) => return Err(e),
    };
    match geodesic_evolution(a, &target) {
        Ok(leg) => Ok(leg),
        Err(Error::DegenerateLeg) if strict => Err(Error::DegenerateTriangle(format!(
            "vertices {k} and {} represent the same ray",
            k % 3 + 1
        ))),
        Err(Error::DegenerateLeg) => Ok(GeodesicLeg::trivial(a)),
        Err(e) => Err(e),
    }
}

pub fn triangle_su3(p: &TriangleParamsSU3) -> Result<GeodesicTriangle> {
    p.validate()?;
    GeodesicTriangle::from_vertices(p.vertices())
}

pub fn triangle_su4(p: &TriangleParamsSU4) -> Result<GeodesicTriangle> {
    p.validate()?;
    GeodesicTriangle::from_vertices(p.vertices())
}

/// `psi3 = (e^{i xi} cos eta, e^{i(xi+chi)} sin eta cos tau, sin eta sin tau)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReparamPsi3 {
    pub xi: f64,
    pub eta: f64,
    pub tau: f64,
    pub chi: f64,
}

impl ReparamPsi3 {
    pub fn reconstruct(&self) -> StateVector {
        let (se, ce) = self.eta.sin_cos();
        let (st, ct) = self.tau.sin_cos();
        StateVector::from_unchecked(vec![
            cis(self.xi) * ce,
            cis(self.xi + self.chi) * (se * ct),
            Complex64::new(se * st, 0.0),
        ])
    }
}

/// Splits a three-channel vertex with real non-negative third amplitude
/// into `(xi, eta, tau, chi)`. On the pole `tau = chi = 0`; with a vanishing
/// first amplitude `xi = 0`; with a vanishing second amplitude `chi = 0`.
pub fn reparametrize_psi3(psi3: &StateVector) -> Result<ReparamPsi3> {
    if psi3.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: psi3.dim(),
        });
    }
    let [p1, p2, p3] = [psi3.amplitudes()[0], psi3.amplitudes()[1], psi3.amplitudes()[2]];
    if p3.im.abs() > tol::CONSTRUCTION || p3.re < -tol::CONSTRUCTION {
        return Err(Error::Precondition(format!(
            "third amplitude {p3} must be real and non-negative"
        )));
    }
    let third = p3.re.max(0.0);
    let rest = (p2.norm_sqr() + third * third).sqrt();
    let eta = rest.atan2(p1.norm());
    let xi = arg_or_zero(p1);
    if rest <= tol::ORTHOGONAL {
        return Ok(ReparamPsi3 {
            xi,
            eta,
            tau: 0.0,
            chi: 0.0,
        });
    }
    let tau = third.atan2(p2.norm());
    let chi = if p2.norm() <= tol::ORTHOGONAL {
        0.0
    } else {
        crate::angle::wrap(p2.arg() - xi)
    };
    Ok(ReparamPsi3 { xi, eta, tau, chi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_state, random_triangle_su3, random_triangle_su4};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(314)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn su3_vertices_match_the_closed_forms() {
        let p = TriangleParamsSU3 {
            s1: 0.4,
            s2: 1.1,
            alpha: 0.9,
            beta: 2.0,
        };
        let [v1, v2, v3] = p.vertices();
        assert_eq!(v1, StateVector::basis(3, 0));
        assert!((v2.braket(&v1) - c(p.s1.cos(), 0.0)).norm() < 1e-15);
        assert!((v3.braket(&v2) - c(p.s2.cos(), 0.0)).norm() < 1e-15);
        assert!((v3.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perpendicular_beta_gives_a_real_third_vertex() {
        let (s1, s2) = (0.6, 0.8);
        let p = TriangleParamsSU3 {
            s1,
            s2,
            alpha: 1.3,
            beta: FRAC_PI_2,
        };
        let v3 = &p.vertices()[2];
        let expect = [s1.cos() * s2.cos(), s1.sin() * s2.cos(), s2.sin()];
        for (z, e) in v3.amplitudes().iter().zip(expect) {
            assert!((z - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn overlap_of_the_first_leg_is_cos_s1() {
        let mut r = rng();
        for _ in 0..100 {
            let p = random_triangle_su3(&mut r);
            let [v1, v2, _] = p.vertices();
            assert!((v2.braket(&v1) - c(p.s1.cos(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn coincident_vertices_are_rejected() {
        let p = TriangleParamsSU3 {
            s1: 0.0,
            s2: 0.5,
            alpha: 0.2,
            beta: 0.3,
        };
        assert!(matches!(triangle_su3(&p), Err(Error::DegenerateTriangle(_))));
        let t = GeodesicTriangle::from_vertices_lenient(p.vertices()).unwrap();
        assert!(t.legs()[0].is_trivial());
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        let p = TriangleParamsSU3 {
            s1: 2.0,
            s2: 0.5,
            alpha: 0.2,
            beta: 0.3,
        };
        assert!(matches!(triangle_su3(&p), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn su4_vertex_is_normalized() {
        let mut r = rng();
        for _ in 0..1000 {
            let p = random_triangle_su4(&mut r);
            assert!((p.vertices()[2].norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn su4_reduces_to_su3_without_the_fourth_channel() {
        let mut r = rng();
        for _ in 0..200 {
            let base = random_triangle_su4(&mut r);
            let p = TriangleParamsSU4 {
                beta3: 0.0,
                beta1: base.beta1 * 0.5,
                beta2: base.beta2 * 0.5,
                ..base
            };
            let v4 = &p.vertices()[2];
            assert!(v4.amplitudes()[3].norm() < 1e-15);
            let q = p.su3_reduction().unwrap();
            let v3 = &q.vertices()[2];
            for k in 0..3 {
                assert!((v4.amplitudes()[k] - v3.amplitudes()[k]).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn all_betas_zero_gives_a_planar_triangle() {
        let p = TriangleParamsSU4 {
            s1: 0.5,
            s2: 0.7,
            alpha: 1.0,
            beta1: 0.0,
            beta2: 0.0,
            beta3: 0.0,
        };
        let v = &p.vertices()[2];
        assert_eq!(v.amplitudes()[2], c(0.0, 0.0));
        assert_eq!(v.amplitudes()[3], c(0.0, 0.0));
    }

    #[test]
    fn triangle_legs_close_on_the_first_ray() {
        let mut r = rng();
        for _ in 0..50 {
            let t = triangle_su3(&random_triangle_su3(&mut r)).unwrap();
            let target = t.closing_target();
            let overlap = target.braket(&t.vertices()[0]);
            assert!((overlap.norm() - 1.0).abs() < 1e-12);
            let z = target.braket(&t.vertices()[2]);
            assert!(z.im.abs() < 1e-12 && z.re >= 0.0);
        }
    }

    #[test]
    fn reparametrization_conventions() {
        let pole = reparametrize_psi3(&StateVector::basis(3, 0)).unwrap();
        assert_eq!(
            pole,
            ReparamPsi3 {
                xi: 0.0,
                eta: 0.0,
                tau: 0.0,
                chi: 0.0
            }
        );
        let bottom = reparametrize_psi3(&StateVector::basis(3, 2)).unwrap();
        assert!((bottom.eta - FRAC_PI_2).abs() < 1e-15);
        assert!((bottom.tau - FRAC_PI_2).abs() < 1e-15);
        assert_eq!((bottom.xi, bottom.chi), (0.0, 0.0));

        let complex_third = StateVector::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(matches!(reparametrize_psi3(&complex_third), Err(Error::Precondition(_))));
    }

    #[test]
    fn reparametrization_round_trips() {
        let mut r = rng();
        for _ in 0..500 {
            let raw = random_state(3, &mut r);
            let a = raw.amplitudes();
            let third = Complex64::new(a[2].norm(), 0.0);
            let v = StateVector::new(vec![a[0], a[1], third]).unwrap();
            let rp = reparametrize_psi3(&v).unwrap();
            assert!(rp.eta >= 0.0 && rp.eta <= FRAC_PI_2);
            assert!(rp.tau >= 0.0 && rp.tau <= PI);
            assert!(rp.reconstruct().distance(&v) <= 1e-12);
        }
        for _ in 0..200 {
            let p = random_triangle_su3(&mut r);
            let v3 = p.vertices()[2].clone();
            let rp = reparametrize_psi3(&v3).unwrap();
            assert!(rp.reconstruct().distance(&v3) <= 1e-12);
        }
        // mixed precision sanity: small components
        let eps: f64 = r.random_range(1e-9..1e-8);
        let v = StateVector::normalized(vec![c(1.0, 0.0), c(eps, eps), c(eps, 0.0)]).unwrap();
        assert!(reparametrize_psi3(&v).unwrap().reconstruct().distance(&v) < 1e-14);
    }
}
