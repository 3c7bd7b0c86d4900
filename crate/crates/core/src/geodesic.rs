//! Geodesic curves between rays and the one-parameter unitaries that move a
//! state along them.
//!
//! A leg from `a` to `b` (with `<b|a>` real and non-negative) is realized as
//! `U(s) = V R_s V^dagger`, where `R_s` is the real rotation in the plane of
//! the first two channels and `V` is a frame whose first column is `a` and
//! second column the unit vector along `b - a <b|a>`. `R_s` is the identity
//! outside that plane, so `U(s)` does not depend on how `V` is completed.

use num_complex::Complex64;

use crate::angle::wrap;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::state::{norm, StateVector};
use crate::tol;
use crate::unitary::{
    beam_splitter, embed, special_unitarize, BeamSplitterParams, ChannelPair, UnitaryMatrix,
};

/// Real rotation by `s` in the (1,2) channel plane of a `dim`-channel system.
pub fn reference_rotation(s: f64, dim: usize) -> Result<UnitaryMatrix> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "reference rotation needs at least two channels, got {dim}"
        )));
    }
    let block = beam_splitter(BeamSplitterParams::rotation(s))?;
    embed(&block, ChannelPair::new(1, 2, dim)?)
}

/// A representative of a ray together with the phase that was applied to
/// obtain it: `state = e^{i phase} * original`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rephased {
    pub state: StateVector,
    pub phase: f64,
}

/// Rephases `b` so that `<b'|a>` is real and positive.
pub fn leg_rephase(a: &StateVector, b: &StateVector) -> Result<Rephased> {
    check_dims(a, b)?;
    let overlap = b.braket(a);
    if overlap.norm() <= tol::ORTHOGONAL {
        return Err(Error::UndefinedRephase);
    }
    let phase = wrap(overlap.arg());
    Ok(Rephased {
        state: b.with_phase(phase),
        phase,
    })
}

fn check_dims(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Real overlap `<b|a>` together with the unit vector along `b - a <b|a>`
/// and the arc length between the rays.
struct LegGeometry {
    overlap: f64,
    direction: Vec<Complex64>,
    s_end: f64,
}

fn leg_geometry(a: &StateVector, b: &StateVector) -> Result<LegGeometry> {
    check_dims(a, b)?;
    let z = b.braket(a);
    if z.im.abs() > tol::UNITARY || z.re < -tol::UNITARY {
        return Err(Error::Precondition(format!(
            "overlap <b|a> = {z} is not real and non-negative; rephase the endpoint first"
        )));
    }
    let c = z.re.max(0.0);
    // projecting out the full complex overlap, twice, keeps the direction
    // orthogonal to `a` to working precision even on very short legs
    let mut w = b.amplitudes().to_vec();
    for _ in 0..2 {
        let proj = a.braket_slice(&w);
        for (wi, &x) in w.iter_mut().zip(a.amplitudes()) {
            *wi -= x * proj;
        }
    }
    let w_norm = norm(&w);
    if w_norm <= tol::DEGENERATE_LEG {
        return Err(Error::DegenerateLeg);
    }
    Ok(LegGeometry {
        overlap: c,
        direction: w.into_iter().map(|x| x / w_norm).collect(),
        s_end: w_norm.atan2(c),
    })
}

/// The point at arc length `s` on the geodesic from `a` towards `b`,
/// `a cos s + (b - a<b|a>)/sqrt(1 - <b|a>^2) sin s`.
pub fn geodesic_curve(a: &StateVector, b: &StateVector, s: f64) -> Result<StateVector> {
    let geo = leg_geometry(a, b)?;
    if !(s >= -tol::CONSTRUCTION && s <= geo.s_end + tol::CONSTRUCTION) {
        return Err(Error::InvalidArgument(format!(
            "s = {s} outside the leg range [0, {}]",
            geo.s_end
        )));
    }
    Ok(curve_point(a, &geo.direction, s))
}

fn curve_point(a: &StateVector, direction: &[Complex64], s: f64) -> StateVector {
    let (sn, cs) = s.sin_cos();
    StateVector::from_unchecked(
        a.amplitudes()
            .iter()
            .zip(direction)
            .map(|(&x, &w)| x * cs + w * sn)
            .collect(),
    )
}

/// One leg of a geodesic polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicLeg {
    start: StateVector,
    end: StateVector,
    s_end: f64,
    frame: UnitaryMatrix,
    evolution: UnitaryMatrix,
}

impl GeodesicLeg {
    /// A zero-length leg sitting at `at`.
    pub fn trivial(at: &StateVector) -> Self {
        let n = at.dim();
        Self {
            start: at.clone(),
            end: at.clone(),
            s_end: 0.0,
            frame: UnitaryMatrix::identity(n),
            evolution: UnitaryMatrix::identity(n),
        }
    }

    pub fn start(&self) -> &StateVector {
        &self.start
    }

    pub fn end(&self) -> &StateVector {
        &self.end
    }

    /// Arc length `arccos <end|start>`.
    pub fn s_end(&self) -> f64 {
        self.s_end
    }

    pub fn is_trivial(&self) -> bool {
        self.s_end == 0.0
    }

    pub fn frame(&self) -> &UnitaryMatrix {
        &self.frame
    }

    /// `U(s_end)`.
    pub fn evolution(&self) -> &UnitaryMatrix {
        &self.evolution
    }

    /// `U(s) = V R_s V^dagger`.
    pub fn evolution_at(&self, s: f64) -> UnitaryMatrix {
        if self.is_trivial() {
            return UnitaryMatrix::identity(self.start.dim());
        }
        evolution_from_frame(&self.frame, s)
    }
}

/// `V R_s V^dagger` for an arbitrary frame `V`.
pub fn evolution_from_frame(frame: &UnitaryMatrix, s: f64) -> UnitaryMatrix {
    let r = reference_rotation(s, frame.dim()).expect("frames have at least two channels");
    frame.compose(&r).compose(&frame.adjoint())
}

/// Completes `columns` to an orthonormal basis of C^n by Gram-Schmidt over
/// the standard basis, always taking the candidate with the largest
/// residual (lowest index on ties). The residual of the chosen candidate is
/// at least `1/sqrt(n)`.
fn complete_orthonormal(mut columns: Vec<Vec<Complex64>>, n: usize) -> Vec<Vec<Complex64>> {
    while columns.len() < n {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for k in 0..n {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[k] = Complex64::new(1.0, 0.0);
            // two passes keep the result orthogonal to working precision
            for _ in 0..2 {
                for q in &columns {
                    let proj: Complex64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= qi * proj;
                    }
                }
            }
            let r = norm(&v);
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, v));
            }
        }
        let (r, v) = best.expect("n > columns.len() leaves at least one candidate");
        columns.push(v.into_iter().map(|x| x / r).collect());
    }
    columns
}

/// Builds the geodesic leg from `a` to `b`. Requires `<b|a>` real,
/// non-negative and below one.
pub fn geodesic_evolution(a: &StateVector, b: &StateVector) -> Result<GeodesicLeg> {
    let geo = leg_geometry(a, b)?;
    let n = a.dim();
    let columns = complete_orthonormal(vec![a.amplitudes().to_vec(), geo.direction.clone()], n);
    let frame = UnitaryMatrix::from_trusted(Matrix::from_columns(&columns)?);
    // scaling by a global phase keeps the first two columns' span and
    // therefore the evolution
    let frame = special_unitarize(&frame);
    let evolution = evolution_from_frame(&frame, geo.s_end);
    debug_assert!((geo.overlap - geo.s_end.cos()).abs() < 1e-8);
    Ok(GeodesicLeg {
        start: a.clone(),
        end: b.clone(),
        s_end: geo.s_end,
        frame,
        evolution,
    })
}

/// Outcome of a pointwise geodesy check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicCheck {
    pub geodesic: bool,
    pub max_deviation: f64,
}

/// Samples the leg's evolution at `samples` evenly spaced points of
/// `[0, s_end]` and compares against the geodesic curve.
pub fn is_geodesic(leg: &GeodesicLeg, samples: usize) -> GeodesicCheck {
    is_geodesic_path(leg.start(), leg.end(), leg.s_end(), |s| leg.evolution_at(s), samples)
}

/// Same check for an arbitrary path `s -> U(s)` claimed to connect `start`
/// to `end` over `[0, s_end]`.
pub fn is_geodesic_path(
    start: &StateVector,
    end: &StateVector,
    s_end: f64,
    path: impl Fn(f64) -> UnitaryMatrix,
    samples: usize,
) -> GeodesicCheck {
    if s_end == 0.0 || samples == 0 {
        return GeodesicCheck {
            geodesic: true,
            max_deviation: 0.0,
        };
    }
    let geo = match leg_geometry(start, end) {
        Ok(g) => g,
        Err(_) => {
            return GeodesicCheck {
                geodesic: false,
                max_deviation: f64::INFINITY,
            }
        }
    };
    let mut max_dev: f64 = 0.0;
    for k in 0..samples {
        let s = if samples == 1 {
            0.0
        } else {
            s_end * k as f64 / (samples - 1) as f64
        };
        let moved = StateVector::from_unchecked(path(s).as_matrix().mul_vec(start.amplitudes()));
        let expected = curve_point(start, &geo.direction, s);
        max_dev = max_dev.max(moved.distance(&expected));
    }
    GeodesicCheck {
        geodesic: max_dev <= tol::GEODESIC,
        max_deviation: max_dev,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{haar_special_unitary, random_state};
    use crate::unitary::apply;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x6e0d)
    }

    #[test]
    fn reference_rotation_shapes() {
        assert_eq!(reference_rotation(0.0, 3).unwrap(), UnitaryMatrix::identity(3));
        let q = reference_rotation(FRAC_PI_2, 3).unwrap();
        let out = apply(&q, &StateVector::basis(3, 0)).unwrap();
        assert!(out.distance(&StateVector::basis(3, 1)) < 1e-15);

        let r4 = reference_rotation(0.37, 4).unwrap();
        for row in 2..4 {
            for col in 0..4 {
                let expect = if row == col { 1.0 } else { 0.0 };
                assert_eq!(r4.entry(row, col), Complex64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn curve_endpoints_and_midpoint() {
        let c: f64 = 0.9;
        let a = StateVector::basis(3, 0);
        let b = StateVector::from_real(&[c.cos(), c.sin(), 0.0]).unwrap();
        assert!(geodesic_curve(&a, &b, 0.0).unwrap().distance(&a) < 1e-15);
        let s0 = b.braket(&a).re.acos();
        assert!(geodesic_curve(&a, &b, s0).unwrap().distance(&b) < 1e-12);
        let mid = geodesic_curve(&a, &b, c / 2.0).unwrap();
        let expect = StateVector::from_real(&[(c / 2.0).cos(), (c / 2.0).sin(), 0.0]).unwrap();
        assert!(mid.distance(&expect) < 1e-15);
    }

    #[test]
    fn curve_preconditions() {
        let a = StateVector::basis(2, 0);
        let b = StateVector::new(vec![Complex64::new(0.0, 0.6), Complex64::new(0.8, 0.0)]).unwrap();
        assert!(matches!(geodesic_curve(&a, &b, 0.1), Err(Error::Precondition(_))));
        assert!(matches!(geodesic_curve(&a, &a, 0.0), Err(Error::DegenerateLeg)));
        let b = StateVector::from_real(&[0.6, 0.8]).unwrap();
        assert!(matches!(geodesic_curve(&a, &b, 2.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn orthogonal_endpoints_are_allowed() {
        let a = StateVector::basis(3, 0);
        let b = StateVector::basis(3, 2);
        let leg = geodesic_evolution(&a, &b).unwrap();
        assert!((leg.s_end() - FRAC_PI_2).abs() < 1e-15);
        assert!(apply(leg.evolution(), &a).unwrap().distance(&b) < 1e-12);
    }

    #[test]
    fn rephase_properties() {
        let mut r = rng();
        let a = random_state(4, &mut r);
        let b = random_state(4, &mut r);
        let out = leg_rephase(&a, &b).unwrap();
        let z = out.state.braket(&a);
        assert!(z.im.abs() <= 1e-14 && z.re > 0.0);
        assert!(out.state.distance(&b.with_phase(out.phase)) < 1e-15);

        let shifted = leg_rephase(&a, &b.with_phase(1.234)).unwrap();
        assert!(shifted.state.distance(&out.state) < 1e-14);

        let real = StateVector::from_real(&[0.6, 0.8, 0.0, 0.0]).unwrap();
        let same = leg_rephase(&StateVector::basis(4, 0), &real).unwrap();
        assert_eq!(same.phase, 0.0);
        assert_eq!(same.state, real);

        assert!(matches!(
            leg_rephase(&StateVector::basis(4, 0), &StateVector::basis(4, 1)),
            Err(Error::UndefinedRephase)
        ));
    }

    #[test]
    fn first_leg_of_the_reference_triangle_is_the_reference_rotation() {
        let s1: f64 = 0.7;
        let a = StateVector::basis(3, 0);
        let b = StateVector::from_real(&[s1.cos(), s1.sin(), 0.0]).unwrap();
        let leg = geodesic_evolution(&a, &b).unwrap();
        let r = reference_rotation(s1, 3).unwrap();
        assert!(leg.evolution().max_abs_diff(&r) < 1e-12);
        for k in 0..5 {
            let s = s1 * k as f64 / 4.0;
            assert!(leg.evolution_at(s).max_abs_diff(&reference_rotation(s, 3).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn evolution_is_identity_at_zero() {
        let mut r = rng();
        for _ in 0..20 {
            let a = random_state(4, &mut r);
            let b = leg_rephase(&a, &random_state(4, &mut r)).unwrap().state;
            let leg = geodesic_evolution(&a, &b).unwrap();
            assert!(leg.evolution_at(0.0).max_abs_diff(&UnitaryMatrix::identity(4)) <= 1e-12);
        }
    }

    #[test]
    fn evolution_follows_the_curve() {
        let mut r = rng();
        for n in [2, 3, 4, 6] {
            let a = random_state(n, &mut r);
            let b = leg_rephase(&a, &random_state(n, &mut r)).unwrap().state;
            let leg = geodesic_evolution(&a, &b).unwrap();
            assert!(apply(leg.evolution(), &a).unwrap().distance(&b) <= 1e-10);
            for k in 0..10 {
                let s = leg.s_end() * k as f64 / 9.0;
                let moved = apply(&leg.evolution_at(s), &a).unwrap();
                let expect = geodesic_curve(&a, &b, s).unwrap();
                assert!(moved.distance(&expect) <= 1e-10);
                let diag = a.braket(&moved);
                assert!((diag - Complex64::new(s.cos(), 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn evolution_does_not_depend_on_the_frame_completion() {
        let mut r = rng();
        for n in [3, 4, 5] {
            let a = random_state(n, &mut r);
            let b = leg_rephase(&a, &random_state(n, &mut r)).unwrap().state;
            let leg = geodesic_evolution(&a, &b).unwrap();
            // rotate the completion columns by an arbitrary unitary
            let w = haar_special_unitary(n - 2, &mut r);
            let mut mix = Matrix::identity(n);
            for i in 0..n - 2 {
                for j in 0..n - 2 {
                    mix[(i + 2, j + 2)] = w.entry(i, j);
                }
            }
            let other = leg.frame().compose(&UnitaryMatrix::new(mix).unwrap());
            for s in [0.0, 0.3 * leg.s_end(), leg.s_end()] {
                let u1 = leg.evolution_at(s);
                let u2 = evolution_from_frame(&other, s);
                assert!(u1.max_abs_diff(&u2) <= 1e-12);
            }
        }
    }

    #[test]
    fn geodesy_check_accepts_legs_and_rejects_detours() {
        let mut r = rng();
        let a = random_state(3, &mut r);
        let b = leg_rephase(&a, &random_state(3, &mut r)).unwrap().state;
        let leg = geodesic_evolution(&a, &b).unwrap();
        let check = is_geodesic(&leg, 32);
        assert!(check.geodesic && check.max_deviation <= 1e-12);

        // phase bump on channel 3 that vanishes at both ends
        let s_end = leg.s_end();
        let detour = |s: f64| {
            let bump = (std::f64::consts::PI * s / s_end).sin();
            let mut m = Matrix::identity(3);
            m[(2, 2)] = Complex64::from_polar(1.0, 0.8 * bump);
            UnitaryMatrix::new(m).unwrap().compose(&leg.evolution_at(s))
        };
        assert!(apply(&detour(s_end), &a).unwrap().distance(&b) < 1e-10);
        let bad = is_geodesic_path(&a, &b, s_end, detour, 32);
        assert!(!bad.geodesic);
        assert!(bad.max_deviation > 1e-3);
    }

    #[test]
    fn zero_length_leg_is_vacuously_geodesic() {
        let a = StateVector::basis(3, 0);
        let check = is_geodesic(&GeodesicLeg::trivial(&a), 32);
        assert!(check.geodesic);
        assert_eq!(check.max_deviation, 0.0);
    }
}
