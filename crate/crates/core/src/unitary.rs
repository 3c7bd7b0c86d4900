//! Unitary matrices, the SU(2) building blocks and their embedding into
//! N-channel transformations.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{arg_or_zero, cis, wrap};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::state::StateVector;
use crate::tol;

/// A validated unitary matrix. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    m: Matrix,
}

impl UnitaryMatrix {
    /// Accepts `m` if it is finite and `max |M^dagger M - I| <= 1e-10`.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        let defect = m.unitarity_defect();
        if defect > tol::UNITARY {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self { m })
    }

    /// Like [`UnitaryMatrix::new`] but also requires `|det - 1| <= 1e-10`.
    pub fn new_special(m: Matrix) -> Result<Self> {
        let u = Self::new(m)?;
        u.check_special()?;
        Ok(u)
    }

    /// Wraps a matrix produced by arithmetic that keeps it unitary
    /// (products, adjoints and embeddings of validated matrices).
    pub(crate) fn from_trusted(m: Matrix) -> Self {
        debug_assert!(m.unitarity_defect() < 1e-8);
        Self { m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: Matrix::identity(dim),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    #[inline]
    pub fn as_matrix(&self) -> &Matrix {
        &self.m
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.m[(r, c)]
    }

    pub fn determinant(&self) -> Complex64 {
        self.m.determinant()
    }

    pub fn is_special(&self) -> bool {
        (self.determinant() - 1.0).norm() <= tol::UNITARY
    }

    pub fn check_special(&self) -> Result<()> {
        let defect = (self.determinant() - 1.0).norm();
        if defect > tol::UNITARY {
            return Err(Error::NotSpecial { defect });
        }
        Ok(())
    }

    /// The inverse, which is the adjoint.
    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    /// `self * rhs`.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Self {
        Self { m: &self.m * &rhs.m }
    }

    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        self.m.max_abs_diff(&other.m)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.m.unitarity_defect()
    }
}

/// Ordered product `ms[0] * ms[1] * ... * ms[k-1]`.
pub fn product<'a>(dim: usize, ms: impl IntoIterator<Item = &'a UnitaryMatrix>) -> UnitaryMatrix {
    ms.into_iter()
        .fold(UnitaryMatrix::identity(dim), |acc, m| acc.compose(m))
}

/// Euler angles of `R_z(alpha) R_y(beta) R_z(gamma)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SU2Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl SU2Params {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    /// Canonical Euler angles of a 2x2 special unitary, read from its first
    /// column `(e^{i(alpha+gamma)} cos beta, e^{i(gamma-alpha)} sin beta)`.
    ///
    /// `beta` lands in [0, pi/2]; `alpha`, `gamma` in (-pi, pi]. An
    /// undetermined phase is set to zero.
    pub fn from_su2(block: &UnitaryMatrix) -> Result<Self> {
        let (a, c) = su2_first_column(block)?;
        let beta = c.norm().atan2(a.norm());
        let sum = arg_or_zero(a);
        let diff = arg_or_zero(c);
        Ok(Self {
            alpha: wrap((sum - diff) / 2.0),
            beta,
            gamma: wrap((sum + diff) / 2.0),
        })
    }

    fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()
    }
}

/// Generalized lossless beam splitter: transmitted phase, mixing angle and
/// reflected phase. A phase shifter is the `theta = 0` case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterParams {
    pub phi_t: f64,
    pub theta: f64,
    pub phi_r: f64,
}

impl BeamSplitterParams {
    pub fn new(phi_t: f64, theta: f64, phi_r: f64) -> Self {
        Self { phi_t, theta, phi_r }
    }

    pub const IDENTITY: Self = Self {
        phi_t: 0.0,
        theta: 0.0,
        phi_r: 0.0,
    };

    /// Real rotation by `s` in the channel plane.
    pub fn rotation(s: f64) -> Self {
        Self::new(0.0, s, 0.0)
    }

    /// Fraction `cos^2 theta` of the light transmitted.
    pub fn transmission(&self) -> f64 {
        self.theta.cos().powi(2)
    }

    /// Parameters of the inverse element.
    pub fn inverse(&self) -> Self {
        Self::new(-self.phi_t, -self.theta, self.phi_r)
    }

    /// The element whose first column is `(a, b)`; undetermined phases are
    /// set to zero.
    pub fn from_first_column(a: Complex64, b: Complex64) -> Self {
        Self {
            phi_t: arg_or_zero(a),
            theta: b.norm().atan2(a.norm()),
            phi_r: arg_or_zero(b),
        }
    }

    pub fn from_su2(block: &UnitaryMatrix) -> Result<Self> {
        let (a, b) = su2_first_column(block)?;
        Ok(Self::from_first_column(a, b))
    }

    pub fn is_identity(&self) -> bool {
        beam_splitter(*self)
            .map(|m| m.max_abs_diff(&UnitaryMatrix::identity(2)) <= tol::CONSTRUCTION)
            .unwrap_or(false)
    }

    fn is_finite(&self) -> bool {
        self.phi_t.is_finite() && self.theta.is_finite() && self.phi_r.is_finite()
    }
}

impl From<SU2Params> for BeamSplitterParams {
    fn from(p: SU2Params) -> Self {
        Self::new(p.alpha + p.gamma, p.beta, p.gamma - p.alpha)
    }
}

fn su2_first_column(block: &UnitaryMatrix) -> Result<(Complex64, Complex64)> {
    if block.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: block.dim(),
        });
    }
    block.check_special()?;
    Ok((block.entry(0, 0), block.entry(1, 0)))
}

/// Pair of channels `(i, j)`, one-based with `1 <= i < j <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelPair {
    i: usize,
    j: usize,
    n: usize,
}

impl ChannelPair {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i < 1 || i >= j || j > n {
            return Err(Error::InvalidChannel { i, j, n });
        }
        Ok(Self { i, j, n })
    }

    /// One-based channel indices.
    pub fn channels(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    /// Zero-based row/column indices.
    pub fn indices(&self) -> (usize, usize) {
        (self.i - 1, self.j - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_adjacent(&self) -> bool {
        self.j == self.i + 1
    }
}

impl fmt::Display for ChannelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// `diag(e^{ia}, e^{-ia}) * [[cos b, -sin b], [sin b, cos b]] * diag(e^{ig}, e^{-ig})`.
pub fn su2_from_euler(p: SU2Params) -> Result<UnitaryMatrix> {
    if !p.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite Euler angles {p:?}")));
    }
    let (s, c) = p.beta.sin_cos();
    let m = Matrix::from_rows(vec![
        vec![cis(p.alpha + p.gamma) * c, -cis(p.alpha - p.gamma) * s],
        vec![cis(p.gamma - p.alpha) * s, cis(-p.alpha - p.gamma) * c],
    ])?;
    Ok(UnitaryMatrix::from_trusted(m))
}

/// `[[e^{i phi_t} cos t, -e^{-i phi_r} sin t], [e^{i phi_r} sin t, e^{-i phi_t} cos t]]`.
pub fn beam_splitter(p: BeamSplitterParams) -> Result<UnitaryMatrix> {
    if !p.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite beam splitter parameters {p:?}")));
    }
    let (s, c) = p.theta.sin_cos();
    let m = Matrix::from_rows(vec![
        vec![cis(p.phi_t) * c, -cis(-p.phi_r) * s],
        vec![cis(p.phi_r) * s, cis(-p.phi_t) * c],
    ])?;
    Ok(UnitaryMatrix::from_trusted(m))
}

/// Places a 2x2 special unitary on channels `(i, j)` of an `n`-channel
/// identity.
pub fn embed(block: &UnitaryMatrix, at: ChannelPair) -> Result<UnitaryMatrix> {
    if block.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: block.dim(),
        });
    }
    block.check_special()?;
    let (i, j) = at.indices();
    let mut m = Matrix::identity(at.n());
    m[(i, i)] = block.entry(0, 0);
    m[(i, j)] = block.entry(0, 1);
    m[(j, i)] = block.entry(1, 0);
    m[(j, j)] = block.entry(1, 1);
    Ok(UnitaryMatrix::from_trusted(m))
}

/// `U * det(U)^{-1/N}` with the principal N-th root.
pub fn special_unitarize(u: &UnitaryMatrix) -> UnitaryMatrix {
    let det = u.determinant();
    let root = cis(-arg_or_zero(det) / u.dim() as f64);
    UnitaryMatrix::from_trusted(u.as_matrix().scale(root))
}

/// Matrix-vector product `U v`.
pub fn apply(u: &UnitaryMatrix, v: &StateVector) -> Result<StateVector> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(StateVector::from_unchecked(u.as_matrix().mul_vec(v.amplitudes())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat2(rows: [[Complex64; 2]; 2]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    /// Plain 2x2 complex product, written out element by element.
    fn mul2(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ]
    }

    #[test]
    fn euler_zero_is_identity() {
        let u = su2_from_euler(SU2Params::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(u, UnitaryMatrix::identity(2));
    }

    #[test]
    fn euler_middle_factor_is_real_rotation() {
        let b = 0.7;
        let u = su2_from_euler(SU2Params::new(0.0, b, 0.0)).unwrap();
        let expect = mat2([[c(b.cos(), 0.0), c(-b.sin(), 0.0)], [c(b.sin(), 0.0), c(b.cos(), 0.0)]]);
        assert!(u.as_matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn euler_matches_explicit_three_factor_product() {
        let (a, b, g) = (FRAC_PI_3, FRAC_PI_4, FRAC_PI_6);
        let z = |t: f64| Complex64::from_polar(1.0, t);
        let zero = c(0.0, 0.0);
        let rz_a = [[z(a), zero], [zero, z(-a)]];
        let ry = [[c(b.cos(), 0.0), c(-b.sin(), 0.0)], [c(b.sin(), 0.0), c(b.cos(), 0.0)]];
        let rz_g = [[z(g), zero], [zero, z(-g)]];
        let oracle = mul2(mul2(rz_a, ry), rz_g);
        let u = su2_from_euler(SU2Params::new(a, b, g)).unwrap();
        assert!(u.as_matrix().max_abs_diff(&mat2(oracle)) < 1e-15);
        assert!((u.determinant() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn non_finite_parameters_are_rejected() {
        assert!(matches!(
            su2_from_euler(SU2Params::new(f64::NAN, 0.0, 0.0)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            beam_splitter(BeamSplitterParams::new(0.0, f64::INFINITY, 0.0)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn beam_splitter_special_cases() {
        assert_eq!(beam_splitter(BeamSplitterParams::IDENTITY).unwrap(), UnitaryMatrix::identity(2));

        let t = 0.3;
        let rot = beam_splitter(BeamSplitterParams::rotation(t)).unwrap();
        let expect = mat2([[c(t.cos(), 0.0), c(-t.sin(), 0.0)], [c(t.sin(), 0.0), c(t.cos(), 0.0)]]);
        assert!(rot.as_matrix().max_abs_diff(&expect) < 1e-15);

        let (pt, pr) = (0.4, -1.1);
        let refl = beam_splitter(BeamSplitterParams::new(pt, FRAC_PI_2, pr)).unwrap();
        let expect = mat2([[c(0.0, 0.0), -cis(-pr)], [cis(pr), c(0.0, 0.0)]]);
        assert!(refl.as_matrix().max_abs_diff(&expect) < 1e-15);
        assert!(BeamSplitterParams::new(pt, FRAC_PI_2, pr).transmission() < 1e-30);
    }

    #[test]
    fn beam_splitter_inverse_is_adjoint() {
        let p = BeamSplitterParams::new(0.3, 1.2, -2.0);
        let u = beam_splitter(p).unwrap();
        let inv = beam_splitter(p.inverse()).unwrap();
        assert!(u.compose(&inv).max_abs_diff(&UnitaryMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn euler_and_beam_splitter_parameters_correspond() {
        let e = SU2Params::new(0.4, 0.9, -1.3);
        let bs: BeamSplitterParams = e.into();
        let a = su2_from_euler(e).unwrap();
        let b = beam_splitter(bs).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);

        let back = SU2Params::from_su2(&a).unwrap();
        assert!(su2_from_euler(back).unwrap().max_abs_diff(&a) < 1e-15);
        let back = BeamSplitterParams::from_su2(&a).unwrap();
        assert!(beam_splitter(back).unwrap().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn embedding_patterns() {
        let id = embed(&UnitaryMatrix::identity(2), ChannelPair::new(2, 3, 3).unwrap()).unwrap();
        assert_eq!(id, UnitaryMatrix::identity(3));

        let s = 0.8;
        let rot = embed(
            &beam_splitter(BeamSplitterParams::rotation(s)).unwrap(),
            ChannelPair::new(1, 2, 3).unwrap(),
        )
        .unwrap();
        let zero = c(0.0, 0.0);
        let expect = Matrix::from_rows(vec![
            vec![c(s.cos(), 0.0), c(-s.sin(), 0.0), zero],
            vec![c(s.sin(), 0.0), c(s.cos(), 0.0), zero],
            vec![zero, zero, c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(rot.as_matrix().max_abs_diff(&expect) < 1e-15);

        let (pt, th, pr) = (0.2, 0.5, 1.4);
        let r23 = embed(
            &beam_splitter(BeamSplitterParams::new(pt, th, pr)).unwrap(),
            ChannelPair::new(2, 3, 3).unwrap(),
        )
        .unwrap();
        let expect = Matrix::from_rows(vec![
            vec![c(1.0, 0.0), zero, zero],
            vec![zero, cis(pt) * th.cos(), -cis(-pr) * th.sin()],
            vec![zero, cis(pr) * th.sin(), cis(-pt) * th.cos()],
        ])
        .unwrap();
        assert!(r23.as_matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn embedding_rejects_bad_pairs() {
        assert!(matches!(ChannelPair::new(2, 2, 3), Err(Error::InvalidChannel { .. })));
        assert!(matches!(ChannelPair::new(0, 1, 3), Err(Error::InvalidChannel { .. })));
        assert!(matches!(ChannelPair::new(2, 4, 3), Err(Error::InvalidChannel { .. })));
    }

    #[test]
    fn embeddings_on_disjoint_pairs_commute() {
        let a = embed(
            &su2_from_euler(SU2Params::new(0.3, 0.7, -0.2)).unwrap(),
            ChannelPair::new(1, 2, 4).unwrap(),
        )
        .unwrap();
        let b = embed(
            &su2_from_euler(SU2Params::new(-1.0, 0.1, 0.9)).unwrap(),
            ChannelPair::new(3, 4, 4).unwrap(),
        )
        .unwrap();
        assert!(a.compose(&b).max_abs_diff(&b.compose(&a)) <= 1e-14);
    }

    #[test]
    fn special_unitarize_fixes_the_determinant() {
        let d = Matrix::from_rows(vec![vec![c(0.0, 1.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 1.0)]])
            .unwrap();
        let u = UnitaryMatrix::new(d).unwrap();
        assert!((u.determinant() + 1.0).norm() < 1e-15);
        let su = special_unitarize(&u);
        // det = -1 = e^{i pi}; scaling by e^{-i pi/2} sends i to 1
        assert!(su.max_abs_diff(&UnitaryMatrix::identity(2)) < 1e-15);
        assert!((su.determinant() - 1.0).norm() < 1e-12);

        let phi = 2.1;
        let mut m = Matrix::identity(3);
        m[(0, 0)] = cis(phi);
        let su = special_unitarize(&UnitaryMatrix::new(m).unwrap());
        assert!((su.determinant() - 1.0).norm() <= 1e-12);

        let already = su2_from_euler(SU2Params::new(0.5, 0.5, 0.5)).unwrap();
        assert!(special_unitarize(&already).max_abs_diff(&already) < 1e-15);
    }

    #[test]
    fn non_unitary_matrices_are_rejected() {
        let m = Matrix::from_rows(vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(UnitaryMatrix::new(m), Err(Error::NotUnitary { .. })));
        let mut d = Matrix::identity(2);
        d[(0, 0)] = cis(PI / 3.0);
        assert!(matches!(UnitaryMatrix::new_special(d), Err(Error::NotSpecial { .. })));
    }

    #[test]
    fn apply_rotation_to_first_channel() {
        let s = 0.6;
        let r = embed(
            &beam_splitter(BeamSplitterParams::rotation(s)).unwrap(),
            ChannelPair::new(1, 2, 3).unwrap(),
        )
        .unwrap();
        let out = apply(&r, &StateVector::basis(3, 0)).unwrap();
        let expect = StateVector::from_real(&[s.cos(), s.sin(), 0.0]).unwrap();
        assert!(out.distance(&expect) < 1e-15);

        let v = StateVector::basis(3, 2);
        assert_eq!(apply(&UnitaryMatrix::identity(3), &v).unwrap(), v);
        assert!(matches!(
            apply(&UnitaryMatrix::identity(2), &v),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
