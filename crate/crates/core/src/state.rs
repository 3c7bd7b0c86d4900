//! Normalized state vectors in C^N.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// A unit vector in C^N, the representative of a ray on SU(N)/U(N-1).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates finiteness and unit norm within [`tol::UNITARY`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidArgument("state vector must be non-empty".into()));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("state vector has non-finite amplitudes".into()));
        }
        let norm = norm(&amps);
        if (norm - 1.0).abs() > tol::UNITARY {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Scales an arbitrary non-zero vector onto the unit sphere.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let n = norm(&amps);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidArgument("cannot normalize a zero or non-finite vector".into()));
        }
        Self::new(amps.into_iter().map(|z| z / n).collect())
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The standard basis vector `e_k` (zero-based) of C^dim.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// Built from arithmetic already known to preserve the norm.
    pub(crate) fn from_unchecked(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// `<self|ket>`, antilinear in `self`.
    pub fn braket(&self, ket: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), ket.dim(), "state dimensions must agree");
        self.amps.iter().zip(&ket.amps).map(|(b, k)| b.conj() * k).sum()
    }

    pub(crate) fn braket_slice(&self, ket: &[Complex64]) -> Complex64 {
        self.amps.iter().zip(ket).map(|(b, k)| b.conj() * k).sum()
    }

    /// `e^{i phase} |self>`.
    pub fn with_phase(&self, phase: f64) -> StateVector {
        let z = Complex64::from_polar(1.0, phase);
        Self {
            amps: self.amps.iter().map(|&a| a * z).collect(),
        }
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "state dimensions must agree");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
