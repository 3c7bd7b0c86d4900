//! Lifting a two-channel SU(2) element to the (lambda+1)-dimensional space
//! of lambda indistinguishable photons in those two channels.
//!
//! Basis state `k` (zero-based, `k = 0..=lambda`) holds `lambda - k` photons
//! in the first channel and `k` photons in the second, normalized as a Fock
//! state `(a1^dagger)^{lambda-k} (a2^dagger)^k / sqrt((lambda-k)! k!) |0,0>`.
//! A photon creation operator transforms like the single-photon amplitude,
//! `a_c^dagger -> sum_r U_{rc} a_r^dagger`, which makes the map a group
//! homomorphism and reproduces `U` itself at `lambda = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::unitary::UnitaryMatrix;

/// Largest photon number for which the factorial weights stay well inside
/// `f64` range.
pub const MAX_PHOTONS: u32 = 170;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhotonNumber(pub u32);

impl PhotonNumber {
    /// Dimension `lambda + 1` of the representation.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

fn binomial(fact: &[f64], n: usize, k: usize) -> f64 {
    fact[n] / (fact[k] * fact[n - k])
}

/// The spin-`lambda/2` representation of a 2x2 special unitary.
pub fn lift_su2(u: &UnitaryMatrix, photons: PhotonNumber) -> Result<UnitaryMatrix> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    u.check_special()?;
    if photons.0 > MAX_PHOTONS {
        return Err(Error::InvalidParameter(format!(
            "photon number {} exceeds the supported maximum {MAX_PHOTONS}",
            photons.0
        )));
    }
    let lambda = photons.0 as usize;
    let fact = factorials(lambda);
    let (u11, u12, u21, u22) = (u.entry(0, 0), u.entry(0, 1), u.entry(1, 0), u.entry(1, 1));

    let m = Matrix::from_fn(lambda + 1, |row, col| {
        // (u11 a1 + u21 a2)^{lambda-col} (u12 a1 + u22 a2)^col, keep the
        // a1^{lambda-row} a2^row monomial; p counts a2 factors from the first bracket
        let k = col;
        let lo = row.saturating_sub(k);
        let hi = (lambda - k).min(row);
        let mut sum = Complex64::new(0.0, 0.0);
        for p in lo..=hi {
            let q = row - p;
            let coeff = binomial(&fact, lambda - k, p) * binomial(&fact, k, q);
            let term = u11.powu((lambda - k - p) as u32)
                * u21.powu(p as u32)
                * u12.powu((k - q) as u32)
                * u22.powu(q as u32);
            sum += term * coeff;
        }
        let weight = ((fact[lambda - row] * fact[row]) / (fact[lambda - k] * fact[k])).sqrt();
        sum * weight
    });
    Ok(UnitaryMatrix::from_trusted(m))
}
