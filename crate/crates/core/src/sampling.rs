//! Random states, Haar-distributed unitaries and random triangle
//! parameters. Used by property tests, the acceptance suite and sweeps.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::Matrix;
use crate::state::{norm, StateVector};
use crate::triangle::{TriangleParamsSU3, TriangleParamsSU4};
use crate::unitary::{special_unitarize, SU2Params, UnitaryMatrix};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Uniformly distributed unit vector in C^n.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
        if norm(&v) > 1e-8 {
            return StateVector::normalized(v).expect("non-zero vector normalizes");
        }
    }
}

/// Haar-random element of U(n): QR of a complex Ginibre matrix with the
/// phases of R's diagonal moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= qi * proj;
                }
            }
        }
        // dividing by the norm makes R's diagonal real positive, which is
        // the phase correction that yields the Haar measure
        let r = norm(&v);
        cols.push(v.into_iter().map(|x| x / r).collect());
    }
    UnitaryMatrix::new(Matrix::from_columns(&cols).expect("square")).expect("orthonormal columns")
}

/// Haar-random element of SU(n).
pub fn haar_special_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    special_unitarize(&haar_unitary(n, rng))
}

pub fn random_su2_params<R: Rng + ?Sized>(rng: &mut R) -> SU2Params {
    SU2Params::new(
        rng.random_range(-PI..PI),
        rng.random_range(0.0..PI),
        rng.random_range(-PI..PI),
    )
}

/// Uniform draw over the canonical parameter box.
pub fn random_triangle_su3<R: Rng + ?Sized>(rng: &mut R) -> TriangleParamsSU3 {
    TriangleParamsSU3 {
        s1: rng.random_range(0.0..PI / 2.0),
        s2: rng.random_range(0.0..PI / 2.0),
        alpha: rng.random_range(-PI..PI),
        beta: rng.random_range(0.0..PI),
    }
}

pub fn random_triangle_su4<R: Rng + ?Sized>(rng: &mut R) -> TriangleParamsSU4 {
    TriangleParamsSU4 {
        s1: rng.random_range(0.0..PI / 2.0),
        s2: rng.random_range(0.0..PI / 2.0),
        alpha: rng.random_range(-PI..PI),
        beta1: rng.random_range(0.0..PI),
        beta2: rng.random_range(0.0..PI),
        beta3: rng.random_range(0.0..PI),
    }
}
