//! Angle helpers. Every phase in the crate lives on the principal branch
//! (-pi, pi].

use std::f64::consts::PI;

use num_complex::Complex64;

/// Map an angle onto (-pi, pi].
pub fn wrap(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Distance between two angles measured on the circle, `|arg e^{i(a-b)}|`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

/// Principal argument with the convention `arg 0 = 0`.
pub fn arg_or_zero(z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        0.0
    } else {
        wrap(z.arg())
    }
}

/// `e^{i theta}`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
