//! Float functions that build without `std`. Backed by `libm` on every
//! target so results do not depend on the platform math library or on
//! which features of `num-traits` happen to be enabled in a build.

use num_complex::Complex64;

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

pub(crate) fn tan(x: f64) -> f64 {
    libm::tan(x)
}

pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

/// Non-negative remainder of `x / m` for `m > 0`.
pub(crate) fn rem_euclid(x: f64, m: f64) -> f64 {
    let r = libm::fmod(x, m);
    if r < 0.0 {
        r + m
    } else {
        r
    }
}

/// `r e^{i theta}`
pub(crate) fn polar(r: f64, theta: f64) -> Complex64 {
    let (s, c) = libm::sincos(theta);
    Complex64::new(r * c, r * s)
}

/// `|z|`
pub(crate) fn modulus(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// `arg z` in `(-pi, pi]`
pub(crate) fn arg(z: Complex64) -> f64 {
    atan2(z.im, z.re)
}
