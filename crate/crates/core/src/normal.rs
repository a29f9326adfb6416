//! Standard normal density and distribution function.
//!
//! `Phi(x) = erfc(-x / sqrt 2) / 2`, with `erfc` from `libm` (the FreeBSD
//! msun implementation, error below one ulp). Going through `erfc` keeps full
//! relative accuracy in the lower tail, where `1 - Phi(-x)` would cancel.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

#[inline]
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}
