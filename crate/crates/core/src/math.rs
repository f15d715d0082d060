//! Elementary functions routed through `libm` so the crate builds without `std`
//! and produces the same bits on every target.

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `ln(cosh z)` for `z ≥ 0` without overflow.
pub(crate) fn ln_cosh(z: f64) -> f64 {
    z + ln_1p(exp(-2.0 * z)) - core::f64::consts::LN_2
}
