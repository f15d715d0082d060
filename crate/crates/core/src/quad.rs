//! Composite Simpson quadrature with repeated interval halving.

use crate::error::{Error, Result};

/// Largest number of subintervals tried before giving up.
pub const MAX_SUBINTERVALS: usize = 1 << 20;

/// Integrates `f` over `[a, b]`, starting from `initial` subintervals and
/// halving the step until two successive estimates differ by less than `tol`.
///
/// Every refinement reuses the previous nodes, so each level costs only the
/// new midpoints.
pub fn simpson<F>(mut f: F, a: f64, b: f64, initial: usize, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::domain(
            "quadrature interval must be finite with a <= b",
            b - a,
        ));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut n = initial.max(2);
    n += n % 2;
    let mut h = (b - a) / n as f64;

    let ends = f(a)? + f(b)?;
    let mut even = 0.0;
    let mut odd = 0.0;
    for i in 1..n {
        let y = f(a + i as f64 * h)?;
        if i % 2 == 0 {
            even += y;
        } else {
            odd += y;
        }
    }
    let mut estimate = h / 3.0 * (ends + 2.0 * even + 4.0 * odd);

    while n < MAX_SUBINTERVALS {
        n *= 2;
        h *= 0.5;
        even += odd;
        odd = 0.0;
        for i in (1..n).step_by(2) {
            odd += f(a + i as f64 * h)?;
        }
        let refined = h / 3.0 * (ends + 2.0 * even + 4.0 * odd);
        let diff = (refined - estimate).abs();
        estimate = refined;
        if diff < tol {
            return Ok(estimate);
        }
    }
    Err(Error::convergence("composite simpson", MAX_SUBINTERVALS))
}
