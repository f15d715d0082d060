//! Central and noncentral chi-square and F distributions.
//!
//! Noncentrality is stored on the *distance* scale `δ`: a noncentral
//! chi-square with `df` degrees of freedom is the squared length of a
//! `df`-dimensional standard normal vector translated by distance `δ`. The
//! usual sum-of-squares noncentrality is `λ = δ²`; the conversion happens
//! only inside the Poisson-mixture evaluators. `δ = 0` always routes to the
//! central distribution.

use crate::error::{Error, Result};
use crate::math::{exp, floor, ln, sqrt};
use crate::quad;
use crate::roots;
use crate::specfun::{
    log_bessel_i, log_gamma, reg_inc_beta, reg_inc_gamma_p, reg_inc_gamma_q, Accuracy,
};

/// Residual tolerance on the probability scale for quantiles.
pub const QUANTILE_TOL: f64 = 1e-10;

/// Cutoff for both the term size and the Poisson tail bound in the mixture series.
pub const SERIES_CUTOFF: f64 = 1e-13;

const QUAD_TOL: f64 = 1e-10;
const RUBEN_SUBINTERVALS: usize = 64;
const EXPECTATION_TAIL: f64 = 1e-14;

fn check_df(df: f64) -> Result<()> {
    if df > 0.0 && df.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "degrees of freedom must be finite and positive",
            df,
        ))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta >= 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "noncentrality must be finite and nonnegative",
            delta,
        ))
    }
}

fn check_x(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "distribution argument must be nonnegative",
            x,
        ))
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("probability must lie in (0, 1)", p))
    }
}

/// Central chi-square distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    df: f64,
}

impl ChiSquare {
    pub fn new(df: f64) -> Result<Self> {
        check_df(df)?;
        Ok(ChiSquare { df })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        if x.is_infinite() {
            return Ok(1.0);
        }
        reg_inc_gamma_p(0.5 * self.df, 0.5 * x)
    }

    /// Upper tail `1 - cdf(x)`, evaluated directly.
    pub fn sf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        if x.is_infinite() {
            return Ok(0.0);
        }
        reg_inc_gamma_q(0.5 * self.df, 0.5 * x)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        invert_cdf(|x| self.cdf(x), p, self.df.max(1.0))
    }

    pub(crate) fn ln_pdf(&self, x: f64) -> Result<f64> {
        let half = 0.5 * self.df;
        Ok((half - 1.0) * ln(x) - 0.5 * x - half * core::f64::consts::LN_2 - log_gamma(half)?)
    }
}

/// Finds `x ≥ 0` with `cdf(x) = p` for a continuous cdf with `cdf(0) = 0`.
fn invert_cdf<F>(mut cdf: F, p: f64, start: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut lo = 0.0;
    let mut hi = start;
    let mut expansions = 0;
    while cdf(hi)? < p {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 1100 || hi.is_infinite() {
            return Err(Error::convergence("quantile bracket expansion", expansions));
        }
    }
    let x = roots::brent(|x| Ok(cdf(x)? - p), lo, hi)?;
    if (cdf(x)? - p).abs() > QUANTILE_TOL {
        return Err(Error::convergence(
            "quantile residual check",
            roots::MAX_ITER,
        ));
    }
    Ok(x)
}

/// CDF of the central F distribution with `(df1, df2)` degrees of freedom.
pub fn f_cdf_central(df1: f64, df2: f64, x: f64) -> Result<f64> {
    check_df(df1)?;
    check_df(df2)?;
    check_x(x)?;
    if x.is_infinite() {
        return Ok(1.0);
    }
    reg_inc_beta(0.5 * df1, 0.5 * df2, f_to_beta(df1, df2, x))
}

pub fn f_quantile_central(df1: f64, df2: f64, p: f64) -> Result<f64> {
    check_df(df1)?;
    check_df(df2)?;
    check_probability(p)?;
    invert_cdf(|x| f_cdf_central(df1, df2, x), p, 1.0)
}

fn f_to_beta(df1: f64, df2: f64, x: f64) -> f64 {
    let scaled = df1 * x;
    scaled / (scaled + df2)
}

/// Sums `Σ_k Pois(k; mean) · component(k)` outward from the modal index.
///
/// Each direction stops once the current term and the geometric bound on the
/// remaining Poisson mass are both below [`SERIES_CUTOFF`]. `component` must
/// take values in `[0, 1]`.
fn poisson_mixture<F>(mean: f64, mut component: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let max_terms = Accuracy::DEFAULT.max_iter;
    let ln_mean = ln(mean);
    let weight = |k: f64| -> Result<f64> { Ok(exp(k * ln_mean - mean - log_gamma(k + 1.0)?)) };
    let mode = floor(mean);

    let mut total = 0.0;
    let mut terms = 0;
    let mut k = mode;
    loop {
        let w = weight(k)?;
        let term = w * component(k)?;
        total += term;
        let ratio = mean / (k + 2.0);
        let tail = if ratio < 1.0 {
            w * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if term < SERIES_CUTOFF && tail < SERIES_CUTOFF {
            break;
        }
        k += 1.0;
        terms += 1;
        if terms > max_terms {
            return Err(Error::convergence(
                "poisson mixture (upper side)",
                max_terms,
            ));
        }
    }

    let mut k = mode - 1.0;
    while k >= 0.0 {
        let w = weight(k)?;
        let term = w * component(k)?;
        total += term;
        let ratio = k / mean;
        let tail = w * ratio / (1.0 - ratio);
        if term < SERIES_CUTOFF && tail < SERIES_CUTOFF {
            break;
        }
        k -= 1.0;
        terms += 1;
        if terms > max_terms {
            return Err(Error::convergence(
                "poisson mixture (lower side)",
                max_terms,
            ));
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Noncentral chi-square: squared norm of `N(μ, I_df)` with `‖μ‖ = delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralChiSquare {
    df: f64,
    delta: f64,
}

impl NoncentralChiSquare {
    pub fn new(df: f64, delta: f64) -> Result<Self> {
        check_df(df)?;
        check_delta(delta)?;
        Ok(NoncentralChiSquare { df, delta })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// CDF by the Poisson mixture of central chi-square CDFs.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        if x == 0.0 {
            return Ok(0.0);
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        let half_df = 0.5 * self.df;
        let half_x = 0.5 * x;
        if self.delta == 0.0 {
            return reg_inc_gamma_p(half_df, half_x);
        }
        let mean = 0.5 * self.delta * self.delta;
        poisson_mixture(mean, |k| reg_inc_gamma_p(half_df + k, half_x))
    }

    /// `P(U ≤ r²)` from the Bessel integral representation
    ///
    /// `δ^{1-u/2} e^{-δ²/2} ∫_0^r x^{u/2} e^{-x²/2} I_{u/2-1}(δx) dx`,
    ///
    /// integrated by composite Simpson with the integrand assembled in log
    /// space. Needs `df ≥ 1` so the Bessel order stays at or above `-1/2`.
    /// Intended as an independent check on [`Self::cdf`].
    pub fn cdf_ruben(&self, r: f64) -> Result<f64> {
        if self.delta <= 0.0 {
            return Err(Error::domain(
                "bessel integral needs delta > 0; use the central cdf",
                self.delta,
            ));
        }
        if !(r > 0.0) || r.is_infinite() {
            return Err(Error::domain("radius must be finite and positive", r));
        }
        if self.df < 1.0 {
            return Err(Error::domain("bessel integral needs df >= 1", self.df));
        }
        let u = self.df;
        let delta = self.delta;
        let order = 0.5 * u - 1.0;
        let ln_delta = ln(delta);
        let ln_const = (1.0 - 0.5 * u) * ln_delta - 0.5 * delta * delta;
        // Integrand ~ exp(ln_origin) x^{u-1} as x → 0.
        let ln_origin =
            -0.5 * delta * delta - order * core::f64::consts::LN_2 - log_gamma(0.5 * u)?;
        let ln_integrand = move |x: f64| -> Result<f64> {
            Ok(ln_const + 0.5 * u * ln(x) - 0.5 * x * x + log_bessel_i(order, delta * x)?)
        };

        let origin = if u == 1.0 { exp(ln_origin) } else { 0.0 };
        let value = quad::simpson(
            |x| {
                if x == 0.0 {
                    Ok(origin)
                } else {
                    Ok(exp(ln_integrand(x)?))
                }
            },
            0.0,
            r,
            RUBEN_SUBINTERVALS,
            QUAD_TOL,
        )?;
        Ok(value.clamp(0.0, 1.0))
    }

    /// `∂/∂δ P(U ≤ r²) = -r^{u/2} δ^{1-u/2} e^{-(r²+δ²)/2} I_{u/2}(rδ)`.
    pub fn cdf_ddelta(&self, r: f64) -> Result<f64> {
        if self.delta <= 0.0 {
            return Err(Error::domain(
                "derivative formula needs delta > 0",
                self.delta,
            ));
        }
        if !(r > 0.0) || r.is_infinite() {
            return Err(Error::domain("radius must be finite and positive", r));
        }
        let half_u = 0.5 * self.df;
        let delta = self.delta;
        let ln_mag = half_u * ln(r) + (1.0 - half_u) * ln(delta) - 0.5 * (r * r + delta * delta)
            + log_bessel_i(half_u, r * delta)?;
        Ok(-exp(ln_mag))
    }
}

/// Noncentral F: law of `(U/df1) / (V/df2)` with `U` noncentral chi-square
/// `(df1, delta)` independent of central chi-square `V` with `df2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralF {
    df1: f64,
    df2: f64,
    delta: f64,
}

impl NoncentralF {
    pub fn new(df1: f64, df2: f64, delta: f64) -> Result<Self> {
        check_df(df1)?;
        check_df(df2)?;
        check_delta(delta)?;
        Ok(NoncentralF { df1, df2, delta })
    }

    pub fn df1(&self) -> f64 {
        self.df1
    }

    pub fn df2(&self) -> f64 {
        self.df2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// CDF by the Poisson mixture of incomplete beta functions.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        if x == 0.0 {
            return Ok(0.0);
        }
        if self.delta == 0.0 {
            return f_cdf_central(self.df1, self.df2, x);
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        let y = f_to_beta(self.df1, self.df2, x);
        let a = 0.5 * self.df1;
        let b = 0.5 * self.df2;
        let mean = 0.5 * self.delta * self.delta;
        poisson_mixture(mean, |k| reg_inc_beta(a + k, b, y))
    }

    /// The same CDF computed as `E[F_{df1,δ}(x·df1·V/df2)]` over
    /// `V ~ χ²(df2)`, integrating against the chi-square density on the
    /// scale `w = √V`. The range is truncated where the upper tail of `V`
    /// falls below 1e-14. `nodes` is the starting subinterval count.
    pub fn cdf_by_expectation(&self, x: f64, nodes: usize) -> Result<f64> {
        check_x(x)?;
        if nodes < 16 {
            return Err(Error::domain(
                "expectation quadrature needs at least 16 nodes",
                nodes as f64,
            ));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let v = self.df2;
        let denominator = ChiSquare::new(v)?;
        let numerator = NoncentralChiSquare::new(self.df1, self.delta)?;
        let mut upper = v.max(1.0);
        while denominator.sf(upper)? > EXPECTATION_TAIL {
            upper *= 2.0;
        }
        let scale = x * self.df1 / v;
        let value = quad::simpson(
            |w| {
                if w == 0.0 {
                    return Ok(0.0);
                }
                let big_v = w * w;
                let weight = exp(denominator.ln_pdf(big_v)? + ln(2.0 * w));
                Ok(numerator.cdf(scale * big_v)? * weight)
            },
            0.0,
            sqrt(upper),
            nodes,
            QUAD_TOL,
        )?;
        Ok(value.clamp(0.0, 1.0))
    }
}
