//! Confidence intervals for σ from a residual sum of squares and their image
//! under the power map.
//!
//! With `q` the observed residual sum of squares on `v` degrees of freedom,
//! `q/σ²` is chi-square(v). Any positions `A < B` with
//! `F_v(B) - F_v(A) = 1 - γ` give the interval `(√(q/B), √(q/A))` for σ.
//! Power is strictly decreasing in σ, so the interval maps to
//! `(ω(b), ω(a))` with the same coverage. All intervals are open.

use crate::dist::ChiSquare;
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::power::{power_at_sigma, NoncentralityMap, TestDesign};

/// Content tolerance `|F_v(B) - F_v(A) - (1 - γ)|`.
pub const CONTENT_TOL: f64 = 1e-9;

/// Points in the coarse scan that seeds the golden-section search.
pub const SCAN_POINTS: usize = 64;

/// Stopping width for the golden-section search over the lower tail mass.
pub const GOLDEN_TOL: f64 = 1e-8;

/// The search keeps `t` inside `[γ·EDGE_FRACTION, γ·(1 - EDGE_FRACTION)]`.
pub const EDGE_FRACTION: f64 = 1e-9;

const GOLDEN_MAX_ITER: usize = 200;

/// A confidence interval `(a, b)` for σ, with the chi-square positions
/// `A = q/b²` and `B = q/a²` it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_position: f64,
    pub upper_position: f64,
    pub gamma: f64,
    pub df: f64,
    pub q: f64,
}

impl SigmaInterval {
    /// Builds the interval from positions `A < B`, checking the probability content.
    pub fn from_positions(
        q: f64,
        df: f64,
        gamma: f64,
        lower_position: f64,
        upper_position: f64,
    ) -> Result<Self> {
        check_inputs(q, df, gamma)?;
        if !(lower_position > 0.0 && lower_position < upper_position)
            || upper_position.is_infinite()
        {
            return Err(Error::domain(
                "positions must satisfy 0 < A < B < inf",
                lower_position,
            ));
        }
        let chi = ChiSquare::new(df)?;
        let content = chi.cdf(upper_position)? - chi.cdf(lower_position)?;
        if (content - (1.0 - gamma)).abs() > CONTENT_TOL {
            return Err(Error::domain(
                "positions do not enclose probability 1 - gamma",
                content,
            ));
        }
        Ok(SigmaInterval {
            lower: sqrt(q / upper_position),
            upper: sqrt(q / lower_position),
            lower_position,
            upper_position,
            gamma,
            df,
            q,
        })
    }

    /// Strict containment.
    pub fn contains(&self, sigma: f64) -> bool {
        self.lower < sigma && sigma < self.upper
    }
}

/// Confidence interval for power: the image of a [`SigmaInterval`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerInterval {
    pub lo: f64,
    pub hi: f64,
    pub gamma: f64,
}

impl PowerInterval {
    /// Strict containment.
    pub fn contains(&self, power: f64) -> bool {
        self.lo < power && power < self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

fn check_inputs(q: f64, df: f64, gamma: f64) -> Result<()> {
    if !(q > 0.0) || q.is_infinite() {
        return Err(Error::domain(
            "residual sum of squares must be finite and positive",
            q,
        ));
    }
    if !(df > 0.0) || df.is_infinite() {
        return Err(Error::domain(
            "degrees of freedom must be finite and positive",
            df,
        ));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain("gamma must lie in (0, 1)", gamma));
    }
    Ok(())
}

/// The usual interval with `A`, `B` at the `γ/2` and `1 - γ/2` quantiles.
pub fn sigma_ci_equal_tail(q: f64, df: f64, gamma: f64) -> Result<SigmaInterval> {
    check_inputs(q, df, gamma)?;
    let chi = ChiSquare::new(df)?;
    let lower_position = chi.quantile(0.5 * gamma)?;
    let upper_position = chi.quantile(1.0 - 0.5 * gamma)?;
    SigmaInterval::from_positions(q, df, gamma, lower_position, upper_position)
}

/// Maps a σ interval to the power interval `(ω(b), ω(a))`.
pub fn power_ci(
    interval: &SigmaInterval,
    design: &TestDesign,
    map: &NoncentralityMap,
) -> Result<PowerInterval> {
    Ok(PowerInterval {
        lo: power_at_sigma(design, map, interval.upper)?,
        hi: power_at_sigma(design, map, interval.lower)?,
        gamma: interval.gamma,
    })
}

/// Result of the minimum-length search.
///
/// The positions depend on the observed `q`, so the resulting intervals are
/// not known to reach the nominal coverage; `coverage_guaranteed` is always
/// `false` to keep that visible to callers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinLengthInterval {
    /// Lower tail mass `t = F_v(A)`; `F_v(B) = t + 1 - γ`.
    pub lower_tail: f64,
    pub sigma: SigmaInterval,
    pub power: PowerInterval,
    pub length: f64,
    pub equal_tail_length: f64,
    pub coverage_guaranteed: bool,
}

/// Power-interval length as a function of the lower tail mass `t ∈ (0, γ)`.
pub struct LengthProfile<'a> {
    chi: ChiSquare,
    q: f64,
    gamma: f64,
    design: &'a TestDesign,
    map: &'a NoncentralityMap,
}

impl<'a> LengthProfile<'a> {
    pub fn new(
        q: f64,
        df: f64,
        gamma: f64,
        design: &'a TestDesign,
        map: &'a NoncentralityMap,
    ) -> Result<Self> {
        check_inputs(q, df, gamma)?;
        Ok(LengthProfile {
            chi: ChiSquare::new(df)?,
            q,
            gamma,
            design,
            map,
        })
    }

    /// Positions `(A, B)` for lower tail mass `t`.
    pub fn positions(&self, t: f64) -> Result<(f64, f64)> {
        if !(t > 0.0 && t < self.gamma) {
            return Err(Error::domain("lower tail mass must lie in (0, gamma)", t));
        }
        Ok((
            self.chi.quantile(t)?,
            self.chi.quantile(t + (1.0 - self.gamma))?,
        ))
    }

    pub fn intervals(&self, t: f64) -> Result<(SigmaInterval, PowerInterval)> {
        let (lower_position, upper_position) = self.positions(t)?;
        let sigma = SigmaInterval::from_positions(
            self.q,
            self.chi.df(),
            self.gamma,
            lower_position,
            upper_position,
        )?;
        let power = power_ci(&sigma, self.design, self.map)?;
        Ok((sigma, power))
    }

    /// `L(t) = G_{δ(b)}(c) - G_{δ(a)}(c)`, the power-interval length.
    pub fn length(&self, t: f64) -> Result<f64> {
        let (lower_position, upper_position) = self.positions(t)?;
        let a = sqrt(self.q / upper_position);
        let b = sqrt(self.q / lower_position);
        Ok(power_at_sigma(self.design, self.map, a)? - power_at_sigma(self.design, self.map, b)?)
    }
}

/// Chooses `A`, `B` to minimize the power-interval length subject to
/// `F_v(B) - F_v(A) = 1 - γ`.
///
/// Scans [`SCAN_POINTS`] values of `t` first and runs golden-section search
/// around the best one, since `L(t)` is not known to be unimodal. The
/// equal-tail point is kept as a fallback, so the returned length never
/// exceeds the equal-tail length.
pub fn minlen_positions(
    q: f64,
    df: f64,
    gamma: f64,
    design: &TestDesign,
    map: &NoncentralityMap,
) -> Result<MinLengthInterval> {
    if map.is_null() {
        return Err(Error::Degenerate(
            "every feasible interval has zero power length when the effect is zero",
        ));
    }
    let profile = LengthProfile::new(q, df, gamma, design, map)?;
    let step = gamma / SCAN_POINTS as f64;

    let mut best_t = 0.0;
    let mut best_len = f64::INFINITY;
    for i in 0..SCAN_POINTS {
        let t = step * (i as f64 + 0.5);
        let len = profile.length(t)?;
        if len < best_len {
            best_len = len;
            best_t = t;
        }
    }

    let edge = gamma * EDGE_FRACTION;
    let lo = (best_t - step).max(edge);
    let hi = (best_t + step).min(gamma - edge);
    let (golden_t, golden_len) = golden_section(|t| profile.length(t), lo, hi)?;
    if golden_len < best_len {
        best_t = golden_t;
        best_len = golden_len;
    }

    let equal_t = 0.5 * gamma;
    let equal_tail_length = profile.length(equal_t)?;
    if equal_tail_length <= best_len {
        best_t = equal_t;
        best_len = equal_tail_length;
    }

    let (sigma, power) = profile.intervals(best_t)?;
    Ok(MinLengthInterval {
        lower_tail: best_t,
        sigma,
        power,
        length: best_len,
        equal_tail_length,
        coverage_guaranteed: false,
    })
}

/// Golden-section minimization on `[lo, hi]` down to width [`GOLDEN_TOL`].
fn golden_section<F>(mut f: F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    // 1/φ
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..GOLDEN_MAX_ITER {
        if hi - lo <= GOLDEN_TOL {
            return Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) });
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Err(Error::convergence("golden-section search", GOLDEN_MAX_ITER))
}
