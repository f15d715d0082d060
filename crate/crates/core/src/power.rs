//! Power of the level-α F-test at a fixed alternative.
//!
//! Under the alternative the F statistic is noncentral F with distance
//! noncentrality `δ(σ) = λ/σ`, where the effect constant `λ` collects
//! everything about the alternative except the error scale σ. Power
//! `1 - G_{u,v,δ}(c)` is strictly increasing in δ and therefore strictly
//! decreasing in σ.
//!
//! One-sided t-tests are not covered.

use crate::dist::{f_quantile_central, NoncentralF};
use crate::error::{Error, Result};
use crate::math::sqrt;

/// Tolerance on the zero row and column sums of an interaction matrix.
pub const SIDE_CONDITION_TOL: f64 = 1e-10;

/// Degrees of freedom and level of an F-test, with its critical value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestDesign {
    u: f64,
    v: f64,
    alpha: f64,
    critical: f64,
}

impl TestDesign {
    pub fn new(u: f64, v: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain("alpha must lie in (0, 1)", alpha));
        }
        let critical = f_quantile_central(u, v, 1.0 - alpha)?;
        Ok(TestDesign {
            u,
            v,
            alpha,
            critical,
        })
    }

    /// Numerator degrees of freedom.
    pub fn u(&self) -> f64 {
        self.u
    }

    /// Denominator degrees of freedom.
    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The `1 - α` quantile of the central F distribution.
    pub fn critical_value(&self) -> f64 {
        self.critical
    }
}

/// The map `σ ↦ δ(σ) = λ/σ` for a fixed alternative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralityMap {
    lambda_effect: f64,
}

impl NoncentralityMap {
    pub fn new(lambda_effect: f64) -> Result<Self> {
        if !(lambda_effect >= 0.0) || lambda_effect.is_infinite() {
            return Err(Error::domain(
                "effect constant must be finite and nonnegative",
                lambda_effect,
            ));
        }
        Ok(NoncentralityMap { lambda_effect })
    }

    pub fn lambda_effect(&self) -> f64 {
        self.lambda_effect
    }

    pub fn is_null(&self) -> bool {
        self.lambda_effect == 0.0
    }

    pub fn delta(&self, sigma: f64) -> Result<f64> {
        if !(sigma > 0.0) || sigma.is_infinite() {
            return Err(Error::domain("sigma must be finite and positive", sigma));
        }
        Ok(self.lambda_effect / sigma)
    }
}

/// `1 - G_{u,v,δ}(c)`.
pub fn power_at_delta(design: &TestDesign, delta: f64) -> Result<f64> {
    let dist = NoncentralF::new(design.u, design.v, delta)?;
    Ok((1.0 - dist.cdf(design.critical)?).clamp(0.0, 1.0))
}

pub fn power_at_sigma(design: &TestDesign, map: &NoncentralityMap, sigma: f64) -> Result<f64> {
    power_at_delta(design, map.delta(sigma)?)
}

/// Two-way ANOVA with `rows × cols` cells and `replicates` observations per
/// cell; `effects` holds the interaction terms `(αβ)_ij` row-major.
#[derive(Debug, Clone, Copy)]
pub struct AnovaInteractionSpec<'a> {
    pub rows: usize,
    pub cols: usize,
    pub replicates: usize,
    pub effects: &'a [f64],
}

/// What the interaction F-test needs: its degrees of freedom and `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnovaDesign {
    pub map: NoncentralityMap,
    pub u: f64,
    pub v: f64,
}

impl AnovaDesign {
    pub fn test_design(&self, alpha: f64) -> Result<TestDesign> {
        TestDesign::new(self.u, self.v, alpha)
    }
}

/// Noncentrality of the test that all interactions vanish:
/// `λ = √(K Σ (αβ)²_ij)`, `u = (I-1)(J-1)`, `v = (K-1)IJ`.
pub fn anova_noncentrality(spec: &AnovaInteractionSpec<'_>) -> Result<AnovaDesign> {
    let AnovaInteractionSpec {
        rows,
        cols,
        replicates,
        effects,
    } = *spec;
    if rows < 2 || cols < 2 || replicates < 2 {
        return Err(Error::domain(
            "anova needs at least 2 rows, 2 columns and 2 replicates per cell",
            rows.min(cols).min(replicates) as f64,
        ));
    }
    if effects.len() != rows * cols {
        return Err(Error::domain(
            "interaction matrix must have rows * cols entries",
            effects.len() as f64,
        ));
    }
    if let Some(bad) = effects.iter().find(|e| !e.is_finite()) {
        return Err(Error::domain("interaction effects must be finite", *bad));
    }
    for i in 0..rows {
        let sum: f64 = effects[i * cols..(i + 1) * cols].iter().sum();
        if sum.abs() > SIDE_CONDITION_TOL {
            return Err(Error::SideCondition {
                axis: "row",
                index: i,
                sum,
            });
        }
    }
    for j in 0..cols {
        let sum: f64 = (0..rows).map(|i| effects[i * cols + j]).sum();
        if sum.abs() > SIDE_CONDITION_TOL {
            return Err(Error::SideCondition {
                axis: "column",
                index: j,
                sum,
            });
        }
    }
    let sum_sq: f64 = effects.iter().map(|e| e * e).sum();
    Ok(AnovaDesign {
        map: NoncentralityMap::new(sqrt(replicates as f64 * sum_sq))?,
        u: ((rows - 1) * (cols - 1)) as f64,
        v: ((replicates - 1) * rows * cols) as f64,
    })
}

/// Two-sided test of `H0: μ = μ0` from a normal sample of size `n`, viewed
/// as an F-test with `u = 1`, `v = n - 1` and `λ = √n |μ - μ0|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSidedTSpec {
    n: usize,
    mu0: f64,
    mu: f64,
}

impl TwoSidedTSpec {
    pub fn new(n: usize, mu0: f64, mu: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("sample size must be at least 2", n as f64));
        }
        if !mu0.is_finite() || !mu.is_finite() {
            return Err(Error::domain("means must be finite", mu - mu0));
        }
        Ok(TwoSidedTSpec { n, mu0, mu })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn design(&self, alpha: f64) -> Result<TestDesign> {
        TestDesign::new(1.0, (self.n - 1) as f64, alpha)
    }

    pub fn map(&self) -> NoncentralityMap {
        NoncentralityMap {
            lambda_effect: sqrt(self.n as f64) * (self.mu - self.mu0).abs(),
        }
    }
}

/// Power of the two-sided test at error scale `sigma`.
pub fn t_test_power(spec: &TwoSidedTSpec, alpha: f64, sigma: f64) -> Result<f64> {
    power_at_sigma(&spec.design(alpha)?, &spec.map(), sigma)
}

/// Maximum-likelihood estimate of the power: the power function evaluated
/// at `s = √(Σ(Yᵢ - Ȳ)²/n)`.
pub fn power_mle(spec: &TwoSidedTSpec, alpha: f64, s: f64) -> Result<f64> {
    t_test_power(spec, alpha, s)
}
