//! Monte Carlo engines: simulation oracles for the noncentral F CDF and the
//! two-sided test's rejection rate, and coverage experiments for the σ and
//! power intervals.
//!
//! Replicates are cut into blocks of [`BLOCK_SIZE`]. Block `k` draws from
//! stream `k` of the seed (see [`Xoshiro256::stream`]), blocks are spread
//! over worker threads, and per-block tallies are reduced in block order.
//! Results are therefore bit-identical for every worker count.

use std::num::NonZeroUsize;
use std::thread;

use fpower_core::dist::f_quantile_central;
use fpower_core::interval::{minlen_positions, power_ci, sigma_ci_equal_tail, SigmaInterval};
use fpower_core::power::{power_at_sigma, TwoSidedTSpec};
use fpower_core::rng::Xoshiro256;
use fpower_core::{Error, Result};

pub use fpower_core::rng::normal_sample;

pub const BLOCK_SIZE: u64 = 2048;

/// Smallest replicate count accepted by [`mc_ncf_cdf`].
pub const MIN_ORACLE_REPLICATES: u64 = 10_000;

/// How the σ interval is positioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalRule {
    EqualTail,
    MinLength,
}

impl IntervalRule {
    pub fn name(self) -> &'static str {
        match self {
            IntervalRule::EqualTail => "equal_tail",
            IntervalRule::MinLength => "min_length",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub replicates: u64,
    pub n: usize,
    pub mu: f64,
    pub mu0: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub rule: IntervalRule,
}

impl SimConfig {
    fn validate(&self) -> Result<TwoSidedTSpec> {
        if self.replicates == 0 {
            return Err(Error::Domain {
                what: "replicates must be positive",
                value: 0.0,
            });
        }
        if !(self.sigma > 0.0) || self.sigma.is_infinite() {
            return Err(Error::Domain {
                what: "sigma must be finite and positive",
                value: self.sigma,
            });
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain {
                what: "alpha must lie in (0, 1)",
                value: self.alpha,
            });
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Domain {
                what: "gamma must lie in (0, 1)",
                value: self.gamma,
            });
        }
        TwoSidedTSpec::new(self.n, self.mu0, self.mu)
    }
}

/// A binomial tally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn value(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    pub fn std_err(&self) -> f64 {
        let p = self.value();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Binomial standard error at a reference probability.
    pub fn std_err_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Coverage of one interval family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    pub hits: u64,
    pub replicates: u64,
    pub coverage: f64,
    pub std_err: f64,
    pub nominal: f64,
    pub rule: IntervalRule,
}

impl CoverageReport {
    fn new(tally: Proportion, nominal: f64, rule: IntervalRule) -> Self {
        let (coverage, std_err) = if tally.trials == 0 {
            (f64::NAN, f64::NAN)
        } else {
            (tally.value(), tally.std_err())
        };
        CoverageReport {
            hits: tally.hits,
            replicates: tally.trials,
            coverage,
            std_err,
            nominal,
            rule,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageOutcome {
    pub sigma: CoverageReport,
    pub power: CoverageReport,
    /// Replicates where the σ and power indicators disagreed.
    pub mismatches: u64,
    /// Replicates dropped because the min-length search failed.
    pub optimizer_failures: u64,
    /// Whether the rule is known to reach the nominal level.
    pub coverage_guaranteed: bool,
}

/// Number of worker threads the machine offers.
pub fn default_workers() -> usize {
    thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

/// Runs `block` on every block of `replicates`, in parallel, and returns the
/// per-block results in block order.
fn run_blocks<T, F>(seed: u64, replicates: u64, workers: usize, block: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut Xoshiro256, u64) -> Result<T> + Sync,
{
    let n_blocks = replicates.div_ceil(BLOCK_SIZE);
    let mut streams = Vec::with_capacity(n_blocks as usize);
    let mut walker = Xoshiro256::seed_from_u64(seed);
    for b in 0..n_blocks {
        let size = BLOCK_SIZE.min(replicates - b * BLOCK_SIZE);
        streams.push((walker.clone(), size));
        walker.jump();
    }

    let workers = workers.clamp(1, streams.len().max(1));
    let block = &block;
    let mut results: Vec<Option<Result<T>>> = (0..streams.len()).map(|_| None).collect();
    thread::scope(|scope| {
        let mut lanes: Vec<Vec<(usize, (Xoshiro256, u64))>> =
            (0..workers).map(|_| Vec::new()).collect();
        for (i, s) in streams.into_iter().enumerate() {
            lanes[i % workers].push((i, s));
        }
        let handles: Vec<_> = lanes
            .into_iter()
            .map(|lane| {
                scope.spawn(move || {
                    lane.into_iter()
                        .map(|(i, (mut rng, size))| (i, block(&mut rng, size)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("monte carlo worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every block is assigned"))
        .collect()
}

/// Simulated `P((U/u)/(V/v) ≤ x)` with `U = (Z₁+δ)² + Z₂² + … + Z_u²` and
/// `V` a sum of `v` squared standard normals. Degrees of freedom must be
/// whole numbers.
pub fn mc_ncf_cdf(
    u: u32,
    v: u32,
    delta: f64,
    x: f64,
    replicates: u64,
    seed: u64,
    workers: usize,
) -> Result<Proportion> {
    if u == 0 || v == 0 {
        return Err(Error::Domain {
            what: "simulated F needs positive whole degrees of freedom",
            value: 0.0,
        });
    }
    if replicates < MIN_ORACLE_REPLICATES {
        return Err(Error::Domain {
            what: "simulation oracle needs at least 1e4 replicates",
            value: replicates as f64,
        });
    }
    if !(delta >= 0.0) || !(x >= 0.0) {
        return Err(Error::Domain {
            what: "delta and x must be nonnegative",
            value: delta.min(x),
        });
    }
    let (uf, vf) = (u as f64, v as f64);
    let tallies = run_blocks(seed, replicates, workers, |rng, size| {
        let mut hits = 0;
        for _ in 0..size {
            let first = rng.standard_normal() + delta;
            let mut num = first * first;
            for _ in 1..u {
                let z = rng.standard_normal();
                num += z * z;
            }
            let mut den = 0.0;
            for _ in 0..v {
                let z = rng.standard_normal();
                den += z * z;
            }
            if num / uf <= x * (den / vf) {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(Proportion {
        hits: tallies.iter().sum(),
        trials: replicates,
    })
}

/// Draws a sample of size `n` and returns `(mean, Σ(Yᵢ - Ȳ)²)`.
fn sample_moments(
    rng: &mut Xoshiro256,
    n: usize,
    mu: f64,
    sigma: f64,
    buf: &mut Vec<f64>,
) -> (f64, f64) {
    buf.clear();
    buf.extend((0..n).map(|_| normal_sample(rng, mu, sigma)));
    let mean = buf.iter().sum::<f64>() / n as f64;
    let ss = buf.iter().map(|y| (y - mean) * (y - mean)).sum();
    (mean, ss)
}

/// Rejection frequency of the rule `|Ȳ - μ0| > S/√(n-1) · √c` with
/// `S² = Σ(Yᵢ - Ȳ)²/n` and `c` the `1 - α` quantile of `F(1, n-1)`.
/// The interval rule in `cfg` is ignored.
pub fn rejection_rate(cfg: &SimConfig, workers: usize) -> Result<Proportion> {
    cfg.validate()?;
    let n = cfg.n;
    let root_c = f_quantile_central(1.0, (n - 1) as f64, 1.0 - cfg.alpha)?.sqrt();
    let scale = root_c / ((n - 1) as f64).sqrt();
    let tallies = run_blocks(cfg.seed, cfg.replicates, workers, |rng, size| {
        let mut buf = Vec::with_capacity(n);
        let mut hits = 0;
        for _ in 0..size {
            let (mean, ss) = sample_moments(rng, n, cfg.mu, cfg.sigma, &mut buf);
            let s = (ss / n as f64).sqrt();
            if (mean - cfg.mu0).abs() > s * scale {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(Proportion {
        hits: tallies.iter().sum(),
        trials: cfg.replicates,
    })
}

#[derive(Default)]
struct CoverageTally {
    sigma_hits: u64,
    power_hits: u64,
    used: u64,
    mismatches: u64,
    failures: u64,
}

/// Simulates samples under `(mu, sigma)`, builds the σ interval with the
/// configured rule, maps it to a power interval, and tallies how often each
/// contains its true value.
///
/// The min-length rule is given the true effect `√n |μ - μ0|`. Replicates
/// where its search fails are counted in `optimizer_failures` and excluded
/// from both coverage tallies. With `μ = μ0` the power interval collapses
/// to the point `α` and its (open) coverage is zero.
pub fn coverage_experiment(cfg: &SimConfig, workers: usize) -> Result<CoverageOutcome> {
    let spec = cfg.validate()?;
    if cfg.rule == IntervalRule::MinLength && spec.map().is_null() {
        return Err(Error::Degenerate("min-length intervals need mu != mu0"));
    }
    let n = cfg.n;
    let df = (n - 1) as f64;
    let design = spec.design(cfg.alpha)?;
    let map = spec.map();
    let true_power = power_at_sigma(&design, &map, cfg.sigma)?;
    // Equal-tail positions do not depend on the data.
    let unit = sigma_ci_equal_tail(1.0, df, cfg.gamma)?;

    let tallies = run_blocks(cfg.seed, cfg.replicates, workers, |rng, size| {
        let mut buf = Vec::with_capacity(n);
        let mut t = CoverageTally::default();
        for _ in 0..size {
            let (_, q) = sample_moments(rng, n, cfg.mu, cfg.sigma, &mut buf);
            let (sigma_ci, power_ci_) = match cfg.rule {
                IntervalRule::EqualTail => {
                    let ci = SigmaInterval {
                        lower: (q / unit.upper_position).sqrt(),
                        upper: (q / unit.lower_position).sqrt(),
                        q,
                        ..unit
                    };
                    (ci, power_ci(&ci, &design, &map)?)
                }
                IntervalRule::MinLength => {
                    match minlen_positions(q, df, cfg.gamma, &design, &map) {
                        Ok(res) => (res.sigma, res.power),
                        Err(_) => {
                            t.failures += 1;
                            continue;
                        }
                    }
                }
            };
            let sigma_hit = sigma_ci.contains(cfg.sigma);
            let power_hit = power_ci_.contains(true_power);
            t.used += 1;
            t.sigma_hits += sigma_hit as u64;
            t.power_hits += power_hit as u64;
            t.mismatches += (sigma_hit != power_hit) as u64;
        }
        Ok(t)
    })?;

    let mut total = CoverageTally::default();
    for t in tallies {
        total.sigma_hits += t.sigma_hits;
        total.power_hits += t.power_hits;
        total.used += t.used;
        total.mismatches += t.mismatches;
        total.failures += t.failures;
    }
    let nominal = 1.0 - cfg.gamma;
    Ok(CoverageOutcome {
        sigma: CoverageReport::new(
            Proportion {
                hits: total.sigma_hits,
                trials: total.used,
            },
            nominal,
            cfg.rule,
        ),
        power: CoverageReport::new(
            Proportion {
                hits: total.power_hits,
                trials: total.used,
            },
            nominal,
            cfg.rule,
        ),
        mismatches: total.mismatches,
        optimizer_failures: total.failures,
        coverage_guaranteed: cfg.rule == IntervalRule::EqualTail,
    })
}
