//! Heavy coefficients from point queries by bucket recursion over
//! coordinate prefixes.
//!
//! Bucket `(j, a)` with `a ⊆ {0..j-1}` holds the sets `S` with
//! `S ∩ {0..j-1} = a`; its weight `W_a(j) = sum psi_hat(S)^2` equals
//! `E[psi(u∘w) psi(u'∘w) chi_a(u) chi_a(u')]` for independent uniform
//! prefixes `u, u'` and a shared uniform suffix `w`. Buckets estimated at
//! `rho^2 / 2` or more are split on coordinate `j`; at depth `n` each bucket
//! is a single set, whose coefficient is estimated directly.

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use super::{CoeffList, Guarantee};
use crate::cube::full_mask;
use crate::error::{invalid, Error, Result};
use crate::fourier::{CoeffEntry, CoeffSource, Spectrum};
use crate::measure::QueryOracle;
use crate::rng::stream;

const FIRST_BATCH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GlParams {
    pub rho: f64,
    /// Upper bound on the density.
    pub t: f64,
    pub delta: f64,
    pub seed: u64,
}

impl GlParams {
    pub fn new(rho: f64, t: f64, delta: f64, seed: u64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(invalid(format!("rho {rho} outside (0, 1]")));
        }
        if !(t >= 1.0 && t.is_finite()) {
            return Err(invalid(format!("density bound {t} below 1")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(invalid(format!("delta {delta} outside (0, 1)")));
        }
        Ok(GlParams { rho, t, delta, seed })
    }

    /// Bound on surviving buckets per level, `4 t / rho^2`.
    pub fn max_buckets(&self) -> u64 {
        (4.0 * self.t / (self.rho * self.rho)).ceil() as u64
    }

    /// Failure probability allotted to one estimate, `delta / (4 n t^2 / rho^2)`.
    pub fn per_estimate_delta(&self, n: usize) -> f64 {
        self.delta / (4.0 * n as f64 * self.t * self.t / (self.rho * self.rho))
    }

    fn bucket_acc(&self) -> f64 {
        self.rho * self.rho / 4.0
    }

    fn leaf_acc(&self) -> f64 {
        self.rho / 4.0
    }

    /// Worst-case sample count of one bucket estimate: Bernstein with variance
    /// at most `t^3` and range `2 t^2`.
    pub fn bucket_samples(&self, n: usize) -> u64 {
        bernstein_samples(self.t.powi(3), 2.0 * self.t * self.t, self.bucket_acc(), self.per_estimate_delta(n))
    }

    /// Worst-case sample count of one leaf estimate: variance at most `t`, range `2 t`.
    pub fn leaf_samples(&self, n: usize) -> u64 {
        bernstein_samples(self.t, 2.0 * self.t, self.leaf_acc(), self.per_estimate_delta(n))
    }

    /// Declared query budget: `n` levels of at most `2 B` bucket estimates
    /// (two queries per sample) plus `B` leaf estimates, `B = 4t/rho^2`.
    pub fn budget(&self, n: usize) -> u64 {
        let b = self.max_buckets();
        n as u64 * 2 * b * 2 * self.bucket_samples(n) + b * self.leaf_samples(n)
    }
}

fn bernstein_samples(var: f64, range: f64, acc: f64, delta: f64) -> u64 {
    ((2.0 * var + 2.0 / 3.0 * range * acc) * (2.0 / delta).ln() / (acc * acc)).ceil() as u64
}

/// Where bucket weights and leaf coefficients come from.
#[derive(Clone, Copy)]
pub enum GlWeights<'a> {
    /// Exact values read off a spectrum.
    Exact(&'a Spectrum),
    /// Estimates from density queries.
    Queries(&'a dyn QueryOracle),
}

#[derive(Clone, Debug, Serialize)]
pub struct GlOutput {
    pub list: CoeffList,
    pub queries: u64,
    pub budget: u64,
    pub budget_exceeded: bool,
    pub buckets_estimated: u64,
}

impl GlOutput {
    /// Turns a budget overrun into an error.
    pub fn into_result(self) -> Result<GlOutput> {
        if self.budget_exceeded {
            Err(Error::BudgetExceeded { budget: self.budget, used: self.queries })
        } else {
            Ok(self)
        }
    }
}

#[derive(Clone, Copy)]
struct Est {
    value: f64,
    error: f64,
    samples: u64,
}

/// Adaptive mean estimation: batches double until the empirical Bernstein
/// bound is at most `acc`, capped at `max` samples where the a-priori
/// Bernstein bound already guarantees `acc`.
fn adaptive_mean(mut draw: impl FnMut() -> f64, range: f64, acc: f64, delta: f64, max: u64) -> Est {
    let rounds = ((max as f64 / FIRST_BATCH as f64).log2().ceil().max(0.0) as u32 + 1) as f64;
    let l = (4.0 * rounds / delta).ln();
    let (mut sum, mut sq, mut m) = (0.0f64, 0.0f64, 0u64);
    let mut target = (FIRST_BATCH as u64).min(max);
    loop {
        while m < target {
            let x = draw();
            sum += x;
            sq += x * x;
            m += 1;
        }
        let mean = sum / m as f64;
        if m >= max {
            return Est { value: mean, error: acc, samples: m };
        }
        let var = ((sq - m as f64 * mean * mean) / (m as f64 - 1.0)).max(0.0);
        let bound = (2.0 * var * l / m as f64).sqrt() + 7.0 * range * l / (3.0 * (m as f64 - 1.0));
        if bound <= acc {
            return Est { value: mean, error: bound, samples: m };
        }
        target = (2 * m).min(max);
    }
}

fn bucket_weight_exact(spec: &Spectrum, j: usize, a: u64) -> f64 {
    let prefix = full_mask(j);
    spec.coeffs().iter().enumerate().filter(|(s, _)| *s as u64 & prefix == a).map(|(_, c)| c * c).sum()
}

/// All `S` with `|psi_hat(S)| >= rho` (with probability `1 - delta` for query
/// access), and only sets with `|psi_hat(S)| >= rho / 2`.
///
/// With exact weights leaves are kept at `|value| >= rho/2`; with queries at
/// `rho/2` plus the achieved error bound, which is at most `rho/4`.
pub fn goldreich_levin(n: usize, source: GlWeights<'_>, params: &GlParams) -> Result<GlOutput> {
    if n == 0 || n > crate::cube::MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, max: crate::cube::MAX_DIM });
    }
    match source {
        GlWeights::Exact(s) if s.dim() != n => return Err(Error::DimensionMismatch { left: n, right: s.dim() }),
        GlWeights::Queries(o) if o.dim() != n => return Err(Error::DimensionMismatch { left: n, right: o.dim() }),
        _ => {}
    }
    let rho = params.rho;
    let delta_e = params.per_estimate_delta(n);
    let t = params.t;
    let (m_bucket, m_leaf) = (params.bucket_samples(n), params.leaf_samples(n));
    let budget = params.budget(n);
    let mut queries = 0u64;
    let mut estimated = 0u64;
    let mut alive: Vec<u64> = vec![0];

    let partial = |queries: u64, estimated: u64| GlOutput {
        list: CoeffList::new(Vec::new(), rho / 2.0, n, Guarantee::Whp),
        queries,
        budget,
        budget_exceeded: true,
        buckets_estimated: estimated,
    };

    for j in 0..n {
        let children: Vec<u64> = alive.iter().flat_map(|&a| [a, a | 1 << j]).collect();
        let results: Vec<(u64, Est)> = match source {
            GlWeights::Exact(spec) => children
                .iter()
                .map(|&a| (a, Est { value: bucket_weight_exact(spec, j + 1, a), error: 0.0, samples: 0 }))
                .collect(),
            GlWeights::Queries(oracle) => {
                if queries + children.len() as u64 * 2 * m_bucket > budget {
                    return Ok(partial(queries, estimated));
                }
                let prefix = full_mask(j + 1);
                let suffix = full_mask(n) & !prefix;
                children
                    .par_iter()
                    .map(|&a| {
                        let mut rng = stream(params.seed, &format!("gl-level-{}", j + 1), a);
                        let draw = || {
                            let w = rng.next_u64() & suffix;
                            let u = rng.next_u64() & prefix;
                            let v = rng.next_u64() & prefix;
                            let sign = if ((u ^ v) & a).count_ones() & 1 == 0 { 1.0 } else { -1.0 };
                            oracle.density(u | w) * oracle.density(v | w) * sign
                        };
                        (a, adaptive_mean(draw, 2.0 * t * t, params.bucket_acc(), delta_e, m_bucket))
                    })
                    .collect()
            }
        };
        for (_, e) in &results {
            queries += 2 * e.samples;
            estimated += 1;
        }
        alive = results.into_iter().filter(|(_, e)| e.value >= rho * rho / 2.0).map(|(a, _)| a).collect();
    }

    let leaves: Vec<CoeffEntry> = match source {
        GlWeights::Exact(spec) => alive
            .iter()
            .map(|&s| CoeffEntry::exact(s, spec.coeff(s)))
            .filter(|e| e.value.abs() >= rho / 2.0)
            .collect(),
        GlWeights::Queries(oracle) => {
            if queries + alive.len() as u64 * m_leaf > budget {
                return Ok(partial(queries, estimated));
            }
            let mask = full_mask(n);
            let ests: Vec<(u64, Est)> = alive
                .par_iter()
                .map(|&s| {
                    let mut rng = stream(params.seed, "gl-leaf", s);
                    let draw = || {
                        let x = rng.next_u64() & mask;
                        let sign = if (x & s).count_ones() & 1 == 0 { 1.0 } else { -1.0 };
                        oracle.density(x) * sign
                    };
                    (s, adaptive_mean(draw, 2.0 * t, params.leaf_acc(), delta_e, m_leaf))
                })
                .collect();
            queries += ests.iter().map(|(_, e)| e.samples).sum::<u64>();
            ests.into_iter()
                .filter(|(_, e)| e.value.abs() >= rho / 2.0 + e.error)
                .map(|(s, e)| CoeffEntry { set: s, value: e.value, source: CoeffSource::Sampled, sample_error: e.error })
                .collect()
        }
    };
    let guarantee = if matches!(source, GlWeights::Exact(_)) { Guarantee::Exact } else { Guarantee::Whp };
    Ok(GlOutput {
        list: CoeffList::new(leaves, rho / 2.0, n, guarantee),
        queries,
        budget,
        budget_exceeded: false,
        buckets_estimated: estimated,
    })
}
