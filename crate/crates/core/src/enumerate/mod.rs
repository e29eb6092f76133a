//! Listing minimal skewed subcubes: the brute-force oracle, the minimality
//! test, and the recursive enumerators for positive and negative skew.
//!
//! A subcube `C` of codimension at most `k` is `(gamma, eps)`-minimal if
//! `skew(C) >= gamma` and every proper parent `D` has
//! `skew(D) <= (1 - eps) gamma`; the negative case mirrors both inequalities.

mod recursive;

pub use recursive::{
    find_skewed, fsn, fsr, CoeffProvider, Enumeration, EnumerationStats, FfcCoeffs, GraphCoeffs, SpectrumCoeffs,
};

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{enumerate_subcubes, masks_up_to, submasks, Subcube};
use crate::error::{invalid, Error, Result};
use crate::fourier::Spectrum;
use crate::measure::{hoeffding_halfwidth, Estimate, ExplicitMeasure, SampleSet, Sign, SkewReport, MAX_HISTOGRAM_DIM};

/// Slack for comparisons of exactly computed skews against thresholds.
pub const SKEW_TOL: f64 = 1e-9;

/// Which parents a minimal cube is compared against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParentRule {
    /// Every proper parent must have `sign * skew <= (1 - eps) gamma`.
    #[default]
    AllParents,
    /// Only parents skewed in the same direction are constrained.
    SameSign,
}

/// Parameters of one enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SkewQuery {
    pub k: usize,
    pub gamma: f64,
    pub eps: f64,
    pub sign: Sign,
    pub parent_rule: ParentRule,
}

impl SkewQuery {
    /// `gamma` in `(0, 2^k - 1]` for positive skew and `(0, 1]` for negative,
    /// `eps` in `(0, 1]`.
    pub fn new(k: usize, gamma: f64, eps: f64, sign: Sign) -> Result<Self> {
        if k == 0 || k > crate::cube::MAX_DIM {
            return Err(invalid(format!("codimension cap {k} outside 1..={}", crate::cube::MAX_DIM)));
        }
        let max_gamma = match sign {
            Sign::Positive => 2f64.powi(k as i32) - 1.0,
            Sign::Negative => 1.0,
        };
        if !(gamma > 0.0 && gamma <= max_gamma) {
            return Err(invalid(format!("gamma {gamma} outside (0, {max_gamma}] for {sign} skew")));
        }
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(invalid(format!("eps {eps} outside (0, 1]")));
        }
        Ok(SkewQuery { k, gamma, eps, sign, parent_rule: ParentRule::AllParents })
    }

    pub fn with_parent_rule(mut self, rule: ParentRule) -> Self {
        self.parent_rule = rule;
        self
    }

    /// `(1 - eps) gamma`, the largest skew a parent of a minimal cube may have.
    pub fn parent_ceiling(&self) -> f64 {
        (1.0 - self.eps) * self.gamma
    }

    /// `gamma (1 - eps/2)`, the decision point between the two previous bounds.
    pub fn midpoint(&self) -> f64 {
        self.gamma * (1.0 - self.eps / 2.0)
    }

    /// Guaranteed magnitude of the skew of a minimal cube inside any parent:
    /// `eps gamma / (1 + (1 - eps) gamma)` for positive skew, `eps gamma` for negative.
    pub fn conditional_skew_bound(&self) -> f64 {
        match self.sign {
            Sign::Positive => self.eps * self.gamma / (1.0 + self.parent_ceiling()),
            Sign::Negative => self.eps * self.gamma,
        }
    }

    /// Numerator of the coefficient threshold: `min(eps sqrt(gamma), bound)`
    /// for positive skew, `eps gamma` for negative.
    pub fn coeff_numerator(&self) -> f64 {
        match self.sign {
            Sign::Positive => (self.eps * self.gamma.sqrt()).min(self.conditional_skew_bound()),
            Sign::Negative => self.eps * self.gamma,
        }
    }

    /// `numerator / (k_t * C(k_t, s))`, the smallest coefficient of size `s`
    /// worth following when `k_t` coordinates may still be fixed.
    pub fn coeff_threshold(&self, k_t: usize, s: usize) -> f64 {
        self.coeff_numerator() / (k_t as f64 * crate::cube::binomial(k_t, s) as f64)
    }

    /// Threshold used when the heavy list is found once for the whole
    /// measure: `numerator / 16^k`.
    pub fn top_level_rho(&self) -> f64 {
        self.coeff_numerator() / 16f64.powi(self.k as i32)
    }

    /// `sign * skew >= gamma`.
    pub fn qualifies(&self, e: Estimate, exact: bool) -> bool {
        let v = self.sign.factor() * e.value;
        if exact {
            v >= self.gamma - SKEW_TOL
        } else {
            v >= self.midpoint()
        }
    }

    /// The parent condition of minimality.
    pub fn parent_ok(&self, e: Estimate, exact: bool) -> bool {
        let v = self.sign.factor() * e.value;
        if self.parent_rule == ParentRule::SameSign && v < 0.0 {
            return true;
        }
        if exact {
            v <= self.parent_ceiling() + SKEW_TOL
        } else {
            v < self.midpoint()
        }
    }

    /// A node whose skew exceeds the parent ceiling ends its branch.
    pub fn records(&self, e: Estimate, exact: bool) -> bool {
        let v = self.sign.factor() * e.value;
        if exact {
            v > self.parent_ceiling() + SKEW_TOL
        } else {
            v >= self.midpoint()
        }
    }

    /// Positive skew only: `<psi, mu_D> < (1 + gamma) 2^{-k_t}` means no cube
    /// below `D` within the codimension cap reaches `gamma`.
    pub fn fails(&self, skew: Estimate, k_t: usize, exact: bool) -> bool {
        if self.sign == Sign::Negative {
            return false;
        }
        let bound = (1.0 + self.gamma) * 0.5f64.powi(k_t as i32);
        let ip = 1.0 + skew.value;
        if exact {
            ip < bound - SKEW_TOL
        } else {
            ip + skew.error < bound
        }
    }
}

/// `skew` of `C` inside the restriction to a parent `D`:
/// `(1 + skew(C)) / (1 + skew(D)) - 1`.
pub fn conditional_skew(skew_c: f64, skew_d: f64) -> Result<f64> {
    if 1.0 + skew_d <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok((1.0 + skew_c) / (1.0 + skew_d) - 1.0)
}

/// Exact or estimated skews of subcubes.
pub trait SkewSource: Sync {
    fn dim(&self) -> usize;
    fn skew(&self, c: &Subcube) -> Estimate;
    fn is_exact(&self) -> bool;
}

impl SkewSource for ExplicitMeasure {
    fn dim(&self) -> usize {
        ExplicitMeasure::dim(self)
    }

    fn skew(&self, c: &Subcube) -> Estimate {
        Estimate::exact(ExplicitMeasure::skew(self, c))
    }

    fn is_exact(&self) -> bool {
        true
    }
}

impl SkewSource for Spectrum {
    fn dim(&self) -> usize {
        Spectrum::dim(self)
    }

    fn skew(&self, c: &Subcube) -> Estimate {
        Estimate::exact(Spectrum::skew(self, c))
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// Skews estimated from one shared sample, each with its Hoeffding half-width.
#[derive(Clone, Debug)]
pub struct SampledSkew<'a> {
    samples: &'a SampleSet,
    delta: f64,
    spectrum: Option<Spectrum>,
}

impl<'a> SampledSkew<'a> {
    /// `delta` is the failure probability of each single estimate.
    pub fn new(samples: &'a SampleSet, delta: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySampleSet);
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(invalid(format!("delta {delta} outside (0, 1)")));
        }
        let spectrum = if samples.dim() <= MAX_HISTOGRAM_DIM {
            Some(Spectrum::of(&samples.empirical_measure()?))
        } else {
            None
        };
        Ok(SampledSkew { samples, delta, spectrum })
    }

    /// Splits an overall failure probability evenly over every cube of
    /// codimension at most `k`.
    pub fn union_bound(samples: &'a SampleSet, total_delta: f64, k: usize) -> Result<Self> {
        let cubes = crate::cube::count_subcubes(samples.dim(), k) as f64;
        Self::new(samples, total_delta / cubes)
    }

    pub fn samples(&self) -> &SampleSet {
        self.samples
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The empirical spectrum, when the dimension allows one.
    pub fn spectrum(&self) -> Option<&Spectrum> {
        self.spectrum.as_ref()
    }
}

impl SkewSource for SampledSkew<'_> {
    fn dim(&self) -> usize {
        self.samples.dim()
    }

    fn skew(&self, c: &Subcube) -> Estimate {
        let error = hoeffding_halfwidth(c.codim(), self.samples.len(), self.delta);
        let value = match &self.spectrum {
            Some(s) => Spectrum::skew(s, c),
            None => self.samples.inner_cube(c) - 1.0,
        };
        Estimate { value, error }
    }

    fn is_exact(&self) -> bool {
        false
    }
}

/// Checks every proper parent of `c` against the query's parent condition.
/// Assumes `c` itself already qualifies.
pub fn is_minimal(source: &dyn SkewSource, c: &Subcube, q: &SkewQuery) -> bool {
    let exact = source.is_exact();
    c.parents().iter().all(|p| q.parent_ok(source.skew(p), exact))
}

pub(crate) fn report(c: Subcube, e: Estimate, q: &SkewQuery, minimal: bool, exact: bool) -> SkewReport {
    SkewReport { subcube: c, skew: e.value, sign: q.sign, minimal, estimated: !exact, est_error: e.error }
}

/// Skews of every subcube of codimension at most `k`, computed by scanning
/// the density once per fixed set.
#[derive(Clone, Debug)]
pub struct SkewTable {
    n: usize,
    k: usize,
    skews: HashMap<Subcube, f64>,
}

impl SkewTable {
    pub fn of(m: &ExplicitMeasure, k: usize) -> Result<Self> {
        let n = m.dim();
        if k > n {
            return Err(invalid(format!("codimension cap {k} exceeds dimension {n}")));
        }
        let masks: Vec<u64> = masks_up_to(n, k).collect();
        let density = m.density();
        let skews = masks
            .par_iter()
            .flat_map_iter(|&mask| {
                let mut sums: HashMap<u64, f64> = submasks(mask).map(|a| (a, 0.0)).collect();
                for (x, &v) in density.iter().enumerate() {
                    if v != 0.0 {
                        *sums.get_mut(&(x as u64 & mask)).expect("assignment") += v;
                    }
                }
                let scale = (1u64 << mask.count_ones()) as f64 / density.len() as f64;
                sums.into_iter().map(move |(a, s)| (Subcube::from_raw(n, mask, a), s * scale - 1.0))
            })
            .collect();
        Ok(SkewTable { n, k, skews })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn max_codim(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.skews.len()
    }

    pub fn is_empty(&self) -> bool {
        self.skews.is_empty()
    }

    pub fn get(&self, c: &Subcube) -> Option<f64> {
        self.skews.get(c).copied()
    }

    /// All `(cube, skew)` pairs in canonical order.
    pub fn sorted(&self) -> Vec<(Subcube, f64)> {
        let mut v: Vec<(Subcube, f64)> = self.skews.iter().map(|(c, s)| (*c, *s)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    fn is_minimal(&self, c: &Subcube, q: &SkewQuery) -> bool {
        c.parents().iter().all(|p| q.parent_ok(Estimate::exact(self.skews[p]), true))
    }
}

/// Every subcube of codimension at most `k` with `skew >= gamma` (positive)
/// or `skew <= -gamma` (negative). Minimality is not evaluated, so the
/// reports carry `minimal = false`.
pub fn brute_force_skewed(m: &ExplicitMeasure, k: usize, gamma: f64, sign: Sign) -> Result<Vec<SkewReport>> {
    let table = SkewTable::of(m, k)?;
    Ok(table
        .sorted()
        .into_iter()
        .filter(|&(_, s)| sign.factor() * s >= gamma - SKEW_TOL)
        .map(|(c, s)| SkewReport { subcube: c, skew: s, sign, minimal: false, estimated: false, est_error: 0.0 })
        .collect())
}

/// Every `(gamma, eps)`-minimal skewed subcube of codimension at most `k`,
/// by exhaustive enumeration.
pub fn brute_force_minimal(m: &ExplicitMeasure, q: &SkewQuery) -> Result<Vec<SkewReport>> {
    let table = SkewTable::of(m, q.k.min(m.dim()))?;
    Ok(brute_force_from_table(&table, q))
}

/// The oracle over a precomputed table; the table must cover codimension `q.k`.
pub fn brute_force_from_table(table: &SkewTable, q: &SkewQuery) -> Vec<SkewReport> {
    table
        .sorted()
        .into_iter()
        .filter(|&(c, s)| c.codim() <= q.k && q.qualifies(Estimate::exact(s), true) && table.is_minimal(&c, q))
        .map(|(c, s)| report(c, Estimate::exact(s), q, true, true))
        .collect()
}

/// Brute force over an arbitrary skew source, cube by cube.
pub fn brute_force_source(source: &dyn SkewSource, q: &SkewQuery) -> Result<Vec<SkewReport>> {
    let exact = source.is_exact();
    let cubes: Vec<Subcube> = enumerate_subcubes(source.dim(), q.k.min(source.dim()))?.collect();
    let mut out: Vec<SkewReport> = cubes
        .par_iter()
        .filter_map(|c| {
            let e = source.skew(c);
            (q.qualifies(e, exact) && is_minimal(source, c, q)).then(|| report(*c, e, q, true, exact))
        })
        .collect();
    out.sort_by(|a, b| a.subcube.cmp(&b.subcube));
    Ok(out)
}
