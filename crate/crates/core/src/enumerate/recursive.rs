//! The recursive enumerators with the coefficient guesses replaced by
//! enumeration of heavy coefficients.
//!
//! States are explored level by level in codimension; the same subcube can
//! be reached through different orders of fixing its coordinates, so each
//! level is deduplicated before it is expanded.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{report, SkewQuery, SkewSource};
use crate::cube::{submasks, submasks_up_to, Subcube};
use crate::error::{invalid, Error, Result};
use crate::fourier::{restricted_coeff, Spectrum};
use crate::heavy::{
    deduce_subcube_coeffs, ffc, preprocess, CoeffGraph, CorrBackend, DeduceAccess, FfcOutput, FfcParams,
    SampledAccess,
};
use crate::measure::{SampleSet, Sign, SkewReport};

/// Factor applied to coefficient thresholds when values are estimated.
const SAMPLED_SLACK: f64 = 0.75;

/// Heavy coefficients of restrictions.
pub trait CoeffProvider: Sync {
    /// Nonempty sets `S` disjoint from the fixed coordinates of `d`, with
    /// `|S| <= k_t` and `|coeff of psi|_d at S| >= thresholds[|S|]`.
    fn heavy(&self, d: &Subcube, k_t: usize, thresholds: &[f64]) -> Result<Vec<u64>>;
}

/// Restricted coefficients read off a full spectrum, exact or empirical.
#[derive(Clone, Debug)]
pub struct SpectrumCoeffs {
    spectrum: Spectrum,
    slack: f64,
}

impl SpectrumCoeffs {
    pub fn exact(spectrum: Spectrum) -> Self {
        SpectrumCoeffs { spectrum, slack: 1.0 }
    }

    /// The spectrum of the empirical distribution, with thresholds lowered
    /// to three quarters.
    pub fn empirical(samples: &SampleSet) -> Result<Self> {
        Ok(SpectrumCoeffs { spectrum: Spectrum::of(&samples.empirical_measure()?), slack: SAMPLED_SLACK })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }
}

impl CoeffProvider for SpectrumCoeffs {
    fn heavy(&self, d: &Subcube, k_t: usize, thresholds: &[f64]) -> Result<Vec<u64>> {
        let ip = self.spectrum.inner_cube(d);
        if ip <= crate::heavy::ZERO_MASS_TOL {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for s in submasks_up_to(d.free_mask(), k_t).into_iter().skip(1) {
            let v = restricted_coeff(&self.spectrum, d, s, ip)?;
            if v.abs() >= self.slack * thresholds[s.count_ones() as usize] {
                out.push(s);
            }
        }
        Ok(out)
    }
}

/// Restricted coefficients deduced from one heavy list through its superset graph.
pub struct GraphCoeffs<'a> {
    graph: CoeffGraph,
    access: DeduceAccess<'a>,
}

impl<'a> GraphCoeffs<'a> {
    pub fn new(graph: CoeffGraph, access: DeduceAccess<'a>) -> Self {
        GraphCoeffs { graph, access }
    }

    pub fn graph(&self) -> &CoeffGraph {
        &self.graph
    }
}

impl CoeffProvider for GraphCoeffs<'_> {
    fn heavy(&self, d: &Subcube, k_t: usize, thresholds: &[f64]) -> Result<Vec<u64>> {
        let tau = thresholds[1..=k_t].iter().copied().fold(f64::INFINITY, f64::min);
        let list = match deduce_subcube_coeffs(&self.graph, d, tau, self.access) {
            Ok(l) => l,
            Err(Error::ZeroMass) => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        let slack = match self.access {
            DeduceAccess::Exact(_) => 1.0,
            DeduceAccess::Sampled(_) => SAMPLED_SLACK,
        };
        Ok(list
            .entries
            .iter()
            .filter(|e| {
                let s = e.set.count_ones() as usize;
                s >= 1 && s <= k_t && e.value.abs() >= slack * thresholds[s]
            })
            .map(|e| e.set)
            .collect())
    }
}

/// The sample pipeline: one correlated-pair search for the whole measure,
/// then deduction for every restriction from the resulting list.
pub struct FfcCoeffs<'a> {
    inner: GraphCoeffs<'a>,
    output: FfcOutput,
}

impl<'a> FfcCoeffs<'a> {
    /// Runs the search at `rho` (default: the query's top-level threshold)
    /// on `samples`, which must hold at least `d + 1` points.
    pub fn build(
        samples: &SampleSet,
        access: &'a SampledAccess<'a>,
        q: &SkewQuery,
        rho: Option<f64>,
        lambda: f64,
        seed: u64,
        backend: CorrBackend,
    ) -> Result<Self> {
        let rho = rho.unwrap_or_else(|| q.top_level_rho());
        let params = FfcParams::new(samples.dim(), q.k.min(samples.dim()), rho, lambda, seed)?;
        let output = ffc(samples, &params, backend)?;
        let graph = preprocess(&output.list);
        Ok(FfcCoeffs { inner: GraphCoeffs::new(graph, DeduceAccess::Sampled(access)), output })
    }

    pub fn output(&self) -> &FfcOutput {
        &self.output
    }
}

impl CoeffProvider for FfcCoeffs<'_> {
    fn heavy(&self, d: &Subcube, k_t: usize, thresholds: &[f64]) -> Result<Vec<u64>> {
        self.inner.heavy(d, k_t, thresholds)
    }
}

/// Work counters of one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    /// Distinct states visited.
    pub nodes: u64,
    /// Distinct states that ended their branch by exceeding the parent ceiling.
    pub candidates: u64,
    /// States pruned by the mass test.
    pub failed: u64,
    /// Largest codimension of a visited state.
    pub max_codim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub query: SkewQuery,
    #[serde(skip)]
    pub reports: Vec<SkewReport>,
    pub stats: EnumerationStats,
}

enum Outcome {
    Record,
    Fail,
    Expand(Vec<Subcube>),
}

fn visit(
    d: &Subcube,
    source: &dyn SkewSource,
    provider: &dyn CoeffProvider,
    q: &SkewQuery,
    exact: bool,
) -> Result<Outcome> {
    let skew = source.skew(d);
    if q.records(skew, exact) {
        return Ok(Outcome::Record);
    }
    let k_t = q.k - d.codim();
    if q.fails(skew, k_t, exact) {
        return Ok(Outcome::Fail);
    }
    if k_t == 0 {
        return Ok(Outcome::Expand(Vec::new()));
    }
    let thresholds: Vec<f64> =
        (0..=k_t).map(|s| if s == 0 { f64::INFINITY } else { q.coeff_threshold(k_t, s) }).collect();
    let sets = provider.heavy(d, k_t, &thresholds)?;
    let mut children = Vec::new();
    for s in sets {
        debug_assert!(s != 0 && s & d.fixed_mask() == 0 && s.count_ones() as usize <= k_t);
        for z in submasks(s) {
            children.push(d.extend_raw(s, z));
        }
    }
    Ok(Outcome::Expand(children))
}

/// Runs the recursion from the full cube and returns the minimal skewed
/// subcubes among the recorded states, in canonical order.
pub fn find_skewed(source: &dyn SkewSource, provider: &dyn CoeffProvider, q: &SkewQuery) -> Result<Enumeration> {
    let n = source.dim();
    if q.k > n {
        return Err(invalid(format!("codimension cap {} exceeds dimension {n}", q.k)));
    }
    let exact = source.is_exact();
    let mut levels: Vec<BTreeSet<Subcube>> = vec![BTreeSet::new(); q.k + 1];
    levels[0].insert(Subcube::full(n)?);
    let mut stats = EnumerationStats::default();
    let mut recorded = Vec::new();
    for codim in 0..=q.k {
        let states: Vec<Subcube> = std::mem::take(&mut levels[codim]).into_iter().collect();
        if states.is_empty() {
            continue;
        }
        stats.nodes += states.len() as u64;
        stats.max_codim = codim;
        let outcomes: Vec<Outcome> =
            states.par_iter().map(|d| visit(d, source, provider, q, exact)).collect::<Result<_>>()?;
        for (d, o) in states.into_iter().zip(outcomes) {
            match o {
                Outcome::Record => recorded.push(d),
                Outcome::Fail => stats.failed += 1,
                Outcome::Expand(children) => {
                    for c in children {
                        levels[c.codim()].insert(c);
                    }
                }
            }
        }
    }
    stats.candidates = recorded.len() as u64;
    let mut reports: Vec<SkewReport> = recorded
        .par_iter()
        .filter_map(|c| {
            let e = source.skew(c);
            (q.qualifies(e, exact) && super::is_minimal(source, c, q)).then(|| report(*c, e, q, true, exact))
        })
        .collect();
    reports.sort_by(|a, b| a.subcube.cmp(&b.subcube));
    Ok(Enumeration { query: *q, reports, stats })
}

/// Positive-skew enumeration.
pub fn fsr(source: &dyn SkewSource, provider: &dyn CoeffProvider, q: &SkewQuery) -> Result<Enumeration> {
    if q.sign != Sign::Positive {
        return Err(invalid("positive-skew enumeration needs a positive query"));
    }
    find_skewed(source, provider, q)
}

/// Negative-skew enumeration.
pub fn fsn(source: &dyn SkewSource, provider: &dyn CoeffProvider, q: &SkewQuery) -> Result<Enumeration> {
    if q.sign != Sign::Negative {
        return Err(invalid("negative-skew enumeration needs a negative query"));
    }
    find_skewed(source, provider, q)
}
