//! Heavy coefficients of restrictions, deduced from one list for `psi`.
//!
//! The restriction to `C = (J, z)` has coefficient
//! `sum_{T ⊆ J} psi_hat(S ∪ T) chi_T(z) / <psi, mu_C>` at `S` (disjoint from
//! `J`), so every heavy coefficient of `psi|_C` comes from some set of the
//! list whose intersection with `J` is `T`. The graph stores, for every
//! subset `T` of a listed set `S`, the edge `T -> S` in bucket `|S \ T|`.

use std::collections::{BTreeSet, HashMap};

use super::{CoeffList, Guarantee};
use crate::cube::{submasks, Subcube};
use crate::error::{Error, Result};
use crate::fourier::{restricted_coeff, CoeffEntry, CoeffSource, Spectrum};
use crate::measure::{SampleSet, MAX_HISTOGRAM_DIM};

/// Masses below this are treated as zero when read off a spectrum.
pub const ZERO_MASS_TOL: f64 = 1e-12;

/// Superset edges over a coefficient list.
#[derive(Clone, Debug)]
pub struct CoeffGraph {
    degree: usize,
    lists: HashMap<u64, Vec<Vec<u64>>>,
    edges: usize,
    members: usize,
}

/// Builds the graph: for every `S` in the list and every `T ⊆ S`, edge `T -> S`.
pub fn preprocess(list: &CoeffList) -> CoeffGraph {
    let degree = list.degree.max(list.entries.iter().map(|e| e.set.count_ones() as usize).max().unwrap_or(0));
    let mut lists: HashMap<u64, Vec<Vec<u64>>> = HashMap::new();
    let mut edges = 0;
    for e in &list.entries {
        for t in submasks(e.set) {
            let i = (e.set ^ t).count_ones() as usize;
            lists.entry(t).or_insert_with(|| vec![Vec::new(); degree + 1])[i].push(e.set);
            edges += 1;
        }
    }
    CoeffGraph { degree, lists, edges, members: list.entries.len() }
}

impl CoeffGraph {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn member_count(&self) -> usize {
        self.members
    }

    /// Out-neighbours `S` of `T` with `|S \ T| = i`.
    pub fn out_neighbors(&self, t: u64, i: usize) -> &[u64] {
        self.lists.get(&t).and_then(|l| l.get(i)).map_or(&[], |v| v.as_slice())
    }

    /// Candidate sets `S \ J` of degree at most `max_degree` for the restriction to `J`.
    pub fn candidates(&self, j: u64, max_degree: usize) -> Vec<u64> {
        let mut out = BTreeSet::new();
        for t in submasks(j) {
            for i in 0..=max_degree.min(self.degree) {
                for &s in self.out_neighbors(t, i) {
                    out.insert(s & !j);
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Sample access with the empirical spectrum precomputed when it fits.
#[derive(Clone, Debug)]
pub struct SampledAccess<'a> {
    samples: &'a SampleSet,
    delta: f64,
    spectrum: Option<Spectrum>,
}

impl<'a> SampledAccess<'a> {
    pub fn new(samples: &'a SampleSet, delta: f64) -> Result<Self> {
        let spectrum = if samples.dim() <= MAX_HISTOGRAM_DIM {
            Some(Spectrum::of(&samples.empirical_measure()?))
        } else {
            None
        };
        Ok(SampledAccess { samples, delta, spectrum })
    }

    pub fn samples(&self) -> &SampleSet {
        self.samples
    }

    /// Empirical coefficients of `psi|_C` at `sets`, with Hoeffding error for
    /// the number of samples falling in `C`.
    pub fn restricted(&self, c: &Subcube, sets: &[u64]) -> Result<Vec<CoeffEntry>> {
        let inside = self.samples.count_in(c);
        if inside == 0 {
            return Err(Error::ZeroMass);
        }
        let err = ((2.0 / self.delta).ln() / (2.0 * inside as f64)).sqrt();
        let entry = |set: u64, value: f64| CoeffEntry {
            set,
            value,
            source: CoeffSource::Sampled,
            sample_error: if set == 0 { 0.0 } else { err },
        };
        match &self.spectrum {
            Some(spec) => {
                let ip = spec.inner_cube(c);
                sets.iter().map(|&s| Ok(entry(s, restricted_coeff(spec, c, s, ip)?))).collect()
            }
            None => {
                let pts: Vec<u64> = self.samples.points().iter().copied().filter(|&x| c.contains_bits(x)).collect();
                Ok(sets
                    .iter()
                    .map(|&s| {
                        let odd = pts.iter().filter(|&&x| (x & s).count_ones() & 1 == 1).count();
                        entry(s, (pts.len() as f64 - 2.0 * odd as f64) / pts.len() as f64)
                    })
                    .collect())
            }
        }
    }
}

/// How candidate coefficients are evaluated.
#[derive(Clone, Copy, Debug)]
pub enum DeduceAccess<'a> {
    Exact(&'a Spectrum),
    Sampled(&'a SampledAccess<'a>),
}

/// Coefficients of `psi|_C` with degree at most `k - |J|` and magnitude at
/// least `tau` (exact access) or `3 tau / 4` (sampled access), in the
/// coordinates of `psi`.
pub fn deduce_subcube_coeffs(g: &CoeffGraph, c: &Subcube, tau: f64, access: DeduceAccess<'_>) -> Result<CoeffList> {
    let j = c.fixed_mask();
    let codim = c.codim();
    let max_degree = g.degree.saturating_sub(codim);
    if codim > g.degree {
        return Ok(CoeffList::new(Vec::new(), tau, 0, Guarantee::Exact));
    }
    let cands = g.candidates(j, max_degree);
    match access {
        DeduceAccess::Exact(spec) => {
            let ip = spec.inner_cube(c);
            if ip <= ZERO_MASS_TOL {
                return Err(Error::ZeroMass);
            }
            let mut kept = Vec::new();
            for s in cands {
                let v = restricted_coeff(spec, c, s, ip)?;
                if v.abs() >= tau {
                    kept.push(CoeffEntry::exact(s, v));
                }
            }
            Ok(CoeffList::new(kept, tau, max_degree, Guarantee::Exact))
        }
        DeduceAccess::Sampled(sa) => {
            let thr = 0.75 * tau;
            let kept = sa.restricted(c, &cands)?.into_iter().filter(|e| e.value.abs() >= thr).collect();
            Ok(CoeffList::new(kept, thr, max_degree, Guarantee::Whp))
        }
    }
}
