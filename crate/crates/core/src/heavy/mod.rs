//! Finding large low-degree Fourier coefficients: exactly from a table,
//! from samples by correlated-pair search, for restrictions via the
//! superset graph, and from point queries by bucket recursion.

mod corr;
mod ffc;
mod gl;
mod graph;

pub use corr::{find_corr, CorrBackend, CorrPair, SignVectors};
pub use ffc::{ffc, ffc_search, FfcOutput, FfcParams};
pub use gl::{goldreich_levin, GlOutput, GlParams, GlWeights};
pub use graph::{deduce_subcube_coeffs, preprocess, CoeffGraph, DeduceAccess, SampledAccess, ZERO_MASS_TOL};

use serde::Serialize;

use crate::fourier::{CoeffEntry, Spectrum};
use crate::measure::ExplicitMeasure;

/// Whether a list is exact or correct with high probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Guarantee {
    Exact,
    Whp,
}

/// Heavy coefficients of degree at most `degree`, ordered by size then mask.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoeffList {
    pub entries: Vec<CoeffEntry>,
    pub threshold: f64,
    pub degree: usize,
    pub guarantee: Guarantee,
}

impl CoeffList {
    pub fn new(mut entries: Vec<CoeffEntry>, threshold: f64, degree: usize, guarantee: Guarantee) -> Self {
        entries.sort_by_key(|e| (e.set.count_ones(), e.set));
        entries.dedup_by_key(|e| e.set);
        CoeffList { entries, threshold, degree, guarantee }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sets(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.set).collect()
    }

    pub fn get(&self, set: u64) -> Option<&CoeffEntry> {
        self.entries.iter().find(|e| e.set == set)
    }

    pub fn contains(&self, set: u64) -> bool {
        self.get(set).is_some()
    }
}

/// `{S : |S| <= k, |psi_hat(S)| >= rho}` read off a spectrum.
pub fn heavy_in_spectrum(spec: &Spectrum, k: usize, rho: f64) -> CoeffList {
    let entries = spec
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(s, c)| (s.count_ones() as usize) <= k && c.abs() >= rho)
        .map(|(s, &c)| CoeffEntry::exact(s as u64, c))
        .collect();
    CoeffList::new(entries, rho, k, Guarantee::Exact)
}

/// `{S : |S| <= k, |psi_hat(S)| >= rho}` via the transform of the table.
pub fn find_heavy_exact(m: &ExplicitMeasure, k: usize, rho: f64) -> CoeffList {
    heavy_in_spectrum(&Spectrum::of(m), k, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{CoordSet, Subcube};
    use crate::generators::{subcube_uniform, NoisyParity};

    #[test]
    fn exact_examples() {
        let u = ExplicitMeasure::uniform(6).unwrap();
        assert_eq!(find_heavy_exact(&u, 2, 0.5).sets(), vec![0]);

        let np = NoisyParity::new(12, &CoordSet::from_indices(12, &[0, 3, 7]).unwrap(), 0.1).unwrap();
        let l = find_heavy_exact(&np.explicit().unwrap(), 4, 0.5);
        assert_eq!(l.sets(), vec![0, np.support_set()]);
        assert!((l.entries[1].value - 0.8).abs() < 1e-12);

        let ones = subcube_uniform(&Subcube::new(4, 0b1111, 0).unwrap()).unwrap();
        let l = find_heavy_exact(&ones, 2, 1.0);
        assert_eq!(l.len(), 1 + 4 + 6);
        assert!(l.entries.iter().all(|e| e.set.count_ones() <= 2));
    }
}
