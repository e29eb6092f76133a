//! Sample-based search for heavy coefficients by random bipartitions.
//!
//! Each round splits the coordinates into `N1, N2` and forms, for every
//! `Q ⊆ N1` with `|Q| <= ceil(k/2)` and `R ⊆ N2` with `|R| <= floor(k/2)`, the
//! vector `y_Q[s] = chi_Q(x_s)` over the samples. Since
//! `<y_Q, y_R> / d` is the empirical mean of `chi_{Q∪R}`, a correlated pair
//! reveals a heavy coefficient on `Q ∪ R`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::corr::{find_corr, CorrBackend, SignVectors};
use super::{CoeffList, Guarantee};
use crate::cube::{submasks_up_to, BitIter, CoordSet};
use crate::error::{invalid, Error, Result};
use crate::fourier::{coeff_estimate, default_delta, CoeffEntry, CoeffSource};
use crate::measure::SampleSet;
use crate::rng::stream;

/// Parameters of one search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FfcParams {
    pub n: usize,
    pub k: usize,
    pub rho: f64,
    pub lambda: f64,
    /// `(rho/2)^{1/lambda}`
    pub tau: f64,
    /// `ceil(32 k ln n / tau^2)` samples.
    pub d: usize,
    /// `ceil(16 k^{3/2} ln n)` bipartitions.
    pub rounds: usize,
    pub seed: u64,
}

impl FfcParams {
    pub fn new(n: usize, k: usize, rho: f64, lambda: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("search needs n >= 2"));
        }
        if k == 0 || k > n {
            return Err(invalid(format!("degree {k} outside 1..={n}")));
        }
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(invalid(format!("rho {rho} outside (0, 1]")));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(invalid(format!("lambda {lambda} outside (0, 1]")));
        }
        let ln_n = (n as f64).ln();
        let tau = (rho / 2.0).powf(1.0 / lambda);
        let d = (32.0 * k as f64 * ln_n / (tau * tau)).ceil();
        if d > 1e9 {
            return Err(invalid(format!("rho = {rho} needs {d:.3e} samples")));
        }
        let rounds = (16.0 * (k as f64).powf(1.5) * ln_n).ceil().max(1.0) as usize;
        Ok(FfcParams { n, k, rho, lambda, tau, d: d.max(1.0) as usize, rounds, seed })
    }

    /// Fresh samples for the final filter: accuracy `rho/4` at failure `n^{-2k}` per set.
    pub fn filter_samples(&self) -> usize {
        let acc = self.rho / 4.0;
        ((2.0 / default_delta(self.n, self.k)).ln() / (2.0 * acc * acc)).ceil() as usize
    }
}

/// Raw search output and the filtered list.
#[derive(Clone, Debug, Serialize)]
pub struct FfcOutput {
    pub params: FfcParams,
    /// Every reported `Q ∪ R`, valued by its correlation on the search samples.
    pub raw: Vec<CoeffEntry>,
    /// Sets whose re-estimate on fresh samples reaches `3 rho / 4`.
    pub list: CoeffList,
    pub filter_samples: usize,
}

/// Packs coordinate `i` of every sample into a bit column.
fn columns(samples: &[u64], n: usize) -> Vec<Vec<u64>> {
    let words = samples.len().div_ceil(64);
    let mut cols = vec![vec![0u64; words]; n];
    for (s, &x) in samples.iter().enumerate() {
        for i in BitIter(x) {
            cols[i][s / 64] |= 1 << (s % 64);
        }
    }
    cols
}

fn build(sets: &[u64], cols: &[Vec<u64>], d: usize) -> SignVectors {
    let words = d.div_ceil(64);
    let mut v = SignVectors::new(d);
    let mut row = vec![0u64; words];
    for &s in sets {
        row.iter_mut().for_each(|w| *w = 0);
        for i in BitIter(s) {
            row.iter_mut().zip(&cols[i]).for_each(|(w, c)| *w ^= c);
        }
        v.push_packed(&row);
    }
    v
}

/// The union over all rounds of `Q ∪ R` for pairs with `|corr| >= rho/2`,
/// computed on the first `d` samples.
pub fn ffc_search(samples: &SampleSet, params: &FfcParams, backend: CorrBackend) -> Result<Vec<CoeffEntry>> {
    if samples.dim() != params.n {
        return Err(Error::DimensionMismatch { left: params.n, right: samples.dim() });
    }
    if samples.len() < params.d {
        return Err(Error::InsufficientSamples { need: params.d, have: samples.len() });
    }
    let d = params.d;
    let cols = columns(&samples.points()[..d], params.n);
    let (kq, kr) = (params.k.div_ceil(2), params.k / 2);
    let per_round: Vec<Vec<(u64, i64)>> = (0..params.rounds)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(params.seed, "ffc-round", r as u64);
            let n1 = (0..params.n).filter(|_| rng.gen_bool(0.5)).fold(0u64, |m, i| m | 1 << i);
            let n2 = crate::cube::full_mask(params.n) & !n1;
            let qs = submasks_up_to(n1, kq);
            let rs = submasks_up_to(n2, kr);
            let a = build(&qs, &cols, d);
            let b = build(&rs, &cols, d);
            find_corr(&a, &b, params.rho / 2.0, backend)
                .into_iter()
                .map(|p| (qs[p.left] | rs[p.right], p.inner))
                .collect()
        })
        .collect();
    let mut found: BTreeMap<u64, i64> = BTreeMap::new();
    for (s, inner) in per_round.into_iter().flatten() {
        found.insert(s, inner);
    }
    let err = params.tau / 2.0;
    Ok(found
        .into_iter()
        .map(|(set, inner)| CoeffEntry {
            set,
            value: inner as f64 / d as f64,
            source: CoeffSource::Sampled,
            sample_error: if set == 0 { 0.0 } else { err },
        })
        .collect())
}

/// Search on the first `d` samples, then keep the sets whose estimate on the
/// remaining samples has magnitude at least `3 rho / 4`.
pub fn ffc(samples: &SampleSet, params: &FfcParams, backend: CorrBackend) -> Result<FfcOutput> {
    let need = params.d + 1;
    if samples.len() < need {
        return Err(Error::InsufficientSamples { need, have: samples.len() });
    }
    let raw = ffc_search(samples, params, backend)?;
    let (_, fresh) = samples.split_at(params.d)?;
    let delta = default_delta(params.n, params.k);
    let mut kept = Vec::new();
    for e in &raw {
        let est = coeff_estimate(&fresh, &CoordSet::new(params.n, e.set)?, delta)?;
        if est.value.abs() >= 0.75 * params.rho {
            kept.push(est);
        }
    }
    Ok(FfcOutput {
        params: *params,
        raw,
        list: CoeffList::new(kept, 0.75 * params.rho, params.k, Guarantee::Whp),
        filter_samples: fresh.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::NoisyParity;
    use crate::measure::{draw_samples, ExplicitMeasure};

    #[test]
    fn parameter_formulas() {
        let p = FfcParams::new(13, 4, 0.5, 0.5, 0).unwrap();
        assert!((p.tau - 0.0625).abs() < 1e-15);
        assert_eq!(p.d, (32.0 * 4.0 * 13f64.ln() / 0.0625f64.powi(2)).ceil() as usize);
        assert_eq!(p.rounds, 329);
        assert!(p.tau <= p.rho / 2.0);
        assert!(FfcParams::new(13, 4, 0.0, 0.5, 0).is_err());
        assert!(FfcParams::new(13, 4, 0.5, 1.5, 0).is_err());
        assert!(FfcParams::new(13, 4, 1e-4, 0.5, 0).is_err());
    }

    #[test]
    fn uniform_keeps_only_empty_set() {
        let u = ExplicitMeasure::uniform(10).unwrap();
        let p = FfcParams::new(10, 2, 0.5, 1.0, 3).unwrap();
        let s = draw_samples(&u.sampler(), p.d + p.filter_samples(), 3).unwrap();
        let out = ffc(&s, &p, CorrBackend::Pairwise).unwrap();
        assert_eq!(out.list.sets(), vec![0]);
    }

    #[test]
    fn finds_noisy_parity_and_is_seed_reproducible() {
        let np = NoisyParity::new(10, &CoordSet::from_indices(10, &[1, 6]).unwrap(), 0.1).unwrap();
        let p = FfcParams::new(11, 3, 0.5, 1.0, 9).unwrap();
        let s = draw_samples(&np, p.d + p.filter_samples(), 9).unwrap();
        let out = ffc(&s, &p, CorrBackend::Pairwise).unwrap();
        assert!(out.list.contains(np.support_set()));
        let again = ffc(&s, &p, CorrBackend::Blocked).unwrap();
        assert_eq!(out.raw, again.raw);
        for e in &out.raw {
            assert!(e.value.abs() >= p.rho / 2.0 - 1e-12);
        }
    }

    #[test]
    fn insufficient_samples() {
        let u = ExplicitMeasure::uniform(6).unwrap();
        let p = FfcParams::new(6, 2, 0.5, 1.0, 0).unwrap();
        let s = draw_samples(&u.sampler(), p.d - 1, 0).unwrap();
        assert!(matches!(ffc_search(&s, &p, CorrBackend::Pairwise), Err(Error::InsufficientSamples { .. })));
    }
}
