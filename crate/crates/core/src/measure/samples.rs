use std::collections::HashMap;

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use super::ExplicitMeasure;
use crate::cube::{full_mask, Subcube, MAX_DIM};
use crate::error::{Error, Result};
use crate::rng::stream;

/// Largest dimension for which a sample set is histogrammed into a table.
pub const MAX_HISTOGRAM_DIM: usize = 24;

const CHUNK: usize = 4096;

/// A value with an additive error bar (`error == 0` for exact values).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

/// `inorm` together with a flag telling whether it was read off samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub empirical: bool,
}

/// Anything that can draw points of `{±1}^n`.
pub trait Sampler: Send + Sync {
    fn dim(&self) -> usize;
    fn sample(&self, rng: &mut dyn RngCore) -> u64;
}

/// Half-width `2^k sqrt(ln(2/delta) / 2m)` of the Hoeffding interval for the
/// skew of a codimension-`k` cube estimated from `m` samples.
pub fn hoeffding_halfwidth(codim: usize, m: usize, delta: f64) -> f64 {
    (1u64 << codim) as f64 * ((2.0 / delta).ln() / (2.0 * m as f64)).sqrt()
}

/// Smallest `m` whose Hoeffding half-width at codimension `k` is at most `accuracy`.
pub fn required_samples(codim: usize, accuracy: f64, delta: f64) -> usize {
    let scale = (1u64 << codim) as f64;
    (scale * scale * (2.0 / delta).ln() / (2.0 * accuracy * accuracy)).ceil() as usize
}

/// Points drawn from a distribution, packed as words.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    n: usize,
    points: Vec<u64>,
    seed: u64,
}

impl SampleSet {
    pub fn new(n: usize, points: Vec<u64>, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange { n, max: MAX_DIM });
        }
        if points.is_empty() {
            return Err(Error::EmptySampleSet);
        }
        let mask = full_mask(n);
        if let Some(&p) = points.iter().find(|&&p| p & !mask != 0) {
            return Err(Error::BitsOutOfRange { bits: p, n });
        }
        Ok(SampleSet { n, points, seed })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Splits into the first `at` points and the rest.
    pub fn split_at(&self, at: usize) -> Result<(SampleSet, SampleSet)> {
        if at == 0 || at >= self.points.len() {
            return Err(Error::InsufficientSamples { need: at + 1, have: self.points.len() });
        }
        let (a, b) = self.points.split_at(at);
        Ok((
            SampleSet { n: self.n, points: a.to_vec(), seed: self.seed },
            SampleSet { n: self.n, points: b.to_vec(), seed: self.seed },
        ))
    }

    pub fn count_in(&self, c: &Subcube) -> usize {
        self.points.iter().filter(|&&p| c.contains_bits(p)).count()
    }

    /// `2^k` times the fraction of samples in `C`, an unbiased estimate of `<psi, mu_C>`.
    pub fn inner_cube(&self, c: &Subcube) -> f64 {
        (1u64 << c.codim()) as f64 * self.count_in(c) as f64 / self.points.len() as f64
    }

    /// Skew estimate with its Hoeffding half-width at failure probability `delta`.
    pub fn estimate_skew(&self, c: &Subcube, delta: f64) -> Estimate {
        Estimate {
            value: self.inner_cube(c) - 1.0,
            error: hoeffding_halfwidth(c.codim(), self.points.len(), delta),
        }
    }

    /// `2^n` times the largest empirical point frequency; a lower bound in expectation.
    pub fn empirical_inorm(&self) -> NormEstimate {
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for &p in &self.points {
            *counts.entry(p).or_default() += 1;
        }
        let max = counts.values().copied().max().unwrap_or(0);
        NormEstimate { value: 2f64.powi(self.n as i32) * max as f64 / self.points.len() as f64, empirical: true }
    }

    /// Point multiplicities as a dense table.
    pub fn histogram(&self) -> Result<Vec<u32>> {
        if self.n > MAX_HISTOGRAM_DIM {
            return Err(Error::DimensionOutOfRange { n: self.n, max: MAX_HISTOGRAM_DIM });
        }
        let mut h = vec![0u32; 1 << self.n];
        for &p in &self.points {
            h[p as usize] += 1;
        }
        Ok(h)
    }

    /// The uniform distribution over the sample multiset.
    pub fn empirical_measure(&self) -> Result<ExplicitMeasure> {
        let h = self.histogram()?;
        ExplicitMeasure::from_weights(self.n, h.into_iter().map(f64::from).collect())
    }
}

/// Draws `m` points. Chunk `i` of 4096 draws uses its own sub-stream, so the
/// result depends only on `seed`, not on how chunks are scheduled.
pub fn draw_samples(sampler: &dyn Sampler, m: usize, seed: u64) -> Result<SampleSet> {
    if m == 0 {
        return Err(Error::EmptySampleSet);
    }
    let chunks = m.div_ceil(CHUNK);
    let points: Vec<u64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = stream(seed, "samples", c as u64);
            let len = CHUNK.min(m - c * CHUNK);
            (0..len).map(move |_| sampler.sample(&mut rng)).collect::<Vec<_>>()
        })
        .collect();
    SampleSet::new(sampler.dim(), points, seed)
}
