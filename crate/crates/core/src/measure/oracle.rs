use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::RngCore;

use super::{ExplicitMeasure, SampleSet, Sampler};

/// Point-evaluation access to a density (uniform mean 1).
///
/// Types that can also draw from the distribution implement [`Sampler`].
pub trait QueryOracle: Sync {
    fn dim(&self) -> usize;
    fn density(&self, x: u64) -> f64;
}

impl QueryOracle for ExplicitMeasure {
    fn dim(&self) -> usize {
        self.n
    }

    fn density(&self, x: u64) -> f64 {
        self.value(x)
    }
}

impl<O: QueryOracle + ?Sized> QueryOracle for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn density(&self, x: u64) -> f64 {
        (**self).density(x)
    }
}

/// Wraps an oracle and counts density queries.
pub struct CountingOracle<O> {
    inner: O,
    queries: AtomicU64,
}

impl<O: QueryOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle { inner, queries: AtomicU64::new(0) }
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: QueryOracle> QueryOracle for CountingOracle<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn density(&self, x: u64) -> f64 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.density(x)
    }
}

/// The uniform distribution over a stored sample multiset, usable at any `n`.
#[derive(Clone, Debug)]
pub struct SupportOracle {
    n: usize,
    points: Vec<u64>,
    counts: HashMap<u64, u32>,
    scale: f64,
}

impl SupportOracle {
    pub fn new(samples: &SampleSet) -> Self {
        let mut counts = HashMap::new();
        for &p in samples.points() {
            *counts.entry(p).or_insert(0) += 1;
        }
        let scale = 2f64.powi(samples.dim() as i32) / samples.len() as f64;
        SupportOracle { n: samples.dim(), points: samples.points().to_vec(), counts, scale }
    }

    /// Largest density value, `2^n max multiplicity / m`.
    pub fn inorm(&self) -> f64 {
        self.counts.values().copied().max().unwrap_or(0) as f64 * self.scale
    }
}

impl QueryOracle for SupportOracle {
    fn dim(&self) -> usize {
        self.n
    }

    fn density(&self, x: u64) -> f64 {
        self.counts.get(&x).map_or(0.0, |&c| c as f64 * self.scale)
    }
}

impl Sampler for SupportOracle {
    fn dim(&self) -> usize {
        self.n
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        let i = (rng.next_u64() % self.points.len() as u64) as usize;
        self.points[i]
    }
}
