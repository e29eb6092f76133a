//! Densities over `{±1}^n` and the skew algebra on subcubes.
//!
//! A measure is stored as a density `psi` with uniform mean 1, so
//! `Pr[x] = psi(x) / 2^n`. With that scale `<psi, mu_C>` is simply the
//! average of `psi` over the points of `C`.

mod io;
mod oracle;
mod samples;

pub use io::{read_measure, read_samples, write_measure, write_samples, MeasureFormat, InputFile};
pub use oracle::{CountingOracle, QueryOracle, SupportOracle};
pub use samples::{
    draw_samples, hoeffding_halfwidth, required_samples, Estimate, NormEstimate, SampleSet, Sampler,
    MAX_HISTOGRAM_DIM,
};

use std::fmt;

use rand::RngCore;
use serde::Serialize;

use crate::cube::{compress, expand, CoordSet, Subcube};
use crate::error::{Error, Result};

/// Largest dimension an explicit table may have.
pub const MAX_EXPLICIT_DIM: usize = 30;

/// Tolerance on the uniform mean of a loaded density.
pub const NORM_TOL: f64 = 1e-12;

pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A density table indexed by packed points.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitMeasure {
    n: usize,
    density: Vec<f64>,
}

impl ExplicitMeasure {
    /// Validates a density: length `2^n`, non-negative, uniform mean 1.
    pub fn new(n: usize, density: Vec<f64>) -> Result<Self> {
        let m = Self::unchecked_shape(n, density)?;
        let mean = neumaier_sum(m.density.iter().copied()) / m.density.len() as f64;
        if (mean - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { mean });
        }
        Ok(m)
    }

    /// Rescales non-negative weights to uniform mean 1.
    pub fn from_weights(n: usize, weights: Vec<f64>) -> Result<Self> {
        let mut m = Self::unchecked_shape(n, weights)?;
        let total = neumaier_sum(m.density.iter().copied());
        if total <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let scale = m.density.len() as f64 / total;
        m.density.iter_mut().for_each(|v| *v *= scale);
        Ok(m)
    }

    fn unchecked_shape(n: usize, density: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_EXPLICIT_DIM {
            return Err(Error::DimensionOutOfRange { n, max: MAX_EXPLICIT_DIM });
        }
        if density.len() != 1usize << n {
            return Err(Error::DimensionMismatch { left: 1usize << n, right: density.len() });
        }
        if let Some((i, &v)) = density.iter().enumerate().find(|(_, v)| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::NegativeDensity { index: i as u64, value: v });
        }
        Ok(ExplicitMeasure { n, density })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_EXPLICIT_DIM {
            return Err(Error::DimensionOutOfRange { n, max: MAX_EXPLICIT_DIM });
        }
        Ok(ExplicitMeasure { n, density: vec![1.0; 1 << n] })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn value(&self, bits: u64) -> f64 {
        self.density[bits as usize]
    }

    pub fn probability(&self, bits: u64) -> f64 {
        self.density[bits as usize] / self.density.len() as f64
    }

    /// `<psi, mu_C> = 2^codim Pr[x in C]`, by summation over `C`.
    pub fn inner_cube(&self, c: &Subcube) -> f64 {
        assert_eq!(c.dim(), self.n, "subcube dimension");
        let free = c.free_mask();
        let a = c.assignment();
        let size = 1u64 << free.count_ones();
        neumaier_sum(crate::cube::submasks(free).map(|f| self.density[(f | a) as usize])) / size as f64
    }

    /// `skew(C) = <psi, mu_C> - 1`.
    pub fn skew(&self, c: &Subcube) -> f64 {
        self.inner_cube(c) - 1.0
    }

    /// `2^n max Pr[x]`, i.e. the largest density value.
    pub fn inorm(&self) -> f64 {
        self.density.iter().copied().fold(0.0, f64::max)
    }

    /// The points with positive density.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.density.iter().enumerate().filter(|(_, v)| **v > 0.0).map(|(i, _)| i as u64)
    }

    /// `psi` conditioned on `C`, on the free coordinates of `C`.
    pub fn restrict(&self, c: &Subcube) -> Result<Restriction> {
        if c.dim() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: c.dim() });
        }
        let ip = self.inner_cube(c);
        if ip <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let free = c.free_mask();
        let local_n = free.count_ones() as usize;
        let measure = if local_n == 0 {
            None
        } else {
            let density = (0..1u64 << local_n)
                .map(|w| self.density[(expand(w, free) | c.assignment()) as usize] / ip)
                .collect();
            Some(ExplicitMeasure { n: local_n, density })
        };
        Ok(Restriction { cube: *c, ip, measure })
    }

    /// Average over the coordinates outside `P`; result lives on `|P|` coordinates.
    pub fn marginal(&self, p: &CoordSet) -> Result<ExplicitMeasure> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p.dim() });
        }
        if p.is_empty() {
            return Err(Error::InvalidParameter("marginal onto the empty set".into()));
        }
        let mask = p.mask();
        let k = p.len();
        let mut out = vec![0.0; 1 << k];
        for (x, &v) in self.density.iter().enumerate() {
            out[compress(x as u64, mask) as usize] += v;
        }
        let scale = (1u64 << (self.n - k)) as f64;
        out.iter_mut().for_each(|v| *v /= scale);
        Ok(ExplicitMeasure { n: k, density: out })
    }

    /// Product of `self` (placed on the coordinates of `P`) with the uniform
    /// measure on the rest of `P.dim()` coordinates.
    pub fn extend(&self, p: &CoordSet) -> Result<ExplicitMeasure> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p.len() });
        }
        let n = p.dim();
        if n > MAX_EXPLICIT_DIM {
            return Err(Error::DimensionOutOfRange { n, max: MAX_EXPLICIT_DIM });
        }
        let mask = p.mask();
        let density = (0..1u64 << n).map(|x| self.density[compress(x, mask) as usize]).collect();
        Ok(ExplicitMeasure { n, density })
    }

    /// Sampler over the support by inverse-CDF lookup.
    pub fn sampler(&self) -> ExplicitSampler {
        let mut points = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for x in self.support() {
            acc += self.density[x as usize];
            points.push(x);
            cumulative.push(acc);
        }
        ExplicitSampler { n: self.n, points, cumulative }
    }
}

/// Draws points of an [`ExplicitMeasure`].
#[derive(Clone, Debug)]
pub struct ExplicitSampler {
    n: usize,
    points: Vec<u64>,
    cumulative: Vec<f64>,
}

impl Sampler for ExplicitSampler {
    fn dim(&self) -> usize {
        self.n
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        let total = *self.cumulative.last().expect("normalized measure has support");
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * total;
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.points[i.min(self.points.len() - 1)]
    }
}

/// `psi|_C` together with the map back to the original coordinates.
///
/// Free coordinates of `C` are renumbered densely in increasing order.
/// When `C` fixes every coordinate the restriction is the point mass on a
/// zero-dimensional cube and no table is stored.
#[derive(Clone, Debug)]
pub struct Restriction {
    cube: Subcube,
    ip: f64,
    measure: Option<ExplicitMeasure>,
}

impl Restriction {
    pub fn cube(&self) -> &Subcube {
        &self.cube
    }

    /// `<psi, mu_C>` of the parent measure.
    pub fn mass(&self) -> f64 {
        self.ip
    }

    pub fn measure(&self) -> Option<&ExplicitMeasure> {
        self.measure.as_ref()
    }

    /// Original index of each local coordinate.
    pub fn coords(&self) -> Vec<usize> {
        crate::cube::BitIter(self.cube.free_mask()).collect()
    }

    pub fn lift_bits(&self, local: u64) -> u64 {
        expand(local, self.cube.free_mask()) | self.cube.assignment()
    }

    pub fn lift_set(&self, local_mask: u64) -> u64 {
        expand(local_mask, self.cube.free_mask())
    }

    /// Maps a subcube of the restricted space to the corresponding subcube of `C`.
    pub fn lift_subcube(&self, local: &Subcube) -> Subcube {
        let free = self.cube.free_mask();
        Subcube::from_raw(
            self.cube.dim(),
            self.cube.fixed_mask() | expand(local.fixed_mask(), free),
            self.cube.assignment() | expand(local.assignment(), free),
        )
    }

    /// Maps a subcube of the parent inside `C` to the local coordinates.
    pub fn localize(&self, global: &Subcube) -> Result<Subcube> {
        let c = &self.cube;
        if c.fixed_mask() & !global.fixed_mask() != 0 || (global.assignment() ^ c.assignment()) & c.fixed_mask() != 0 {
            return Err(Error::InvalidParameter(format!("{global} is not inside {c}")));
        }
        let free = c.free_mask();
        let n = free.count_ones() as usize;
        Subcube::new(n, compress(global.fixed_mask(), free), compress(global.assignment(), free))
    }
}

/// Direction of a skew.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn of(value: f64) -> Sign {
        if value < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        })
    }
}

/// A subcube found by an enumerator.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewReport {
    pub subcube: Subcube,
    pub skew: f64,
    pub sign: Sign,
    pub minimal: bool,
    pub estimated: bool,
    pub est_error: f64,
}

impl fmt::Display for SkewReport {
    /// `<subcube> skew=<v> codim=<j> minimal=<bool>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} skew={} codim={} minimal={}", self.subcube, self.skew, self.subcube.codim(), self.minimal)
    }
}
