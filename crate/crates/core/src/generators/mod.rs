//! Structured and random instances: subcube-uniform, tribes, noisy parity,
//! dual-BCH, random sparse and planted-product measures.

mod bch;
mod gf;

pub use bch::{BchSpec, DualBchSampler, MAX_CODE_DIM};
pub use gf::{GaloisField, GfElement};

use rand::seq::index;
use rand::RngCore;

use crate::cube::{full_mask, submasks, CoordSet, Subcube, MAX_DIM};
use crate::error::{invalid, Error, Result};
use crate::measure::{ExplicitMeasure, Sampler, MAX_EXPLICIT_DIM};
use crate::rng::stream;

fn uniform_f64(rng: &mut dyn RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_explicit(n: usize) -> Result<()> {
    if n == 0 || n > MAX_EXPLICIT_DIM {
        return Err(Error::DimensionOutOfRange { n, max: MAX_EXPLICIT_DIM });
    }
    Ok(())
}

/// `mu_C`: density `2^codim` on `C`, zero elsewhere.
pub fn subcube_uniform(c: &Subcube) -> Result<ExplicitMeasure> {
    let n = c.dim();
    check_explicit(n)?;
    let v = (1u64 << c.codim()) as f64;
    let mut d = vec![0.0; 1 << n];
    for x in c.points() {
        d[x as usize] = v;
    }
    ExplicitMeasure::new(n, d)
}

/// Uniform points of a subcube.
#[derive(Clone, Copy, Debug)]
pub struct SubcubeSampler(pub Subcube);

impl Sampler for SubcubeSampler {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.next_u64() & self.0.free_mask() | self.0.assignment()
    }
}

/// The tribes distribution on `k` blocks of width `t`: choose a block
/// uniformly, set it to all `+1`, draw the rest uniformly. Coordinate
/// `j` of block `i` (both 0-based) is index `i*t + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tribes {
    k: usize,
    t: usize,
}

impl Tribes {
    pub fn new(k: usize, t: usize) -> Result<Self> {
        if k == 0 || t == 0 {
            return Err(invalid("tribes needs k, t >= 1"));
        }
        if k * t > MAX_DIM {
            return Err(Error::DimensionOutOfRange { n: k * t, max: MAX_DIM });
        }
        Ok(Tribes { k, t })
    }

    pub fn dim(&self) -> usize {
        self.k * self.t
    }

    pub fn blocks(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        self.t
    }

    pub fn block_mask(&self, i: usize) -> u64 {
        full_mask(self.t) << (i * self.t)
    }

    /// `(2^t / k)` times the number of all-`+1` blocks of `x`.
    pub fn density(&self, x: u64) -> f64 {
        let full = (0..self.k).filter(|&i| x & self.block_mask(i) == 0).count();
        (1u64 << self.t) as f64 * full as f64 / self.k as f64
    }

    pub fn explicit(&self) -> Result<ExplicitMeasure> {
        let n = self.dim();
        check_explicit(n)?;
        ExplicitMeasure::new(n, (0..1u64 << n).map(|x| self.density(x)).collect())
    }

    /// The `t^k` cubes fixing one coordinate per block to `-1`, in canonical order.
    pub fn zero_certificates(&self) -> Vec<Subcube> {
        let n = self.dim();
        let mut out: Vec<Subcube> = (0..self.t.pow(self.k as u32))
            .map(|mut code| {
                let mut mask = 0u64;
                for i in 0..self.k {
                    mask |= 1 << (i * self.t + code % self.t);
                    code /= self.t;
                }
                Subcube::from_raw(n, mask, mask)
            })
            .collect();
        out.sort();
        out
    }
}

impl Sampler for Tribes {
    fn dim(&self) -> usize {
        self.k * self.t
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        let i = (rng.next_u64() % self.k as u64) as usize;
        rng.next_u64() & full_mask(self.dim()) & !self.block_mask(i)
    }
}

/// Uniform `x` in `{±1}^n` with the label `chi_S(x)` appended as coordinate
/// `n`, flipped with probability `eta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisyParity {
    n: usize,
    secret: u64,
    eta: f64,
}

impl NoisyParity {
    pub fn new(n: usize, secret: &CoordSet, eta: f64) -> Result<Self> {
        if secret.dim() != n {
            return Err(Error::DimensionMismatch { left: n, right: secret.dim() });
        }
        if n + 1 > MAX_DIM {
            return Err(Error::DimensionOutOfRange { n: n + 1, max: MAX_DIM });
        }
        if secret.is_empty() {
            return Err(invalid("secret set must be non-empty"));
        }
        if !(0.0..0.5).contains(&eta) {
            return Err(invalid(format!("noise rate {eta} outside [0, 1/2)")));
        }
        Ok(NoisyParity { n, secret: secret.mask(), eta })
    }

    /// Dimension of the labelled space, `n + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn label_index(&self) -> usize {
        self.n
    }

    pub fn secret(&self) -> u64 {
        self.secret
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `S* ∪ {label}`, the set carrying the only non-trivial coefficient.
    pub fn support_set(&self) -> u64 {
        self.secret | 1 << self.n
    }

    fn agrees(&self, x: u64) -> bool {
        (x & self.support_set()).count_ones() & 1 == 0
    }

    /// `2(1 - eta)` where the label agrees with the parity, `2 eta` elsewhere.
    pub fn density(&self, x: u64) -> f64 {
        if self.agrees(x) {
            2.0 * (1.0 - self.eta)
        } else {
            2.0 * self.eta
        }
    }

    pub fn explicit(&self) -> Result<ExplicitMeasure> {
        let n = self.dim();
        check_explicit(n)?;
        ExplicitMeasure::new(n, (0..1u64 << n).map(|x| self.density(x)).collect())
    }

    /// The `2^{|S|+1}` cubes on `S* ∪ {label}`: first those whose label agrees
    /// with the parity (skew `1 - 2 eta`), then the rest (skew `-(1 - 2 eta)`).
    pub fn planted_cubes(&self) -> (Vec<Subcube>, Vec<Subcube>) {
        let k = self.support_set();
        let (mut pos, mut neg): (Vec<Subcube>, Vec<Subcube>) = submasks(k)
            .map(|a| Subcube::from_raw(self.dim(), k, a))
            .partition(|c| self.agrees(c.assignment()));
        pos.sort();
        neg.sort();
        (pos, neg)
    }
}

impl Sampler for NoisyParity {
    fn dim(&self) -> usize {
        self.n + 1
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        let x = rng.next_u64() & full_mask(self.n);
        let mut label = (x & self.secret).count_ones() as u64 & 1;
        if uniform_f64(rng) < self.eta {
            label ^= 1;
        }
        x | label << self.n
    }
}

/// Uniform over `support` distinct points chosen by `seed`.
pub fn random_sparse(n: usize, support: usize, seed: u64) -> Result<ExplicitMeasure> {
    check_explicit(n)?;
    if support == 0 || support > 1 << n {
        return Err(invalid(format!("support {support} outside 1..=2^{n}")));
    }
    let mut rng = stream(seed, "random-sparse", 0);
    let mut d = vec![0.0; 1 << n];
    for x in index::sample(&mut rng, 1 << n, support) {
        d[x] = 1.0;
    }
    ExplicitMeasure::from_weights(n, d)
}

/// `prod_i (1 + c_i chi_{S_i})` for pairwise disjoint non-empty `S_i` and `|c_i| <= 1`.
///
/// Its non-zero coefficients sit on unions of the `S_i`, with value the
/// product of the corresponding `c_i`.
pub fn planted_product(n: usize, factors: &[(u64, f64)]) -> Result<ExplicitMeasure> {
    check_explicit(n)?;
    let mut used = 0u64;
    for &(s, c) in factors {
        if s == 0 || s & !full_mask(n) != 0 {
            return Err(invalid(format!("factor set {s:#x} not a non-empty subset of {n} coordinates")));
        }
        if s & used != 0 {
            return Err(Error::Overlap { set: s, fixed: used });
        }
        if !(c.abs() <= 1.0) {
            return Err(invalid(format!("factor coefficient {c} outside [-1, 1]")));
        }
        used |= s;
    }
    let d = (0..1u64 << n)
        .map(|x| {
            factors
                .iter()
                .map(|&(s, c)| if (x & s).count_ones() & 1 == 0 { 1.0 + c } else { 1.0 - c })
                .product()
        })
        .collect();
    ExplicitMeasure::new(n, d)
}

/// Random planted-product instance: factors with the given magnitudes on
/// disjoint random sets of sizes `1..=max_size`.
pub fn random_planted_product(n: usize, magnitudes: &[f64], max_size: usize, seed: u64) -> Result<(ExplicitMeasure, Vec<(u64, f64)>)> {
    check_explicit(n)?;
    let mut rng = stream(seed, "planted-product", 0);
    let max_size = max_size.max(1);
    if magnitudes.len() * max_size > n {
        return Err(invalid("not enough coordinates for disjoint factor sets"));
    }
    let perm = index::sample(&mut rng, n, n).into_vec();
    let mut factors = Vec::new();
    let mut pos = 0;
    for &c in magnitudes {
        let size = 1 + (rng.next_u64() % max_size as u64) as usize;
        let s = perm[pos..pos + size].iter().fold(0u64, |m, &i| m | 1 << i);
        pos += size;
        let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
        factors.push((s, sign * c));
    }
    Ok((planted_product(n, &factors)?, factors))
}
