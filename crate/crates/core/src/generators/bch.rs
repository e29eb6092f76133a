//! Extended narrow-sense BCH codes and the uniform measure on their duals.
//!
//! The parity-check matrix `H` has `e*l + 1` rows: for `b = 1..=e` the `l`
//! bit rows of `alpha^{(2b-1) j}`, `j = 0..n-1`, then an all-ones row. Its
//! null space is a `[n, n - e*l - 1, 2e + 2]` code. Columns are stored as
//! words whose bit `r` is row `r`.

use rand::RngCore;

use super::gf::GaloisField;
use crate::cube::{full_mask, MAX_DIM};
use crate::error::{Error, Result};
use crate::measure::{ExplicitMeasure, Sampler, MAX_EXPLICIT_DIM};

/// Largest code dimension enumerated by [`BchSpec::codewords`].
pub const MAX_CODE_DIM: usize = 26;

#[derive(Clone, Debug)]
pub struct BchSpec {
    l: u32,
    e: u32,
    n: usize,
    field: GaloisField,
    columns: Vec<u64>,
    rank: usize,
}

impl BchSpec {
    pub fn new(l: u32, e: u32) -> Result<Self> {
        let field = GaloisField::new(l)?;
        if e == 0 {
            return Err(Error::Unsupported("e must be at least 1".into()));
        }
        let n = (1usize << l) - 1;
        if n > MAX_DIM {
            return Err(Error::Unsupported(format!("length {n} exceeds {MAX_DIM}")));
        }
        let rows = (e * l + 1) as usize;
        if rows > 64 {
            return Err(Error::Unsupported(format!("{rows} parity rows do not fit a word")));
        }
        let d = 2 * e as usize + 2;
        if d > n {
            return Err(Error::Unsupported(format!("designed distance {d} exceeds length {n}")));
        }
        let alpha = field.alpha();
        let columns: Vec<u64> = (0..n as u64)
            .map(|j| {
                let mut col = 0u64;
                for b in 0..e {
                    let v = alpha.pow((2 * b as u64 + 1) * j).value() as u64;
                    col |= v << (b * l);
                }
                col | 1 << (e * l)
            })
            .collect();
        let rank = xor_rank(&columns);
        if rank != rows {
            return Err(Error::Unsupported(format!("parity-check matrix has rank {rank}, expected {rows}")));
        }
        Ok(BchSpec { l, e, n, field, columns, rank })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Code length `2^l - 1`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn field(&self) -> GaloisField {
        self.field
    }

    /// Designed distance `2e + 2`.
    pub fn distance(&self) -> usize {
        2 * self.e as usize + 2
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    /// `H c` as a word of parity bits.
    pub fn syndrome(&self, c: u64) -> u64 {
        crate::cube::BitIter(c).fold(0, |acc, j| acc ^ self.columns[j])
    }

    /// The dual codeword `r^T H` for row-combination `r`.
    pub fn dual_word(&self, r: u64) -> u64 {
        self.columns
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &col)| acc | (((r & col).count_ones() & 1) as u64) << j)
    }

    /// A basis of the null space of `H`.
    pub fn null_space_basis(&self) -> Vec<u64> {
        // basis entries: (reduced column word, combination of original columns)
        let mut basis: Vec<(u64, u64)> = Vec::new();
        let mut null = Vec::new();
        for (j, &col) in self.columns.iter().enumerate() {
            let (mut v, mut comb) = (col, 1u64 << j);
            for &(b, bc) in &basis {
                if v ^ b < v {
                    v ^= b;
                    comb ^= bc;
                }
            }
            if v == 0 {
                null.push(comb);
            } else {
                basis.push((v, comb));
                basis.sort_unstable_by(|a, b| b.0.cmp(&a.0));
            }
        }
        null
    }

    /// Every codeword of the null space of `H`.
    pub fn codewords(&self) -> Result<Vec<u64>> {
        let basis = self.null_space_basis();
        if basis.len() > MAX_CODE_DIM {
            return Err(Error::Unsupported(format!("code dimension {} exceeds {MAX_CODE_DIM}", basis.len())));
        }
        let mut words = vec![0u64; 1 << basis.len()];
        for (i, &b) in basis.iter().enumerate() {
            let half = 1 << i;
            for w in 0..half {
                words[half + w] = words[w] ^ b;
            }
        }
        Ok(words)
    }

    /// Number of codewords of weight exactly the designed distance.
    pub fn count_min_weight_codewords(&self) -> Result<u64> {
        let d = self.distance() as u32;
        Ok(self.codewords()?.iter().filter(|w| w.count_ones() == d).count() as u64)
    }

    /// The uniform measure on the row space of `H`.
    pub fn dual_measure(&self) -> Result<ExplicitMeasure> {
        if self.n > MAX_EXPLICIT_DIM {
            return Err(Error::DimensionOutOfRange { n: self.n, max: MAX_EXPLICIT_DIM });
        }
        let mut d = vec![0.0; 1 << self.n];
        let value = 2f64.powi((self.n - self.rank) as i32);
        for r in 0..1u64 << self.rank {
            d[self.dual_word(r) as usize] = value;
        }
        ExplicitMeasure::new(self.n, d)
    }

    pub fn dual_sampler(&self) -> DualBchSampler {
        DualBchSampler { spec: self.clone() }
    }
}

/// Draws uniform random combinations of the rows of `H`.
#[derive(Clone, Debug)]
pub struct DualBchSampler {
    spec: BchSpec,
}

impl Sampler for DualBchSampler {
    fn dim(&self) -> usize {
        self.spec.n
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        self.spec.dual_word(rng.next_u64() & full_mask(self.spec.rank))
    }
}

fn xor_rank(vectors: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &v in vectors {
        let mut v = v;
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}
