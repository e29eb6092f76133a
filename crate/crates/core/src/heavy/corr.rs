//! Correlated-pair search over `±1` vectors.
//!
//! Vectors are packed with bit `1` meaning `-1`, so the inner product of two
//! length-`d` vectors is `d - 2 popcount(a XOR b)`. Both backends compute the
//! same integer inner products and therefore return identical pair sets.

use serde::Serialize;

/// A list of `±1` vectors of common length `d`, bit-packed row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignVectors {
    d: usize,
    words: usize,
    data: Vec<u64>,
}

impl SignVectors {
    pub fn new(d: usize) -> Self {
        SignVectors { d, words: d.div_ceil(64), data: Vec::new() }
    }

    /// Appends a packed vector; bits past `d` must be clear.
    pub fn push_packed(&mut self, v: &[u64]) {
        assert_eq!(v.len(), self.words, "packed length");
        self.data.extend_from_slice(v);
    }

    pub fn push_signs(&mut self, signs: &[i8]) {
        assert_eq!(signs.len(), self.d, "vector length");
        let mut row = vec![0u64; self.words];
        for (i, &s) in signs.iter().enumerate() {
            if s < 0 {
                row[i / 64] |= 1 << (i % 64);
            }
        }
        self.data.extend_from_slice(&row);
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.words).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn sign(&self, i: usize, j: usize) -> i8 {
        if self.row(i)[j / 64] >> (j % 64) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// `<row_i, other_j>` as an integer.
    pub fn inner(&self, i: usize, other: &SignVectors, j: usize) -> i64 {
        let diff: u32 = self.row(i).iter().zip(other.row(j)).map(|(a, b)| (a ^ b).count_ones()).sum();
        self.d as i64 - 2 * diff as i64
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrBackend {
    /// XOR and popcount over every pair.
    #[default]
    Pairwise,
    /// Blocked `±1` matrix product: tiles of rows and packed words, each
    /// tile accumulated by XOR and popcount.
    Blocked,
}

/// A pair `(i, j)` with its integer inner product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CorrPair {
    pub left: usize,
    pub right: usize,
    pub inner: i64,
}

/// Every pair whose absolute correlation `|<a_i, b_j>| / d` is at least
/// `threshold`, ordered by `(left, right)`.
///
/// Negative correlations are reported too, so coefficients of either sign
/// are found by a single search.
pub fn find_corr(a: &SignVectors, b: &SignVectors, threshold: f64, backend: CorrBackend) -> Vec<CorrPair> {
    assert_eq!(a.d, b.d, "vector lengths differ");
    let min_inner = (threshold * a.d as f64 - 1e-9).ceil().max(0.0) as i64;
    match backend {
        CorrBackend::Pairwise => pairwise(a, b, min_inner),
        CorrBackend::Blocked => blocked(a, b, min_inner),
    }
}

fn pairwise(a: &SignVectors, b: &SignVectors, min_inner: i64) -> Vec<CorrPair> {
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            let inner = a.inner(i, b, j);
            if inner.abs() >= min_inner {
                out.push(CorrPair { left: i, right: j, inner });
            }
        }
    }
    out
}

const ROW_BLOCK: usize = 16;
const WORD_BLOCK: usize = 512;

/// Tiles rows of both sides and word ranges so each tile stays in cache.
fn blocked(a: &SignVectors, b: &SignVectors, min_inner: i64) -> Vec<CorrPair> {
    let (na, nb, words) = (a.len(), b.len(), a.words);
    let mut diff = vec![0u32; na * nb];
    for w0 in (0..words).step_by(WORD_BLOCK) {
        let w1 = (w0 + WORD_BLOCK).min(words);
        for i0 in (0..na).step_by(ROW_BLOCK) {
            for j0 in (0..nb).step_by(ROW_BLOCK) {
                for i in i0..(i0 + ROW_BLOCK).min(na) {
                    let arow = &a.row(i)[w0..w1];
                    for j in j0..(j0 + ROW_BLOCK).min(nb) {
                        let brow = &b.row(j)[w0..w1];
                        diff[i * nb + j] += arow.iter().zip(brow).map(|(x, y)| (x ^ y).count_ones()).sum::<u32>();
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            let inner = a.d as i64 - 2 * diff[i * nb + j] as i64;
            if inner.abs() >= min_inner {
                out.push(CorrPair { left: i, right: j, inner });
            }
        }
    }
    out
}
