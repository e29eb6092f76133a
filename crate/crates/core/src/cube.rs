//! Points, coordinate sets and subcubes of the hypercube `{±1}^n`.
//!
//! A point is packed into an `n`-bit word. Bit `i` set means `x_i = -1`,
//! bit `i` clear means `x_i = +1`, so `x_i = (-1)^{bit_i}` and a character
//! `chi_S(x)` is the parity of `popcount(S & x)`. The same encoding is used
//! by every generator and file format in the crate. Coordinates are 0-based.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest dimension representable in a packed word.
pub const MAX_DIM: usize = 63;

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `(-1)^{popcount(word)}` as `+1` / `-1`.
#[inline]
pub fn parity_sign(word: u64) -> i8 {
    1 - 2 * (word.count_ones() & 1) as i8
}

#[inline]
pub(crate) fn parity_f64(word: u64) -> f64 {
    if word.count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, max: MAX_DIM });
    }
    Ok(())
}

fn check_bits(n: usize, bits: u64) -> Result<()> {
    if bits & !full_mask(n) != 0 {
        return Err(Error::BitsOutOfRange { bits, n });
    }
    Ok(())
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// One vertex of `{±1}^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    n: usize,
    bits: u64,
}

impl Point {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_dim(n)?;
        check_bits(n, bits)?;
        Ok(Point { n, bits })
    }

    /// Builds a point from explicit `±1` values.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        check_dim(signs.len())?;
        let mut bits = 0u64;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => bits |= 1 << i,
                _ => return Err(Error::InvalidParameter(format!("coordinate {i} is {s}, not ±1"))),
            }
        }
        Ok(Point { n: signs.len(), bits })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Value of coordinate `i` as `±1`.
    pub fn coord(&self, i: usize) -> i8 {
        if self.bits >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }
}

/// A subset of the coordinates `{0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordSet {
    n: usize,
    mask: u64,
}

impl CoordSet {
    pub fn new(n: usize, mask: u64) -> Result<Self> {
        check_dim(n)?;
        check_bits(n, mask)?;
        Ok(CoordSet { n, mask })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn full(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(CoordSet { n, mask: full_mask(n) })
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        check_dim(n)?;
        let mut mask = 0u64;
        for &i in indices {
            if i >= n {
                return Err(Error::InvalidParameter(format!("coordinate {i} out of range for n={n}")));
            }
            mask |= 1 << i;
        }
        Ok(CoordSet { n, mask })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.mask >> i & 1 == 1
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.mask)
    }

    pub fn is_subset(&self, other: &CoordSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn is_disjoint(&self, other: &CoordSet) -> bool {
        self.mask & other.mask == 0
    }

    pub fn union(&self, other: &CoordSet) -> Result<CoordSet> {
        same_dim(self.n, other.n)?;
        Ok(CoordSet { n: self.n, mask: self.mask | other.mask })
    }

    pub fn difference(&self, other: &CoordSet) -> Result<CoordSet> {
        same_dim(self.n, other.n)?;
        Ok(CoordSet { n: self.n, mask: self.mask & !other.mask })
    }

    pub fn symmetric_difference(&self, other: &CoordSet) -> Result<CoordSet> {
        same_dim(self.n, other.n)?;
        Ok(CoordSet { n: self.n, mask: self.mask ^ other.mask })
    }

    pub fn complement(&self) -> CoordSet {
        CoordSet { n: self.n, mask: !self.mask & full_mask(self.n) }
    }

    /// The character `chi_S(x) = prod_{i in S} x_i`.
    pub fn chi(&self, x: Point) -> Result<i8> {
        same_dim(self.n, x.n)?;
        Ok(parity_sign(self.mask & x.bits))
    }
}

impl fmt::Display for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (j, i) in self.indices().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// `chi_S(x)`; see [`CoordSet::chi`].
pub fn chi(s: &CoordSet, x: Point) -> Result<i8> {
    s.chi(x)
}

/// A subcube `(K, y)`: the points agreeing with `y` on the fixed set `K`.
///
/// Ordering is by fixed mask, then assignment, which is also the
/// canonical order of every list of subcubes the crate reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcube {
    fixed: u64,
    assignment: u64,
    n: usize,
}

impl Subcube {
    pub fn new(n: usize, fixed: u64, assignment: u64) -> Result<Self> {
        check_dim(n)?;
        check_bits(n, fixed)?;
        if assignment & !fixed != 0 {
            return Err(Error::InvalidParameter(format!(
                "assignment {assignment:#x} sets free coordinates of {fixed:#x}"
            )));
        }
        Ok(Subcube { n, fixed, assignment })
    }

    pub(crate) fn from_raw(n: usize, fixed: u64, assignment: u64) -> Self {
        debug_assert!(assignment & !fixed == 0);
        Subcube { n, fixed, assignment }
    }

    /// The whole cube `(∅, ∅)`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, 0, 0)
    }

    /// Fixes `set` to the values `point` takes there.
    pub fn fixing(set: &CoordSet, point: Point) -> Result<Self> {
        same_dim(set.n, point.n)?;
        Ok(Subcube { n: set.n, fixed: set.mask, assignment: point.bits & set.mask })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn fixed(&self) -> CoordSet {
        CoordSet { n: self.n, mask: self.fixed }
    }

    pub fn fixed_mask(&self) -> u64 {
        self.fixed
    }

    pub fn assignment(&self) -> u64 {
        self.assignment
    }

    pub fn free_mask(&self) -> u64 {
        !self.fixed & full_mask(self.n)
    }

    pub fn codim(&self) -> usize {
        self.fixed.count_ones() as usize
    }

    pub fn contains(&self, x: Point) -> Result<bool> {
        same_dim(self.n, x.n)?;
        Ok(self.contains_bits(x.bits))
    }

    #[inline]
    pub fn contains_bits(&self, bits: u64) -> bool {
        (bits ^ self.assignment) & self.fixed == 0
    }

    /// `true` iff `self` is a proper parent of `child`, i.e. `child ⊊ self`.
    pub fn is_proper_parent_of(&self, child: &Subcube) -> bool {
        self.n == child.n
            && self.fixed & !child.fixed == 0
            && self.fixed != child.fixed
            && (self.assignment ^ child.assignment) & self.fixed == 0
    }

    /// All proper parents, fixed mask ascending; the full cube comes first.
    pub fn parents(&self) -> Vec<Subcube> {
        submasks(self.fixed)
            .filter(|&m| m != self.fixed)
            .map(|m| Subcube { n: self.n, fixed: m, assignment: self.assignment & m })
            .collect()
    }

    /// Partition into the `2^{|L|}` children fixing every coordinate of `extra`.
    pub fn partition_children(&self, extra: &CoordSet) -> Result<Vec<Subcube>> {
        same_dim(self.n, extra.n)?;
        if extra.mask & self.fixed != 0 {
            return Err(Error::Overlap { set: extra.mask, fixed: self.fixed });
        }
        Ok(submasks(extra.mask)
            .map(|w| Subcube { n: self.n, fixed: self.fixed | extra.mask, assignment: self.assignment | w })
            .collect())
    }

    /// Extends by fixing `set` (disjoint from the fixed set) to the bits of `values`.
    pub(crate) fn extend_raw(&self, set: u64, values: u64) -> Subcube {
        debug_assert!(set & self.fixed == 0);
        Subcube { n: self.n, fixed: self.fixed | set, assignment: self.assignment | (values & set) }
    }

    /// Iterates the points of the subcube as packed words.
    pub fn points(&self) -> impl Iterator<Item = u64> + '_ {
        let a = self.assignment;
        submasks(self.free_mask()).map(move |f| f | a)
    }
}

impl fmt::Display for Subcube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n)
            .map(|i| {
                if self.fixed >> i & 1 == 0 {
                    '*'
                } else if self.assignment >> i & 1 == 1 {
                    '-'
                } else {
                    '+'
                }
            })
            .collect();
        f.write_str(&s)
    }
}

impl FromStr for Subcube {
    type Err = Error;

    /// Parses the text form: position `i` is `+`, `-` or `*`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = s.chars().count();
        check_dim(n)?;
        let (mut fixed, mut assignment) = (0u64, 0u64);
        for (i, c) in s.chars().enumerate() {
            match c {
                '+' => fixed |= 1 << i,
                '-' => {
                    fixed |= 1 << i;
                    assignment |= 1 << i;
                }
                '*' => {}
                _ => return Err(Error::Parse { line: 0, msg: format!("bad subcube character {c:?}") }),
            }
        }
        Ok(Subcube { n, fixed, assignment })
    }
}

/// Iterator over set bit positions.
#[derive(Clone)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// All submasks of `mask` in ascending numeric order, including 0 and `mask`.
pub fn submasks(mask: u64) -> Submasks {
    Submasks { mask, next: Some(0) }
}

#[derive(Clone)]
pub struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == self.mask { None } else { Some(((cur | !self.mask).wrapping_add(1)) & self.mask) };
        Some(cur)
    }
}

/// Submasks of `mask` with at most `max_len` bits, grouped by size then ascending.
pub fn submasks_up_to(mask: u64, max_len: usize) -> Vec<u64> {
    let coords: Vec<usize> = BitIter(mask).collect();
    let mut out = vec![0u64];
    let mut frontier: Vec<(u64, usize)> = vec![(0, 0)];
    for _ in 0..max_len.min(coords.len()) {
        let mut next = Vec::new();
        for &(m, start) in &frontier {
            for (j, &c) in coords.iter().enumerate().skip(start) {
                next.push((m | 1 << c, j + 1));
            }
        }
        let mut level: Vec<u64> = next.iter().map(|&(m, _)| m).collect();
        level.sort_unstable();
        out.extend_from_slice(&level);
        frontier = next;
    }
    out
}

/// Gathers the bits of `word` at the positions of `mask` into the low bits.
#[inline]
pub fn compress(word: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut j = 0;
    while m != 0 {
        let i = m.trailing_zeros();
        out |= (word >> i & 1) << j;
        j += 1;
        m &= m - 1;
    }
    out
}

/// Inverse of [`compress`]: scatters the low bits of `word` onto `mask`.
#[inline]
pub fn expand(word: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut j = 0;
    while m != 0 {
        let i = m.trailing_zeros();
        out |= (word >> j & 1) << i;
        j += 1;
        m &= m - 1;
    }
    out
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Number of subcubes of codimension at most `k`: `sum_j C(n,j) 2^j`.
pub fn count_subcubes(n: usize, k: usize) -> u64 {
    (0..=k.min(n)).map(|j| binomial(n, j) << j).sum()
}

/// Smallest mask `>= from` and `<= limit` with at most `k` bits set.
fn next_mask_with_at_most(mut from: u64, k: usize, limit: u64) -> Option<u64> {
    while from.count_ones() as usize > k {
        from = from.checked_add(from & from.wrapping_neg())?;
    }
    (from <= limit).then_some(from)
}

/// Every subcube of codimension at most `k`, fixed mask ascending then
/// assignment ascending.
pub fn enumerate_subcubes(n: usize, k: usize) -> Result<SubcubeIter> {
    check_dim(n)?;
    if k > n {
        return Err(Error::InvalidParameter(format!("codimension {k} exceeds dimension {n}")));
    }
    Ok(SubcubeIter { n, k, mask: Some(0), assignments: submasks(0) })
}

pub struct SubcubeIter {
    n: usize,
    k: usize,
    mask: Option<u64>,
    assignments: Submasks,
}

impl SubcubeIter {
    /// Fixed masks of codimension at most `k`, ascending.
    fn advance_mask(&mut self) {
        let Some(m) = self.mask else { return };
        let limit = full_mask(self.n);
        if m == limit {
            self.mask = None;
            return;
        }
        self.mask = next_mask_with_at_most(m + 1, self.k, limit);
        if let Some(next) = self.mask {
            self.assignments = submasks(next);
        }
    }
}

impl Iterator for SubcubeIter {
    type Item = Subcube;

    fn next(&mut self) -> Option<Subcube> {
        loop {
            let mask = self.mask?;
            if let Some(a) = self.assignments.next() {
                return Some(Subcube { n: self.n, fixed: mask, assignment: a });
            }
            self.advance_mask();
        }
    }
}

/// Fixed masks with at most `k` bits inside the first `n` coordinates, ascending.
pub fn masks_up_to(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = full_mask(n);
    let mut cur = Some(0u64);
    std::iter::from_fn(move || {
        let m = cur?;
        cur = if m == limit { None } else { next_mask_with_at_most(m + 1, k, limit) };
        Some(m)
    })
}
