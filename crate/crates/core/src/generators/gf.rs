//! Arithmetic in `GF(2^l)` for `2 <= l <= 16`.

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Primitive polynomials (with the `x^l` term), indexed by `l`.
const PRIMITIVE: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

/// `GF(2)[x] / (p(x))` for the tabled primitive `p` of degree `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaloisField {
    l: u32,
    poly: u32,
}

impl GaloisField {
    pub fn new(l: u32) -> Result<Self> {
        if !(2..=16).contains(&l) {
            return Err(Error::Unsupported(format!("field degree {l} outside 2..=16")));
        }
        Ok(GaloisField { l, poly: PRIMITIVE[l as usize] })
    }

    pub fn degree(&self) -> u32 {
        self.l
    }

    /// The defining polynomial, bit `i` being the coefficient of `x^i`.
    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    pub fn order(&self) -> u32 {
        1 << self.l
    }

    pub fn elem(&self, value: u32) -> GfElement {
        assert!(value < self.order(), "value {value} outside GF(2^{})", self.l);
        GfElement { field: *self, value }
    }

    pub fn one(&self) -> GfElement {
        self.elem(1)
    }

    /// The generator `alpha = x`.
    pub fn alpha(&self) -> GfElement {
        self.elem(2)
    }

    fn mul_raw(&self, mut a: u32, mut b: u32) -> u32 {
        let top = 1u32 << self.l;
        let mut acc = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.poly;
            }
        }
        acc
    }
}

/// An element of a [`GaloisField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GfElement {
    field: GaloisField,
    value: u32,
}

impl GfElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> GaloisField {
        self.field
    }

    pub fn pow(self, mut e: u64) -> GfElement {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(self) -> Option<GfElement> {
        (self.value != 0).then(|| self.pow(self.field.order() as u64 - 2))
    }

    /// Smallest `r >= 1` with `self^r = 1`, `None` for zero.
    pub fn multiplicative_order(self) -> Option<u64> {
        if self.value == 0 {
            return None;
        }
        let mut x = self;
        let mut r = 1;
        while x.value != 1 {
            x = x * self;
            r += 1;
        }
        Some(r)
    }
}

impl Add for GfElement {
    type Output = GfElement;

    fn add(self, rhs: GfElement) -> GfElement {
        debug_assert_eq!(self.field, rhs.field);
        GfElement { field: self.field, value: self.value ^ rhs.value }
    }
}

impl Mul for GfElement {
    type Output = GfElement;

    fn mul(self, rhs: GfElement) -> GfElement {
        debug_assert_eq!(self.field, rhs.field);
        GfElement { field: self.field, value: self.field.mul_raw(self.value, rhs.value) }
    }
}

impl fmt::Display for GfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.value)
    }
}
