//! Exact arithmetic in `Z[ω]`, `ω = (-1 + √-3)/2`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// `a + bω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EisensteinInteger {
    pub a: i64,
    pub b: i64,
}

impl EisensteinInteger {
    pub const ZERO: Self = Self { a: 0, b: 0 };
    pub const ONE: Self = Self { a: 1, b: 0 };
    pub const OMEGA: Self = Self { a: 0, b: 1 };
    /// `ω² = -1 - ω`
    pub const OMEGA2: Self = Self { a: -1, b: -1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    /// `ω^e`
    pub fn omega_pow(e: u32) -> Self {
        match e % 3 {
            0 => Self::ONE,
            1 => Self::OMEGA,
            _ => Self::OMEGA2,
        }
    }

    /// `a² - ab + b²`, the product with the complex conjugate.
    pub fn norm(&self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        a * a - a * b + b * b
    }

    /// Complex conjugate: `ω ↦ ω² = -1 - ω`.
    pub fn conj(&self) -> Self {
        Self { a: self.a - self.b, b: -self.b }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// The element `(c + 3√3·d·i)/2 = (c + 3d)/2 + 3d·ω`. `None` when `c + 3d` is odd.
    pub fn from_cd(c: i64, d: i64) -> Option<Self> {
        let s = c + 3 * d;
        (s % 2 == 0).then_some(Self { a: s / 2, b: 3 * d })
    }

    pub fn to_complex(&self) -> Complex64 {
        let h = 3f64.sqrt() / 2.0;
        Complex64::new(self.a as f64 - 0.5 * self.b as f64, h * self.b as f64)
    }
}

impl Add for EisensteinInteger {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for EisensteinInteger {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for EisensteinInteger {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b }
    }
}

impl Mul for EisensteinInteger {
    type Output = Self;
    // (a + bω)(c + dω) = ac + (ad + bc)ω + bd·ω², ω² = -1 - ω
    fn mul(self, o: Self) -> Self {
        Self {
            a: self.a * o.a - self.b * o.b,
            b: self.a * o.b + self.b * o.a - self.b * o.b,
        }
    }
}

impl Sum for EisensteinInteger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for EisensteinInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}ω"),
            (a, b) if b < 0 => write!(f, "{a} - {}ω", -b),
            (a, b) => write!(f, "{a} + {b}ω"),
        }
    }
}
