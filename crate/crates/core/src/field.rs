//! Prime fields and their extensions `F_p[u]/(f)`.
//!
//! Elements are coefficient vectors of length `k`, constant term first. A
//! [`FieldConfig`] is immutable once built; every operation takes it by
//! reference and allocates a fresh result.

use std::fmt;
use std::str::FromStr;

use crate::arith::{is_prime, mul_mod, pow_mod, prime_factors};
use crate::error::{Error, Result};

/// The field `F_q`, `q = p^k`, presented as `F_p[u]/(modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldConfig {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    q: u64,
}

/// An element of some `F_q`. Only meaningful together with the config that made it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Which of the three cosets of the cubes (or zero) an element lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CubeClassTag {
    Zero,
    Cubic,
    NonCubic,
}

impl fmt::Display for CubeClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CubeClassTag::Zero => "ZERO",
            CubeClassTag::Cubic => "CUBIC",
            CubeClassTag::NonCubic => "NONCUBIC",
        })
    }
}

/// The symbol `z^{(q-1)/3}` of an element `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeClassValue {
    /// `z^{(q-1)/3}` as an integer in `[0, p)`. `None` only when p ≡ 2 (mod 3) and
    /// `z` is non-cubic: the power is then a cube root of unity outside `F_p`.
    pub value: Option<u64>,
    /// `z^{(q-1)/3}` as a field element.
    pub power: FieldElement,
    pub class_tag: CubeClassTag,
}

impl CubeClassValue {
    pub fn is_cubic(&self) -> bool {
        self.class_tag == CubeClassTag::Cubic
    }
}

// Dense polynomials over F_p, constant term first, no trailing zeros.
mod poly {
    use super::{mul_mod, pow_mod};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let df = f.len() - 1;
        let lead_inv = pow_mod(f[df], p - 2, p);
        while r.len() > df {
            let top = r.len() - 1;
            let t = mul_mod(r[top], lead_inv, p);
            let shift = top - df;
            for (j, &fj) in f.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - mul_mod(t, fj, p)) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod_poly(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        rem(&prod, f, p)
    }

    pub fn pow_mod_poly(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], f, p);
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod_poly(&acc, &b, f, p);
            }
            b = mul_mod_poly(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

/// Rabin's test: `f` monic of degree `k` is irreducible over `F_p` iff
/// `x^{p^k} ≡ x (mod f)` and `gcd(x^{p^{k/r}} - x, f) = 1` for each prime `r | k`.
pub fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let f = poly::trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    // frob[j] = x^{p^j} mod f
    let mut frob = Vec::with_capacity(k + 1);
    frob.push(poly::rem(&x, &f, p));
    for j in 1..=k {
        let next = poly::pow_mod_poly(&frob[j - 1], p, &f, p);
        frob.push(next);
    }
    if frob[k] != poly::rem(&x, &f, p) {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|r| {
        let h = poly::sub(&frob[k / r as usize], &x, p);
        let g = poly::gcd(&h, &f, p);
        g.len() == 1
    })
}

/// Lexicographically smallest monic irreducible of degree `k` over `F_p`, comparing
/// coefficient lists constant term first. For `k = 1` this is `x`.
pub fn find_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    if k == 1 {
        return Ok(vec![0, 1]);
    }
    // Odometer over (c0, .., c_{k-1}) with c0 most significant. Every c0 = 0 candidate is
    // divisible by x, so the search starts at c0 = 1.
    let mut digits = vec![0u64; k];
    digits[0] = 1;
    loop {
        let mut f = digits.clone();
        f.push(1);
        if is_irreducible(p, &f) {
            return Ok(f);
        }
        let mut i = k - 1;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            if i == 0 {
                return Err(Error::Internal(format!(
                    "no irreducible polynomial of degree {k} over F_{p}"
                )));
            }
            i -= 1;
        }
    }
}

impl FieldConfig {
    /// `F_{p^k}` with the default (lexicographically smallest) modulus.
    pub fn new(p: u64, k: usize) -> Result<Self> {
        let modulus = find_irreducible(p, k)?;
        Self::with_modulus(p, k, modulus)
    }

    /// `F_{p^k}` with an explicit monic irreducible modulus (`k + 1` coefficients,
    /// constant term first).
    pub fn with_modulus(p: u64, k: usize, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        let q = u32::try_from(k)
            .ok()
            .and_then(|k32| p.checked_pow(k32))
            .ok_or_else(|| Error::InvalidArgument(format!("{p}^{k} does not fit in 64 bits")))?;
        if modulus.len() != k + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients for degree {k}, got {}",
                k + 1,
                modulus.len()
            )));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidModulus(format!("coefficient {c} is not reduced mod {p}")));
        }
        if modulus[k] != 1 {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::InvalidModulus(format!(
                "{} is reducible over F_{p}",
                format_coeffs(&modulus)
            )));
        }
        Ok(Self { p, k, modulus, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_prime(1)
    }

    /// Canonical embedding of `F_p`; `a` is reduced mod p.
    pub fn from_prime(&self, a: u64) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = a % self.p;
        FieldElement { coeffs }
    }

    /// Builds an element from at most `k` coefficients (missing high ones are zero).
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.k {
            return Err(Error::InvalidArgument(format!(
                "element has {} coefficients, field degree is {}",
                coeffs.len(),
                self.k
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "coefficient {c} is not reduced mod {}",
                self.p
            )));
        }
        let mut v = coeffs.to_vec();
        v.resize(self.k, 0);
        Ok(FieldElement { coeffs: v })
    }

    /// Parses the comma-separated text form, constant term first (`"1,1"` is `1 + u`).
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        self.element(&parse_coeffs(text)?)
    }

    /// Elements are numbered `sum coeffs[i] * p^i`, so `0..q` covers the field.
    pub fn index_of(&self, a: &FieldElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_index(&self, mut idx: u64) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        for c in coeffs.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        FieldElement { coeffs }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.from_index(i))
    }

    fn check(&self, a: &FieldElement) {
        assert_eq!(a.coeffs.len(), self.k, "element does not belong to F_{}", self.q);
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let p = self.p;
        FieldElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % p).collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.check(a);
        let p = self.p;
        FieldElement { coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect() }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let p = self.p;
        let k = self.k;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        // modulus is monic: u^k = -(m_0 + .. + m_{k-1} u^{k-1})
        for top in (k..prod.len()).rev() {
            let t = prod[top];
            if t == 0 {
                continue;
            }
            prod[top] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = (prod[idx] + p - mul_mod(t, m, p)) % p;
            }
        }
        prod.truncate(k);
        FieldElement { coeffs: prod }
    }

    /// Multiplies by an element of the prime field.
    pub fn scale(&self, a: &FieldElement, s: u64) -> FieldElement {
        self.check(a);
        let p = self.p;
        FieldElement { coeffs: a.coeffs.iter().map(|&x| mul_mod(x, s % p, p)).collect() }
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn cube(&self, a: &FieldElement) -> FieldElement {
        self.mul(&self.mul(a, a), a)
    }

    /// The integer value of `a` if it lies in the prime subfield.
    pub fn prime_value(&self, a: &FieldElement) -> Option<u64> {
        a.coeffs[1..].iter().all(|&c| c == 0).then_some(a.coeffs[0])
    }

    fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p)
    }

    /// Absolute trace `a + a^p + .. + a^{p^{k-1}}`.
    pub fn trace(&self, a: &FieldElement) -> Result<u64> {
        let mut conj = a.clone();
        let mut sum = a.clone();
        for _ in 1..self.k {
            conj = self.frobenius(&conj);
            sum = self.add(&sum, &conj);
        }
        self.prime_value(&sum)
            .ok_or_else(|| Error::Internal(format!("trace of {a} left the prime subfield")))
    }

    /// Norm `a^{(q-1)/(p-1)}`, and 0 for `a = 0`.
    pub fn norm(&self, a: &FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Ok(0);
        }
        let n = self.pow(a, (self.q - 1) / (self.p - 1));
        self.prime_value(&n)
            .ok_or_else(|| Error::Internal(format!("norm of {a} left the prime subfield")))
    }

    pub fn q_mod_3(&self) -> u64 {
        self.q % 3
    }

    fn require_q1(&self) -> Result<()> {
        if self.q % 3 == 1 {
            Ok(())
        } else {
            Err(Error::UnsupportedField {
                q: self.q,
                reason: "q ≢ 1 (mod 3): every element is a cube",
            })
        }
    }

    /// Computes `z^{(q-1)/3}` and classifies `z`. Needs q ≡ 1 (mod 3).
    pub fn cube_class(&self, z: &FieldElement) -> Result<CubeClassValue> {
        self.require_q1()?;
        let power = self.pow(z, (self.q - 1) / 3);
        let value = self.prime_value(&power);
        let class_tag = if z.is_zero() {
            CubeClassTag::Zero
        } else if value == Some(1) {
            CubeClassTag::Cubic
        } else {
            CubeClassTag::NonCubic
        };
        if let Some(v) = value {
            if class_tag != CubeClassTag::Zero && pow_mod(v, 3, self.p) != 1 {
                return Err(Error::Internal(format!("{z}^((q-1)/3) = {v} is not a cube root of unity")));
            }
        }
        Ok(CubeClassValue { value, power, class_tag })
    }

    pub fn is_cubic(&self, z: &FieldElement) -> Result<bool> {
        Ok(self.cube_class(z)?.is_cubic())
    }

    /// The non-cubic element of smallest index, if q ≡ 1 (mod 3).
    pub fn noncubic_representative(&self) -> Result<FieldElement> {
        self.require_q1()?;
        for z in self.elements().skip(1) {
            if self.cube_class(&z)?.class_tag == CubeClassTag::NonCubic {
                return Ok(z);
            }
        }
        Err(Error::Internal(format!("F_{} has no non-cubic element", self.q)))
    }
}

pub fn format_coeffs(coeffs: &[u64]) -> String {
    coeffs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Parses `"c0,c1,..."` into integers.
pub fn parse_coeffs(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            u64::from_str(s)
                .map_err(|_| Error::InvalidArgument(format!("bad coefficient {s:?} in {text:?}")))
        })
        .collect()
}
