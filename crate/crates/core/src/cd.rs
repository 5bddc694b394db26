//! The integers `(c, d)` with `4q = c² + 27d²`, `c ≡ 1 (mod 3)`.
//!
//! `c` depends only on the field. The sign of `d` depends on the cube class of a
//! non-cubic element `z` through `9d ≡ c(2z^{(q-1)/3} + 1) (mod p)`.

use std::fmt;

use crate::arith::{gcd, isqrt, perfect_sqrt};
use crate::error::{Error, Result};
use crate::field::{CubeClassTag, FieldConfig, FieldElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CdBranch {
    /// p ≡ 1 (mod 3) and `z` non-cubic: the sign of `d` is fixed.
    P1Mod3NonCubic,
    /// p ≡ 1 (mod 3) and `z` cubic (or no `z` given): only `c` is determined.
    P1Mod3CubicOrZero,
    /// p ≡ 2 (mod 3), k even: `c = ∓2p^{k/2}`, `d = 0`.
    P2Mod3EvenK,
}

impl fmt::Display for CdBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CdBranch::P1Mod3NonCubic => "P1MOD3_NONCUBIC",
            CdBranch::P1Mod3CubicOrZero => "P1MOD3_CUBIC_OR_ZERO",
            CdBranch::P2Mod3EvenK => "P2MOD3_EVEN_K",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CdPair {
    pub c: i64,
    /// Signed `d`, present only when the sign is determined.
    pub d: Option<i64>,
    /// `|d|`, always known.
    pub d_abs: u64,
    pub branch: CdBranch,
}

impl CdPair {
    /// `d` for the formulas. The cubic branches never read it, so an absent sign
    /// reports as an error rather than a silent zero.
    pub fn signed_d(&self) -> Result<i64> {
        self.d
            .ok_or_else(|| Error::Internal("sign of d requested for a cubic class".into()))
    }
}

/// Finds `c`. For p ≡ 1 (mod 3) the representation is searched directly; for
/// p ≡ 2 (mod 3) with even `k` the closed form is returned.
pub fn solve_c(ctx: &FieldConfig) -> Result<CdPair> {
    let (p, k, q) = (ctx.p(), ctx.k(), ctx.q());
    if q % 3 != 1 {
        return Err(Error::UnsupportedField { q, reason: "q ≢ 1 (mod 3): no (c, d) pair" });
    }
    if p % 3 == 2 {
        // q ≡ 1 (mod 3) with p ≡ 2 forces k even.
        let half = p.pow((k / 2) as u32) as i64;
        let c = if k % 4 == 0 { -2 * half } else { 2 * half };
        if c.rem_euclid(3) != 1 {
            return Err(Error::Internal(format!("closed-form c = {c} is not 1 mod 3")));
        }
        return Ok(CdPair { c, d: Some(0), d_abs: 0, branch: CdBranch::P2Mod3EvenK });
    }

    let four_q = 4 * q as u128;
    let mut found: Option<(u128, u128)> = None;
    for d in 0..=isqrt(four_q / 27) {
        let Some(c) = perfect_sqrt(four_q - 27 * d * d) else {
            continue;
        };
        if gcd((c % p as u128) as u64, p) != 1 {
            continue;
        }
        match found {
            None => found = Some((c, d)),
            Some((c0, _)) if c0 == c => {}
            Some((c0, _)) => {
                return Err(Error::Internal(format!(
                    "4q = {four_q} has two admissible |c|: {c0} and {c}"
                )))
            }
        }
    }
    let (c_abs, d_abs) =
        found.ok_or_else(|| Error::Internal(format!("no admissible (c, d) for q = {q}")))?;
    let c_abs = c_abs as i64;
    let c = if c_abs % 3 == 1 { c_abs } else { -c_abs };
    Ok(CdPair { c, d: None, d_abs: d_abs as u64, branch: CdBranch::P1Mod3CubicOrZero })
}

/// `(c, d)` relative to a nonzero `z`.
pub fn solve_cd(ctx: &FieldConfig, z: &FieldElement) -> Result<CdPair> {
    if z.is_zero() {
        return Err(Error::InvalidArgument("z must be nonzero".into()));
    }
    let base = solve_c(ctx)?;
    if base.branch == CdBranch::P2Mod3EvenK {
        return Ok(base);
    }
    let class = ctx.cube_class(z)?;
    if class.class_tag != CubeClassTag::NonCubic {
        return Ok(base);
    }
    let p = ctx.p() as i128;
    let value = class
        .value
        .ok_or_else(|| Error::Internal("cube-class value outside F_p with p ≡ 1 (mod 3)".into()))?
        as i128;
    let target = (base.c as i128 * (2 * value + 1)).rem_euclid(p);
    let d0 = base.d_abs as i128;
    let plus = (9 * d0).rem_euclid(p);
    let minus = (-9 * d0).rem_euclid(p);
    if plus == minus {
        return Err(Error::Internal(format!("±d = ±{d0} indistinguishable mod {p}")));
    }
    let d = if plus == target {
        d0
    } else if minus == target {
        -d0
    } else {
        return Err(Error::Internal(format!(
            "neither sign of d = ±{d0} satisfies 9d ≡ {target} (mod {p})"
        )));
    };
    Ok(CdPair { d: Some(d as i64), branch: CdBranch::P1Mod3NonCubic, ..base })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Exhaustive scan of c, d in [-2√q, 2√q] for the c ≡ 1 (mod 3), gcd(c, p) = 1 solutions.
    fn scan(q: i64, p: i64) -> Vec<(i64, i64)> {
        let r = 2 * (q as f64).sqrt() as i64 + 2;
        let mut out = Vec::new();
        for c in -r..=r {
            for d in -r..=r {
                if c * c + 27 * d * d == 4 * q && c.rem_euclid(3) == 1 && c % p != 0 {
                    out.push((c, d));
                }
            }
        }
        out
    }

    #[test]
    fn c_examples() {
        let f49 = FieldConfig::with_modulus(7, 2, vec![1, 0, 1]).unwrap();
        assert_eq!(solve_c(&f49).unwrap().c, 13);
        let f7 = FieldConfig::new(7, 1).unwrap();
        assert_eq!(scan(7, 7), vec![(1, -1), (1, 1)]);
        assert_eq!(solve_c(&f7).unwrap().c, 1);
        let f25 = FieldConfig::new(5, 2).unwrap();
        let cd = solve_c(&f25).unwrap();
        assert_eq!((cd.c, cd.d, cd.branch), (10, Some(0), CdBranch::P2Mod3EvenK));
        let f5 = FieldConfig::new(5, 1).unwrap();
        assert!(matches!(solve_c(&f5), Err(Error::UnsupportedField { .. })));
    }

    #[test]
    fn cd_examples() {
        let f49 = FieldConfig::with_modulus(7, 2, vec![1, 0, 1]).unwrap();
        let z = f49.parse_element("1,1").unwrap();
        let cd = solve_cd(&f49, &z).unwrap();
        assert_eq!((cd.c, cd.d), (13, Some(-1)));

        let f7 = FieldConfig::new(7, 1).unwrap();
        assert_eq!(solve_cd(&f7, &f7.from_prime(2)).unwrap().d, Some(1));
        assert_eq!(solve_cd(&f7, &f7.from_prime(4)).unwrap().d, Some(-1));
        assert_eq!(solve_cd(&f7, &f7.from_prime(3)).unwrap().d, Some(-1));
        let cubic = solve_cd(&f7, &f7.one()).unwrap();
        assert_eq!((cubic.d, cubic.branch), (None, CdBranch::P1Mod3CubicOrZero));
        assert!(cubic.signed_d().is_err());
        assert!(matches!(solve_cd(&f7, &f7.zero()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn c_matches_exhaustive_scan() {
        for (p, k) in [(7, 1), (13, 1), (7, 2), (19, 1), (7, 3), (13, 2), (31, 1), (97, 1)] {
            let ctx = FieldConfig::new(p, k).unwrap();
            let q = ctx.q() as i64;
            let scanned = scan(q, p as i64);
            let cd = solve_c(&ctx).unwrap();
            assert!(!scanned.is_empty());
            assert!(scanned.iter().all(|&(c, d)| c == cd.c && d.unsigned_abs() == cd.d_abs));
        }
    }

    #[test]
    fn unique_c_for_all_prime_powers_to_a_million() {
        let mut checked = 0;
        for p in (7u64..1_000_000).filter(|&p| p % 3 == 1 && crate::arith::is_prime(p)) {
            let mut k = 1usize;
            let mut q = p;
            while q <= 1_000_000 {
                let ctx = FieldConfig::new(p, k).unwrap();
                let cd = solve_c(&ctx).unwrap();
                let rem = 4 * q as i128 - (cd.c as i128).pow(2);
                assert_eq!(rem, 27 * (cd.d_abs as i128).pow(2));
                assert_eq!(cd.c.rem_euclid(3), 1);
                checked += 1;
                k += 1;
                q *= p;
            }
        }
        assert!(checked > 39_000);
    }

    #[test]
    fn closed_form_c_for_p2mod3() {
        for p in [2u64, 5, 11] {
            for k in [2usize, 4, 6] {
                if p.checked_pow(k as u32).is_none_or(|q| q > 2_000_000) {
                    continue;
                }
                let ctx = FieldConfig::new(p, k).unwrap();
                let cd = solve_c(&ctx).unwrap();
                assert_eq!(cd.c.rem_euclid(3), 1);
                assert_eq!((cd.c as i128).pow(2), 4 * ctx.q() as i128);
                let expected = 2 * p.pow(k as u32 / 2) as i64;
                assert_eq!(cd.c, if k % 4 == 0 { -expected } else { expected });
            }
        }
    }

    #[test]
    fn sign_follows_cube_class() {
        for (p, k) in [(7, 1), (13, 1), (7, 2), (19, 1), (13, 2)] {
            let ctx = FieldConfig::new(p, k).unwrap();
            let z = ctx.noncubic_representative().unwrap();
            let d1 = solve_cd(&ctx, &z).unwrap().d.unwrap();
            let d2 = solve_cd(&ctx, &ctx.mul(&z, &z)).unwrap().d.unwrap();
            assert_eq!(d1, -d2);
            for w in ctx.elements().skip(1) {
                let zw3 = ctx.mul(&z, &ctx.cube(&w));
                assert_eq!(solve_cd(&ctx, &zw3).unwrap().d, Some(d1));
            }
        }
    }
}
