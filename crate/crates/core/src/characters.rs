//! Cubic characters, Gauss sums and the Jacobi sum `J(χ, χ)`.
//!
//! Jacobi sums are accumulated exactly in `Z[ω]`. Gauss sums are floating point and
//! only serve as corroboration of the exact results; each numeric routine checks the
//! magnitude it is expected to have and reports an internal error otherwise.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::arith::{mul_mod, pow_mod};
use crate::cd::{solve_c, solve_cd};
use crate::eisenstein::EisensteinInteger;
use crate::error::{Error, Result};
use crate::field::{CubeClassTag, FieldConfig, FieldElement};

pub type ComplexValue = Complex64;

/// Smallest primitive cube root of unity in `F_p`, p ≡ 1 (mod 3).
pub fn primitive_cube_root(p: u64) -> Result<u64> {
    if p % 3 != 1 {
        return Err(Error::InvalidArgument(format!("F_{p} has no primitive cube root of unity")));
    }
    let e = (2..p)
        .map(|a| pow_mod(a, (p - 1) / 3, p))
        .find(|&e| e != 1)
        .ok_or_else(|| Error::Internal(format!("no non-cube found in F_{p}")))?;
    Ok(e.min(mul_mod(e, e, p)))
}

fn require_p1(ctx: &FieldConfig) -> Result<()> {
    if ctx.p() % 3 == 1 {
        Ok(())
    } else {
        Err(Error::UnsupportedField { q: ctx.q(), reason: "cubic characters need p ≡ 1 (mod 3)" })
    }
}

/// One of the two characters of order 3 on `F_q^*`.
///
/// With `ε` the fixed primitive cube root of unity in `F_p`, an element whose
/// `x^{(q-1)/3}` equals `ε^j` is sent to `ω^{orientation·j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicCharacter {
    field: FieldConfig,
    epsilon: u64,
    orientation: u8,
}

impl CubicCharacter {
    pub fn new(ctx: &FieldConfig, orientation: u8) -> Result<Self> {
        require_p1(ctx)?;
        if !matches!(orientation, 1 | 2) {
            return Err(Error::InvalidArgument(format!("orientation must be 1 or 2, got {orientation}")));
        }
        Ok(Self { field: ctx.clone(), epsilon: primitive_cube_root(ctx.p())?, orientation })
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn epsilon(&self) -> u64 {
        self.epsilon
    }

    pub fn orientation(&self) -> u8 {
        self.orientation
    }

    pub fn conjugate(&self) -> Self {
        Self { orientation: 3 - self.orientation, ..self.clone() }
    }

    /// `j` with `x^{(q-1)/3} = ε^j`; `None` for zero.
    pub fn class_exponent(&self, x: &FieldElement) -> Option<u8> {
        let class = self.field.cube_class(x).expect("p ≡ 1 (mod 3) implies q ≡ 1 (mod 3)");
        if class.class_tag == CubeClassTag::Zero {
            return None;
        }
        let p = self.field.p();
        match class.value {
            Some(1) => Some(0),
            Some(v) if v == self.epsilon => Some(1),
            Some(v) if v == mul_mod(self.epsilon, self.epsilon, p) => Some(2),
            other => panic!("{x}^((q-1)/3) = {other:?} is not a power of {}", self.epsilon),
        }
    }

    /// `χ(x)`; `None` marks `x = 0`, which every character sum skips.
    pub fn eval(&self, x: &FieldElement) -> Option<EisensteinInteger> {
        self.class_exponent(x)
            .map(|j| EisensteinInteger::omega_pow(u32::from(j) * u32::from(self.orientation)))
    }

    fn eval_complex(&self, x: &FieldElement) -> Complex64 {
        self.eval(x).map_or(Complex64::new(0.0, 0.0), |v| v.to_complex())
    }
}

/// The cubic character with `χ(z) = ω`, for `z` non-cubic.
pub fn character_for(ctx: &FieldConfig, z: &FieldElement) -> Result<CubicCharacter> {
    let chi = CubicCharacter::new(ctx, 1)?;
    match chi.class_exponent(z) {
        None => Err(Error::InvalidArgument("z must be nonzero".into())),
        Some(0) => Err(Error::InvalidArgument(format!("{z} is cubic"))),
        // orientation·j ≡ 1 (mod 3) gives orientation = j for j ∈ {1, 2}
        Some(j) => CubicCharacter::new(ctx, j),
    }
}

/// Lifts a character of `F_p` to `ext = F_{p^k}` through the norm. Since
/// `N(x)^{(p-1)/3} = x^{(q-1)/3}`, the lift has the same `ε` and orientation.
pub fn lift_character(base: &CubicCharacter, ext: &FieldConfig) -> Result<CubicCharacter> {
    if base.field.k() != 1 || base.field.p() != ext.p() {
        return Err(Error::InvalidArgument(format!(
            "cannot lift a character of F_{} to F_{}",
            base.field.q(),
            ext.q()
        )));
    }
    Ok(CubicCharacter { field: ext.clone(), ..base.clone() })
}

/// Canonical additive character `ψ(x) = e^{2πi·Tr(x)/p}`.
pub fn psi(ctx: &FieldConfig, x: &FieldElement) -> Result<Complex64> {
    let t = ctx.trace(x)?;
    Ok(Complex64::from_polar(1.0, TAU * t as f64 / ctx.p() as f64))
}

/// `Σ_{x ∈ F_q} ψ(ax)`.
pub fn additive_sum(ctx: &FieldConfig, a: &FieldElement) -> Result<Complex64> {
    ctx.elements().map(|x| psi(ctx, &ctx.mul(a, &x))).sum()
}

/// `Σ_{x ∈ F_q^*} χ(x)`, exactly.
pub fn multiplicative_sum(chi: &CubicCharacter) -> EisensteinInteger {
    chi.field.elements().filter_map(|x| chi.eval(&x)).sum()
}

const IMAG_TOLERANCE: f64 = 1e-9;

/// `S(a) = Σ_{x ∈ F_q} ψ(ax³)`, which is real.
pub fn gauss_s(ctx: &FieldConfig, a: &FieldElement) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("S(a) needs a ≠ 0".into()));
    }
    let total: Complex64 = ctx
        .elements()
        .map(|x| psi(ctx, &ctx.mul(a, &ctx.cube(&x))))
        .sum::<Result<_>>()?;
    if total.im.abs() >= IMAG_TOLERANCE {
        return Err(Error::Internal(format!("S({a}) has imaginary part {}", total.im)));
    }
    Ok(total.re)
}

/// `G(χ) = Σ_{x ∈ F_q^*} χ(x)ψ(x)`.
pub fn gauss_g(ctx: &FieldConfig, chi: &CubicCharacter) -> Result<Complex64> {
    let total: Complex64 = ctx
        .elements()
        .skip(1)
        .map(|x| Ok(chi.eval_complex(&x) * psi(ctx, &x)?))
        .sum::<Result<_>>()?;
    let root_q = (ctx.q() as f64).sqrt();
    if (total.norm() - root_q).abs() >= 1e-6 * root_q {
        return Err(Error::Internal(format!("|G(χ)| = {} but √q = {root_q}", total.norm())));
    }
    Ok(total)
}

/// `J(χ, χ) = Σ_{x ∉ {0, 1}} χ(x)χ(1 - x)`, exactly.
pub fn jacobi_chichi(ctx: &FieldConfig, chi: &CubicCharacter) -> Result<EisensteinInteger> {
    require_p1(ctx)?;
    let one = ctx.one();
    Ok(ctx
        .elements()
        .filter_map(|x| Some(chi.eval(&x)? * chi.eval(&ctx.sub(&one, &x))?))
        .sum())
}

/// Largest deviation from `G(χ'∘N) = (-1)^{k-1} G(χ')^k` over both characters `χ'`
/// of `F_p`. The left side is summed directly through the norm and trace maps and
/// also compared with the Gauss sum of the lifted character.
pub fn hasse_davenport_check(ctx: &FieldConfig) -> Result<f64> {
    require_p1(ctx)?;
    let base = FieldConfig::new(ctx.p(), 1)?;
    let k = ctx.k() as i32;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let mut worst = 0f64;
    for orientation in [1, 2] {
        let chi_p = CubicCharacter::new(&base, orientation)?;
        let rhs = gauss_g(&base, &chi_p)?.powi(k) * sign;
        let mut lhs = Complex64::new(0.0, 0.0);
        for x in ctx.elements().skip(1) {
            let n = base.from_prime(ctx.norm(&x)?);
            lhs += chi_p.eval_complex(&n) * psi(ctx, &x)?;
        }
        let lifted = gauss_g(ctx, &lift_character(&chi_p, ctx)?)?;
        worst = worst.max((lhs - rhs).norm()).max((lifted - lhs).norm());
    }
    Ok(worst)
}

/// `S(1), S(z), S(z²)` against the cubic `x³ - 3qx - qc`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodCheck {
    pub c: i64,
    pub s: [f64; 3],
    /// `s³ - 3qs - qc` for each value.
    pub residuals: [f64; 3],
    /// `S(1) + S(z) + S(z²)`, zero since the cubic has no `x²` term.
    pub sum: f64,
}

pub fn cubic_period_check(ctx: &FieldConfig, z: &FieldElement) -> Result<PeriodCheck> {
    require_p1(ctx)?;
    if ctx.is_cubic(z)? || z.is_zero() {
        return Err(Error::InvalidArgument(format!("{z} must be non-cubic")));
    }
    let c = solve_c(ctx)?.c;
    let q = ctx.q() as f64;
    let z2 = ctx.mul(z, z);
    let s = [gauss_s(ctx, &ctx.one())?, gauss_s(ctx, z)?, gauss_s(ctx, &z2)?];
    let residuals = s.map(|x| x * x * x - 3.0 * q * x - q * c as f64);
    Ok(PeriodCheck { c, s, residuals, sum: s.iter().sum() })
}

/// `S(1)²S(z) + S(z)²S(z²) + S(z²)²S(1)` against `(3/2)q(9d - c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCubeCheck {
    pub lhs: f64,
    /// Always an integer: `9d - c` is even because `c ≡ d (mod 2)`.
    pub rhs: i128,
}

impl WeightedCubeCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs as f64).abs()
    }
}

pub fn weighted_cube_check(ctx: &FieldConfig, z: &FieldElement) -> Result<WeightedCubeCheck> {
    let periods = cubic_period_check(ctx, z)?;
    let cd = solve_cd(ctx, z)?;
    let d = cd.signed_d()? as i128;
    let diff = 9 * d - cd.c as i128;
    if diff % 2 != 0 {
        return Err(Error::Internal(format!("9d - c = {diff} is odd")));
    }
    let [s1, sz, sz2] = periods.s;
    Ok(WeightedCubeCheck {
        lhs: s1 * s1 * sz + sz * sz * sz2 + sz2 * sz2 * s1,
        rhs: 3 * ctx.q() as i128 * diff / 2,
    })
}

/// `|S(a) - (χ̄(a)G(χ) + χ(a)G(χ̄))|` for each `a`.
pub fn decomposition_residuals(
    ctx: &FieldConfig,
    chi: &CubicCharacter,
    points: &[FieldElement],
) -> Result<Vec<f64>> {
    let conj = chi.conjugate();
    let g = gauss_g(ctx, chi)?;
    let g_bar = gauss_g(ctx, &conj)?;
    points
        .iter()
        .map(|a| {
            let s = gauss_s(ctx, a)?;
            let predicted = conj.eval_complex(a) * g + chi.eval_complex(a) * g_bar;
            Ok((Complex64::new(s, 0.0) - predicted).norm())
        })
        .collect()
}

/// `|G(χ)³ - q·J(χ, χ)|`.
pub fn gauss_cube_residual(ctx: &FieldConfig, chi: &CubicCharacter) -> Result<f64> {
    let g = gauss_g(ctx, chi)?;
    let j = jacobi_chichi(ctx, chi)?.to_complex();
    Ok((g.powi(3) - j * ctx.q() as f64).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f49() -> FieldConfig {
        FieldConfig::with_modulus(7, 2, vec![1, 0, 1]).unwrap()
    }

    #[test]
    fn epsilon_choice() {
        assert_eq!(primitive_cube_root(7).unwrap(), 2);
        assert_eq!(primitive_cube_root(13).unwrap(), 3);
        assert!(primitive_cube_root(5).is_err());
    }

    #[test]
    fn character_for_examples() {
        let ctx = f49();
        let z = ctx.parse_element("1,1").unwrap();
        let chi = character_for(&ctx, &z).unwrap();
        assert_eq!(chi.eval(&z), Some(EisensteinInteger::OMEGA));
        let chi2 = character_for(&ctx, &ctx.mul(&z, &z)).unwrap();
        assert_eq!(chi2, chi.conjugate());

        let f7 = FieldConfig::new(7, 1).unwrap();
        let chi = character_for(&f7, &f7.from_prime(3)).unwrap();
        assert_eq!((chi.epsilon(), chi.orientation()), (2, 1));
        assert_eq!(chi.eval(&f7.from_prime(3)), Some(EisensteinInteger::OMEGA));

        assert!(matches!(character_for(&f7, &f7.one()), Err(Error::InvalidArgument(_))));
        assert!(matches!(character_for(&f7, &f7.zero()), Err(Error::InvalidArgument(_))));
        let f4 = FieldConfig::new(2, 2).unwrap();
        let z4 = f4.noncubic_representative().unwrap();
        assert!(matches!(character_for(&f4, &z4), Err(Error::UnsupportedField { .. })));
    }

    #[test]
    fn exactly_one_character_sends_z_to_omega() {
        let ctx = FieldConfig::new(13, 2).unwrap();
        let z = ctx.noncubic_representative().unwrap();
        let hits = [1, 2]
            .iter()
            .filter(|&&o| CubicCharacter::new(&ctx, o).unwrap().eval(&z) == Some(EisensteinInteger::OMEGA))
            .count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn character_values() {
        let ctx = FieldConfig::new(7, 2).unwrap();
        let chi = CubicCharacter::new(&ctx, 1).unwrap();
        let conj = chi.conjugate();
        assert_eq!(chi.eval(&ctx.one()), Some(EisensteinInteger::ONE));
        assert_eq!(chi.eval(&ctx.zero()), None);
        for x in ctx.elements().skip(1) {
            assert_eq!(chi.eval(&ctx.cube(&x)), Some(EisensteinInteger::ONE));
            assert_eq!(chi.eval(&x).unwrap() * conj.eval(&x).unwrap(), EisensteinInteger::ONE);
            for y in ctx.elements().skip(1).step_by(5) {
                assert_eq!(chi.eval(&ctx.mul(&x, &y)).unwrap(), chi.eval(&x).unwrap() * chi.eval(&y).unwrap());
            }
        }
        assert_eq!(multiplicative_sum(&chi), EisensteinInteger::ZERO);
    }

    #[test]
    fn gauss_s_values() {
        let f7 = FieldConfig::new(7, 1).unwrap();
        // cubes mod 7 are 0, 1, 6 with multiplicities 1, 3, 3
        let expected = 1.0 + 3.0 * (TAU / 7.0).cos() + 3.0 * (6.0 * TAU / 7.0).cos();
        let s = gauss_s(&f7, &f7.one()).unwrap();
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 4.740_938).abs() < 1e-5);

        for (p, k) in [(5, 1), (2, 3), (11, 1)] {
            let ctx = FieldConfig::new(p, k).unwrap();
            for a in ctx.elements().skip(1) {
                assert!(gauss_s(&ctx, &a).unwrap().abs() < 1e-9);
            }
        }

        let ctx = f49();
        let s = gauss_s(&ctx, &ctx.one()).unwrap();
        assert!((s.powi(3) - 147.0 * s - 637.0).abs() < 1e-6);
        assert!(gauss_s(&ctx, &ctx.zero()).is_err());
    }

    #[test]
    fn gauss_g_values() {
        let f7 = FieldConfig::new(7, 1).unwrap();
        let chi = CubicCharacter::new(&f7, 1).unwrap();
        let g = gauss_g(&f7, &chi).unwrap();
        assert!((g.norm() - 7f64.sqrt()).abs() < 1e-9);
        let gg = g * gauss_g(&f7, &chi.conjugate()).unwrap();
        assert!((gg - Complex64::new(7.0, 0.0)).norm() < 1e-9);

        let ctx = f49();
        let chi = character_for(&ctx, &ctx.parse_element("1,1").unwrap()).unwrap();
        let g3 = gauss_g(&ctx, &chi).unwrap().powi(3);
        let expected = Complex64::new(13.0, -3.0 * 3f64.sqrt()) * (49.0 / 2.0);
        assert!((g3 - expected).norm() < 1e-5);
    }

    #[test]
    fn jacobi_examples() {
        let ctx = f49();
        let chi = character_for(&ctx, &ctx.parse_element("1,1").unwrap()).unwrap();
        let j = jacobi_chichi(&ctx, &chi).unwrap();
        assert_eq!(j, EisensteinInteger::new(5, -3));
        assert_eq!(j.norm(), 49);

        // direct double loop over x + y = 1 in F_7 with χ(3) = ω, ε = 2
        let f7 = FieldConfig::new(7, 1).unwrap();
        let exponent = |v: u64| -> Option<u32> {
            let w = pow_mod(v, 2, 7);
            match w {
                0 => None,
                1 => Some(0),
                2 => Some(1),
                _ => Some(2),
            }
        };
        let mut oracle = EisensteinInteger::ZERO;
        for x in 0..7u64 {
            for y in 0..7u64 {
                if (x + y) % 7 != 1 {
                    continue;
                }
                if let (Some(a), Some(b)) = (exponent(x), exponent(y)) {
                    oracle = oracle + EisensteinInteger::omega_pow(a + b);
                }
            }
        }
        assert_eq!(oracle, EisensteinInteger::new(-1, -3));
        let chi = character_for(&f7, &f7.from_prime(3)).unwrap();
        assert_eq!(jacobi_chichi(&f7, &chi).unwrap(), oracle);
    }

    #[test]
    fn hasse_davenport() {
        for (p, k) in [(7, 2), (7, 1), (13, 2)] {
            let ctx = FieldConfig::new(p, k).unwrap();
            assert!(hasse_davenport_check(&ctx).unwrap() < 1e-6, "p = {p}, k = {k}");
        }
        let f7 = FieldConfig::new(7, 1).unwrap();
        let chi = CubicCharacter::new(&f7, 1).unwrap();
        assert!(lift_character(&chi, &FieldConfig::new(13, 2).unwrap()).is_err());
    }

    #[test]
    fn weighted_cube_examples() {
        let f7 = FieldConfig::new(7, 1).unwrap();
        let w = weighted_cube_check(&f7, &f7.from_prime(3)).unwrap();
        assert_eq!(w.rhs, -105);
        assert!(w.residual() < 1e-4 * 7f64.powf(1.5));

        let ctx = f49();
        let z = ctx.parse_element("1,1").unwrap();
        let w = weighted_cube_check(&ctx, &z).unwrap();
        assert_eq!(w.rhs, -1617);
        assert!(w.residual() < 1e-4 * 49f64.powf(1.5));

        let zw = ctx.mul(&z, &ctx.cube(&ctx.parse_element("2,3").unwrap()));
        let w2 = weighted_cube_check(&ctx, &zw).unwrap();
        assert_eq!(w2.rhs, w.rhs);
        assert!((w2.lhs - w.lhs).abs() < 1e-9);
    }

    #[test]
    fn period_cubic_f7() {
        let f7 = FieldConfig::new(7, 1).unwrap();
        let pc = cubic_period_check(&f7, &f7.from_prime(3)).unwrap();
        assert_eq!(pc.c, 1);
        assert!(pc.residuals.iter().all(|r| r.abs() < 1e-9));
        assert!(pc.sum.abs() < 1e-9);
    }

    #[test]
    fn additive_orthogonality() {
        let ctx = FieldConfig::new(3, 3).unwrap();
        let q = additive_sum(&ctx, &ctx.zero()).unwrap();
        assert!((q - Complex64::new(27.0, 0.0)).norm() < 1e-9);
        for a in ctx.elements().skip(1) {
            assert!(additive_sum(&ctx, &a).unwrap().norm() < 1e-6);
        }
    }
}
