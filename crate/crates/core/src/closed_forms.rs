//! Closed-form solution counts for diagonal cubic equations.
//!
//! * `A_n(z)`: solutions of `x_1³ + … + x_n³ = z`
//! * `B_n(z)`: solutions of `x_1³ + … + x_n³ + z·x_{n+1}³ = 0`, `z ≠ 0`
//! * `M(a_1, a_2, a_3)`: solutions of `a_1x_1³ + a_2x_2³ + a_3x_3³ = 0`
//! * `N(a_1, a_2, a_3)`: solutions of `a_1x_1³ + a_2x_2³ = a_3`
//!
//! The generating functions of `A` and `B` are `q^{n-1}` (resp. `q^n`) plus or minus
//! a correction `P(x)/(1 - 3qx² - qcx³)` with `deg P ≤ 3`. Coefficients of the
//! correction follow `e_n = P_n + 3q·e_{n-2} + qc·e_{n-3}`. Numerators carry
//! halves, so they are stored doubled and each coefficient is halved exactly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::cd::{solve_c, solve_cd, CdPair};
use crate::error::{Error, Result};
use crate::field::{CubeClassTag, FieldConfig, FieldElement};

/// Deliberate corruption of `c`, used to prove the verification harness can fail.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FaultInjection {
    pub c_offset: i64,
}

impl FaultInjection {
    pub const NONE: Self = Self { c_offset: 0 };

    fn apply(&self, cd: CdPair) -> CdPair {
        CdPair { c: cd.c + self.c_offset, ..cd }
    }
}

/// Series coefficients of `numerator(x) / (1 - 3qx² - qcx³)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCoefficients {
    q: BigInt,
    c: BigInt,
    /// Twice the numerator, constant term first.
    numerator_twice: [BigInt; 4],
}

impl SeriesCoefficients {
    pub fn new(q: u64, c: i64, numerator_twice: [i128; 4]) -> Self {
        Self { q: q.into(), c: c.into(), numerator_twice: numerator_twice.map(BigInt::from) }
    }

    /// `(3q, qc)`: `u_n = 3q·u_{n-2} + qc·u_{n-3}`.
    pub fn recurrence(&self) -> (BigInt, BigInt) {
        (&self.q * 3, &self.q * &self.c)
    }

    pub fn numerator_twice(&self) -> &[BigInt; 4] {
        &self.numerator_twice
    }

    /// Coefficients of `x^0 .. x^n`.
    pub fn coefficients(&self, n: usize) -> Result<Vec<BigInt>> {
        let (r2, r3) = self.recurrence();
        let mut twice: Vec<BigInt> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut e = self.numerator_twice.get(i).cloned().unwrap_or_default();
            if i >= 2 {
                e += &r2 * &twice[i - 2];
            }
            if i >= 3 {
                e += &r3 * &twice[i - 3];
            }
            twice.push(e);
        }
        twice
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                if !(&t % 2u32).is_zero() {
                    return Err(Error::Internal(format!("series coefficient {i} is not an integer: {t}/2")));
                }
                Ok(t / 2)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountBranch {
    /// q ≢ 1 (mod 3): `x ↦ x³` is a bijection, so the equation is effectively linear.
    TrivialCubeMap,
    AZero,
    ACubic,
    ANonCubic,
    BNonCubic,
    /// `B_n(z) = A_{n+1}(0)` for cubic `z`.
    BCubic,
    MCubic,
    MNonCubic,
    /// Product class × class of `a_1/a_2`.
    NCubicCubic,
    NCubicNonCubic,
    NNonCubicCubic,
    NNonCubicNonCubic,
}

impl CountBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            CountBranch::TrivialCubeMap => "TRIVIAL_CUBE_MAP",
            CountBranch::AZero => "A_ZERO",
            CountBranch::ACubic => "A_CUBIC",
            CountBranch::ANonCubic => "A_NONCUBIC",
            CountBranch::BNonCubic => "B_NONCUBIC",
            CountBranch::BCubic => "B_CUBIC_VIA_A0",
            CountBranch::MCubic => "M_PRODUCT_CUBIC",
            CountBranch::MNonCubic => "M_PRODUCT_NONCUBIC",
            CountBranch::NCubicCubic => "N_PRODUCT_CUBIC_RATIO_CUBIC",
            CountBranch::NCubicNonCubic => "N_PRODUCT_CUBIC_RATIO_NONCUBIC",
            CountBranch::NNonCubicCubic => "N_PRODUCT_NONCUBIC_RATIO_CUBIC",
            CountBranch::NNonCubicNonCubic => "N_PRODUCT_NONCUBIC_RATIO_NONCUBIC",
        }
    }
}

impl fmt::Display for CountBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub count: BigUint,
    pub branch: CountBranch,
    /// The `(c, d)` used, absent on the trivial branch.
    pub cd: Option<CdPair>,
}

/// The generating function of `A_n(z)` or `B_n(z)` as main term plus correction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSeries {
    q: u64,
    /// Coefficient of `x^n` in the main term is `q^{n - main_shift}`.
    main_shift: usize,
    first_term: usize,
    subtract: bool,
    correction: SeriesCoefficients,
    vars_offset: usize,
    pub branch: CountBranch,
    pub cd: Option<CdPair>,
}

impl CountSeries {
    /// Index of the first meaningful term (1 for `A`, 0 for `B`).
    pub fn first_term(&self) -> usize {
        self.first_term
    }

    pub fn correction(&self) -> &SeriesCoefficients {
        &self.correction
    }

    /// Terms `first_term ..= last`.
    pub fn terms(&self, last: usize) -> Result<Vec<BigUint>> {
        let corr = self.correction.coefficients(last)?;
        let q = BigInt::from(self.q);
        (self.first_term..=last)
            .map(|n| {
                let main = num_traits::pow(q.clone(), n - self.main_shift);
                let value = if self.subtract { main - &corr[n] } else { main + &corr[n] };
                let bound = num_traits::pow(q.clone(), n + self.vars_offset);
                if value.is_negative() || value > bound {
                    return Err(Error::Internal(format!(
                        "{} term {n} = {value} outside [0, q^{}]",
                        self.branch,
                        n + self.vars_offset
                    )));
                }
                Ok(value.magnitude().clone())
            })
            .collect()
    }

    pub fn term(&self, n: usize) -> Result<BigUint> {
        if n < self.first_term {
            return Err(Error::InvalidArgument(format!(
                "series starts at n = {}, asked for {n}",
                self.first_term
            )));
        }
        Ok(self.terms(n)?.pop().expect("non-empty range"))
    }
}

fn class_of(ctx: &FieldConfig, z: &FieldElement) -> Result<CubeClassTag> {
    Ok(ctx.cube_class(z)?.class_tag)
}

fn trivial(ctx: &FieldConfig) -> bool {
    ctx.q() % 3 != 1
}

fn nonzero(name: &str, x: &FieldElement) -> Result<()> {
    if x.is_zero() {
        Err(Error::InvalidArgument(format!("{name} must be nonzero")))
    } else {
        Ok(())
    }
}

fn to_i128(c: i64) -> i128 {
    c as i128
}

/// Generating function of `A_n(z)`, `n ≥ 1`.
pub fn series_a(ctx: &FieldConfig, z: &FieldElement) -> Result<CountSeries> {
    series_a_with(ctx, z, FaultInjection::NONE)
}

pub fn series_a_with(ctx: &FieldConfig, z: &FieldElement, fault: FaultInjection) -> Result<CountSeries> {
    let q = ctx.q();
    let mut series = CountSeries {
        q,
        main_shift: 1,
        first_term: 1,
        subtract: false,
        correction: SeriesCoefficients::new(q, 0, [0; 4]),
        vars_offset: 0,
        branch: CountBranch::TrivialCubeMap,
        cd: None,
    };
    if trivial(ctx) {
        return Ok(series);
    }
    let qq = q as i128;
    let (branch, cd, numerator_twice, subtract) = match class_of(ctx, z)? {
        CubeClassTag::Zero => {
            // (q-1)(2 + cx)x²
            let cd = fault.apply(solve_c(ctx)?);
            let c = to_i128(cd.c);
            (CountBranch::AZero, cd, [0, 0, 4 * (qq - 1), 2 * c * (qq - 1)], false)
        }
        CubeClassTag::Cubic => {
            // 2x + (c-2)x² - cx³
            let cd = fault.apply(solve_cd(ctx, z)?);
            let c = to_i128(cd.c);
            (CountBranch::ACubic, cd, [0, 4, 2 * (c - 2), -2 * c], false)
        }
        CubeClassTag::NonCubic => {
            // -(x + ½(4 + c - 9d)x² + cx³)
            let cd = fault.apply(solve_cd(ctx, z)?);
            let (c, d) = (to_i128(cd.c), to_i128(cd.signed_d()?));
            (CountBranch::ANonCubic, cd, [0, 2, 4 + c - 9 * d, 2 * c], true)
        }
    };
    series.branch = branch;
    series.subtract = subtract;
    series.correction = SeriesCoefficients::new(q, cd.c, numerator_twice);
    series.cd = Some(cd);
    Ok(series)
}

/// Generating function of `B_n(z)`, `n ≥ 0`, `z ≠ 0`.
pub fn series_b(ctx: &FieldConfig, z: &FieldElement) -> Result<CountSeries> {
    series_b_with(ctx, z, FaultInjection::NONE)
}

pub fn series_b_with(ctx: &FieldConfig, z: &FieldElement, fault: FaultInjection) -> Result<CountSeries> {
    nonzero("z", z)?;
    let q = ctx.q();
    let mut series = CountSeries {
        q,
        main_shift: 0,
        first_term: 0,
        subtract: true,
        correction: SeriesCoefficients::new(q, 0, [0; 4]),
        vars_offset: 1,
        branch: CountBranch::TrivialCubeMap,
        cd: None,
    };
    if trivial(ctx) {
        return Ok(series);
    }
    let qq = q as i128;
    if class_of(ctx, z)? == CubeClassTag::Cubic {
        // B_n(z) = A_{n+1}(0): shift the A_n(0) series one place left.
        // A_{n+1}(0) = q^n + t_{n+1}, and t shifted down has numerator (q-1)(2x + cx²).
        let cd = fault.apply(solve_c(ctx)?);
        let c = to_i128(cd.c);
        series.subtract = false;
        series.branch = CountBranch::BCubic;
        series.correction = SeriesCoefficients::new(q, cd.c, [0, 4 * (qq - 1), 2 * c * (qq - 1), 0]);
        series.cd = Some(cd);
        return Ok(series);
    }
    // -((q-1)x + ½(q-1)(c - 9d)x²)
    let cd = fault.apply(solve_cd(ctx, z)?);
    let (c, d) = (to_i128(cd.c), to_i128(cd.signed_d()?));
    series.branch = CountBranch::BNonCubic;
    series.correction = SeriesCoefficients::new(q, cd.c, [0, 2 * (qq - 1), (qq - 1) * (c - 9 * d), 0]);
    series.cd = Some(cd);
    Ok(series)
}

fn from_series(series: CountSeries, n: usize) -> Result<CountResult> {
    let count = series.term(n)?;
    Ok(CountResult { count, branch: series.branch, cd: series.cd })
}

pub fn count_a(ctx: &FieldConfig, z: &FieldElement, n: usize) -> Result<CountResult> {
    count_a_with(ctx, z, n, FaultInjection::NONE)
}

pub fn count_a_with(ctx: &FieldConfig, z: &FieldElement, n: usize, fault: FaultInjection) -> Result<CountResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("A_n needs n >= 1".into()));
    }
    from_series(series_a_with(ctx, z, fault)?, n)
}

pub fn count_b(ctx: &FieldConfig, z: &FieldElement, n: usize) -> Result<CountResult> {
    count_b_with(ctx, z, n, FaultInjection::NONE)
}

pub fn count_b_with(ctx: &FieldConfig, z: &FieldElement, n: usize, fault: FaultInjection) -> Result<CountResult> {
    from_series(series_b_with(ctx, z, fault)?, n)
}

fn half_exact(twice: i128, what: &str) -> Result<i128> {
    if twice % 2 != 0 {
        return Err(Error::Internal(format!("{what} = {twice}/2 is not an integer")));
    }
    Ok(twice / 2)
}

fn check_coefficients(a1: &FieldElement, a2: &FieldElement, a3: &FieldElement) -> Result<()> {
    nonzero("a1", a1)?;
    nonzero("a2", a2)?;
    nonzero("a3", a3)
}

fn into_count(value: i128, branch: CountBranch, cd: Option<CdPair>, bound: u128) -> Result<CountResult> {
    if value < 0 || value as u128 > bound {
        return Err(Error::Internal(format!("{branch} count {value} outside [0, {bound}]")));
    }
    Ok(CountResult { count: BigUint::from(value as u128), branch, cd })
}

/// `M(a_1, a_2, a_3)`: `q² + c(q-1)` if `a_1a_2a_3` is cubic, else `q² + ½(q-1)(9d - c)`.
pub fn count_m(ctx: &FieldConfig, a1: &FieldElement, a2: &FieldElement, a3: &FieldElement) -> Result<CountResult> {
    count_m_with(ctx, a1, a2, a3, FaultInjection::NONE)
}

pub fn count_m_with(
    ctx: &FieldConfig,
    a1: &FieldElement,
    a2: &FieldElement,
    a3: &FieldElement,
    fault: FaultInjection,
) -> Result<CountResult> {
    check_coefficients(a1, a2, a3)?;
    let q = ctx.q() as i128;
    let bound = (q * q * q) as u128;
    if trivial(ctx) {
        return into_count(q * q, CountBranch::TrivialCubeMap, None, bound);
    }
    let product = ctx.mul(&ctx.mul(a1, a2), a3);
    let cd = fault.apply(solve_cd(ctx, &product)?);
    let c = to_i128(cd.c);
    if class_of(ctx, &product)? == CubeClassTag::Cubic {
        into_count(q * q + c * (q - 1), CountBranch::MCubic, Some(cd), bound)
    } else {
        let d = to_i128(cd.signed_d()?);
        let half = half_exact((q - 1) * (9 * d - c), "(q-1)(9d-c)/2")?;
        into_count(q * q + half, CountBranch::MNonCubic, Some(cd), bound)
    }
}

/// `N(a_1, a_2, a_3)`: `q - 2` or `q + 1` (as `a_1/a_2` is cubic or not) plus `c` or
/// `½(9d - c)` (as `a_1a_2a_3` is cubic or not).
pub fn count_n(ctx: &FieldConfig, a1: &FieldElement, a2: &FieldElement, a3: &FieldElement) -> Result<CountResult> {
    count_n_with(ctx, a1, a2, a3, FaultInjection::NONE)
}

pub fn count_n_with(
    ctx: &FieldConfig,
    a1: &FieldElement,
    a2: &FieldElement,
    a3: &FieldElement,
    fault: FaultInjection,
) -> Result<CountResult> {
    check_coefficients(a1, a2, a3)?;
    let q = ctx.q() as i128;
    let bound = (q * q) as u128;
    if trivial(ctx) {
        return into_count(q, CountBranch::TrivialCubeMap, None, bound);
    }
    let product = ctx.mul(&ctx.mul(a1, a2), a3);
    let ratio = ctx.mul(a1, &ctx.inv(a2)?);
    let cd = fault.apply(solve_cd(ctx, &product)?);
    let c = to_i128(cd.c);
    let product_cubic = class_of(ctx, &product)? == CubeClassTag::Cubic;
    let ratio_cubic = class_of(ctx, &ratio)? == CubeClassTag::Cubic;
    let base = if ratio_cubic { q - 2 } else { q + 1 };
    let (extra, branch) = match (product_cubic, ratio_cubic) {
        (true, true) => (c, CountBranch::NCubicCubic),
        (true, false) => (c, CountBranch::NCubicNonCubic),
        (false, rc) => {
            let d = to_i128(cd.signed_d()?);
            let half = half_exact(9 * d - c, "(9d-c)/2")?;
            (half, if rc { CountBranch::NNonCubicCubic } else { CountBranch::NNonCubicNonCubic })
        }
    };
    into_count(base + extra, branch, Some(cd), bound)
}

/// `q^e` as a big integer.
pub fn q_pow(q: u64, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), e)
}
