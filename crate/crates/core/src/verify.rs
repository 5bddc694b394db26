//! Sweeps that compare every closed form with the brute-force oracle and check the
//! character-sum identities, field by field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::is_prime;
use crate::cd::solve_cd;
use crate::characters::{
    character_for, cubic_period_check, gauss_cube_residual, hasse_davenport_check, jacobi_chichi,
    weighted_cube_check,
};
use crate::closed_forms::{count_a_with, count_b_with, count_m_with, count_n_with, FaultInjection};
use crate::eisenstein::EisensteinInteger;
use crate::error::{Error, Result};
use crate::field::{format_coeffs, FieldConfig, FieldElement};
use crate::oracle::{brute_a, brute_b, brute_m, brute_n, EnumerationBudget};

/// All `(p, k)` with `p^k ≤ max_q`, ordered by `q`.
pub fn prime_powers(max_q: u64) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for p in (2..=max_q).filter(|&p| is_prime(p)) {
        let mut q = p;
        let mut k = 1;
        loop {
            out.push((q, p, k));
            match q.checked_mul(p) {
                Some(next) if next <= max_q => {
                    q = next;
                    k += 1;
                }
                _ => break,
            }
        }
    }
    out.sort();
    out.into_iter().map(|(_, p, k)| (p, k)).collect()
}

/// One element from each class of `F_q^*` modulo cubes: `1`, `z`, `z²` with `z` the
/// first non-cubic element.
pub fn class_representatives(ctx: &FieldConfig) -> Result<[FieldElement; 3]> {
    let z = ctx.noncubic_representative()?;
    let z2 = ctx.mul(&z, &z);
    Ok([ctx.one(), z, z2])
}

/// `count` triples of nonzero elements, reproducible from `seed` and the field.
pub fn random_triples(ctx: &FieldConfig, count: usize, seed: u64) -> Vec<[FieldElement; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ctx.q().wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut draw = || ctx.from_index(rng.gen_range(1..ctx.q()));
    (0..count).map(|_| [draw(), draw(), draw()]).collect()
}

/// The exact Jacobi sum of the character with `χ(z) = ω`, next to the value
/// `(c + 3d)/2 + 3d·ω` predicted from `solve_cd(z)`.
pub fn jacobi_identity(ctx: &FieldConfig, z: &FieldElement) -> Result<(EisensteinInteger, EisensteinInteger)> {
    let chi = character_for(ctx, z)?;
    let actual = jacobi_chichi(ctx, &chi)?;
    let cd = solve_cd(ctx, z)?;
    let expected = EisensteinInteger::from_cd(cd.c, cd.signed_d()?)
        .ok_or_else(|| Error::Internal(format!("c + 3d odd for {cd:?}")))?;
    Ok((actual, expected))
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub max_q: u64,
    pub n_max: usize,
    pub triples: usize,
    pub seed: u64,
    pub fault: FaultInjection,
    pub budget: EnumerationBudget,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            max_q: 64,
            n_max: 3,
            triples: 50,
            seed: 0,
            fault: FaultInjection::NONE,
            budget: EnumerationBudget::default(),
        }
    }
}

/// A failed check with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub check: String,
    pub inputs: String,
    pub formula: String,
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldReport {
    pub p: u64,
    pub k: usize,
    pub q: u64,
    pub modulus: Vec<u64>,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl FieldReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Recorder {
    checks: usize,
    failures: Vec<Failure>,
}

impl Recorder {
    fn compare<T: PartialEq + std::fmt::Display>(
        &mut self,
        check: &str,
        inputs: String,
        formula: Result<T>,
        reference: Result<T>,
    ) {
        self.checks += 1;
        let (f, r) = match (formula, reference) {
            (Ok(f), Ok(r)) if f == r => return,
            (f, r) => (show(f), show(r)),
        };
        self.failures.push(Failure { check: check.into(), inputs, formula: f, reference: r });
    }

    fn bound(&mut self, check: &str, inputs: String, residual: Result<f64>, tolerance: f64) {
        self.checks += 1;
        match residual {
            Ok(r) if r < tolerance => {}
            other => self.failures.push(Failure {
                check: check.into(),
                inputs,
                formula: show(other.map(|r| format!("residual {r:e}"))),
                reference: format!("< {tolerance:e}"),
            }),
        }
    }
}

fn show<T: std::fmt::Display>(r: Result<T>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Runs every check on one field with q ≡ 1 (mod 3).
pub fn sweep_field(ctx: &FieldConfig, cfg: &SweepConfig) -> Result<FieldReport> {
    let mut rec = Recorder { checks: 0, failures: Vec::new() };
    let reps = class_representatives(ctx)?;
    let fault = cfg.fault;
    let big = |r: Result<u64>| r.map(num_bigint::BigUint::from);

    for z in std::iter::once(ctx.zero()).chain(reps.iter().cloned()) {
        for n in 1..=cfg.n_max {
            rec.compare(
                "A",
                format!("z={z} n={n}"),
                count_a_with(ctx, &z, n, fault).map(|r| r.count),
                big(brute_a(ctx, &z, n, cfg.budget)),
            );
        }
        if z.is_zero() {
            continue;
        }
        for n in 0..=cfg.n_max {
            rec.compare(
                "B",
                format!("z={z} n={n}"),
                count_b_with(ctx, &z, n, fault).map(|r| r.count),
                big(brute_b(ctx, &z, n, cfg.budget)),
            );
        }
    }

    for [a1, a2, a3] in random_triples(ctx, cfg.triples, cfg.seed) {
        let inputs = format!("a1={a1} a2={a2} a3={a3}");
        rec.compare(
            "M",
            inputs.clone(),
            count_m_with(ctx, &a1, &a2, &a3, fault).map(|r| r.count),
            big(brute_m(ctx, &a1, &a2, &a3, cfg.budget)),
        );
        rec.compare(
            "N",
            inputs,
            count_n_with(ctx, &a1, &a2, &a3, fault).map(|r| r.count),
            big(brute_n(ctx, &a1, &a2, &a3, cfg.budget)),
        );
    }

    if ctx.p() % 3 == 1 {
        let q = ctx.q() as f64;
        let scale = q.powf(1.5);
        for z in &reps[1..] {
            let inputs = format!("z={z}");
            let jac = jacobi_identity(ctx, z);
            rec.compare(
                "jacobi",
                inputs.clone(),
                jac.clone().map(|(actual, _)| actual),
                jac.clone().map(|(_, expected)| expected),
            );
            rec.compare(
                "jacobi_norm",
                inputs.clone(),
                jac.map(|(actual, _)| actual.norm()),
                Ok(ctx.q() as i128),
            );
            let periods = cubic_period_check(ctx, z);
            rec.bound(
                "period_cubic",
                inputs.clone(),
                periods.as_ref().map(|pc| pc.residuals.iter().fold(0f64, |m, r| m.max(r.abs()))).map_err(Clone::clone),
                1e-4 * scale,
            );
            rec.bound("period_sum", inputs.clone(), periods.map(|pc| pc.sum.abs()), 1e-4 * scale);
            rec.bound(
                "weighted_cube",
                inputs.clone(),
                weighted_cube_check(ctx, z).map(|w| w.residual()),
                1e-4 * scale,
            );
            rec.bound(
                "gauss_cube",
                inputs,
                character_for(ctx, z).and_then(|chi| gauss_cube_residual(ctx, &chi)),
                1e-4 * scale,
            );
        }
        rec.bound(
            "hasse_davenport",
            String::new(),
            hasse_davenport_check(ctx),
            1e-5 * q.sqrt(),
        );
    }

    Ok(FieldReport {
        p: ctx.p(),
        k: ctx.k(),
        q: ctx.q(),
        modulus: ctx.modulus().to_vec(),
        checks: rec.checks,
        failures: rec.failures,
    })
}

/// Sweeps every field with `q ≤ max_q`, q ≡ 1 (mod 3), in increasing `q`.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<FieldReport>> {
    prime_powers(cfg.max_q)
        .into_par_iter()
        .filter(|&(p, k)| p.pow(k as u32) % 3 == 1)
        .map(|(p, k)| sweep_field(&FieldConfig::new(p, k)?, cfg))
        .collect()
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} [{}]: formula {} vs reference {}", self.check, self.inputs, self.formula, self.reference)
    }
}

impl FieldReport {
    pub fn describe_field(&self) -> String {
        format!("p={} k={} q={} modulus={}", self.p, self.k, self.q, format_coeffs(&self.modulus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers_to_64() {
        let qs: Vec<u64> = prime_powers(64)
            .into_iter()
            .map(|(p, k)| p.pow(k as u32))
            .filter(|q| q % 3 == 1)
            .collect();
        assert_eq!(qs, vec![4, 7, 13, 16, 19, 25, 31, 37, 43, 49, 61, 64]);
        assert_eq!(prime_powers(4), vec![(2, 1), (3, 1), (2, 2)]);
    }

    #[test]
    fn small_sweep_passes_and_fault_is_caught() {
        let cfg = SweepConfig { max_q: 16, triples: 10, ..SweepConfig::default() };
        let reports = sweep(&cfg).unwrap();
        assert_eq!(reports.iter().map(|r| r.q).collect::<Vec<_>>(), vec![4, 7, 13, 16]);
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.describe_field(), r.failures);
        }
        let faulty = SweepConfig { fault: FaultInjection { c_offset: 3 }, ..cfg };
        assert!(sweep(&faulty).unwrap().iter().all(|r| !r.passed()));
    }

    #[test]
    fn triples_are_reproducible() {
        let ctx = FieldConfig::new(13, 1).unwrap();
        assert_eq!(random_triples(&ctx, 5, 7), random_triples(&ctx, 5, 7));
        assert_ne!(random_triples(&ctx, 5, 7), random_triples(&ctx, 5, 8));
        assert!(random_triples(&ctx, 50, 0).iter().flatten().all(|a| !a.is_zero()));
    }
}
