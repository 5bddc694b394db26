//! Exhaustive solution counts over small fields.
//!
//! Everything here is deliberately naive: every tuple of the leading variables is
//! visited, and only the last variable is resolved through a histogram of the values
//! `a·x³`. Elements are handled by index (see [`FieldConfig::index_of`]).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElement};

/// Upper bound on `q^{#variables}` for one enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_points: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self { max_points: 100_000_000 }
    }
}

impl EnumerationBudget {
    fn admit(&self, q: u64, vars: usize) -> Result<()> {
        let needed = (q as u128).checked_pow(vars as u32).unwrap_or(u128::MAX);
        if needed > self.max_points as u128 {
            return Err(Error::BudgetExceeded { needed, budget: self.max_points });
        }
        Ok(())
    }
}

/// Addition on element indices, digit by digit in base p.
struct IndexArith {
    p: u64,
    k: usize,
    q: u64,
}

impl IndexArith {
    fn new(ctx: &FieldConfig) -> Self {
        Self { p: ctx.p(), k: ctx.k(), q: ctx.q() }
    }

    fn add(&self, mut a: u64, mut b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, mut a: u64) -> u64 {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }
}

/// `table[x] = index(a·x³)` for every `x`.
fn scaled_cubes(ctx: &FieldConfig, a: &FieldElement) -> Vec<u64> {
    ctx.elements().map(|x| ctx.index_of(&ctx.mul(a, &ctx.cube(&x)))).collect()
}

fn histogram(values: &[u64], q: u64) -> Vec<u64> {
    let mut hist = vec![0u64; q as usize];
    for &v in values {
        hist[v as usize] += 1;
    }
    hist
}

/// Number of solutions of `Σ coeffs[i]·x_i³ = rhs`.
fn count_diagonal(
    ctx: &FieldConfig,
    coeffs: &[FieldElement],
    rhs: &FieldElement,
    budget: EnumerationBudget,
) -> Result<u64> {
    let vars = coeffs.len();
    if vars == 0 {
        return Err(Error::InvalidArgument("equation needs at least one variable".into()));
    }
    budget.admit(ctx.q(), vars)?;
    let arith = IndexArith::new(ctx);
    let tables: Vec<Vec<u64>> = coeffs.iter().map(|a| scaled_cubes(ctx, a)).collect();
    let (last, leading) = tables.split_last().expect("vars >= 1");
    let hist = histogram(last, ctx.q());
    let target = ctx.index_of(rhs);

    fn walk(arith: &IndexArith, tables: &[Vec<u64>], hist: &[u64], target: u64, partial: u64) -> u64 {
        match tables.split_first() {
            None => hist[arith.sub(target, partial) as usize],
            Some((first, rest)) => first
                .iter()
                .map(|&v| walk(arith, rest, hist, target, arith.add(partial, v)))
                .sum(),
        }
    }

    Ok(match leading.split_first() {
        None => hist[target as usize],
        Some((first, rest)) => first
            .par_iter()
            .map(|&v| walk(&arith, rest, &hist, target, v))
            .sum(),
    })
}

fn require_nonzero(name: &str, x: &FieldElement) -> Result<()> {
    if x.is_zero() {
        return Err(Error::InvalidArgument(format!("{name} must be nonzero")));
    }
    Ok(())
}

/// `#{x : x_1³ + … + x_n³ = z}`
pub fn brute_a(ctx: &FieldConfig, z: &FieldElement, n: usize, budget: EnumerationBudget) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("A_n needs n >= 1".into()));
    }
    count_diagonal(ctx, &vec![ctx.one(); n], z, budget)
}

/// `#{x : x_1³ + … + x_n³ + z·x_{n+1}³ = 0}`
pub fn brute_b(ctx: &FieldConfig, z: &FieldElement, n: usize, budget: EnumerationBudget) -> Result<u64> {
    require_nonzero("z", z)?;
    let mut coeffs = vec![ctx.one(); n];
    coeffs.push(z.clone());
    count_diagonal(ctx, &coeffs, &ctx.zero(), budget)
}

/// `#{x : a_1x_1³ + a_2x_2³ + a_3x_3³ = 0}`
pub fn brute_m(
    ctx: &FieldConfig,
    a1: &FieldElement,
    a2: &FieldElement,
    a3: &FieldElement,
    budget: EnumerationBudget,
) -> Result<u64> {
    for (name, a) in [("a1", a1), ("a2", a2), ("a3", a3)] {
        require_nonzero(name, a)?;
    }
    count_diagonal(ctx, &[a1.clone(), a2.clone(), a3.clone()], &ctx.zero(), budget)
}

/// `#{x : a_1x_1³ + a_2x_2³ = a_3}`
pub fn brute_n(
    ctx: &FieldConfig,
    a1: &FieldElement,
    a2: &FieldElement,
    a3: &FieldElement,
    budget: EnumerationBudget,
) -> Result<u64> {
    for (name, a) in [("a1", a1), ("a2", a2), ("a3", a3)] {
        require_nonzero(name, a)?;
    }
    count_diagonal(ctx, &[a1.clone(), a2.clone()], a3, budget)
}

/// Every `(x_1, x_2)` with `a_1x_1³ + a_2x_2³ = a_3`, sorted lexicographically.
pub fn enumerate_n_solutions(
    ctx: &FieldConfig,
    a1: &FieldElement,
    a2: &FieldElement,
    a3: &FieldElement,
    budget: EnumerationBudget,
) -> Result<Vec<(FieldElement, FieldElement)>> {
    budget.admit(ctx.q(), 2)?;
    let arith = IndexArith::new(ctx);
    let t1 = scaled_cubes(ctx, a1);
    let t2 = scaled_cubes(ctx, a2);
    let target = ctx.index_of(a3);
    let mut out: Vec<(FieldElement, FieldElement)> = (0..arith.q)
        .into_par_iter()
        .flat_map_iter(|x1| {
            let (t1, t2, arith) = (&t1, &t2, &arith);
            (0..arith.q)
                .filter(move |&x2| arith.add(t1[x1 as usize], t2[x2 as usize]) == target)
                .map(move |x2| (ctx.from_index(x1), ctx.from_index(x2)))
        })
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: EnumerationBudget = EnumerationBudget { max_points: 100_000_000 };

    #[test]
    fn index_arith_matches_field() {
        let ctx = FieldConfig::new(3, 3).unwrap();
        let arith = IndexArith::new(&ctx);
        for a in ctx.elements() {
            for b in ctx.elements().step_by(4) {
                let (ia, ib) = (ctx.index_of(&a), ctx.index_of(&b));
                assert_eq!(arith.add(ia, ib), ctx.index_of(&ctx.add(&a, &b)));
                assert_eq!(arith.sub(ia, ib), ctx.index_of(&ctx.sub(&a, &b)));
            }
        }
    }

    #[test]
    fn small_counts() {
        for (p, k) in [(7, 1), (5, 1), (2, 3)] {
            let ctx = FieldConfig::new(p, k).unwrap();
            assert_eq!(brute_a(&ctx, &ctx.zero(), 1, BUDGET).unwrap(), 1);
        }
        let f5 = FieldConfig::new(5, 1).unwrap();
        for z in f5.elements() {
            assert_eq!(brute_a(&f5, &z, 2, BUDGET).unwrap(), 5);
        }
        let f7 = FieldConfig::new(7, 1).unwrap();
        assert_eq!(brute_a(&f7, &f7.from_prime(3), 2, BUDGET).unwrap(), 0);
        assert_eq!(brute_a(&f7, &f7.one(), 2, BUDGET).unwrap(), 6);
        assert_eq!(brute_b(&f7, &f7.from_prime(3), 0, BUDGET).unwrap(), 1);
        assert_eq!(brute_b(&f7, &f7.from_prime(3), 1, BUDGET).unwrap(), 1);
        let one = f7.one();
        assert_eq!(brute_m(&f7, &one, &one, &one, BUDGET).unwrap(), 55);
        assert_eq!(brute_m(&f7, &one, &one, &f7.from_prime(3), BUDGET).unwrap(), 19);
        assert_eq!(brute_n(&f7, &one, &f7.from_prime(3), &f7.from_prime(3), BUDGET).unwrap(), 12);
    }

    #[test]
    fn m_with_unit_pair_is_b2() {
        let ctx = FieldConfig::new(13, 1).unwrap();
        let one = ctx.one();
        for z in ctx.elements().skip(1) {
            assert_eq!(
                brute_m(&ctx, &one, &one, &z, BUDGET).unwrap(),
                brute_b(&ctx, &z, 2, BUDGET).unwrap()
            );
        }
    }

    #[test]
    fn histogram_covers_field() {
        let ctx = FieldConfig::new(2, 4).unwrap();
        let hist = histogram(&scaled_cubes(&ctx, &ctx.one()), ctx.q());
        assert_eq!(hist.iter().sum::<u64>(), ctx.q());
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = FieldConfig::new(7, 2).unwrap();
        let tight = EnumerationBudget { max_points: 1000 };
        assert!(matches!(
            brute_a(&ctx, &ctx.one(), 2, tight),
            Err(Error::BudgetExceeded { needed: 2401, budget: 1000 })
        ));
        assert!(brute_a(&ctx, &ctx.one(), 1, tight).is_ok());
        assert!(enumerate_n_solutions(&ctx, &ctx.one(), &ctx.one(), &ctx.one(), tight).is_err());
    }

    #[test]
    fn solution_lists() {
        let f7 = FieldConfig::new(7, 1).unwrap();
        let one = f7.one();
        assert!(enumerate_n_solutions(&f7, &one, &one, &f7.from_prime(3), BUDGET).unwrap().is_empty());
        let sols = enumerate_n_solutions(&f7, &one, &one, &one, BUDGET).unwrap();
        assert_eq!(sols.len() as u64, brute_n(&f7, &one, &one, &one, BUDGET).unwrap());
        for (x, y) in &sols {
            assert!(sols.contains(&(y.clone(), x.clone())));
        }
        assert!(sols.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zero_coefficients_rejected() {
        let f7 = FieldConfig::new(7, 1).unwrap();
        let one = f7.one();
        assert!(brute_b(&f7, &f7.zero(), 1, BUDGET).is_err());
        assert!(brute_m(&f7, &one, &f7.zero(), &one, BUDGET).is_err());
        assert!(brute_a(&f7, &one, 0, BUDGET).is_err());
    }
}
