//! Bounded brute-force baselines.
//!
//! Nothing here uses the canonical group representation for the thing being checked:
//! [`brute_member`] works from a generator scheme with integer linear algebra only, and
//! [`brute_homs`] enumerates matrices and tests them on generators.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Result};
use crate::exactlin::{
    ppow, solve_integer, solve_rational, validate_prime, Matrix, PrimeSet, Rational, RationalVector, Subspace,
};
use crate::groups::{GeneratorScheme, LocalizedGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// Largest absolute value of a numerator.
    pub max_numerator: i64,
    /// Largest exponent of each prime in a denominator.
    pub max_denominator_exponent: u32,
    pub primes: PrimeSet,
    /// How far `v / p^j` is followed when testing p-divisibility of an image.
    pub expansion_depth: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self { max_numerator: 8, max_denominator_exponent: 3, primes: PrimeSet::new(), expansion_depth: 8 }
    }
}

impl SearchBounds {
    pub fn new(max_numerator: i64, max_denominator_exponent: u32, primes: impl IntoIterator<Item = u64>) -> Self {
        Self { max_numerator, max_denominator_exponent, primes: primes.into_iter().collect(), ..Self::default() }
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.expansion_depth = depth;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_numerator < 0 {
            return input("numerator bound must be nonnegative");
        }
        for &p in &self.primes {
            validate_prime(p)?;
        }
        Ok(())
    }

    /// All products `∏ p^e_p` with `0 <= e_p <= max_denominator_exponent`, ascending.
    pub fn denominators(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        for &p in &self.primes {
            let mut next = Vec::new();
            for d in &out {
                let mut x = d.clone();
                for _ in 0..=self.max_denominator_exponent {
                    next.push(x.clone());
                    x *= p;
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Every rational `a/d` with `|a| <= max_numerator` and `d` from [`Self::denominators`].
    pub fn rationals(&self) -> Vec<Rational> {
        let set: BTreeSet<Rational> = self
            .denominators()
            .into_iter()
            .flat_map(|d| {
                (-self.max_numerator..=self.max_numerator).map(move |a| Rational::new(BigInt::from(a), d.clone()))
            })
            .collect();
        set.into_iter().collect()
    }
}

/// Whether `v` is an integer combination of `v_i / ∏_{p ∈ π_i} p^E` with `E` the denominator
/// exponent bound. A `false` only means "not found within bounds".
pub fn brute_member(gens: &GeneratorScheme, v: &[Rational], bounds: &SearchBounds) -> Result<bool> {
    gens.validate()?;
    bounds.validate()?;
    if v.len() != gens.ambient {
        return input("vector length differs from the ambient rank");
    }
    if v.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    if gens.is_empty() {
        return Ok(false);
    }
    let cols: Vec<RationalVector> = gens
        .generators
        .iter()
        .map(|g| {
            let c = g
                .inverted_primes
                .iter()
                .fold(Rational::one(), |acc, &p| acc * ppow(p, -(bounds.max_denominator_exponent as i64)));
            g.vector.iter().map(|x| x * &c).collect()
        })
        .collect();
    Ok(solve_integer(&Matrix::from_cols(gens.ambient, &cols)?, v)?.is_some())
}

/// Whether `f` maps every generator of `a_gens` into `b`, with divisible generators followed to
/// `expansion_depth`.
pub fn maps_into(f: &Matrix, a_gens: &GeneratorScheme, b: &LocalizedGroup, depth: u32) -> Result<bool> {
    for g in &a_gens.generators {
        let image = f.mul_vec(&g.vector)?;
        if !b.member(&image)? {
            return Ok(false);
        }
        for &p in &g.inverted_primes {
            let c = ppow(p, -(depth as i64));
            let deep: RationalVector = image.iter().map(|x| x * &c).collect();
            if !b.member(&deep)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Integer matrices `X` with entries in `[-N, N]` divided by each bounded denominator, deduplicated.
pub fn candidate_matrices(rows: usize, cols: usize, bounds: &SearchBounds) -> Vec<Matrix> {
    let entries = rows * cols;
    let width = (2 * bounds.max_numerator + 1) as u64;
    let count = width.checked_pow(entries as u32).expect("candidate space too large");
    let denominators = bounds.denominators();
    let set: BTreeSet<Matrix> = (0..count)
        .into_par_iter()
        .flat_map_iter(|mut idx| {
            let mut ints = Vec::with_capacity(entries);
            for _ in 0..entries {
                ints.push((idx % width) as i64 - bounds.max_numerator);
                idx /= width;
            }
            denominators.iter().map(move |d| {
                let data = ints.iter().map(|&a| Rational::new(BigInt::from(a), d.clone())).collect();
                Matrix::new(rows, cols, data).expect("shape matches")
            })
        })
        .collect();
    set.into_iter().collect()
}

/// Every bounded candidate matrix that vanishes off `QA` and maps `A` into `B`.
pub fn brute_homs(a_gens: &GeneratorScheme, b: &LocalizedGroup, bounds: &SearchBounds) -> Result<BTreeSet<Matrix>> {
    a_gens.validate()?;
    bounds.validate()?;
    let (n, m) = (a_gens.ambient, b.ambient_rank());
    let vectors: Vec<RationalVector> = a_gens.generators.iter().map(|g| g.vector.clone()).collect();
    let perp = Subspace::span(n, &vectors)?.complement().basis().clone();
    let candidates = candidate_matrices(m, n, bounds);
    let kept: Result<Vec<Option<Matrix>>> = candidates
        .into_par_iter()
        .map(|f| {
            if perp.cols() > 0 && !f.mul(&perp)?.is_zero() {
                return Ok(None);
            }
            Ok(maps_into(&f, a_gens, b, bounds.expansion_depth)?.then_some(f))
        })
        .collect();
    Ok(kept?.into_iter().flatten().collect())
}

/// Bounded lifts `f` of `h` through the projection: `P f = h` and `f` maps `G` into `G`.
/// The lifts form `f_0 + Σ κ_ij k_i e_jᵀ` with `k_i` a basis of `ker P`; the `κ` are enumerated.
pub fn brute_lifts(
    g_gens: &GeneratorScheme,
    g: &LocalizedGroup,
    projection: &Matrix,
    h: &Matrix,
    bounds: &SearchBounds,
) -> Result<Vec<Matrix>> {
    let n = g.ambient_rank();
    if projection.cols() != n || h.rows() != projection.rows() || h.cols() != n {
        return input("lift problem has inconsistent shapes");
    }
    let mut f0 = Matrix::zeros(n, n);
    for j in 0..n {
        match solve_rational(projection, &h.col(j))?.particular {
            Some(x) => {
                for (i, xi) in x.into_iter().enumerate() {
                    f0.set(i, j, xi);
                }
            }
            None => return Ok(Vec::new()),
        }
    }
    let kernel = projection.kernel();
    let params = kernel.len();
    let coeffs = candidate_matrices(params.max(1), n, bounds);
    let lifts: Result<Vec<Option<Matrix>>> = coeffs
        .into_par_iter()
        .map(|kappa| {
            let mut f = f0.clone();
            for (i, k) in kernel.iter().enumerate() {
                for j in 0..n {
                    let c = kappa.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    for (r, kr) in k.iter().enumerate() {
                        let x = f.get(r, j) + c * kr;
                        f.set(r, j, x);
                    }
                }
            }
            Ok(maps_into(&f, g_gens, g, bounds.expansion_depth)?.then_some(f))
        })
        .collect();
    let set: BTreeSet<Matrix> = lifts?.into_iter().flatten().collect();
    Ok(set.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck<T> {
    pub agree: bool,
    pub only_primary: Vec<T>,
    pub only_oracle: Vec<T>,
}

pub fn cross_check<T: Ord + Clone>(primary: &BTreeSet<T>, oracle: &BTreeSet<T>) -> CrossCheck<T> {
    let only_primary: Vec<T> = primary.difference(oracle).cloned().collect();
    let only_oracle: Vec<T> = oracle.difference(primary).cloned().collect();
    CrossCheck { agree: only_primary.is_empty() && only_oracle.is_empty(), only_primary, only_oracle }
}

/// The bounded slice of a hom carrier, on the same candidates as [`brute_homs`].
pub fn hom_slice(carrier: &LocalizedGroup, rows: usize, cols: usize, bounds: &SearchBounds) -> Result<BTreeSet<Matrix>> {
    let kept: Result<Vec<Option<Matrix>>> = candidate_matrices(rows, cols, bounds)
        .into_par_iter()
        .map(|f| Ok(carrier.member(&f.to_vec())?.then_some(f)))
        .collect();
    Ok(kept?.into_iter().flatten().collect())
}
