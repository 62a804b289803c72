use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input, Error, Result};

pub type PrimeSet = BTreeSet<u64>;

/// Largest prime accepted as user input.
pub const MAX_PRIME: u64 = 1 << 32;

/// Deterministic trial division; inputs above [`MAX_PRIME`] are not considered.
pub fn is_prime(p: u64) -> bool {
    if p < 2 || p > MAX_PRIME {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

pub fn validate_prime(p: u64) -> Result<()> {
    if p > MAX_PRIME {
        return input(format!("{p} exceeds the supported prime range (2^32)"));
    }
    if !is_prime(p) {
        return input(format!("{p} is not prime"));
    }
    Ok(())
}

pub fn parse_prime_set(ps: impl IntoIterator<Item = u64>) -> Result<PrimeSet> {
    ps.into_iter().map(|p| validate_prime(p).map(|_| p)).collect()
}

/// Distinct prime divisors of a nonzero integer.
pub fn factor_primes(n: &BigInt) -> Result<PrimeSet> {
    if n.is_zero() {
        return Err(Error::Internal("factoring zero".into()));
    }
    let n: BigUint = n.abs().to_biguint().expect("nonnegative");
    if n.is_one() {
        return Ok(PrimeSet::new());
    }
    let (found, rest) = num_prime::nt_funcs::factors(n, None);
    if rest.is_some() {
        return Err(Error::Internal("integer factorization did not complete".into()));
    }
    found
        .keys()
        .map(|p| p.to_u64().ok_or_else(|| Error::Internal(format!("prime factor {p} exceeds 64 bits"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_division() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(4_294_967_291));
        assert!(validate_prime(4).is_err());
        assert!(validate_prime(u64::MAX).is_err());
    }

    #[test]
    fn factoring() {
        let f = factor_primes(&BigInt::from(-2 * 2 * 3 * 17 * 17 * 23)).unwrap();
        assert_eq!(f.into_iter().collect::<Vec<_>>(), vec![2, 3, 17, 23]);
        assert!(factor_primes(&BigInt::from(1)).unwrap().is_empty());
    }
}
