//! Exact rational and integer linear algebra: the substrate for every other module.

mod hnf;
mod matrix;
mod primes;
mod rational;
mod snf;
mod solve;
mod subspace;

pub use hnf::{hnf, hnf_basis, hnf_int, IntMatrix};
pub use matrix::Matrix;
pub use primes::{factor_primes, is_prime, parse_prime_set, validate_prime, PrimeSet, MAX_PRIME};
pub use rational::{
    common_denominator, fmt_rational, ppow, is_p_integral, parse_rational, q, qq, residue_mod_power,
    strip_primes, valuation, vec_is_zero, vec_scale, vec_sub, Rational, RationalVector,
};
pub use snf::{local_snf, LocalSmithForm};
pub use solve::{solve_integer, solve_rational, RationalSolution};
pub use subspace::Subspace;
