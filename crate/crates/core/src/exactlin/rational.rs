use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Input(format!("malformed rational {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Input(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (d, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = d;
        v += 1;
    }
}

/// p-adic valuation; `None` for zero.
pub fn valuation(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

pub fn is_p_integral(x: &Rational, p: u64) -> bool {
    x.denom().is_one() || valuation(x, p).map_or(true, |v| v >= 0)
}

pub(crate) fn pow(p: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `p^e` as a rational, any sign of `e`.
pub fn ppow(p: u64, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow(p, e as u64))
    } else {
        Rational::new(BigInt::one(), pow(p, (-e) as u64))
    }
}

/// Canonical representative of `x + p^a Z_(p)`: the unique `y` in `Z[1/p]` with `0 <= y < p^a`.
pub fn residue_mod_power(x: &Rational, p: u64, a: i64) -> Rational {
    let den = x.denom();
    let k = int_valuation(den, p);
    let pk = pow(p, k as u64);
    let m = den / &pk;
    let kk = k.max(-a);
    let e = (kk + a) as u64;
    if e == 0 {
        return Rational::zero();
    }
    let modulus = pow(p, e);
    let shift = pow(p, (kk - k) as u64);
    let inv = mod_inverse(&m, &modulus);
    let y = (x.numer() * shift * inv).mod_floor(&modulus);
    Rational::new(y, pow(p, kk as u64))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Removes every factor of the given primes from `n`.
pub fn strip_primes(n: &BigInt, primes: impl IntoIterator<Item = u64>) -> BigInt {
    let mut n = n.abs();
    for p in primes {
        let pb = BigInt::from(p);
        while !n.is_zero() && (&n % &pb).is_zero() {
            n /= &pb;
        }
    }
    n
}

pub fn vec_is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn vec_scale(v: &[Rational], c: &Rational) -> RationalVector {
    v.iter().map(|x| x * c).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn axpy(y: &mut [Rational], c: &Rational, x: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += c * xi;
        }
    }
}
