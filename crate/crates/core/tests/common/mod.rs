#![allow(dead_code)]

use cellcov_core::exactlin::{ppow, q, Matrix, Rational, RationalVector};
use cellcov_core::groups::GeneratorScheme;
use cellcov_core::LocalizedGroup;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SMALL_PRIMES: [u64; 3] = [2, 3, 5];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a / ∏ p^e` with `|a| <= num` and each `e <= exp`.
pub fn rational(r: &mut impl Rng, num: i64, primes: &[u64], exp: u32) -> Rational {
    let mut x = Rational::from_integer(BigInt::from(r.gen_range(-num..=num)));
    for &p in primes {
        x *= ppow(p, -(r.gen_range(0..=exp) as i64));
    }
    x
}

pub fn vector(r: &mut impl Rng, n: usize, num: i64, primes: &[u64], exp: u32) -> RationalVector {
    (0..n).map(|_| rational(r, num, primes, exp)).collect()
}

pub fn int_vector(r: &mut impl Rng, n: usize, num: i64) -> RationalVector {
    (0..n).map(|_| q(r.gen_range(-num..=num))).collect()
}

pub fn nonzero_int_vector(r: &mut impl Rng, n: usize, num: i64) -> RationalVector {
    loop {
        let v = int_vector(r, n, num);
        if v.iter().any(|x| *x != q(0)) {
            return v;
        }
    }
}

pub fn prime_subset(r: &mut impl Rng, primes: &[u64]) -> Vec<u64> {
    primes.iter().copied().filter(|_| r.gen_bool(0.4)).collect()
}

/// A scheme of up to `max_gens` generators in `Q^n` with small integer entries and inverted
/// primes drawn from `primes`.
pub fn scheme(r: &mut impl Rng, n: usize, max_gens: usize, num: i64, primes: &[u64]) -> GeneratorScheme {
    let mut s = GeneratorScheme::new(n);
    for _ in 0..r.gen_range(1..=max_gens) {
        s.push(int_vector(r, n, num), prime_subset(r, primes));
    }
    s
}

/// A scheme whose generators span `Q^n`.
pub fn full_scheme(r: &mut impl Rng, n: usize, extra: usize, num: i64, primes: &[u64]) -> GeneratorScheme {
    loop {
        let mut s = GeneratorScheme::new(n);
        for _ in 0..n + r.gen_range(0..=extra) {
            s.push(int_vector(r, n, num), prime_subset(r, primes));
        }
        let cols: Vec<RationalVector> = s.generators.iter().map(|g| g.vector.clone()).collect();
        if Matrix::from_cols(n, &cols).unwrap().rank() == n {
            return s;
        }
    }
}

pub fn group(s: &GeneratorScheme) -> LocalizedGroup {
    LocalizedGroup::from_generators(s).unwrap()
}

/// `Σ c_i v_i / ∏_{p ∈ π_i} p^{e_i}` with `|c_i| <= num`, `e_i <= exp`.
pub fn combination(r: &mut impl Rng, s: &GeneratorScheme, num: i64, exp: u32) -> RationalVector {
    let mut v = vec![q(0); s.ambient];
    for g in &s.generators {
        let mut c = q(r.gen_range(-num..=num));
        for &p in &g.inverted_primes {
            c *= ppow(p, -(r.gen_range(0..=exp) as i64));
        }
        for (x, y) in v.iter_mut().zip(&g.vector) {
            *x += &c * y;
        }
    }
    v
}

pub fn pick<T: Copy>(r: &mut impl Rng, xs: &[T]) -> T {
    *xs.choose(r).unwrap()
}

/// Prints one line for an acceptance criterion and fails the test on `false`.
pub fn verdict(name: &str, ok: bool, detail: impl std::fmt::Display) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

/// `Σ Z[1/(p_i ∪ π)] e_i + Z[1/(p_0 ∪ π)](e_1 + ... + e_k)`.
pub fn rigid_scheme(k: usize, spine: &[u64], pi: &[u64]) -> GeneratorScheme {
    let mut s = GeneratorScheme::new(k);
    for (i, &p) in spine[..k].iter().enumerate() {
        let mut e = vec![q(0); k];
        e[i] = q(1);
        s.push(e, std::iter::once(p).chain(pi.iter().copied()));
    }
    s.push(vec![q(1); k], std::iter::once(spine[k]).chain(pi.iter().copied()));
    s
}

/// The scheme with every vector mapped by `t`.
pub fn map_scheme(s: &GeneratorScheme, t: &Matrix) -> GeneratorScheme {
    let mut out = GeneratorScheme::new(t.rows());
    for g in &s.generators {
        out.push(t.mul_vec(&g.vector).unwrap(), g.inverted_primes.iter().copied());
    }
    out
}

/// Block embedding of `Q^cols` at `offset` in `Q^rows`.
pub fn inclusion(rows: usize, offset: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for j in 0..cols {
        m.set(offset + j, j, q(1));
    }
    m
}

pub fn scalar_identity(n: usize, c: &Rational) -> Matrix {
    Matrix::identity(n).scale(c)
}
