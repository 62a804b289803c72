use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::hnf::{hnf_int, IntMatrix};
use super::matrix::Matrix;
use super::rational::{common_denominator, Rational, RationalVector};
use crate::error::{input, Result};

/// Solution set of `A x = b` over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSolution {
    /// Particular solution with every free variable set to zero, if the system is consistent.
    pub particular: Option<RationalVector>,
    /// Canonical kernel basis (see [`Matrix::kernel`]).
    pub kernel: Vec<RationalVector>,
}

pub fn solve_rational(a: &Matrix, b: &[Rational]) -> Result<RationalSolution> {
    if a.rows() != b.len() {
        return input(format!("system has {} rows but right-hand side has length {}", a.rows(), b.len()));
    }
    let aug = a.hstack(&Matrix::from_cols(b.len(), &[b.to_vec()])?)?;
    let (r, pivots) = aug.rref();
    let kernel = a.kernel();
    if pivots.last() == Some(&a.cols()) {
        return Ok(RationalSolution { particular: None, kernel });
    }
    let mut x = vec![Rational::zero(); a.cols()];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(i, a.cols()).clone();
    }
    Ok(RationalSolution { particular: Some(x), kernel })
}

/// Integer solution of `A x = b` for rational `A`, `b`, if one exists (free variables of the
/// Hermite form set to zero).
pub fn solve_integer(a: &Matrix, b: &[Rational]) -> Result<Option<Vec<BigInt>>> {
    if a.rows() != b.len() {
        return input("dimension mismatch in integer solve");
    }
    let d = common_denominator(a.entries().iter().chain(b));
    let dq = Rational::from_integer(d);
    let ai = IntMatrix::from_matrix(&a.scale(&dq))?;
    let bi: Vec<BigInt> = b.iter().map(|x| (x * &dq).to_integer()).collect();
    let (h, u) = hnf_int(&ai);
    // forward substitution along the staircase
    let mut y = vec![BigInt::zero(); h.cols];
    let mut row = 0;
    for c in 0..h.cols {
        while row < h.rows && h.get(row, c).is_zero() {
            row += 1;
        }
        if row == h.rows {
            break;
        }
        let mut rhs = bi[row].clone();
        for (k, yk) in y.iter().enumerate().take(c) {
            rhs -= h.get(row, k) * yk;
        }
        let (qt, rem) = rhs.div_rem(h.get(row, c));
        if !rem.is_zero() {
            return Ok(None);
        }
        y[c] = qt;
        row += 1;
    }
    for (i, bi) in bi.iter().enumerate() {
        let mut acc = BigInt::zero();
        for (k, yk) in y.iter().enumerate() {
            acc += h.get(i, k) * yk;
        }
        if &acc != bi {
            return Ok(None);
        }
    }
    let x = (0..u.rows)
        .map(|i| (0..u.cols).fold(BigInt::zero(), |acc, k| acc + u.get(i, k) * &y[k]))
        .collect();
    Ok(Some(x))
}
