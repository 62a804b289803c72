use num_traits::Zero;

use super::matrix::Matrix;
use super::primes::validate_prime;
use super::rational::{ppow, valuation};
use crate::error::Result;

/// Smith form of a rational matrix over the local ring `Z_(p)`.
///
/// `left * A * right = diag(p^e_1, ..., p^e_r)` padded with zeros, where `left`, `right` and
/// their inverses have entries of nonnegative p-adic valuation and `e_1 <= ... <= e_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSmithForm {
    pub prime: u64,
    pub exponents: Vec<i64>,
    pub left: Matrix,
    pub right: Matrix,
}

impl LocalSmithForm {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// The diagonal matrix `left * A * right` should equal.
    pub fn diagonal(&self, rows: usize, cols: usize) -> Matrix {
        let mut d = Matrix::zeros(rows, cols);
        for (i, &e) in self.exponents.iter().enumerate() {
            d.set(i, i, ppow(self.prime, e));
        }
        d
    }
}

/// Local Smith form by rational elimination: at each step the entry of least p-valuation in
/// the remaining block becomes the pivot (ties broken by row, then column), so every
/// elimination multiplier is p-integral.
pub fn local_snf(a: &Matrix, p: u64) -> Result<LocalSmithForm> {
    validate_prime(p)?;
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = Matrix::identity(m);
    let mut right = Matrix::identity(n);
    let mut exponents = Vec::new();
    for t in 0..m.min(n) {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if let Some(v) = valuation(d.get(i, j), p) {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        left.swap_rows(t, bi);
        d.swap_cols(t, bj);
        right.swap_cols(t, bj);
        let piv = d.get(t, t).clone();
        for i in t + 1..m {
            if !d.get(i, t).is_zero() {
                let f = -(d.get(i, t) / &piv);
                d.add_row_multiple(i, t, &f);
                left.add_row_multiple(i, t, &f);
            }
        }
        for j in t + 1..n {
            if !d.get(t, j).is_zero() {
                let f = -(d.get(t, j) / &piv);
                d.add_col_multiple(j, t, &f);
                right.add_col_multiple(j, t, &f);
            }
        }
        let unit = ppow(p, v) / &piv;
        d.scale_row(t, &unit);
        left.scale_row(t, &unit);
        exponents.push(v);
    }
    Ok(LocalSmithForm { prime: p, exponents, left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{is_p_integral, qq};

    fn check(a: &Matrix, p: u64) -> LocalSmithForm {
        let s = local_snf(a, p).unwrap();
        let prod = s.left.mul(a).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod, s.diagonal(a.rows(), a.cols()));
        for m in [&s.left, &s.right, &s.left.inverse().unwrap(), &s.right.inverse().unwrap()] {
            assert!(m.entries().iter().all(|x| is_p_integral(x, p)));
        }
        assert!(s.exponents.windows(2).all(|w| w[0] <= w[1]));
        s
    }

    #[test]
    fn identity_has_zero_exponents() {
        assert_eq!(check(&Matrix::identity(2), 2).exponents, vec![0, 0]);
    }

    #[test]
    fn two_by_two_at_two() {
        // 6 = 2 * 3 with 3 a unit at 2
        assert_eq!(check(&Matrix::from_i64(&[&[2, 4], &[0, 6]]), 2).exponents, vec![1, 1]);
    }

    #[test]
    fn negative_exponent() {
        let a = Matrix::from_rows(&[vec![qq(1, 3)]]).unwrap();
        assert_eq!(check(&a, 3).exponents, vec![-1]);
    }

    #[test]
    fn rejects_composite() {
        assert!(local_snf(&Matrix::identity(1), 4).is_err());
    }

    #[test]
    fn rank_deficient() {
        let s = check(&Matrix::from_i64(&[&[2, 4, 6], &[1, 2, 3]]), 2);
        assert_eq!(s.exponents, vec![0]);
    }
}
