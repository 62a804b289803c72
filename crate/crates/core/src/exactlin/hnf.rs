use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::rational::{common_denominator, Rational, RationalVector};
use crate::error::{input, Result};

/// Dense integer matrix used inside the Hermite reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_integral() {
            return input("matrix has non-integer entries");
        }
        Ok(Self { rows: m.rows(), cols: m.cols(), data: m.entries().iter().map(|x| x.to_integer()).collect() })
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::new(self.rows, self.cols, self.data.iter().cloned().map(Rational::from_integer).collect())
            .expect("consistent shape")
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `col[dst] -= k * col[src]`
    fn sub_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst] -= k * s;
            }
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + c];
            *x = -x.clone();
        }
    }

    /// Replaces columns `(a, b)` by `(x*a + y*b, u*a + v*b)`.
    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for i in 0..self.rows {
            let ca = self.data[i * self.cols + a].clone();
            let cb = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = x * &ca + y * &cb;
            self.data[i * self.cols + b] = u * &ca + v * &cb;
        }
    }
}

/// Column Hermite normal form of an integer matrix: returns `(H, U)` with `U` unimodular
/// and `M U = H`.
///
/// `H` is a lower staircase: each nonzero column has a positive pivot in a row strictly
/// below the previous column's pivot, zeros above it, and the entries to the left of a
/// pivot (in earlier pivot columns) lie in `[0, pivot)`. Zero columns come last.
pub fn hnf_int(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pc = 0;
    for row in 0..h.rows {
        if pc == h.cols {
            break;
        }
        if let Some(j) = (pc..h.cols).find(|&j| !h.get(row, j).is_zero()) {
            h.swap_cols(pc, j);
            u.swap_cols(pc, j);
        } else {
            continue;
        }
        for c in pc + 1..h.cols {
            let b = h.get(row, c).clone();
            if b.is_zero() {
                continue;
            }
            let a = h.get(row, pc).clone();
            let e = a.extended_gcd(&b);
            let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
            let (x, y, uu, vv) = (e.x, e.y, -bg, ag);
            h.combine_cols(pc, c, &x, &y, &uu, &vv);
            u.combine_cols(pc, c, &x, &y, &uu, &vv);
        }
        if h.get(row, pc).is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        let piv = h.get(row, pc).clone();
        for c in 0..pc {
            let k = h.get(row, c).div_floor(&piv);
            h.sub_col_multiple(c, pc, &k);
            u.sub_col_multiple(c, pc, &k);
        }
        pc += 1;
    }
    (h, u)
}

/// Column Hermite normal form of a matrix with integer entries, as `(H, U)` with `M U = H`.
pub fn hnf(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let (h, u) = hnf_int(&IntMatrix::from_matrix(m)?);
    Ok((h.to_matrix(), u.to_matrix()))
}

/// Canonical basis of the Z-span of rational vectors: the nonzero HNF columns.
pub fn hnf_basis(n: usize, gens: &[RationalVector]) -> Result<Matrix> {
    if gens.is_empty() {
        return Ok(Matrix::zeros(n, 0));
    }
    let m = Matrix::from_cols(n, gens)?;
    let d = Rational::from_integer(common_denominator(m.entries()));
    let (h, _) = hnf_int(&IntMatrix::from_matrix(&m.scale(&d))?);
    let keep: Vec<usize> = (0..h.cols).filter(|&j| (0..h.rows).any(|i| !h.get(i, j).is_zero())).collect();
    Ok(h.to_matrix().select_cols(&keep).scale(&d.recip()))
}
