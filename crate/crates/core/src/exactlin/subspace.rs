use num_traits::Zero;

use super::matrix::Matrix;
use super::rational::{axpy, vec_is_zero, Rational, RationalVector};
use crate::error::{input, Result};

/// A subspace of `Q^n`, stored by its basis in reduced column echelon form.
///
/// Basis column `i` has a 1 in row `pivots[i]`, zeros above it and zeros in every other pivot
/// row, so two subspaces are equal iff their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[RationalVector]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return input(format!("vector length differs from ambient dimension {ambient}"));
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let (r, pivots) = Matrix::from_rows(vectors)?.rref();
        let rows: Vec<RationalVector> = (0..pivots.len()).map(|i| r.row(i)).collect();
        let basis = Matrix::from_cols(ambient, &rows)?;
        Ok(Self { ambient, basis, pivots })
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Matrix::zeros(ambient, 0), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<RationalVector> {
        self.basis.columns()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its component along the basis, read off at the pivot rows. Zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Rational]) -> RationalVector {
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = out[p].clone();
            if !c.is_zero() {
                axpy(&mut out, &-c, &self.basis.col(i));
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.ambient && vec_is_zero(&self.reduce(v))
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.vectors().iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis (`v` must lie in the span).
    pub fn coordinates(&self, v: &[Rational]) -> RationalVector {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let mut vs = self.vectors();
        vs.extend(other.vectors());
        Subspace::span(self.ambient, &vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return input("subspaces live in different ambient spaces");
        }
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        let stacked = self.basis.hstack(&other.basis.scale(&-Rational::from_integer(1.into())))?;
        let vs: Vec<RationalVector> = stacked
            .kernel()
            .iter()
            .map(|k| self.basis.mul_vec(&k[..self.dim()]))
            .collect::<Result<_>>()?;
        Subspace::span(self.ambient, &vs)
    }

    /// Orthogonal complement under the standard inner product.
    pub fn complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        let k = self.basis.transpose().kernel();
        Subspace::span(self.ambient, &k).expect("kernel vectors have ambient length")
    }

    pub fn image(&self, t: &Matrix) -> Result<Subspace> {
        let vs: Vec<RationalVector> = self.vectors().iter().map(|v| t.mul_vec(v)).collect::<Result<_>>()?;
        Subspace::span(t.rows(), &vs)
    }
}
