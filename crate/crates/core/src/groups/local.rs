use num_traits::Zero;

use crate::error::{input, Result};
use crate::exactlin::{
    local_snf, ppow, residue_mod_power, valuation, vec_is_zero, vec_scale, Matrix, Rational, RationalVector,
    Subspace,
};

/// The localization of a group at one prime `p`: a `Z_(p)`-submodule of `Q^n` of the form
/// `W + Λ`, with `W` a subspace (the p-divisible directions) and `Λ` a free `Z_(p)`-lattice
/// complementing it.
///
/// Canonical form: `W` in reduced column echelon form; lattice columns have zeros in the pivot
/// rows of `W`, form a lower staircase with pivot entries exactly `p^a`, and the entries of
/// earlier columns in a pivot row are reduced to `[0, p^a)` in `Z[1/p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalData {
    prime: u64,
    divisible: Subspace,
    lattice: Matrix,
}

impl LocalData {
    /// Canonical module generated by the divisible directions `div` and the `Z_(p)`-span of `lat`.
    pub fn from_gens(prime: u64, ambient: usize, div: &[RationalVector], lat: &[RationalVector]) -> Result<Self> {
        let divisible = Subspace::span(ambient, div)?;
        if lat.iter().any(|v| v.len() != ambient) {
            return input("lattice generator has the wrong length");
        }
        let reduced: Vec<RationalVector> =
            lat.iter().map(|v| divisible.reduce(v)).filter(|v| !vec_is_zero(v)).collect();
        let cols = local_hnf(prime, ambient, reduced);
        let lattice = Matrix::from_cols(ambient, &cols)?;
        Ok(Self { prime, divisible, lattice })
    }

    pub fn zero(prime: u64, ambient: usize) -> Self {
        Self { prime, divisible: Subspace::zero(ambient), lattice: Matrix::zeros(ambient, 0) }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn ambient(&self) -> usize {
        self.divisible.ambient()
    }

    pub fn divisible(&self) -> &Subspace {
        &self.divisible
    }

    pub fn divisible_basis(&self) -> &Matrix {
        self.divisible.basis()
    }

    pub fn lattice_basis(&self) -> &Matrix {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.divisible.dim() + self.lattice.cols()
    }

    pub fn span(&self) -> Subspace {
        let mut vs = self.divisible.vectors();
        vs.extend(self.lattice.columns());
        Subspace::span(self.ambient(), &vs).expect("generators have ambient length")
    }

    /// First nonzero row of each lattice column.
    fn pivots(&self) -> Vec<usize> {
        (0..self.lattice.cols())
            .map(|j| (0..self.lattice.rows()).find(|&i| !self.lattice.get(i, j).is_zero()).expect("nonzero column"))
            .collect()
    }

    /// Coordinates of `v` modulo `W` along the lattice columns, or `None` if `v` is outside the span.
    pub fn lattice_coordinates(&self, v: &[Rational]) -> Option<RationalVector> {
        if v.len() != self.ambient() {
            return None;
        }
        let mut r = self.divisible.reduce(v);
        let mut coords = Vec::with_capacity(self.lattice.cols());
        for (j, &row) in self.pivots().iter().enumerate() {
            let c = &r[row] / self.lattice.get(row, j);
            if !c.is_zero() {
                let col = self.lattice.col(j);
                for (ri, ci) in r.iter_mut().zip(&col) {
                    *ri -= &c * ci;
                }
            }
            coords.push(c);
        }
        vec_is_zero(&r).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.lattice_coordinates(v)
            .map_or(false, |c| c.iter().all(|x| valuation(x, self.prime).map_or(true, |e| e >= 0)))
    }

    pub fn contains_module(&self, other: &LocalData) -> bool {
        self.divisible.contains_space(&other.divisible) && other.lattice.columns().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &LocalData) -> Result<LocalData> {
        let mut div = self.divisible.vectors();
        div.extend(other.divisible.vectors());
        let mut lat = self.lattice.columns();
        lat.extend(other.lattice.columns());
        LocalData::from_gens(self.prime, self.ambient(), &div, &lat)
    }

    pub fn image(&self, t: &Matrix) -> Result<LocalData> {
        let div: Vec<RationalVector> = self.divisible.vectors().iter().map(|v| t.mul_vec(v)).collect::<Result<_>>()?;
        let lat: Vec<RationalVector> = self.lattice.columns().iter().map(|v| t.mul_vec(v)).collect::<Result<_>>()?;
        LocalData::from_gens(self.prime, t.rows(), &div, &lat)
    }

    pub fn direct_sum(&self, other: &LocalData) -> Result<LocalData> {
        let (n1, n2) = (self.ambient(), other.ambient());
        let pad = |v: RationalVector, front: bool| -> RationalVector {
            let mut out = vec![Rational::zero(); n1 + n2];
            let off = if front { 0 } else { n1 };
            for (i, x) in v.into_iter().enumerate() {
                out[off + i] = x;
            }
            out
        };
        let div: Vec<_> = self.divisible.vectors().into_iter().map(|v| pad(v, true))
            .chain(other.divisible.vectors().into_iter().map(|v| pad(v, false)))
            .collect();
        let lat: Vec<_> = self.lattice.columns().into_iter().map(|v| pad(v, true))
            .chain(other.lattice.columns().into_iter().map(|v| pad(v, false)))
            .collect();
        LocalData::from_gens(self.prime, n1 + n2, &div, &lat)
    }

    /// `{y : T y ∈ self}` for `T: Q^k -> Q^n`.
    ///
    /// Solves `T y = C z` over Q with `C = [W | Λ]`, then imposes integrality of the `Λ`
    /// coordinates through the local Smith form of that block of the solution space.
    pub fn preimage(&self, t: &Matrix) -> Result<LocalData> {
        if t.rows() != self.ambient() {
            return input("preimage: map codomain does not match module ambient");
        }
        let k = t.cols();
        let (d, l) = (self.divisible.dim(), self.lattice.cols());
        let c = self.divisible.basis().hstack(&self.lattice)?;
        let system = t.hstack(&c.scale(&-Rational::from_integer(1.into())))?;
        let kernel = system.kernel();
        if kernel.is_empty() {
            return Ok(LocalData::zero(self.prime, k));
        }
        let z = Matrix::from_cols(k + d + l, &kernel)?;
        let y_rows = z.select_rows(&(0..k).collect::<Vec<_>>());
        if l == 0 {
            return LocalData::from_gens(self.prime, k, &y_rows.columns(), &[]);
        }
        let int_rows = z.select_rows(&(k + d..k + d + l).collect::<Vec<_>>());
        let snf = local_snf(&int_rows, self.prime)?;
        let basis = y_rows.mul(&snf.right)?;
        let mut div = Vec::new();
        let mut lat = Vec::new();
        for i in 0..basis.cols() {
            match snf.exponents.get(i) {
                Some(&e) => lat.push(vec_scale(&basis.col(i), &ppow(self.prime, -e))),
                None => div.push(basis.col(i)),
            }
        }
        LocalData::from_gens(self.prime, k, &div, &lat)
    }

    pub fn intersect(&self, other: &LocalData) -> Result<LocalData> {
        if self.ambient() != other.ambient() || self.prime != other.prime {
            return input("local intersection of incompatible modules");
        }
        let n = self.ambient();
        let (d, l) = (self.divisible.dim(), self.lattice.cols());
        // z ↦ (C z, z_Λ) pulled back from other ⊕ Z_(p)^l, then pushed forward along C.
        let c = self.divisible.basis().hstack(&self.lattice)?;
        let mut sel = Matrix::zeros(l, d + l);
        for i in 0..l {
            sel.set(i, d + i, Rational::from_integer(1.into()));
        }
        let stacked = c.vstack(&sel)?;
        let target = other.direct_sum(&LocalData::from_gens(self.prime, l, &[], &Matrix::identity(l).columns())?)?;
        let pulled = target.preimage(&stacked)?;
        let out = pulled.image(&c)?;
        debug_assert_eq!(out.ambient(), n);
        Ok(out)
    }

    /// `self ∩ U` for the column span `U` of `basis`.
    pub fn intersect_subspace(&self, basis: &Matrix) -> Result<LocalData> {
        if basis.cols() == 0 {
            return Ok(LocalData::zero(self.prime, self.ambient()));
        }
        self.preimage(basis)?.image(basis)
    }

    /// Least `e >= 0` with `p^e v` in the module, if `v` lies in its span.
    pub fn min_exponent(&self, v: &[Rational]) -> Option<i64> {
        let coords = self.lattice_coordinates(v)?;
        Some(coords.iter().filter_map(|x| valuation(x, self.prime)).map(|e| -e).max().unwrap_or(0).max(0))
    }
}

/// Column Hermite form over `Z_(p)` of a set of vectors with zero divisible part.
fn local_hnf(p: u64, n: usize, gens: Vec<RationalVector>) -> Vec<RationalVector> {
    let mut active = gens;
    let mut out: Vec<(usize, i64, RationalVector)> = Vec::new();
    for row in 0..n {
        let mut best: Option<(i64, usize)> = None;
        for (idx, v) in active.iter().enumerate() {
            if let Some(e) = valuation(&v[row], p) {
                if best.map_or(true, |(be, _)| e < be) {
                    best = Some((e, idx));
                }
            }
        }
        let Some((e, idx)) = best else { continue };
        let mut pc = active.swap_remove(idx);
        for v in active.iter_mut() {
            if !v[row].is_zero() {
                let f = &v[row] / &pc[row];
                for (vi, ci) in v.iter_mut().zip(&pc) {
                    if !ci.is_zero() {
                        *vi -= &f * ci;
                    }
                }
            }
        }
        let unit = ppow(p, e) / &pc[row];
        for x in pc.iter_mut() {
            *x *= &unit;
        }
        out.push((row, e, pc));
        active.retain(|v| !vec_is_zero(v));
    }
    for l in 0..out.len() {
        let (row, e) = (out[l].0, out[l].1);
        let pivot_col = out[l].2.clone();
        let pe = ppow(p, e);
        for entry in out.iter_mut().take(l) {
            let x = entry.2[row].clone();
            let rep = residue_mod_power(&x, p, e);
            let qt = (x - rep) / &pe;
            if !qt.is_zero() {
                for (vi, ci) in entry.2.iter_mut().zip(&pivot_col) {
                    if !ci.is_zero() {
                        *vi -= &qt * ci;
                    }
                }
            }
        }
    }
    out.into_iter().map(|(_, _, v)| v).collect()
}
