//! `Hom(A, B)` as a group of matrices.
//!
//! A hom `A -> B` is stored as the `m x n` matrix of its extension to `Q^n` that vanishes on the
//! orthogonal complement of `QA`; the carrier lives in `Q^(m*n)` in row-major order. For a
//! full-rank `A` this is just the matrix of the map. The identity of `A` is the orthogonal
//! projection onto `QA` (see [`identity_of`]).

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::exactlin::{ppow, Matrix, PrimeSet, Rational, RationalVector, Subspace};
use crate::groups::{GeneratorScheme, LocalData, LocalizedGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomGroup {
    domain: LocalizedGroup,
    codomain: LocalizedGroup,
    carrier: LocalizedGroup,
    scheme: GeneratorScheme,
}

/// One generator of a hom carrier: the matrix and the primes it is divisible by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomGenerator {
    pub matrix: Matrix,
    pub inverted_primes: PrimeSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarRing {
    pub scalar: bool,
    pub primes: PrimeSet,
}

/// `f(k) = image` lies outside `K` although `f ∈ End(G)` and `k ∈ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceWitness {
    pub endomorphism: Matrix,
    pub element: RationalVector,
    pub image: RationalVector,
}

impl HomGroup {
    fn new(domain: LocalizedGroup, codomain: LocalizedGroup, carrier: LocalizedGroup) -> Result<Self> {
        let scheme = carrier.generators()?;
        Ok(Self { domain, codomain, carrier, scheme })
    }

    pub fn domain(&self) -> &LocalizedGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &LocalizedGroup {
        &self.codomain
    }

    pub fn carrier(&self) -> &LocalizedGroup {
        &self.carrier
    }

    pub fn rank(&self) -> usize {
        self.carrier.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.carrier.is_zero()
    }

    pub fn matrix_rows(&self) -> usize {
        self.codomain.ambient_rank()
    }

    pub fn matrix_cols(&self) -> usize {
        self.domain.ambient_rank()
    }

    pub fn to_matrix(&self, v: &[Rational]) -> Result<Matrix> {
        Matrix::from_vec(self.matrix_rows(), self.matrix_cols(), v)
    }

    pub fn contains(&self, f: &Matrix) -> Result<bool> {
        if f.rows() != self.matrix_rows() || f.cols() != self.matrix_cols() {
            return input(format!(
                "{}x{} matrix tested against homs of shape {}x{}",
                f.rows(),
                f.cols(),
                self.matrix_rows(),
                self.matrix_cols()
            ));
        }
        self.carrier.member(&f.to_vec())
    }

    pub fn scheme(&self) -> &GeneratorScheme {
        &self.scheme
    }

    pub fn generators(&self) -> Vec<HomGenerator> {
        self.scheme
            .generators
            .iter()
            .map(|g| HomGenerator {
                matrix: self.to_matrix(&g.vector).expect("carrier vectors have matrix length"),
                inverted_primes: g.inverted_primes.clone(),
            })
            .collect()
    }

    /// Some nonzero hom, if there is one.
    pub fn nonzero_element(&self) -> Option<Matrix> {
        self.generators().into_iter().map(|g| g.matrix).find(|f| !f.is_zero())
    }
}

/// Orthogonal projection onto `QA`, the identity of `A` in this convention.
pub fn identity_of(a: &LocalizedGroup) -> Result<Matrix> {
    let n = a.ambient_rank();
    if a.is_zero() {
        return Ok(Matrix::zeros(n, n));
    }
    let b = a.span_basis();
    b.mul(&b.left_inverse()?)
}

/// `u vᵀ` flattened row-major.
fn outer(u: &[Rational], v: &[Rational]) -> RationalVector {
    u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect()
}

pub fn hom_group(a: &LocalizedGroup, b: &LocalizedGroup) -> Result<HomGroup> {
    let (n, m) = (a.ambient_rank(), b.ambient_rank());
    if a.is_zero() || b.is_zero() {
        return HomGroup::new(a.clone(), b.clone(), LocalizedGroup::zero(m * n));
    }
    // Work in coordinates: A' = C_A(A) ⊆ Q^ra and B' = C_B(B) ⊆ Q^rb are full rank, and
    // f = B_B X C_A with X(A') ⊆ B'.
    let (basis_a, basis_b) = (a.span_basis(), b.span_basis());
    let (coord_a, coord_b) = (basis_a.left_inverse()?, basis_b.left_inverse()?);
    let (ra, rb) = (basis_a.cols(), basis_b.cols());
    let a2 = a.image(&coord_a)?;
    let b2 = b.image(&coord_b)?;
    let primes: PrimeSet = a2.exceptional_primes().union(&b2.exceptional_primes()).copied().collect();
    let mut modules = Vec::new();
    for p in primes {
        let (la, lb) = (a2.local(p), b2.local(p));
        let nd = la.divisible_basis().cols();
        let g_inv = la.divisible_basis().hstack(la.lattice_basis())?.inverse()?;
        let (mut div, mut lat) = (Vec::new(), Vec::new());
        // X g_j must be divisible in B' for divisible columns and lie in B'_p for lattice ones.
        for j in 0..ra {
            let row = g_inv.row(j);
            for w in lb.divisible().vectors() {
                div.push(outer(&w, &row));
            }
            if j >= nd {
                for l in lb.lattice_basis().columns() {
                    lat.push(outer(&l, &row));
                }
            }
        }
        modules.push(LocalData::from_gens(p, rb * ra, &div, &lat)?);
    }
    let coords = LocalizedGroup::from_parts(rb * ra, Subspace::full(rb * ra), modules)?;
    let mut kron = Matrix::zeros(m * n, rb * ra);
    for i in 0..m {
        for j in 0..rb {
            let bij = basis_b.get(i, j);
            if bij.is_zero() {
                continue;
            }
            for k in 0..n {
                for l in 0..ra {
                    let c = coord_a.get(l, k);
                    if !c.is_zero() {
                        kron.set(i * n + k, j * ra + l, bij * c);
                    }
                }
            }
        }
    }
    HomGroup::new(a.clone(), b.clone(), coords.image(&kron)?)
}

pub fn end_group(a: &LocalizedGroup) -> Result<HomGroup> {
    hom_group(a, a)
}

pub fn is_hom_zero(a: &LocalizedGroup, b: &LocalizedGroup) -> Result<bool> {
    Ok(hom_group(a, b)?.is_zero())
}

/// Decides whether `End` is `Z[1/π]·Id`, with `π` the primes dividing the identity.
pub fn scalar_ring_recognize(e: &HomGroup) -> Result<ScalarRing> {
    let id = identity_of(e.domain())?.to_vec();
    let mut primes = PrimeSet::new();
    for p in e.carrier().exceptional_primes() {
        let scaled: RationalVector = id.iter().map(|x| x / Rational::from_integer(BigInt::from(p))).collect();
        if e.carrier().member(&scaled)? {
            primes.insert(p);
        }
    }
    if e.rank() != 1 || !e.carrier().member(&id)? {
        return Ok(ScalarRing { scalar: false, primes });
    }
    let scalars = LocalizedGroup::from_generators(&GeneratorScheme::new(id.len()).with(id, primes.iter().copied()))?;
    Ok(ScalarRing { scalar: &scalars == e.carrier(), primes })
}

/// Smallest `j >= 0` with `v / p^j` failing `test`, searched up to `limit`.
pub(crate) fn escape_exponent(
    v: &[Rational],
    p: u64,
    limit: i64,
    mut test: impl FnMut(&[Rational]) -> Result<bool>,
) -> Result<Option<i64>> {
    for j in 0..=limit {
        let c = ppow(p, -j);
        let w: RationalVector = v.iter().map(|x| x * &c).collect();
        if !test(&w)? {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

const ESCAPE_LIMIT: i64 = 256;

/// Whether every endomorphism of `G` maps `K` into `K`.
pub fn is_fully_invariant(g: &LocalizedGroup, k: &LocalizedGroup) -> Result<bool> {
    Ok(full_invariance_witness(g, k)?.is_none())
}

/// `None` if `K` is fully invariant in `G`, otherwise an endomorphism moving an element out of `K`.
pub fn full_invariance_witness(g: &LocalizedGroup, k: &LocalizedGroup) -> Result<Option<InvarianceWitness>> {
    if !k.is_subgroup_of(g)? {
        return input("the subgroup is not contained in the group");
    }
    if k.is_zero() {
        return Ok(None);
    }
    let n = g.ambient_rank();
    let e = end_group(g)?;
    let proj = identity_of(k)?;
    // f ↦ f Π_K, then f(K) ⊆ K iff f Π_K ∈ End(K).
    let mut rho = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for kk in 0..n {
            for l in 0..n {
                let c = proj.get(l, kk);
                if !c.is_zero() {
                    rho.set(i * n + kk, i * n + l, c.clone());
                }
            }
        }
    }
    let end_k = end_group(k)?;
    if e.carrier().image(&rho)?.is_subgroup_of(end_k.carrier())? {
        return Ok(None);
    }
    let restricted = |f: &[Rational]| -> Result<bool> { end_k.carrier().member(&rho.mul_vec(f)?) };
    for gen in e.generators() {
        let f = gen.matrix.to_vec();
        let mut candidates = Vec::new();
        if !restricted(&f)? {
            candidates.push(gen.matrix.clone());
        }
        for &p in &gen.inverted_primes {
            if let Some(j) = escape_exponent(&f, p, ESCAPE_LIMIT, &restricted)? {
                candidates.push(gen.matrix.scale(&ppow(p, -j)));
            }
        }
        for f in candidates {
            if let Some(w) = moved_element(&f, k)? {
                return Ok(Some(w));
            }
        }
    }
    Err(Error::Internal("full invariance fails but no generator witnesses it".into()))
}

fn moved_element(f: &Matrix, k: &LocalizedGroup) -> Result<Option<InvarianceWitness>> {
    let maps_in = |v: &[Rational]| -> Result<bool> { k.member(&f.mul_vec(v)?) };
    for gen in k.generators()?.generators {
        let mut elements = vec![gen.vector.clone()];
        for &s in &gen.inverted_primes {
            if let Some(i) = escape_exponent(&gen.vector, s, ESCAPE_LIMIT, maps_in)? {
                elements.push(gen.vector.iter().map(|x| x * ppow(s, -i)).collect());
            }
        }
        for v in elements {
            let image = f.mul_vec(&v)?;
            if !k.member(&image)? {
                return Ok(Some(InvarianceWitness { endomorphism: f.clone(), element: v, image }));
            }
        }
    }
    Ok(None)
}

/// Some nonzero element of the hom group, or `None` if `Hom(A,B) = 0`.
pub fn nonzero_hom(a: &LocalizedGroup, b: &LocalizedGroup) -> Result<Option<Matrix>> {
    Ok(hom_group(a, b)?.nonzero_element())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{q, qq};

    fn group(n: usize, gens: &[(&[i64], &[u64])]) -> LocalizedGroup {
        let mut s = GeneratorScheme::new(n);
        for (v, ps) in gens {
            s.push(v.iter().map(|&x| q(x)).collect(), ps.iter().copied());
        }
        LocalizedGroup::from_generators(&s).unwrap()
    }

    #[test]
    fn rank_one_homs() {
        let z = LocalizedGroup::free(1);
        let z2 = group(1, &[(&[1], &[2])]);
        assert_eq!(hom_group(&z, &z).unwrap().carrier(), &z);
        assert!(is_hom_zero(&z2, &z).unwrap());
        assert_eq!(hom_group(&z, &z2).unwrap().carrier(), &z2);
        assert!(!is_hom_zero(&z, &z).unwrap());
    }

    #[test]
    fn endomorphisms() {
        let z5 = group(1, &[(&[1], &[5])]);
        let r = scalar_ring_recognize(&end_group(&z5).unwrap()).unwrap();
        assert_eq!(r, ScalarRing { scalar: true, primes: [5].into() });
        let rigid = group(2, &[(&[1, 0], &[3]), (&[0, 1], &[5]), (&[1, 1], &[7])]);
        let e = end_group(&rigid).unwrap();
        assert_eq!(e.rank(), 1);
        assert_eq!(scalar_ring_recognize(&e).unwrap(), ScalarRing { scalar: true, primes: PrimeSet::new() });
        let e2 = end_group(&LocalizedGroup::free(2)).unwrap();
        assert_eq!(e2.rank(), 4);
        assert_eq!(e2.carrier(), &LocalizedGroup::free(4));
        assert!(!scalar_ring_recognize(&e2).unwrap().scalar);
    }

    #[test]
    fn lower_rank_domain() {
        // Z(1,1) inside Q^2: homs to Z^2 send (1,1) anywhere integral
        let line = group(2, &[(&[1, 1], &[])]);
        let h = hom_group(&line, &LocalizedGroup::free(2)).unwrap();
        assert_eq!(h.rank(), 2);
        let f = Matrix::from_rows(&[vec![qq(1, 2), qq(1, 2)], vec![q(0), q(0)]]).unwrap();
        assert!(h.contains(&f).unwrap());
        assert!(!h.contains(&Matrix::from_i64(&[&[1, 0], &[0, 0]])).unwrap());
        let e = end_group(&line).unwrap();
        assert!(e.contains(&identity_of(&line).unwrap()).unwrap());
        assert!(scalar_ring_recognize(&e).unwrap().scalar);
    }

    #[test]
    fn full_invariance() {
        let z2 = LocalizedGroup::free(2);
        let e1 = group(2, &[(&[1, 0], &[])]);
        let w = full_invariance_witness(&z2, &e1).unwrap().unwrap();
        assert!(z2.member(&w.image).unwrap());
        assert!(!e1.member(&w.image).unwrap());
        assert!(is_fully_invariant(&z2, &LocalizedGroup::zero(2)).unwrap());
        assert!(is_fully_invariant(&z2, &z2).unwrap());
        let g = group(2, &[(&[1, 0], &[]), (&[0, 1], &[]), (&[1, 1], &[3])]);
        assert!(is_fully_invariant(&g, &g.divisible_part(3).unwrap()).unwrap());
        assert!(is_fully_invariant(&g, &group(2, &[(&[1, 0], &[])])).is_ok());
        assert!(is_fully_invariant(&e1, &z2).is_err());
    }
}
