//! Free kernels: the support construction of a direct summand, sections of a projection, and a
//! step-by-step trace of the decomposition `G = (G₁ + K₂) ⊕ F` for covers with free kernel.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::covers::{decide_instance, Certificate, CoverInstance, Witness};
use crate::error::{input, Error, Result};
use crate::exactlin::{hnf_basis, ppow, solve_integer, solve_rational, Matrix, PrimeSet, Rational, RationalVector, Subspace};
use crate::groups::{GeneratorScheme, LocalizedGroup};
use crate::homs::hom_group;

/// The Z-span of independent columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroupWithBasis {
    basis: Matrix,
}

impl FreeGroupWithBasis {
    pub fn new(basis: Matrix) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return input("basis columns are dependent");
        }
        Ok(Self { basis })
    }

    pub fn standard(n: usize) -> Self {
        Self { basis: Matrix::identity(n) }
    }

    /// The free group `G`, if `G` has no divisible directions at any prime.
    pub fn from_group(g: &LocalizedGroup) -> Result<Option<Self>> {
        if g.locals().iter().any(|m| m.divisible().dim() > 0) {
            return Ok(None);
        }
        let gens: Vec<RationalVector> = g.generators()?.generators.into_iter().map(|x| x.vector).collect();
        Ok(Some(Self::new(hnf_basis(g.ambient_rank(), &gens)?)?))
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Integer coordinates of `v`, or `None` if `v` is not in the group.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.ambient() {
            return input("vector has the wrong length");
        }
        let sol = solve_rational(&self.basis, v)?;
        Ok(sol.particular.and_then(|x| x.iter().all(|c| c.is_integer()).then(|| x.iter().map(|c| c.to_integer()).collect())))
    }

    pub fn group(&self) -> Result<LocalizedGroup> {
        let mut s = GeneratorScheme::new(self.ambient());
        for c in self.basis.columns() {
            s.push(c, []);
        }
        LocalizedGroup::from_generators(&s)
    }
}

/// `K = K₂ ⊕ F`, both spanned by subsets of the basis of `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandSplit {
    #[serde(serialize_with = "crate::format::ser_matrix")]
    pub k2_basis: Matrix,
    #[serde(serialize_with = "crate::format::ser_matrix")]
    pub f_basis: Matrix,
    /// Positions in the basis of `K` of the columns of `k2_basis`.
    pub k2_indices: Vec<usize>,
    pub f_indices: Vec<usize>,
}

impl SummandSplit {
    /// Determinant of the columns of `[K₂ | F]` written in the basis of `K`.
    pub fn combined_determinant(&self, k: &FreeGroupWithBasis) -> Result<Rational> {
        let combined = self.k2_basis.hstack(&self.f_basis)?;
        let coords: Vec<RationalVector> = combined
            .columns()
            .iter()
            .map(|c| solve_rational(k.basis(), c).map(|s| s.particular.unwrap_or_default()))
            .collect::<Result<_>>()?;
        if coords.iter().any(|c| c.len() != k.rank()) {
            return Err(Error::Internal("split column outside K".into()));
        }
        Matrix::from_cols(k.rank(), &coords)?.det()
    }
}

/// `K₂` is spanned by every basis vector in the support of some generator of `K₁`, `F` by the rest.
pub fn separable_summand(k: &FreeGroupWithBasis, k1_gens: &[RationalVector]) -> Result<SummandSplit> {
    let mut support = vec![false; k.rank()];
    for (i, v) in k1_gens.iter().enumerate() {
        let coords = k.coordinates(v)?.ok_or_else(|| Error::Input(format!("generator {i} is not in K")))?;
        for (j, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                support[j] = true;
            }
        }
    }
    let (k2_indices, f_indices): (Vec<usize>, Vec<usize>) = (0..k.rank()).partition(|&j| support[j]);
    Ok(SummandSplit {
        k2_basis: k.basis().select_cols(&k2_indices),
        f_basis: k.basis().select_cols(&f_indices),
        k2_indices,
        f_indices,
    })
}

const MAX_DEPTH: i64 = 64;

/// For each generator `(m, π)` of `M`, an element `g ∈ G` with `P g = m` such that `Z[1/π] g ⊆ G`.
pub fn section_subgroup(g: &LocalizedGroup, projection: &Matrix, m_gens: &GeneratorScheme) -> Result<GeneratorScheme> {
    if projection.cols() != g.ambient_rank() || projection.rows() != m_gens.ambient {
        return input("projection shape does not match G and M");
    }
    m_gens.validate()?;
    let mut out = GeneratorScheme::new(g.ambient_rank());
    for gen in &m_gens.generators {
        let m = &gen.vector;
        if m.iter().all(Zero::is_zero) {
            out.push(vec![Rational::zero(); g.ambient_rank()], gen.inverted_primes.iter().copied());
            continue;
        }
        // elements of G over the line Qm that are divisible by every prime of the tag
        let mut domain = g.clone();
        for &p in &gen.inverted_primes {
            domain = domain.intersect(&g.divisible_part(p)?)?;
        }
        let over_line = pullback_of_line(projection, m)?;
        domain = domain.intersect_subspace(&over_line)?;
        if !domain.image(projection)?.member(m)? {
            return Err(Error::Surjectivity(format!(
                "no element of G with the required divisibility maps to ({})",
                m.iter().map(crate::exactlin::fmt_rational).collect::<Vec<_>>().join(", ")
            )));
        }
        let lift = lift_in(&domain, projection, m)?;
        out.push(lift, gen.inverted_primes.iter().copied());
    }
    Ok(out)
}

/// `P⁻¹(Qm)` as a subspace.
fn pullback_of_line(projection: &Matrix, m: &[Rational]) -> Result<Subspace> {
    let n = projection.cols();
    let mut vectors: Vec<RationalVector> = projection.kernel();
    if let Some(x) = solve_rational(projection, m)?.particular {
        vectors.push(x);
    }
    Subspace::span(n, &vectors)
}

/// Some `g ∈ D` with `P g = m`: integer combinations of the generators of `D` divided by
/// growing powers of their primes.
fn lift_in(d: &LocalizedGroup, projection: &Matrix, m: &[Rational]) -> Result<RationalVector> {
    let gens = d.generators()?.generators;
    for depth in 0..=MAX_DEPTH {
        let expanded: Vec<RationalVector> = gens
            .iter()
            .map(|x| {
                let c = x.inverted_primes.iter().fold(Rational::one(), |acc, &p| acc * ppow(p, -depth));
                x.vector.iter().map(|v| v * &c).collect()
            })
            .collect();
        let images: Vec<RationalVector> = expanded.iter().map(|v| projection.mul_vec(v)).collect::<Result<_>>()?;
        if let Some(coeffs) = solve_integer(&Matrix::from_cols(projection.rows(), &images)?, m)? {
            let mut g = vec![Rational::zero(); d.ambient_rank()];
            for (c, v) in coeffs.iter().zip(&expanded) {
                if c.is_zero() {
                    continue;
                }
                let c = Rational::from_integer(c.clone());
                for (gi, vi) in g.iter_mut().zip(v) {
                    *gi += &c * vi;
                }
            }
            return Ok(g);
        }
    }
    Err(Error::Internal("lift search exceeded its depth".into()))
}

/// The objects produced along the trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bb4Trace {
    pub certificate: Certificate,
    pub section: GeneratorScheme,
    pub g1: LocalizedGroup,
    pub k1: LocalizedGroup,
    pub split: SummandSplit,
    pub k2: LocalizedGroup,
    pub f: LocalizedGroup,
}

/// Runs the decomposition argument on a cellular cover with free kernel.
pub fn trace_prop_bb4(cover: &CoverInstance) -> Result<Bb4Trace> {
    let k_basis = FreeGroupWithBasis::from_group(&cover.k)?
        .ok_or_else(|| Error::Input("the kernel is not free".into()))?;
    let (cellular, _) = decide_instance(cover)?;
    if !cellular {
        return Err(Error::Cover("G -> G/K is not a cellular cover".into()));
    }
    let mut cert = Certificate::new("prop_bb4");
    cert.push("bb4.k_free", true, format!("K is free of rank {}", k_basis.rank()), None);

    let section = section_subgroup(&cover.g, &cover.projection, &cover.m.generators()?)?;
    let g1 = LocalizedGroup::from_generators(&section)?;
    let hits = g1.image(&cover.projection)? == cover.m;
    cert.push("bb4.section", hits, format!("c(G₁) = M: {hits}; rank G₁ = {}", g1.rank()), None);

    let k1 = g1.intersect(&cover.k)?;
    let k1_gens: Vec<RationalVector> = k1.generators()?.generators.into_iter().map(|x| x.vector).collect();
    let split = separable_summand(&k_basis, &k1_gens)?;
    let det = split.combined_determinant(&k_basis)?;
    cert.push(
        "bb4.split",
        det.abs().is_one(),
        format!("K = K₂ ⊕ F with rank K₂ = {}, rank F = {}", split.k2_basis.cols(), split.f_basis.cols()),
        None,
    );
    let k2 = FreeGroupWithBasis { basis: split.k2_basis.clone() }.group()?;
    let f = FreeGroupWithBasis { basis: split.f_basis.clone() }.group()?;
    let k1_in_k2 = k1.is_subgroup_of(&k2)?;
    cert.push("bb4.k1_in_k2", k1_in_k2, "K₁ ⊆ K₂", None);

    let g1k2 = g1.sum(&k2)?;
    let whole = g1k2.sum(&f)? == cover.g;
    let meet = g1k2.intersect(&f)?;
    cert.push("bb4.decomposition", whole && meet.is_zero(), format!("G = (G₁ + K₂) + F: {whole}; (G₁ + K₂) ∩ F has rank {}", meet.rank()), None);

    let h = hom_group(&cover.g, &cover.k)?;
    let witness = h.nonzero_element().map(|matrix| Witness::Hom { matrix });
    cert.push("bb4.hom_g_k_zero", witness.is_none(), format!("Hom(G, K) has rank {}", h.rank()), witness);
    cert.push("bb4.f_zero", f.is_zero(), format!("rank F = {}", f.rank()), None);

    let bound = cover.m.rank() + k2.rank();
    cert.push(
        "bb4.rank_accounting",
        cover.g.rank() <= bound,
        format!("rank G = {} ≤ rank M + rank K₂ = {bound}", cover.g.rank()),
        None,
    );
    Ok(Bb4Trace { certificate: cert, section, g1, k1, split, k2, f })
}

/// Outcome of [`search_free_kernel_covers`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeKernelSearch {
    pub instances_checked: usize,
    pub cellular_with_free_kernel: Vec<CoverInstance>,
}

/// Enumerates small pairs `(G, K)` with `K ≠ 0` free and pure, and records every one for which
/// `G -> G/K` is cellular. `G` runs over `Z^n` plus up to two lines `Z[1/p]w`.
pub fn search_free_kernel_covers(max_rank: usize, primes: &PrimeSet, limit: usize) -> Result<FreeKernelSearch> {
    let mut checked = 0;
    let mut found = Vec::new();
    for n in 2..=max_rank.max(2) {
        let directions = small_directions(n);
        let mut groups = vec![LocalizedGroup::free(n)];
        for (i, w) in directions.iter().enumerate() {
            for &p in primes {
                let one = GeneratorScheme::new(n).with(w.clone(), [p]);
                groups.push(LocalizedGroup::free(n).sum(&LocalizedGroup::from_generators(&one)?)?);
                for w2 in &directions[i + 1..] {
                    for &p2 in primes {
                        let two = one.clone().with(w2.clone(), [p2]);
                        groups.push(LocalizedGroup::free(n).sum(&LocalizedGroup::from_generators(&two)?)?);
                    }
                }
            }
        }
        for g in &groups {
            for u in &directions {
                if checked >= limit {
                    return Ok(FreeKernelSearch { instances_checked: checked, cellular_with_free_kernel: found });
                }
                let k = g.intersect_subspace(&Subspace::span(n, &[u.clone()])?)?;
                if FreeGroupWithBasis::from_group(&k)?.is_none() {
                    continue;
                }
                checked += 1;
                let cover = CoverInstance::new(g, &k)?;
                if decide_instance(&cover)?.0 {
                    found.push(cover);
                }
            }
        }
    }
    Ok(FreeKernelSearch { instances_checked: checked, cellular_with_free_kernel: found })
}

/// Nonzero vectors with entries in {-1, 0, 1} whose first nonzero entry is 1.
fn small_directions(n: usize) -> Vec<RationalVector> {
    let mut out = Vec::new();
    for code in 1..3usize.pow(n as u32) {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v.into_iter().map(|x| Rational::from_integer(x.into())).collect());
        }
    }
    out
}
