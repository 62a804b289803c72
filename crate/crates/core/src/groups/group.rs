use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::local::LocalData;
use super::scheme::GeneratorScheme;
use crate::error::{input, Error, Result};
use crate::exactlin::{
    common_denominator, factor_primes, ppow, hnf_basis, hnf_int, strip_primes, validate_prime, vec_is_zero,
    vec_scale, IntMatrix, Matrix, PrimeSet, Rational, RationalVector, Subspace,
};

/// A torsion-free abelian group of finite rank inside `Q^n`.
///
/// With `V` the rational span and `Λ = V ∩ Z^n`, the group is
/// `{ v ∈ V : v ∈ Λ_(p) for every prime p not listed, v ∈ M_p for each listed (p, M_p) }`.
/// `Λ` is kept in column Hermite form, the local modules in their canonical form, and a prime is
/// listed only when its module differs from `Λ_(p)`; so two groups are equal iff the structs are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalizedGroup {
    ambient: usize,
    span: Subspace,
    lattice: Matrix,
    locals: Vec<LocalData>,
}

/// Result of [`LocalizedGroup::compare`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    ProperSubset,
    ProperSuperset,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityEntry {
    pub prime: u64,
    pub is_divisible: bool,
    pub is_reduced: bool,
    pub divisible_part_rank: usize,
}

/// Output of [`LocalizedGroup::adjoin_localized_line`]; `pure` records whether `x` was q-pure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjunction {
    pub group: LocalizedGroup,
    pub pure: bool,
}

const ESCAPE_LIMIT: i64 = 256;

/// HNF basis of `V ∩ Z^n`.
fn saturate(span: &Subspace) -> Result<Matrix> {
    let n = span.ambient();
    match span.dim() {
        0 => return Ok(Matrix::zeros(n, 0)),
        d if d == n => return Ok(Matrix::identity(n)),
        _ => {}
    }
    // V is the kernel of the integer rows spanning its orthogonal complement.
    let rows: Vec<RationalVector> = span
        .complement()
        .vectors()
        .iter()
        .map(|c| {
            let d = Rational::from_integer(common_denominator(c));
            vec_scale(c, &d)
        })
        .collect();
    let c = IntMatrix::from_matrix(&Matrix::from_rows(&rows)?)?;
    let (_, u) = hnf_int(&c);
    let rank = rows.len();
    let kernel: Vec<RationalVector> = (rank..n)
        .map(|j| (0..n).map(|i| Rational::from_integer(u.get(i, j).clone())).collect())
        .collect();
    hnf_basis(n, &kernel)
}

/// Primes at which the Z-span of `gens` (columns, spanning `Λ'`'s space) differs from `Λ'`.
fn lattice_mismatch_primes(target: &Matrix, gens: &Matrix) -> Result<PrimeSet> {
    if target.cols() == 0 {
        return Ok(PrimeSet::new());
    }
    let coords = target.left_inverse()?.mul(gens)?;
    let d = common_denominator(coords.entries());
    let scaled = coords.scale(&Rational::from_integer(d.clone()));
    let h = hnf_basis(coords.rows(), &scaled.columns())?;
    if h.cols() != h.rows() {
        return Err(Error::Internal("generic lattice does not span the image".into()));
    }
    let det = (0..h.cols()).fold(Rational::one(), |acc, i| acc * h.get(i, i));
    let mut primes = factor_primes(&d)?;
    primes.extend(factor_primes(&det.to_integer())?);
    Ok(primes)
}

impl LocalizedGroup {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, span: Subspace::zero(ambient), lattice: Matrix::zeros(ambient, 0), locals: Vec::new() }
    }

    /// `Z^n`.
    pub fn free(ambient: usize) -> Self {
        Self { ambient, span: Subspace::full(ambient), lattice: Matrix::identity(ambient), locals: Vec::new() }
    }

    /// Assembles a canonical group from its span and local modules at finitely many primes.
    ///
    /// Every module must lie in `span`. If some module spans less, the group's span shrinks to
    /// the common part and every module is cut down to it.
    pub fn from_parts(ambient: usize, span: Subspace, modules: Vec<LocalData>) -> Result<Self> {
        let mut by_prime: BTreeMap<u64, LocalData> = BTreeMap::new();
        for m in modules {
            if m.ambient() != ambient {
                return input("local module has the wrong ambient rank");
            }
            match by_prime.remove(&m.prime()) {
                Some(prev) => by_prime.insert(m.prime(), prev.intersect(&m)?),
                None => by_prime.insert(m.prime(), m),
            };
        }
        let mut v = span.clone();
        for m in by_prime.values() {
            v = v.intersect(&m.span())?;
        }
        if v.dim() < span.dim() {
            for m in by_prime.values_mut() {
                *m = m.intersect_subspace(v.basis())?;
            }
        }
        let lattice = saturate(&v)?;
        let gens = lattice.columns();
        let mut locals = Vec::new();
        for (p, m) in by_prime {
            if m != LocalData::from_gens(p, ambient, &[], &gens)? {
                locals.push(m);
            }
        }
        Ok(Self { ambient, span: v, lattice, locals })
    }

    /// `Σ Z[1/π_i] v_i`.
    pub fn from_generators(scheme: &GeneratorScheme) -> Result<Self> {
        scheme.validate()?;
        let n = scheme.ambient;
        let gens: Vec<_> = scheme.generators.iter().filter(|g| !vec_is_zero(&g.vector)).collect();
        if gens.is_empty() {
            return Ok(Self::zero(n));
        }
        // Z[1/π_1] ⊕ ... ⊕ Z[1/π_s] in Q^s, pushed forward along the generator matrix.
        let s = gens.len();
        let primes: PrimeSet = gens.iter().flat_map(|g| g.inverted_primes.iter().copied()).collect();
        let unit = |i: usize| {
            let mut e = vec![Rational::zero(); s];
            e[i] = Rational::one();
            e
        };
        let mut modules = Vec::new();
        for &p in &primes {
            let (div, lat): (Vec<usize>, Vec<usize>) = (0..s).partition(|&i| gens[i].inverted_primes.contains(&p));
            modules.push(LocalData::from_gens(
                p,
                s,
                &div.into_iter().map(unit).collect::<Vec<_>>(),
                &lat.into_iter().map(unit).collect::<Vec<_>>(),
            )?);
        }
        let source = Self::from_parts(s, Subspace::full(s), modules)?;
        let cols: Vec<RationalVector> = gens.iter().map(|g| g.vector.clone()).collect();
        source.image(&Matrix::from_cols(n, &cols)?)
    }

    /// Rebuilds a group from explicit span, base lattice and local data, re-canonicalizing.
    pub fn from_local_form(
        ambient: usize,
        span: &[RationalVector],
        base_lattice: &[RationalVector],
        locals: Vec<LocalData>,
    ) -> Result<Self> {
        let v = Subspace::span(ambient, span)?;
        let lat_span = Subspace::span(ambient, base_lattice)?;
        if lat_span != v || base_lattice.len() != v.dim() {
            return input("base lattice must consist of independent vectors spanning the span basis");
        }
        for m in &locals {
            validate_prime(m.prime())?;
            if m.span() != v {
                return input(format!("local data at {} does not span the group's span", m.prime()));
            }
        }
        let mut scheme = GeneratorScheme::new(ambient);
        for b in base_lattice {
            scheme.push(b.clone(), []);
        }
        let generic = Self::from_generators(&scheme)?;
        let given: PrimeSet = locals.iter().map(LocalData::prime).collect();
        let mut modules = locals;
        for p in generic.exceptional_primes() {
            if !given.contains(&p) {
                modules.push(generic.local(p));
            }
        }
        Self::from_parts(ambient, v, modules)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.span.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn span_basis(&self) -> &Matrix {
        self.span.basis()
    }

    pub fn base_lattice(&self) -> &Matrix {
        &self.lattice
    }

    pub fn locals(&self) -> &[LocalData] {
        &self.locals
    }

    pub fn exceptional_primes(&self) -> PrimeSet {
        self.locals.iter().map(LocalData::prime).collect()
    }

    /// The localization `G_(p)`.
    pub fn local(&self, p: u64) -> LocalData {
        match self.locals.iter().find(|m| m.prime() == p) {
            Some(m) => m.clone(),
            None => LocalData::from_gens(p, self.ambient, &[], &self.lattice.columns())
                .expect("base lattice columns have ambient length"),
        }
    }

    fn check_vector(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.ambient {
            return input(format!("vector of length {} in a group of ambient rank {}", v.len(), self.ambient));
        }
        Ok(())
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return input(format!("ambient ranks differ ({} vs {})", self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn member(&self, v: &[Rational]) -> Result<bool> {
        self.check_vector(v)?;
        if !self.span.contains(v) {
            return Ok(false);
        }
        if !self.locals.iter().all(|m| m.contains(v)) {
            return Ok(false);
        }
        let rest = strip_primes(&common_denominator(v), self.exceptional_primes());
        Ok(rest.is_one())
    }

    /// Whether `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &Self) -> Result<bool> {
        self.check_same_ambient(other)?;
        if !other.span.contains_space(&self.span) {
            return Ok(false);
        }
        let primes: PrimeSet = self.exceptional_primes().union(&other.exceptional_primes()).copied().collect();
        Ok(primes.into_iter().all(|p| other.local(p).contains_module(&self.local(p))))
    }

    pub fn compare(&self, other: &Self) -> Result<Comparison> {
        self.check_same_ambient(other)?;
        if self == other {
            return Ok(Comparison::Equal);
        }
        Ok(match (self.is_subgroup_of(other)?, other.is_subgroup_of(self)?) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::ProperSubset,
            (false, true) => Comparison::ProperSuperset,
            (false, false) => Comparison::Incomparable,
        })
    }

    /// `T(G)` for a linear map `T: Q^n -> Q^m`.
    pub fn image(&self, t: &Matrix) -> Result<Self> {
        if t.cols() != self.ambient {
            return input(format!("map with {} columns applied to ambient rank {}", t.cols(), self.ambient));
        }
        let m = t.rows();
        let span = self.span.image(t)?;
        if span.dim() == 0 {
            return Ok(Self::zero(m));
        }
        let target = saturate(&span)?;
        let mut primes = lattice_mismatch_primes(&target, &t.mul(&self.lattice)?)?;
        primes.extend(self.exceptional_primes());
        let modules = primes.into_iter().map(|p| self.local(p).image(t)).collect::<Result<Vec<_>>>()?;
        Self::from_parts(m, span, modules)
    }

    /// `{v : T v ∈ G}`; only defined for injective `T`, since a kernel would be divisible by
    /// every prime.
    pub fn preimage(&self, t: &Matrix) -> Result<Self> {
        if t.rows() != self.ambient {
            return input(format!("map with {} rows pulled back from ambient rank {}", t.rows(), self.ambient));
        }
        if t.rank() < t.cols() {
            return Err(Error::NotFiniteType("the map has a kernel, whose points all lie in the preimage".into()));
        }
        if t.cols() == 0 {
            return Ok(Self::zero(0));
        }
        let range = Subspace::span(self.ambient, &t.columns())?;
        self.intersect_subspace(&range)?.image(&t.left_inverse()?)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let n = self.ambient + other.ambient;
        let span_basis = self.span.basis().block_diag(other.span.basis());
        let span = Subspace::span(n, &span_basis.columns())?;
        let primes: PrimeSet = self.exceptional_primes().union(&other.exceptional_primes()).copied().collect();
        let modules =
            primes.into_iter().map(|p| self.local(p).direct_sum(&other.local(p))).collect::<Result<Vec<_>>>()?;
        Self::from_parts(n, span, modules)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same_ambient(other)?;
        let n = self.ambient;
        let fold = Matrix::identity(n).hstack(&Matrix::identity(n))?;
        self.direct_sum(other)?.image(&fold)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same_ambient(other)?;
        let span = self.span.intersect(&other.span)?;
        let primes: PrimeSet = self.exceptional_primes().union(&other.exceptional_primes()).copied().collect();
        let modules = primes
            .into_iter()
            .map(|p| self.local(p).intersect(&other.local(p))?.intersect_subspace(span.basis()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(self.ambient, span, modules)
    }

    /// `G ∩ U` for a subspace `U`.
    pub fn intersect_subspace(&self, u: &Subspace) -> Result<Self> {
        if u.ambient() != self.ambient {
            return input("subspace lives in a different ambient space");
        }
        let span = self.span.intersect(u)?;
        let modules = self
            .locals
            .iter()
            .map(|m| m.intersect_subspace(span.basis()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(self.ambient, span, modules)
    }

    /// `⋂_i p^i G`, which for this class is `W_p ∩ G` with `W_p` the p-divisible directions.
    pub fn divisible_part(&self, p: u64) -> Result<Self> {
        validate_prime(p)?;
        let w = self.local(p).divisible().clone();
        if w.dim() == 0 {
            return Ok(Self::zero(self.ambient));
        }
        self.intersect_subspace(&w)
    }

    pub fn divisibility_report(&self, primes: &PrimeSet) -> Result<Vec<DivisibilityEntry>> {
        primes
            .iter()
            .map(|&p| {
                validate_prime(p)?;
                let w = self.local(p).divisible().dim();
                Ok(DivisibilityEntry {
                    prime: p,
                    is_divisible: w == self.rank(),
                    is_reduced: w == 0,
                    divisible_part_rank: w,
                })
            })
            .collect()
    }

    pub fn is_divisible_by(&self, p: u64) -> Result<bool> {
        validate_prime(p)?;
        Ok(self.local(p).divisible().dim() == self.rank())
    }

    pub fn is_reduced_at(&self, p: u64) -> Result<bool> {
        validate_prime(p)?;
        Ok(self.local(p).divisible().dim() == 0)
    }

    /// `x ∉ qG`, for `x ∈ G`.
    pub fn is_pure_element(&self, x: &[Rational], q: u64) -> Result<bool> {
        validate_prime(q)?;
        if !self.member(x)? {
            return input("element is not in the group");
        }
        let xq = vec_scale(x, &Rational::new(BigInt::one(), BigInt::from(q)));
        Ok(!self.member(&xq)?)
    }

    /// `⟨G ∪ {x/q^i : i ≥ 1}⟩`.
    pub fn adjoin_localized_line(&self, x: &[Rational], q: u64) -> Result<Adjunction> {
        validate_prime(q)?;
        self.check_vector(x)?;
        if vec_is_zero(x) {
            return input("cannot adjoin the zero vector");
        }
        let pure = self.is_pure_element(x, q)?;
        let line = Self::from_generators(&GeneratorScheme::new(self.ambient).with(x.to_vec(), [q]))?;
        Ok(Adjunction { group: self.sum(&line)?, pure })
    }

    /// `Z[1/π] ⊗ G` inside the span.
    pub fn localize(&self, primes: &PrimeSet) -> Result<Self> {
        let mut modules: Vec<LocalData> = Vec::new();
        for &p in primes {
            validate_prime(p)?;
            modules.push(LocalData::from_gens(p, self.ambient, &self.span.vectors(), &[])?);
        }
        modules.extend(self.locals.iter().filter(|m| !primes.contains(&m.prime())).cloned());
        Self::from_parts(self.ambient, self.span.clone(), modules)
    }

    /// `QK ∩ G`.
    pub fn purify(&self, k: &Self) -> Result<Self> {
        self.check_same_ambient(k)?;
        self.intersect_subspace(k.span())
    }

    /// `G/K` for a pure subgroup `K`, realized as the image of `G` under a projection with
    /// kernel `QK`. Returns the quotient and the projection.
    pub fn quotient_by_pure(&self, k: &Self) -> Result<(Self, Matrix)> {
        if !k.is_subgroup_of(self)? {
            return input("the kernel is not a subgroup of the group");
        }
        if &self.purify(k)? != k {
            return Err(Error::Purity("QK ∩ G is larger than K, so G/K has torsion".into()));
        }
        let p = projection_with_kernel(k.span());
        Ok((self.image(&p)?, p))
    }

    /// Integer multiple `c v ∈ G` with `c` coprime to `exclude` (for `v` in the span and, when
    /// `exclude` is set, in `G_(exclude)`).
    pub fn scale_into(&self, v: &[Rational], exclude: Option<u64>) -> Result<RationalVector> {
        self.check_vector(v)?;
        if !self.span.contains(v) {
            return input("vector is outside the group's span");
        }
        let mut skip = self.exceptional_primes();
        skip.extend(exclude);
        let mut c = Rational::from_integer(strip_primes(&common_denominator(v), skip));
        for m in &self.locals {
            if Some(m.prime()) == exclude {
                continue;
            }
            let e = m.min_exponent(v).ok_or_else(|| Error::Internal("vector left the local span".into()))?;
            c *= Rational::from_integer(num_traits::pow(BigInt::from(m.prime()), e as usize));
        }
        Ok(vec_scale(v, &c))
    }

    /// A generator scheme for `G`: the base lattice scaled into `G`, then per listed prime its
    /// divisible directions (tagged with that prime) and local lattice vectors.
    pub fn generators(&self) -> Result<GeneratorScheme> {
        let mut scheme = GeneratorScheme::new(self.ambient);
        for b in self.lattice.columns() {
            scheme.push(self.scale_into(&b, None)?, []);
        }
        for m in &self.locals {
            let p = m.prime();
            for w in m.divisible().vectors() {
                scheme.push(self.scale_into(&w, Some(p))?, [p]);
            }
            for l in m.lattice_basis().columns() {
                scheme.push(self.scale_into(&l, Some(p))?, []);
            }
        }
        Ok(scheme)
    }

    /// An element of `self` outside `other`, if `self ⊄ other`: a generator, or a generator
    /// divided by a power of one of its primes.
    pub fn element_outside(&self, other: &Self) -> Result<Option<RationalVector>> {
        self.check_same_ambient(other)?;
        for g in self.generators()?.generators {
            if !other.member(&g.vector)? {
                return Ok(Some(g.vector));
            }
            for &p in &g.inverted_primes {
                for j in 1..=ESCAPE_LIMIT {
                    let w = vec_scale(&g.vector, &ppow(p, -j));
                    if !other.member(&w)? {
                        return Ok(Some(w));
                    }
                }
            }
        }
        Ok(None)
    }

    /// A nonzero element of `G` in the direction of `v`.
    pub fn element_along(&self, v: &[Rational]) -> Result<RationalVector> {
        self.scale_into(v, None)
    }
}

/// Projection `Q^n -> Q^(n-k)` with kernel `U`: subtract the `U`-component read off at the
/// pivot rows of its echelon basis, keep the remaining coordinates.
pub(crate) fn projection_with_kernel(u: &Subspace) -> Matrix {
    let n = u.ambient();
    let pivots = u.pivots();
    let keep: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let mut p = Matrix::zeros(keep.len(), n);
    for (r, &i) in keep.iter().enumerate() {
        p.set(r, i, Rational::one());
        for (j, &pc) in pivots.iter().enumerate() {
            let x = u.basis().get(i, j);
            if !x.is_zero() {
                p.set(r, pc, -x.clone());
            }
        }
    }
    p
}
