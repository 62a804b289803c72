use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::exactlin::{is_prime, validate_prime, Matrix, PrimeSet, Rational, RationalVector};
use crate::format::opt_vector;
use crate::groups::{GeneratorScheme, LocalizedGroup};
use crate::homs::{end_group, scalar_ring_recognize};

use super::certificate::{Certificate, Witness};
use super::decide::{decide_instance, CoverInstance};
use super::lemmas::{certify_cc7_instance, certify_cor_cc6, certify_lemma_cc9, report_lemma_cc8};

/// `Z[1/π] ⊗ (Σ Z[1/p_i] e_i + Z[1/p_0](e_1 + ... + e_k))` with `spine = [p_1, ..., p_k, p_0]`.
///
/// The endomorphism ring is checked before returning: `Z[1/π]·Id` for `k >= 2`, and
/// `Z[1/(spine ∪ π)]` for `k = 1`.
pub fn rigid_group(k: usize, spine: &[u64], pi: &PrimeSet) -> Result<LocalizedGroup> {
    if k == 0 {
        return input("rigid groups need rank at least 1");
    }
    if spine.len() != k + 1 {
        return input(format!("rank {k} needs {} spine primes, got {}", k + 1, spine.len()));
    }
    let distinct: PrimeSet = spine.iter().copied().collect();
    if distinct.len() != spine.len() {
        return input("spine primes must be distinct");
    }
    for &p in spine.iter().chain(pi) {
        validate_prime(p)?;
    }
    if !distinct.is_disjoint(pi) {
        return input("spine primes must be disjoint from the localizing primes");
    }
    let mut scheme = GeneratorScheme::new(k);
    for (i, &p) in spine[..k].iter().enumerate() {
        let mut e = vec![Rational::zero(); k];
        e[i] = Rational::one();
        scheme.push(e, [p]);
    }
    scheme.push(vec![Rational::one(); k], [spine[k]]);
    let g = LocalizedGroup::from_generators(&scheme)?.localize(pi)?;

    let expected: PrimeSet = if k == 1 { distinct.union(pi).copied().collect() } else { pi.clone() };
    let ring = scalar_ring_recognize(&end_group(&g)?)?;
    if !ring.scalar || ring.primes != expected {
        return Err(Error::Construction(format!(
            "endomorphism ring check failed: scalar={}, primes={:?}, expected {:?}",
            ring.scalar, ring.primes, expected
        )));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CC10Config {
    pub q_l: u64,
    pub q_k: u64,
    pub q: u64,
    pub l_rigidity_primes: Vec<u64>,
    pub k_rigidity_primes: Vec<u64>,
    pub kernel_rank: usize,
    /// Defaults to the first basis vector of `L`.
    #[serde(with = "opt_vector", skip_serializing_if = "Option::is_none")]
    pub x_l: Option<RationalVector>,
    /// Defaults to the first basis vector of `K`.
    #[serde(with = "opt_vector", skip_serializing_if = "Option::is_none")]
    pub x_k: Option<RationalVector>,
}

impl Default for CC10Config {
    fn default() -> Self {
        Self {
            q_l: 2,
            q_k: 3,
            q: 5,
            l_rigidity_primes: vec![7, 11, 13],
            k_rigidity_primes: vec![17, 19, 23],
            kernel_rank: 1,
            x_l: None,
            x_k: None,
        }
    }
}

impl CC10Config {
    pub fn with_kernel_rank(mut self, k: usize) -> Self {
        self.kernel_rank = k;
        self
    }

    pub fn marked_primes(&self) -> [u64; 3] {
        [self.q_l, self.q_k, self.q]
    }

    pub fn validate(&self) -> Result<()> {
        if self.kernel_rank == 0 {
            return input("kernel rank must be at least 1");
        }
        if self.l_rigidity_primes.len() < 2 {
            return input("L needs at least two rigidity primes");
        }
        let all: Vec<u64> = self
            .marked_primes()
            .into_iter()
            .chain(self.l_rigidity_primes.iter().copied())
            .chain(self.k_rigidity_primes.iter().copied())
            .collect();
        for &p in &all {
            validate_prime(p)?;
            if !is_prime(p) {
                return input(format!("{p} is not prime"));
            }
        }
        if all.iter().collect::<BTreeSet<_>>().len() != all.len() {
            return input("q_L, q_K, q and the rigidity primes must all be distinct");
        }
        if let Some(x) = &self.x_l {
            if x.len() != self.l_rigidity_primes.len() - 1 {
                return input("x_L has the wrong length for L");
            }
        }
        if let Some(x) = &self.x_k {
            if x.len() != self.kernel_rank {
                return input("x_K has the wrong length for K");
            }
        }
        Ok(())
    }

    /// The first `k + 1` K-rigidity primes, continued by the smallest unused primes when the
    /// configured list is too short.
    pub fn k_spine(&self) -> Vec<u64> {
        let need = self.kernel_rank + 1;
        let mut spine: Vec<u64> = self.k_rigidity_primes.iter().copied().take(need).collect();
        let mut used: PrimeSet = self.marked_primes().into_iter().chain(self.l_rigidity_primes.iter().copied()).collect();
        used.extend(self.k_rigidity_primes.iter().copied());
        let mut p = self.k_rigidity_primes.iter().copied().max().unwrap_or(2);
        while spine.len() < need {
            p += 1;
            if is_prime(p) && !used.contains(&p) {
                spine.push(p);
                used.insert(p);
            }
        }
        spine
    }

    /// `Z[1/q_L] ⊗` the rigid group on the L-rigidity primes.
    pub fn default_l(&self) -> Result<LocalizedGroup> {
        rigid_group(self.l_rigidity_primes.len() - 1, &self.l_rigidity_primes, &[self.q_l].into())
    }

    /// `Z[1/q_K]` for rank 1, otherwise `Z[1/q_K] ⊗` a rigid group on the K spine.
    pub fn default_k(&self) -> Result<LocalizedGroup> {
        if self.kernel_rank == 1 {
            return LocalizedGroup::from_generators(&GeneratorScheme::new(1).with(vec![Rational::one()], [self.q_k]));
        }
        rigid_group(self.kernel_rank, &self.k_spine(), &[self.q_k].into())
    }

    fn unit(n: usize) -> RationalVector {
        let mut e = vec![Rational::zero(); n];
        e[0] = Rational::one();
        e
    }

    pub fn x_l_for(&self, l: &LocalizedGroup) -> RationalVector {
        self.x_l.clone().unwrap_or_else(|| Self::unit(l.ambient_rank()))
    }

    pub fn x_k_for(&self, k: &LocalizedGroup) -> RationalVector {
        self.x_k.clone().unwrap_or_else(|| Self::unit(k.ambient_rank()))
    }
}

/// Everything built for one run of the construction, in the ambient space of `K ⊕ L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CC10Instance {
    pub cover: CoverInstance,
    /// `L` embedded in the second block.
    pub l: LocalizedGroup,
    /// `H = (x_K - x_L) Z[1/q]`.
    pub h: LocalizedGroup,
    /// `M̂ = L + H`.
    pub mhat: LocalizedGroup,
    pub x: RationalVector,
    pub x_k: RationalVector,
}

fn embed(v: &[Rational], offset: usize, n: usize) -> RationalVector {
    let mut out = vec![Rational::zero(); n];
    out[offset..offset + v.len()].clone_from_slice(v);
    out
}

fn inclusion(rows: usize, offset: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for j in 0..cols {
        m.set(offset + j, j, Rational::one());
    }
    m
}

/// `G = (K ⊕ L) ⊕_{x_K - x_L} Z[1/q]` with its checkpoints.
pub fn build_prop_cc10(cfg: &CC10Config, k: &LocalizedGroup, l: &LocalizedGroup) -> Result<(CC10Instance, Certificate)> {
    cfg.validate()?;
    let (x_k, x_l) = (cfg.x_k_for(k), cfg.x_l_for(l));
    if x_k.len() != k.ambient_rank() || x_l.len() != l.ambient_rank() {
        return input("marked elements have the wrong length");
    }
    if x_k.iter().all(Zero::is_zero) || !k.member(&x_k)? {
        return input("x_K must be a nonzero element of K");
    }
    if x_l.iter().all(Zero::is_zero) || !l.member(&x_l)? {
        return input("x_L must be a nonzero element of L");
    }
    let (nk, nl) = (k.ambient_rank(), l.ambient_rank());
    let n = nk + nl;
    let mut cert = Certificate::new("prop_cc10");

    let k_ok = k.is_divisible_by(cfg.q_k)? && k.is_reduced_at(cfg.q_l)? && k.is_reduced_at(cfg.q)?;
    cert.push(
        "cc10.inputs.k",
        k_ok,
        format!("K is {}-divisible and reduced at {} and {}: {k_ok}", cfg.q_k, cfg.q_l, cfg.q),
        None,
    );
    let l_ok = l.is_divisible_by(cfg.q_l)? && l.is_reduced_at(cfg.q_k)? && l.is_reduced_at(cfg.q)?;
    cert.push(
        "cc10.inputs.l",
        l_ok,
        format!("L is {}-divisible and reduced at {} and {}: {l_ok}", cfg.q_l, cfg.q_k, cfg.q),
        None,
    );

    let kk = k.image(&inclusion(n, 0, nk))?;
    let ll = l.image(&inclusion(n, nk, nl))?;
    let xk = embed(&x_k, 0, n);
    let xl = embed(&x_l, nk, n);
    let x: RationalVector = xk.iter().zip(&xl).map(|(a, b)| a - b).collect();
    let g = k.direct_sum(l)?.adjoin_localized_line(&x, cfg.q)?.group;
    let h = LocalizedGroup::from_generators(&GeneratorScheme::new(n).with(x.clone(), [cfg.q]))?;
    let mhat = ll.sum(&h)?;
    let cover = CoverInstance::new(&g, &kk)?;

    let sum = kk.sum(&mhat)?;
    let witness = sum.element_outside(&g)?.or(g.element_outside(&sum)?).map(|vector| Witness::Element { vector });
    cert.push("cc10.g_eq_k_plus_mhat", witness.is_none(), "G = K + M̂", witness);

    let meet = kk.intersect(&mhat)?;
    let line = LocalizedGroup::from_generators(&GeneratorScheme::new(n).with(xk.clone(), []))?;
    let witness = meet.element_outside(&line)?.or(line.element_outside(&meet)?).map(|vector| Witness::Element { vector });
    cert.push("cc10.I", witness.is_none(), format!("K ∩ M̂ has rank {} and is ⟨x_K⟩: {}", meet.rank(), witness.is_none()), witness);

    let lh = ll.intersect(&h)?;
    let witness = lh.generators()?.generators.into_iter().next().map(|g| Witness::Element { vector: g.vector });
    cert.push("cc10.l_cap_h", lh.is_zero(), format!("L ∩ H has rank {}", lh.rank()), witness);

    let hkm = crate::homs::hom_group(&kk, &cover.m)?;
    let witness = hkm.nonzero_element().map(|matrix| Witness::Hom { matrix });
    cert.push("cc10.III", witness.is_none(), format!("Hom(K, M) has rank {}", hkm.rank()), witness);

    let dp = g.divisible_part(cfg.q_k)?;
    let inv = crate::homs::full_invariance_witness(&g, &kk)?;
    let ok = dp == kk && inv.is_none();
    let witness = inv.map(|w| Witness::MovedElement { endomorphism: w.endomorphism, element: w.element, image: w.image });
    cert.push(
        "cc10.IV",
        ok,
        format!("⋂ {}^i G equals K: {}; K fully invariant: {}", cfg.q_k, dp == kk, witness.is_none()),
        witness,
    );

    let hmk = crate::homs::hom_group(&mhat, &kk)?;
    let witness = hmk.nonzero_element().map(|matrix| Witness::Hom { matrix });
    cert.push("cc10.V", witness.is_none(), format!("Hom(M̂, K) has rank {}", hmk.rank()), witness);

    let (_, decision) = decide_instance(&cover)?;
    cert.attach(decision);
    cert.attach(certify_lemma_cc9(&g, &kk, &mhat, &[cfg.q_k].into())?);
    cert.attach(certify_cor_cc6(l, &x_l, cfg.q_l, cfg.q_k, cfg.q)?);
    cert.attach(report_lemma_cc8(l, &x_l, cfg.q_l, cfg.q_k, cfg.q)?);
    cert.attach(certify_cc7_instance(&cover)?);

    Ok((CC10Instance { cover, l: ll, h, mhat, x, x_k: xk }, cert))
}

/// One kernel rank of [`demo_theorem1`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Run {
    pub kernel_rank: usize,
    pub instance: CC10Instance,
    pub certificate: Certificate,
}

/// Runs the construction for kernel ranks `1..=k_max` with a fixed `L` and checks that the
/// resulting `M` does not depend on `K`.
pub fn demo_theorem1(base: &CC10Config, k_max: usize) -> Result<(Certificate, Vec<Theorem1Run>)> {
    if k_max == 0 {
        return input("k_max must be at least 1");
    }
    base.validate()?;
    let l = base.default_l()?;
    let runs: Vec<Theorem1Run> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let mut cfg = base.clone().with_kernel_rank(k);
            if cfg.x_k.as_ref().is_some_and(|x| x.len() != k) {
                cfg.x_k = None;
            }
            let kernel = cfg.default_k()?;
            let (instance, certificate) = build_prop_cc10(&cfg, &kernel, &l)?;
            Ok(Theorem1Run { kernel_rank: k, instance, certificate })
        })
        .collect::<Result<_>>()?;

    let mut cert = Certificate::new("theorem1");
    let first = &runs[0].instance.cover.m;
    let witness = runs.iter().find(|r| &r.instance.cover.m != first).map(|r| Witness::Group { group: r.instance.cover.m.clone() });
    cert.push(
        "thm.m_independent",
        witness.is_none(),
        format!("M compared across kernel ranks 1..={k_max}"),
        witness,
    );
    for r in &runs {
        let got = r.instance.cover.kernel_rank();
        cert.push(format!("thm.kernel_rank.k{}", r.kernel_rank), got == r.kernel_rank, format!("rank K = {got}"), None);
    }
    for r in &runs {
        let mut c = r.certificate.clone();
        c.subject = format!("prop_cc10.k{}", r.kernel_rank);
        cert.attach(c);
    }
    Ok((cert, runs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rigid_groups() {
        let g = rigid_group(2, &[7, 11, 13], &PrimeSet::new()).unwrap();
        assert_eq!(g.rank(), 2);
        let g2 = rigid_group(2, &[7, 11, 13], &[2].into()).unwrap();
        assert!(g2.is_divisible_by(2).unwrap());
        assert!(rigid_group(1, &[7, 11], &PrimeSet::new()).is_ok());
        assert!(rigid_group(2, &[7, 7, 13], &PrimeSet::new()).is_err());
        assert!(rigid_group(2, &[7, 11, 13], &[7].into()).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(CC10Config::default().validate().is_ok());
        let cfg = CC10Config { q_k: 17, ..CC10Config::default() };
        assert!(cfg.validate().is_err());
        assert_eq!(CC10Config::default().with_kernel_rank(3).k_spine(), vec![17, 19, 23, 29]);
        assert_eq!(CC10Config::default().with_kernel_rank(2).k_spine(), vec![17, 19, 23]);
    }
}
