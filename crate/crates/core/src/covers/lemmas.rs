use crate::error::{input, Result};
use crate::exactlin::{vec_scale, PrimeSet, Rational, RationalVector};
use crate::groups::{GeneratorScheme, LocalizedGroup};
use crate::homs::{end_group, full_invariance_witness, hom_group, identity_of, scalar_ring_recognize, HomGroup};

use super::certificate::{Certificate, Witness};
use super::decide::{describe_ring, require_subgroup, CoverInstance};

/// `Z[1/π]·Id` inside the carrier's space.
fn scalar_group(e: &HomGroup, primes: &PrimeSet) -> Result<LocalizedGroup> {
    let id = identity_of(e.domain())?.to_vec();
    LocalizedGroup::from_generators(&GeneratorScheme::new(id.len()).with(id, primes.iter().copied()))
}

/// An endomorphism outside `Z[1/π]·Id`, or an element of `Z[1/π]·Id` that is not an
/// endomorphism, if the two differ.
fn ring_mismatch(e: &HomGroup, primes: &PrimeSet) -> Result<Option<Witness>> {
    let target = scalar_group(e, primes)?;
    let v = match e.carrier().element_outside(&target)? {
        Some(v) => Some(v),
        None => target.element_outside(e.carrier())?,
    };
    v.map(|v| Ok(Witness::Hom { matrix: e.to_matrix(&v)? })).transpose()
}

/// Pushes the condition `End(A) = Z·Id`.
fn push_end_is_integers(cert: &mut Certificate, label: &str, name: &str, a: &LocalizedGroup) -> Result<()> {
    let e = end_group(a)?;
    let ring = scalar_ring_recognize(&e)?;
    let ok = ring.scalar && ring.primes.is_empty();
    let witness = if ok { None } else { ring_mismatch(&e, &PrimeSet::new())? };
    cert.push(label, ok, format!("End({name}) = {}", describe_ring(&e)?), witness);
    Ok(())
}

fn push_fully_invariant(cert: &mut Certificate, label: &str, g: &LocalizedGroup, k: &LocalizedGroup) -> Result<()> {
    let w = full_invariance_witness(g, k)?;
    let detail = if w.is_none() { "every endomorphism of G maps K into K" } else { "an endomorphism of G moves K" };
    let witness = w.map(|w| Witness::MovedElement { endomorphism: w.endomorphism, element: w.element, image: w.image });
    cert.push(label, witness.is_none(), detail, witness);
    Ok(())
}

fn push_hom_zero(cert: &mut Certificate, label: &str, names: (&str, &str), a: &LocalizedGroup, b: &LocalizedGroup) -> Result<()> {
    let h = hom_group(a, b)?;
    let witness = h.nonzero_element().map(|matrix| Witness::Hom { matrix });
    cert.push(label, witness.is_none(), format!("Hom({}, {}) has rank {}", names.0, names.1, h.rank()), witness);
    Ok(())
}

/// Checks the three sufficient conditions for `G -> G/K` to be a cellular cover.
pub fn certify_lemma_cc7(g: &LocalizedGroup, k: &LocalizedGroup) -> Result<Certificate> {
    let cover = CoverInstance::new(g, k)?;
    certify_cc7_instance(&cover)
}

pub(crate) fn certify_cc7_instance(cover: &CoverInstance) -> Result<Certificate> {
    let mut cert = Certificate::new("lemma_cc7");
    push_end_is_integers(&mut cert, "cc7.i", "M", &cover.m)?;
    push_fully_invariant(&mut cert, "cc7.ii", &cover.g, &cover.k)?;
    push_hom_zero(&mut cert, "cc7.iii.hom_k_m", ("K", "M"), &cover.k, &cover.m)?;
    push_hom_zero(&mut cert, "cc7.iii.hom_g_k", ("G", "K"), &cover.g, &cover.k)?;
    Ok(cert)
}

pub fn certify_lemma_cc9(
    g: &LocalizedGroup,
    k: &LocalizedGroup,
    mhat: &LocalizedGroup,
    r: &PrimeSet,
) -> Result<Certificate> {
    require_subgroup(k, g, "K")?;
    require_subgroup(mhat, g, "M̂")?;
    if &k.sum(mhat)? != g {
        return input("G is not K + M̂");
    }
    let cover = CoverInstance::new(g, k)?;
    let mut cert = Certificate::new("lemma_cc9");
    push_fully_invariant(&mut cert, "cc9.i", g, k)?;

    let ek = end_group(k)?;
    let ring = scalar_ring_recognize(&ek)?;
    let ok = ring.scalar && &ring.primes == r;
    let witness = if ok { None } else { ring_mismatch(&ek, r)? };
    cert.push("cc9.ii", ok, format!("End(K) = {}", describe_ring(&ek)?), witness);

    push_end_is_integers(&mut cert, "cc9.iii", "M", &cover.m)?;

    let h1 = hom_group(mhat, k)?;
    let h2 = hom_group(k, &cover.m)?;
    let witness = h1.nonzero_element().or_else(|| h2.nonzero_element()).map(|matrix| Witness::Hom { matrix });
    cert.push(
        "cc9.iv",
        witness.is_none(),
        format!("Hom(M̂, K) has rank {}, Hom(K, M) has rank {}", h1.rank(), h2.rank()),
        witness,
    );

    let meet = k.intersect(mhat)?;
    cert.push("cc9.v", !meet.is_zero(), format!("K ∩ M̂ has rank {}", meet.rank()), None);
    Ok(cert)
}

fn check_marked(l: &LocalizedGroup, x_l: &[Rational]) -> Result<()> {
    if !l.member(x_l)? {
        return input("x_L is not an element of L");
    }
    if x_l.iter().all(num_traits::Zero::is_zero) {
        return input("x_L must be nonzero");
    }
    Ok(())
}

/// `M = L ⊕_{x_L} Z[1/q]`.
pub fn adjoin_marked(l: &LocalizedGroup, x_l: &[Rational], q: u64) -> Result<LocalizedGroup> {
    check_marked(l, x_l)?;
    Ok(l.adjoin_localized_line(x_l, q)?.group)
}

/// An element `v` of `G` with `v/p ∉ G`.
fn non_divisible_element(g: &LocalizedGroup, p: u64) -> Result<Option<RationalVector>> {
    let inv = Rational::new(1.into(), p.into());
    for gen in g.generators()?.generators {
        if !g.member(&vec_scale(&gen.vector, &inv))? {
            return Ok(Some(gen.vector));
        }
    }
    Ok(None)
}

/// A nonzero element of `⋂ p^i G`, if there is one.
fn divisible_element(g: &LocalizedGroup, p: u64) -> Result<Option<RationalVector>> {
    let d = g.divisible_part(p)?;
    Ok(d.generators()?.generators.into_iter().next().map(|x| x.vector))
}

fn push_reduced(cert: &mut Certificate, label: &str, name: &str, g: &LocalizedGroup, primes: &[u64]) -> Result<()> {
    let mut witness = None;
    let mut parts = Vec::new();
    for &p in primes {
        let d = g.divisible_part(p)?;
        parts.push(format!("{p}-divisible part of {name} has rank {}", d.rank()));
        if witness.is_none() {
            witness = divisible_element(g, p)?.map(|vector| Witness::Element { vector });
        }
    }
    cert.push(label, witness.is_none(), parts.join("; "), witness);
    Ok(())
}

pub fn certify_cor_cc6(l: &LocalizedGroup, x_l: &[Rational], q_l: u64, q_k: u64, q: u64) -> Result<Certificate> {
    let m = adjoin_marked(l, x_l, q)?;
    let mut cert = Certificate::new("cor_cc6");

    let witness = non_divisible_element(l, q_l)?.map(|vector| Witness::Element { vector });
    cert.push("cc6.1", witness.is_none(), format!("L is {q_l}-divisible: {}", witness.is_none()), witness);
    push_reduced(&mut cert, "cc6.2", "L", l, &[q_k, q])?;

    let pure = l.is_pure_element(x_l, q)?;
    cert.push("cc6.x_pure", pure, format!("x_L is {q}-pure in L: {pure}"), None);

    let em = end_group(&m)?;
    let ring = scalar_ring_recognize(&em)?;
    let allowed: PrimeSet = [q_l, q].into();
    let ok = ring.scalar && ring.primes.is_subset(&allowed);
    let witness = if ok {
        None
    } else {
        ring_mismatch(&em, &ring.primes.intersection(&allowed).copied().collect())?
    };
    cert.push("cc6.3", ok, format!("End(M) = {}", describe_ring(&em)?), witness);

    let div = m.divisible_part(q)?;
    let line = LocalizedGroup::from_generators(&GeneratorScheme::new(l.ambient_rank()).with(x_l.to_vec(), [q]))?;
    let extra = match div.element_outside(&line)? {
        Some(v) => Some(v),
        None => line.element_outside(&div)?,
    };
    cert.push(
        "cc6.4",
        extra.is_none(),
        format!("⋂ {q}^i M has rank {} and {} x_L Z[1/{q}]", div.rank(), if extra.is_none() { "equals" } else { "differs from" }),
        extra.map(|vector| Witness::Element { vector }),
    );
    Ok(cert)
}

pub fn report_lemma_cc8(l: &LocalizedGroup, x_l: &[Rational], _q_l: u64, q_k: u64, q: u64) -> Result<Certificate> {
    let m = adjoin_marked(l, x_l, q)?;
    let mut cert = Certificate::new("lemma_cc8");
    cert.push("cc8.torsion_free", true, format!("M is a subgroup of Q^{}", m.ambient_rank()), None);
    push_reduced(&mut cert, "cc8.qk_reduced", "M", &m, &[q_k])?;
    push_end_is_integers(&mut cert, "cc8.end_scalar", "M", &m)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::q as int;

    fn group(n: usize, gens: &[(&[i64], &[u64])]) -> LocalizedGroup {
        let mut s = GeneratorScheme::new(n);
        for (v, ps) in gens {
            s.push(v.iter().map(|&x| int(x)).collect(), ps.iter().copied());
        }
        LocalizedGroup::from_generators(&s).unwrap()
    }

    #[test]
    fn cc7_on_coordinate_line_fails_at_iii() {
        let g = LocalizedGroup::free(2);
        let k = group(2, &[(&[1, 0], &[])]);
        let cert = certify_lemma_cc7(&g, &k).unwrap();
        assert!(!cert.passed());
        assert!(!cert.condition_passed("cc7.iii.hom_g_k"));
        let Some(Witness::Hom { matrix }) = &cert.condition("cc7.iii.hom_g_k").unwrap().witness else { panic!() };
        assert!(hom_group(&g, &k).unwrap().contains(matrix).unwrap());
    }

    #[test]
    fn cc7_passes_on_rigid_group_with_zero_kernel() {
        let g = group(2, &[(&[1, 0], &[7]), (&[0, 1], &[11]), (&[1, 1], &[13])]);
        assert!(certify_lemma_cc7(&g, &LocalizedGroup::zero(2)).unwrap().passed());
    }

    #[test]
    fn cc9_failures() {
        let g = group(1, &[(&[1], &[3])]);
        let cert = certify_lemma_cc9(&g, &LocalizedGroup::zero(1), &g, &PrimeSet::new()).unwrap();
        assert!(!cert.condition_passed("cc9.v"));
        let cert = certify_lemma_cc9(&g, &g, &LocalizedGroup::zero(1), &PrimeSet::new()).unwrap();
        assert!(!cert.condition_passed("cc9.ii"));
        let cert = certify_lemma_cc9(&g, &g, &LocalizedGroup::zero(1), &[3].into()).unwrap();
        assert!(cert.condition_passed("cc9.ii"));
        assert!(certify_lemma_cc9(&g, &LocalizedGroup::zero(1), &LocalizedGroup::zero(1), &PrimeSet::new()).is_err());
    }

    #[test]
    fn cc6_rejects_integers() {
        let l = LocalizedGroup::free(1);
        let cert = certify_cor_cc6(&l, &[int(1)], 2, 3, 5).unwrap();
        assert!(!cert.condition_passed("cc6.1"));
        assert!(certify_cor_cc6(&l, &[Rational::new(1.into(), 2.into())], 2, 3, 5).is_err());
    }

    #[test]
    fn cc8_detects_qk_divisibility() {
        let l = group(1, &[(&[1], &[2, 3])]);
        let cert = report_lemma_cc8(&l, &[int(1)], 2, 3, 5).unwrap();
        assert!(!cert.condition_passed("cc8.qk_reduced"));
        assert!(cert.condition_passed("cc8.torsion_free"));
    }
}
