use num_traits::Zero;

use crate::error::{input, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::groups::LocalizedGroup;
use crate::homs::{end_group, hom_group, HomGroup};

use super::certificate::{Certificate, Witness};

/// `c: G -> M = G/K` with `M` realized as the image of `G` under `projection`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInstance {
    pub g: LocalizedGroup,
    pub k: LocalizedGroup,
    pub m: LocalizedGroup,
    pub projection: Matrix,
}

impl CoverInstance {
    pub fn new(g: &LocalizedGroup, k: &LocalizedGroup) -> Result<Self> {
        let (m, projection) = g.quotient_by_pure(k)?;
        Ok(Self { g: g.clone(), k: k.clone(), m, projection })
    }

    pub fn kernel_rank(&self) -> usize {
        self.k.rank()
    }
}

/// The map `Φ(f) = P f` on row-major matrix coordinates, from `n x n` to `m x n`.
pub(crate) fn postcompose(projection: &Matrix) -> Matrix {
    let (m, n) = (projection.rows(), projection.cols());
    let mut phi = Matrix::zeros(m * n, n * n);
    for i in 0..m {
        for l in 0..n {
            let c = projection.get(i, l);
            if c.is_zero() {
                continue;
            }
            for k in 0..n {
                phi.set(i * n + k, l * n + k, c.clone());
            }
        }
    }
    phi
}

/// Decides whether `G -> G/K` is a cellular cover: whether `f ↦ P f` is a bijection
/// `End(G) -> Hom(G, G/K)`.
pub fn decide_cellular(g: &LocalizedGroup, k: &LocalizedGroup) -> Result<(bool, Certificate)> {
    let cover = CoverInstance::new(g, k)?;
    decide_instance(&cover)
}

pub fn decide_instance(cover: &CoverInstance) -> Result<(bool, Certificate)> {
    let e = end_group(&cover.g)?;
    let h1 = hom_group(&cover.g, &cover.m)?;
    let mut cert = Certificate::new("cellular_cover");
    let phi = postcompose(&cover.projection);
    let n = cover.g.ambient_rank();

    let kernel = Subspace::span(n * n, &phi.kernel())?;
    let lost = e.carrier().span().intersect(&kernel)?;
    let injective = lost.dim() == 0;
    let witness = if injective {
        None
    } else {
        let f = e.carrier().scale_into(&lost.vectors()[0], None)?;
        Some(Witness::Hom { matrix: e.to_matrix(&f)? })
    };
    cert.push(
        "cellular.injective",
        injective,
        format!("End(G) has rank {}; nonzero endomorphisms killed by the projection span rank {}", e.rank(), lost.dim()),
        witness,
    );

    let image = e.carrier().image(&phi)?;
    let missing = h1.carrier().element_outside(&image)?;
    let surjective = missing.is_none() && image.is_subgroup_of(h1.carrier())?;
    let witness = match missing {
        Some(v) => Some(Witness::Hom { matrix: h1.to_matrix(&v)? }),
        None => None,
    };
    cert.push(
        "cellular.surjective",
        surjective,
        format!("Hom(G,M) has rank {}; induced image has rank {}", h1.rank(), image.rank()),
        witness,
    );
    Ok((cert.passed(), cert))
}

/// A description like `Z[1/2]·Id` or `not scalar (rank 4)`.
pub(crate) fn describe_ring(e: &HomGroup) -> Result<String> {
    let r = crate::homs::scalar_ring_recognize(e)?;
    if !r.scalar {
        return Ok(format!("not scalar (rank {})", e.rank()));
    }
    if r.primes.is_empty() {
        return Ok("Z·Id".into());
    }
    let ps: Vec<String> = r.primes.iter().map(u64::to_string).collect();
    Ok(format!("Z[1/{}]·Id", ps.join(",")))
}

pub(crate) fn require_subgroup(k: &LocalizedGroup, g: &LocalizedGroup, what: &str) -> Result<()> {
    if !k.is_subgroup_of(g)? {
        return input(format!("{what} is not a subgroup of G"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::q;
    use crate::groups::GeneratorScheme;

    #[test]
    fn trivial_kernel_is_cellular() {
        let g = LocalizedGroup::free(2);
        let (ok, cert) = decide_cellular(&g, &LocalizedGroup::zero(2)).unwrap();
        assert!(ok, "{cert:?}");
    }

    #[test]
    fn coordinate_line_is_not_cellular() {
        let g = LocalizedGroup::free(2);
        let k = LocalizedGroup::from_generators(&GeneratorScheme::new(2).with(vec![q(1), q(0)], [])).unwrap();
        let (ok, cert) = decide_cellular(&g, &k).unwrap();
        assert!(!ok);
        assert!(!cert.condition_passed("cellular.injective"));
        let Some(Witness::Hom { matrix }) = &cert.condition("cellular.injective").unwrap().witness else {
            panic!("missing witness")
        };
        assert!(!matrix.is_zero());
        let cover = CoverInstance::new(&g, &k).unwrap();
        assert!(cover.projection.mul(matrix).unwrap().is_zero());
        assert!(end_group(&g).unwrap().contains(matrix).unwrap());
    }

    #[test]
    fn impure_kernel_rejected() {
        let g = LocalizedGroup::free(1);
        let k = LocalizedGroup::from_generators(&GeneratorScheme::new(1).with(vec![q(2)], [])).unwrap();
        assert!(matches!(decide_cellular(&g, &k), Err(crate::Error::Purity(_))));
    }
}
