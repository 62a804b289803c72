mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use cellcov_core::covers::{
    build_prop_cc10, certify_lemma_cc7, decide_cellular, demo_theorem1, rigid_group, CC10Config, Witness,
};
use cellcov_core::exactlin::{ppow, q, vec_scale, Matrix, PrimeSet, Rational, RationalVector};
use cellcov_core::freekernel::{separable_summand, FreeGroupWithBasis};
use cellcov_core::groups::GeneratorScheme;
use cellcov_core::homs::{end_group, hom_group, scalar_ring_recognize};
use cellcov_core::oracle::{brute_homs, brute_lifts, brute_member, hom_slice, maps_into, SearchBounds};
use cellcov_core::LocalizedGroup;
use common::*;
use num_traits::{One, Zero};
use rand::Rng;

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t <= limit, format!("{:.1}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

#[test]
fn criterion_1_membership_oracle() {
    let start = Instant::now();
    let mut r = rng(1);
    let bounds = SearchBounds::new(8, 3, SMALL_PRIMES);
    let (mut pairs, mut found, mut contradictions) = (0, 0, 0);
    for i in 0..1200 {
        let n = r.gen_range(1..=2);
        let s = scheme(&mut r, n, 3, 3, &SMALL_PRIMES);
        let g = group(&s);
        let constructed = i % 2 == 0;
        let v = if constructed { combination(&mut r, &s, 4, 3) } else { vector(&mut r, n, 6, &SMALL_PRIMES, 3) };
        let member = g.member(&v).unwrap();
        let oracle = brute_member(&s, &v, &bounds).unwrap();
        pairs += 1;
        found += oracle as usize;
        if (oracle && !member) || (constructed && !(oracle && member)) {
            contradictions += 1;
        }
    }
    let (fast, time) = within(start, Duration::from_secs(60));
    verdict(
        "criterion 1 membership oracle",
        contradictions == 0 && fast,
        format!("{pairs} pairs, {found} found by the oracle, {contradictions} contradictions, {time}"),
    );
}

#[test]
fn criterion_2_hom_oracle() {
    let start = Instant::now();
    let mut r = rng(2);
    let (mut mismatches, mut points) = (0, 0);
    for _ in 0..20 {
        let mut primes = SMALL_PRIMES.to_vec();
        primes.remove(r.gen_range(0..3));
        let (na, nb) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let sa = scheme(&mut r, na, 3, 2, &primes);
        let sb = scheme(&mut r, nb, 3, 2, &primes);
        let (a, b) = (group(&sa), group(&sb));
        let h = hom_group(&a, &b).unwrap();
        let support: PrimeSet = sa.support().union(&sb.support()).copied().collect();
        let bounds = SearchBounds::new(2, 1, support).with_depth(8);
        let slice = hom_slice(h.carrier(), nb, na, &bounds).unwrap();
        let brute = brute_homs(&sa, &b, &bounds).unwrap();
        points += brute.len();
        if slice != brute {
            mismatches += 1;
        }
    }
    let (fast, time) = within(start, Duration::from_secs(300));
    verdict(
        "criterion 2 hom oracle",
        mismatches == 0 && fast,
        format!("20 pairs, {points} homs enumerated, {mismatches} mismatched slices, {time}"),
    );
}

fn scalar_matrices(n: usize, bounds: &SearchBounds) -> BTreeSet<Matrix> {
    bounds.rationals().iter().map(|c| scalar_identity(n, c)).collect()
}

#[test]
fn criterion_3_rigidity() {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for (pi, bounds) in [(vec![], SearchBounds::new(3, 0, [])), (vec![2u64], SearchBounds::new(3, 2, [2]))] {
        let pis: PrimeSet = pi.iter().copied().collect();
        let g = rigid_group(2, &[7, 11, 13], &pis).unwrap();
        let s = rigid_scheme(2, &[7, 11, 13], &pi);
        let same = group(&s) == g;
        let ring = scalar_ring_recognize(&end_group(&g).unwrap()).unwrap();
        let recognized = ring.scalar && ring.primes == pis;
        let brute = brute_homs(&s, &g, &bounds).unwrap();
        let enumerated = brute == scalar_matrices(2, &bounds);
        ok &= same && recognized && enumerated;
        parts.push(format!("π={pi:?}: recognized {:?} {recognized}, oracle {} scalars {enumerated}", ring.primes, brute.len()));
    }
    let (fast, time) = within(start, Duration::from_secs(30));
    verdict("criterion 3 rigidity", ok && fast, format!("{}, {time}", parts.join("; ")));
}

/// A random pure pair `(G, K)` in `Q^n` with `n <= 3`.
fn pure_pair(r: &mut impl Rng) -> (LocalizedGroup, LocalizedGroup) {
    let n = r.gen_range(1..=3);
    let g = if r.gen_bool(0.5) {
        group(&full_scheme(r, n, 2, 2, &SMALL_PRIMES))
    } else {
        let mut s = GeneratorScheme::new(n);
        let primes = [2u64, 3, 5, 7, 11, 13];
        for _ in 0..n + 1 {
            s.push(nonzero_int_vector(r, n, 2), [pick(r, &primes)]);
        }
        for j in 0..n {
            let mut e = vec![q(0); n];
            e[j] = q(1);
            s.push(e, []);
        }
        group(&s)
    };
    let k = r.gen_range(0..=n);
    let dirs: Vec<RationalVector> = (0..k).map(|_| int_vector(r, n, 2)).collect();
    let span = cellcov_core::exactlin::Subspace::span(n, &dirs).unwrap();
    (g.clone(), g.intersect_subspace(&span).unwrap())
}

#[test]
fn criterion_4_cc7_soundness() {
    let start = Instant::now();
    let mut r = rng(4);
    let (mut passes, mut cellular, mut counterexamples) = (0, 0, 0);
    for _ in 0..120 {
        let (g, k) = pure_pair(&mut r);
        let cert = certify_lemma_cc7(&g, &k).unwrap();
        let (decided, _) = decide_cellular(&g, &k).unwrap();
        cellular += decided as usize;
        if cert.passed() {
            passes += 1;
            if !decided {
                counterexamples += 1;
            }
        }
    }
    let (fast, time) = within(start, Duration::from_secs(600));
    verdict(
        "criterion 4 cc7 soundness",
        counterexamples == 0 && passes > 0 && fast,
        format!("120 pairs, {passes} cc7 passes, {cellular} cellular, {counterexamples} counterexamples, {time}"),
    );
}

/// Whether the bounded End slice contains anything other than integer multiples of `Id`.
fn beyond_integer_scalars(homs: &BTreeSet<Matrix>, n: usize) -> bool {
    homs.iter().any(|f| {
        let c = f.get(0, 0);
        !c.is_integer() || *f != scalar_identity(n, c)
    })
}

/// Recorded outcomes on one instance, each with its oracle cross-check.
fn cc10_checks(k: usize) -> (bool, String) {
    let cfg = CC10Config::default().with_kernel_rank(k);
    let (kk, l) = (cfg.default_k().unwrap(), cfg.default_l().unwrap());
    let (inst, cert) = build_prop_cc10(&cfg, &kk, &l).unwrap();
    let checkpoints = ["cc10.I", "cc10.l_cap_h", "cc10.III", "cc10.IV", "cc10.V"];
    let failed: Vec<&str> = checkpoints.iter().copied().filter(|c| !cert.condition_passed(c)).collect();

    // independent schemes for L, M = L ⊕_{x_L} Z[1/q] and G
    let l_scheme = rigid_scheme(2, &cfg.l_rigidity_primes, &[cfg.q_l]);
    let x_l = cfg.x_l_for(&l);
    let mut m_scheme = l_scheme.clone();
    m_scheme.push(x_l.clone(), [cfg.q]);
    let m = group(&m_scheme);
    let k_scheme = if k == 1 {
        GeneratorScheme::new(1).with(vec![q(1)], [cfg.q_k])
    } else {
        rigid_scheme(k, &cfg.k_spine(), &[cfg.q_k])
    };
    let n = k + 2;
    let mut g_scheme = map_scheme(&k_scheme, &inclusion(n, 0, k));
    for gen in map_scheme(&l_scheme, &inclusion(n, k, 2)).generators {
        g_scheme.push(gen.vector, gen.inverted_primes);
    }
    g_scheme.push(inst.x.clone(), [cfg.q]);
    let mut notes = Vec::new();
    let mut consistent = group(&g_scheme) == inst.cover.g;

    // End(M): bounded slice against enumeration, and the scalar verdicts against it
    let bounds = SearchBounds::new(2, 1, [cfg.q_l, cfg.q]);
    let brute_m = brute_homs(&m_scheme, &m, &bounds).unwrap();
    consistent &= hom_slice(end_group(&m).unwrap().carrier(), 2, 2, &bounds).unwrap() == brute_m;
    let quotient_scheme = map_scheme(&g_scheme, &inst.cover.projection);
    let brute_cover_m = brute_homs(&quotient_scheme, &inst.cover.m, &bounds).unwrap();
    let cc8 = cert.attachment("lemma_cc8").unwrap().condition_passed("cc8.end_scalar");
    let cc7 = cert.attachment("lemma_cc7").unwrap().condition_passed("cc7.i");
    consistent &= cc8 != beyond_integer_scalars(&brute_m, 2);
    consistent &= cc7 != beyond_integer_scalars(&brute_cover_m, 2);
    notes.push(format!("cc8.end_scalar {cc8}, cc7.i {cc7}"));

    // cc6.4: x_L/(q_L q^j) ∈ M lies in ⋂ q^i M but not in x_L Z[1/q]
    let cc6 = cert.attachment("cor_cc6").unwrap().condition_passed("cc6.4");
    let depth = SearchBounds::new(1, 3, []);
    let mut off_line = true;
    for j in 0..=3 {
        let v = vec_scale(&x_l, &(ppow(cfg.q_l, -1) * ppow(cfg.q, -j)));
        off_line &= brute_member(&m_scheme, &v, &depth).unwrap();
    }
    consistent &= cc6 != off_line;
    notes.push(format!("cc6.4 {cc6}"));

    // decide: injectivity via lifts of 0, surjectivity via the witness
    let decision = cert.attachment("cellular_cover").unwrap();
    let lift_bounds = if k == 1 { SearchBounds::new(2, 1, [cfg.q_k]) } else { SearchBounds::new(1, 0, []) };
    let p = &inst.cover.projection;
    let zero = Matrix::zeros(p.rows(), n);
    let zero_lifts = brute_lifts(&g_scheme, &inst.cover.g, p, &zero, &lift_bounds).unwrap();
    let injective = decision.condition_passed("cellular.injective");
    consistent &= injective == (zero_lifts.len() == 1 && zero_lifts[0].is_zero());
    let surjective = decision.condition_passed("cellular.surjective");
    match &decision.condition("cellular.surjective").unwrap().witness {
        Some(Witness::Hom { matrix }) => {
            let is_hom = maps_into(matrix, &g_scheme, &inst.cover.m, 8).unwrap();
            let lifts = brute_lifts(&g_scheme, &inst.cover.g, p, matrix, &lift_bounds).unwrap();
            consistent &= !surjective && is_hom && lifts.is_empty();
        }
        _ => consistent &= surjective,
    }
    notes.push(format!("injective {injective}, surjective {surjective}"));

    let ok = failed.is_empty() && consistent;
    (ok, format!("k={k}: failed checkpoints {failed:?}, oracle consistent {consistent}, {}", notes.join(", ")))
}

#[test]
fn criterion_5_cc10_checkpoints() {
    let start = Instant::now();
    let (ok1, d1) = cc10_checks(1);
    let (ok2, d2) = cc10_checks(2);
    let (fast, time) = within(start, Duration::from_secs(300));
    verdict("criterion 5 cc10 checkpoints", ok1 && ok2 && fast, format!("{d1}; {d2}; {time}"));
}

#[test]
fn criterion_6_m_independence() {
    let start = Instant::now();
    let (cert, runs) = demo_theorem1(&CC10Config::default(), 3).unwrap();
    let first = &runs[0].instance.cover.m;
    let equal = runs.iter().all(|r| &r.instance.cover.m == first);
    let ranks = runs.iter().all(|r| r.instance.cover.k.rank() == r.kernel_rank);
    let labels = cert.condition_passed("thm.m_independent");
    let (fast, time) = within(start, Duration::from_secs(300));
    verdict(
        "criterion 6 M independence",
        equal && ranks && labels && runs.len() == 3 && fast,
        format!("k=1..3: M equal {equal}, kernel ranks {ranks}, {time}"),
    );
}

/// A random unimodular matrix: a product of elementary column operations.
fn unimodular(r: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = q(r.gen_range(-2..=2));
        for row in 0..n {
            let x = m.get(row, j) + &c * m.get(row, i);
            m.set(row, j, x);
        }
    }
    m
}

#[test]
fn criterion_7_summand_split() {
    let start = Instant::now();
    let mut r = rng(7);
    let mut bad = 0;
    for case in 0..50 {
        let n = r.gen_range(1..=6);
        let basis = if case % 2 == 0 { Matrix::identity(n) } else { unimodular(&mut r, n) };
        let k = FreeGroupWithBasis::new(basis.clone()).unwrap();
        let inv = basis.inverse().unwrap();
        let gens: Vec<RationalVector> = (0..r.gen_range(0..=3))
            .map(|_| {
                let coords: RationalVector =
                    (0..n).map(|_| if r.gen_bool(0.4) { q(r.gen_range(-3..=3)) } else { q(0) }).collect();
                basis.mul_vec(&coords).unwrap()
            })
            .collect();
        let mut union = BTreeSet::new();
        let mut total = 0;
        for v in &gens {
            let c = inv.mul_vec(v).unwrap();
            let support: Vec<usize> = (0..n).filter(|&i| !c[i].is_zero()).collect();
            total += support.len();
            union.extend(support);
        }
        let split = separable_summand(&k, &gens).unwrap();
        let det = split.combined_determinant(&k).unwrap();
        let unimodular = det == Rational::one() || det == -Rational::one();
        let k2 = FreeGroupWithBasis::new(split.k2_basis.clone()).unwrap().group().unwrap();
        let inside = gens.iter().all(|v| k2.member(v).unwrap());
        let counted = split.k2_basis.cols() == union.len() && union.len() <= total;
        let whole = split.k2_basis.cols() + split.f_basis.cols() == n;
        if !(unimodular && inside && counted && whole) {
            bad += 1;
        }
    }
    let (fast, time) = within(start, Duration::from_secs(30));
    verdict("criterion 7 summand split", bad == 0 && fast, format!("50 instances, {bad} failures, {time}"));
}

#[test]
fn criterion_8_quotient_presentation() {
    let start = Instant::now();
    let mut r = rng(8);
    let (mut bad, mut done) = (0, 0);
    while done < 20 {
        let n = r.gen_range(1..=3);
        let qp = pick(&mut r, &[2u64, 3, 5, 7]);
        let s = full_scheme(&mut r, n, 1, 3, &SMALL_PRIMES);
        let l = group(&s);
        let y = combination(&mut r, &s, 3, 1);
        if y.iter().all(Zero::is_zero) || !l.is_pure_element(&y, qp).unwrap() {
            continue;
        }
        done += 1;
        let h = LocalizedGroup::from_generators(&GeneratorScheme::new(1).with(vec![q(1)], [qp])).unwrap();
        let mut relation = y.clone();
        relation.push(q(-1));
        let rel = LocalizedGroup::from_generators(&GeneratorScheme::new(n + 1).with(relation, [])).unwrap();
        let (quotient, p) = l.direct_sum(&h).unwrap().quotient_by_pure(&rel).unwrap();
        let iso = p.mul(&inclusion(n + 1, 0, n)).unwrap();
        let adj = l.adjoin_localized_line(&y, qp).unwrap().group;
        let invertible = iso.rows() == n && !iso.det().unwrap().is_zero();
        if !(invertible && adj.image(&iso).unwrap() == quotient) {
            bad += 1;
        }
    }
    let (fast, time) = within(start, Duration::from_secs(120));
    verdict("criterion 8 quotient presentation", bad == 0 && fast, format!("20 instances, {bad} failures, {time}"));
}
