mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use sphere_formality::ainfty::build_certificate;
use sphere_formality::bmt::{bm_tensor, bm_tensor_with, eta_correct, Choice};
use sphere_formality::decide::{
    hard_lefschetz_check, hl_obstruction, single_generator_check, sphere_bundle_formality, BundleSpec, HlVerdict,
    Outcome,
};
use sphere_formality::exactla::{add_vec, int, is_zero_vec, unit_vec, zero_vec, Scalar, Subspace};
use sphere_formality::galg::GradedAlgebra;
use sphere_formality::gysin::{ClassKind, GysinExtension};
use sphere_formality::sympow::{product_kernel, symmetrize_to_g4, SymPowerBasis};

fn random_class(a: &GradedAlgebra, d: u32, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let mut v = zero_vec(a.dim());
    for &i in a.degree_indices(d) {
        v[i] = if rng.gen_bool(0.3) { Scalar::zero() } else { random_scalar(rng) };
    }
    v
}

/// A formal fixture with a random Euler class of random even degree.
fn random_bundle(rng: &mut ChaCha8Rng) -> (String, GradedAlgebra, Vec<Scalar>, u32) {
    let name = FORMAL_FIXTURES[rng.gen_range(0..FORMAL_FIXTURES.len())];
    let a = fixture(name);
    let degrees: Vec<u32> = (2..=a.formal_dimension()).step_by(2).collect();
    let d = if degrees.is_empty() { 2 } else { degrees[rng.gen_range(0..degrees.len())] };
    let e = random_class(&a, d, rng);
    (name.to_string(), a, e, d)
}

fn product_class(a: &GradedAlgebra, x: &str, y: &str) -> Vec<Scalar> {
    a.multiply(&unit_vec(a.dim(), a.index_of(x).unwrap()), &unit_vec(a.dim(), a.index_of(y).unwrap()))
}

#[test]
fn hl_nonformal_implies_tensor_nonformal() {
    let t4 = fixture("torus").tensor_product(&fixture("torus")).unwrap();
    let mut bases: Vec<(String, GradedAlgebra)> = FORMAL_FIXTURES.iter().map(|n| (n.to_string(), fixture(n))).collect();
    bases.push(("torus x torus".into(), t4));
    let mut confirmed = 0;
    for (name, a) in &bases {
        for r in [1u32, 3] {
            let mut omegas: Vec<Vec<Scalar>> = a.degree_indices(2 * r).iter().map(|&i| unit_vec(a.dim(), i)).collect();
            let all: Vec<Scalar> = (0..a.dim()).map(|k| if a.degree(k) == 2 * r { int(1) } else { int(0) }).collect();
            if !is_zero_vec(&all) {
                omegas.push(all);
            }
            for w in omegas {
                if let HlVerdict::NonFormal { .. } = hl_obstruction(a, &w, r, None).unwrap() {
                    let v = sphere_bundle_formality(&BundleSpec::new(a.clone(), 2 * r - 1, Some(w.clone()))).unwrap();
                    assert_eq!(v.outcome, Outcome::NonFormal, "{name}, ω = {}", a.format_vector(&w));
                    confirmed += 1;
                }
            }
        }
    }
    assert!(confirmed >= 5, "only {confirmed} obstruction cases");
}

#[test]
fn boothby_wang_over_hard_lefschetz_surface_product() {
    let a = fixture("sigma2").tensor_product(&fixture("sigma2")).unwrap();
    let v1 = product_class(&a, "a1", "b1");
    let v2 = product_class(&a, "a1'", "b1'");
    let omega = add_vec(&v1, &v2);
    assert!(hard_lefschetz_check(&a, &omega).unwrap().iter().all(|(_, ok)| *ok));
    match hl_obstruction(&a, &omega, 1, None).unwrap() {
        HlVerdict::NonFormal { s, .. } => assert_eq!(s, 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn kodaira_thurston_fails_hard_lefschetz_in_degree_one() {
    let a = fixture("kodaira-thurston");
    let w = v(&a, "e13 + e24");
    let table = hard_lefschetz_check(&a, &w).unwrap();
    assert_eq!(table, vec![(0, true), (1, false), (2, true)]);
}

#[test]
fn single_generator_fixture_examples() {
    assert_eq!(single_generator_check(&fixture("truncated-x3")), Some((2, 3)));
    assert_eq!(single_generator_check(&fixture("cp3")), Some((2, 4)));
    assert_eq!(single_generator_check(&fixture("s2xs2")), None);
    assert_eq!(single_generator_check(&fixture("s3xs3")), None);
    assert_eq!(single_generator_check(&sphere(3)), Some((3, 2)));
}

#[test]
fn negative_euler_characteristic_flows_through() {
    let a = fixture("sigma3");
    let e: Vec<Scalar> = orientation_vector(&a).iter().map(|c| c * int(-4)).collect();
    let v = sphere_bundle_formality(&BundleSpec::new(a, 1, Some(e))).unwrap();
    assert_eq!(v.outcome, Outcome::NonFormal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn valid_algebras_satisfy_the_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poincare(&mut rng);
        prop_assert!(a.validate().is_ok());
        prop_assert!(brute_force_axioms(&a));
    }

    #[test]
    fn poincare_pairing_is_constructively_nondegenerate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poincare(&mut rng);
        let p = a.poincare_check().unwrap();
        let n = a.formal_dimension();
        for i in a.degrees().collect::<Vec<_>>() {
            let u = random_class(&a, i, &mut rng);
            if is_zero_vec(&u) {
                continue;
            }
            let dual = a.degree_indices(n - i).iter().any(|&j| !p.alpha(&a.multiply(&u, &unit_vec(a.dim(), j))).is_zero());
            prop_assert!(dual, "degree {}", i);
        }
        if n % 2 == 1 {
            prop_assert_eq!(a.euler_characteristic(), 0);
        }
    }

    #[test]
    fn extension_ring_is_poincare_with_theta_orientation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (name, a, e, d) = random_bundle(&mut rng);
        let g = GysinExtension::extend(&a, &e, d, true).unwrap();
        let h = g.cohomology();
        prop_assert!(h.validate().is_ok(), "{}", name);
        prop_assert_eq!(h.formal_dimension(), a.formal_dimension() + d - 1);
        let o = h.orientation().unwrap();
        prop_assert_eq!(g.kind(o), ClassKind::Theta);
        let mut theta_nu = zero_vec(g.chain_dim());
        theta_nu[a.dim() + a.orientation().unwrap()] = Scalar::one();
        prop_assert_eq!(g.alpha(o), &theta_nu[..]);
        prop_assert!(h.poincare_check().is_ok());
        for i in 0..=h.formal_dimension() + 1 {
            prop_assert_eq!(h.degree_dim(i), gysin_dimension(&a, &e, d, i));
        }
    }

    #[test]
    fn chain_differential_squares_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a, e, d) = random_bundle(&mut rng);
        let g = GysinExtension::extend(&a, &e, d, true).unwrap();
        let z: Vec<Scalar> = (0..g.chain_dim()).map(|_| random_scalar(&mut rng)).collect();
        prop_assert!(is_zero_vec(&g.d(&g.d(&z))));
        // No nonzero element of θA is exact.
        let mut t = zero_vec(g.chain_dim());
        t[a.dim()..].clone_from_slice(&z[a.dim()..]);
        prop_assert!(is_zero_vec(&t) || !g.is_exact(&t));
    }

    #[test]
    fn product_kernel_splits_and_b_is_symmetric_kernel(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a, e, d) = random_bundle(&mut rng);
        let g = GysinExtension::extend(&a, &e, d, true).unwrap();
        let h = g.cohomology();
        let n = h.formal_dimension();
        let pk = product_kernel(h, n + 1);
        for (deg, es) in &pk.e {
            let ds = &pk.d[deg];
            let count = pk.sym2.indices_in_degree(*deg).len();
            prop_assert_eq!(es.dim() + ds.dim(), count);
            let images: Vec<Vec<Scalar>> = ds.basis().iter().map(|x| pk.product.mul_vec(x)).collect();
            prop_assert_eq!(Subspace::span(h.dim(), &images).dim(), ds.dim());
            for x in es.basis() {
                prop_assert!(is_zero_vec(&pk.product.mul_vec(x)));
            }
        }
        for block in pk.b.values() {
            let sym = symmetrize_to_g4(&pk.sym2, &block.s22);
            for (coef, b) in block.in_e_pairs.iter().zip(block.subspace.basis()) {
                prop_assert!(is_zero_vec(&sym.matrix.mul_vec(b)));
                // Re-expand the E-pair combination in 𝒢²𝒢²H coordinates.
                let mut expanded = zero_vec(block.s22.len());
                for (c, &(x, y)) in coef.iter().zip(&block.e_pairs) {
                    if c.is_zero() {
                        continue;
                    }
                    let (u, w) = (&pk.e_basis[x].1, &pk.e_basis[y].1);
                    for (p, up) in u.iter().enumerate().filter(|(_, t)| !t.is_zero()) {
                        for (q, wq) in w.iter().enumerate().filter(|(_, t)| !t.is_zero()) {
                            if let Some((k, sign)) = block.s22.canonical(&[p, q]) {
                                expanded[k] += c * up * wq * sign;
                            }
                        }
                    }
                }
                prop_assert_eq!(&expanded, b);
            }
        }
    }

    #[test]
    fn antisymmetric_part_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a, e, d) = random_bundle(&mut rng);
        let g = GysinExtension::extend(&a, &e, d, true).unwrap();
        let n = g.cohomology().formal_dimension();
        let pk = product_kernel(g.cohomology(), n + 1);
        let c = Choice::canonical(&g, &pk).unwrap();
        let k = pk.e_basis.len();
        for _ in 0..8.min(k * k) {
            let (x, y) = (rng.gen_range(0..k), rng.gen_range(0..k));
            let (dx, dy) = (pk.e_basis[x].0, pk.e_basis[y].0);
            let sign = if dx % 2 == 1 && dy % 2 == 1 { int(-1) } else { int(1) };
            let lhs = g.mul(&c.gamma[x], &c.alpha_squared(&g, &pk, y));
            let rhs = g.mul(&c.gamma[y], &c.alpha_squared(&g, &pk, x));
            let diff: Vec<Scalar> = lhs.iter().zip(&rhs).map(|(l, r)| l - &sign * r).collect();
            prop_assert!(g.is_exact(&diff));
        }
        for a_idx in 0..k {
            prop_assert_eq!(g.d(&c.gamma[a_idx]), c.alpha_squared(&g, &pk, a_idx));
        }
    }

    #[test]
    fn corrected_choice_gives_the_same_tensor_and_a_clean_certificate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (name, a, e, d) = random_bundle(&mut rng);
        let g = GysinExtension::extend(&a, &e, d, true).unwrap();
        let n = g.cohomology().formal_dimension();
        let pk = product_kernel(g.cohomology(), n + 1);
        let degrees: Vec<u32> = (0..=n + 1).collect();
        let f = bm_tensor(&g, &pk, &degrees).unwrap();
        if f.vanishes_in(n + 1) {
            let u = eta_correct(&g, &pk, &f).unwrap();
            prop_assert_eq!(bm_tensor_with(&g, &pk, &u.choice, &degrees).unwrap().values(), f.values(), "{}", name);
            let cert = build_certificate(&g, &pk, &u).unwrap();
            prop_assert!(cert.all_zero());
            let hd = g.cohomology().dim();
            for p in &cert.maps.f2 {
                for q in &cert.maps.f2 {
                    prop_assert!(is_zero_vec(&g.mul(p, q)));
                }
            }
            for c in 0..hd {
                prop_assert_eq!(g.project(&cert.maps.f1[c]).unwrap(), unit_vec(hd, c));
            }
        }
    }

    #[test]
    fn verdict_is_invariant_under_rescaling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (name, a, e, d) = random_bundle(&mut rng);
        let c: Vec<Scalar> = (0..a.dim()).map(|i| if i == a.unit() { Scalar::one() } else { random_scalar(&mut rng) }).collect();
        let b = rescale(&a, &c);
        let e2: Vec<Scalar> = e.iter().zip(&c).map(|(x, s)| x / s).collect();
        let v1 = sphere_bundle_formality(&BundleSpec::new(a, d - 1, Some(e))).unwrap();
        let v2 = sphere_bundle_formality(&BundleSpec::new(b, d - 1, Some(e2))).unwrap();
        prop_assert_eq!(v1.outcome, v2.outcome, "{}", name);
        prop_assert_eq!(v1.reason, v2.reason);
    }

    #[test]
    fn sym2_dimension_of_a_single_block(m in 1usize..7, d in 0u32..5) {
        let degrees = vec![d; m];
        let expected = if d % 2 == 0 { m * (m + 1) / 2 } else { m * (m - 1) / 2 };
        prop_assert_eq!(SymPowerBasis::new(&degrees, 2).len(), expected);
    }
}
