use freedim_core::cutoff::{CutoffFamily, Polynomial, SpectralFunction};
use freedim_core::fixtures::{c_m2, m2, random_invariant_subspace};
use freedim_core::group::{schreier_rank, FreeWord, Permutation};
use freedim_core::linalg::{random_hermitian, random_matrix};
use freedim_core::{
    central_decomposition, commutator_identity_check, construct_dual_operator, delta_report,
    gns_structure, vn_dimension, DerivationSpec, Fraction, Tolerances, TracialAlgebra,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn families() -> impl Strategy<Value = CutoffFamily> {
    (0.05f64..40.0, any::<bool>()).prop_map(|(r, smooth)| {
        if smooth {
            CutoffFamily::smooth(r)
        } else {
            CutoffFamily::new(r)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cutoff_is_identity_inside_and_bounded(f in families(), x in -200.0f64..200.0) {
        let v = f.value(x);
        if x.abs() <= f.radius {
            prop_assert_eq!(v, x);
        }
        prop_assert!(v.abs() <= f.radius + 1.0);
        prop_assert_eq!(f.value(-x), -v);
        let d = f.derivative(x);
        prop_assert!(d > -1e-15 && d <= 1.0);
    }

    #[test]
    fn cutoff_quotient_is_a_contraction(f in families(), s in -100.0f64..100.0, t in -100.0f64..100.0) {
        let g = f.quotient(s, t);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&g), "g = {}", g);
        prop_assert!((g - f.quotient(t, s)).abs() <= 1e-12);
    }

    #[test]
    fn fractions_round_trip(p in -5000i64..5000, q in 1i64..5000) {
        let f = Fraction::new(p, q);
        prop_assert_eq!(Fraction::recover(f.to_f64(), 1_000_000, 1e-12), Some(f));
    }

    #[test]
    fn free_words_form_a_group(a in prop::collection::vec(prop_oneof![-3i32..0, 1i32..4], 0..12),
                               b in prop::collection::vec(prop_oneof![-3i32..0, 1i32..4], 0..12)) {
        let (a, b) = (FreeWord::from_letters(&a), FreeWord::from_letters(&b));
        prop_assert!(a.mul(&a.inverse()).is_empty());
        prop_assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
        prop_assert!(a.letters().windows(2).all(|w| w[0] != -w[1]));
    }
}

fn random_perm(rng: &mut ChaCha8Rng, degree: usize) -> Permutation {
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Homomorphisms `𝔽_n → S₄`, so the image has order at most 24.
    #[test]
    fn nielsen_schreier_consistency(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images: Vec<Permutation> = (0..n).map(|_| random_perm(&mut rng, 4)).collect();
        let g = schreier_rank(n, &images).unwrap();
        prop_assert_eq!(24 % g.index(), 0);
        prop_assert_eq!(g.rank(), 1 + g.index() * (n - 1));
        prop_assert_eq!(g.rank(), g.non_tree_edges());
        prop_assert_eq!(g.subgroup_generators.len(), g.rank());
        prop_assert!(g.is_connected() && g.is_permutation_action() && g.kernel_verified());
        // transversal words map to their cosets
        for (word, coset) in g.transversal.iter().zip(&g.cosets) {
            prop_assert_eq!(&g.image_of(word), coset);
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>(),
                                    a in prop::collection::vec(prop_oneof![-2i32..0, 1i32..3], 0..10),
                                    b in prop::collection::vec(prop_oneof![-2i32..0, 1i32..3], 0..10)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images = vec![random_perm(&mut rng, 5), random_perm(&mut rng, 5)];
        let (a, b) = (FreeWord::from_letters(&a), FreeWord::from_letters(&b));
        prop_assert_eq!(
            a.mul(&b).evaluate(&images, 5),
            a.evaluate(&images, 5).then(&b.evaluate(&images, 5))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_identity_on_random_pairs(seed in any::<u64>(), d in 1usize..12, radius in 0.1f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(&mut rng, d) * freedim_core::linalg::c(3.0, 0.0);
        let x = random_hermitian(&mut rng, d);
        for f in [CutoffFamily::new(radius), CutoffFamily::smooth(radius)] {
            prop_assert!(commutator_identity_check(&a, &x, &f).unwrap() <= 1e-9);
        }
        let poly = Polynomial(vec![0.5, -1.0, 0.25, 0.1]);
        prop_assert!(commutator_identity_check(&a, &x, &poly).unwrap() <= 1e-9);
    }

    /// A generic self-adjoint pair generates `M₂`, and Δ does not depend on which.
    #[test]
    fn delta_of_generic_pairs_in_m2(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = vec![vec![random_hermitian(&mut rng, 2)], vec![random_hermitian(&mut rng, 2)]];
        let alg = TracialAlgebra::build(&[2], &[1.0], &gens, Default::default()).unwrap();
        let gns = gns_structure(&alg).unwrap();
        let rep = delta_report(&alg, &gns, seed, &Tolerances::default()).unwrap();
        prop_assert_eq!(rep.delta_fraction, Some(Fraction::new(3, 4)));
    }

    #[test]
    fn inner_dual_operators_round_trip(seed in any::<u64>()) {
        let alg = c_m2();
        let gns = gns_structure(&alg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_matrix(&mut rng, gns.dim, gns.dim);
        let report = construct_dual_operator(&gns, &DerivationSpec::inner(&gns, &b), &Tolerances::default()).unwrap();
        prop_assert!(report.max_residual() <= 1e-9);
        prop_assert!(report.residual_bilinear <= 1e-9);
        // ξ = (B* − JBJ)·1̂, with J entrywise conjugation
        let expected = (b.adjoint() - b.map(|z| z.conj())) * &gns.trace_vector;
        prop_assert!((report.xi - expected).norm() <= 1e-10);
    }

    #[test]
    fn vn_dimension_is_monotone_and_additive(seed in any::<u64>(), n in 1usize..3, factor in any::<bool>()) {
        let alg = if factor { m2() } else { c_m2() };
        let gns = gns_structure(&alg).unwrap();
        let dec = central_decomposition(&alg, &gns, seed).unwrap();
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k1 = random_invariant_subspace(&mut rng, &gns, n, 1);
        let extra = random_invariant_subspace(&mut rng, &gns, n, 2);
        let mut vectors = k1.basis().to_vec();
        vectors.extend_from_slice(extra.basis());
        let k2 = freedim_core::HsSubspace::from_vectors(n, &gns, &vectors, tol.rank);
        prop_assert!(k2.contains(&k1, 1e-9));
        let d1 = vn_dimension(&k1, &dec, &tol).unwrap();
        let d2 = vn_dimension(&k2, &dec, &tol).unwrap();
        prop_assert!(d1.value <= d2.value + 1e-9);
        let rest = k1.complement_within(&k2, &gns);
        let d3 = vn_dimension(&rest, &dec, &tol).unwrap();
        prop_assert!((d1.value + d3.value - d2.value).abs() <= 1e-9);
        for d in [&d1, &d2, &d3] {
            let frac = d.fraction.expect("exact fraction");
            prop_assert!((frac.to_f64() - d.value).abs() <= 1e-9);
        }
        prop_assert!(d2.value <= n as f64 + 1e-9);
    }
}
