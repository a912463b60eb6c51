use freedim_core::fixtures::{
    all_tuples, c2, c_m2, m2, pauli_x, random_invariant_subspace, scalar,
};
use freedim_core::group::{betti_delta_formula, regular_rep_algebra, BettiInput, FiniteGroupTable};
use freedim_core::tracial::AlgebraOptions;
use freedim_core::{
    compute_h0, conjugate_variable, convergence_sweep, delta_report, derivation_well_defined,
    gns_structure, phi_star, CMat, CutoffKind, DerivationSpec, Error, HsSubspace, Tolerances,
    TracialAlgebra,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn delta_is_independent_of_the_generating_tuple() {
    let tol = Tolerances::default();
    let mut by_family: Vec<(String, f64)> = Vec::new();
    for (label, alg) in all_tuples() {
        let gns = gns_structure(&alg).unwrap();
        let rep = delta_report(&alg, &gns, 3, &tol).unwrap();
        let family = label.split('/').next().unwrap().to_string();
        if let Some((_, first)) = by_family.iter().find(|(f, _)| *f == family) {
            assert!((rep.delta - first).abs() <= 1e-9, "{label}");
        } else {
            by_family.push((family, rep.delta));
        }
        let flags = &rep.agreement;
        assert!(flags.h0_equals_h1 && flags.h0_equals_h2, "{label}");
        assert!(
            flags.beta0_matches_closed_form && flags.rank_nullity,
            "{label}"
        );
        assert!(flags.blocks_match_declared, "{label}");
    }
    assert_eq!(by_family.len(), 3);
}

#[test]
fn pinned_delta_variants_equal_delta() {
    let alg = c_m2();
    let gns = gns_structure(&alg).unwrap();
    let rep = delta_report(&alg, &gns, 0, &Tolerances::default()).unwrap();
    assert_eq!(rep.delta_star, rep.delta);
    assert_eq!(rep.delta_blackstar, rep.delta);
    assert!(rep.dim_h0.value <= rep.delta_star + 1e-12);
}

#[test]
fn group_algebras_match_the_betti_formula() {
    let tol = Tolerances::default();
    for name in ["Z2", "Z3", "Z4", "Z2xZ2", "S3"] {
        let table = FiniteGroupTable::named(name).unwrap();
        let alg = regular_rep_algebra(&table).unwrap();
        let gns = gns_structure(&alg).unwrap();
        let rep = delta_report(&alg, &gns, 1, &tol).unwrap();
        let formula = betti_delta_formula(&BettiInput::finite_group(table.order));
        assert!((formula - rep.delta).abs() <= 1e-9, "{name}");
    }
}

#[test]
fn obstructed_difference_quotients() {
    let tol = Tolerances::default();
    for alg in [c2(), m2(), c_m2()] {
        let gns = gns_structure(&alg).unwrap();
        let phi = phi_star(&gns, &tol).unwrap();
        assert!(phi.is_infinite());
        assert!(phi.defects.iter().all(|&d| d >= 1e-2));
        let zero =
            DerivationSpec::Tuple(vec![CMat::zeros(gns.dim, gns.dim); alg.generators().len()]);
        assert_eq!(conjugate_variable(&gns, &zero, &tol).unwrap().norm(), 0.0);
        assert!(
            derivation_well_defined(&gns, &zero, &tol)
                .unwrap()
                .well_defined
        );
    }
}

#[test]
fn non_generating_tuples_are_rejected_unless_requested() {
    let gens = [vec![pauli_x()]];
    let err = TracialAlgebra::build(&[2], &[1.0], &gens, AlgebraOptions::default()).unwrap_err();
    assert_eq!(
        err,
        Error::NotGenerating {
            generated: 2,
            total: 4
        }
    );

    let options = AlgebraOptions {
        subalgebra_mode: true,
        labels: None,
    };
    let alg = TracialAlgebra::build(&[2], &[1.0], &gens, options).unwrap();
    let gns = gns_structure(&alg).unwrap();
    assert!(matches!(
        compute_h0(&alg, &gns, &Tolerances::default()),
        Err(Error::NotGenerating { .. })
    ));
}

#[test]
fn invalid_weights() {
    let gens = [vec![scalar(0.0), scalar(1.0)]];
    for weights in [[0.5, 0.6], [1.0, 0.0], [f64::NAN, 0.5]] {
        let err = TracialAlgebra::build(&[1, 1], &weights, &gens, AlgebraOptions::default());
        assert!(matches!(err, Err(Error::WeightError(_))));
    }
}

#[test]
fn cutoff_sweep_on_a_generator_tuple() {
    let alg = m2();
    let gns = gns_structure(&alg).unwrap();
    let a = gns.generator_mult()[0].clone() * freedim_core::linalg::c(2.5, 0.0);
    let xs = gns.generator_mult().to_vec();
    let radii: Vec<f64> = (1..=6).map(|k| 0.5 * k as f64).collect();
    let sweep = convergence_sweep(&a, &xs, &radii, CutoffKind::SmoothBlend).unwrap();
    for p in &sweep {
        assert_eq!(p.hs_error <= 1e-10, p.radius >= 2.5, "R = {}", p.radius);
    }
}

/// Unions and relative complements of invariant subspaces stay invariant. This
/// guards the SVD backend: an inaccurate factorization shows up here as
/// residuals of order 1e-2.
#[test]
fn invariant_unions_and_complements_stay_invariant() {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for seed in 0..300u64 {
        let alg = match seed % 3 {
            0 => c2(),
            1 => m2(),
            _ => c_m2(),
        };
        let n = 1 + (seed % 2) as usize;
        let gns = gns_structure(&alg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + seed);
        let k1 = random_invariant_subspace(&mut rng, &gns, n, 1);
        let extra = random_invariant_subspace(&mut rng, &gns, n, 2);
        let mut vectors = k1.basis().to_vec();
        vectors.extend_from_slice(extra.basis());
        let k2 = HsSubspace::from_vectors(n, &gns, &vectors, tol.rank);
        assert!(k2.contains(&k1, 1e-9), "seed {seed}");
        let rest = k1.complement_within(&k2, &gns);
        assert_eq!(
            rest.complex_dim() + k1.complex_dim(),
            k2.complex_dim(),
            "seed {seed}"
        );
        for k in [&k1, &k2, &rest] {
            worst = worst.max(k.invariance_residual);
        }
    }
    assert!(worst <= 1e-10, "invariance residual {worst:.2e}");
}
