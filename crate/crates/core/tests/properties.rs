//! Invariants over randomly generated inputs.

mod common;

use ence_core::detect::{chen_test, pcc_test, pt_detect};
use ence_core::linalg::{
    eig_general, eig_herm, matching_distance, partial_trace, partial_transpose, spectra_equal, tensor,
};
use ence_core::preserver::{
    check_det_trace, check_ep_on_density, check_unital, classify_preserver, verify_main_theorem, Branch,
    MapKind,
};
use ence_core::states::{
    ginibre, onewcc_state, pcc_state, random_density, random_invertible, random_onewcc_spec,
    random_pcc_spec, random_unitary,
};
use ence_core::{BipartiteDims, CMatrix, Complex64, Seed, Side, Spectrum, Superoperator};
use proptest::prelude::*;

fn gin(d: usize, seed: u64) -> CMatrix {
    CMatrix::new(ginibre(d, d, &mut Seed(seed).rng())).unwrap()
}

fn herm(d: usize, seed: u64) -> CMatrix {
    let g = gin(d, seed);
    (&g + &g.adjoint()).scale_real(0.5)
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::A), Just(Side::B)]
}

/// `S` with condition number at most 100, so that `‖Ŝ − S‖ ≤ 1e-7·‖S‖` is
/// well within double precision.
fn invertible(d: usize, seed: u64) -> CMatrix {
    random_invertible(d, 100.0, Seed(seed)).unwrap()
}

fn perturbed(base: &Superoperator, seed: u64, size: f64) -> Superoperator {
    let n = base.d() * base.d();
    let e = gin(n, seed);
    let e = e.scale_real(size / e.frobenius_norm());
    Superoperator::new(base.matrix() + &e).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_mixed_product(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        let (a, b) = (gin(da, seed), gin(db, seed ^ 1));
        let (c, d) = (gin(da, seed ^ 2), gin(db, seed ^ 3));
        let lhs = &tensor(&a, &b) * &tensor(&c, &d);
        let rhs = tensor(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn tensor_associative(da in 1usize..4, db in 1usize..4, dc in 1usize..4, seed in any::<u64>()) {
        let (a, b, c) = (gin(da, seed), gin(db, seed ^ 1), gin(dc, seed ^ 2));
        let lhs = tensor(&tensor(&a, &b), &c);
        let rhs = tensor(&a, &tensor(&b, &c));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-13 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn partial_transpose_involution_and_trace(
        da in 1usize..5, db in 1usize..5, seed in any::<u64>(), s in side()
    ) {
        let dims = BipartiteDims::new(da, db).unwrap();
        let m = gin(dims.total(), seed);
        let pt = partial_transpose(&m, dims, s).unwrap();
        prop_assert_eq!(partial_transpose(&pt, dims, s).unwrap(), m.clone());
        prop_assert!((pt.trace() - m.trace()).norm() <= 1e-13);
        let h = herm(dims.total(), seed);
        prop_assert!(partial_transpose(&h, dims, s).unwrap().hermiticity_defect() == 0.0);
        // Partial transpose on both sides is the full transpose.
        let both = partial_transpose(&pt, dims, s.other()).unwrap();
        prop_assert_eq!(both, m.transpose());
    }

    #[test]
    fn partial_transpose_of_product_is_local_transpose(
        da in 1usize..4, db in 1usize..4, seed in any::<u64>()
    ) {
        let dims = BipartiteDims::new(da, db).unwrap();
        let (a, b) = (gin(da, seed), gin(db, seed ^ 5));
        let got = partial_transpose(&tensor(&a, &b), dims, Side::B).unwrap();
        prop_assert_eq!(got, tensor(&a, &b.transpose()));
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        let dims = BipartiteDims::new(da, db).unwrap();
        let (a, b) = (gin(da, seed), gin(db, seed ^ 7));
        let ab = tensor(&a, &b);
        let keep_a = partial_trace(&ab, dims, Side::B).unwrap();
        let keep_b = partial_trace(&ab, dims, Side::A).unwrap();
        prop_assert!(keep_a.max_abs_diff(&a.scale(b.trace())) <= 1e-12 * (1.0 + keep_a.max_abs()));
        prop_assert!(keep_b.max_abs_diff(&b.scale(a.trace())) <= 1e-12 * (1.0 + keep_b.max_abs()));
    }

    #[test]
    fn tensor_spectrum_is_pairwise_products(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        let (a, b) = (herm(da, seed), herm(db, seed ^ 9));
        let ea = eig_herm(&a).unwrap().real_values();
        let eb = eig_herm(&b).unwrap().real_values();
        let products: Vec<f64> = ea.iter().flat_map(|x| eb.iter().map(move |y| x * y)).collect();
        let got = eig_herm(&tensor(&a, &b)).unwrap().spectrum;
        prop_assert!(spectra_equal(&got, &Spectrum::from_real(&products), 1e-9).unwrap());
    }

    #[test]
    fn eig_herm_reconstructs(d in 1usize..17, seed in any::<u64>()) {
        let h = herm(d, seed);
        let sys = eig_herm(&h).unwrap();
        let v = sys.right_vectors.clone();
        let vals = sys.real_values();
        let recon = &(&v * &CMatrix::from_real_diagonal(&vals)) * &v.adjoint();
        prop_assert!(recon.max_abs_diff(&h) <= 1e-9 * h.max_abs().max(1.0));
        prop_assert!(v.is_unitary(1e-10));
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eig_herm_agrees_with_jacobi_oracle(d in 1usize..7, seed in any::<u64>()) {
        let h = herm(d, seed);
        let lib = eig_herm(&h).unwrap().real_values();
        let oracle = common::jacobi_hermitian_eigvals(&h);
        for (a, b) in lib.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + h.max_abs()));
        }
    }

    #[test]
    fn eig_general_agrees_on_hermitian_input(d in 1usize..9, seed in any::<u64>()) {
        let h = herm(d, seed);
        let g = eig_general(&h).unwrap();
        prop_assert!(spectra_equal(&g, &eig_herm(&h).unwrap().spectrum, 1e-8).unwrap());
        prop_assert!(g.max_imag_abs() <= 1e-8);
    }

    #[test]
    fn eig_general_trace_and_determinant(d in 1usize..8, seed in any::<u64>()) {
        let m = gin(d, seed);
        let spec = eig_general(&m).unwrap();
        let sum: Complex64 = spec.values().iter().sum();
        let prod: Complex64 = spec.values().iter().product();
        prop_assert!((sum - m.trace()).norm() <= 1e-9 * (1.0 + m.frobenius_norm()));
        let det = m.determinant();
        prop_assert!((prod - det).norm() <= 1e-8 * (1.0 + det.norm()));
    }

    #[test]
    fn spectra_equal_reflexive_symmetric(d in 1usize..7, seed in any::<u64>(), tol in 0.0f64..0.5) {
        let a = eig_general(&gin(d, seed)).unwrap();
        let b = eig_general(&gin(d, seed ^ 11)).unwrap();
        prop_assert!(spectra_equal(&a, &a, 0.0).unwrap());
        prop_assert_eq!(spectra_equal(&a, &b, tol).unwrap(), spectra_equal(&b, &a, tol).unwrap());
        let dist = matching_distance(&a, &b).unwrap();
        prop_assert!(spectra_equal(&a, &b, dist * (1.0 + 1e-12)).unwrap());
        prop_assert!((dist - matching_distance(&b, &a).unwrap()).abs() <= 1e-15);
    }

    #[test]
    fn spectra_equal_permutation_invariant(d in 1usize..7, seed in any::<u64>()) {
        let a = eig_general(&gin(d, seed)).unwrap();
        let mut reversed = a.values().to_vec();
        reversed.reverse();
        prop_assert!(spectra_equal(&a, &Spectrum::new(reversed), 0.0).unwrap());
    }

    #[test]
    fn superoperator_is_linear(d in 1usize..4, seed in any::<u64>(), c in -3.0f64..3.0) {
        let l = Superoperator::new(gin(d * d, seed)).unwrap();
        let (a, b) = (gin(d, seed ^ 1), gin(d, seed ^ 2));
        let lhs = l.apply(&(&a + &b.scale_real(c))).unwrap();
        let rhs = &l.apply(&a).unwrap() + &l.apply(&b).unwrap().scale_real(c);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn constructed_maps_match_definitions(d in 1usize..5, seed in any::<u64>()) {
        let s = invertible(d, seed);
        let s_inv = s.inverse_checked(1e8).unwrap();
        let a = gin(d, seed ^ 3);
        let sim = Superoperator::conjugation(&s).unwrap().apply(&a).unwrap();
        let tsim = Superoperator::transpose_conjugation(&s).unwrap().apply(&a).unwrap();
        let want_sim = &(&s_inv * &a) * &s;
        let want_tsim = &(&s_inv * &a.transpose()) * &s;
        prop_assert!(sim.max_abs_diff(&want_sim) <= 1e-10 * (1.0 + want_sim.max_abs()));
        prop_assert!(tsim.max_abs_diff(&want_tsim) <= 1e-10 * (1.0 + want_tsim.max_abs()));
    }

    #[test]
    fn lifting_is_consistent(
        da in 1usize..4, db in 1usize..4, seed in any::<u64>(), s in side()
    ) {
        let dims = BipartiteDims::new(da, db).unwrap();
        let d_map = dims.of(s);
        let l = Superoperator::new(gin(d_map * d_map, seed)).unwrap();
        let m = Superoperator::new(gin(d_map * d_map, seed ^ 4)).unwrap();
        // (I⊗Λ)(A⊗B) = A⊗Λ(B)
        let (a, b) = (gin(da, seed ^ 1), gin(db, seed ^ 2));
        let lifted = l.apply_partial(&tensor(&a, &b), dims, s).unwrap();
        let want = match s {
            Side::A => tensor(&l.apply(&a).unwrap(), &b),
            Side::B => tensor(&a, &l.apply(&b).unwrap()),
        };
        prop_assert!(lifted.max_abs_diff(&want) <= 1e-10 * (1.0 + want.max_abs()));
        // (I⊗Λ)∘(I⊗M) = I⊗(Λ∘M)
        let rho = gin(dims.total(), seed ^ 6);
        let twice = l.apply_partial(&m.apply_partial(&rho, dims, s).unwrap(), dims, s).unwrap();
        let once = l.compose(&m).unwrap().apply_partial(&rho, dims, s).unwrap();
        prop_assert!(twice.max_abs_diff(&once) <= 1e-10 * (1.0 + once.max_abs()));
        // lifted transpose is the partial transpose
        let t = Superoperator::transpose(d_map).apply_partial(&rho, dims, s).unwrap();
        prop_assert!(t.max_abs_diff(&partial_transpose(&rho, dims, s).unwrap()) <= 1e-12);
    }

    #[test]
    fn random_states_are_valid(d in 1usize..7, rank_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let rank = 1 + ((d - 1) as f64 * rank_frac) as usize;
        let rho = random_density(d, rank, Seed(seed)).unwrap();
        let vals = eig_herm(rho.as_cmatrix()).unwrap().real_values();
        prop_assert!(vals.iter().all(|&v| v >= -1e-12));
        prop_assert!((vals.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(vals.iter().filter(|&&v| v > 1e-10).count() == rank);
        prop_assert!(random_unitary(d, Seed(seed)).unwrap().is_unitary(1e-12));
    }

    #[test]
    fn product_eigenbasis_states_are_never_detected(
        da in 2usize..5, db in 2usize..5, seed in any::<u64>(), s in side()
    ) {
        let dims = BipartiteDims::new(da, db).unwrap();
        let rho = pcc_state(&random_pcc_spec(dims, Seed(seed)).unwrap()).unwrap();
        let r = pt_detect(&rho, dims, s, 1e-8).unwrap();
        prop_assert!(!r.detected, "deviation {}", r.deviation);
        prop_assert!(pcc_test(&rho, dims, 1e-8).unwrap());
    }

    #[test]
    fn pt_deviation_equal_on_both_sides(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        // ρ^{T_A} = (ρ^{T_B})ᵀ has the same spectrum.
        let dims = BipartiteDims::new(da, db).unwrap();
        let rho = random_density(dims.total(), dims.total(), Seed(seed)).unwrap();
        let a = pt_detect(&rho, dims, Side::A, 1e-8).unwrap();
        let b = pt_detect(&rho, dims, Side::B, 1e-8).unwrap();
        prop_assert!((a.deviation - b.deviation).abs() <= 1e-10);
    }

    #[test]
    fn onewcc_passes_commutation_under_local_unitary_on_a(
        da in 2usize..4, db in 2usize..4, seed in any::<u64>()
    ) {
        let dims = BipartiteDims::new(da, db).unwrap();
        let rho = onewcc_state(&random_onewcc_spec(dims, Seed(seed)).unwrap()).unwrap();
        prop_assert!(chen_test(&rho, dims, Side::B, 1e-8).unwrap().passes);
        let v = tensor(&random_unitary(da, Seed(seed ^ 1)).unwrap(), &CMatrix::identity(db));
        let rotated = ence_core::DensityMatrix::new(&(&v * rho.as_cmatrix()) * &v.adjoint()).unwrap();
        prop_assert!(chen_test(&rotated, dims, Side::B, 1e-8).unwrap().passes);
        // classical side B never shows a partial-transpose spectral change on B
        prop_assert!(!pt_detect(&rho, dims, Side::B, 1e-8).unwrap().detected);
    }

    #[test]
    fn ep_maps_pass_every_check(d in 2usize..4, seed in any::<u64>(), transpose in any::<bool>()) {
        let s = invertible(d, seed);
        let l = if transpose {
            Superoperator::transpose_conjugation(&s).unwrap()
        } else {
            Superoperator::conjugation(&s).unwrap()
        };
        prop_assert!(check_unital(&l, 1e-8));
        prop_assert!(check_det_trace(&l, 20, Seed(seed ^ 1), 1e-7).unwrap());
        prop_assert!(check_ep_on_density(&l, 20, Seed(seed ^ 2), 1e-7).unwrap().ep_on_samples);
    }

    #[test]
    fn perturbed_maps_fail_unitality_and_ep(d in 2usize..4, seed in any::<u64>(), size in 1e-3f64..1e-1) {
        let l = perturbed(&Superoperator::conjugation(&invertible(d, seed)).unwrap(), seed ^ 1, size);
        prop_assert!(!check_unital(&l, 1e-8));
        prop_assert!(!check_ep_on_density(&l, 20, Seed(seed ^ 2), 1e-7).unwrap().ep_on_samples);
        prop_assert_eq!(classify_preserver(&l, 1e-8).kind, MapKind::NotEp);
    }

    #[test]
    fn classify_round_trip(d in 1usize..5, seed in any::<u64>(), transpose in any::<bool>()) {
        let s = invertible(d, seed);
        let (l, kind) = if transpose {
            (Superoperator::transpose_conjugation(&s).unwrap(), MapKind::TransposeSimilarity)
        } else {
            (Superoperator::conjugation(&s).unwrap(), MapKind::Similarity)
        };
        let form = classify_preserver(&l, 1e-8);
        // d = 1 maps are both kinds at once; the first match wins.
        if d > 1 {
            prop_assert_eq!(form.kind, kind);
        }
        let s_hat = form.s.expect("recovered S");
        let rebuilt = match form.kind {
            MapKind::Similarity => Superoperator::conjugation(&s_hat).unwrap(),
            _ => Superoperator::transpose_conjugation(&s_hat).unwrap(),
        };
        prop_assert!(rebuilt.max_abs_diff(&l) <= 1e-8 * (1.0 + l.matrix().max_abs()));
        prop_assert!((s_hat.determinant().norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn main_theorem_branches(d in 2usize..4, da in 2usize..4, seed in any::<u64>(), transpose in any::<bool>()) {
        let s = invertible(d, seed);
        let (l, want) = if transpose {
            (Superoperator::transpose_conjugation(&s).unwrap(), Branch::TransposeBranch)
        } else {
            (Superoperator::conjugation(&s).unwrap(), Branch::IdentityBranch)
        };
        let report = verify_main_theorem(&l, da, 8, Seed(seed ^ 3), 1e-7).unwrap();
        prop_assert_eq!(report.branch, want);
        prop_assert!(report.max_deviation <= 1e-7);
    }
}
