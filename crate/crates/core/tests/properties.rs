//! Standalone property suites: randomized algebraic laws via proptest plus
//! the quantified invariants over all constructed objects.

use num_traits::Zero;
use proptest::prelude::*;
use squash7_core::algebra::{self, from_coords, LieElement, Rat};
use squash7_core::dirac::{self, Twist};
use squash7_core::geometry::{self, InvariantForm};
use squash7_core::reptheory::{branch_to_h, build_carrier, IrrepLabelH};

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| Rat::new(n, d))
}

fn element_strategy() -> impl Strategy<Value = LieElement> {
    proptest::collection::vec(rat_strategy(), 13).prop_map(|v| {
        let coords: [Rat; 13] = v.try_into().unwrap();
        from_coords(&coords)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_antisymmetric(x in element_strategy(), y in element_strategy()) {
        let lhs = x.bracket(&y);
        let rhs = y.bracket(&x).scale(-Rat::from(1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_jacobi(x in element_strategy(), y in element_strategy(), z in element_strategy()) {
        let s = x.bracket(&y.bracket(&z))
            .add(&y.bracket(&z.bracket(&x)))
            .add(&z.bracket(&x.bracket(&y)));
        prop_assert!(s.is_zero());
    }

    #[test]
    fn bracket_decomposes_exactly(x in element_strategy(), y in element_strategy()) {
        let b = x.bracket(&y);
        let coords = b.coords().unwrap();
        prop_assert_eq!(from_coords(&coords), b);
    }

    #[test]
    fn killing_form_symmetric_bilinear(
        x in element_strategy(),
        y in element_strategy(),
        c in rat_strategy(),
    ) {
        let k_xy = algebra::killing_form(&x, &y).unwrap();
        let k_yx = algebra::killing_form(&y, &x).unwrap();
        prop_assert_eq!(k_xy, k_yx);
        let k_scaled = algebra::killing_form(&x.scale(c), &y).unwrap();
        prop_assert_eq!(k_scaled, c * k_xy);
    }

    #[test]
    fn wedge_graded_commutative(
        a1 in rat_strategy(), b1 in rat_strategy(),
        a2 in rat_strategy(), b2 in rat_strategy(),
    ) {
        // degree 3 x degree 3: a ^ b = -(b ^ a)
        let f = geometry::phi_ansatz(a1, b1 * b1 + Rat::from(1));
        let g = geometry::phi_ansatz(a2, b2 * b2 + Rat::from(1));
        let fg = geometry::wedge(&f, &g).unwrap();
        let gf = geometry::wedge(&g, &f).unwrap();
        prop_assert_eq!(fg, gf.scale(-Rat::from(1)));
    }

    #[test]
    fn wedge_associative_with_omegas(k1 in 1usize..=3, k2 in 1usize..=3, c in rat_strategy()) {
        let w1 = geometry::omega(k1).scale(c);
        let w2 = geometry::omega(k2);
        let e12 = InvariantForm::from_terms(2, &[(Rat::from(1), &[1, 2])]).unwrap();
        let lhs = geometry::wedge(&geometry::wedge(&w1, &w2).unwrap(), &e12).unwrap();
        let rhs = geometry::wedge(&w1, &geometry::wedge(&w2, &e12).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_zero_on_invariant_forms(alpha in rat_strategy(), beta_sq in 1i64..=9) {
        prop_assume!(!alpha.is_zero());
        let f = algebra::structure_constants();
        let phi = geometry::phi_ansatz(alpha, Rat::from(beta_sq));
        let dphi = geometry::mc_differential(&phi, f).unwrap();
        let dd = geometry::mc_differential(&dphi, f).unwrap();
        prop_assert!(dd.is_zero());
        let psi = geometry::psi_ansatz(alpha, Rat::from(beta_sq));
        let dpsi = geometry::mc_differential(&psi, f).unwrap();
        let ddpsi = geometry::mc_differential(&dpsi, f).unwrap();
        prop_assert!(ddpsi.is_zero());
    }

    #[test]
    fn closed_form_profile_monotone_in_y0(
        y0a in 0.01f64..10.0,
        step in 0.1f64..5.0,
        alpha in 0.1f64..20.0,
        int_alpha in 0.01f64..100.0,
    ) {
        let lo = squash7_core::closed_form_phi(y0a, alpha, int_alpha);
        let hi = squash7_core::closed_form_phi(y0a + step, alpha, int_alpha);
        prop_assert!(hi > lo);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_eigen_reconstructs(
        n in 1usize..=12,
        seed in proptest::collection::vec(-1.0f64..1.0, 288),
        degenerate in proptest::bool::ANY,
    ) {
        use nalgebra::Complex;
        use squash7_core::reptheory::{hermitian_eigen, CMat};
        let a = CMat::from_fn(n, n, |i, j| {
            Complex::new(seed[i * 12 + j], seed[144 + i * 12 + j])
        });
        let h = if degenerate {
            // force clustered spectrum: a unitary conjugate of a matrix with
            // repeated integer eigenvalues
            let (_, q) = hermitian_eigen(&((&a + a.adjoint()) * Complex::new(0.5, 0.0)));
            let d = CMat::from_fn(n, n, |i, j| {
                if i == j {
                    Complex::new(((i % 3) as f64) - 1.0, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            });
            &q * d * q.adjoint()
        } else {
            (&a + a.adjoint()) * Complex::new(0.5, 0.0)
        };
        let (vals, vecs) = hermitian_eigen(&h);
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        let lam = CMat::from_fn(n, n, |i, j| {
            if i == j { Complex::new(vals[i], 0.0) } else { Complex::new(0.0, 0.0) }
        });
        let recon = &vecs * lam * vecs.adjoint();
        prop_assert!((recon - &h).norm() < 1e-11 * (1.0 + h.norm()));
        let gram = vecs.adjoint() * &vecs;
        prop_assert!((gram - CMat::identity(n, n)).norm() < 1e-12);
    }
}

#[test]
fn clifford_anticommutation_all_pairs() {
    assert!(dirac::clifford().anticommutation_residual() < 1e-12);
}

#[test]
fn d_squared_zero_on_generators() {
    assert!(geometry::d_squared_vanishes_on_generators(
        algebra::structure_constants()
    ));
}

#[test]
fn schur_dimension_agreement() {
    for label in dirac::enumerate_candidates(2.5) {
        for twist in [Twist::Adjoint, Twist::Untwisted] {
            let schur = dirac::block_dimension(label, twist).unwrap();
            match dirac::dirac_block(label, twist) {
                Ok(block) => {
                    assert_eq!(block.dim, schur, "{label} {twist:?}");
                    assert_eq!(block.hom.dim, schur);
                }
                Err(dirac::DiracError::EmptyBlock { .. }) => assert_eq!(schur, 0),
                Err(e) => panic!("{label} {twist:?}: {e}"),
            }
        }
    }
}

#[test]
fn casimir_scalar_on_all_carriers() {
    for label in dirac::enumerate_candidates(2.5) {
        let carrier = build_carrier(label).unwrap();
        assert!(carrier.casimir_scalar_residual() < 1e-9, "{label}");
        assert!(carrier.homomorphism_residual() < 1e-9, "{label}");
        let dims: usize = branch_to_h(&carrier)
            .unwrap()
            .iter()
            .map(|(h, m): (&IrrepLabelH, &usize)| h.dim() * m)
            .sum();
        assert_eq!(dims, carrier.dim);
    }
}
