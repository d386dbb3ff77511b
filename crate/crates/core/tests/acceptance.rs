//! Acceptance suite: one test per criterion, every tolerance pinned in the
//! assertion. Run with `cargo test --test acceptance -- --nocapture` to see
//! the per-criterion pass lines.

use squash7_core::algebra::{self, Rat};
use squash7_core::dirac::{
    block_spectrum, casimir_square_check, critical_rates, dirac_block, enumerate_candidates,
    Twist,
};
use squash7_core::geometry::{self, flow};
use squash7_core::index::{
    self, scalar_curvature_exact, scalar_simplified_exact, InstantonKind,
};
use squash7_core::instanton::{InstantonProfile, Y0};
use squash7_core::reference;
use squash7_core::reptheory::{branch_to_h, build_carrier, casimir_g, IrrepLabelG};
use std::time::Instant;

fn pass(n: u32, what: &str) {
    println!("criterion {n:2}: PASS - {what}");
}

#[test]
fn c01_nearly_g2_solve() {
    let t0 = Instant::now();
    let g2 = geometry::solve_nearly_g2().unwrap();
    assert_eq!(g2.alpha, Rat::from(3));
    assert_eq!(g2.beta_sq, Rat::new(9, 5));
    let residual = g2.residual();
    assert!(residual < 1e-10, "residual {residual}");
    let beta = g2.beta_f64();
    assert!((beta - 3.0 / 5f64.sqrt()).abs() < 1e-14);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(1, &format!("solve-g2 = (3, 3/sqrt(5)), |d phi - 4 psi| = {residual:.2e}, {elapsed:?}"));
}

#[test]
fn c02_bs_flow_conserved_and_cone_rate() {
    let t0 = Instant::now();
    let path = flow::bs_flow(1.0, 100.0, 1e-8).unwrap();
    let drift = path.max_conserved_residual();
    assert!(drift < 1e-8, "drift {drift}");
    let rate = path.cone_convergence_exponent();
    assert!((rate + 10.0 / 3.0).abs() < 0.1, "cone rate {rate}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(2, &format!("conserved drift {drift:.2e}, cone exponent {rate:.4}, {elapsed:?}"));
}

#[test]
fn c03_instanton_closed_form_and_decay() {
    let t0 = Instant::now();
    let mut worst_agreement = 0.0f64;
    for y0 in [0.1, 1.0, 10.0] {
        let p = InstantonProfile::compute(Y0::Finite(y0), 1.0, 50.0).unwrap();
        worst_agreement = worst_agreement.max(p.closed_form_agreement());
    }
    assert!(worst_agreement < 1e-7, "agreement {worst_agreement}");
    let decay = InstantonProfile::compute(Y0::Finite(1.0), 1.0, 300.0)
        .unwrap()
        .decay_rate()
        .unwrap();
    assert!((decay + 2.0).abs() < 0.05, "decay {decay}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(3, &format!("sup|ode - closed| = {worst_agreement:.2e}, decay exponent {decay:.4}, {elapsed:?}"));
}

#[test]
fn c04_candidate_enumeration() {
    let got = enumerate_candidates(2.5);
    let want = reference::candidate_labels();
    assert_eq!(got, want);
    pass(4, &format!("threshold 5/2 yields exactly the {} listed labels", got.len()));
}

#[test]
fn c05_spectrum_reproduction() {
    let t0 = Instant::now();
    let mut checked = 0usize;
    for (twist, table) in [
        (Twist::Adjoint, reference::twisted_spectra()),
        (Twist::Untwisted, reference::untwisted_spectra()),
    ] {
        for (label, expected) in table {
            if expected.is_empty() {
                continue;
            }
            let block = dirac_block(label, twist).unwrap();
            let got = block_spectrum(&block, 0.0).unwrap();
            let mut want: Vec<f64> = expected.iter().map(|s| s.value()).collect();
            want.sort_by(|x, y| x.partial_cmp(y).unwrap());
            assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(want.iter()) {
                assert!((g - w).abs() < 1e-9, "{label} {twist:?}: {g} vs {w}");
                checked += 1;
            }
        }
    }
    for (label, tw_sq, un_sq) in reference::square_values() {
        for (twist, want) in [(Twist::Adjoint, tw_sq), (Twist::Untwisted, un_sq)] {
            let block = dirac_block(label, twist).unwrap();
            let resid = casimir_square_check(&block).unwrap();
            assert!(resid < 1e-8, "{label} {twist:?} square residual {resid}");
            assert_eq!(
                squash7_core::dirac::casimir_square_value(label, twist),
                want
            );
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(5, &format!("{checked} eigenvalues matched to 1e-9; all 1/3-squares scalar, {elapsed:?}"));
}

#[test]
fn c06_interval_content() {
    let inside = critical_rates(-2.5, 0.0).unwrap();
    // eigenvalues in [-5/2, 5/2] <=> rates in [-5, 0]; scan the full band
    let band = critical_rates(-5.0 - 1e-6, 1e-6).unwrap();
    assert_eq!(band.len(), 1);
    assert!((band[0].eigenvalue - 0.5).abs() < 1e-9);
    assert_eq!(band[0].eigenspace_dim, 1);
    assert_eq!(inside.len(), 1);
    assert!((inside[0].rate + 2.0).abs() < 1e-9);
    pass(6, "only eigenvalue in [-5/2, 5/2] is 1/2, eigenspace dimension 1");
}

#[test]
fn c07_fiber_table() {
    let got = index::fiber_operator_spectrum();
    let want = reference::fiber_table();
    assert_eq!(got.len(), want.len());
    for ((v, m), (ev, em)) in got.iter().zip(want.iter()) {
        assert!((v - ev).abs() < 1e-9);
        assert_eq!(m, em);
    }
    let line = index::trivial_block_fiber_eigenvalue().unwrap();
    assert!((line + 4.0).abs() < 1e-9, "trivial line {line}");
    pass(7, "fiber spectrum {+-4 x4, +-2 x8}; trivial-line eigenvalue -4");
}

#[test]
fn c08_spectral_flows() {
    let flow = index::spectral_flow_connection().unwrap();
    assert_eq!(flow.total, 0);
    for b in &flow.blocks {
        assert_eq!(b.crossings, 0, "{}", b.label);
        assert!(b.min_abs_eigenvalue > 0.0);
    }
    assert!((flow.trivial_path_endpoint - 4.5).abs() < 1e-9);
    let scalar = index::scalar_family_positivity(4000);
    assert!(scalar.positive);
    assert!(scalar.minimum >= 42.0 - 1e-9);
    assert_eq!(scalar_simplified_exact(Rat::from(1)), Rat::from(42));
    assert_eq!(scalar_simplified_exact(Rat::new(1, 5)), Rat::new(378, 5));
    assert_eq!(
        scalar_curvature_exact(Rat::new(1, 5), Rat::new(1, 5), Rat::from(1)),
        Rat::new(378, 5)
    );
    assert_eq!(scalar.spectral_flow, 0);
    pass(8, "connection flow 0 (trivial path ends at 9/2); scalar family >= 42 with exact endpoints 42 and 378/5");
}

#[test]
fn c09_index_arithmetic() {
    let fam = index::index_at_minus_5_2(InstantonKind::Family, 0, 0).unwrap();
    assert_eq!(fam.value, 0);
    let lim = index::index_at_minus_5_2(InstantonKind::Limiting, 0, 0).unwrap();
    assert_eq!(lim.value, -2);
    // the closed-form assembly with (n1, n2) = (-4, 0)
    let diff = index::connect_sum_index_difference(
        Rat::from(-4),
        Rat::from(0),
        index::P1Convention::FourA,
    );
    assert_eq!(diff, Rat::from(-2));
    pass(9, "trivial-bundle index 0; family index 0; limiting index -2 via (1/12)[(2n1-n1^2)+(2n2-n2^2)]");
}

#[test]
fn c10_virtual_dimensions() {
    for nu in [-1.9, -1.5, -1.0, -0.5, -0.1] {
        assert_eq!(index::virtual_dimension(InstantonKind::Family, nu).unwrap(), 1);
        assert_eq!(
            index::virtual_dimension(InstantonKind::Limiting, nu).unwrap(),
            -1
        );
    }
    pass(10, "virtual dimensions 1 (family) and -1 (limiting) across nu in (-2, 0)");
}

#[test]
fn c11_property_suites() {
    // bracket antisymmetry and Jacobi over all basis triples
    let basis = algebra::basis_g();
    for x in basis.iter() {
        assert!(x.bracket(x).is_zero());
    }
    for i in 0..13 {
        for j in 0..13 {
            for k in 0..13 {
                let s = basis[i]
                    .bracket(&basis[j].bracket(&basis[k]))
                    .add(&basis[j].bracket(&basis[k].bracket(&basis[i])))
                    .add(&basis[k].bracket(&basis[i].bracket(&basis[j])));
                assert!(s.is_zero());
            }
        }
    }
    // Clifford anticommutation over all 28 pairs
    let cliff = squash7_core::dirac::clifford();
    assert!(cliff.anticommutation_residual() < 1e-12);
    // d^2 = 0 on all generators
    assert!(geometry::d_squared_vanishes_on_generators(
        algebra::structure_constants()
    ));
    // Schur-dimension agreement and Casimir-scalar carriers over every
    // constructed candidate label
    for label in enumerate_candidates(2.5) {
        let carrier = build_carrier(label).unwrap();
        assert!(carrier.casimir_scalar_residual() < 1e-9, "{label}");
        let eig = algebra::rat_to_f64(casimir_g(label));
        assert!(eig <= 0.0 || label == IrrepLabelG::new(0, 0, 0));
        let total: usize = branch_to_h(&carrier)
            .unwrap()
            .iter()
            .map(|(h, m)| h.dim() * m)
            .sum();
        assert_eq!(total, carrier.dim, "{label}");
        for twist in [Twist::Adjoint, Twist::Untwisted] {
            let schur = squash7_core::dirac::block_dimension(label, twist).unwrap();
            match dirac_block(label, twist) {
                Ok(block) => assert_eq!(block.dim, schur, "{label} {twist:?}"),
                Err(squash7_core::dirac::DiracError::EmptyBlock { .. }) => {
                    assert_eq!(schur, 0, "{label} {twist:?}")
                }
                Err(e) => panic!("{label} {twist:?}: {e}"),
            }
        }
    }
    pass(11, "bracket/Jacobi, Clifford, d^2 = 0, Schur counts and Casimir-scalar carriers all quantified");
}
