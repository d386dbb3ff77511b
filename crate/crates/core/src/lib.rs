#![allow(clippy::needless_range_loop)]

//! Computation suite for the squashed 7-sphere as a homogeneous nearly-G2
//! space and the asymptotically conical Spin(7) geometry over it: the
//! Lie-theoretic data of sp(2)+sp(1), the invariant 3-form solve, the
//! cohomogeneity-one metric flow, the invariant connection family and its
//! closed form, block-diagonalized Dirac spectra, spectral flows and the
//! index arithmetic for the deformation moduli of the connection family.

pub mod algebra;
pub mod dirac;
pub mod geometry;
pub mod index;
pub mod instanton;
pub mod reference;
pub mod reptheory;

pub use algebra::{basis_g, killing_form, structure_constants, LieElement, Quaternion, Rat};
pub use dirac::{
    build_clifford, block_spectrum, critical_rates, dirac_block, enumerate_candidates,
    CliffordModule, DiracBlock, Twist,
};
pub use geometry::flow::{bs_flow, FlowPath};
pub use geometry::{
    bs_metric_coeffs, mc_differential, octonion_structure_constants, phi_ansatz, psi_ansatz,
    solve_nearly_g2, wedge, InvariantForm,
};
pub use index::{
    connect_sum_index_difference, fiber_operator_spectrum, index_at_minus_5_2,
    scalar_family_positivity, spectral_flow_connection, trivial_block_fiber_eigenvalue,
    virtual_dimension, CohomClass, InstantonKind, P1Convention,
};
pub use instanton::{closed_form_phi, instanton_rhs, InstantonProfile, Y0};
pub use reptheory::{
    branch_to_h, build_carrier, casimir_g, casimir_h, hom_block, IrrepLabelG, IrrepLabelH,
    RepCarrier,
};
