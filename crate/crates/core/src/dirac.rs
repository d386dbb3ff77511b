//! The Clifford module, the one-parameter Dirac family on each Frobenius
//! block, eigenvalue extraction, the Casimir eigenvalue bound, the candidate
//! scan and critical-rate detection.

use crate::algebra::{orthonormal_frame, rat_to_f64, Rat, DIM_M};
use crate::geometry::{octonion_structure_constants, OctonionConstants};
use crate::reptheory::{
    branch_h_module, build_carrier, casimir_g, hermitian_eigen, hom_block, m_isotropy_module,
    CMat, HModule, HomBlock, IrrepLabelG, IrrepLabelH, RepError, C64, CLUSTER_TOL,
};
use nalgebra::{Complex, DMatrix};
use once_cell::sync::Lazy;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

pub type RMat = DMatrix<f64>;

#[derive(Debug, thiserror::Error)]
pub enum DiracError {
    #[error("gamma matrices fail anticommutation (residual {0})")]
    Anticommutation(f64),
    #[error("3-form action has the wrong spectrum")]
    BadPhiSpectrum,
    #[error("no equivariant maps for {label} with twist {twist:?}")]
    EmptyBlock { label: IrrepLabelG, twist: Twist },
    #[error("block does not stay Hermitian (residual {0})")]
    NotHermitian(f64),
    #[error("block spectrum has imaginary parts beyond tolerance")]
    NonRealSpectrum,
    #[error("operator does not preserve the Hom space (residual {0})")]
    BlockNotPreserved(f64),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Which bundle the Dirac family is twisted by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Twist {
    /// twisted by the adjoint bundle of the canonical Sp(1)-bundle
    Adjoint,
    /// plain spinor bundle
    Untwisted,
}

/// The spinor space as the octonions: gamma_a is left multiplication by the
/// conjugate imaginary unit, which fixes the 3-form action to have eigenvalue
/// 7 on the unit spinor and -1 on its complement.
#[derive(Debug, Clone)]
pub struct CliffordModule {
    pub gammas: [RMat; 7],
    pub phi_action: RMat,
}

impl CliffordModule {
    /// Largest violation of gamma_a gamma_b + gamma_b gamma_a = -2 delta_ab.
    pub fn anticommutation_residual(&self) -> f64 {
        let id = RMat::identity(8, 8);
        let mut worst = 0.0f64;
        for a in 0..7 {
            for b in 0..7 {
                let anti = &self.gammas[a] * &self.gammas[b] + &self.gammas[b] * &self.gammas[a];
                let target = if a == b { &id * -2.0 } else { RMat::zeros(8, 8) };
                worst = worst.max((anti - target).norm());
            }
        }
        worst
    }
}

/// Builds the Clifford module from the octonion constants and verifies the
/// anticommutation relations and the 3-form spectrum {7 x1, -1 x7}.
pub fn build_clifford(oc: &OctonionConstants) -> Result<CliffordModule, DiracError> {
    let mut gammas: Vec<RMat> = Vec::with_capacity(7);
    for a in 1..=7u8 {
        let mut g = RMat::zeros(8, 8);
        g[(a as usize, 0)] = -1.0;
        g[(0, a as usize)] = 1.0;
        for b in 1..=7u8 {
            for c in 1..=7u8 {
                let v = oc.get(a, b, c);
                if v != 0 {
                    g[(c as usize, b as usize)] = -(v as f64);
                }
            }
        }
        gammas.push(g);
    }
    let gammas: [RMat; 7] = gammas.try_into().unwrap();
    let mut phi_action = RMat::zeros(8, 8);
    for ([a, b, c], v) in oc.sorted_triples() {
        phi_action += &gammas[*a as usize - 1]
            * &gammas[*b as usize - 1]
            * &gammas[*c as usize - 1]
            * (*v as f64);
    }
    let module = CliffordModule { gammas, phi_action };
    let resid = module.anticommutation_residual();
    if resid > 1e-12 {
        return Err(DiracError::Anticommutation(resid));
    }
    let (vals, _) = hermitian_eigen(&module.phi_action.map(|x| Complex::new(x, 0.0)));
    let ok = vals[7] > 7.0 - 1e-9
        && vals[7] < 7.0 + 1e-9
        && vals[..7].iter().all(|v| (v + 1.0).abs() < 1e-9);
    if !ok {
        return Err(DiracError::BadPhiSpectrum);
    }
    Ok(module)
}

/// Memoized Clifford module for the solved nearly-G2 structure.
pub fn clifford() -> &'static CliffordModule {
    static M: Lazy<CliffordModule> = Lazy::new(|| {
        build_clifford(&octonion_structure_constants()).expect("octonion table is consistent")
    });
    &M
}

fn cc(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

fn to_complex(m: &RMat) -> CMat {
    m.map(cc)
}

/// su(2) basis T_a = -i sigma_a; ad T_a in that basis: [T_a, T_b] = 2 eps_abd T_d.
pub fn ad_t(a: usize) -> RMat {
    let mut m = RMat::zeros(3, 3);
    let eps = |i: usize, j: usize, k: usize| -> f64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    };
    for b in 0..3 {
        for d in 0..3 {
            m[(d, b)] = 2.0 * eps(a, b, d);
        }
    }
    m
}

/// H-action on the spinor space: trivial on the unit spinor, the isotropy
/// action on the seven imaginary units.
pub fn delta_module() -> HModule {
    let m_iso = m_isotropy_module();
    let action: Vec<CMat> = (0..6)
        .map(|i| {
            let mut out = CMat::zeros(8, 8);
            out.view_mut((1, 1), (7, 7)).copy_from(&m_iso.action[i]);
            out
        })
        .collect();
    HModule {
        dim: 8,
        action: action.try_into().unwrap(),
    }
}

/// The adjoint twist fiber: su(2) with the isotropy acting through the
/// downstairs projection, I_{10+s} acting as ad T_s.
pub fn adjoint_twist_module() -> HModule {
    let action: Vec<CMat> = (0..6)
        .map(|i| {
            if i < 3 {
                CMat::zeros(3, 3)
            } else {
                to_complex(&ad_t(i - 3))
            }
        })
        .collect();
    HModule {
        dim: 3,
        action: action.try_into().unwrap(),
    }
}

/// Target module for a given twist.
pub fn target_module(twist: Twist) -> HModule {
    match twist {
        Twist::Untwisted => delta_module(),
        Twist::Adjoint => delta_module().tensor(&adjoint_twist_module()),
    }
}

/// Decomposition of the twisted fiber Delta (x) W_(0,2) into H-irreducibles.
pub fn delta_tensor_decomposition() -> Result<BTreeMap<IrrepLabelH, usize>, RepError> {
    branch_h_module(&target_module(Twist::Adjoint))
}

/// A Frobenius block of the Dirac family: the operator restricted to the
/// equivariant Hom space, affine in the family parameter t.
#[derive(Debug, Clone)]
pub struct DiracBlock {
    pub label: IrrepLabelG,
    pub twist: Twist,
    pub dim: usize,
    /// canonical-connection part (the t = 1 operator)
    canonical: CMat,
    /// block of the 3-form action
    phi_block: CMat,
    /// block of the fiber operator sum_a gamma_a (x) ad T_a (adjoint twist only)
    fiber: Option<CMat>,
    pub hom: HomBlock,
}

impl DiracBlock {
    /// Block matrix of the family member at parameter t.
    pub fn matrix_at(&self, t: f64) -> CMat {
        &self.canonical + &self.phi_block * cc((t - 1.0) / 2.0)
    }

    pub fn fiber_block(&self) -> Option<&CMat> {
        self.fiber.as_ref()
    }
}

/// Compresses an ambient vec-operator to the Hom basis, checking that the
/// subspace is preserved. The basis is orthonormal, so the Gram matrix of
/// the generalized symmetric problem is asserted to be the identity rather
/// than factored.
fn compress(op: &CMat, hom: &HomBlock) -> Result<CMat, DiracError> {
    let b = &hom.basis;
    let gram = b.adjoint() * b;
    let id = CMat::identity(hom.dim, hom.dim);
    let gram_resid = (&gram - &id).norm();
    if gram_resid > 1e-10 {
        return Err(DiracError::NotHermitian(gram_resid));
    }
    let m = b.adjoint() * op * b;
    let resid = (op * b - b * &m).norm() / (1.0 + op.norm());
    if resid > 1e-9 {
        return Err(DiracError::BlockNotPreserved(resid));
    }
    Ok(m)
}

fn build_block(label: IrrepLabelG, twist: Twist) -> Result<Arc<DiracBlock>, DiracError> {
    let carrier = build_carrier(label)?;
    let target = target_module(twist);
    let hom = hom_block(&carrier, &target)?;
    if hom.dim == 0 {
        return Err(DiracError::EmptyBlock { label, twist });
    }
    let cliff = clifford();
    type TwistOps = (Vec<CMat>, CMat, Option<CMat>);
    let (gammas, phi_op, fiber_op): TwistOps = match twist {
        Twist::Untwisted => (
            cliff.gammas.iter().map(to_complex).collect(),
            to_complex(&cliff.phi_action),
            None,
        ),
        Twist::Adjoint => {
            let i3 = CMat::identity(3, 3);
            let mut fiber = RMat::zeros(24, 24);
            for a in 0..3 {
                fiber += cliff.gammas[a].kronecker(&ad_t(a));
            }
            (
                cliff
                    .gammas
                    .iter()
                    .map(|g| to_complex(g).kronecker(&i3))
                    .collect(),
                to_complex(&cliff.phi_action).kronecker(&i3),
                Some(to_complex(&fiber)),
            )
        }
    };
    let ng = carrier.dim;
    let ig = CMat::identity(ng, ng);
    let frame = orthonormal_frame().expect("metric diagonal");
    let scales = frame.m_part();
    let n = hom.target_dim * ng;
    // canonical part: -sum_a (rho(Ihat_a)^T (x) gamma_a)
    let mut canonical_op = CMat::zeros(n, n);
    for a in 0..DIM_M {
        let rho_hat_t = carrier.rho[a].transpose() * cc(scales[a].scale);
        canonical_op -= rho_hat_t.kronecker(&gammas[a]);
    }
    let phi_amb = ig.kronecker(&phi_op);
    let canonical = compress(&canonical_op, &hom)?;
    let phi_block = compress(&phi_amb, &hom)?;
    let fiber = match fiber_op {
        Some(f) => Some(compress(&ig.kronecker(&f), &hom)?),
        None => None,
    };
    Ok(Arc::new(DiracBlock {
        label,
        twist,
        dim: hom.dim,
        canonical,
        phi_block,
        fiber,
        hom,
    }))
}

/// Builds (and memoizes) the Dirac block for a label and twist.
pub fn dirac_block(label: IrrepLabelG, twist: Twist) -> Result<Arc<DiracBlock>, DiracError> {
    type BlockCache = Mutex<HashMap<(IrrepLabelG, Twist), Arc<DiracBlock>>>;
    static CACHE: Lazy<BlockCache> = Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(hit) = CACHE.lock().unwrap().get(&(label, twist)) {
        return Ok(hit.clone());
    }
    let block = build_block(label, twist)?;
    CACHE.lock().unwrap().insert((label, twist), block.clone());
    Ok(block)
}

/// Whether the equivariant Hom space for (label, twist) is nonzero, without
/// building the block.
pub fn block_dimension(label: IrrepLabelG, twist: Twist) -> Result<usize, RepError> {
    let carrier = build_carrier(label)?;
    crate::reptheory::schur_count(&carrier, &target_module(twist))
}

/// Real eigenvalues of a Hermitian block matrix.
pub fn eigenvalues(m: &CMat) -> Result<Vec<f64>, DiracError> {
    let herm = (m - m.adjoint()).norm();
    if herm > 1e-9 {
        return Err(DiracError::NotHermitian(herm));
    }
    let (vals, _) = hermitian_eigen(m);
    Ok(vals)
}

/// Sorted spectrum of the block family member at parameter t.
pub fn block_spectrum(block: &DiracBlock, t: f64) -> Result<Vec<f64>, DiracError> {
    eigenvalues(&block.matrix_at(t))
}

/// Spectrum with multiplicities, clustered at the given tolerance.
pub fn spectrum_with_multiplicity(
    block: &DiracBlock,
    t: f64,
    tol: f64,
) -> Result<Vec<(f64, usize)>, DiracError> {
    Ok(cluster(&block_spectrum(block, t)?, tol))
}

pub fn cluster(sorted_vals: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in sorted_vals {
        match out.last_mut() {
            Some((rep, count)) if (v - *rep).abs() < tol => *count += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Residual of (D^{1/3})^2 = (-c_gamma + s) Id with s = 1/9 on the adjoint
/// twist and s = 49/9 untwisted.
pub fn casimir_square_check(block: &DiracBlock) -> Result<f64, DiracError> {
    let expect = casimir_square_value(block.label, block.twist);
    let m = block.matrix_at(1.0 / 3.0);
    let sq = &m * &m;
    let id = CMat::identity(block.dim, block.dim);
    Ok((sq - id * cc(rat_to_f64(expect))).norm())
}

/// The scalar value of the squared 1/3-family member.
pub fn casimir_square_value(label: IrrepLabelG, twist: Twist) -> Rat {
    let shift = match twist {
        Twist::Adjoint => Rat::new(1, 9),
        Twist::Untwisted => Rat::new(49, 9),
    };
    -casimir_g(label) + shift
}

/// Lower bound sqrt(-c_gamma + 1/9) - 7/6 on |spec| of the t = 0 twisted
/// block, valid whenever it is positive.
pub fn eigen_lower_bound(label: IrrepLabelG) -> f64 {
    (rat_to_f64(-casimir_g(label)) + 1.0 / 9.0).sqrt() - 7.0 / 6.0
}

/// Labels whose bound exceeds the scan threshold by less than this margin
/// are kept as candidates; the bound is treated as inconclusive that close
/// to the cut.
pub const RETENTION_MARGIN: f64 = 0.1;

/// Exhaustive scan over highest weights whose eigenvalue bound fails to
/// clear the threshold. Monotone growth of -c_gamma in each index bounds
/// the scan.
pub fn enumerate_candidates(threshold: f64) -> Vec<IrrepLabelG> {
    let cut = threshold + RETENTION_MARGIN;
    let mut out = Vec::new();
    let mut a = 0;
    while eigen_lower_bound(IrrepLabelG::new(a, 0, 0)) <= cut {
        let mut b = 0;
        while eigen_lower_bound(IrrepLabelG::new(a, b, 0)) <= cut {
            let mut c = 0;
            while eigen_lower_bound(IrrepLabelG::new(a, b, c)) <= cut {
                out.push(IrrepLabelG::new(a, b, c));
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    out
}

/// A critical decay rate: a twisted eigenvalue shifted by -5/2, with the
/// total eigenspace dimension (block multiplicity times dim V_gamma).
#[derive(Debug, Clone, Serialize)]
pub struct CriticalRate {
    pub rate: f64,
    pub eigenvalue: f64,
    pub label: IrrepLabelG,
    pub eigenspace_dim: usize,
}

/// All critical rates strictly inside (lo, hi). Rates within the cluster
/// tolerance of an endpoint count as boundary and are excluded.
pub fn critical_rates(lo: f64, hi: f64) -> Result<Vec<CriticalRate>, DiracError> {
    let bound = (lo + 2.5).abs().max((hi + 2.5).abs());
    let mut out = Vec::new();
    for label in enumerate_candidates(bound) {
        if block_dimension(label, Twist::Adjoint)? == 0 {
            continue;
        }
        let block = dirac_block(label, Twist::Adjoint)?;
        let carrier_dim = build_carrier(label)?.dim;
        for (val, mult) in spectrum_with_multiplicity(&block, 0.0, CLUSTER_TOL)? {
            let rate = val - 2.5;
            if rate > lo + CLUSTER_TOL && rate < hi - CLUSTER_TOL {
                out.push(CriticalRate {
                    rate,
                    eigenvalue: val,
                    label,
                    eigenspace_dim: mult * carrier_dim,
                });
            }
        }
    }
    out.sort_by(|x, y| x.rate.partial_cmp(&y.rate).unwrap());
    Ok(out)
}

/// Twisted t = 0 spectrum across all candidate labels below the threshold,
/// as (label, eigenvalue, block multiplicity).
pub fn candidate_spectra(threshold: f64) -> Result<Vec<(IrrepLabelG, f64, usize)>, DiracError> {
    let mut out = Vec::new();
    for label in enumerate_candidates(threshold) {
        if block_dimension(label, Twist::Adjoint)? == 0 {
            continue;
        }
        let block = dirac_block(label, Twist::Adjoint)?;
        for (val, mult) in spectrum_with_multiplicity(&block, 0.0, CLUSTER_TOL)? {
            out.push((label, val, mult));
        }
    }
    Ok(out)
}
