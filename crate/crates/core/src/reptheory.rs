//! Irreducible representation carriers for Sp(2) x Sp(1), branching to
//! Sp(1)_u x Sp(1)_d, Casimir eigenvalues and equivariant Hom-space bases.
//!
//! Carriers are built from the standard 4-dimensional complex realization of
//! sp(2) by explicit tensor constructions plus Casimir eigenprojection; every
//! carrier is verified at construction (homomorphism property, scalar
//! Casimir, anti-hermiticity). All carrier bases are orthonormal, so the
//! constructed representation matrices are anti-hermitian and every spectral
//! computation downstream is structurally real.

use crate::algebra::{
    basis_g, orthonormal_frame, rat_to_f64, LieElement, Quaternion, Rat, DIM_G, DIM_M,
};
use nalgebra::{Complex, DMatrix};
use num_traits::Zero;
use once_cell::sync::Lazy;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Relative eigenvalue-cluster tolerance used in branching and projections.
pub const CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RepError {
    #[error("unsupported highest-weight label {0}")]
    UnsupportedLabel(String),
    #[error("carrier verification failed for {label}: {reason}")]
    CarrierInvalid { label: String, reason: String },
    #[error("non-integral multiplicity while branching {0}")]
    NonIntegralMultiplicity(String),
    #[error("numerically degenerate rank decision in the intertwiner solve")]
    NumericallyDegenerate,
    #[error("Hom-space dimension {found} does not match the Schur count {expected}")]
    SchurMismatch { found: usize, expected: usize },
}

/// Highest-weight label (a, b, c) for Sp(2) x Sp(1).
///
/// Dictionary: V_(0,1) is the standard 4-dimensional representation of
/// Sp(2), V_(1,0) the 5-dimensional one, W_c the (c+1)-dimensional Sp(1)
/// representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IrrepLabelG {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl IrrepLabelG {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Self { a, b, c }
    }
}

impl fmt::Display for IrrepLabelG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Label (p, q) for Sp(1)_u x Sp(1)_d, of dimension (p+1)(q+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IrrepLabelH {
    pub p: u32,
    pub q: u32,
}

impl IrrepLabelH {
    pub fn new(p: u32, q: u32) -> Self {
        Self { p, q }
    }

    pub fn dim(&self) -> usize {
        ((self.p + 1) * (self.q + 1)) as usize
    }
}

impl fmt::Display for IrrepLabelH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Casimir eigenvalue on V_(a,b,c) in the squashed normalization.
pub fn casimir_g(label: IrrepLabelG) -> Rat {
    let (a, b, c) = (label.a as i64, label.b as i64, label.c as i64);
    -Rat::new(5, 9)
        * Rat::from(4 * a * a + 2 * b * b + 3 * c * c + 4 * a * b + 12 * a + 8 * b + 6 * c)
}

/// Casimir eigenvalue on W_(p,q) in the same normalization.
pub fn casimir_h(label: IrrepLabelH) -> Rat {
    let (p, q) = (label.p as i64, label.q as i64);
    -Rat::new(2, 9) * Rat::from(5 * p * p + 3 * q * q + 10 * p + 6 * q)
}

fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// q = w + xi + yj + zk as [[w + xi, y + zi], [-y + zi, w - xi]].
fn quaternion_to_c2(q: &Quaternion) -> CMat {
    let (w, x, y, z) = (
        rat_to_f64(q.w),
        rat_to_f64(q.x),
        rat_to_f64(q.y),
        rat_to_f64(q.z),
    );
    CMat::from_row_slice(2, 2, &[c64(w, x), c64(y, z), c64(-y, z), c64(w, -x)])
}

/// Standard representation of sp(2) on C^4, blockwise from the quaternionic
/// entries; the sp(1) factor acts as zero.
fn std4(x: &LieElement) -> CMat {
    let mut out = CMat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let blk = quaternion_to_c2(&x.m[i][j]);
            out.view_mut((2 * i, 2 * j), (2, 2)).copy_from(&blk);
        }
    }
    out
}

/// Standard representation of the sp(1) factor on C^2.
fn std2(x: &LieElement) -> CMat {
    quaternion_to_c2(&x.q)
}

/// Derivation action on Sym^c(C^n), in an orthonormal basis of the symmetric
/// power (monomial basis rescaled by sqrt of the multiset weight).
fn sym_power(m: &CMat, c: usize) -> CMat {
    let n = m.nrows();
    let basis = multisets(n, c);
    let index: HashMap<Vec<usize>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect();
    let weight = |b: &[usize]| -> f64 {
        let mut w = 1.0;
        let mut run = 1;
        for i in 1..b.len() {
            if b[i] == b[i - 1] {
                run += 1;
                w *= run as f64;
            } else {
                run = 1;
            }
        }
        w
    };
    let scales: Vec<f64> = basis.iter().map(|b| weight(b).sqrt()).collect();
    let mut out = CMat::zeros(basis.len(), basis.len());
    for (bi, b) in basis.iter().enumerate() {
        for pos in 0..c {
            for k in 0..n {
                let coeff = m[(k, b[pos])];
                if coeff.is_zero() {
                    continue;
                }
                let mut nb = b.clone();
                nb[pos] = k;
                nb.sort_unstable();
                let target = index[&nb];
                out[(target, bi)] += coeff * (scales[target] / scales[bi]);
            }
        }
    }
    out
}

fn multisets(n: usize, c: usize) -> Vec<Vec<usize>> {
    if c == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; c];
    loop {
        out.push(cur.clone());
        // next non-decreasing tuple
        let mut i = c;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 < n {
                let v = cur[i] + 1;
                for slot in cur.iter_mut().skip(i) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Derivation action on Lambda^2(C^4), basis e_i ^ e_j with i < j.
fn lambda2(m: &CMat) -> CMat {
    let pairs: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
        .collect();
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut out = CMat::zeros(6, 6);
    for (bi, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..4 {
            let c1 = m[(k, i)];
            if !c1.is_zero() && k != j {
                let (key, sign) = if k < j { ((k, j), 1.0) } else { ((j, k), -1.0) };
                out[(index[&key], bi)] += c1 * c64(sign, 0.0);
            }
            let c2 = m[(k, j)];
            if !c2.is_zero() && k != i {
                let (key, sign) = if i < k { ((i, k), 1.0) } else { ((k, i), -1.0) };
                out[(index[&key], bi)] += c2 * c64(sign, 0.0);
            }
        }
    }
    out
}

fn tensor_rep(r1: &[CMat], r2: &[CMat]) -> Vec<CMat> {
    let (n1, n2) = (r1[0].nrows(), r2[0].nrows());
    let (i1, i2) = (CMat::identity(n1, n1), CMat::identity(n2, n2));
    r1.iter()
        .zip(r2.iter())
        .map(|(a, b)| a.kronecker(&i2) + i1.kronecker(b))
        .collect()
}

/// Eigenvalues ascending with matching orthonormal eigenvector columns,
/// by cyclic Jacobi with complex rotations.
///
/// Self-contained by necessity: the library eigensolver returns mispaired
/// eigenvectors on some clustered Hermitian inputs, and everything
/// downstream (isotypic splitting, intertwiner kernels, block spectra)
/// rides on accurate eigenpairs. Jacobi is unconditionally stable at the
/// matrix sizes appearing here.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let mut h = (m + m.adjoint()) * c64(0.5, 0.0);
    let mut v = CMat::identity(n, n);
    let scale = h.norm().max(1e-300);
    let mut converged = false;
    let mut prev_off = f64::INFINITY;
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h[(p, q)].norm_sqr();
            }
        }
        let off = off.sqrt();
        // done when the off-diagonal mass reaches the roundoff floor or
        // stops shrinking there
        if off <= 1e-13 * scale || (off <= 1e-12 * scale && off >= 0.5 * prev_off) {
            converged = true;
            break;
        }
        prev_off = off;
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                let habs = hpq.norm();
                // entries at the roundoff floor are annihilated directly;
                // rotating on them risks underflow in the phase quotient
                if habs <= 1e-18 * scale {
                    h[(p, q)] = c64(0.0, 0.0);
                    h[(q, p)] = c64(0.0, 0.0);
                    continue;
                }
                let a = h[(p, p)].re;
                let b = h[(q, q)].re;
                let tau = (b - a) / (2.0 * habs);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let se = c64(hpq.re / habs * s, hpq.im / habs * s);
                // H <- J^dag H J for the rotation in the (p, q) plane
                for k in 0..n {
                    let (xp, xq) = (h[(p, k)], h[(q, k)]);
                    h[(p, k)] = xp * c64(c, 0.0) - se * xq;
                    h[(q, k)] = se.conj() * xp + xq * c64(c, 0.0);
                }
                for k in 0..n {
                    let (xp, xq) = (h[(k, p)], h[(k, q)]);
                    h[(k, p)] = xp * c64(c, 0.0) - se.conj() * xq;
                    h[(k, q)] = se * xp + xq * c64(c, 0.0);
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * c64(c, 0.0) - se.conj() * vq;
                    v[(k, q)] = se * vp + vq * c64(c, 0.0);
                }
                h[(p, q)] = c64(0.0, 0.0);
                h[(q, p)] = c64(0.0, 0.0);
                h[(p, p)] = c64(h[(p, p)].re, 0.0);
                h[(q, q)] = c64(h[(q, q)].re, 0.0);
            }
        }
    }
    assert!(converged, "Jacobi eigensolver failed to converge");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].re.partial_cmp(&h[(j, j)].re).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| h[(i, i)].re).collect();
    let vecs = CMat::from_columns(
        &order
            .iter()
            .map(|&i| v.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (vals, vecs)
}

/// Weights 1/|I_A|^2 of the invariant metric, used in Casimir contractions.
fn casimir_weights() -> &'static [f64; DIM_G] {
    static W: Lazy<[f64; DIM_G]> = Lazy::new(|| {
        let frame = orthonormal_frame().expect("metric is diagonal");
        let inv = frame.inverse_metric_diag();
        let mut out = [0.0; DIM_G];
        for a in 0..DIM_G {
            out[a] = rat_to_f64(inv[a]);
        }
        out
    });
    &W
}

fn casimir_contraction(rhos: &[CMat], indices: std::ops::Range<usize>) -> CMat {
    let n = rhos[0].nrows();
    let w = casimir_weights();
    let mut out = CMat::zeros(n, n);
    for a in indices {
        out += &rhos[a] * &rhos[a] * c64(w[a], 0.0);
    }
    out
}

/// A carrier: the 13 representation matrices over an orthonormal basis.
#[derive(Debug, Clone)]
pub struct RepCarrier {
    pub label: IrrepLabelG,
    pub dim: usize,
    pub rho: Vec<CMat>,
}

impl RepCarrier {
    pub fn casimir_full(&self) -> CMat {
        casimir_contraction(&self.rho, 0..DIM_G)
    }

    pub fn casimir_u(&self) -> CMat {
        casimir_contraction(&self.rho, DIM_M..DIM_M + 3)
    }

    pub fn casimir_d(&self) -> CMat {
        casimir_contraction(&self.rho, DIM_M + 3..DIM_G)
    }

    /// Residual of the homomorphism property over all basis pairs.
    pub fn homomorphism_residual(&self) -> f64 {
        let f = crate::algebra::structure_constants();
        let mut worst = 0.0f64;
        for a in 0..DIM_G {
            for b in 0..DIM_G {
                let mut rhs = CMat::zeros(self.dim, self.dim);
                for c in 0..DIM_G {
                    let coef = f.get_f64(c, a, b);
                    if coef != 0.0 {
                        rhs += &self.rho[c] * c64(coef, 0.0);
                    }
                }
                let lhs = &self.rho[a] * &self.rho[b] - &self.rho[b] * &self.rho[a];
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    /// Residual of Cas = casimir_g(label) * Id.
    pub fn casimir_scalar_residual(&self) -> f64 {
        let expect = rat_to_f64(casimir_g(self.label));
        let id = CMat::identity(self.dim, self.dim);
        (self.casimir_full() - id * c64(expect, 0.0)).norm()
    }

    fn verify(&self) -> Result<(), RepError> {
        for (i, r) in self.rho.iter().enumerate() {
            if (r + r.adjoint()).norm() > 1e-9 {
                return Err(RepError::CarrierInvalid {
                    label: self.label.to_string(),
                    reason: format!("rho(I_{}) is not anti-hermitian", i + 1),
                });
            }
        }
        let h = self.homomorphism_residual();
        if h > 1e-9 {
            return Err(RepError::CarrierInvalid {
                label: self.label.to_string(),
                reason: format!("homomorphism residual {h}"),
            });
        }
        let c = self.casimir_scalar_residual();
        if c > 1e-8 {
            return Err(RepError::CarrierInvalid {
                label: self.label.to_string(),
                reason: format!("Casimir residual {c}"),
            });
        }
        Ok(())
    }
}

/// Projects a representation onto the G-Casimir eigenspace with the given
/// eigenvalue; the projected matrices act on an orthonormal eigenbasis.
fn casimir_eigenproject(rhos: &[CMat], target: f64) -> Result<Vec<CMat>, RepError> {
    let cas = casimir_contraction(rhos, 0..DIM_G);
    let (vals, vecs) = hermitian_eigen(&cas);
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let cols: Vec<usize> = (0..vals.len())
        .filter(|&i| (vals[i] - target).abs() < CLUSTER_TOL * scale.max(1.0))
        .collect();
    if cols.is_empty() {
        return Err(RepError::NumericallyDegenerate);
    }
    let p = CMat::from_columns(&cols.iter().map(|&i| vecs.column(i).into_owned()).collect::<Vec<_>>());
    Ok(rhos.iter().map(|r| p.adjoint() * r * &p).collect())
}

fn sp2_rep(a: u32, b: u32) -> Result<Vec<CMat>, RepError> {
    let basis = basis_g();
    let std: Vec<CMat> = basis.iter().map(std4).collect();
    match (a, b) {
        (0, 0) => Ok(basis.iter().map(|_| CMat::zeros(1, 1)).collect()),
        (0, 1) => Ok(std),
        (0, b) => Ok(std.iter().map(|m| sym_power(m, b as usize)).collect()),
        (1, 0) => {
            // trace-free part of Lambda^2 C^4: project out the invariant line
            let l2: Vec<CMat> = std.iter().map(lambda2).collect();
            let mut s = CMat::zeros(6, 6);
            for r in &l2 {
                s += r.adjoint() * r;
            }
            let (vals, vecs) = hermitian_eigen(&s);
            if vals[0] > 1e-9 || vals[1] < 1e-6 {
                return Err(RepError::NumericallyDegenerate);
            }
            let cols: Vec<_> = (1..6).map(|i| vecs.column(i).into_owned()).collect();
            let p = CMat::from_columns(&cols);
            Ok(l2.iter().map(|r| p.adjoint() * r * &p).collect())
        }
        (1, b) => {
            let five = sp2_rep(1, 0)?;
            let t = tensor_rep(&five, &sp2_rep(0, b)?);
            casimir_eigenproject(&t, rat_to_f64(casimir_g(IrrepLabelG::new(1, b, 0))))
        }
        (2, 0) => {
            let five = sp2_rep(1, 0)?;
            let t: Vec<CMat> = five.iter().map(|m| sym_power(m, 2)).collect();
            casimir_eigenproject(&t, rat_to_f64(casimir_g(IrrepLabelG::new(2, 0, 0))))
        }
        _ => Err(RepError::UnsupportedLabel(format!("({a},{b})"))),
    }
}

fn wc_rep(c: u32) -> Vec<CMat> {
    let basis = basis_g();
    if c == 0 {
        return basis.iter().map(|_| CMat::zeros(1, 1)).collect();
    }
    basis
        .iter()
        .map(|x| sym_power(&std2(x), c as usize))
        .collect()
}

/// Builds (and memoizes) the carrier for a supported label.
///
/// Supported: (0,b,c) for b <= 3, (1,b,c), (2,0,c).
pub fn build_carrier(label: IrrepLabelG) -> Result<Arc<RepCarrier>, RepError> {
    static CACHE: Lazy<Mutex<HashMap<IrrepLabelG, Arc<RepCarrier>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(hit) = CACHE.lock().unwrap().get(&label) {
        return Ok(hit.clone());
    }
    let sp2 = sp2_rep(label.a, label.b)?;
    let rho = if label.c == 0 {
        sp2
    } else {
        tensor_rep(&sp2, &wc_rep(label.c))
    };
    let carrier = Arc::new(RepCarrier {
        label,
        dim: rho[0].nrows(),
        rho,
    });
    carrier.verify()?;
    CACHE.lock().unwrap().insert(label, carrier.clone());
    Ok(carrier)
}

/// A finite-dimensional H-module: the action of I_8..I_13 only.
#[derive(Debug, Clone)]
pub struct HModule {
    pub dim: usize,
    /// matrices of I_8..I_13 in order
    pub action: [CMat; 6],
}

impl HModule {
    pub fn casimir_u(&self) -> CMat {
        let w = casimir_weights();
        let mut out = CMat::zeros(self.dim, self.dim);
        for s in 0..3 {
            out += &self.action[s] * &self.action[s] * c64(w[DIM_M + s], 0.0);
        }
        out
    }

    pub fn casimir_d(&self) -> CMat {
        let w = casimir_weights();
        let mut out = CMat::zeros(self.dim, self.dim);
        for s in 3..6 {
            out += &self.action[s] * &self.action[s] * c64(w[DIM_M + s], 0.0);
        }
        out
    }

    pub fn tensor(&self, other: &HModule) -> HModule {
        let (i1, i2) = (
            CMat::identity(self.dim, self.dim),
            CMat::identity(other.dim, other.dim),
        );
        let action: Vec<CMat> = (0..6)
            .map(|i| self.action[i].kronecker(&i2) + i1.kronecker(&other.action[i]))
            .collect();
        HModule {
            dim: self.dim * other.dim,
            action: action.try_into().unwrap(),
        }
    }
}

/// H-module of a full carrier (restriction to the isotropy indices).
pub fn restrict_to_h(carrier: &RepCarrier) -> HModule {
    let action: Vec<CMat> = (DIM_M..DIM_G).map(|i| carrier.rho[i].clone()).collect();
    HModule {
        dim: carrier.dim,
        action: action.try_into().unwrap(),
    }
}

/// The isotropy representation on m in the orthonormal frame, as an
/// H-module. The action preserves the vertical/horizontal split, so the
/// matrices agree with the raw structure constants blockwise.
pub fn m_isotropy_module() -> HModule {
    let f = crate::algebra::structure_constants();
    let mut action: Vec<CMat> = Vec::with_capacity(6);
    for i in DIM_M..DIM_G {
        let mut m = CMat::zeros(DIM_M, DIM_M);
        for b in 0..DIM_M {
            for a in 0..DIM_M {
                m[(a, b)] = c64(f.get_f64(a, i, b), 0.0);
            }
        }
        action.push(m);
    }
    HModule {
        dim: DIM_M,
        action: action.try_into().unwrap(),
    }
}

/// One isotypic component: the label and an orthonormal basis of the full
/// isotypic subspace (dimension = multiplicity times the irreducible
/// dimension).
#[derive(Debug, Clone)]
pub struct IsotypicPiece {
    pub label: IrrepLabelH,
    pub basis: CMat,
}

/// Joint eigenspace decomposition of the two commuting quadratic Casimirs,
/// with an orthonormal basis per component.
pub fn isotypic_decomposition(module: &HModule) -> Result<Vec<IsotypicPiece>, RepError> {
    let cas_u = module.casimir_u();
    let cas_d = module.casimir_d();
    let (vu, pu) = hermitian_eigen(&cas_u);
    let mut out: Vec<IsotypicPiece> = Vec::new();
    let n = module.dim;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && (vu[j] - vu[i]).abs() < CLUSTER_TOL {
            j += 1;
        }
        let sub = CMat::from_columns(
            &(i..j).map(|k| pu.column(k).into_owned()).collect::<Vec<_>>(),
        );
        let cd = sub.adjoint() * &cas_d * &sub;
        let (vd, wd) = hermitian_eigen(&cd);
        let mut k = 0;
        while k < vd.len() {
            let mut l = k;
            while l < vd.len() && (vd[l] - vd[k]).abs() < CLUSTER_TOL {
                l += 1;
            }
            let label = identify_h_label(vu[i], vd[k])?;
            if (l - k) % label.dim() != 0 {
                return Err(RepError::NonIntegralMultiplicity(label.to_string()));
            }
            let cols: Vec<_> = (k..l).map(|m| wd.column(m).into_owned()).collect();
            let basis = &sub * CMat::from_columns(&cols);
            out.push(IsotypicPiece { label, basis });
            k = l;
        }
        i = j;
    }
    // merge pieces with equal labels that landed in different u-clusters
    let mut merged: BTreeMap<IrrepLabelH, Vec<CMat>> = BTreeMap::new();
    for piece in out {
        merged.entry(piece.label).or_default().push(piece.basis);
    }
    Ok(merged
        .into_iter()
        .map(|(label, bases)| {
            let cols: Vec<_> = bases
                .iter()
                .flat_map(|b| b.column_iter().map(|c| c.into_owned()))
                .collect();
            IsotypicPiece {
                label,
                basis: CMat::from_columns(&cols),
            }
        })
        .collect())
}

/// Branching of an H-module into irreducibles with multiplicities.
pub fn branch_h_module(module: &HModule) -> Result<BTreeMap<IrrepLabelH, usize>, RepError> {
    Ok(isotypic_decomposition(module)?
        .into_iter()
        .map(|p| (p.label, p.basis.ncols() / p.label.dim()))
        .collect())
}

/// Inverts the Casimir eigenvalue pair: lambda_u = -(10/9) p (p+2) and
/// lambda_d = -(2/3) q (q+2).
fn identify_h_label(lu: f64, ld: f64) -> Result<IrrepLabelH, RepError> {
    let p = -1.0 + (1.0 - 0.9 * lu).max(0.0).sqrt();
    let q = -1.0 + (1.0 - 1.5 * ld).max(0.0).sqrt();
    let (pr, qr) = (p.round(), q.round());
    if (p - pr).abs() > 1e-5 || (q - qr).abs() > 1e-5 || pr < 0.0 || qr < 0.0 {
        return Err(RepError::NonIntegralMultiplicity(format!(
            "lambda_u = {lu}, lambda_d = {ld}"
        )));
    }
    Ok(IrrepLabelH::new(pr as u32, qr as u32))
}

/// Branching of a carrier to H.
pub fn branch_to_h(carrier: &RepCarrier) -> Result<BTreeMap<IrrepLabelH, usize>, RepError> {
    branch_h_module(&restrict_to_h(carrier))
}

/// Basis of the equivariant maps V_gamma -> target.
#[derive(Debug, Clone)]
pub struct HomBlock {
    pub domain: IrrepLabelG,
    pub dim: usize,
    /// orthonormal columns of length target_dim * domain_dim (column-major
    /// vectorization of the maps)
    pub basis: CMat,
    pub target_dim: usize,
    pub domain_dim: usize,
}

/// Rank cutoff for the intertwiner null-space decision (singular-value
/// scale, relative). Eigenvalues of the equivariance Gram below cutoff^2 are
/// null; anything landing between the null band and `GAP_FLOOR` aborts.
pub const RANK_CUTOFF: f64 = 1e-6;
const GAP_FLOOR: f64 = 1e-4;

/// Solves the linear system eta . rho_gamma(I_i) = rho_target(I_i) . eta for
/// i = 8..13, at the default rank cutoff.
///
/// A map intertwining the isotropy action also intertwines its Casimirs, so
/// the solve is first restricted to the span of products of matching
/// isotypic components on the two sides, then the kernel of the equivariance
/// Gram operator is extracted there. The dimension is cross-checked against
/// the Schur count from the branchings.
pub fn hom_block(carrier: &RepCarrier, target: &HModule) -> Result<HomBlock, RepError> {
    hom_block_with_cutoff(carrier, target, RANK_CUTOFF)
}

/// [`hom_block`] with an explicit singular-value rank cutoff.
pub fn hom_block_with_cutoff(
    carrier: &RepCarrier,
    target: &HModule,
    cutoff: f64,
) -> Result<HomBlock, RepError> {
    let ng = carrier.dim;
    let nt = target.dim;
    let n = ng * nt;
    let dom = isotypic_decomposition(&restrict_to_h(carrier))?;
    let tgt = isotypic_decomposition(target)?;
    let mut expected = 0usize;
    let mut pair_cols: Vec<nalgebra::DVector<C64>> = Vec::new();
    for dp in &dom {
        if let Some(tp) = tgt.iter().find(|t| t.label == dp.label) {
            expected += (dp.basis.ncols() / dp.label.dim()) * (tp.basis.ncols() / dp.label.dim());
            let block = dp.basis.map(|z| z.conj()).kronecker(&tp.basis);
            pair_cols.extend(block.column_iter().map(|c| c.into_owned()));
        }
    }
    if pair_cols.is_empty() {
        return Ok(HomBlock {
            domain: carrier.label,
            dim: 0,
            basis: CMat::zeros(n, 0),
            target_dim: nt,
            domain_dim: ng,
        });
    }
    let p = CMat::from_columns(&pair_cols);
    let it = CMat::identity(nt, nt);
    let ig = CMat::identity(ng, ng);
    // restricted Gram L = sum_i (A_i P)^dag (A_i P), A_i = rho_i^T (x) I - I (x) tau_i
    let k = p.ncols();
    let mut l = CMat::zeros(k, k);
    for (i, tau) in target.action.iter().enumerate() {
        let rho_t = carrier.rho[DIM_M + i].transpose();
        let ap = (rho_t.kronecker(&it) - ig.kronecker(tau)) * &p;
        l += ap.adjoint() * ap;
    }
    let (vals, vecs) = hermitian_eigen(&l);
    let scale = vals.last().copied().unwrap_or(0.0).max(1.0);
    let null_bound = cutoff * cutoff * scale;
    let gap_bound = GAP_FLOOR * scale;
    let mut cols = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        if v < null_bound {
            cols.push(i);
        } else if v < gap_bound {
            return Err(RepError::NumericallyDegenerate);
        }
    }
    if cols.len() != expected {
        return Err(RepError::SchurMismatch {
            found: cols.len(),
            expected,
        });
    }
    let basis = if cols.is_empty() {
        CMat::zeros(n, 0)
    } else {
        let small =
            CMat::from_columns(&cols.iter().map(|&i| vecs.column(i).into_owned()).collect::<Vec<_>>());
        &p * small
    };
    Ok(HomBlock {
        domain: carrier.label,
        dim: cols.len(),
        basis,
        target_dim: nt,
        domain_dim: ng,
    })
}

/// Predicted Hom dimension: matching multiplicities of the two branchings.
pub fn schur_count(carrier: &RepCarrier, target: &HModule) -> Result<usize, RepError> {
    let bg = branch_to_h(carrier)?;
    let bt = branch_h_module(target)?;
    Ok(bg
        .iter()
        .map(|(label, m)| m * bt.get(label).copied().unwrap_or(0))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(a: u32, b: u32, c: u32) -> IrrepLabelG {
        IrrepLabelG::new(a, b, c)
    }

    #[test]
    fn casimir_formula_values() {
        assert_eq!(casimir_g(lab(0, 0, 0)), Rat::zero());
        assert_eq!(casimir_g(lab(0, 0, 2)), -Rat::new(40, 3));
        assert_eq!(casimir_g(lab(1, 0, 0)), -Rat::new(80, 9));
        assert_eq!(casimir_g(lab(0, 1, 1)), -Rat::new(95, 9));
        assert_eq!(casimir_h(IrrepLabelH::new(0, 0)), Rat::zero());
        assert_eq!(casimir_h(IrrepLabelH::new(0, 2)), -Rat::new(16, 3));
        assert_eq!(casimir_h(IrrepLabelH::new(1, 1)), -Rat::new(16, 3));
    }

    #[test]
    fn carrier_dimensions() {
        assert_eq!(build_carrier(lab(0, 1, 0)).unwrap().dim, 4);
        assert_eq!(build_carrier(lab(1, 0, 0)).unwrap().dim, 5);
        assert_eq!(build_carrier(lab(0, 2, 0)).unwrap().dim, 10);
        assert_eq!(build_carrier(lab(0, 0, 2)).unwrap().dim, 3);
        assert_eq!(build_carrier(lab(1, 1, 0)).unwrap().dim, 16);
        assert_eq!(build_carrier(lab(2, 0, 0)).unwrap().dim, 14);
    }

    #[test]
    fn carrier_casimir_scalar() {
        for l in [lab(0, 1, 1), lab(0, 2, 0), lab(1, 0, 1)] {
            let c = build_carrier(l).unwrap();
            assert!(c.casimir_scalar_residual() < 1e-9, "{l}");
            assert!(c.homomorphism_residual() < 1e-9, "{l}");
        }
    }

    #[test]
    fn known_branchings() {
        let b = branch_to_h(&build_carrier(lab(1, 0, 0)).unwrap()).unwrap();
        assert_eq!(b.get(&IrrepLabelH::new(0, 0)), Some(&1));
        assert_eq!(b.get(&IrrepLabelH::new(1, 1)), Some(&1));
        assert_eq!(b.len(), 2);

        let b = branch_to_h(&build_carrier(lab(0, 1, 1)).unwrap()).unwrap();
        let expect: Vec<(IrrepLabelH, usize)> = vec![
            (IrrepLabelH::new(0, 0), 1),
            (IrrepLabelH::new(0, 2), 1),
            (IrrepLabelH::new(1, 1), 1),
        ];
        assert_eq!(b.into_iter().collect::<Vec<_>>(), expect);

        let b = branch_to_h(&build_carrier(lab(0, 2, 0)).unwrap()).unwrap();
        assert_eq!(b.get(&IrrepLabelH::new(2, 0)), Some(&1));
        assert_eq!(b.get(&IrrepLabelH::new(1, 1)), Some(&1));
        assert_eq!(b.get(&IrrepLabelH::new(0, 2)), Some(&1));
    }

    #[test]
    fn trivial_branches_trivially() {
        let b = branch_to_h(&build_carrier(lab(0, 0, 0)).unwrap()).unwrap();
        assert_eq!(b.get(&IrrepLabelH::new(0, 0)), Some(&1));
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn m_branching() {
        let b = branch_h_module(&m_isotropy_module()).unwrap();
        assert_eq!(b.get(&IrrepLabelH::new(1, 1)), Some(&1));
        assert_eq!(b.get(&IrrepLabelH::new(0, 2)), Some(&1));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn h_casimir_formula_matches_constructed_pieces() {
        // total H-Casimir eigenvalue on each isotypic piece of m equals the
        // closed formula; in particular the (1,1) piece realizes -16/3
        let m = m_isotropy_module();
        let cas = m.casimir_u() + m.casimir_d();
        for piece in isotypic_decomposition(&m).unwrap() {
            let x = piece.basis.column(0);
            let val = (x.adjoint() * &cas * x)[(0, 0)].re;
            let expect = crate::algebra::rat_to_f64(casimir_h(piece.label));
            assert!((val - expect).abs() < 1e-9, "{}", piece.label);
        }
        assert_eq!(casimir_h(IrrepLabelH::new(1, 1)), -Rat::new(16, 3));
    }

    #[test]
    fn branching_dimension_sum() {
        for l in [lab(0, 1, 1), lab(0, 2, 0), lab(1, 0, 1), lab(1, 1, 0)] {
            let c = build_carrier(l).unwrap();
            let total: usize = branch_to_h(&c)
                .unwrap()
                .iter()
                .map(|(h, m)| h.dim() * m)
                .sum();
            assert_eq!(total, c.dim, "{l}");
        }
    }

    #[test]
    fn unsupported_label_rejected() {
        assert!(matches!(
            build_carrier(lab(3, 0, 0)),
            Err(RepError::UnsupportedLabel(_))
        ));
    }

    #[test]
    fn hom_block_counts_against_m_module() {
        // Hom(V_gamma, m_C): m branches as (1,1) + (0,2)
        let m = m_isotropy_module();
        let block = hom_block(&build_carrier(lab(0, 2, 0)).unwrap(), &m).unwrap();
        assert_eq!(block.dim, 2);
        let block = hom_block(&build_carrier(lab(0, 0, 1)).unwrap(), &m).unwrap();
        assert_eq!(block.dim, 0);
    }
}
