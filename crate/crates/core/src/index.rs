//! Index arithmetic: the fiber-operator table, the spectral flow of the
//! connection family and of the metric family, the scalar-curvature family,
//! the cohomology ring of the quaternionic-plane connect sum and the
//! resulting indices and virtual dimensions.

use crate::algebra::{rat_to_f64, Rat};
use crate::dirac::{
    ad_t, block_dimension, clifford, dirac_block, enumerate_candidates, eigenvalues,
    target_module, DiracError, RMat, Twist,
};
use crate::reptheory::{build_carrier, hermitian_eigen, CMat, IrrepLabelG, C64};
use nalgebra::Complex;
use num_traits::{Signed, Zero};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("trivial isotypic line has dimension {0}, expected 1")]
    TrivialLineDegenerate(usize),
    #[error("eigenvalue path persistently within {tol} of zero at s = {s}")]
    PathNearZero { s: f64, tol: f64 },
    #[error("{0} is a critical rate; the index jumps there")]
    CriticalRate(f64),
    #[error("rate {0} outside the computed window (-5/2, 0)")]
    RateOutOfRange(f64),
    #[error("pipeline identity {name} failed: {lhs} != {rhs}")]
    PipelineMismatch {
        name: String,
        lhs: String,
        rhs: String,
    },
    #[error(transparent)]
    Dirac(#[from] DiracError),
}

fn cc(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// The operator sum_a gamma_a (x) ad T_a acting fibre-wise on the 24-dim
/// twisted fiber.
pub fn fiber_operator() -> RMat {
    let cliff = clifford();
    let mut out = RMat::zeros(24, 24);
    for a in 0..3 {
        out += cliff.gammas[a].kronecker(&ad_t(a));
    }
    out
}

/// Spectrum of the fiber operator with multiplicities.
pub fn fiber_operator_spectrum() -> Vec<(f64, usize)> {
    let op = fiber_operator().map(cc);
    let (vals, _) = hermitian_eigen(&op);
    crate::dirac::cluster(&vals, 1e-9)
}

/// Eigenvalue of the fiber operator on the unique trivial isotypic line of
/// the twisted fiber.
pub fn trivial_block_fiber_eigenvalue() -> Result<f64, IndexError> {
    let target = target_module(Twist::Adjoint);
    let cu = target.casimir_u();
    let cd = target.casimir_d();
    let s = cu.adjoint() * &cu + cd.adjoint() * &cd;
    let (vals, vecs) = hermitian_eigen(&s);
    let null_count = vals.iter().filter(|v| v.abs() < 1e-9).count();
    if null_count != 1 {
        return Err(IndexError::TrivialLineDegenerate(null_count));
    }
    let line = vecs.column(0);
    let op: CMat = fiber_operator().map(cc);
    let val = (line.adjoint() * &op * line)[(0, 0)];
    Ok(val.re)
}

/// Eigenvalue paths of one Frobenius block along the connection family.
#[derive(Debug, Clone, Serialize)]
pub struct BlockFlow {
    pub label: IrrepLabelG,
    pub block_dim: usize,
    pub carrier_dim: usize,
    pub crossings: i64,
    /// spectrum at the flat end of the family (s = -3)
    pub spectrum_at_flat: Vec<f64>,
    /// spectrum at the canonical end (s = 0)
    pub spectrum_at_canonical: Vec<f64>,
    pub min_abs_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectionFlow {
    pub total: i64,
    pub blocks: Vec<BlockFlow>,
    pub trivial_path_endpoint: f64,
}

/// Threshold for the connection-flow candidate scan: the largest fiber
/// eigenvalue bounds the total eigenvalue shift along the family.
pub const FLOW_SHIFT_BOUND: f64 = 4.0;

/// Signed zero crossings of the family D(s) = D_0 + (s/3) F over s in
/// [-3, 0], summed over all candidate blocks with multiplicity dim V_gamma.
///
/// The candidate threshold equals the largest fiber eigenvalue magnitude
/// (times the family range |s|/3 = 1), which bounds the total eigenvalue
/// shift; the bound is re-asserted from the computed fiber spectrum.
pub fn spectral_flow_connection() -> Result<ConnectionFlow, IndexError> {
    let fiber_max = fiber_operator_spectrum()
        .iter()
        .map(|(v, _)| v.abs())
        .fold(0.0, f64::max);
    assert!(
        (fiber_max - FLOW_SHIFT_BOUND).abs() < 1e-9,
        "shift bound must come from the fiber table"
    );
    let mut blocks = Vec::new();
    let mut total = 0i64;
    let mut trivial_path_endpoint = f64::NAN;
    for label in enumerate_candidates(FLOW_SHIFT_BOUND) {
        if block_dimension(label, Twist::Adjoint).map_err(DiracError::from)? == 0 {
            continue;
        }
        let block = dirac_block(label, Twist::Adjoint)?;
        let carrier_dim = build_carrier(label).map_err(DiracError::from)?.dim;
        let d0 = block.matrix_at(0.0);
        let fiber = block.fiber_block().expect("adjoint blocks carry the fiber").clone();
        let eval = |s: f64| -> Result<Vec<f64>, IndexError> {
            let m = &d0 + &fiber * cc(s / 3.0);
            Ok(eigenvalues(&m)?)
        };
        let steps = 600usize;
        let mut crossings = 0i64;
        let mut min_abs = f64::INFINITY;
        let mut prev = eval(-3.0)?;
        let spectrum_at_flat = prev.clone();
        for i in 1..=steps {
            let s = -3.0 + 3.0 * i as f64 / steps as f64;
            let mut vals = eval(s)?;
            for v in &vals {
                min_abs = min_abs.min(v.abs());
            }
            // grid points suspiciously close to zero get re-examined off-grid
            if vals.iter().any(|v| v.abs() < 1e-6) && i < steps {
                let shifted = eval(s + 1.5 / steps as f64)?;
                if shifted.iter().any(|v| v.abs() < 1e-9) {
                    return Err(IndexError::PathNearZero { s, tol: 1e-9 });
                }
                vals = shifted;
            }
            for (p, v) in prev.iter().zip(vals.iter()) {
                if *p < 0.0 && *v >= 0.0 {
                    crossings += 1;
                } else if *p >= 0.0 && *v < 0.0 {
                    crossings -= 1;
                }
            }
            prev = vals;
        }
        let spectrum_at_canonical = prev.clone();
        if label == IrrepLabelG::new(0, 0, 0) {
            trivial_path_endpoint = spectrum_at_flat[0];
        }
        total += crossings * carrier_dim as i64;
        blocks.push(BlockFlow {
            label,
            block_dim: block.dim,
            carrier_dim,
            crossings,
            spectrum_at_flat,
            spectrum_at_canonical,
            min_abs_eigenvalue: min_abs,
        });
    }
    Ok(ConnectionFlow {
        total,
        blocks,
        trivial_path_endpoint,
    })
}

/// Flat-end check: every eigenvalue of a block at s = -3 must be an
/// eigenvalue of some untwisted block with the sp(1) label shifted by
/// 0 or +-2 (the flat twist regroups blocks along those labels).
pub fn flat_end_matches_untwisted(flow: &ConnectionFlow) -> Result<bool, IndexError> {
    for bf in &flow.blocks {
        let mut pool: Vec<f64> = Vec::new();
        let c = bf.label.c as i64;
        for dc in [-2i64, 0, 2] {
            let cc = c + dc;
            if cc < 0 {
                continue;
            }
            let l = IrrepLabelG::new(bf.label.a, bf.label.b, cc as u32);
            if block_dimension(l, Twist::Untwisted).map_err(DiracError::from)? == 0 {
                continue;
            }
            let ub = dirac_block(l, Twist::Untwisted)?;
            pool.extend(crate::dirac::block_spectrum(&ub, 0.0)?);
        }
        for v in &bf.spectrum_at_flat {
            if !pool.iter().any(|u| (u - v).abs() < 1e-6) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Ricci coefficients of the two-parameter squashing family on the three
/// metric blocks (eta_1, eta_2), eta_3 and the base.
pub fn ricci_family(a: f64, b: f64, c: f64) -> [f64; 3] {
    [
        2.0 * (2.0 - b * b / (a * a) + 2.0 * a.powi(4) / c.powi(4)),
        2.0 * (b.powi(4) / a.powi(4) + 2.0 * b.powi(4) / c.powi(4)),
        2.0 * (6.0 - (2.0 * a * a + b * b) / (c * c)),
    ]
}

/// Scalar curvature of the family, exact in the squared parameters:
/// (8 a^2 - 2 b^2)/a^4 + (48 c^2 - 8 a^2 - 4 b^2)/c^4.
pub fn scalar_curvature_exact(a_sq: Rat, b_sq: Rat, c_sq: Rat) -> Rat {
    (Rat::from(8) * a_sq - Rat::from(2) * b_sq) / (a_sq * a_sq)
        + (Rat::from(48) * c_sq - Rat::from(8) * a_sq - Rat::from(4) * b_sq) / (c_sq * c_sq)
}

/// Scalar curvature of the simplified one-parameter family: 6/a^2 + 48 - 12 a^2.
pub fn scalar_simplified_exact(a_sq: Rat) -> Rat {
    Rat::from(6) / a_sq + Rat::from(48) - Rat::from(12) * a_sq
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarFamilyReport {
    pub positive: bool,
    pub minimum: f64,
    pub at: f64,
    /// endpoint values at a^2 = 1/5 and a^2 = 1, exact
    pub squashed_value: String,
    pub round_value: String,
    pub spectral_flow: i64,
}

/// Grid scan of the simplified scalar-curvature family over a in
/// [1/sqrt(5), 1]; positivity forces vanishing spectral flow of the metric
/// family through the Weitzenboeck identity.
pub fn scalar_family_positivity(grid: usize) -> ScalarFamilyReport {
    let lo = 1.0 / 5f64.sqrt();
    let mut min = f64::INFINITY;
    let mut at = lo;
    for i in 0..=grid {
        let a = lo + (1.0 - lo) * i as f64 / grid as f64;
        let v = 6.0 / (a * a) + 48.0 - 12.0 * a * a;
        if v < min {
            min = v;
            at = a;
        }
    }
    let squashed = scalar_simplified_exact(Rat::new(1, 5));
    let round = scalar_simplified_exact(Rat::from(1));
    ScalarFamilyReport {
        positive: min > 0.0,
        minimum: min,
        at,
        squashed_value: squashed.to_string(),
        round_value: round.to_string(),
        spectral_flow: if min > 0.0 { 0 } else { i64::MIN },
    }
}

/// Element of the degree-graded cohomology ring of the connect sum of two
/// quaternionic planes: a scalar, degree-4 coefficients on the two
/// generators and degree-8 coefficients on their squares. Products of the
/// two generators vanish; each square integrates to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomClass {
    pub scalar: Rat,
    pub deg4: [Rat; 2],
    pub deg8: [Rat; 2],
}

impl CohomClass {
    pub fn zero() -> Self {
        Self {
            scalar: Rat::zero(),
            deg4: [Rat::zero(); 2],
            deg8: [Rat::zero(); 2],
        }
    }

    pub fn scalar(v: Rat) -> Self {
        Self {
            scalar: v,
            ..Self::zero()
        }
    }

    pub fn deg4(n1: Rat, n2: Rat) -> Self {
        Self {
            deg4: [n1, n2],
            ..Self::zero()
        }
    }

    pub fn deg8(m1: Rat, m2: Rat) -> Self {
        Self {
            deg8: [m1, m2],
            ..Self::zero()
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            scalar: self.scalar + o.scalar,
            deg4: [self.deg4[0] + o.deg4[0], self.deg4[1] + o.deg4[1]],
            deg8: [self.deg8[0] + o.deg8[0], self.deg8[1] + o.deg8[1]],
        }
    }

    pub fn scale(&self, c: Rat) -> Self {
        Self {
            scalar: c * self.scalar,
            deg4: [c * self.deg4[0], c * self.deg4[1]],
            deg8: [c * self.deg8[0], c * self.deg8[1]],
        }
    }

    /// Graded product; components above degree 8 vanish on an 8-manifold.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        out.scalar = self.scalar * o.scalar;
        for i in 0..2 {
            out.deg4[i] = self.scalar * o.deg4[i] + self.deg4[i] * o.scalar;
            out.deg8[i] = self.scalar * o.deg8[i]
                + self.deg8[i] * o.scalar
                + self.deg4[i] * o.deg4[i];
        }
        out
    }

    /// Integral over the 8-manifold: the sum of the degree-8 coefficients.
    pub fn integrate(&self) -> Rat {
        self.deg8[0] + self.deg8[1]
    }
}

/// The three-term index integrand:
/// -(1/12) int (p1(g)^2 - 2 p2(g)) + (1/24) int p1(M) p1(g)
/// - (dim g / 5760) int (7 p1(M)^2 - 4 p2(M)).
pub fn index_integrand(
    p1g: &CohomClass,
    p2g: &CohomClass,
    p1m: &CohomClass,
    p2m: &CohomClass,
    dim_g: i64,
) -> Rat {
    let term1 = -Rat::new(1, 12) * (p1g.mul(p1g).add(&p2g.scale(Rat::from(-2)))).integrate();
    let term2 = Rat::new(1, 24) * p1m.mul(p1g).integrate();
    let term3 = -Rat::new(dim_g, 5760)
        * (p1m.mul(p1m).scale(Rat::from(7)).add(&p2m.scale(Rat::from(-4)))).integrate();
    term1 + term2 + term3
}

/// Which deformation family the index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InstantonKind {
    Family,
    Limiting,
}

impl std::str::FromStr for InstantonKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "family" => Ok(Self::Family),
            "limiting" => Ok(Self::Limiting),
            other => Err(format!("unknown kind {other:?} (family|limiting)")),
        }
    }
}

/// c2 of the symmetric square of a rank-2 bundle: 2 c1^2 + 4 c2.
pub fn c2_sym_square(c1_sq: Rat, c2: Rat) -> Rat {
    Rat::from(2) * c1_sq + Rat::from(4) * c2
}

/// Convention for the first Pontryagin class of one closed quaternionic
/// plane inside the connect sum. The default `FourA` is what the oriented
/// connect-sum computation uses; `TwoA` is the closed-manifold value, kept
/// for comparison because the two conventions give different values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum P1Convention {
    FourA,
    TwoA,
}

impl P1Convention {
    pub fn coefficient(self) -> Rat {
        match self {
            P1Convention::FourA => Rat::from(4),
            P1Convention::TwoA => Rat::from(2),
        }
    }
}

impl std::str::FromStr for P1Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "4a" => Ok(Self::FourA),
            "2a" => Ok(Self::TwoA),
            other => Err(format!("unknown convention {other:?} (4a|2a)")),
        }
    }
}

/// The two bundle-dependent terms of the index difference across the
/// oriented connect sum, for bundle classes (n1, n2) and the given manifold
/// class convention. The third integrand term cancels between the two
/// oppositely oriented halves.
pub fn connect_sum_index_difference(n1: Rat, n2: Rat, convention: P1Convention) -> Rat {
    let p1g = CohomClass::deg4(n1, n2);
    let c = convention.coefficient();
    let p1m = CohomClass::deg4(c, c);
    -Rat::new(1, 12) * p1g.mul(&p1g).integrate() + Rat::new(1, 24) * p1m.mul(&p1g).integrate()
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineStep {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexPipeline {
    pub kind: InstantonKind,
    pub value: i64,
    pub steps: Vec<PipelineStep>,
}

fn push(steps: &mut Vec<PipelineStep>, name: &str, value: impl ToString) {
    steps.push(PipelineStep {
        name: name.to_string(),
        value: value.to_string(),
    });
}

fn identity(name: &str, lhs: Rat, rhs: Rat) -> Result<(), IndexError> {
    if lhs != rhs {
        return Err(IndexError::PipelineMismatch {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(())
}

/// Index of the weighted Dirac operator at rate -5/2, assembled through the
/// cancellation pipeline: the eta term trades for the two spectral flows and
/// the local index terms, leaving exact characteristic-class arithmetic.
///
/// The two spectral flows are inputs; both vanish for this geometry.
pub fn index_at_minus_5_2(
    kind: InstantonKind,
    sf_connection: i64,
    sf_metric: i64,
) -> Result<IndexPipeline, IndexError> {
    let mut steps = Vec::new();
    push(&mut steps, "spectral flow (connection family)", sf_connection);
    push(&mut steps, "spectral flow (metric family)", sf_metric);
    if sf_connection != 0 || sf_metric != 0 {
        return Err(IndexError::PipelineMismatch {
            name: "vanishing spectral flows".into(),
            lhs: format!("({sf_connection}, {sf_metric})"),
            rhs: "(0, 0)".into(),
        });
    }
    // closed quaternionic plane, trivial bundle: p1 = 2a, p2 = 7a^2
    let p1_hp2 = CohomClass::deg4(Rat::from(2), Rat::zero());
    let p2_hp2 = CohomClass::deg8(Rat::from(7), Rat::zero());
    let zero = CohomClass::zero();
    let hp2_index = index_integrand(&zero, &zero, &p1_hp2, &p2_hp2, 3);
    identity("index on the closed quaternionic plane", hp2_index, Rat::zero())?;
    push(&mut steps, "trivial-bundle index on HP^2", hp2_index);
    // the disc: p1 = p2 = 0
    let disc_index = index_integrand(&zero, &zero, &zero, &zero, 3);
    identity("index on the disc", disc_index, Rat::zero())?;
    push(&mut steps, "index on the glued disc", disc_index);
    let family_index = hp2_index - disc_index;
    push(&mut steps, "family index at rate -5/2", family_index);
    identity("family index", family_index, Rat::zero())?;

    let value = match kind {
        InstantonKind::Family => family_index,
        InstantonKind::Limiting => {
            // rank-2 data on the two halves: c1 = 0, c2 = -1 and the trivial bundle
            let c1_sq = Rat::zero();
            let c2 = Rat::from(-1);
            let n1 = c2_sym_square(c1_sq, c2);
            let n2 = Rat::zero();
            push(&mut steps, "adjoint-bundle class n1 = 2c1^2 + 4c2", n1);
            identity("n1", n1, Rat::from(-4))?;
            // difference of the two oriented halves: the manifold terms cancel
            let two_term = connect_sum_index_difference(n1, n2, P1Convention::FourA);
            let closed_form = Rat::new(1, 12)
                * ((Rat::from(2) * n1 - n1 * n1) + (Rat::from(2) * n2 - n2 * n2));
            identity("connect-sum index difference", two_term, closed_form)?;
            push(&mut steps, "connect-sum index difference", two_term);
            let value = family_index + two_term;
            identity("limiting index", value, Rat::from(-2))?;
            value
        }
    };
    push(&mut steps, "index at rate -5/2", value);
    debug_assert!(value.is_integer());
    Ok(IndexPipeline {
        kind,
        value: *value.numer() / *value.denom(),
        steps,
    })
}

/// Virtual dimension of the moduli space at decay rate nu in (-5/2, 0):
/// the index at -5/2 plus the eigenspace dimensions of every critical rate
/// crossed in (-5/2, nu].
pub fn virtual_dimension(kind: InstantonKind, nu: f64) -> Result<i64, IndexError> {
    if !(-2.5..0.0).contains(&nu) || nu == -2.5 {
        return Err(IndexError::RateOutOfRange(nu));
    }
    let crossings = crate::dirac::critical_rates(-2.5, 0.0)?;
    if crossings.iter().any(|c| (c.rate - nu).abs() < 1e-9) {
        return Err(IndexError::CriticalRate(nu));
    }
    let flow = spectral_flow_connection()?;
    let scalar = scalar_family_positivity(2000);
    let base = index_at_minus_5_2(kind, flow.total, scalar.spectral_flow)?;
    let jump: usize = crossings
        .iter()
        .filter(|c| c.rate <= nu)
        .map(|c| c.eigenspace_dim)
        .sum();
    Ok(base.value + jump as i64)
}

pub fn rat_f64(r: Rat) -> f64 {
    rat_to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fiber_table_reproduced() {
        let got = fiber_operator_spectrum();
        assert_eq!(got.len(), 4);
        for ((v, m), (ev, em)) in got.iter().zip(reference::fiber_table()) {
            assert_abs_diff_eq!(*v, ev, epsilon = 1e-9);
            assert_eq!(*m, em);
        }
        let total: usize = got.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 24);
        assert_abs_diff_eq!(fiber_operator().trace(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn trivial_line_eigenvalue_is_minus_four() {
        let v = trivial_block_fiber_eigenvalue().unwrap();
        assert_abs_diff_eq!(v, -4.0, epsilon = 1e-9);
    }

    #[test]
    fn trivial_path_values() {
        // the trivial block path is 1/2 - (4/3) s
        let v = trivial_block_fiber_eigenvalue().unwrap();
        let path = |s: f64| 0.5 + s / 3.0 * v;
        assert_abs_diff_eq!(path(-3.0), 4.5, epsilon = 1e-9);
        assert_abs_diff_eq!(path(0.0), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn connection_flow_vanishes() {
        let flow = spectral_flow_connection().unwrap();
        assert_eq!(flow.total, 0);
        for b in &flow.blocks {
            assert_eq!(b.crossings, 0, "{}", b.label);
        }
        assert_abs_diff_eq!(flow.trivial_path_endpoint, 4.5, epsilon = 1e-9);
        assert!(flat_end_matches_untwisted(&flow).unwrap());
    }

    #[test]
    fn flat_end_closed_forms() {
        // at the flat end a twisted block regroups into untwisted blocks
        // with the sp(1) label shifted by 0 or +-2; for (0,1,1) that is the
        // union of the untwisted (0,1,1) and (0,1,3) spectra
        let flow = spectral_flow_connection().unwrap();
        let bf = flow
            .blocks
            .iter()
            .find(|b| b.label == IrrepLabelG::new(0, 1, 1))
            .unwrap();
        let mut expect = [
            (-3.0 - 8.0 * 11f64.sqrt()) / 6.0,
            -23.0 / 6.0,
            (-3.0 + 8.0 * 11f64.sqrt()) / 6.0,
            37.0 / 6.0,
        ];
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(bf.spectrum_at_flat.len(), expect.len());
        for (got, want) in bf.spectrum_at_flat.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-9);
        }
    }

    #[test]
    fn path_step_bound() {
        // adjacent-grid eigenvalue movement stays below the operator-norm step bound
        let flow = spectral_flow_connection().unwrap();
        for b in &flow.blocks {
            let block = dirac_block(b.label, Twist::Adjoint).unwrap();
            let d0 = block.matrix_at(0.0);
            let f = block.fiber_block().unwrap();
            let ds = 0.05;
            let mut prev = eigenvalues(&(&d0 + f * cc(-1.0))).unwrap();
            let mut s = -3.0 + ds;
            while s <= 0.0 {
                let vals = eigenvalues(&(&d0 + f * cc(s / 3.0))).unwrap();
                for (p, v) in prev.iter().zip(vals.iter()) {
                    assert!((v - p).abs() <= 4.0 / 3.0 * ds + 1e-9);
                }
                prev = vals;
                s += ds;
            }
        }
    }

    #[test]
    fn ricci_and_scalar_values() {
        let round = ricci_family(1.0, 1.0, 1.0);
        for v in round {
            assert_abs_diff_eq!(v, 6.0, epsilon = 1e-12);
        }
        assert_eq!(
            scalar_curvature_exact(Rat::from(1), Rat::from(1), Rat::from(1)),
            Rat::from(42)
        );
        assert_eq!(
            scalar_curvature_exact(Rat::new(1, 5), Rat::new(1, 5), Rat::from(1)),
            Rat::new(378, 5)
        );
    }

    #[test]
    fn scalar_assembles_from_ricci_coefficients() {
        // s = 2 R1/a^2 + R2/b^2 + 4 R3/c^2 over the three metric blocks
        let assemble = |a: f64, b: f64, c: f64| {
            let [r1, r2, r3] = ricci_family(a, b, c);
            2.0 * r1 / (a * a) + r2 / (b * b) + 4.0 * r3 / (c * c)
        };
        assert_abs_diff_eq!(assemble(1.0, 1.0, 1.0), 42.0, epsilon = 1e-12);
        let s5 = 1.0 / 5f64.sqrt();
        assert_abs_diff_eq!(assemble(s5, s5, 1.0), 378.0 / 5.0, epsilon = 1e-12);
    }

    #[test]
    fn scalar_family_report() {
        let rep = scalar_family_positivity(2000);
        assert!(rep.positive);
        assert_eq!(rep.spectral_flow, 0);
        assert_abs_diff_eq!(rep.minimum, 42.0, epsilon = 1e-3);
        assert!((rep.at - 1.0).abs() < 1e-3);
        assert_eq!(rep.round_value, "42");
        assert_eq!(rep.squashed_value, "378/5");
        assert_eq!(scalar_simplified_exact(Rat::from(1)), Rat::from(42));
        assert_eq!(scalar_simplified_exact(Rat::new(1, 5)), Rat::new(378, 5));
    }

    #[test]
    fn cohomology_ring_rules() {
        let a1 = CohomClass::deg4(Rat::from(1), Rat::zero());
        let a2 = CohomClass::deg4(Rat::zero(), Rat::from(1));
        assert_eq!(a1.mul(&a2).integrate(), Rat::zero());
        assert_eq!(a1.mul(&a1).integrate(), Rat::from(1));
        let mixed = a1.scale(Rat::from(3)).add(&a2.scale(Rat::from(-2)));
        assert_eq!(mixed.mul(&mixed).integrate(), Rat::from(13));
    }

    #[test]
    fn integrand_examples() {
        let zero = CohomClass::zero();
        // closed quaternionic plane, trivial bundle
        let p1 = CohomClass::deg4(Rat::from(2), Rat::zero());
        let p2 = CohomClass::deg8(Rat::from(7), Rat::zero());
        assert_eq!(index_integrand(&zero, &zero, &p1, &p2, 3), Rat::zero());
        // all classes zero
        assert_eq!(index_integrand(&zero, &zero, &zero, &zero, 3), Rat::zero());
        // generic bundle class on the connect sum
        let n = CohomClass::deg4(Rat::from(-4), Rat::zero());
        let p1m = CohomClass::deg4(Rat::from(4), Rat::from(4));
        let val = -Rat::new(1, 12) * n.mul(&n).integrate()
            + Rat::new(1, 24) * p1m.mul(&n).integrate();
        assert_eq!(val, Rat::from(-2));
    }

    #[test]
    fn index_pipeline_values() {
        let fam = index_at_minus_5_2(InstantonKind::Family, 0, 0).unwrap();
        assert_eq!(fam.value, 0);
        let lim = index_at_minus_5_2(InstantonKind::Limiting, 0, 0).unwrap();
        assert_eq!(lim.value, -2);
        assert!(index_at_minus_5_2(InstantonKind::Family, 1, 0).is_err());
    }

    #[test]
    fn virtual_dimensions() {
        assert_eq!(virtual_dimension(InstantonKind::Family, -1.0).unwrap(), 1);
        assert_eq!(virtual_dimension(InstantonKind::Limiting, -1.0).unwrap(), -1);
        assert_eq!(virtual_dimension(InstantonKind::Family, -2.25).unwrap(), 0);
        assert!(matches!(
            virtual_dimension(InstantonKind::Family, -2.0),
            Err(IndexError::CriticalRate(_))
        ));
        assert!(virtual_dimension(InstantonKind::Family, 0.5).is_err());
    }

    #[test]
    fn c2_sym_square_value() {
        assert_eq!(c2_sym_square(Rat::zero(), Rat::from(-1)), Rat::from(-4));
    }

    #[test]
    fn zero_bundle_classes_reduce_to_family() {
        assert_eq!(
            connect_sum_index_difference(Rat::zero(), Rat::zero(), P1Convention::FourA),
            Rat::zero()
        );
    }
}
