//! Invariant exterior calculus on the squashed sphere: wedge products, the
//! Maurer-Cartan differential, the nearly-G2 solve and the octonion
//! structure constants, plus the metric flow in [`flow`].
//!
//! Form coefficients stay exact rationals; the ansatz is parametrized by
//! (alpha, beta^2) so that every coefficient of phi, psi and dvol is
//! polynomial in rational data.

pub mod flow;

use crate::algebra::{rat_to_f64, structure_constants, Rat, StructureTensor, DIM_G, DIM_M};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("wedge degree exceeds the top degree")]
    DegreeOverflow,
    #[error("form index {0} outside 0..=13")]
    BadIndex(u8),
    #[error("form is not invariant under the isotropy action (index {0})")]
    NotInvariant(u8),
    #[error("coefficient system for the nearly-G2 solve is inconsistent")]
    InconsistentSystem,
    #[error("metric coefficient requested below the cone parameter (beta = {beta}, beta0 = {beta0})")]
    BelowConeParameter { beta: f64, beta0: f64 },
}

/// Exterior form on m* (indices 1..7), with index 0 reserved for the radial
/// direction on the cone. Indices 8..13 appear only transiently inside the
/// Maurer-Cartan differential and are rejected by the public constructor.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InvariantForm {
    degree: usize,
    terms: BTreeMap<Vec<u8>, Rat>,
}

/// Sorts indices, returning the permutation sign; `None` on a repeated index.
fn canonical(mut idx: Vec<u8>) -> Option<(Vec<u8>, i64)> {
    let mut sign = 1i64;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx, sign))
}

impl InvariantForm {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from (coefficient, index tuple) terms; indices 0..=7.
    pub fn from_terms(degree: usize, terms: &[(Rat, &[u8])]) -> Result<Self, GeometryError> {
        let mut out = Self::zero(degree);
        for (c, idx) in terms {
            for &i in *idx {
                if i > 7 {
                    return Err(GeometryError::BadIndex(i));
                }
            }
            debug_assert_eq!(idx.len(), degree);
            out.add_term(idx.to_vec(), *c);
        }
        Ok(out)
    }

    fn add_term(&mut self, idx: Vec<u8>, c: Rat) {
        if c.is_zero() {
            return;
        }
        if let Some((key, sign)) = canonical(idx) {
            use std::collections::btree_map::Entry;
            match self.terms.entry(key) {
                Entry::Vacant(e) => {
                    e.insert(c * Rat::from(sign));
                }
                Entry::Occupied(mut e) => {
                    *e.get_mut() += c * Rat::from(sign);
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &[u8]) -> Rat {
        match canonical(idx.to_vec()) {
            Some((key, sign)) => self
                .terms
                .get(&key)
                .map(|c| *c * Rat::from(sign))
                .unwrap_or_else(Rat::zero),
            None => Rat::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], Rat)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn scale(&self, c: Rat) -> Self {
        let mut out = Self::zero(self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), *v * c);
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.degree, o.degree);
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(k.clone(), *v);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-Rat::from(1)))
    }

    /// Largest absolute coefficient, as f64.
    pub fn sup_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|v| rat_to_f64(v.abs()))
            .fold(0.0, f64::max)
    }

    /// Checks vanishing of the isotropy coderivative along I_8..I_13.
    pub fn is_h_invariant(&self, f: &StructureTensor) -> bool {
        self.invariance_defect(f).is_none()
    }

    fn invariance_defect(&self, f: &StructureTensor) -> Option<u8> {
        for i in DIM_M..DIM_G {
            let mut defect = Self::zero(self.degree);
            for (k, v) in &self.terms {
                for (pos, &a) in k.iter().enumerate() {
                    if a == 0 {
                        continue; // radial leg is isotropy-invariant
                    }
                    for b in 0..DIM_G {
                        let coef = f.get(a as usize - 1, i, b);
                        if coef.is_zero() {
                            continue;
                        }
                        let mut idx = k.clone();
                        idx[pos] = (b + 1) as u8;
                        defect.add_term(idx, -*v * coef);
                    }
                }
            }
            if !defect.is_zero() {
                return Some((i + 1) as u8);
            }
        }
        None
    }
}

impl fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let idx: String = k.iter().map(|i| i.to_string()).collect();
            write!(f, "({v})e{idx}")?;
        }
        Ok(())
    }
}

/// Graded-commutative wedge product.
pub fn wedge(a: &InvariantForm, b: &InvariantForm) -> Result<InvariantForm, GeometryError> {
    let degree = a.degree + b.degree;
    if degree > 8 {
        return Err(GeometryError::DegreeOverflow);
    }
    let mut out = InvariantForm::zero(degree);
    for (ka, va) in &a.terms {
        for (kb, vb) in &b.terms {
            let mut idx = ka.clone();
            idx.extend_from_slice(kb);
            out.add_term(idx, *va * *vb);
        }
    }
    Ok(out)
}

/// d e^a as a 2-form over all 13 indices: -1/2 f^a_{BC} e^B e^C.
fn d_generator(a: usize, f: &StructureTensor) -> Vec<(Vec<u8>, Rat)> {
    let mut out: BTreeMap<Vec<u8>, Rat> = BTreeMap::new();
    let half = Rat::new(1, 2);
    for b in 0..DIM_G {
        for c in 0..DIM_G {
            let coef = f.get(a, b, c);
            if coef.is_zero() {
                continue;
            }
            if let Some((key, sign)) = canonical(vec![(b + 1) as u8, (c + 1) as u8]) {
                let e = out.entry(key).or_insert_with(Rat::zero);
                *e -= half * coef * Rat::from(sign);
            }
        }
    }
    out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// d(d e^A) = 0 for every generator, checked on the raw coefficient algebra
/// over all 13 indices (the dual statement of the Jacobi identity).
pub fn d_squared_vanishes_on_generators(f: &StructureTensor) -> bool {
    for a in 0..DIM_G {
        let mut raw: BTreeMap<Vec<u8>, Rat> = BTreeMap::new();
        for (k2, v2) in d_generator(a, f) {
            // d(e^B ^ e^C) = d e^B ^ e^C - e^B ^ d e^C
            for (pos, sign) in [(0usize, 1i64), (1usize, -1i64)] {
                let leg = k2[pos] as usize - 1;
                let other = k2[1 - pos];
                for (dk, dv) in d_generator(leg, f) {
                    let mut idx = dk.clone();
                    idx.push(other);
                    if let Some((key, s)) = canonical(idx) {
                        let e = raw.entry(key).or_insert_with(Rat::zero);
                        *e += v2 * dv * Rat::from(sign * s);
                    }
                }
            }
        }
        if raw.values().any(|v| !v.is_zero()) {
            return false;
        }
    }
    true
}

/// Maurer-Cartan exterior derivative of an invariant form.
///
/// The differential is computed on the full coefficient algebra; terms
/// carrying isotropy legs must cancel, which happens exactly when the input
/// is H-invariant. A surviving isotropy leg is reported as an error.
pub fn mc_differential(
    a: &InvariantForm,
    f: &StructureTensor,
) -> Result<InvariantForm, GeometryError> {
    if let Some(i) = a.invariance_defect(f) {
        return Err(GeometryError::NotInvariant(i));
    }
    let mut raw: BTreeMap<Vec<u8>, Rat> = BTreeMap::new();
    for (k, v) in &a.terms {
        for (pos, &leg) in k.iter().enumerate() {
            if leg == 0 {
                continue; // d(dr) = 0
            }
            let sign = if pos % 2 == 0 { Rat::from(1) } else { Rat::from(-1) };
            let rest: Vec<u8> = k
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != pos)
                .map(|(_, &x)| x)
                .collect();
            for (dk, dv) in d_generator(leg as usize - 1, f) {
                let mut idx = dk.clone();
                idx.extend_from_slice(&rest);
                if let Some((key, s)) = canonical(idx) {
                    let e = raw.entry(key).or_insert_with(Rat::zero);
                    *e += sign * *v * dv * Rat::from(s);
                }
            }
        }
    }
    let mut out = InvariantForm::zero(a.degree + 1);
    for (k, v) in raw {
        if v.is_zero() {
            continue;
        }
        if let Some(&leg) = k.iter().find(|&&i| i > 7) {
            return Err(GeometryError::NotInvariant(leg));
        }
        out.add_term(k, v);
    }
    Ok(out)
}

fn r(n: i64) -> Rat {
    Rat::from(n)
}

/// omega_1 = e45 + e67, omega_2 = e46 - e57, omega_3 = e47 + e56.
pub fn omega(k: usize) -> InvariantForm {
    let terms: [&[(i64, [u8; 2])]; 3] = [
        &[(1, [4, 5]), (1, [6, 7])],
        &[(1, [4, 6]), (-1, [5, 7])],
        &[(1, [4, 7]), (1, [5, 6])],
    ];
    let mut out = InvariantForm::zero(2);
    for (c, idx) in terms[k - 1] {
        out.add_term(idx.to_vec(), r(*c));
    }
    out
}

/// The 3-form ansatz: alpha^3 e123 - alpha beta^2 (e1 w1 + e2 w2 + e3 w3).
pub fn phi_ansatz(alpha: Rat, beta_sq: Rat) -> InvariantForm {
    let a3 = alpha * alpha * alpha;
    let ab2 = alpha * beta_sq;
    let mut out = InvariantForm::zero(3);
    out.add_term(vec![1, 2, 3], a3);
    for (c, idx) in [
        (-1, [1u8, 4, 5]),
        (-1, [1, 6, 7]),
        (-1, [2, 4, 6]),
        (1, [2, 5, 7]),
        (-1, [3, 4, 7]),
        (-1, [3, 5, 6]),
    ] {
        out.add_term(idx.to_vec(), ab2 * r(c));
    }
    out
}

/// The dual 4-form: beta^4 e4567 - alpha^2 beta^2 (six mixed terms).
pub fn psi_ansatz(alpha: Rat, beta_sq: Rat) -> InvariantForm {
    let b4 = beta_sq * beta_sq;
    let a2b2 = alpha * alpha * beta_sq;
    let mut out = InvariantForm::zero(4);
    out.add_term(vec![4, 5, 6, 7], b4);
    for (c, idx) in [
        (-1, [1u8, 2, 4, 7]),
        (-1, [1, 2, 5, 6]),
        (-1, [2, 3, 4, 5]),
        (-1, [2, 3, 6, 7]),
        (1, [1, 3, 4, 6]),
        (-1, [1, 3, 5, 7]),
    ] {
        out.add_term(idx.to_vec(), a2b2 * r(c));
    }
    out
}

/// Volume form alpha^3 beta^4 e1234567.
pub fn dvol(alpha: Rat, beta_sq: Rat) -> InvariantForm {
    let mut out = InvariantForm::zero(7);
    out.add_term(
        vec![1, 2, 3, 4, 5, 6, 7],
        alpha * alpha * alpha * beta_sq * beta_sq,
    );
    out
}

/// Solution of d(phi) = 4 psi within the ansatz family.
#[derive(Debug, Clone, Copy)]
pub struct NearlyG2 {
    pub alpha: Rat,
    pub beta_sq: Rat,
}

impl NearlyG2 {
    pub fn alpha_f64(&self) -> f64 {
        rat_to_f64(self.alpha)
    }

    pub fn beta_f64(&self) -> f64 {
        rat_to_f64(self.beta_sq).sqrt()
    }

    /// ||d(phi) - 4 psi|| at the solution.
    pub fn residual(&self) -> f64 {
        nearly_g2_residual(self.alpha, self.beta_sq)
    }
}

/// ||d(phi) - 4 psi|| for given ansatz parameters.
pub fn nearly_g2_residual(alpha: Rat, beta_sq: Rat) -> f64 {
    let f = structure_constants();
    let dphi = mc_differential(&phi_ansatz(alpha, beta_sq), f).expect("ansatz is invariant");
    dphi.sub(&psi_ansatz(alpha, beta_sq).scale(r(4))).sup_norm()
}

/// Equates the coefficients of d(phi) and 4 psi and solves the resulting
/// polynomial system exactly.
///
/// Writing u = alpha and v = beta^2, the coefficient on each 4-tuple is
/// `D1 u^3 + D2 u v - 4 E1 v^2 + 4 E2 u^2 v = 0` with rational D1, D2, E1,
/// E2 from the structure constants. A tuple with D1 = E2 = 0 yields u as a
/// rational multiple of v; substituting into any tuple with E1 = 0 gives v.
/// Every remaining equation is then verified exactly.
pub fn solve_nearly_g2() -> Result<NearlyG2, GeometryError> {
    let f = structure_constants();
    let cubic = phi_ansatz(r(1), r(0)); // alpha^3 block alone
    let d1 = mc_differential(&cubic, f)?;
    let unit_mixed = phi_ansatz(r(1), r(1)).sub(&cubic); // alpha beta^2 block alone
    let d2 = mc_differential(&unit_mixed, f)?;
    let e1 = psi_ansatz(r(0), r(1)); // beta^4 block
    let e2 = psi_ansatz(r(1), r(1)).sub(&e1).scale(-r(1)); // alpha^2 beta^2 block with sign absorbed

    let mut keys: Vec<Vec<u8>> = Vec::new();
    for form in [&d1, &d2, &e1, &e2] {
        for (k, _) in form.terms() {
            if !keys.iter().any(|x| x == k) {
                keys.push(k.to_vec());
            }
        }
    }

    // u from a tuple of shape D2 u v = 4 E1 v^2
    let ratio = keys
        .iter()
        .find_map(|k| {
            let (c1, c2, f1, f2) = (
                d1.coefficient(k),
                d2.coefficient(k),
                e1.coefficient(k),
                e2.coefficient(k),
            );
            (c1.is_zero() && f2.is_zero() && !c2.is_zero() && !f1.is_zero())
                .then(|| r(4) * f1 / c2)
        })
        .ok_or(GeometryError::InconsistentSystem)?;
    // v from a tuple with E1 = 0: D1 u^3 + D2 u v + 4 E2 u^2 v = 0, u = ratio * v
    let beta_sq = keys
        .iter()
        .find_map(|k| {
            let (c1, c2, f1, f2) = (
                d1.coefficient(k),
                d2.coefficient(k),
                e1.coefficient(k),
                e2.coefficient(k),
            );
            if !f1.is_zero() || c1.is_zero() {
                return None;
            }
            // c1 ratio^2 v + c2 + 4 f2 ratio v ... divide the equation by u v:
            // c1 u^2 + c2 v + 4 f2 u v = 0 with u = ratio v
            let quad = c1 * ratio * ratio + r(4) * f2 * ratio;
            (!quad.is_zero()).then(|| -c2 / quad)
        })
        .ok_or(GeometryError::InconsistentSystem)?;
    let alpha = ratio * beta_sq;

    // verify the full system exactly
    for k in &keys {
        let lhs = d1.coefficient(k) * alpha * alpha * alpha
            + d2.coefficient(k) * alpha * beta_sq
            - r(4) * e1.coefficient(k) * beta_sq * beta_sq
            + r(4) * e2.coefficient(k) * alpha * alpha * beta_sq;
        if !lhs.is_zero() {
            return Err(GeometryError::InconsistentSystem);
        }
    }
    if alpha <= Rat::zero() || beta_sq <= Rat::zero() {
        return Err(GeometryError::InconsistentSystem);
    }
    Ok(NearlyG2 { alpha, beta_sq })
}

/// Totally antisymmetric octonion structure constants, read off the
/// unit-coefficient expansion of the 3-form ansatz.
#[derive(Debug, Clone)]
pub struct OctonionConstants {
    /// value on sorted triples (a, b, c), 1-based indices
    triples: Vec<([u8; 3], i64)>,
}

impl OctonionConstants {
    /// phi_abc for arbitrary index order (0 on repeats), 1-based.
    pub fn get(&self, a: u8, b: u8, c: u8) -> i64 {
        match canonical(vec![a, b, c]) {
            Some((key, sign)) => self
                .triples
                .iter()
                .find(|(t, _)| t[0] == key[0] && t[1] == key[1] && t[2] == key[2])
                .map(|(_, v)| v * sign)
                .unwrap_or(0),
            None => 0,
        }
    }

    pub fn sorted_triples(&self) -> &[([u8; 3], i64)] {
        &self.triples
    }
}

/// Extracts phi_abc from phi at unit scales.
pub fn octonion_structure_constants() -> OctonionConstants {
    let phi = phi_ansatz(r(1), r(1));
    let triples = phi
        .terms()
        .map(|(k, v)| {
            debug_assert!(v.is_integer());
            ([k[0], k[1], k[2]], *v.numer())
        })
        .collect();
    OctonionConstants { triples }
}

/// Radial, vertical and horizontal coefficients of the asymptotically conical
/// metric in the beta gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsMetricCoeffs {
    pub radial: f64,
    pub vertical: f64,
    pub horizontal: f64,
}

/// Metric coefficients at parameter beta, cone parameter beta0:
/// (25/9)/(5 - x) dbeta^2 + (5 - x) beta^2 (vertical) + beta^2 (horizontal)
/// with x = (beta0/beta)^(10/3).
pub fn bs_metric_coeffs(beta: f64, beta0: f64) -> Result<BsMetricCoeffs, GeometryError> {
    if beta < beta0 {
        return Err(GeometryError::BelowConeParameter { beta, beta0 });
    }
    let x = (beta0 / beta).powf(10.0 / 3.0);
    Ok(BsMetricCoeffs {
        radial: (25.0 / 9.0) / (5.0 - x),
        vertical: (5.0 - x) * beta * beta,
        horizontal: beta * beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn f() -> &'static StructureTensor {
        structure_constants()
    }

    #[test]
    fn wedge_square_of_one_form_vanishes() {
        let e1 = InvariantForm::from_terms(1, &[(r(1), &[1])]).unwrap();
        assert!(wedge(&e1, &e1).unwrap().is_zero());
    }

    #[test]
    fn omega1_squared_is_twice_top_horizontal() {
        let w1 = omega(1);
        let sq = wedge(&w1, &w1).unwrap();
        assert_eq!(sq.coefficient(&[4, 5, 6, 7]), r(2));
        assert_eq!(sq.terms().count(), 1);
    }

    #[test]
    fn graded_commutativity() {
        let a = omega(2); // degree 2
        let b = phi_ansatz(r(1), r(2)); // degree 3
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap();
        assert_eq!(ab, ba); // (-1)^{2*3} = +1
        let e1 = InvariantForm::from_terms(1, &[(r(1), &[1])]).unwrap();
        let e2 = InvariantForm::from_terms(1, &[(r(1), &[2])]).unwrap();
        assert_eq!(wedge(&e1, &e2).unwrap(), wedge(&e2, &e1).unwrap().scale(-r(1)));
    }

    #[test]
    fn degree_overflow_rejected() {
        let top = dvol(r(1), r(1));
        let e1 = InvariantForm::from_terms(1, &[(r(1), &[1])]).unwrap();
        let eight = wedge(&top, &e1).unwrap();
        assert!(eight.is_zero()); // e1 repeats inside the top form
        assert_eq!(
            wedge(&eight, &e1).unwrap_err(),
            GeometryError::DegreeOverflow
        );
    }

    #[test]
    fn phi_wedge_psi_is_seven_dvol() {
        let g2 = solve_nearly_g2().unwrap();
        let phi = phi_ansatz(g2.alpha, g2.beta_sq);
        let psi = psi_ansatz(g2.alpha, g2.beta_sq);
        let prod = wedge(&phi, &psi).unwrap();
        let expect = dvol(g2.alpha, g2.beta_sq).scale(r(7));
        assert_eq!(prod, expect);
    }

    #[test]
    fn d_squared_vanishes() {
        assert!(d_squared_vanishes_on_generators(f()));
        let phi = phi_ansatz(r(2), r(3));
        let dphi = mc_differential(&phi, f()).unwrap();
        let ddphi = mc_differential(&dphi, f()).unwrap();
        assert!(ddphi.is_zero());
    }

    #[test]
    fn top_degree_closed() {
        let top = dvol(r(1), r(1));
        assert!(mc_differential(&top, f()).unwrap().is_zero());
    }

    #[test]
    fn non_invariant_input_rejected() {
        let e1 = InvariantForm::from_terms(1, &[(r(1), &[1])]).unwrap();
        assert!(matches!(
            mc_differential(&e1, f()),
            Err(GeometryError::NotInvariant(_))
        ));
    }

    #[test]
    fn solve_returns_closed_form_values() {
        let g2 = solve_nearly_g2().unwrap();
        assert_eq!(g2.alpha, r(3));
        assert_eq!(g2.beta_sq, Rat::new(9, 5));
        assert!(g2.residual() < 1e-10);
        assert_abs_diff_eq!(g2.beta_f64(), 3.0 / 5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn residual_away_from_solution_is_nonzero() {
        assert!(nearly_g2_residual(r(1), r(1)) > 1.0);
    }

    #[test]
    fn octonion_constants_signs() {
        let oc = octonion_structure_constants();
        assert_eq!(oc.get(1, 2, 3), 1);
        assert_eq!(oc.get(1, 4, 5), -1);
        assert_eq!(oc.get(2, 5, 7), 1);
        assert_eq!(oc.get(2, 7, 5), -1);
        assert_eq!(oc.get(1, 1, 2), 0);
        assert_eq!(oc.get(1, 2, 4), 0);
        assert_eq!(oc.sorted_triples().len(), 7);
    }

    #[test]
    fn octonion_contraction_identity() {
        let oc = octonion_structure_constants();
        for a in 1..=7u8 {
            for d in 1..=7u8 {
                let mut s = 0i64;
                for b in 1..=7u8 {
                    for c in 1..=7u8 {
                        s += oc.get(a, b, c) * oc.get(d, b, c);
                    }
                }
                assert_eq!(s, if a == d { 6 } else { 0 });
            }
        }
    }

    #[test]
    fn radial_leg_wedge_and_differential() {
        let dr = InvariantForm::from_terms(1, &[(r(1), &[0])]).unwrap();
        let g2 = solve_nearly_g2().unwrap();
        let phi = phi_ansatz(g2.alpha, g2.beta_sq);
        let four_form = wedge(&dr, &phi).unwrap();
        assert_eq!(four_form.degree(), 4);
        assert_eq!(four_form.coefficient(&[0, 1, 2, 3]), r(27));
        // d(dr ^ phi) = -dr ^ d(phi), the radial leg being closed
        let lhs = mc_differential(&four_form, f()).unwrap();
        let rhs = wedge(&dr, &mc_differential(&phi, f()).unwrap())
            .unwrap()
            .scale(-r(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bs_metric_coeffs_boundary_and_cone_limit() {
        let m = bs_metric_coeffs(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(m.radial, 25.0 / 36.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.vertical, 4.0, epsilon = 1e-14);
        let big = bs_metric_coeffs(1e8, 1.0).unwrap();
        assert_abs_diff_eq!(big.radial, 5.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(big.vertical / (big.horizontal * 5.0), 1.0, epsilon = 1e-12);
        assert!(bs_metric_coeffs(0.5, 1.0).is_err());
    }
}
