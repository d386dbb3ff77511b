//! Exact construction of sp(2)+sp(1): the 13-element basis, commutators,
//! structure constants, Killing form and the orthonormal frame of the
//! reductive complement.
//!
//! Everything here is exact rational arithmetic. The only irrationality in
//! the whole Lie-theoretic layer is the sqrt(5) entering the orthonormal
//! horizontal frame, which is kept out of this module (see
//! [`OrthonormalFrame`], which carries exact squared scales).

use num_rational::Rational64;
use num_traits::Zero;
use once_cell::sync::Lazy;
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = Rational64;

/// Dimension of sp(2)+sp(1).
pub const DIM_G: usize = 13;
/// Dimension of the reductive complement m.
pub const DIM_M: usize = 7;
/// Dimension of the isotropy algebra sp(1)_u + sp(1)_d.
pub const DIM_H: usize = 6;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("matrix part is not quaternionic anti-hermitian")]
    NotAntiHermitian,
    #[error("sp(1) part has a nonzero real component")]
    NotImaginary,
    #[error("element does not reconstruct from its basis coordinates")]
    DecompositionFailed,
}

/// Quaternion with exact rational coefficients of 1, i, j, k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Quaternion {
    pub w: Rat,
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl Quaternion {
    pub fn new(w: Rat, x: Rat, y: Rat, z: Rat) -> Self {
        Self { w, x, y, z }
    }

    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self::new(Rat::from(w), Rat::from(x), Rat::from(y), Rat::from(z))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    /// The units i, j, k as s = 0, 1, 2.
    pub fn imaginary_unit(s: usize) -> Self {
        match s {
            0 => Self::from_ints(0, 1, 0, 0),
            1 => Self::from_ints(0, 0, 1, 0),
            2 => Self::from_ints(0, 0, 0, 1),
            _ => panic!("imaginary unit index out of range"),
        }
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.w.is_zero()
    }

    pub fn scale(self, c: Rat) -> Self {
        Self::new(c * self.w, c * self.x, c * self.y, c * self.z)
    }

    /// Imaginary components (x, y, z).
    pub fn imag(&self) -> [Rat; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i+{}j+{}k", self.w, self.x, self.y, self.z)
    }
}

/// An element of sp(2)+sp(1): a 2x2 quaternionic matrix m with m + m^dag = 0
/// together with an imaginary quaternion for the sp(1) factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    pub m: [[Quaternion; 2]; 2],
    pub q: Quaternion,
}

impl LieElement {
    /// Validating constructor.
    pub fn new(m: [[Quaternion; 2]; 2], q: Quaternion) -> Result<Self, AlgebraError> {
        if !(m[0][0] + m[0][0].conj()).is_zero()
            || !(m[1][1] + m[1][1].conj()).is_zero()
            || !(m[0][1] + m[1][0].conj()).is_zero()
        {
            return Err(AlgebraError::NotAntiHermitian);
        }
        if !q.is_imaginary() {
            return Err(AlgebraError::NotImaginary);
        }
        Ok(Self { m, q })
    }

    pub fn zero() -> Self {
        Self {
            m: [[Quaternion::zero(); 2]; 2],
            q: Quaternion::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(Quaternion::is_zero) && self.q.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = [[Quaternion::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.m[i][j] + o.m[i][j];
            }
        }
        Self { m, q: self.q + o.q }
    }

    pub fn scale(&self, c: Rat) -> Self {
        let mut m = [[Quaternion::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.m[i][j].scale(c);
            }
        }
        Self { m, q: self.q.scale(c) }
    }

    /// Componentwise commutator ([m_x, m_y], [q_x, q_y]).
    pub fn bracket(&self, o: &Self) -> Self {
        let mut m = [[Quaternion::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Quaternion::zero();
                for k in 0..2 {
                    acc = acc + self.m[i][k] * o.m[k][j] - o.m[i][k] * self.m[k][j];
                }
                m[i][j] = acc;
            }
        }
        Self {
            m,
            q: self.q * o.q - o.q * self.q,
        }
    }

    /// Exact coordinates in the 13-element basis I_1..I_13.
    ///
    /// The map is a linear bijection onto valid elements, so the only failure
    /// mode is a malformed input; the reconstruction is checked.
    pub fn coords(&self) -> Result<[Rat; 13], AlgebraError> {
        let mut c = [Rat::zero(); 13];
        // m00 = x8 i + x9 j + x10 k
        let m00 = self.m[0][0].imag();
        c[7] = m00[0];
        c[8] = m00[1];
        c[9] = m00[2];
        // m01 = x4 * 1 - x5 i - x6 j - x7 k
        c[3] = self.m[0][1].w;
        c[4] = -self.m[0][1].x;
        c[5] = -self.m[0][1].y;
        c[6] = -self.m[0][1].z;
        // m11 = 2a + b, q = -3a + b componentwise over i, j, k
        let m11 = self.m[1][1].imag();
        let q = self.q.imag();
        let five = Rat::from(5);
        for s in 0..3 {
            c[s] = (m11[s] - q[s]) / five;
            c[10 + s] = (Rat::from(3) * m11[s] + Rat::from(2) * q[s]) / five;
        }
        let recon = from_coords(&c);
        if &recon != self {
            return Err(AlgebraError::DecompositionFailed);
        }
        Ok(c)
    }
}

/// Linear combination of the 13 basis elements.
pub fn from_coords(c: &[Rat; 13]) -> LieElement {
    let basis = basis_g();
    let mut out = LieElement::zero();
    for (coeff, e) in c.iter().zip(basis.iter()) {
        if !coeff.is_zero() {
            out = out.add(&e.scale(*coeff));
        }
    }
    out
}

/// The distinguished basis I_1..I_13.
///
/// I_1..I_3 span the vertical part of m, I_4..I_7 the horizontal part,
/// I_8..I_10 span sp(1)_u and I_11..I_13 span sp(1)_d.
pub fn basis_g() -> &'static [LieElement; 13] {
    static BASIS: Lazy<[LieElement; 13]> = Lazy::new(|| {
        let z = Quaternion::zero();
        let unit = Quaternion::imaginary_unit;
        let mut out: Vec<LieElement> = Vec::with_capacity(13);
        // vertical trio: (diag(0, 2u), -3u)
        for s in 0..3 {
            out.push(LieElement {
                m: [[z, z], [z, unit(s).scale(Rat::from(2))]],
                q: unit(s).scale(Rat::from(-3)),
            });
        }
        // horizontal quartet: off-diagonal b with m10 = -conj(b)
        let horiz = [
            Quaternion::one(),
            -unit(0),
            -unit(1),
            -unit(2),
        ];
        for b in horiz {
            out.push(LieElement {
                m: [[z, b], [-b.conj(), z]],
                q: z,
            });
        }
        // isotropy: sp(1)_u then sp(1)_d
        for s in 0..3 {
            out.push(LieElement {
                m: [[unit(s), z], [z, z]],
                q: z,
            });
        }
        for s in 0..3 {
            out.push(LieElement {
                m: [[z, z], [z, unit(s)]],
                q: unit(s),
            });
        }
        out.try_into().unwrap()
    });
    &BASIS
}

/// Commutator, as a free function mirroring the rest of the module API.
pub fn bracket(x: &LieElement, y: &LieElement) -> LieElement {
    x.bracket(y)
}

/// Structure constants f^C_{AB} with [I_A, I_B] = f^C_{AB} I_C, indices 0-based.
#[derive(Clone)]
pub struct StructureTensor {
    f: Box<[[[Rat; DIM_G]; DIM_G]; DIM_G]>,
}

impl StructureTensor {
    /// f^C_{AB}
    #[inline]
    pub fn get(&self, c: usize, a: usize, b: usize) -> Rat {
        self.f[c][a][b]
    }

    pub fn get_f64(&self, c: usize, a: usize, b: usize) -> f64 {
        rat_to_f64(self.f[c][a][b])
    }

    /// Contract against the basis: reconstructs [I_A, I_B].
    pub fn contract(&self, a: usize, b: usize) -> LieElement {
        let mut c = [Rat::zero(); 13];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = self.f[k][a][b];
        }
        from_coords(&c)
    }

    /// Sparse export entries (A, B, C, f^C_{AB}) with 1-based indices.
    pub fn entries(&self) -> Vec<StructureEntry> {
        let mut out = Vec::new();
        for a in 0..DIM_G {
            for b in 0..DIM_G {
                for c in 0..DIM_G {
                    let v = self.f[c][a][b];
                    if !v.is_zero() {
                        out.push(StructureEntry {
                            a: a + 1,
                            b: b + 1,
                            c: c + 1,
                            value: v.to_string(),
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct StructureEntry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: String,
}

/// The full structure tensor over the I-basis, computed once.
pub fn structure_constants() -> &'static StructureTensor {
    static TENSOR: Lazy<StructureTensor> = Lazy::new(|| {
        let basis = basis_g();
        let mut f = Box::new([[[Rat::zero(); DIM_G]; DIM_G]; DIM_G]);
        for a in 0..DIM_G {
            for b in 0..DIM_G {
                let coords = basis[a]
                    .bracket(&basis[b])
                    .coords()
                    .expect("basis bracket must decompose");
                for c in 0..DIM_G {
                    f[c][a][b] = coords[c];
                }
            }
        }
        StructureTensor { f }
    });
    &TENSOR
}

/// Killing form matrix K_AB = Tr(ad I_A ad I_B), exact.
pub fn killing_matrix() -> &'static [[Rat; DIM_G]; DIM_G] {
    static K: Lazy<[[Rat; DIM_G]; DIM_G]> = Lazy::new(|| {
        let f = structure_constants();
        let mut k = [[Rat::zero(); DIM_G]; DIM_G];
        for a in 0..DIM_G {
            for b in 0..DIM_G {
                let mut tr = Rat::zero();
                for c in 0..DIM_G {
                    for d in 0..DIM_G {
                        tr += f.get(c, a, d) * f.get(d, b, c);
                    }
                }
                k[a][b] = tr;
            }
        }
        k
    });
    &K
}

/// K(x, y) = Tr(ad x ad y) via bilinearity over the basis coordinates.
pub fn killing_form(x: &LieElement, y: &LieElement) -> Result<Rat, AlgebraError> {
    let cx = x.coords()?;
    let cy = y.coords()?;
    let k = killing_matrix();
    let mut out = Rat::zero();
    for a in 0..DIM_G {
        if cx[a].is_zero() {
            continue;
        }
        for b in 0..DIM_G {
            out += cx[a] * k[a][b] * cy[b];
        }
    }
    Ok(out)
}

/// Diagonal of the invariant metric -(3/40) K in the I-basis.
///
/// Returns an error if K has any off-diagonal entry (it does not, but the
/// normalization claim is asserted rather than assumed).
pub fn metric_diag() -> Result<[Rat; DIM_G], AlgebraError> {
    let k = killing_matrix();
    for a in 0..DIM_G {
        for b in 0..DIM_G {
            if a != b && !k[a][b].is_zero() {
                return Err(AlgebraError::DecompositionFailed);
            }
        }
    }
    let c2 = -Rat::new(3, 40);
    let mut d = [Rat::zero(); DIM_G];
    for a in 0..DIM_G {
        d[a] = c2 * k[a][a];
    }
    Ok(d)
}

/// One element of an orthonormal frame: `scale * I_index`, with the exact
/// squared scale kept rational (the horizontal scales involve sqrt(5)).
#[derive(Debug, Clone, Copy)]
pub struct FrameElement {
    /// 0-based index into the I-basis.
    pub index: usize,
    pub scale: f64,
    pub scale_sq: Rat,
}

/// Orthonormal frame of g under -(3/40)K: the m part first (7 elements),
/// then the isotropy part (6 elements).
#[derive(Debug, Clone)]
pub struct OrthonormalFrame {
    pub elements: Vec<FrameElement>,
}

impl OrthonormalFrame {
    pub fn m_part(&self) -> &[FrameElement] {
        &self.elements[..DIM_M]
    }

    pub fn h_part(&self) -> &[FrameElement] {
        &self.elements[DIM_M..]
    }

    /// 1/|I_A|^2, the weights entering Casimir contractions.
    pub fn inverse_metric_diag(&self) -> [Rat; DIM_G] {
        let mut out = [Rat::zero(); DIM_G];
        for e in &self.elements {
            out[e.index] = e.scale_sq;
        }
        out
    }
}

/// The orthonormal frame of all of g; elements 0..7 are the m-frame
/// (I_1..3)/3 and sqrt(5)/3 (I_4..7).
pub fn orthonormal_frame() -> Result<OrthonormalFrame, AlgebraError> {
    let diag = metric_diag()?;
    let elements = (0..DIM_G)
        .map(|a| {
            let scale_sq = diag[a].recip();
            FrameElement {
                index: a,
                scale: rat_to_f64(scale_sq).sqrt(),
                scale_sq,
            }
        })
        .collect();
    Ok(OrthonormalFrame { elements })
}

/// Orthonormal basis of m as (scale, basis element) pairs.
pub fn orthonormal_m_basis() -> Result<Vec<FrameElement>, AlgebraError> {
    Ok(orthonormal_frame()?.m_part().to_vec())
}

pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// JSON-serializable dump of the basis and structure tensor.
#[derive(Debug, Serialize)]
pub struct AlgebraDump {
    pub schema: u32,
    pub basis: Vec<BasisEntry>,
    pub metric_diag: Vec<String>,
    pub structure_constants: Vec<StructureEntry>,
}

#[derive(Debug, Serialize)]
pub struct BasisEntry {
    pub name: String,
    pub matrix: [[String; 2]; 2],
    pub sp1: String,
}

pub fn dump() -> Result<AlgebraDump, AlgebraError> {
    let basis = basis_g();
    let diag = metric_diag()?;
    Ok(AlgebraDump {
        schema: 1,
        basis: basis
            .iter()
            .enumerate()
            .map(|(i, e)| BasisEntry {
                name: format!("I{}", i + 1),
                matrix: [
                    [e.m[0][0].to_string(), e.m[0][1].to_string()],
                    [e.m[1][0].to_string(), e.m[1][1].to_string()],
                ],
                sp1: e.q.to_string(),
            })
            .collect(),
        metric_diag: diag.iter().map(Rat::to_string).collect(),
        structure_constants: structure_constants().entries(),
    })
}

/// Checks that indices 8..13 (1-based) close under the bracket.
pub fn isotropy_closes() -> bool {
    let f = structure_constants();
    for a in DIM_M..DIM_G {
        for b in DIM_M..DIM_G {
            for c in 0..DIM_M {
                if !f.get(c, a, b).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn basis_matches_construction() {
        let b = basis_g();
        // I_1 = (diag(0, 2i), -3i)
        assert_eq!(b[0].m[1][1], Quaternion::from_ints(0, 2, 0, 0));
        assert_eq!(b[0].q, Quaternion::from_ints(0, -3, 0, 0));
        // I_4 = ((0 1; -1 0), 0)
        assert_eq!(b[3].m[0][1], Quaternion::one());
        assert_eq!(b[3].m[1][0], -Quaternion::one());
        // I_5 has -i off-diagonal in both slots
        assert_eq!(b[4].m[0][1], -Quaternion::imaginary_unit(0));
        assert_eq!(b[4].m[1][0], -Quaternion::imaginary_unit(0));
        for e in b.iter() {
            assert!(LieElement::new(e.m, e.q).is_ok());
        }
    }

    #[test]
    fn bracket_antisymmetry_and_self() {
        let b = basis_g();
        for x in b.iter() {
            assert!(x.bracket(x).is_zero());
        }
        for x in b.iter() {
            for y in b.iter() {
                let lhs = x.bracket(y);
                let rhs = y.bracket(x).scale(-Rat::one());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn jacobi_on_all_basis_triples() {
        let b = basis_g();
        for i in 0..DIM_G {
            for j in i..DIM_G {
                for k in j..DIM_G {
                    let s = b[i]
                        .bracket(&b[j].bracket(&b[k]))
                        .add(&b[j].bracket(&b[k].bracket(&b[i])))
                        .add(&b[k].bracket(&b[i].bracket(&b[j])));
                    assert!(s.is_zero(), "Jacobi fails on ({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn structure_tensor_reproduces_brackets() {
        let f = structure_constants();
        let b = basis_g();
        for a in 0..DIM_G {
            for c in 0..DIM_G {
                assert_eq!(f.contract(a, c), b[a].bracket(&b[c]));
            }
        }
    }

    #[test]
    fn structure_tensor_antisymmetric() {
        let f = structure_constants();
        for a in 0..DIM_G {
            for b in 0..DIM_G {
                for c in 0..DIM_G {
                    assert_eq!(f.get(c, a, b), -f.get(c, b, a));
                }
            }
        }
    }

    #[test]
    fn isotropy_subalgebra_closes() {
        assert!(isotropy_closes());
    }

    #[test]
    fn killing_diag_matches_squashed_metric() {
        let d = metric_diag().unwrap();
        let expect = [
            Rat::from(9),
            Rat::from(9),
            Rat::from(9),
            Rat::new(9, 5),
            Rat::new(9, 5),
            Rat::new(9, 5),
            Rat::new(9, 5),
            Rat::new(9, 10),
            Rat::new(9, 10),
            Rat::new(9, 10),
            Rat::new(3, 2),
            Rat::new(3, 2),
            Rat::new(3, 2),
        ];
        assert_eq!(d, expect);
    }

    #[test]
    fn killing_form_symmetric_and_block_orthogonal() {
        let b = basis_g();
        // m/h and vertical/horizontal orthogonality
        for a in 0..DIM_M {
            for i in DIM_M..DIM_G {
                assert_eq!(killing_form(&b[a], &b[i]).unwrap(), Rat::zero());
            }
        }
        for a in 0..3 {
            for h in 3..DIM_M {
                assert_eq!(killing_form(&b[a], &b[h]).unwrap(), Rat::zero());
            }
        }
        // symmetry on a couple of generic combinations
        let x = b[0].add(&b[4].scale(Rat::new(2, 3)));
        let y = b[2].add(&b[11].scale(Rat::from(-5)));
        assert_eq!(
            killing_form(&x, &y).unwrap(),
            killing_form(&y, &x).unwrap()
        );
    }

    #[test]
    fn killing_normalization_examples() {
        let b = basis_g();
        let c2 = -Rat::new(3, 40);
        assert_eq!(c2 * killing_form(&b[0], &b[0]).unwrap(), Rat::from(9));
        assert_eq!(c2 * killing_form(&b[3], &b[3]).unwrap(), Rat::new(9, 5));
        assert_eq!(killing_form(&b[0], &b[3]).unwrap(), Rat::zero());
    }

    #[test]
    fn orthonormal_frame_scales() {
        let m = orthonormal_m_basis().unwrap();
        assert_eq!(m.len(), 7);
        assert_eq!(m[0].scale_sq, Rat::new(1, 9));
        assert_eq!(m[3].scale_sq, Rat::new(5, 9));
        // g(Ihat_a, Ihat_b) = delta_ab: scale_sq * metric_diag = 1
        let d = metric_diag().unwrap();
        for e in &m {
            assert_eq!(e.scale_sq * d[e.index], Rat::one());
        }
    }

    #[test]
    fn specific_brackets() {
        let b = basis_g();
        // [I_1, I_2] = -2 I_3 + 12 I_13
        let c = b[0].bracket(&b[1]).coords().unwrap();
        assert_eq!(c[2], Rat::from(-2));
        assert_eq!(c[12], Rat::from(12));
        // [I_4, I_5] = 2/5 I_1 - 2 I_8 + 6/5 I_11
        let c = b[3].bracket(&b[4]).coords().unwrap();
        assert_eq!(c[0], Rat::new(2, 5));
        assert_eq!(c[7], Rat::from(-2));
        assert_eq!(c[10], Rat::new(6, 5));
    }

    #[test]
    fn constructor_rejects_malformed() {
        let z = Quaternion::zero();
        let bad = [[Quaternion::one(), z], [z, z]];
        assert_eq!(
            LieElement::new(bad, z).unwrap_err(),
            AlgebraError::NotAntiHermitian
        );
        assert_eq!(
            LieElement::new([[z, z], [z, z]], Quaternion::one()).unwrap_err(),
            AlgebraError::NotImaginary
        );
    }
}
