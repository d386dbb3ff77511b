//! Closed-form reference values for the block spectra, the candidate list
//! and the fiber-operator table, kept as exact surd expressions so the
//! regression fixtures and the report renderer share one source.

use crate::algebra::Rat;
use crate::reptheory::IrrepLabelG;
use serde::Serialize;
use std::fmt;

/// (p + q sqrt(n)) / r with integer entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Surd {
    pub p: i64,
    pub q: i64,
    pub n: i64,
    pub r: i64,
}

impl Surd {
    pub const fn new(p: i64, q: i64, n: i64, r: i64) -> Self {
        Self { p, q, n, r }
    }

    pub const fn rational(p: i64, r: i64) -> Self {
        Self { p, q: 0, n: 0, r }
    }

    pub fn value(&self) -> f64 {
        (self.p as f64 + self.q as f64 * (self.n as f64).sqrt()) / self.r as f64
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            if self.r == 1 {
                return write!(f, "{}", self.p);
            }
            return write!(f, "{}/{}", self.p, self.r);
        }
        let root = if self.q == 1 {
            format!("\u{221a}{}", self.n)
        } else if self.q == -1 {
            format!("-\u{221a}{}", self.n)
        } else {
            format!("{}\u{221a}{}", self.q, self.n)
        };
        let num = if self.p == 0 {
            root
        } else if root.starts_with('-') {
            format!("{}{}", self.p, root)
        } else {
            format!("{}+{}", self.p, root)
        };
        if self.r == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

fn lab(a: u32, b: u32, c: u32) -> IrrepLabelG {
    IrrepLabelG::new(a, b, c)
}

/// The eight candidate labels retained by the threshold-5/2 scan.
pub fn candidate_labels() -> Vec<IrrepLabelG> {
    let mut v = vec![
        lab(0, 0, 0),
        lab(1, 0, 0),
        lab(0, 0, 1),
        lab(0, 1, 0),
        lab(1, 0, 1),
        lab(0, 1, 1),
        lab(0, 2, 0),
        lab(0, 0, 2),
    ];
    v.sort();
    v
}

/// t = 0 spectra of the adjoint-twisted blocks over the candidate labels.
pub fn twisted_spectra() -> Vec<(IrrepLabelG, Vec<Surd>)> {
    vec![
        (lab(0, 0, 0), vec![Surd::rational(1, 2)]),
        (lab(0, 0, 1), vec![]),
        (lab(0, 1, 0), vec![]),
        (lab(1, 0, 0), vec![Surd::rational(19, 6), Surd::rational(-17, 6)]),
        (lab(1, 0, 1), vec![]),
        (
            lab(0, 1, 1),
            vec![
                Surd::new(-3, -16, 2, 6),
                Surd::new(-3, 16, 2, 6),
                Surd::new(1, -8, 6, 6),
                Surd::new(1, 8, 6, 6),
            ],
        ),
        (
            lab(0, 2, 0),
            vec![
                Surd::new(-1, -2, 17, 2),
                Surd::new(-1, 2, 17, 2),
                Surd::rational(-7, 2),
            ],
        ),
        (
            lab(0, 0, 2),
            vec![Surd::new(-1, -2, 17, 2), Surd::new(-1, 2, 17, 2)],
        ),
    ]
}

/// t = 0 spectra of the untwisted blocks over the candidate labels.
pub fn untwisted_spectra() -> Vec<(IrrepLabelG, Vec<Surd>)> {
    vec![
        (lab(0, 0, 0), vec![Surd::rational(-7, 2)]),
        (lab(0, 0, 1), vec![]),
        (lab(0, 1, 0), vec![]),
        (
            lab(1, 0, 0),
            vec![Surd::new(-3, -2, 161, 6), Surd::new(-3, 2, 161, 6)],
        ),
        (lab(1, 0, 1), vec![]),
        (
            lab(0, 1, 1),
            vec![
                Surd::new(-3, -8, 11, 6),
                Surd::new(-3, 8, 11, 6),
                Surd::rational(-23, 6),
            ],
        ),
        (
            lab(0, 2, 0),
            vec![Surd::rational(9, 2), Surd::rational(-25, 6)],
        ),
        (lab(0, 0, 2), vec![Surd::rational(9, 2)]),
    ]
}

/// Scalar values of the squared 1/3-family members on the candidate blocks.
pub fn square_values() -> Vec<(IrrepLabelG, Rat, Rat)> {
    // (label, twisted, untwisted)
    vec![
        (lab(0, 0, 0), Rat::new(1, 9), Rat::new(49, 9)),
        (lab(1, 0, 0), Rat::from(9), Rat::new(43, 3)),
        (lab(0, 1, 1), Rat::new(32, 3), Rat::from(16)),
        (lab(0, 0, 2), Rat::new(121, 9), Rat::new(169, 9)),
        (lab(0, 2, 0), Rat::new(121, 9), Rat::new(169, 9)),
    ]
}

/// Fiber operator spectrum: (eigenvalue, multiplicity).
pub fn fiber_table() -> Vec<(f64, usize)> {
    vec![(-4.0, 4), (-2.0, 8), (2.0, 8), (4.0, 4)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_rendering() {
        assert_eq!(Surd::rational(1, 2).to_string(), "1/2");
        assert_eq!(Surd::new(-1, 2, 17, 2).to_string(), "(-1+2\u{221a}17)/2");
        assert_eq!(Surd::new(-3, -16, 2, 6).to_string(), "(-3-16\u{221a}2)/6");
        assert_eq!(Surd::rational(-7, 2).to_string(), "-7/2");
        assert_eq!(Surd::rational(9, 1).to_string(), "9");
    }

    #[test]
    fn surd_values() {
        assert!((Surd::new(-1, 2, 17, 2).value() - 3.6231056256176606).abs() < 1e-12);
        assert!((Surd::rational(19, 6).value() - 19.0 / 6.0).abs() < 1e-15);
    }
}
