//! The invariant connection family on the asymptotically conical background:
//! its first-order reduction, the closed-form profile, the limiting member,
//! decay-rate fits and the assembled curvature residual.

use crate::algebra::structure_constants;
use crate::geometry::flow::{
    fit_slope, integrate_adaptive, launch_series, FlowError, LAUNCH_EPS_FACTOR,
};
use crate::geometry::octonion_structure_constants;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum InstantonError {
    #[error("profile parameters must be positive")]
    BadParameters,
    #[error("flat profile has no decay rate")]
    FlatProfile,
    #[error("the limiting profile is undefined at r = 0")]
    UndefinedAtOrigin,
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Family parameter: a nonnegative value, or the limiting member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Y0 {
    Finite(f64),
    Infinite,
}

impl Y0 {
    pub fn is_flat(&self) -> bool {
        matches!(self, Y0::Finite(v) if *v == 0.0)
    }
}

impl fmt::Display for Y0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Y0::Finite(v) => write!(f, "{v}"),
            Y0::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Y0 {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "Inf" | "INF" | "infinity" => Ok(Y0::Infinite),
            other => other
                .parse::<f64>()
                .map(Y0::Finite)
                .map_err(|e| format!("bad family parameter {other:?}: {e}")),
        }
    }
}

/// phi-dot from the first-order reduction:
/// alpha phi' = (12 - 12 a^2/(5 b^2)) - (2 + 4 a^2/(5 b^2)) phi - 2 phi^2.
pub fn instanton_rhs(phi: f64, alpha: f64, beta: f64) -> f64 {
    let h = alpha * alpha / (5.0 * beta * beta);
    ((12.0 - 12.0 * h) - (2.0 + 4.0 * h) * phi - 2.0 * phi * phi) / alpha
}

/// Closed-form profile phi = alpha^2 / (1/y0 + 2 int_alpha) - 3.
pub fn closed_form_phi(y0: f64, alpha: f64, int_alpha: f64) -> f64 {
    alpha * alpha / (1.0 / y0 + 2.0 * int_alpha) - 3.0
}

/// The limiting member: phi = alpha^2 / (2 int_alpha) - 3, defined for r > 0.
pub fn limiting_phi(alpha: f64, int_alpha: f64) -> Result<f64, InstantonError> {
    if int_alpha <= 0.0 {
        return Err(InstantonError::UndefinedAtOrigin);
    }
    Ok(alpha * alpha / (2.0 * int_alpha) - 3.0)
}

fn profile_phi(y0: Y0, alpha: f64, int_alpha: f64) -> f64 {
    if y0.is_flat() {
        return -3.0;
    }
    match y0 {
        Y0::Finite(v) => closed_form_phi(v, alpha, int_alpha),
        Y0::Infinite => alpha * alpha / (2.0 * int_alpha) - 3.0,
    }
}

/// d(phi)/dr of the closed form, via the auxiliary variable y = (phi+3)/alpha^2
/// with y' = -2 alpha y^2.
pub fn closed_form_phi_dot(y0: Y0, alpha: f64, beta: f64, int_alpha: f64) -> f64 {
    if y0.is_flat() {
        return 0.0;
    }
    let y = match y0 {
        Y0::Finite(v) => 1.0 / (1.0 / v + 2.0 * int_alpha),
        Y0::Infinite => 1.0 / (2.0 * int_alpha),
    };
    let alpha_dot = (25.0 * beta * beta - 2.0 * alpha * alpha) / (5.0 * beta * beta);
    2.0 * alpha * alpha_dot * y - 2.0 * alpha.powi(3) * y * y
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfileSample {
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub int_alpha: f64,
    /// profile integrated through the first-order reduction
    pub phi_ode: f64,
    /// closed form evaluated on the same metric data
    pub phi_closed: f64,
}

/// A sampled connection profile over the metric flow, carrying both the
/// independently integrated and the closed-form values.
#[derive(Debug, Clone)]
pub struct InstantonProfile {
    pub y0: Y0,
    pub beta0: f64,
    pub samples: Vec<ProfileSample>,
}

impl InstantonProfile {
    /// Co-integrates the metric flow and the profile equation from the
    /// series launch; state (alpha, w, int_alpha, phi) with w = 5 beta^2 -
    /// alpha^2.
    pub fn compute(y0: Y0, beta0: f64, rmax: f64) -> Result<Self, InstantonError> {
        if beta0 <= 0.0 || rmax <= 0.0 {
            return Err(InstantonError::BadParameters);
        }
        if let Y0::Finite(v) = y0 {
            if v < 0.0 {
                return Err(InstantonError::BadParameters);
            }
        }
        let eps = LAUNCH_EPS_FACTOR * beta0;
        let (alpha, beta_sq, int_alpha) = launch_series(beta0, eps);
        let w = 5.0 * beta_sq - alpha * alpha;
        let phi0 = profile_phi(y0, alpha, int_alpha);
        let rhs = move |y: &[f64; 4]| -> [f64; 4] {
            let [a, w, _, phi] = *y;
            let b2 = (a * a + w) / 5.0;
            let h = a * a / (5.0 * b2);
            [
                (25.0 * b2 - 2.0 * a * a) / (5.0 * b2),
                -4.0 * a * w / (5.0 * b2),
                a,
                ((12.0 - 12.0 * h) - (2.0 + 4.0 * h) * phi - 2.0 * phi * phi) / a,
            ]
        };
        let raw = integrate_adaptive(&rhs, [alpha, w, int_alpha, phi0], eps, rmax, 1e-12, 1e-14)?;
        let samples = raw
            .into_iter()
            .map(|(r, [a, w, ia, phi])| ProfileSample {
                r,
                alpha: a,
                beta: ((a * a + w) / 5.0).sqrt(),
                int_alpha: ia,
                phi_ode: phi,
                phi_closed: profile_phi(y0, a, ia),
            })
            .collect();
        Ok(Self { y0, beta0, samples })
    }

    /// Largest |phi_ode - phi_closed| over the samples.
    pub fn closed_form_agreement(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.phi_ode - s.phi_closed).abs())
            .fold(0.0, f64::max)
    }

    /// Least-squares slope of log|phi| against log r over the last decade.
    pub fn decay_rate(&self) -> Result<f64, InstantonError> {
        if self.y0.is_flat() {
            return Err(InstantonError::FlatProfile);
        }
        let rmax = self.samples.last().map(|s| s.r).unwrap_or(0.0);
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|s| s.r > rmax / 10.0 && s.phi_closed.abs() > 0.0)
            .map(|s| (s.r.ln(), s.phi_closed.abs().ln()))
            .collect();
        if pts.len() < 8 {
            return Err(InstantonError::BadParameters);
        }
        Ok(fit_slope(&pts))
    }

    /// Largest violation of y' = -2 alpha y^2 under the substitution chain
    /// x = phi + 3, y = x / alpha^2, evaluated on samples with r >= 0.1
    /// (inside the launch window the difference quotient is dominated by
    /// cancellation noise).
    pub fn substitution_chain_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for s in self.samples.iter().filter(|s| s.r >= 0.1) {
            let a = s.alpha;
            let b2 = s.beta * s.beta;
            let x = s.phi_ode + 3.0;
            let y = x / (a * a);
            let x_dot = instanton_rhs(s.phi_ode, a, s.beta);
            let a_dot = (25.0 * b2 - 2.0 * a * a) / (5.0 * b2);
            let y_dot = x_dot / (a * a) - 2.0 * a_dot * x / (a * a * a);
            worst = worst.max((y_dot + 2.0 * a * y * y).abs());
        }
        worst
    }
}

/// Coefficient of T_d in the assembled curvature 2-form contraction, for the
/// displayed first-order equation. Terms are the canonical-connection part,
/// the linear part and (vertical only) the quadratic commutator part.
fn assembled_rhs(phi: f64, alpha: f64, beta: f64, a: usize, d: usize) -> (f64, f64) {
    let f = structure_constants();
    let oc = octonion_structure_constants();
    let eps = |d: usize, b: usize, c: usize| -> f64 {
        match (d, b, c) {
            (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
            (3, 2, 1) | (2, 1, 3) | (1, 3, 2) => -1.0,
            _ => 0.0,
        }
    };
    let mut vertical = 0.0;
    let mut magnitude = 0.0f64;
    for b in 1..=3usize {
        for c in 1..=3usize {
            let phi_abc = oc.get(a as u8, b as u8, c as u8) as f64;
            if phi_abc == 0.0 {
                continue;
            }
            let term = phi_abc
                * (f.get_f64(d + 9, b - 1, c - 1)
                    + phi * f.get_f64(d - 1, b - 1, c - 1)
                    - 2.0 * phi * phi * eps(d, b, c));
            vertical += term;
            magnitude = magnitude.max(term.abs());
        }
    }
    let mut horizontal = 0.0;
    for b in 4..=7usize {
        for c in 4..=7usize {
            let phi_abc = oc.get(a as u8, b as u8, c as u8) as f64;
            if phi_abc == 0.0 {
                continue;
            }
            let term = phi_abc
                * (f.get_f64(d + 9, b - 1, c - 1) + phi * f.get_f64(d - 1, b - 1, c - 1));
            horizontal += term;
            magnitude = magnitude.max(term.abs());
        }
    }
    let rhs = vertical / (alpha * alpha) + horizontal / (beta * beta);
    let scale = magnitude / (alpha * alpha) + magnitude / (beta * beta);
    (rhs, scale)
}

/// Sup over the three gauge directions of the normalized defect of the
/// displayed first-order equation, assembled from the curvature components.
///
/// The defect is normalized by the largest assembled term so the value is
/// meaningful both near the collapsed sphere (where individual terms grow
/// like 1/alpha^2) and on the cone.
pub fn curvature_residual(phi: f64, phi_dot: f64, alpha: f64, beta: f64) -> f64 {
    let mut worst = 0.0f64;
    for a in 1..=3usize {
        for d in 1..=3usize {
            let lhs = if a == d { 2.0 * phi_dot / alpha } else { 0.0 };
            let (rhs, scale) = assembled_rhs(phi, alpha, beta, a, d);
            worst = worst.max((lhs - rhs).abs() / (1.0 + scale + lhs.abs()));
        }
    }
    worst
}

/// Curvature residual along a closed-form profile sample.
pub fn profile_curvature_residual(profile: &InstantonProfile, sample: &ProfileSample) -> f64 {
    let phi_dot = closed_form_phi_dot(profile.y0, sample.alpha, sample.beta, sample.int_alpha);
    curvature_residual(sample.phi_closed, phi_dot, sample.alpha, sample.beta)
}
