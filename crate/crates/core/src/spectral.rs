//! Fixed points of the reduced operator and the type of the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{step_w0, Parameters, State, ValidationMode};

pub type Matrix2 = [[f64; 2]; 2];

/// Default half-width of the band around `|λ| = 1` reported as nonhyperbolic.
pub const DEFAULT_HYPERBOLICITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedPointType {
    Attracting,
    Repelling,
    Saddle,
    Nonhyperbolic,
}

impl FixedPointType {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Attracting => "attracting",
            Self::Repelling => "repelling",
            Self::Saddle => "saddle",
            Self::Nonhyperbolic => "nonhyperbolic",
        }
    }
}

impl std::fmt::Display for FixedPointType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub jacobian: Matrix2,
    /// Larger eigenvalue.
    pub lambda1: f64,
    pub lambda2: f64,
    pub classification: FixedPointType,
}

impl SpectralReport {
    pub fn is_hyperbolic(&self) -> bool {
        self.classification != FixedPointType::Nonhyperbolic
    }
}

/// Jacobian of `W0` at the origin.
pub fn jacobian_at_origin(p: &Parameters) -> Matrix2 {
    [[1.0 - p.alpha, p.beta], [p.alpha, 1.0 - p.mu]]
}

fn discriminant_sqrt(p: &Parameters) -> f64 {
    let d = p.alpha - p.mu;
    (d * d + 4.0 * p.alpha * p.beta).sqrt()
}

/// Closed-form eigenvalues `½(2 − α − μ ± √((α−μ)² + 4αβ))`, larger first.
pub fn eigenvalues(p: &Parameters) -> (f64, f64) {
    let s = discriminant_sqrt(p);
    let base = 2.0 - p.alpha - p.mu;
    (0.5 * (base + s), 0.5 * (base - s))
}

pub fn classify_eigenvalues(lambda1: f64, lambda2: f64, tol: f64) -> FixedPointType {
    let (a, b) = (lambda1.abs(), lambda2.abs());
    if (a - 1.0).abs() <= tol || (b - 1.0).abs() <= tol {
        FixedPointType::Nonhyperbolic
    } else if a < 1.0 && b < 1.0 {
        FixedPointType::Attracting
    } else if a > 1.0 && b > 1.0 {
        FixedPointType::Repelling
    } else {
        FixedPointType::Saddle
    }
}

/// Spectral type of the origin. Parameters must satisfy the range
/// constraints; `β = μ` is allowed and lands in the nonhyperbolic band.
pub fn classify_origin(p: &Parameters, tol: f64) -> Result<SpectralReport> {
    p.ensure_valid(ValidationMode::General)?;
    if !(tol >= 0.0) {
        return Err(Error::Precondition(format!("tolerance must be nonnegative, got {tol}")));
    }
    let (lambda1, lambda2) = eigenvalues(p);
    Ok(SpectralReport {
        jacobian: jacobian_at_origin(p),
        lambda1,
        lambda2,
        classification: classify_eigenvalues(lambda1, lambda2, tol),
    })
}

/// Truth values of the two inequalities equivalent to `|λ1,2| < 1`:
/// `α + μ + √D < 4` and `0 < α + μ − √D < 4`.
pub fn stability_inequalities(p: &Parameters) -> (bool, bool) {
    let s = discriminant_sqrt(p);
    let sum = p.alpha + p.mu;
    let lower = sum - s;
    (sum + s < 4.0, 0.0 < lower && lower < 4.0)
}

/// Settings of the uniqueness scan backing [`find_fixed_points_w0`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointScan {
    pub x_max: f64,
    pub y_max: f64,
    pub step: f64,
    /// Residual `‖W0(s) − s‖∞` below which a point counts as fixed.
    pub residual_tol: f64,
    /// Damping factor of the refinement iteration `s ← s + ω(W0(s) − s)`.
    pub damping: f64,
    pub refine_iters: usize,
}

impl Default for FixedPointScan {
    fn default() -> Self {
        Self {
            x_max: 50.0,
            y_max: 50.0,
            step: 0.05,
            residual_tol: 1e-10,
            damping: 0.5,
            refine_iters: 2000,
        }
    }
}

/// `‖W0(s) − s‖∞`.
pub fn fixed_point_residual(p: &Parameters, s: State) -> f64 {
    let (x, y) = step_w0(p, s.x, s.y);
    (x - s.x).abs().max((y - s.y).abs())
}

/// Fixed points of `W0` in the closed positive quadrant, which is just the
/// origin. A residual scan looks for any other candidate: grid-local minima
/// of the residual are refined by damped fixed-point iteration, and one that
/// settles away from the origin is reported as a verification error.
pub fn find_fixed_points_w0(p: &Parameters, scan: &FixedPointScan) -> Result<Vec<State>> {
    p.ensure_valid(ValidationMode::W0)?;
    if !(scan.step > 0.0 && scan.x_max > 0.0 && scan.y_max > 0.0) {
        return Err(Error::Precondition("scan box and step must be positive".into()));
    }
    let nx = (scan.x_max / scan.step).round() as usize + 1;
    let ny = (scan.y_max / scan.step).round() as usize + 1;
    let at = |i: usize, j: usize| State::new(i as f64 * scan.step, j as f64 * scan.step);
    let residual: Vec<f64> = (0..nx)
        .flat_map(|i| (0..ny).map(move |j| (i, j)))
        .map(|(i, j)| fixed_point_residual(p, at(i, j)))
        .collect();
    let r = |i: usize, j: usize| residual[i * ny + j];

    let mut extra = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            let centre = r(i, j);
            let mut is_min = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a < 0 || b < 0 || a >= nx as i64 || b >= ny as i64 {
                        continue;
                    }
                    if r(a as usize, b as usize) < centre {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if !is_min || (i == 0 && j == 0) {
                continue;
            }
            let refined = refine_fixed_point(p, at(i, j), scan);
            if fixed_point_residual(p, refined) < scan.residual_tol && refined.sup_norm() > 1e-6 {
                extra.push(refined);
            }
        }
    }
    if !extra.is_empty() {
        return Err(Error::Verification(format!(
            "found fixed points besides the origin: {extra:?}"
        )));
    }
    debug_assert_eq!(fixed_point_residual(p, State::ORIGIN), 0.0);
    Ok(vec![State::ORIGIN])
}

fn refine_fixed_point(p: &Parameters, mut s: State, scan: &FixedPointScan) -> State {
    for _ in 0..scan.refine_iters {
        let (x, y) = step_w0(p, s.x, s.y);
        let next = State::new(
            (s.x + scan.damping * (x - s.x)).max(0.0),
            (s.y + scan.damping * (y - s.y)).max(0.0),
        );
        if !next.x.is_finite() || !next.y.is_finite() {
            break;
        }
        if next.distance_sup(&s) < 1e-15 {
            return next;
        }
        s = next;
    }
    s
}
