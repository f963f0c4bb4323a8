//! Parameters, states and the one-step evolution operators.
//!
//! The general operator adds the identity to the continuous right-hand side,
//! so one step of `W` is exactly one unit-step Euler update of the ODE:
//!
//! ```text
//! x' = βy − αx/(1+x) − (d0 + d1·x)·x + x
//! y' = αx/(1+x) − μy + y
//! ```
//!
//! `W0` is the same map with `d0 = d1 = 0` and `β ≠ μ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five model constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    /// Maximum emergence rate from larvae to adults.
    pub alpha: f64,
    /// Oviposition (birth) rate.
    pub beta: f64,
    /// Adult death rate.
    pub mu: f64,
    /// Density-independent larvae death rate.
    pub d0: f64,
    /// Density-dependent larvae death coefficient.
    pub d1: f64,
}

impl Parameters {
    pub fn new(alpha: f64, beta: f64, mu: f64, d0: f64, d1: f64) -> Self {
        Self { alpha, beta, mu, d0, d1 }
    }

    /// Parameters of the reduced operator (no larval death terms).
    pub fn w0(alpha: f64, beta: f64, mu: f64) -> Self {
        Self::new(alpha, beta, mu, 0.0, 0.0)
    }

    /// `d0 = d1 = 0` and `β ≠ μ`.
    pub fn is_case_w0(&self) -> bool {
        self.d0 == 0.0 && self.d1 == 0.0 && self.beta != self.mu
    }

    /// Limit of the adult population on surviving orbits.
    pub fn adult_limit(&self) -> f64 {
        self.alpha / self.mu
    }

    pub fn validate(&self, mode: ValidationMode) -> ValidationReport {
        validate_parameters(self, mode)
    }

    /// Returns `Ok(())` when the parameters pass validation in `mode`.
    pub fn ensure_valid(&self, mode: ValidationMode) -> Result<()> {
        let report = self.validate(mode);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidParameters(report))
        }
    }
}

/// A point of the closed positive quadrant: larvae `x`, adults `y`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub const ORIGIN: State = State { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }

    pub fn sup_norm(&self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn distance_sup(&self, other: &State) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn in_quadrant(&self) -> bool {
        self.x >= 0.0 && self.y >= 0.0 && self.x.is_finite() && self.y.is_finite()
    }

    pub(crate) fn ensure_in_quadrant(&self) -> Result<()> {
        if self.in_quadrant() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "state ({}, {}) is outside the closed positive quadrant",
                self.x, self.y
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// Only the sign and range constraints on the constants.
    General,
    /// Additionally `d0 = d1 = 0` and `β ≠ μ`.
    W0,
}

/// Which parameter constraints hold. Validation never fails; callers decide
/// what to do with an invalid report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub parameters: Parameters,
    /// `0 < α ≤ 1`
    pub alpha_in_range: bool,
    /// `β > 0`
    pub beta_positive: bool,
    /// `0 < μ ≤ 1`
    pub mu_in_range: bool,
    /// `d0 ≥ 0` and `d1 ≥ 0`
    pub death_rates_nonnegative: bool,
    /// `d0 = d1 = 0`
    pub no_larval_death: bool,
    /// `β ≠ μ`
    pub beta_ne_mu: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        let base = self.alpha_in_range
            && self.beta_positive
            && self.mu_in_range
            && self.death_rates_nonnegative;
        match self.mode {
            ValidationMode::General => base,
            ValidationMode::W0 => base && self.no_larval_death && self.beta_ne_mu,
        }
    }

    /// Human-readable list of the failed constraints.
    pub fn violations(&self) -> Vec<String> {
        let p = &self.parameters;
        let mut out = Vec::new();
        if !self.alpha_in_range {
            out.push(format!("alpha = {} must lie in (0, 1]", p.alpha));
        }
        if !self.beta_positive {
            out.push(format!("beta = {} must be positive", p.beta));
        }
        if !self.mu_in_range {
            out.push(format!("mu = {} must lie in (0, 1]", p.mu));
        }
        if !self.death_rates_nonnegative {
            out.push(format!("d0 = {}, d1 = {} must be nonnegative", p.d0, p.d1));
        }
        if self.mode == ValidationMode::W0 {
            if !self.no_larval_death {
                out.push(format!("reduced operator requires d0 = d1 = 0 (got {}, {})", p.d0, p.d1));
            }
            if !self.beta_ne_mu {
                out.push(format!("reduced operator requires beta != mu (both {})", p.beta));
            }
        }
        out
    }
}

fn in_unit_interval(v: f64) -> bool {
    v > 0.0 && v <= 1.0
}

pub fn validate_parameters(p: &Parameters, mode: ValidationMode) -> ValidationReport {
    ValidationReport {
        mode,
        parameters: *p,
        alpha_in_range: in_unit_interval(p.alpha),
        beta_positive: p.beta > 0.0 && p.beta.is_finite(),
        mu_in_range: in_unit_interval(p.mu),
        death_rates_nonnegative: p.d0 >= 0.0 && p.d1 >= 0.0 && p.d0.is_finite() && p.d1.is_finite(),
        no_larval_death: p.d0 == 0.0 && p.d1 == 0.0,
        beta_ne_mu: p.beta != p.mu,
    }
}

/// `α·x/(1+x)`, evaluated as `α·(x/(1+x))` so huge `x` saturates at `α`.
#[inline]
pub fn emergence(alpha: f64, x: f64) -> f64 {
    alpha * (x / (1.0 + x))
}

/// One step of the reduced operator without any checks.
#[inline]
pub(crate) fn step_w0(p: &Parameters, x: f64, y: f64) -> (f64, f64) {
    let e = emergence(p.alpha, x);
    (p.beta * y - e + x, e - p.mu * y + y)
}

/// One step of the general operator `W`.
pub fn apply_w(p: &Parameters, s: State) -> Result<State> {
    s.ensure_in_quadrant()?;
    let e = emergence(p.alpha, s.x);
    Ok(State {
        x: p.beta * s.y - e - (p.d0 + p.d1 * s.x) * s.x + s.x,
        y: e - p.mu * s.y + s.y,
    })
}

/// One step of the reduced operator `W0`. The parameters must pass
/// [`ValidationMode::W0`].
pub fn apply_w0(p: &Parameters, s: State) -> Result<State> {
    p.ensure_valid(ValidationMode::W0)?;
    s.ensure_in_quadrant()?;
    let (x, y) = step_w0(p, s.x, s.y);
    Ok(State { x, y })
}

/// Right-hand side of the continuous system.
pub fn continuous_rhs(p: &Parameters, s: State) -> Result<(f64, f64)> {
    if s.x < 0.0 || !s.x.is_finite() || !s.y.is_finite() {
        return Err(Error::Domain(format!(
            "continuous system evaluated at x = {} (requires finite x >= 0)",
            s.x
        )));
    }
    Ok(rhs_unchecked(p, s.x, s.y))
}

#[inline]
pub(crate) fn rhs_unchecked(p: &Parameters, x: f64, y: f64) -> (f64, f64) {
    let e = emergence(p.alpha, x);
    (p.beta * y - e - (p.d0 + p.d1 * x) * x, e - p.mu * y)
}
