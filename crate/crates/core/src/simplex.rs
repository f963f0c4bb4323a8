//! The normalized operator `U` on the simplex `x + y = 1`, its coordinate
//! form `T` on `[0, 1]`, and exclusion of periodic points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{emergence, step_w0, Parameters, State, ValidationMode};

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-12;
/// Roots with `|T(x) − x|` below this are fixed points of `T`.
pub const FIXED_ROOT_TOL: f64 = 1e-10;
pub const DEFAULT_P_MAX: u32 = 8;
pub const DEFAULT_GRID: usize = 10_000;

/// Normalized operator: `W0` followed by projection onto `x + y = 1`.
pub fn apply_u(p: &Parameters, s: State) -> Result<State> {
    p.ensure_valid(ValidationMode::W0)?;
    if !s.in_quadrant() || (s.x + s.y - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("({}, {}) is not on the simplex", s.x, s.y)));
    }
    let denom = (1.0 + s.x) * (s.x + (p.beta - p.mu + 1.0) * s.y);
    if !(denom > 0.0) {
        return Err(Error::Domain(format!("normalizing denominator {denom} is not positive")));
    }
    let x = ((1.0 + s.x) * (s.x + p.beta * s.y) - p.alpha * s.x) / denom;
    let y = (p.alpha * s.x + (1.0 + s.x) * (1.0 - p.mu) * s.y) / denom;
    Ok(State::new(x, y))
}

/// Numerator `a(x) = (1−β)x² + (1−α)x + β` of `T`.
fn t_numerator(p: &Parameters, x: f64) -> f64 {
    ((1.0 - p.beta) * x + (1.0 - p.alpha)) * x + p.beta
}

/// Denominator `b(x) = (μ−β)x² + x + β − μ + 1` of `T`.
fn t_denominator(p: &Parameters, x: f64) -> f64 {
    ((p.mu - p.beta) * x + 1.0) * x + p.beta - p.mu + 1.0
}

#[inline]
fn t_unchecked(p: &Parameters, x: f64) -> f64 {
    t_numerator(p, x) / t_denominator(p, x)
}

/// The one-dimensional map `T(x) = a(x)/b(x)` on `[0, 1]`.
pub fn apply_t(p: &Parameters, x: f64) -> Result<f64> {
    p.ensure_valid(ValidationMode::W0)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("T is defined on [0, 1], got {x}")));
    }
    Ok(t_unchecked(p, x))
}

/// `T` composed `q` times.
pub fn iterate_t(p: &Parameters, x: f64, q: u32) -> f64 {
    (0..q).fold(x, |acc, _| t_unchecked(p, acc))
}

/// `h(x) = b(x) − a(x) = (μ−1)x² + αx + 1 − μ`.
pub fn h_gap(p: &Parameters, x: f64) -> f64 {
    ((p.mu - 1.0) * x + p.alpha) * x + 1.0 - p.mu
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TRangeReport {
    pub grid_n: usize,
    pub min_gap: f64,
    pub min_numerator: f64,
    pub min_denominator: f64,
    pub h_at_0: f64,
    pub h_at_1: f64,
    pub ok: bool,
}

/// Checks `h ≥ 0`, `a ≥ 0` and `b > 0` on a uniform grid of `grid_n` points,
/// together with `h(0) = 1 − μ` and `h(1) = α`.
pub fn t_range_report(p: &Parameters, grid_n: usize) -> Result<TRangeReport> {
    p.ensure_valid(ValidationMode::W0)?;
    if grid_n < 2 {
        return Err(Error::Precondition("grid_n must be at least 2".into()));
    }
    let mut report = TRangeReport {
        grid_n,
        min_gap: f64::INFINITY,
        min_numerator: f64::INFINITY,
        min_denominator: f64::INFINITY,
        h_at_0: h_gap(p, 0.0),
        h_at_1: h_gap(p, 1.0),
        ok: false,
    };
    for i in 0..grid_n {
        let x = i as f64 / (grid_n - 1) as f64;
        report.min_gap = report.min_gap.min(h_gap(p, x));
        report.min_numerator = report.min_numerator.min(t_numerator(p, x));
        report.min_denominator = report.min_denominator.min(t_denominator(p, x));
    }
    let endpoints = (report.h_at_0 - (1.0 - p.mu)).abs() <= 1e-15
        && (report.h_at_1 - p.alpha).abs() <= 1e-15;
    report.ok = report.min_gap >= 0.0
        && report.min_numerator >= 0.0
        && report.min_denominator > 0.0
        && endpoints;
    Ok(report)
}

pub fn check_t_range(p: &Parameters, grid_n: usize) -> Result<bool> {
    Ok(t_range_report(p, grid_n)?.ok)
}

/// Roots of `T^q(x) = x` found for one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodRoots {
    pub period: u32,
    pub roots: Vec<f64>,
    /// Roots that are not fixed points of `T`.
    pub spurious: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodCertificate {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// `A + B + C < 0`, `B < 0` and `C < 0`.
    pub signs_ok: bool,
    /// Inclusive range of scanned periods; empty when no scan was run.
    pub scanned_periods: Option<(u32, u32)>,
    pub periods: Vec<PeriodRoots>,
    pub spurious_roots: Vec<f64>,
}

/// Coefficients of the quadratic `Ax² + Bx + C` whose roots would be the
/// 2-periodic points of `T` that are not fixed points.
pub fn quadratic_coefficients(p: &Parameters) -> (f64, f64, f64) {
    let (al, be, mu) = (p.alpha, p.beta, p.mu);
    let a = (1.0 - be) * (be - 2.0) + (be - mu + 1.0) * (be - mu);
    let b = (be - 2.0) * (be - mu - al + 2.0) - be * (be - mu);
    let c = (be - mu + 1.0) * (al + mu - be - 2.0) + be * (be - 1.0);
    (a, b, c)
}

/// Sign certificate for the 2-periodic quadratic. With all three signs
/// negative the quadratic is negative on `x ≥ 0`, so `T` has no 2-periodic
/// point in `[0, 1]`.
pub fn two_periodic_certificate(p: &Parameters) -> Result<PeriodCertificate> {
    p.ensure_valid(ValidationMode::W0)?;
    let (a, b, c) = quadratic_coefficients(p);
    let signs_ok = a + b + c < 0.0 && b < 0.0 && c < 0.0;
    if !signs_ok {
        return Err(Error::Verification(format!(
            "sign conditions fail for {p:?}: A = {a}, B = {b}, C = {c}"
        )));
    }
    Ok(PeriodCertificate {
        a,
        b,
        c,
        signs_ok,
        scanned_periods: None,
        periods: Vec::new(),
        spurious_roots: Vec::new(),
    })
}

/// Cofactor `R(x)` in
/// `(T(T(x)) − x)/(T(x) − x) = (Ax² + Bx + C)·R(x)`.
fn reduction_cofactor(p: &Parameters, x: f64) -> f64 {
    let (al, be, mu) = (p.alpha, p.beta, p.mu);
    let x2 = x * x;
    let num = -(x + 1.0) * (be * x - be - mu * x + mu - 1.0);
    let d1 = al * x + 2.0 * be * x2 - 2.0 * be - mu * x2 + mu - x2 - 2.0 * x - 1.0;
    let d2 = al * be * x - al * mu * x + be * mu * x2 - be * mu - 2.0 * be * x2 + 2.0 * be
        - mu * mu * x2
        + mu * mu
        + 2.0 * mu * x2
        - 2.0 * mu
        + x
        + 1.0;
    num / (d1 * d2)
}

/// Largest relative discrepancy on a grid between the quotient
/// `(T(T(x)) − x)/(T(x) − x)` and `(Ax² + Bx + C)·R(x)`. Grid points closer
/// than `1e-6` to a fixed point of `T` are skipped.
pub fn quadratic_reduction_discrepancy(p: &Parameters, grid_n: usize) -> Result<f64> {
    p.ensure_valid(ValidationMode::W0)?;
    if grid_n < 2 {
        return Err(Error::Precondition("grid_n must be at least 2".into()));
    }
    let (a, b, c) = quadratic_coefficients(p);
    let mut worst: f64 = 0.0;
    for i in 0..grid_n {
        let x = i as f64 / (grid_n - 1) as f64;
        let tx = t_unchecked(p, x);
        if (tx - x).abs() < 1e-6 {
            continue;
        }
        let quotient = (t_unchecked(p, tx) - x) / (tx - x);
        let predicted = ((a * x + b) * x + c) * reduction_cofactor(p, x);
        let rel = (quotient - predicted).abs() / predicted.abs().max(1e-300);
        worst = worst.max(rel);
    }
    Ok(worst)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `T^q(x) − x` located by sign changes on a uniform grid of
/// `grid_n` points and refined by bisection.
pub fn period_roots(p: &Parameters, q: u32, grid_n: usize) -> Vec<f64> {
    let g = |x: f64| iterate_t(p, x, q) - x;
    let xs: Vec<f64> = (0..grid_n).map(|i| i as f64 / (grid_n - 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut roots = Vec::new();
    for i in 0..grid_n {
        if vals[i] == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if i + 1 < grid_n && vals[i + 1] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0) {
            roots.push(bisect(g, xs[i], xs[i + 1]));
        }
    }
    roots
}

/// Scans periods `2..=p_max` for roots of `T^q(x) = x` that are not fixed
/// points of `T`. Any such root contradicts the absence of periodic points
/// and is returned as a verification error.
pub fn scan_periodic_points(p: &Parameters, p_max: u32, grid_n: usize) -> Result<PeriodCertificate> {
    if p_max < 2 {
        return Err(Error::Precondition("p_max must be at least 2".into()));
    }
    if grid_n < 2 {
        return Err(Error::Precondition("grid_n must be at least 2".into()));
    }
    let mut cert = two_periodic_certificate(p)?;
    let periods: Vec<PeriodRoots> = (2..=p_max)
        .map(|q| {
            let roots = period_roots(p, q, grid_n);
            let spurious = roots
                .iter()
                .copied()
                .filter(|&r| (t_unchecked(p, r) - r).abs() >= FIXED_ROOT_TOL)
                .collect();
            PeriodRoots { period: q, roots, spurious }
        })
        .collect();
    cert.spurious_roots = periods.iter().flat_map(|pr| pr.spurious.iter().copied()).collect();
    cert.scanned_periods = Some((2, p_max));
    cert.periods = periods;
    if !cert.spurious_roots.is_empty() {
        return Err(Error::Verification(format!(
            "periodic points of T found for {p:?}: {:?}",
            cert.spurious_roots
        )));
    }
    Ok(cert)
}

/// `‖W0(W0(s)) − s‖∞`.
pub fn two_step_residual(p: &Parameters, s: State) -> f64 {
    let (x1, y1) = step_w0(p, s.x, s.y);
    let (x2, y2) = step_w0(p, x1, y1);
    (x2 - s.x).abs().max((y2 - s.y).abs())
}

/// If `s` returns to itself after two steps (within `1e-10`), checks the
/// reduced condition `αx/(1+x) = (μ−2)y`, whose only solution in the
/// quadrant is the origin. Points that do not return pass vacuously.
pub fn check_w0_two_periodic_reduction(p: &Parameters, s: State) -> Result<bool> {
    p.ensure_valid(ValidationMode::W0)?;
    s.ensure_in_quadrant()?;
    if two_step_residual(p, s) >= 1e-10 {
        return Ok(true);
    }
    let lhs = emergence(p.alpha, s.x);
    let rhs = (p.mu - 2.0) * s.y;
    if (lhs - rhs).abs() <= 1e-10 && s.sup_norm() <= 1e-10 {
        Ok(true)
    } else {
        Err(Error::Verification(format!(
            "2-periodic point of W0 away from the origin: ({}, {})",
            s.x, s.y
        )))
    }
}

/// Brute-force scan of `[0, extent]²` with spacing `step` for points that
/// return to themselves after two steps, excluding the origin.
pub fn scan_two_periodic_quadrant(p: &Parameters, extent: f64, step: f64) -> Result<Vec<State>> {
    p.ensure_valid(ValidationMode::W0)?;
    if !(step > 0.0 && extent > 0.0) {
        return Err(Error::Precondition("extent and step must be positive".into()));
    }
    let n = (extent / step).round() as usize;
    let mut found = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let s = State::new(i as f64 * step, j as f64 * step);
            if !s.is_origin() && two_step_residual(p, s) < 1e-10 {
                found.push(s);
            }
        }
    }
    Ok(found)
}
