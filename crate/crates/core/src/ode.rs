//! Continuous-time reference model: threshold `r0`, the closed-form
//! positive equilibrium and a fixed-step RK4 integrator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{emergence, rhs_unchecked, Parameters, State};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeConfig {
    pub step: f64,
    pub t_end: f64,
    /// Distance to the predicted limit accepted as converged.
    pub conv_tol: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { step: 0.01, t_end: 500.0, conv_tol: 1e-5 }
    }
}

impl OdeConfig {
    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.t_end > 0.0) {
            return Err(Error::Precondition("step and t_end must be positive".into()));
        }
        if self.step > self.t_end {
            return Err(Error::Precondition("step must not exceed t_end".into()));
        }
        if self.step > 1.0 {
            return Err(Error::Precondition(format!("step {} is too large (max 1)", self.step)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub r0: f64,
    /// The origin is globally stable exactly when `r0 ≤ 1`.
    pub trivial_stable: bool,
    pub positive_equilibrium: Option<State>,
}

/// Basic offspring number `αβ / ((α + d0)μ)`.
pub fn compute_r0(p: &Parameters) -> Result<f64> {
    let denom = (p.alpha + p.d0) * p.mu;
    if p.mu == 0.0 || p.alpha + p.d0 == 0.0 || !denom.is_finite() {
        return Err(Error::Precondition("r0 needs mu > 0 and alpha + d0 > 0".into()));
    }
    Ok(p.alpha * p.beta / denom)
}

/// Closed-form positive equilibrium, present only when `r0 > 1`.
/// Requires `d1 > 0`: without density-dependent death there is none and
/// larvae grow without bound.
pub fn positive_equilibrium(p: &Parameters) -> Result<Option<State>> {
    if !(p.d1 > 0.0) {
        return Err(Error::Precondition("positive equilibrium formula needs d1 > 0".into()));
    }
    let r0 = compute_r0(p)?;
    if r0 <= 1.0 {
        return Ok(None);
    }
    let s = p.d0 + p.d1;
    let disc = s * s - 4.0 * p.d1 * (p.alpha + p.d0) * (1.0 - r0);
    let x0 = (disc.sqrt() - p.d0 - p.d1) / (2.0 * p.d1);
    let y0 = emergence(p.alpha, x0) / p.mu;
    Ok(Some(State::new(x0, y0)))
}

pub fn equilibrium_report(p: &Parameters) -> Result<EquilibriumReport> {
    let r0 = compute_r0(p)?;
    let positive_equilibrium = if p.d1 > 0.0 { positive_equilibrium(p)? } else { None };
    Ok(EquilibriumReport { r0, trivial_stable: r0 <= 1.0, positive_equilibrium })
}

fn rk4_step(p: &Parameters, x: f64, y: f64, h: f64) -> (f64, f64) {
    let f = |x: f64, y: f64| rhs_unchecked(p, x, y);
    let (k1x, k1y) = f(x, y);
    let (k2x, k2y) = f(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
    let (k3x, k3y) = f(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
    let (k4x, k4y) = f(x + h * k3x, y + h * k3y);
    (
        x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )
}

/// Classic fixed-step RK4 from `t = 0` to `t_end`. The last step is
/// shortened when `t_end` is not a multiple of the step.
pub fn integrate_ode(p: &Parameters, s0: State, cfg: &OdeConfig) -> Result<Vec<(f64, State)>> {
    s0.ensure_in_quadrant()?;
    cfg.validate()?;
    let n_full = (cfg.t_end / cfg.step * (1.0 + 1e-12)).floor() as usize;
    let mut out = Vec::with_capacity(n_full + 2);
    out.push((0.0, s0));
    let (mut x, mut y) = (s0.x, s0.y);
    let mut k = 0usize;
    loop {
        let t = k as f64 * cfg.step;
        let h = if k < n_full { cfg.step } else { cfg.t_end - t };
        if h <= 1e-12 * cfg.step {
            break;
        }
        let (nx, ny) = rk4_step(p, x, y, h);
        let t_next = if k < n_full { (k + 1) as f64 * cfg.step } else { cfg.t_end };
        if !nx.is_finite() || !ny.is_finite() || nx < -0.5 {
            return Err(Error::Instability { t: t_next, x: nx, y: ny });
        }
        x = nx;
        y = ny;
        k += 1;
        out.push((t_next, State::new(x, y)));
        if k > n_full {
            break;
        }
    }
    Ok(out)
}

/// Where the trajectory should end up: the origin when `r0 ≤ 1`, the
/// positive equilibrium when `r0 > 1` and `d1 > 0`, nothing otherwise.
pub fn predicted_limit(p: &Parameters) -> Result<Option<State>> {
    let report = equilibrium_report(p)?;
    Ok(if report.trivial_stable { Some(State::ORIGIN) } else { report.positive_equilibrium })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r0_examples() {
        let r0 = compute_r0(&Parameters::w0(0.6, 0.5, 0.48)).unwrap();
        assert!((r0 - 0.5 / 0.48).abs() < 1e-15);
        assert!((r0 - 1.0417).abs() < 1e-4);
        assert!((compute_r0(&Parameters::w0(0.5, 0.3, 0.6)).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(compute_r0(&Parameters::w0(0.7, 0.4, 0.4)).unwrap(), 1.0);
        assert!(compute_r0(&Parameters::w0(0.7, 0.4, 0.0)).is_err());
        assert!(compute_r0(&Parameters::w0(0.0, 0.4, 0.3)).is_err());
    }

    #[test]
    fn equilibrium_example() {
        let p = Parameters::new(0.6, 0.8, 0.5, 0.1, 0.05);
        let r0 = compute_r0(&p).unwrap();
        assert!((r0 - 1.3714).abs() < 1e-4);
        let e = positive_equilibrium(&p).unwrap().unwrap();
        assert!((e.x - 1.2295).abs() < 1e-4, "{}", e.x);
        assert!((e.y - 0.6617).abs() < 1e-4, "{}", e.y);
        let (dx, dy) = rhs_unchecked(&p, e.x, e.y);
        assert!(dx.abs().max(dy.abs()) < 1e-9);
    }

    #[test]
    fn no_equilibrium_below_threshold() {
        let p = Parameters::new(0.5, 0.3, 0.6, 0.1, 0.05);
        assert_eq!(positive_equilibrium(&p).unwrap(), None);
        let rep = equilibrium_report(&p).unwrap();
        assert!(rep.trivial_stable);
        assert!(positive_equilibrium(&Parameters::w0(0.6, 0.8, 0.5)).is_err());
        assert_eq!(equilibrium_report(&Parameters::w0(0.6, 0.8, 0.5)).unwrap().positive_equilibrium, None);
    }

    #[test]
    fn origin_stays_put() {
        let p = Parameters::new(0.6, 0.8, 0.5, 0.1, 0.05);
        let traj = integrate_ode(&p, State::ORIGIN, &OdeConfig { t_end: 10.0, ..OdeConfig::default() }).unwrap();
        assert!(traj.iter().all(|(_, s)| s.is_origin()));
    }

    #[test]
    fn extinction_trajectory() {
        let p = Parameters::w0(0.5, 0.3, 0.6);
        let cfg = OdeConfig { t_end: 200.0, step: 0.01, ..OdeConfig::default() };
        let traj = integrate_ode(&p, State::new(1.0, 1.0), &cfg).unwrap();
        let (t, s) = traj.last().unwrap();
        assert!((t - 200.0).abs() < 1e-9);
        assert!(s.sup_norm() < 1e-6, "{s:?}");
    }

    #[test]
    fn time_grid() {
        let p = Parameters::w0(0.5, 0.3, 0.6);
        let traj = integrate_ode(&p, State::new(1.0, 1.0), &OdeConfig { step: 0.3, t_end: 1.0, conv_tol: 1e-6 }).unwrap();
        let ts: Vec<f64> = traj.iter().map(|(t, _)| *t).collect();
        assert_eq!(ts.len(), 5);
        assert!((ts[3] - 0.9).abs() < 1e-12);
        assert_eq!(ts[4], 1.0);
        let traj = integrate_ode(&p, State::new(1.0, 1.0), &OdeConfig { step: 0.01, t_end: 1.0, conv_tol: 1e-6 }).unwrap();
        assert_eq!(traj.len(), 101);
    }

    #[test]
    fn rejects_bad_configs() {
        let p = Parameters::w0(0.5, 0.3, 0.6);
        let s = State::new(1.0, 1.0);
        assert!(integrate_ode(&p, s, &OdeConfig { step: 2.0, ..OdeConfig::default() }).is_err());
        assert!(integrate_ode(&p, s, &OdeConfig { step: 0.5, t_end: 0.1, conv_tol: 1e-6 }).is_err());
        assert!(integrate_ode(&p, State::new(-1.0, 0.0), &OdeConfig::default()).is_err());
    }

    #[test]
    fn instability_is_reported() {
        // Strong density dependence and a coarse step overshoot below zero.
        let p = Parameters::new(0.5, 0.3, 0.6, 0.0, 50.0);
        let err = integrate_ode(&p, State::new(10.0, 0.0), &OdeConfig { step: 1.0, t_end: 10.0, conv_tol: 1e-6 });
        assert!(matches!(err, Err(Error::Instability { .. })));
    }
}
