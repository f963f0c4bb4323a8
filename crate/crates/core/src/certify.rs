//! The full invariant suite for one parameter set, as a list of named
//! pass/fail outcomes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Parameters, State, ValidationMode};
use crate::simplex::{
    quadratic_reduction_discrepancy, scan_periodic_points, scan_two_periodic_quadrant,
    t_range_report, two_periodic_certificate, DEFAULT_GRID, DEFAULT_P_MAX,
};
use crate::spectral::{
    classify_origin, find_fixed_points_w0, stability_inequalities, FixedPointScan, FixedPointType,
    DEFAULT_HYPERBOLICITY_TOL,
};
use crate::trajectory::{
    check_contraction_combos, check_growth_lower_bound, check_lemma2_patterns, check_sum_identity,
    check_y_bound, iterate_orbit, OrbitConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub p_max: u32,
    pub grid_n: usize,
    pub orbit_steps: u64,
    pub start: State,
    /// Run the (slower) grid scans for extra fixed and 2-periodic points.
    pub quadrant_scans: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            p_max: DEFAULT_P_MAX,
            grid_n: DEFAULT_GRID,
            orbit_steps: 100_000,
            start: State::new(1.0, 1.0),
            quadrant_scans: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub parameters: Parameters,
    pub start: State,
    pub outcomes: Vec<Outcome>,
}

impl CertifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

struct Collector(Vec<Outcome>);

impl Collector {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Outcome { name: name.to_string(), passed, detail: detail.into() });
    }

    /// Records a verification error as a failed outcome; other errors abort.
    fn push_result<T>(&mut self, name: &str, r: Result<T>, ok: impl FnOnce(T) -> (bool, String)) -> Result<()> {
        match r {
            Ok(v) => {
                let (passed, detail) = ok(v);
                self.push(name, passed, detail);
            }
            Err(Error::Verification(msg)) => self.push(name, false, msg),
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

/// Runs every certificate for `p`. Parameters must be valid for the reduced
/// operator.
pub fn certify(p: &Parameters, opts: &CertifyOptions) -> Result<CertifyReport> {
    p.ensure_valid(ValidationMode::W0)?;
    let mut c = Collector(Vec::new());
    let beta_gt_mu = p.beta > p.mu;

    if opts.quadrant_scans {
        c.push_result("unique fixed point", find_fixed_points_w0(p, &FixedPointScan::default()), |fps| {
            (fps == vec![State::ORIGIN], format!("{} fixed point(s)", fps.len()))
        })?;
    }

    let report = classify_origin(p, DEFAULT_HYPERBOLICITY_TOL)?;
    let expected = if beta_gt_mu { FixedPointType::Saddle } else { FixedPointType::Attracting };
    c.push(
        "origin type",
        report.classification == expected,
        format!("{} (lambda1 = {}, lambda2 = {})", report.classification, report.lambda1, report.lambda2),
    );
    let (i1, i2) = stability_inequalities(p);
    c.push(
        "stability inequalities",
        (i1 && i2) == (report.classification == FixedPointType::Attracting),
        format!("({i1}, {i2})"),
    );
    let j = report.jacobian;
    let char_res = [report.lambda1, report.lambda2]
        .iter()
        .map(|&l| ((j[0][0] - l) * (j[1][1] - l) - j[0][1] * j[1][0]).abs())
        .fold(0.0, f64::max);
    c.push("characteristic identity", char_res <= 1e-10, format!("max |det(J - lambda I)| = {char_res:e}"));

    let orbit = iterate_orbit(p, opts.start, &OrbitConfig::full_resolution(opts.orbit_steps))?;
    let yb = check_y_bound(p, &orbit);
    c.push("adult bound", yb == 0, format!("{yb} violation(s) over {} steps", orbit.n_steps));
    let sum_err = check_sum_identity(p, &orbit)?;
    c.push("sum identity", sum_err <= 1e-9, format!("max error {sum_err:e}"));
    let l2 = check_lemma2_patterns(&orbit, beta_gt_mu)?;
    c.push("monotonicity patterns", l2 == 0, format!("{l2} violation(s)"));
    if beta_gt_mu {
        let n0 = orbit.monitors.n0_estimate;
        let y_n0 = orbit.states.get(n0 as usize).map(|pt| pt.state.y).unwrap_or(0.0);
        if n0 < orbit.n_steps && y_n0 > 0.0 {
            let held = check_growth_lower_bound(p, &orbit, n0)?;
            c.push("linear growth bound", held, format!("from n0 = {n0}"));
        } else {
            c.push("linear growth bound", opts.start.is_origin(), format!("no monotone tail found (n0 = {n0})"));
        }
    } else {
        let held = check_contraction_combos(p, &orbit)?;
        c.push("contraction combinations", held, format!("k = {}", p.mu / p.beta));
    }

    c.push_result("T maps [0,1] into itself", t_range_report(p, opts.grid_n), |r| {
        (r.ok, format!("min h = {:e}, min a = {:e}, min b = {:e}", r.min_gap, r.min_numerator, r.min_denominator))
    })?;
    c.push_result("quadratic reduction", quadratic_reduction_discrepancy(p, 1000), |d| {
        (d < 1e-6, format!("max relative discrepancy {d:e}"))
    })?;
    c.push_result("2-periodic sign certificate", two_periodic_certificate(p), |cert| {
        (cert.signs_ok, format!("A = {}, B = {}, C = {}", cert.a, cert.b, cert.c))
    })?;
    c.push_result("periodic point scan", scan_periodic_points(p, opts.p_max, opts.grid_n), |cert| {
        (cert.spurious_roots.is_empty(), format!("periods 2..={}, no spurious roots", opts.p_max))
    })?;
    if opts.quadrant_scans {
        c.push_result("2-periodic quadrant scan", scan_two_periodic_quadrant(p, 5.0, 0.01), |found| {
            (found.is_empty(), format!("{} point(s) besides the origin", found.len()))
        })?;
    }

    Ok(CertifyReport { parameters: *p, start: opts.start, outcomes: c.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::FIGURES;

    #[test]
    fn figures_pass() {
        for fig in FIGURES {
            let opts = CertifyOptions { start: fig.start, ..CertifyOptions::default() };
            let r = certify(&fig.parameters, &opts).unwrap();
            assert!(r.all_passed(), "{}: {:?}", fig.name, r.failures().collect::<Vec<_>>());
            assert_eq!(r.outcomes.len(), 13);
        }
    }

    #[test]
    fn extinction_case_passes() {
        let p = Parameters::w0(0.5, 0.3, 0.6);
        let r = certify(&p, &CertifyOptions { quadrant_scans: false, ..CertifyOptions::default() }).unwrap();
        assert!(r.all_passed());
        assert!(r.outcomes.iter().any(|o| o.name == "contraction combinations"));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let p = Parameters::w0(1.2, 0.3, 0.6);
        assert!(matches!(certify(&p, &CertifyOptions::default()), Err(Error::InvalidParameters(_))));
    }
}
