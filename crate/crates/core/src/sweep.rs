//! Parameter grids: spectral type against simulated verdict, cell by cell.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::fmt_real;
use crate::model::{Parameters, State, ValidationMode};
use crate::spectral::{classify_origin, FixedPointType, DEFAULT_HYPERBOLICITY_TOL};
use crate::trajectory::{iterate_orbit, OrbitConfig, Verdict};

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn fixed(v: f64) -> Self {
        Self { lo: v, hi: v, steps: 1 }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.steps == 0 || !(self.lo <= self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::Precondition(format!(
                "{name} range ({}, {}, {}) is empty",
                self.lo, self.hi, self.steps
            )));
        }
        if self.steps == 1 && self.lo != self.hi {
            return Err(Error::Precondition(format!("{name} range with one step needs lo = hi")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let span = self.hi - self.lo;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + span * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub alpha: GridRange,
    pub beta: GridRange,
    pub mu: GridRange,
    pub d0: f64,
    pub d1: f64,
    pub start: State,
    pub orbit: OrbitConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub index: usize,
    pub parameters: Parameters,
    /// Parameters satisfy the reduced-operator constraints.
    pub in_condition: bool,
    pub classification: Option<FixedPointType>,
    pub verdict: Option<Verdict>,
    pub n_steps: Option<u64>,
    pub y_limit: Option<f64>,
    /// Spectral type and verdict agree; absent for out-of-condition cells.
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub cells: usize,
    pub in_condition: usize,
    pub out_of_condition: usize,
    pub agree: usize,
    pub disagree: usize,
    pub extinction: usize,
    pub survival: usize,
    pub exhausted: usize,
}

impl SweepSummary {
    pub fn all_agree(&self) -> bool {
        self.disagree == 0
    }
}

pub fn expected_verdict(class: FixedPointType) -> Option<Verdict> {
    match class {
        FixedPointType::Attracting => Some(Verdict::Extinction),
        FixedPointType::Saddle => Some(Verdict::Survival),
        _ => None,
    }
}

fn run_cell(index: usize, p: Parameters, spec: &SweepSpec) -> Result<SweepCell> {
    let general = p.validate(ValidationMode::General).is_valid();
    let in_condition = p.validate(ValidationMode::W0).is_valid();
    let classification = if general {
        Some(classify_origin(&p, DEFAULT_HYPERBOLICITY_TOL)?.classification)
    } else {
        None
    };
    let mut cell = SweepCell {
        index,
        parameters: p,
        in_condition,
        classification,
        verdict: None,
        n_steps: None,
        y_limit: None,
        agree: None,
    };
    if in_condition {
        let orbit = iterate_orbit(&p, spec.start, &spec.orbit)?;
        cell.verdict = Some(orbit.verdict);
        cell.n_steps = Some(orbit.n_steps);
        cell.y_limit = Some(orbit.y_limit_estimate);
        cell.agree = Some(classification.and_then(expected_verdict) == Some(orbit.verdict));
    }
    Ok(cell)
}

/// Runs every cell (in parallel) and returns them in index order:
/// `alpha` varies slowest, `mu` fastest.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    spec.alpha.validate("alpha")?;
    spec.beta.validate("beta")?;
    spec.mu.validate("mu")?;
    spec.orbit.validate()?;
    let mut params = Vec::new();
    for &a in &spec.alpha.values() {
        for &b in &spec.beta.values() {
            for &m in &spec.mu.values() {
                params.push(Parameters::new(a, b, m, spec.d0, spec.d1));
            }
        }
    }
    params
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| run_cell(i, p, spec))
        .collect()
}

pub fn summarize(cells: &[SweepCell]) -> SweepSummary {
    let mut s = SweepSummary { cells: cells.len(), ..SweepSummary::default() };
    for c in cells {
        if c.in_condition {
            s.in_condition += 1;
        } else {
            s.out_of_condition += 1;
        }
        match c.agree {
            Some(true) => s.agree += 1,
            Some(false) => s.disagree += 1,
            None => {}
        }
        match c.verdict {
            Some(Verdict::Extinction) => s.extinction += 1,
            Some(Verdict::Survival) => s.survival += 1,
            Some(Verdict::Exhausted) => s.exhausted += 1,
            None => {}
        }
    }
    s
}

pub fn write_sweep_csv<W: Write>(mut w: W, cells: &[SweepCell]) -> Result<()> {
    writeln!(w, "cell,alpha,beta,mu,d0,d1,in_condition,classification,verdict,n_steps,y_limit,agree")?;
    for c in cells {
        let p = &c.parameters;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            c.index,
            fmt_real(p.alpha),
            fmt_real(p.beta),
            fmt_real(p.mu),
            fmt_real(p.d0),
            fmt_real(p.d1),
            if c.in_condition { "yes" } else { "out-of-condition" },
            c.classification.map_or("-", |k| k.as_str()),
            c.verdict.map_or("-", |v| v.as_str()),
            c.n_steps.map_or_else(|| "-".to_string(), |n| n.to_string()),
            c.y_limit.map_or_else(|| "-".to_string(), fmt_real),
            c.agree.map_or("-", |a| if a { "yes" } else { "no" }),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_orbit() -> OrbitConfig {
        OrbitConfig { conv_tol: 1e-4, div_threshold: 100.0, ..OrbitConfig::default() }
    }

    #[test]
    fn range_values() {
        let r = GridRange { lo: 0.1, hi: 1.0, steps: 10 };
        let v = r.values();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[9], 1.0);
        assert_eq!(GridRange::fixed(0.6).values(), vec![0.6]);
        assert!(GridRange { lo: 0.5, hi: 0.1, steps: 3 }.validate("beta").is_err());
        assert!(GridRange { lo: 0.1, hi: 0.5, steps: 0 }.validate("beta").is_err());
    }

    #[test]
    fn small_sweep_agrees_and_flags_diagonal() {
        let spec = SweepSpec {
            alpha: GridRange::fixed(0.6),
            beta: GridRange { lo: 0.2, hi: 1.0, steps: 5 },
            mu: GridRange { lo: 0.2, hi: 1.0, steps: 5 },
            d0: 0.0,
            d1: 0.0,
            start: State::new(1.0, 1.0),
            orbit: quick_orbit(),
        };
        let cells = run_sweep(&spec).unwrap();
        assert_eq!(cells.len(), 25);
        assert!(cells.iter().enumerate().all(|(i, c)| c.index == i));
        let s = summarize(&cells);
        assert_eq!(s.out_of_condition, 5);
        assert_eq!(s.in_condition, 20);
        assert!(s.all_agree(), "{s:?}");
        for c in &cells {
            let p = c.parameters;
            if p.beta == p.mu {
                assert!(!c.in_condition);
                assert_eq!(c.classification, Some(FixedPointType::Nonhyperbolic));
                assert_eq!(c.agree, None);
            } else if p.beta < p.mu {
                assert_eq!(c.verdict, Some(Verdict::Extinction));
            } else {
                assert_eq!(c.verdict, Some(Verdict::Survival));
            }
        }
        let mut out = Vec::new();
        write_sweep_csv(&mut out, &cells).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 26);
        assert!(text.contains("out-of-condition"));
    }

    #[test]
    fn out_of_range_cells_are_flagged() {
        let spec = SweepSpec {
            alpha: GridRange { lo: 0.5, hi: 1.5, steps: 2 },
            beta: GridRange::fixed(0.3),
            mu: GridRange::fixed(0.6),
            d0: 0.0,
            d1: 0.0,
            start: State::new(1.0, 1.0),
            orbit: quick_orbit(),
        };
        let cells = run_sweep(&spec).unwrap();
        assert!(cells[0].in_condition);
        assert!(!cells[1].in_condition);
        assert_eq!(cells[1].classification, None);
    }
}
