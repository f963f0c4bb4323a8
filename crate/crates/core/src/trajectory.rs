//! Orbit iteration of the reduced operator with online monitors.
//!
//! Every step feeds a [`MonitorLog`] at full resolution, whatever the
//! recording stride, so very long orbits keep their certificates while only
//! a thinned set of states is stored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{step_w0, Parameters, State, ValidationMode};

/// Absolute tolerance for strict monotonicity comparisons. Differences
/// within it count as ties.
pub const MONOTONE_TOL: f64 = 1e-14;

/// Consecutive steps the survival condition must hold before it is accepted.
pub const SURVIVAL_WINDOW: u64 = 100;

/// Stored samples beyond which the recording stride doubles.
pub const MAX_RECORDED: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub max_iters: u64,
    /// Radius around the target used by both verdicts.
    pub conv_tol: f64,
    /// Larvae level regarded as unbounded growth.
    pub div_threshold: f64,
    pub record_every: u64,
}

impl Default for OrbitConfig {
    /// Survival within `1e-6` of `α/μ` needs on the order of
    /// `1/((β−μ)·1e-6)` steps, hence the large iteration cap.
    fn default() -> Self {
        Self {
            max_iters: 2_000_000_000,
            conv_tol: 1e-6,
            div_threshold: 1e3,
            record_every: 1,
        }
    }
}

impl OrbitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::Precondition("max_iters must be at least 1".into()));
        }
        if !(self.conv_tol > 0.0) {
            return Err(Error::Precondition("conv_tol must be positive".into()));
        }
        if !(self.div_threshold > 1.0) {
            return Err(Error::Precondition("div_threshold must exceed 1".into()));
        }
        if self.record_every < 1 {
            return Err(Error::Precondition("record_every must be at least 1".into()));
        }
        Ok(())
    }

    /// A fixed-length run (no early stop can trigger before `steps`
    /// unless the orbit reaches its target), recording every state.
    pub fn full_resolution(steps: u64) -> Self {
        Self { max_iters: steps, record_every: 1, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Extinction,
    Survival,
    Exhausted,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Extinction => "extinction",
            Self::Survival => "survival",
            Self::Exhausted => "exhausted",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sign and monotonicity counts of the step increments
/// `Δ(m) = x(m+1) − x(m)` and `δ(m) = y(m) − y(m+1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DeltaSummary {
    pub steps: u64,
    pub delta_positive: u64,
    pub small_delta_positive: u64,
    /// Steps with `Δ(m+1) < Δ(m)`.
    pub delta_decreasing: u64,
    /// Steps with `δ(m+1) > δ(m)`.
    pub small_delta_increasing: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MonitorLog {
    pub y_bound_violations: u64,
    pub lemma2_violations: u64,
    /// Largest absolute defect of `x(n)+y(n) = (β−μ)y(n−1) + x(n−1) + y(n−1)`.
    pub sum_identity_max_err: f64,
    /// First index after which both coordinates are nondecreasing.
    pub n0_estimate: u64,
    pub delta_sequence: DeltaSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub n: u64,
    pub state: State,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub parameters: Parameters,
    /// Recorded states; always contains the initial and the final state.
    pub states: Vec<OrbitPoint>,
    /// Final recording stride (grows past `record_every` on very long runs).
    pub stride: u64,
    pub verdict: Verdict,
    pub n_steps: u64,
    pub y_limit_estimate: f64,
    pub monitors: MonitorLog,
}

impl Orbit {
    pub fn initial(&self) -> State {
        self.states[0].state
    }

    pub fn last(&self) -> State {
        self.states[self.states.len() - 1].state
    }

    /// Every step from 0 to `n_steps` is recorded.
    pub fn is_full_resolution(&self) -> bool {
        self.states.len() as u64 == self.n_steps + 1
    }

    fn require_full_resolution(&self, what: &str) -> Result<()> {
        if self.is_full_resolution() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{what} needs a full-resolution orbit (record_every = 1)")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Up,
    Down,
    Flat,
}

fn trend(d: f64) -> Trend {
    if d > MONOTONE_TOL {
        Trend::Up
    } else if d < -MONOTONE_TOL {
        Trend::Down
    } else {
        Trend::Flat
    }
}

/// Streaming check of the five monotonicity statements.
///
/// Statements (1) and (2) are pointwise and counted per offending step.
/// Statements (3), (4) and (5) assert that a pattern cannot persist for
/// every step; each contributes one violation when it held throughout a
/// scan of at least two steps.
#[derive(Debug, Clone)]
pub(crate) struct PatternScanner {
    check_both_decreasing: bool,
    steps: u64,
    both_up_seen: bool,
    violations: u64,
    all_down_up: bool,
    all_up_down: bool,
    all_alternating: bool,
    prev: Option<(Trend, Trend)>,
}

impl PatternScanner {
    pub(crate) fn new(beta_gt_mu: bool) -> Self {
        Self {
            check_both_decreasing: beta_gt_mu,
            steps: 0,
            both_up_seen: false,
            violations: 0,
            all_down_up: true,
            all_up_down: true,
            all_alternating: true,
            prev: None,
        }
    }

    pub(crate) fn push(&mut self, dx: f64, dy: f64) {
        let t = (trend(dx), trend(dy));
        self.steps += 1;
        if self.check_both_decreasing && t == (Trend::Down, Trend::Down) {
            self.violations += 1;
        }
        if self.both_up_seen && (t.0 == Trend::Down || t.1 == Trend::Down) {
            self.violations += 1;
        }
        if t == (Trend::Up, Trend::Up) {
            self.both_up_seen = true;
        }
        self.all_down_up &= t == (Trend::Down, Trend::Up);
        self.all_up_down &= t == (Trend::Up, Trend::Down);
        let alternates = match (self.prev, t) {
            (_, (Trend::Up, Trend::Down)) | (_, (Trend::Down, Trend::Up)) => {
                self.prev != Some(t)
            }
            _ => false,
        };
        self.all_alternating &= alternates;
        self.prev = Some(t);
    }

    pub(crate) fn violations(&self) -> u64 {
        let persistent = self.steps >= 2;
        self.violations
            + u64::from(persistent && self.all_down_up)
            + u64::from(persistent && self.all_up_down)
            + u64::from(self.steps >= 3 && self.all_alternating)
    }
}

/// Online form of the closed-form adult bound
/// `y(n) ≤ α/μ + (1−μ)^n (y(0) − α/μ)`.
#[derive(Debug, Clone)]
struct AdultBound {
    limit: f64,
    offset: f64,
    decay: f64,
    factor: f64,
    tol: f64,
}

impl AdultBound {
    fn new(p: &Parameters, y0: f64) -> Self {
        let limit = p.adult_limit();
        Self {
            limit,
            offset: y0 - limit,
            decay: 1.0 - p.mu,
            factor: 1.0,
            tol: 1e-12 * limit.max(y0).max(1.0),
        }
    }

    /// Advances to the next index and reports whether `y` violates it there.
    fn advance_and_check(&mut self, y: f64) -> bool {
        // Flush before the factor turns subnormal; subnormal arithmetic is slow.
        self.factor = if self.factor < 1e-280 { 0.0 } else { self.factor * self.decay };
        let bound = self.limit + self.factor * self.offset;
        y > bound + self.tol || y < -1e-12
    }
}

struct Recorder {
    states: Vec<OrbitPoint>,
    stride: u64,
    next: u64,
}

impl Recorder {
    fn new(stride: u64) -> Self {
        Self { states: Vec::new(), stride, next: 0 }
    }

    #[inline]
    fn push(&mut self, n: u64, state: State) {
        if n != self.next {
            return;
        }
        self.states.push(OrbitPoint { n, state });
        if self.states.len() >= MAX_RECORDED {
            self.stride *= 2;
            let stride = self.stride;
            self.states.retain(|pt| pt.n % stride == 0);
            self.next = n - n % stride;
        }
        self.next += self.stride;
    }

    fn finish(mut self, n: u64, state: State) -> (Vec<OrbitPoint>, u64) {
        if self.states.last().map(|pt| pt.n) != Some(n) {
            self.states.push(OrbitPoint { n, state });
        }
        (self.states, self.stride)
    }
}

/// Iterates `W0` from `s0` until extinction, survival or `max_iters`.
///
/// * extinction: the state is within `conv_tol` of the origin and is either
///   the origin itself or the total `x + y` strictly decreases on the next
///   step;
/// * survival: `x > div_threshold`, `x` increasing and `|y − α/μ| < conv_tol`
///   for [`SURVIVAL_WINDOW`] consecutive steps;
/// * exhausted: neither within `max_iters` steps.
pub fn iterate_orbit(p: &Parameters, s0: State, cfg: &OrbitConfig) -> Result<Orbit> {
    p.ensure_valid(ValidationMode::W0)?;
    s0.ensure_in_quadrant()?;
    cfg.validate()?;

    let limit = p.adult_limit();
    let gap = p.beta - p.mu;
    let mut recorder = Recorder::new(cfg.record_every);
    recorder.push(0, s0);

    let mut bound = AdultBound::new(p, s0.y);
    let mut patterns = PatternScanner::new(p.beta > p.mu);
    let mut monitors = MonitorLog::default();
    let mut deltas = DeltaSummary::default();
    let mut prev_increments: Option<(f64, f64)> = None;
    let mut last_decrease: Option<u64> = None;
    let mut survival_streak = 0u64;

    let (mut x, mut y) = (s0.x, s0.y);
    let mut n = 0u64;
    let verdict = loop {
        let (nx, ny) = step_w0(p, x, y);
        if !nx.is_finite() || !ny.is_finite() {
            return Err(Error::Domain(format!("orbit left the finite quadrant at step {}", n + 1)));
        }

        if s_near_origin(x, y, cfg.conv_tol) && ((x == 0.0 && y == 0.0) || nx + ny < x + y) {
            break Verdict::Extinction;
        }
        if n >= cfg.max_iters {
            break Verdict::Exhausted;
        }

        // Monitors for the step n -> n + 1.
        let (dx, dy) = (nx - x, ny - y);
        let sum_err = ((nx + ny) - (gap * y + x + y)).abs();
        monitors.sum_identity_max_err = monitors.sum_identity_max_err.max(sum_err);
        if bound.advance_and_check(ny) {
            monitors.y_bound_violations += 1;
        }
        patterns.push(dx, dy);
        if dx < -MONOTONE_TOL || dy < -MONOTONE_TOL {
            last_decrease = Some(n);
        }
        let small_delta = -dy;
        deltas.steps += 1;
        deltas.delta_positive += u64::from(dx > 0.0);
        deltas.small_delta_positive += u64::from(small_delta > 0.0);
        if let Some((pd, ps)) = prev_increments {
            deltas.delta_decreasing += u64::from(dx < pd);
            deltas.small_delta_increasing += u64::from(small_delta > ps);
        }
        prev_increments = Some((dx, small_delta));

        x = nx;
        y = ny;
        n += 1;
        recorder.push(n, State::new(x, y));

        if x > cfg.div_threshold && dx > 0.0 && (y - limit).abs() < cfg.conv_tol {
            survival_streak += 1;
            if survival_streak >= SURVIVAL_WINDOW {
                break Verdict::Survival;
            }
        } else {
            survival_streak = 0;
        }
    };

    monitors.lemma2_violations = patterns.violations();
    monitors.n0_estimate = last_decrease.map_or(0, |m| m + 1);
    monitors.delta_sequence = deltas;
    let (states, stride) = recorder.finish(n, State::new(x, y));
    Ok(Orbit {
        parameters: *p,
        states,
        stride,
        verdict,
        n_steps: n,
        y_limit_estimate: y,
        monitors,
    })
}

#[inline]
fn s_near_origin(x: f64, y: f64, tol: f64) -> bool {
    x.abs() < tol && y.abs() < tol
}

/// Number of recorded indices violating the closed-form adult bound, or
/// with negative adults.
pub fn check_y_bound(p: &Parameters, orbit: &Orbit) -> u64 {
    let limit = p.adult_limit();
    let y0 = orbit.initial().y;
    let offset = y0 - limit;
    let tol = 1e-12 * limit.max(y0).max(1.0);
    orbit
        .states
        .iter()
        .filter(|pt| {
            let bound = limit + (1.0 - p.mu).powf(pt.n as f64) * offset;
            pt.state.y > bound + tol || pt.state.y < -1e-12
        })
        .count() as u64
}

/// Largest absolute defect of the one-step total identity
/// `x(n)+y(n) = (β−μ)y(n−1) + x(n−1) + y(n−1)`.
pub fn check_sum_identity(p: &Parameters, orbit: &Orbit) -> Result<f64> {
    orbit.require_full_resolution("the sum identity check")?;
    let gap = p.beta - p.mu;
    Ok(orbit
        .states
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].state, w[1].state);
            ((b.x + b.y) - (gap * a.y + a.x + a.y)).abs()
        })
        .fold(0.0, f64::max))
}

/// Violations of the five monotonicity statements along a full-resolution
/// orbit. The both-decreasing statement only applies when `beta_gt_mu`.
pub fn check_lemma2_patterns(orbit: &Orbit, beta_gt_mu: bool) -> Result<u64> {
    orbit.require_full_resolution("the monotonicity pattern scan")?;
    let mut scanner = PatternScanner::new(beta_gt_mu);
    for w in orbit.states.windows(2) {
        scanner.push(w[1].state.x - w[0].state.x, w[1].state.y - w[0].state.y);
    }
    Ok(scanner.violations())
}

/// Checks `x(n) > x(n0) + y(n0) − θ + (β−μ)(n−n0)·y(n0)` for every recorded
/// `n > n0`, where `θ = max(y(0), α/μ)` bounds the adults.
pub fn check_growth_lower_bound(p: &Parameters, orbit: &Orbit, n0: u64) -> Result<bool> {
    if !(p.beta > p.mu) {
        return Err(Error::Precondition("growth bound requires beta > mu".into()));
    }
    let base = orbit
        .states
        .iter()
        .find(|pt| pt.n == n0)
        .ok_or_else(|| Error::Precondition(format!("step {n0} is not recorded")))?
        .state;
    if !(base.y > 0.0) {
        return Err(Error::Precondition(format!("y at step {n0} must be positive")));
    }
    let theta = orbit.initial().y.max(p.adult_limit());
    let gap = p.beta - p.mu;
    Ok(orbit.states.iter().filter(|pt| pt.n > n0).all(|pt| {
        let lower = base.x + base.y - theta + gap * (pt.n - n0) as f64 * base.y;
        pt.state.x > lower
    }))
}

/// For `β < μ`, checks that `x + y` and `k·x + y` with `k = μ/β` are
/// nonnegative and nonincreasing along the recorded orbit.
pub fn check_contraction_combos(p: &Parameters, orbit: &Orbit) -> Result<bool> {
    if !(p.beta < p.mu) {
        return Err(Error::Precondition("contraction combinations require beta < mu".into()));
    }
    let k = p.mu / p.beta;
    let nonincreasing = |f: &dyn Fn(State) -> f64| {
        orbit.states.iter().all(|pt| f(pt.state) >= 0.0)
            && orbit.states.windows(2).all(|w| {
                let (a, b) = (f(w[0].state), f(w[1].state));
                b <= a + MONOTONE_TOL * a.abs().max(1.0)
            })
    };
    Ok(nonincreasing(&|s| s.x + s.y) && nonincreasing(&|s| k * s.x + s.y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> (Parameters, State) {
        (Parameters::w0(0.6, 0.5, 0.48), State::new(2.0, 0.1))
    }

    fn fig2() -> (Parameters, State) {
        (Parameters::w0(0.4, 0.35, 0.3), State::new(0.5, 2.0))
    }

    fn fig3() -> (Parameters, State) {
        (Parameters::w0(0.9, 0.9, 0.88), State::new(0.01, 0.2))
    }

    #[test]
    fn extinction_example() {
        let p = Parameters::w0(0.5, 0.3, 0.6);
        let cfg = OrbitConfig { conv_tol: 1e-8, ..OrbitConfig::default() };
        let orbit = iterate_orbit(&p, State::new(1.0, 1.0), &cfg).unwrap();
        assert_eq!(orbit.verdict, Verdict::Extinction);
        assert!(orbit.last().sup_norm() < 1e-8);
        assert_eq!(orbit.monitors.y_bound_violations, 0);
        assert_eq!(orbit.monitors.lemma2_violations, 0);
    }

    #[test]
    fn origin_start_is_immediate_extinction() {
        for p in [fig1().0, Parameters::w0(0.5, 0.3, 0.6)] {
            let orbit = iterate_orbit(&p, State::ORIGIN, &OrbitConfig::default()).unwrap();
            assert_eq!(orbit.verdict, Verdict::Extinction);
            assert_eq!(orbit.n_steps, 0);
            assert_eq!(orbit.states.len(), 1);
        }
    }

    #[test]
    fn survival_example() {
        let (p, s0) = fig1();
        let orbit = iterate_orbit(&p, s0, &OrbitConfig::default()).unwrap();
        assert_eq!(orbit.verdict, Verdict::Survival);
        assert!((orbit.y_limit_estimate - 1.25).abs() < 1e-6);
        assert!(orbit.last().x > 1e3);
        assert_eq!(orbit.monitors.y_bound_violations, 0);
        assert_eq!(orbit.monitors.lemma2_violations, 0);
        // Long run: recording was thinned.
        assert!(orbit.states.len() <= MAX_RECORDED);
        assert!(!orbit.is_full_resolution());
    }

    #[test]
    fn exhausted_when_too_short() {
        let (p, s0) = fig1();
        let orbit = iterate_orbit(&p, s0, &OrbitConfig::full_resolution(50)).unwrap();
        assert_eq!(orbit.verdict, Verdict::Exhausted);
        assert_eq!(orbit.n_steps, 50);
        assert!(orbit.is_full_resolution());
    }

    #[test]
    fn recording_stride_keeps_endpoints() {
        let (p, s0) = fig1();
        let cfg = OrbitConfig { max_iters: 95, record_every: 10, ..OrbitConfig::default() };
        let orbit = iterate_orbit(&p, s0, &cfg).unwrap();
        let ns: Vec<u64> = orbit.states.iter().map(|pt| pt.n).collect();
        assert_eq!(ns, vec![0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 95]);
        assert!(matches!(check_sum_identity(&p, &orbit), Err(Error::Precondition(_))));
        assert_eq!(check_y_bound(&p, &orbit), 0);
    }

    #[test]
    fn invalid_inputs() {
        let (p, _) = fig1();
        let bad = OrbitConfig { conv_tol: 0.0, ..OrbitConfig::default() };
        assert!(iterate_orbit(&p, State::new(1.0, 1.0), &bad).is_err());
        let bad = OrbitConfig { div_threshold: 1.0, ..OrbitConfig::default() };
        assert!(iterate_orbit(&p, State::new(1.0, 1.0), &bad).is_err());
        assert!(iterate_orbit(&p, State::new(-1.0, 1.0), &OrbitConfig::default()).is_err());
        let equal = Parameters::w0(0.5, 0.5, 0.5);
        assert!(iterate_orbit(&equal, State::new(1.0, 1.0), &OrbitConfig::default()).is_err());
    }

    #[test]
    fn adult_bound_on_figure_orbits() {
        for (p, s0) in [fig1(), fig2(), fig3()] {
            let orbit = iterate_orbit(&p, s0, &OrbitConfig::full_resolution(2000)).unwrap();
            assert_eq!(check_y_bound(&p, &orbit), 0);
            assert_eq!(orbit.monitors.y_bound_violations, 0);
            let cap = s0.y.max(p.adult_limit());
            assert!(orbit.states.iter().all(|pt| pt.state.y <= cap));
        }
        let (p, _) = fig1();
        let orbit = iterate_orbit(&p, State::ORIGIN, &OrbitConfig::default()).unwrap();
        assert_eq!(check_y_bound(&p, &orbit), 0);
    }

    #[test]
    fn sum_identity_on_figure_orbits() {
        for (p, s0) in [fig1(), fig3()] {
            let orbit = iterate_orbit(&p, s0, &OrbitConfig::full_resolution(1000)).unwrap();
            let err = check_sum_identity(&p, &orbit).unwrap();
            assert!(err <= 1e-9, "{err}");
            assert_eq!(err, orbit.monitors.sum_identity_max_err);
        }
        let (p, _) = fig1();
        let orbit = iterate_orbit(&p, State::ORIGIN, &OrbitConfig::full_resolution(1)).unwrap();
        assert_eq!(check_sum_identity(&p, &orbit).unwrap(), 0.0);
    }

    #[test]
    fn pattern_scan_on_figure_orbits() {
        for (p, s0) in [fig1(), fig2(), fig3()] {
            let orbit = iterate_orbit(&p, s0, &OrbitConfig::full_resolution(2000)).unwrap();
            assert_eq!(check_lemma2_patterns(&orbit, true).unwrap(), 0);
            assert_eq!(orbit.monitors.lemma2_violations, 0);
        }
    }

    #[test]
    fn figure_orbits_show_their_transient_patterns() {
        // FIGURE_1 starts with larvae falling and adults rising, FIGURE_2 the
        // reverse, FIGURE_3 alternates; all end with both increasing.
        let first_steps = |(p, s0): (Parameters, State)| {
            let orbit = iterate_orbit(&p, s0, &OrbitConfig::full_resolution(4)).unwrap();
            orbit
                .states
                .windows(2)
                .map(|w| (trend(w[1].state.x - w[0].state.x), trend(w[1].state.y - w[0].state.y)))
                .collect::<Vec<_>>()
        };
        use Trend::{Down, Up};
        assert_eq!(first_steps(fig1()), vec![(Down, Up); 4]);
        assert_eq!(first_steps(fig2()), vec![(Up, Down); 4]);
        assert_eq!(first_steps(fig3()), vec![(Up, Down), (Down, Up), (Up, Down), (Down, Up)]);
    }

    #[test]
    fn pattern_scanner_flags_synthetic_violations() {
        let mut s = PatternScanner::new(true);
        s.push(-1.0, -1.0);
        assert_eq!(s.violations(), 1);

        let mut s = PatternScanner::new(true);
        s.push(1.0, 1.0);
        s.push(1.0, -1.0);
        s.push(1.0, 1.0);
        assert_eq!(s.violations(), 1);

        let mut s = PatternScanner::new(true);
        for _ in 0..5 {
            s.push(-1.0, 1.0);
        }
        assert_eq!(s.violations(), 1);

        let mut s = PatternScanner::new(true);
        for i in 0..6 {
            if i % 2 == 0 { s.push(1.0, -1.0) } else { s.push(-1.0, 1.0) }
        }
        assert_eq!(s.violations(), 1);

        // Ties are not decreases.
        let mut s = PatternScanner::new(true);
        s.push(1.0, 1.0);
        s.push(1.0, -1e-16);
        assert_eq!(s.violations(), 0);

        // Both decreasing is allowed when beta < mu.
        let mut s = PatternScanner::new(false);
        s.push(-1.0, -1.0);
        s.push(-1.0, -1.0);
        assert_eq!(s.violations(), 0);
    }

    #[test]
    fn growth_lower_bound() {
        for (p, s0) in [fig1(), fig3()] {
            let orbit = iterate_orbit(&p, s0, &OrbitConfig::full_resolution(5000)).unwrap();
            let n0 = orbit.monitors.n0_estimate;
            assert!(n0 > 0 && n0 < 100, "{n0}");
            assert!(check_growth_lower_bound(&p, &orbit, n0).unwrap());
        }
        let (p, _) = fig1();
        let orbit = iterate_orbit(&p, State::ORIGIN, &OrbitConfig::default()).unwrap();
        assert!(matches!(check_growth_lower_bound(&p, &orbit, 0), Err(Error::Precondition(_))));
        let q = Parameters::w0(0.5, 0.3, 0.6);
        let orbit = iterate_orbit(&q, State::new(1.0, 1.0), &OrbitConfig::full_resolution(10)).unwrap();
        assert!(check_growth_lower_bound(&q, &orbit, 0).is_err());
    }

    #[test]
    fn n0_marks_the_last_decrease() {
        let (p, s0) = fig1();
        let orbit = iterate_orbit(&p, s0, &OrbitConfig::full_resolution(200)).unwrap();
        let n0 = orbit.monitors.n0_estimate as usize;
        let st = &orbit.states;
        assert!(st[n0 - 1].state.x > st[n0].state.x || st[n0 - 1].state.y > st[n0].state.y);
        assert!(st[n0..].windows(2).all(|w| w[1].state.x >= w[0].state.x && w[1].state.y >= w[0].state.y));
    }

    #[test]
    fn contraction_combinations() {
        let p = Parameters::w0(0.5, 0.3, 0.6);
        assert!((p.mu / p.beta - 2.0).abs() < 1e-15);
        let orbit = iterate_orbit(&p, State::new(1.0, 1.0), &OrbitConfig::full_resolution(3000)).unwrap();
        assert!(check_contraction_combos(&p, &orbit).unwrap());

        let orbit = iterate_orbit(&p, State::ORIGIN, &OrbitConfig::default()).unwrap();
        assert!(check_contraction_combos(&p, &orbit).unwrap());

        let q = Parameters::w0(0.6, 0.2, 0.8);
        let orbit = iterate_orbit(&q, State::new(3.0, 0.5), &OrbitConfig::full_resolution(3000)).unwrap();
        assert!(check_contraction_combos(&q, &orbit).unwrap());

        assert!(check_contraction_combos(&fig1().0, &orbit).is_err());
    }
}
