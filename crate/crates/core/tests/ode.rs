use mosqdyn::model::{continuous_rhs, Parameters, State};
use mosqdyn::ode::{compute_r0, integrate_ode, positive_equilibrium, predicted_limit, OdeConfig};

fn final_state(p: &Parameters, s0: State, step: f64, t_end: f64) -> State {
    integrate_ode(p, s0, &OdeConfig { step, t_end, conv_tol: 1e-6 }).unwrap().last().unwrap().1
}

#[test]
fn fourth_order_step_convergence() {
    let p = Parameters::new(0.6, 0.8, 0.5, 0.1, 0.05);
    let s0 = State::new(1.0, 1.0);
    let h = 0.1;
    let coarse = final_state(&p, s0, h, 4.0);
    let half = final_state(&p, s0, h / 2.0, 4.0);
    let reference = final_state(&p, s0, h / 4.0, 4.0);
    let e1 = coarse.distance_sup(&reference);
    let e2 = half.distance_sup(&reference);
    // Against a quarter-step reference the ideal ratio is (1 - 2^-8)/(2^-4 - 2^-8) = 17.
    let ratio = e1 / e2;
    assert!((13.6..=18.4).contains(&ratio), "ratio {ratio}");
}

#[test]
fn converges_to_predicted_limits() {
    let cases = [
        (Parameters::new(0.5, 0.3, 0.6, 0.0, 0.0), 200.0, 1e-6),
        (Parameters::new(0.5, 0.3, 0.6, 0.1, 0.05), 500.0, 1e-6),
        (Parameters::new(0.6, 0.8, 0.5, 0.1, 0.05), 500.0, 1e-5),
        (Parameters::new(0.9, 0.7, 0.3, 0.2, 0.4), 500.0, 1e-5),
    ];
    for (p, t_end, tol) in cases {
        let target = predicted_limit(&p).unwrap().unwrap();
        let end = final_state(&p, State::new(1.0, 1.0), 0.01, t_end);
        assert!(end.distance_sup(&target) < tol, "{p:?}: {end:?} vs {target:?}");
        if !target.is_origin() {
            let (dx, dy) = continuous_rhs(&p, target).unwrap();
            assert!(dx.abs().max(dy.abs()) < 1e-9);
        }
    }
}

#[test]
fn no_larval_death_above_threshold_has_no_equilibrium() {
    let p = Parameters::w0(0.6, 0.5, 0.48);
    assert!(compute_r0(&p).unwrap() > 1.0);
    assert!(positive_equilibrium(&p).is_err());
    assert_eq!(predicted_limit(&p).unwrap(), None);
    // Larvae keep growing.
    let traj = integrate_ode(&p, State::new(2.0, 0.1), &OdeConfig::default()).unwrap();
    assert!(traj.last().unwrap().1.x > traj[traj.len() / 2].1.x);
}
