//! Expected values computed by routes independent of the library code.

use mosqdyn::model::{apply_w, apply_w0, continuous_rhs, Parameters, State};
use mosqdyn::ode::{compute_r0, positive_equilibrium};
use mosqdyn::simplex::{apply_t, apply_u, quadratic_coefficients, two_periodic_certificate};
use mosqdyn::spectral::{eigenvalues, jacobian_at_origin, stability_inequalities};

/// Real roots of `λ² − tr·λ + det` by bisection on the characteristic
/// polynomial, larger first. The vertex splits the two roots.
fn char_poly_roots(j: [[f64; 2]; 2]) -> (f64, f64) {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let f = |l: f64| l * l - tr * l + det;
    let vertex = tr / 2.0;
    let solve = |mut lo: f64, mut hi: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (f(lo) > 0.0) { lo = mid } else { hi = mid }
        }
        0.5 * (lo + hi)
    };
    (solve(vertex, vertex + 10.0), solve(vertex - 10.0, vertex))
}

#[test]
fn eigenvalues_against_characteristic_polynomial() {
    for (p, l1, l2) in [
        (Parameters::w0(0.6, 0.5, 0.48), 1.011_000, -0.091_000),
        (Parameters::w0(0.5, 0.3, 0.6), 0.840_512, 0.059_488),
    ] {
        let (r1, r2) = char_poly_roots(jacobian_at_origin(&p));
        assert!((r1 - l1).abs() < 1e-6 && (r2 - l2).abs() < 1e-6, "{r1} {r2}");
        let (c1, c2) = eigenvalues(&p);
        assert!((c1 - r1).abs() < 1e-12 && (c2 - r2).abs() < 1e-12);
    }
}

#[test]
fn beta_equal_mu_gives_unit_eigenvalue() {
    let (r1, _) = char_poly_roots(jacobian_at_origin(&Parameters::w0(0.5, 0.5, 0.5)));
    assert!((r1 - 1.0).abs() < 1e-14);
    assert_eq!(eigenvalues(&Parameters::w0(0.5, 0.5, 0.5)).0, 1.0);
}

#[test]
fn inequalities_by_direct_substitution() {
    // α + μ = 1.1, √D = √0.61
    let s = 0.61f64.sqrt();
    assert!(1.1 + s < 4.0 && 0.0 < 1.1 - s);
    assert_eq!(stability_inequalities(&Parameters::w0(0.5, 0.3, 0.6)), (true, true));
    // α + μ = 1.08, √D = √1.2144 > 1.08
    assert!(1.08 - 1.2144f64.sqrt() < 0.0);
    assert_eq!(stability_inequalities(&Parameters::w0(0.6, 0.5, 0.48)), (true, false));
}

#[test]
fn operator_terms_one_by_one() {
    let p = Parameters::new(0.6, 0.5, 0.48, 0.1, 0.05);
    let (x, y) = (1.0f64, 1.0f64);
    let birth = 0.5 * y;
    let emerge = 0.6 * x / (1.0 + x);
    let larval_death = (0.1 + 0.05 * x) * x;
    let s = apply_w(&p, State::new(x, y)).unwrap();
    assert!((s.x - (birth - emerge - larval_death + x)).abs() < 1e-15);
    assert!((s.y - (emerge - 0.48 * y + y)).abs() < 1e-15);
    assert!((s.x - 1.05).abs() < 1e-12 && (s.y - 0.82).abs() < 1e-12);

    let p0 = Parameters::w0(0.6, 0.5, 0.48);
    let s = apply_w0(&p0, State::new(2.0, 0.1)).unwrap();
    assert!((s.x - 1.65).abs() < 1e-12 && (s.y - 0.452).abs() < 1e-12);
    let (dx, dy) = continuous_rhs(&p0, State::new(2.0, 0.1)).unwrap();
    assert!((dx - (1.65 - 2.0)).abs() < 1e-12 && (dy - (0.452 - 0.1)).abs() < 1e-12);
}

/// Coefficients from the expanded quotient `−((T(T(x))−x)/(T(x)−x))`
/// numerator, an algebraically different route to A, B, C.
fn expanded_coefficients(p: &Parameters) -> (f64, f64, f64) {
    let (a, b, m) = (p.alpha, p.beta, p.mu);
    (
        -(m - 2.0) * (2.0 * b - m - 1.0),
        -(a * b - 2.0 * a - 2.0 * m + 4.0),
        -(-a * b + a * m - a - 2.0 * b * m + 4.0 * b + m * m - 3.0 * m + 2.0),
    )
}

#[test]
fn certificate_coefficients_two_routes() {
    let fig1 = Parameters::w0(0.6, 0.5, 0.48);
    let (a, b, c) = expanded_coefficients(&fig1);
    assert!((a + 0.7296).abs() < 1e-13 && (b + 2.14).abs() < 1e-13 && (c + 1.6984).abs() < 1e-13);
    for p in [fig1, Parameters::w0(0.4, 0.35, 0.3), Parameters::w0(0.13, 0.97, 0.41)] {
        let (ea, eb, ec) = expanded_coefficients(&p);
        let (qa, qb, qc) = quadratic_coefficients(&p);
        assert!((ea - qa).abs() < 1e-13 && (eb - qb).abs() < 1e-13 && (ec - qc).abs() < 1e-13);
        assert!(two_periodic_certificate(&p).unwrap().signs_ok);
    }
}

#[test]
fn u_at_vertex_and_t_endpoints() {
    let p = Parameters::w0(0.6, 0.5, 0.48);
    let s = apply_u(&p, State::new(0.0, 1.0)).unwrap();
    assert!((s.x - 0.5 / 1.02).abs() < 1e-15 && (s.y - 0.52 / 1.02).abs() < 1e-15);
    assert!((apply_t(&p, 0.0).unwrap() - 0.5 / 1.02).abs() < 1e-15);
    assert!((apply_t(&p, 1.0).unwrap() - 1.4 / 2.0).abs() < 1e-15);
}

#[test]
fn threshold_and_equilibrium_by_hand() {
    let p = Parameters::new(0.6, 0.8, 0.5, 0.1, 0.05);
    let r0 = 0.6 * 0.8 / (0.7 * 0.5);
    assert!((compute_r0(&p).unwrap() - r0).abs() < 1e-15);
    let e = positive_equilibrium(&p).unwrap().unwrap();
    // Residual of the continuous system is the oracle.
    let (dx, dy) = continuous_rhs(&p, e).unwrap();
    assert!(dx.abs() < 1e-9 && dy.abs() < 1e-9);
    assert!((e.x - 1.2295).abs() < 1e-4 && (e.y - 0.6617).abs() < 1e-4);
}
