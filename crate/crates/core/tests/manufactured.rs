use std::f64::consts::PI;

use approx::assert_relative_eq;
use nonlocal_parabolic::manufactured::{
    l_of_t, make_case, solve_alpha, verify_case, w_profile_1d, w_profile_2d, AlphaSolveConfig, CaseId,
};
use nonlocal_parabolic::Error;

/// Composite Simpson on [0, 1].
fn simpson(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let mut s = f(0.0) + f(1.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

/// `w + alpha w'' = g` on [0, 1] with zero ends, given a particular solution.
fn dirichlet_profile(alpha: f64, particular: impl Fn(f64) -> f64) -> impl Fn(f64) -> f64 {
    let r = alpha.sqrt();
    let b = -particular(0.0);
    let a = (-particular(1.0) - b * (1.0 / r).cos()) / (1.0 / r).sin();
    move |x| particular(x) + a * (x / r).sin() + b * (x / r).cos()
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn example1_alpha_matches_independent_oracle() {
    let g = |alpha: f64| {
        let w = dirichlet_profile(alpha, |x| -x * x + 2.0 * alpha);
        alpha - simpson(|x| w(x).powi(2), 4000).sqrt()
    };
    let oracle = bisect(g, 0.1, 0.3);
    let case = make_case(CaseId::Example1).unwrap();
    assert!((oracle - 0.223688785954835).abs() < 1e-10);
    assert!((case.alpha - 0.223688785954835).abs() < 1e-10);
    assert!((case.alpha - oracle).abs() < 1e-10);
}

#[test]
fn example2_alpha_matches_independent_oracle() {
    let c = 1.5f64.sqrt();
    let g = |alpha: f64| {
        let w = dirichlet_profile(alpha, |x| -c * x.exp() / (1.0 + alpha));
        alpha - simpson(|x| w(x).powi(2), 4000).powf(-1.0 / 3.0)
    };
    let oracle = bisect(g, 0.1, 0.12);
    let case = make_case(CaseId::Example2).unwrap();
    assert!((oracle - 0.108016681670528).abs() < 1e-10);
    assert!((case.alpha - 0.108016681670528).abs() < 1e-10);
}

#[test]
fn example3_alpha_is_one_over_two_pi_squared() {
    let case = make_case(CaseId::Example3).unwrap();
    assert!((case.alpha - 1.0 / (2.0 * PI * PI)).abs() < 1e-12);
}

#[test]
fn example3_initial_value_at_centre() {
    let case = make_case(CaseId::Example3).unwrap();
    assert_relative_eq!(case.u([0.5, 0.5], 0.0), (8.0 / (PI * PI)).powf(0.25), epsilon = 1e-14);
    assert!((case.u([0.5, 0.5], 0.0) - 0.94884999665759).abs() < 1e-12);
}

#[test]
fn every_case_verifies() {
    for id in CaseId::ALL {
        let case = make_case(id).unwrap();
        let r = verify_case(&case);
        assert!(r.max_pde_residual <= 1e-7, "{id}: {r:?}");
        assert!(r.fixed_point_residual <= 1e-12, "{id}: {r:?}");
        assert_eq!(r.max_boundary_trace, 0.0, "{id}");
        assert!(r.initial_mass > 0.0);
        assert!(
            r.max_coefficient_mismatch <= 1e-10 * case.coefficient(0.0).unwrap(),
            "{id}: {r:?}"
        );
        assert!(r.passes(1e-7, 1e-12));
    }
}

#[test]
fn l_solves_its_ode() {
    for (gamma, c, ts) in [
        (0.5, -1.0, [0.0, 1.0, 7.5]),
        (-1.0 / 3.0, 1.0, [0.0, 0.4, 0.9]),
        (2.0, -0.25, [0.0, 0.3, 1.0]),
    ] {
        for t in ts {
            let h = 1e-5;
            let dl = (l_of_t(gamma, c, t + h).unwrap() - l_of_t(gamma, c, t - h).unwrap()) / (2.0 * h);
            let rhs = -l_of_t(gamma, c, t).unwrap().powf(2.0 * gamma + 1.0);
            assert!((dl - rhs).abs() < 1e-8 * rhs.abs().max(1.0), "gamma {gamma} t {t}");
        }
    }
    assert_eq!(l_of_t(0.5, -1.0, 0.0).unwrap(), 1.0);
    assert_eq!(l_of_t(-1.0 / 3.0, 1.0, 1.0).unwrap(), 0.0);
    assert_eq!(l_of_t(-1.0 / 3.0, 1.0, 1.7).unwrap(), 0.0);
    assert!(matches!(l_of_t(0.0, 1.0, 0.0), Err(Error::GammaZero)));
    assert!(matches!(l_of_t(0.5, 1.0, 0.0), Err(Error::OutsideTimeDomain { .. })));
}

#[test]
fn profile_1d_matches_closed_form() {
    let alpha = 0.2;
    let w = dirichlet_profile(alpha, |x| -x * x + 2.0 * alpha);
    let r = alpha.sqrt();
    // w(0) = 0 and w'(0) = c1 / r pin down the variation-of-constants form
    let c1 = (1.0 - 2.0 * alpha + 2.0 * alpha * (1.0 / r).cos()) / (1.0 / r).sin();
    for x in [0.0, 0.13, 0.5, 0.77, 1.0] {
        let got = w_profile_1d(&|s| -s * s, alpha, c1, 0.0, x).unwrap();
        assert!((got - w(x)).abs() < 1e-12, "x = {x}: {got} vs {}", w(x));
    }
    assert!(matches!(
        w_profile_1d(&|_| 0.0, 0.0, 1.0, 0.0, 0.5),
        Err(Error::NonpositiveAlpha(_))
    ));
}

#[test]
fn profile_2d_solves_helmholtz() {
    let alpha = 0.05;
    let lambda = 0.4;
    let w = |x: f64, y: f64| w_profile_2d(1.3, 0.7, lambda, alpha, x, y).unwrap();
    let h = 1e-4;
    for (x, y) in [(0.2, 0.3), (0.6, 0.9), (0.45, 0.5)] {
        let lap = (w(x + h, y) + w(x - h, y) + w(x, y + h) + w(x, y - h) - 4.0 * w(x, y)) / (h * h);
        assert!((w(x, y) + alpha * lap).abs() < 1e-5);
    }
    assert_eq!(w(0.0, 0.4), 0.0);
    assert_eq!(w(0.4, 0.0), 0.0);
    assert!(w_profile_2d(1.0, 1.0, 1.0, alpha, 0.1, 0.1).is_err());
    assert!(w_profile_2d(1.0, 1.0, 0.5, -1.0, 0.1, 0.1).is_err());
}

#[test]
fn coefficient_identity_along_trajectory() {
    // a(u(t)) = alpha l(t)^(2 gamma) follows from the fixed point
    for id in CaseId::ALL {
        let case = make_case(id).unwrap();
        let horizon = case.extinction_time().map(|t| 0.9 * t).unwrap_or(case.default_t_end());
        for i in 0..=5 {
            let t = horizon * i as f64 / 5.0;
            let expected = case.alpha * case.l(t).powf(2.0 * case.gamma);
            assert_relative_eq!(case.coefficient(t).unwrap(), expected, max_relative = 1e-10);
        }
    }
}

#[test]
fn qualitative_behaviour() {
    let ex1 = make_case(CaseId::Example1).unwrap();
    let ex3 = make_case(CaseId::Example3).unwrap();
    for case in [&ex1, &ex3] {
        let ts: Vec<f64> = (0..20).map(|i| i as f64 * case.default_t_end() / 19.0).collect();
        for w in ts.windows(2) {
            assert!(case.energy(w[1]) < case.energy(w[0]));
        }
    }
    let ex2 = make_case(CaseId::Example2).unwrap();
    assert_eq!(ex2.extinction_time(), Some(1.0));
    for t in [1.0, 1.3, 2.0] {
        assert_eq!(ex2.u([0.5, 0.0], t), 0.0);
        assert_eq!(ex2.f([0.5, 0.0], t), 0.0);
        assert_eq!(ex2.coefficient(t), None);
    }
    assert!(ex2.u([0.5, 0.0], 0.99) > 0.0);
    assert_eq!(ex1.extinction_time(), None);
    assert!(!ex3.has_forcing());
}

#[test]
fn root_finder_rejects_bad_brackets() {
    let cfg = AlphaSolveConfig {
        bracket: (0.5, 0.6),
        ..AlphaSolveConfig::for_case(CaseId::Example1)
    };
    assert!(matches!(solve_alpha(&|a| a * a, &cfg), Err(Error::NoSignChange { .. })));
    let cfg = AlphaSolveConfig {
        bracket: (0.1, 1.0),
        ..cfg
    };
    let s = solve_alpha(&|a| 0.25 + 0.5 * a, &cfg).unwrap();
    assert!((s.alpha - 0.5).abs() < 1e-13);
}
