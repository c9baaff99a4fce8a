use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use nonlocal_parabolic::assembly::{
    assemble_mass, assemble_stiffness, error_degree, interpolate, l2_error_with_degree, FieldVector,
};
use nonlocal_parabolic::linalg::{solve_spd, SolverConfig, SolverMethod};
use nonlocal_parabolic::mesh::{uniform_interval_mesh, uniform_square_mesh, LagrangeSpace, Point};
use nonlocal_parabolic::nonlocal::NonlocalCoefficient;
use nonlocal_parabolic::quadrature::QuadratureRule;
use nonlocal_parabolic::sparse::SparseSymMatrix;
use proptest::prelude::*;

fn interval_space(n: usize, k: usize) -> Arc<LagrangeSpace> {
    Arc::new(LagrangeSpace::new(uniform_interval_mesh(0.0, 1.0, n).unwrap(), k).unwrap())
}

fn field(space: &Arc<LagrangeSpace>, free_values: &[f64]) -> FieldVector {
    let mut v = free_values.to_vec();
    v.resize(space.n_free(), 0.0);
    FieldVector::from_coefficients(space, space.expand_free(&v)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coefficient_scaling_law(
        gamma in -1.0f64..2.0,
        c in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
        values in prop::collection::vec(-5.0f64..5.0, 7),
    ) {
        let space = interval_space(8, 1);
        let mass = assemble_mass(&space);
        let u = field(&space, &values);
        prop_assume!(!u.is_zero());
        let a = NonlocalCoefficient::new(gamma);
        let base = a.evaluate(&u, &mass).unwrap();
        let scaled = a.evaluate(&u.scaled(c), &mass).unwrap();
        let expected = c.abs().powf(2.0 * gamma) * base;
        prop_assert!((scaled - expected).abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn lipschitz_bound_on_energy_shell(
        v in prop::collection::vec(-1.0f64..1.0, 7),
        w in prop::collection::vec(-1.0f64..1.0, 7),
        sv in 1.0f64..2.0,
        sw in 1.0f64..2.0,
    ) {
        // with ||V||^2 and ||W||^2 in [1, 2], |a(V) - a(W)| <= sqrt(2) ||V - W|| for gamma = 1/2
        let space = interval_space(8, 1);
        let mass = assemble_mass(&space);
        let normalise = |x: &[f64], s: f64| {
            let f = field(&space, x);
            let n2 = f.coefficients().iter().map(|c| c * c).sum::<f64>();
            prop_assume!(n2 > 1e-6);
            let e = nonlocal_parabolic::assembly::l2_norm_sq(&f, &mass).unwrap();
            Ok(f.scaled((s / e).sqrt()))
        };
        let fv = normalise(&v, sv)?;
        let fw = normalise(&w, sw)?;
        let a = NonlocalCoefficient::new(0.5);
        match a.lipschitz_witness(&fv, &fw, &mass) {
            Ok(ratio) => prop_assert!(ratio <= 2f64.sqrt() + 1e-12),
            Err(_) => prop_assert_eq!(fv.coefficients(), fw.coefficients()),
        }
    }

    #[test]
    fn cg_matches_dense_solve(seed in prop::collection::vec(-1.0f64..1.0, 20), shift in 0.1f64..5.0) {
        // random SPD matrix B^T B + shift I with a sparse-ish pattern
        let n = 10;
        let b = DMatrix::from_fn(n, n, |i, j| if (i + j) % 3 == 0 { seed[(i * 7 + j) % 20] } else { 0.0 });
        let a = b.transpose() * &b + DMatrix::identity(n, n) * shift;
        let dense: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
        let sparse = SparseSymMatrix::from_dense(&dense);
        let rhs: Vec<f64> = (0..n).map(|i| seed[i] + 0.5).collect();
        let want = a.clone().cholesky().unwrap().solve(&DVector::from_vec(rhs.clone()));
        for method in [SolverMethod::ConjugateGradient, SolverMethod::DirectBanded] {
            let cfg = SolverConfig { method, ..SolverConfig::default() };
            let got = solve_spd(&sparse, &rhs, &cfg).unwrap();
            prop_assert!(got.relative_residual <= 1e-12);
            for (g, w) in got.x.iter().zip(want.iter()) {
                prop_assert!((g - w).abs() <= 1e-9 * want.amax().max(1.0));
            }
        }
    }
}

#[test]
fn step_matrix_matches_dense_assembly() {
    let space = interval_space(6, 2);
    let m = assemble_mass(&space);
    let k = assemble_stiffness(&space);
    let c = SparseSymMatrix::linear_combination(10.0, &m, 0.35, &k);
    let (md, kd, cd) = (m.to_dense(), k.to_dense(), c.to_dense());
    for i in 0..md.len() {
        for j in 0..md.len() {
            assert!((cd[i][j] - (10.0 * md[i][j] + 0.35 * kd[i][j])).abs() < 1e-12);
        }
    }
    assert!(m.max_asymmetry() < 1e-15);
    assert!(k.max_asymmetry() < 1e-14);
}

fn interpolation_errors(dim: usize, k: usize, ns: &[usize]) -> Vec<f64> {
    let u = |p: Point| {
        if dim == 1 {
            (PI * p[0]).sin() * p[0].exp()
        } else {
            (PI * p[0]).sin() * (PI * p[1]).sin() * (p[0] + p[1]).exp()
        }
    };
    ns.iter()
        .map(|&n| {
            let mesh = if dim == 1 {
                uniform_interval_mesh(0.0, 1.0, n).unwrap()
            } else {
                uniform_square_mesh(n).unwrap()
            };
            let space = Arc::new(LagrangeSpace::new(mesh, k).unwrap());
            let ih = interpolate(&space, &u).unwrap();
            l2_error_with_degree(&ih, &|p, _| u(p), 0.0, error_degree(k)).unwrap()
        })
        .collect()
}

#[test]
fn interpolation_rates() {
    for (dim, ns) in [(1usize, vec![4usize, 8, 16, 32]), (2, vec![2, 4, 8, 16])] {
        for k in 1..=3 {
            let e = interpolation_errors(dim, k, &ns);
            let expected = 2f64.powi(k as i32 + 1);
            let last = e[e.len() - 2] / e[e.len() - 1];
            assert!(
                (last / expected - 1.0).abs() <= 0.15,
                "dim {dim} k {k}: ratio {last} vs {expected}, errors {e:?}"
            );
        }
    }
}

#[test]
fn quadrature_exactness() {
    for dim in [1, 2] {
        for degree in 0..=10 {
            let rule = QuadratureRule::for_simplex(dim, degree);
            for a in 0..=degree {
                for b in 0..=(if dim == 1 { 0 } else { degree - a }) {
                    let got: f64 = rule
                        .iter()
                        .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32))
                        .sum();
                    // int over the reference simplex of x^a y^b = a! b! / (a + b + dim)!
                    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
                    let exact = fact(a) * fact(b) / fact(a + b + dim);
                    assert!((got - exact).abs() < 1e-14, "dim {dim} degree {degree} x^{a} y^{b}");
                }
            }
        }
    }
}
