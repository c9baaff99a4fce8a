//! Quadrature rules on the reference interval `[0, 1]` and the reference
//! triangle `{(x, y) : x, y >= 0, x + y <= 1}`.

use crate::mesh::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<Point>,
    weights: Vec<f64>,
    degree: usize,
}

impl QuadratureRule {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Highest total polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    /// Exact rule for the reference element of dimension `dim`.
    pub fn for_simplex(dim: usize, degree: usize) -> Self {
        match dim {
            1 => interval_rule(degree),
            _ => triangle_rule(degree),
        }
    }
}

/// Legendre polynomial `P_n(z)` and its derivative.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// `n`-point Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Gauss-Legendre rule on `[0, 1]` exact to `degree`.
pub fn interval_rule(degree: usize) -> QuadratureRule {
    let n = degree / 2 + 1;
    let (x, w) = gauss_legendre(n);
    QuadratureRule {
        points: x.iter().map(|&t| [0.5 * (t + 1.0), 0.0]).collect(),
        weights: w.iter().map(|&v| 0.5 * v).collect(),
        degree: 2 * n - 1,
    }
}

/// Collapsed (conical product) Gauss rule on the reference triangle, exact
/// to `degree`.
pub fn triangle_rule(degree: usize) -> QuadratureRule {
    // x^a y^b under (x, y) = (u, v (1 - u)) with Jacobian (1 - u) has
    // degree <= degree + 1 in u and <= degree in v.
    let n = (degree + 3) / 2;
    let (x, w) = gauss_legendre(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (&su, &wu) in x.iter().zip(&w) {
        let u = 0.5 * (su + 1.0);
        for (&sv, &wv) in x.iter().zip(&w) {
            let v = 0.5 * (sv + 1.0);
            points.push([u, v * (1.0 - u)]);
            weights.push(0.25 * wu * wv * (1.0 - u));
        }
    }
    QuadratureRule {
        points,
        weights,
        degree: 2 * n - 2,
    }
}

/// Composite Gauss-Legendre integration of `f` over `[a, b]`.
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, points: usize) -> f64 {
    let (x, w) = gauss_legendre(points);
    let width = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mut panel = 0.0;
        for (&t, &wt) in x.iter().zip(&w) {
            panel += wt * f(lo + 0.5 * width * (t + 1.0));
        }
        sum += 0.5 * width * panel;
    }
    sum
}

/// Adaptive Gauss-Legendre integration on `[a, b]`: a panel is accepted
/// when its 10-point value agrees with the sum over its two halves.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (x, w) = gauss_legendre(10);
    let panel = |lo: f64, hi: f64| {
        let half = 0.5 * (hi - lo);
        half * x
            .iter()
            .zip(&w)
            .map(|(&t, &wt)| wt * f(lo + half * (t + 1.0)))
            .sum::<f64>()
    };
    let mut total = 0.0;
    let mut stack = vec![(a, b, panel(a, b), 0u32)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(lo, mid);
        let right = panel(mid, hi);
        if (left + right - whole).abs() <= tol.max(1e-15 * (left + right).abs()) || depth >= 40 {
            total += left + right;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    total
}
