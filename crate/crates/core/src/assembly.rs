//! Global finite element operators on a [`LagrangeSpace`]: mass and
//! stiffness matrices, load vectors, nodal interpolation, the Ritz
//! projection and L2 / H1 error norms.
//!
//! Assembled forms use a quadrature rule of degree `2k + 2`; error norms use
//! `2k + 4`. Element contributions are accumulated in element order, so the
//! assembled matrices are bitwise reproducible.

use std::sync::Arc;

pub use crate::sparse::SparseSymMatrix;

use crate::basis::{AffineMap, ReferenceBasis, Tabulation};
use crate::error::{Error, Result};
use crate::linalg::{solve_spd, SolverConfig};
use crate::mesh::{LagrangeSpace, Point};
use crate::quadrature::QuadratureRule;

/// Quadrature degree used for assembled forms.
pub fn assembly_degree(k: usize) -> usize {
    2 * k + 2
}

/// Quadrature degree used for error norms.
pub fn error_degree(k: usize) -> usize {
    assembly_degree(k) + 2
}

/// Coefficients of a discrete function `U = sum_j u_j phi_j`.
#[derive(Clone)]
pub struct FieldVector {
    space: Arc<LagrangeSpace>,
    coefficients: Vec<f64>,
}

impl std::fmt::Debug for FieldVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldVector")
            .field("n_nodes", &self.coefficients.len())
            .field("coefficients", &self.coefficients)
            .finish()
    }
}

impl FieldVector {
    pub fn zeros(space: &Arc<LagrangeSpace>) -> Self {
        Self {
            space: space.clone(),
            coefficients: vec![0.0; space.n_nodes()],
        }
    }

    pub fn from_coefficients(space: &Arc<LagrangeSpace>, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != space.n_nodes() {
            return Err(Error::DimensionMismatch {
                expected: space.n_nodes(),
                got: coefficients.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            coefficients,
        })
    }

    pub fn space(&self) -> &Arc<LagrangeSpace> {
        &self.space
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [f64] {
        &mut self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0.0)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &FieldVector, b: f64) -> FieldVector {
        FieldVector {
            space: self.space.clone(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> FieldVector {
        FieldVector {
            space: self.space.clone(),
            coefficients: self.coefficients.iter().map(|x| c * x).collect(),
        }
    }

    /// Largest coefficient magnitude on boundary nodes.
    pub fn max_boundary_value(&self) -> f64 {
        (0..self.len())
            .filter(|&i| self.space.is_boundary_node(i))
            .map(|i| self.coefficients[i].abs())
            .fold(0.0, f64::max)
    }
}

/// Per-element quadrature data: physical points, weights scaled by the
/// Jacobian, and physical shape function gradients.
pub(crate) struct ElementQuadrature<'s> {
    space: &'s LagrangeSpace,
    rule: QuadratureRule,
    tab: Tabulation,
    n_local: usize,
    points: Vec<Point>,
    weights: Vec<f64>,
    grads: Vec<[f64; 2]>,
}

impl<'s> ElementQuadrature<'s> {
    pub(crate) fn new(space: &'s LagrangeSpace, degree: usize) -> Self {
        let rule = QuadratureRule::for_simplex(space.dim(), degree);
        let basis = ReferenceBasis::new(space.dim(), space.degree());
        let tab = basis.tabulate(rule.points());
        let nq = rule.len();
        let n_local = basis.len();
        Self {
            space,
            rule,
            tab,
            n_local,
            points: vec![[0.0; 2]; nq],
            weights: vec![0.0; nq],
            grads: vec![[0.0; 2]; nq * n_local],
        }
    }

    pub(crate) fn reinit(&mut self, e: usize) {
        let map = AffineMap::for_element(self.space.mesh(), e);
        let det = map.abs_det();
        for (q, (xi, w)) in self.rule.iter().enumerate() {
            self.points[q] = map.map(*xi);
            self.weights[q] = w * det;
            for (i, g) in self.tab.grads(q).iter().enumerate() {
                self.grads[q * self.n_local + i] = map.physical_gradient(*g);
            }
        }
    }

    pub(crate) fn n_points(&self) -> usize {
        self.weights.len()
    }

    pub(crate) fn point(&self, q: usize) -> Point {
        self.points[q]
    }

    pub(crate) fn weight(&self, q: usize) -> f64 {
        self.weights[q]
    }

    pub(crate) fn values(&self, q: usize) -> &[f64] {
        self.tab.values(q)
    }

    pub(crate) fn grads(&self, q: usize) -> &[[f64; 2]] {
        &self.grads[q * self.n_local..(q + 1) * self.n_local]
    }
}

type LocalForm = fn(&ElementQuadrature, usize, usize, usize) -> f64;

fn mass_form(quad: &ElementQuadrature, q: usize, i: usize, j: usize) -> f64 {
    let v = quad.values(q);
    quad.weight(q) * v[i] * v[j]
}

fn stiffness_form(quad: &ElementQuadrature, q: usize, i: usize, j: usize) -> f64 {
    let g = quad.grads(q);
    quad.weight(q) * (g[i][0] * g[j][0] + g[i][1] * g[j][1])
}

fn local_matrix(quad: &ElementQuadrature, nl: usize, form: LocalForm) -> Vec<Vec<f64>> {
    (0..nl)
        .map(|i| {
            (0..nl)
                .map(|j| (0..quad.n_points()).map(|q| form(quad, q, i, j)).sum())
                .collect()
        })
        .collect()
}

fn element_matrix(space: &LagrangeSpace, e: usize, form: LocalForm) -> Vec<Vec<f64>> {
    let mut quad = ElementQuadrature::new(space, assembly_degree(space.degree()));
    quad.reinit(e);
    local_matrix(&quad, space.nodes_per_element(), form)
}

fn assemble_bilinear(space: &LagrangeSpace, form: LocalForm) -> SparseSymMatrix {
    let nl = space.nodes_per_element();
    let n_elements = space.mesh().n_elements();
    let mut triplets = Vec::with_capacity(n_elements * nl * nl);
    let mut quad = ElementQuadrature::new(space, assembly_degree(space.degree()));
    for e in 0..n_elements {
        quad.reinit(e);
        let nodes = space.element_nodes(e);
        for (i, row) in local_matrix(&quad, nl, form).into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                triplets.push((nodes[i], nodes[j], v));
            }
        }
    }
    SparseSymMatrix::from_triplets(space.n_nodes(), triplets)
}

/// Local mass matrix of element `e`, indexed like `space.element_nodes(e)`.
pub fn element_mass(space: &LagrangeSpace, e: usize) -> Vec<Vec<f64>> {
    element_matrix(space, e, mass_form)
}

/// Local stiffness matrix of element `e`.
pub fn element_stiffness(space: &LagrangeSpace, e: usize) -> Vec<Vec<f64>> {
    element_matrix(space, e, stiffness_form)
}

/// Mass matrix `M_ij = (phi_j, phi_i)` over all nodes.
pub fn assemble_mass(space: &LagrangeSpace) -> SparseSymMatrix {
    assemble_bilinear(space, mass_form)
}

/// Stiffness matrix `K_ij = (grad phi_j, grad phi_i)` over all nodes.
pub fn assemble_stiffness(space: &LagrangeSpace) -> SparseSymMatrix {
    assemble_bilinear(space, stiffness_form)
}

/// Load vector `F_i = (f(., t), phi_i)` over all nodes.
pub fn assemble_load(space: &Arc<LagrangeSpace>, f: &dyn Fn(Point, f64) -> f64, t: f64) -> Result<FieldVector> {
    let mut load = vec![0.0; space.n_nodes()];
    let mut quad = ElementQuadrature::new(space, assembly_degree(space.degree()));
    for e in 0..space.mesh().n_elements() {
        quad.reinit(e);
        let nodes = space.element_nodes(e);
        for q in 0..quad.n_points() {
            let p = quad.point(q);
            let value = f(p, t);
            if !value.is_finite() {
                return Err(Error::NonFiniteForcing { x: p[0], y: p[1], t });
            }
            let wf = quad.weight(q) * value;
            for (&node, &phi) in nodes.iter().zip(quad.values(q)) {
                load[node] += wf * phi;
            }
        }
    }
    FieldVector::from_coefficients(space, load)
}

/// Nodal interpolant `I_h u = sum_j u(P_j) phi_j`, with boundary
/// coefficients set to zero.
pub fn interpolate(space: &Arc<LagrangeSpace>, u: &dyn Fn(Point) -> f64) -> Result<FieldVector> {
    let mut coefficients = vec![0.0; space.n_nodes()];
    for &i in space.free_node_indices() {
        let p = space.nodes()[i];
        let v = u(p);
        if !v.is_finite() {
            return Err(Error::NonFiniteData { x: p[0], y: p[1] });
        }
        coefficients[i] = v;
    }
    FieldVector::from_coefficients(space, coefficients)
}

/// Ritz projection: the `W` in the discrete space with
/// `(grad W, grad phi_i) = (grad u, grad phi_i)` for every free node `i`.
/// The right-hand side is integrated `quad_refinement` degrees above the
/// assembly rule.
pub fn ritz_project(
    space: &Arc<LagrangeSpace>,
    grad_u: &dyn Fn(Point) -> [f64; 2],
    quad_refinement: usize,
) -> Result<FieldVector> {
    if space.n_free() == 0 {
        return Err(Error::SingularSystem);
    }
    let stiffness = assemble_stiffness(space);
    let mut rhs = vec![0.0; space.n_nodes()];
    let mut quad = ElementQuadrature::new(space, assembly_degree(space.degree()) + quad_refinement);
    for e in 0..space.mesh().n_elements() {
        quad.reinit(e);
        let nodes = space.element_nodes(e);
        for q in 0..quad.n_points() {
            let gu = grad_u(quad.point(q));
            let w = quad.weight(q);
            for (&node, g) in nodes.iter().zip(quad.grads(q)) {
                rhs[node] += w * (gu[0] * g[0] + gu[1] * g[1]);
            }
        }
    }
    let free = space.free_node_indices();
    let k_free = stiffness.principal_submatrix(free);
    let config = SolverConfig {
        tolerance: 1e-13,
        ..SolverConfig::default()
    };
    let solution = solve_spd(&k_free, &space.restrict_free(&rhs), &config)?;
    FieldVector::from_coefficients(space, space.expand_free(&solution.x))
}

/// `U^T M U`, the squared L2 norm of `U` when `M` is the mass matrix.
pub fn l2_norm_sq(u: &FieldVector, mass: &SparseSymMatrix) -> Result<f64> {
    Ok(mass.quadratic_form(u.coefficients())?.max(0.0))
}

fn check_finite(v: f64, p: Point) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteData { x: p[0], y: p[1] })
    }
}

/// `||U - u(., t)||_{L2}` using the error-norm quadrature rule.
pub fn l2_error(u: &FieldVector, u_exact: &dyn Fn(Point, f64) -> f64, t: f64) -> Result<f64> {
    l2_error_with_degree(u, u_exact, t, error_degree(u.space().degree()))
}

pub fn l2_error_with_degree(
    u: &FieldVector,
    u_exact: &dyn Fn(Point, f64) -> f64,
    t: f64,
    degree: usize,
) -> Result<f64> {
    let space = u.space().as_ref();
    let c = u.coefficients();
    let mut quad = ElementQuadrature::new(space, degree);
    let mut sum = 0.0;
    for e in 0..space.mesh().n_elements() {
        quad.reinit(e);
        let nodes = space.element_nodes(e);
        for q in 0..quad.n_points() {
            let uh: f64 = nodes.iter().zip(quad.values(q)).map(|(&n, &phi)| c[n] * phi).sum();
            let p = quad.point(q);
            let exact = check_finite(u_exact(p, t), p)?;
            sum += quad.weight(q) * (uh - exact).powi(2);
        }
    }
    Ok(sum.sqrt())
}

/// `||grad(U - u)||_{L2}` using the error-norm quadrature rule.
pub fn h1_seminorm_error(u: &FieldVector, grad_exact: &dyn Fn(Point) -> [f64; 2]) -> Result<f64> {
    let space = u.space().as_ref();
    let c = u.coefficients();
    let mut quad = ElementQuadrature::new(space, error_degree(space.degree()));
    let mut sum = 0.0;
    for e in 0..space.mesh().n_elements() {
        quad.reinit(e);
        let nodes = space.element_nodes(e);
        for q in 0..quad.n_points() {
            let mut gh = [0.0; 2];
            for (&n, g) in nodes.iter().zip(quad.grads(q)) {
                gh[0] += c[n] * g[0];
                gh[1] += c[n] * g[1];
            }
            let p = quad.point(q);
            let ge = grad_exact(p);
            check_finite(ge[0] + ge[1], p)?;
            sum += quad.weight(q) * ((gh[0] - ge[0]).powi(2) + (gh[1] - ge[1]).powi(2));
        }
    }
    Ok(sum.sqrt())
}

/// `int_Omega U dx`.
pub fn integral(u: &FieldVector) -> f64 {
    let space = u.space().as_ref();
    let c = u.coefficients();
    let mut quad = ElementQuadrature::new(space, assembly_degree(space.degree()));
    let mut sum = 0.0;
    for e in 0..space.mesh().n_elements() {
        quad.reinit(e);
        let nodes = space.element_nodes(e);
        for q in 0..quad.n_points() {
            let uh: f64 = nodes.iter().zip(quad.values(q)).map(|(&n, &phi)| c[n] * phi).sum();
            sum += quad.weight(q) * uh;
        }
    }
    sum
}
