//! Solvers for the symmetric positive definite systems of each time step.

use crate::error::{Error, Result};
use crate::sparse::SparseSymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    /// Jacobi-preconditioned conjugate gradients.
    ConjugateGradient,
    /// Banded Cholesky factorization; meant for 1D node orderings where the
    /// bandwidth equals the polynomial degree.
    DirectBanded,
}

impl std::str::FromStr for SolverMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cg" | "conjugate-gradient" => Ok(Self::ConjugateGradient),
            "banded" | "direct-banded" => Ok(Self::DirectBanded),
            other => Err(Error::Config(format!("unknown solver method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Bound on `||A x - b|| / ||b||`.
    pub tolerance: f64,
    /// Iteration cap; `None` means `10 n`.
    pub max_iterations: Option<usize>,
    pub method: SolverMethod,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: None,
            method: SolverMethod::ConjugateGradient,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!(
                "solver tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `||A x - b|| / ||b||` recomputed from the returned `x`.
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual(a: &SparseSymMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let mut ax = vec![0.0; b.len()];
    a.mul_vec_into(x, &mut ax);
    b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect()
}

/// Solves `A x = b` for symmetric positive definite `A`.
pub fn solve_spd(a: &SparseSymMatrix, b: &[f64], config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.len(),
        });
    }
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(Solution {
            x: vec![0.0; b.len()],
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    match config.method {
        SolverMethod::ConjugateGradient => conjugate_gradient(a, b, b_norm, config),
        SolverMethod::DirectBanded => {
            let x = BandedCholesky::factor(a)?.solve(b);
            let relative_residual = norm(&residual(a, &x, b)) / b_norm;
            Ok(Solution {
                x,
                iterations: 1,
                relative_residual,
            })
        }
    }
}

fn conjugate_gradient(a: &SparseSymMatrix, b: &[f64], b_norm: f64, config: &SolverConfig) -> Result<Solution> {
    let n = a.dim();
    let max_iterations = config.max_iterations.unwrap_or(10 * n.max(1));
    let target = config.tolerance * b_norm;
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if d > 0.0 {
                Ok(1.0 / d)
            } else {
                Err(Error::NotSpd {
                    iteration: 0,
                    curvature: a.get(i, i),
                })
            }
        })
        .collect::<Result<_>>()?;

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut restarts = 0;

    for iteration in 1..=max_iterations {
        a.mul_vec_into(&p, &mut ap);
        let curvature = dot(&p, &ap);
        if !(curvature > 0.0) {
            return Err(Error::NotSpd { iteration, curvature });
        }
        let step = rz / curvature;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        if norm(&r) <= target {
            // The recurrence residual drifts from the true one; confirm it.
            let true_r = residual(a, &x, b);
            let true_norm = norm(&true_r);
            if true_norm <= target {
                return Ok(Solution {
                    x,
                    iterations: iteration,
                    relative_residual: true_norm / b_norm,
                });
            }
            restarts += 1;
            if restarts > 5 {
                return Err(Error::NoConvergence {
                    iterations: iteration,
                    residual: true_norm / b_norm,
                });
            }
            r = true_r;
            z = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
            continue;
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        residual: norm(&residual(a, &x, b)) / b_norm,
    })
}

/// Cholesky factor `A = L L^T` stored by rows within the band.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    /// `l[i * (bw + 1) + (j + bw - i)]` holds `L_ij` for `i - bw <= j <= i`.
    l: Vec<f64>,
}

impl BandedCholesky {
    pub fn factor(a: &SparseSymMatrix) -> Result<Self> {
        let n = a.dim();
        let bw = a.bandwidth();
        let width = bw + 1;
        let mut l = vec![0.0; n * width];
        let at = |i: usize, j: usize| i * width + (j + bw - i);
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    l[at(i, j)] = v;
                }
            }
        }
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let jlo = j.saturating_sub(bw).max(lo);
                let mut s = l[at(i, j)];
                for k in jlo..j {
                    s -= l[at(i, k)] * l[at(j, k)];
                }
                if j == i {
                    if !(s > 0.0) {
                        return Err(Error::NotSpd {
                            iteration: i,
                            curvature: s,
                        });
                    }
                    l[at(i, i)] = s.sqrt();
                } else {
                    l[at(i, j)] = s / l[at(j, j)];
                }
            }
        }
        Ok(Self { n, bw, l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let width = bw + 1;
        let at = |i: usize, j: usize| i * width + (j + bw - i);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            let lo = i.saturating_sub(bw);
            for (k, yk) in y.iter().enumerate().take(i).skip(lo) {
                s -= self.l[at(i, k)] * yk;
            }
            y[i] = s / self.l[at(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for (k, yk) in y.iter().enumerate().take((i + bw + 1).min(n)).skip(i + 1) {
                s -= self.l[at(k, i)] * yk;
            }
            y[i] = s / self.l[at(i, i)];
        }
        y
    }
}
