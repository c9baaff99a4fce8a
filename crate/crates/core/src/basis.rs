//! Lagrange shape functions on the reference simplex and affine element
//! maps.

use crate::mesh::{reference_lattice, Point, SimplicialMesh};

/// Degree-`k` Lagrange basis on the reference interval or triangle, with
/// one shape function per equally spaced lattice node.
#[derive(Debug, Clone)]
pub struct ReferenceBasis {
    dim: usize,
    degree: usize,
    local_nodes: Vec<[usize; 3]>,
}

/// `prod_{l < m} (k x - l) / (l + 1)` and its derivative in `x`.
fn silvester(m: usize, k: usize, x: f64) -> (f64, f64) {
    let kx = k as f64 * x;
    let mut value = 1.0;
    let mut deriv = 0.0;
    for l in 0..m {
        let factor = (kx - l as f64) / (l + 1) as f64;
        let dfactor = k as f64 / (l + 1) as f64;
        deriv = deriv * factor + value * dfactor;
        value *= factor;
    }
    (value, deriv)
}

impl ReferenceBasis {
    pub fn new(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            local_nodes: reference_lattice(dim, degree),
        }
    }

    pub fn len(&self) -> usize {
        self.local_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.local_nodes.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Reference coordinates of local node `i`.
    pub fn node(&self, i: usize) -> Point {
        let [_, b, c] = self.local_nodes[i];
        let k = self.degree as f64;
        [b as f64 / k, c as f64 / k]
    }

    /// Values and reference gradients of every shape function at `xi`.
    pub fn eval(&self, xi: Point, values: &mut [f64], grads: &mut [[f64; 2]]) {
        let k = self.degree;
        let (l1, l2) = if self.dim == 1 { (xi[0], 0.0) } else { (xi[0], xi[1]) };
        let l0 = 1.0 - l1 - l2;
        for (i, &[a, b, c]) in self.local_nodes.iter().enumerate() {
            let (pa, da) = silvester(a, k, l0);
            let (pb, db) = silvester(b, k, l1);
            let (pc, dc) = silvester(c, k, l2);
            values[i] = pa * pb * pc;
            grads[i] = [-da * pb * pc + pa * db * pc, -da * pb * pc + pa * pb * dc];
            if self.dim == 1 {
                grads[i][1] = 0.0;
            }
        }
    }

    /// Values and reference gradients tabulated at a list of points.
    pub fn tabulate(&self, points: &[Point]) -> Tabulation {
        let n = self.len();
        let mut values = vec![0.0; points.len() * n];
        let mut grads = vec![[0.0; 2]; points.len() * n];
        for (q, &p) in points.iter().enumerate() {
            self.eval(p, &mut values[q * n..(q + 1) * n], &mut grads[q * n..(q + 1) * n]);
        }
        Tabulation { n, values, grads }
    }
}

/// Shape function values and reference gradients at a fixed point set.
#[derive(Debug, Clone)]
pub struct Tabulation {
    n: usize,
    values: Vec<f64>,
    grads: Vec<[f64; 2]>,
}

impl Tabulation {
    pub fn values(&self, q: usize) -> &[f64] {
        &self.values[q * self.n..(q + 1) * self.n]
    }

    pub fn grads(&self, q: usize) -> &[[f64; 2]] {
        &self.grads[q * self.n..(q + 1) * self.n]
    }
}

/// Affine map `x = origin + B xi` from the reference simplex onto one mesh
/// element.
#[derive(Debug, Clone, Copy)]
pub struct AffineMap {
    origin: Point,
    jacobian: [[f64; 2]; 2],
    /// Inverse transpose, used to map reference gradients.
    inv_t: [[f64; 2]; 2],
    det: f64,
}

impl AffineMap {
    pub fn for_element(mesh: &SimplicialMesh, e: usize) -> Self {
        let s = mesh.simplex(e);
        let v = mesh.vertices();
        let p0 = v[s[0]];
        if mesh.dim() == 1 {
            let len = v[s[1]][0] - p0[0];
            return Self {
                origin: p0,
                jacobian: [[len, 0.0], [0.0, 1.0]],
                inv_t: [[1.0 / len, 0.0], [0.0, 1.0]],
                det: len,
            };
        }
        let p1 = v[s[1]];
        let p2 = v[s[2]];
        let j = [[p1[0] - p0[0], p2[0] - p0[0]], [p1[1] - p0[1], p2[1] - p0[1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        // (J^{-1})^T
        let inv_t = [[j[1][1] / det, -j[1][0] / det], [-j[0][1] / det, j[0][0] / det]];
        Self {
            origin: p0,
            jacobian: j,
            inv_t,
            det,
        }
    }

    pub fn map(&self, xi: Point) -> Point {
        let j = &self.jacobian;
        [
            self.origin[0] + j[0][0] * xi[0] + j[0][1] * xi[1],
            self.origin[1] + j[1][0] * xi[0] + j[1][1] * xi[1],
        ]
    }

    /// Absolute Jacobian determinant (element measure over reference measure).
    pub fn abs_det(&self) -> f64 {
        self.det.abs()
    }

    pub fn physical_gradient(&self, g: [f64; 2]) -> [f64; 2] {
        let m = &self.inv_t;
        [m[0][0] * g[0] + m[0][1] * g[1], m[1][0] * g[0] + m[1][1] * g[1]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_property() {
        for dim in 1..=2 {
            for k in 1..=4 {
                let basis = ReferenceBasis::new(dim, k);
                let n = basis.len();
                let mut vals = vec![0.0; n];
                let mut grads = vec![[0.0; 2]; n];
                for j in 0..n {
                    basis.eval(basis.node(j), &mut vals, &mut grads);
                    for (i, &v) in vals.iter().enumerate() {
                        let expected = if i == j { 1.0 } else { 0.0 };
                        assert!((v - expected).abs() < 1e-13, "dim {dim} k {k} phi_{i}(P_{j}) = {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn partition_of_unity_and_zero_gradient_sum() {
        for dim in 1..=2 {
            for k in 1..=4 {
                let basis = ReferenceBasis::new(dim, k);
                let n = basis.len();
                let mut vals = vec![0.0; n];
                let mut grads = vec![[0.0; 2]; n];
                basis.eval([0.21, 0.37], &mut vals, &mut grads);
                assert!((vals.iter().sum::<f64>() - 1.0).abs() < 1e-13);
                let gx: f64 = grads.iter().map(|g| g[0]).sum();
                let gy: f64 = grads.iter().map(|g| g[1]).sum();
                assert!(gx.abs() < 1e-12 && gy.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let basis = ReferenceBasis::new(2, 3);
        let n = basis.len();
        let p = [0.3, 0.2];
        let eps = 1e-6;
        let mut v0 = vec![0.0; n];
        let mut vp = vec![0.0; n];
        let mut vm = vec![0.0; n];
        let mut g = vec![[0.0; 2]; n];
        let mut scratch = vec![[0.0; 2]; n];
        basis.eval(p, &mut v0, &mut g);
        for d in 0..2 {
            let mut pp = p;
            let mut pm = p;
            pp[d] += eps;
            pm[d] -= eps;
            basis.eval(pp, &mut vp, &mut scratch);
            basis.eval(pm, &mut vm, &mut scratch);
            for i in 0..n {
                let fd = (vp[i] - vm[i]) / (2.0 * eps);
                assert!((fd - g[i][d]).abs() < 1e-7, "phi_{i} d{d}: {fd} vs {}", g[i][d]);
            }
        }
    }
}
