//! Uniform simplicial meshes of an interval or the unit square, and the
//! degree-k Lagrange node layout built on top of them.
//!
//! Both meshes are structured, so every vertex and every Lagrange node
//! carries an integer lattice coordinate. Node merging across shared faces
//! and boundary detection work on those integers, never on floating-point
//! coordinates.

use std::sync::Arc;

use crate::error::{Error, Result};

/// A point of the domain. One-dimensional meshes leave the second
/// coordinate at zero.
pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialMesh {
    dim: usize,
    /// Number of subdivisions per side.
    divisions: usize,
    /// Physical extent `[lo, hi]` per axis.
    bounds: [f64; 2],
    vertices: Vec<Point>,
    vertex_lattice: Vec<[usize; 2]>,
    /// Flat connectivity, `dim + 1` vertex indices per simplex.
    connectivity: Vec<usize>,
    boundary_vertex_flags: Vec<bool>,
}

/// Largest element diameter of a mesh.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MeshSize(pub f64);

impl MeshSize {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Uniform partition of `[a, b]` into `n` equal intervals.
pub fn uniform_interval_mesh(a: f64, b: f64, n: usize) -> Result<SimplicialMesh> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidRange { a, b });
    }
    if n == 0 {
        return Err(Error::InvalidCount("element count"));
    }
    let len = b - a;
    let vertices = (0..=n)
        .map(|i| {
            let x = if i == n { b } else { a + len * i as f64 / n as f64 };
            [x, 0.0]
        })
        .collect();
    let vertex_lattice = (0..=n).map(|i| [i, 0]).collect();
    let connectivity = (0..n).flat_map(|e| [e, e + 1]).collect();
    let boundary_vertex_flags = (0..=n).map(|i| i == 0 || i == n).collect();
    Ok(SimplicialMesh {
        dim: 1,
        divisions: n,
        bounds: [a, b],
        vertices,
        vertex_lattice,
        connectivity,
        boundary_vertex_flags,
    })
}

/// Unit square split into `n x n` cells, each cut along the diagonal from
/// its lower-left to its upper-right corner.
pub fn uniform_square_mesh(n: usize) -> Result<SimplicialMesh> {
    if n == 0 {
        return Err(Error::InvalidCount("subdivisions per side"));
    }
    let coord = |i: usize| if i == n { 1.0 } else { i as f64 / n as f64 };
    let stride = n + 1;
    let mut vertices = Vec::with_capacity(stride * stride);
    let mut vertex_lattice = Vec::with_capacity(stride * stride);
    let mut boundary_vertex_flags = Vec::with_capacity(stride * stride);
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([coord(i), coord(j)]);
            vertex_lattice.push([i, j]);
            boundary_vertex_flags.push(i == 0 || j == 0 || i == n || j == n);
        }
    }
    let mut connectivity = Vec::with_capacity(6 * n * n);
    for j in 0..n {
        for i in 0..n {
            let v00 = j * stride + i;
            let v10 = v00 + 1;
            let v01 = v00 + stride;
            let v11 = v01 + 1;
            connectivity.extend_from_slice(&[v00, v10, v11]);
            connectivity.extend_from_slice(&[v00, v11, v01]);
        }
    }
    Ok(SimplicialMesh {
        dim: 2,
        divisions: n,
        bounds: [0.0, 1.0],
        vertices,
        vertex_lattice,
        connectivity,
        boundary_vertex_flags,
    })
}

impl SimplicialMesh {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn divisions(&self) -> usize {
        self.divisions
    }

    pub fn bounds(&self) -> [f64; 2] {
        self.bounds
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_lattice(&self) -> &[[usize; 2]] {
        &self.vertex_lattice
    }

    pub fn boundary_vertex_flags(&self) -> &[bool] {
        &self.boundary_vertex_flags
    }

    pub fn vertices_per_simplex(&self) -> usize {
        self.dim + 1
    }

    pub fn n_elements(&self) -> usize {
        self.connectivity.len() / self.vertices_per_simplex()
    }

    pub fn simplex(&self, e: usize) -> &[usize] {
        let nv = self.vertices_per_simplex();
        &self.connectivity[e * nv..(e + 1) * nv]
    }

    pub fn simplexes(&self) -> impl Iterator<Item = &[usize]> {
        self.connectivity.chunks_exact(self.vertices_per_simplex())
    }

    /// Length (1D) or area (2D) of one simplex.
    pub fn measure(&self, e: usize) -> f64 {
        let s = self.simplex(e);
        let p0 = self.vertices[s[0]];
        let p1 = self.vertices[s[1]];
        if self.dim == 1 {
            (p1[0] - p0[0]).abs()
        } else {
            let p2 = self.vertices[s[2]];
            0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])).abs()
        }
    }

    pub fn diameter(&self, e: usize) -> f64 {
        let s = self.simplex(e);
        let mut d: f64 = 0.0;
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                let pa = self.vertices[a];
                let pb = self.vertices[b];
                d = d.max(((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2)).sqrt());
            }
        }
        d
    }

    /// `h = max diam(T_i)`.
    pub fn mesh_size(&self) -> MeshSize {
        MeshSize((0..self.n_elements()).map(|e| self.diameter(e)).fold(0.0, f64::max))
    }

    /// Measure of the whole domain.
    pub fn domain_measure(&self) -> f64 {
        let len = self.bounds[1] - self.bounds[0];
        if self.dim == 1 {
            len
        } else {
            len * len
        }
    }
}

/// The continuous piecewise polynomial space of degree `k` on a mesh,
/// described by its Lagrange nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeSpace {
    mesh: Arc<SimplicialMesh>,
    degree: usize,
    nodes: Vec<Point>,
    node_lattice: Vec<[usize; 2]>,
    boundary_node_flags: Vec<bool>,
    free_node_indices: Vec<usize>,
    /// Position of each node in `free_node_indices`, if free.
    free_position: Vec<Option<usize>>,
    /// Barycentric integer labels of the local nodes, shared by every element.
    local_nodes: Vec<[usize; 3]>,
    /// Flat element-to-node map, `local_nodes.len()` entries per element.
    element_nodes: Vec<usize>,
}

/// Builds the degree-`k` Lagrange space over `mesh`.
pub fn build_lagrange_space(mesh: impl Into<Arc<SimplicialMesh>>, k: usize) -> Result<LagrangeSpace> {
    LagrangeSpace::new(mesh, k)
}

/// Barycentric labels `(a, b, c)` with `a + b + c = k` of the equally spaced
/// nodes on the reference simplex. In 1D `c` is always zero.
pub(crate) fn reference_lattice(dim: usize, k: usize) -> Vec<[usize; 3]> {
    match dim {
        1 => (0..=k).map(|i| [k - i, i, 0]).collect(),
        _ => {
            let mut out = Vec::with_capacity((k + 1) * (k + 2) / 2);
            for j in 0..=k {
                for i in 0..=k - j {
                    out.push([k - i - j, i, j]);
                }
            }
            out
        }
    }
}

impl LagrangeSpace {
    pub fn new(mesh: impl Into<Arc<SimplicialMesh>>, k: usize) -> Result<Self> {
        let mesh = mesh.into();
        if k == 0 {
            return Err(Error::InvalidDegree(k));
        }
        let dim = mesh.dim();
        let n = mesh.divisions();
        let extent = k * n;
        let stride = extent + 1;
        let [lo, hi] = mesh.bounds();
        let coord = |i: usize| {
            if i == extent {
                hi
            } else {
                lo + (hi - lo) * i as f64 / extent as f64
            }
        };

        let (nodes, node_lattice): (Vec<Point>, Vec<[usize; 2]>) = if dim == 1 {
            (0..=extent).map(|i| ([coord(i), 0.0], [i, 0])).unzip()
        } else {
            (0..stride * stride)
                .map(|idx| {
                    let (i, j) = (idx % stride, idx / stride);
                    ([coord(i), coord(j)], [i, j])
                })
                .unzip()
        };
        let boundary_node_flags: Vec<bool> = node_lattice
            .iter()
            .map(|&[i, j]| i == 0 || i == extent || (dim == 2 && (j == 0 || j == extent)))
            .collect();

        let local_nodes = reference_lattice(dim, k);
        let lattice = mesh.vertex_lattice();
        let mut element_nodes = Vec::with_capacity(mesh.n_elements() * local_nodes.len());
        for simplex in mesh.simplexes() {
            for bary in &local_nodes {
                let mut ij = [0usize; 2];
                for (v, &weight) in simplex.iter().zip(bary) {
                    ij[0] += weight * lattice[*v][0];
                    ij[1] += weight * lattice[*v][1];
                }
                element_nodes.push(if dim == 1 { ij[0] } else { ij[1] * stride + ij[0] });
            }
        }

        let free_node_indices: Vec<usize> = (0..nodes.len()).filter(|&i| !boundary_node_flags[i]).collect();
        let mut free_position = vec![None; nodes.len()];
        for (pos, &i) in free_node_indices.iter().enumerate() {
            free_position[i] = Some(pos);
        }

        Ok(Self {
            mesh,
            degree: k,
            nodes,
            node_lattice,
            boundary_node_flags,
            free_node_indices,
            free_position,
            local_nodes,
            element_nodes,
        })
    }

    pub fn mesh(&self) -> &SimplicialMesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<SimplicialMesh> {
        &self.mesh
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node_lattice(&self) -> &[[usize; 2]] {
        &self.node_lattice
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_boundary_node(&self, i: usize) -> bool {
        self.boundary_node_flags[i]
    }

    pub fn free_node_indices(&self) -> &[usize] {
        &self.free_node_indices
    }

    pub fn n_free(&self) -> usize {
        self.free_node_indices.len()
    }

    pub fn free_position(&self, node: usize) -> Option<usize> {
        self.free_position[node]
    }

    pub fn local_nodes(&self) -> &[[usize; 3]] {
        &self.local_nodes
    }

    pub fn nodes_per_element(&self) -> usize {
        self.local_nodes.len()
    }

    pub fn element_nodes(&self, e: usize) -> &[usize] {
        let nl = self.nodes_per_element();
        &self.element_nodes[e * nl..(e + 1) * nl]
    }

    /// Scatters a free-node vector into a full nodal vector with zero
    /// boundary entries.
    pub fn expand_free(&self, free: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.n_nodes()];
        for (&i, &v) in self.free_node_indices.iter().zip(free) {
            full[i] = v;
        }
        full
    }

    pub fn restrict_free(&self, full: &[f64]) -> Vec<f64> {
        self.free_node_indices.iter().map(|&i| full[i]).collect()
    }
}
