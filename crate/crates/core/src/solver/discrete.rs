//! P1 discretization of the weighted minimal-graph operator.
//!
//! Per triangle `T` with gradient `g` the energy density is
//! `area * omega_T * |g|^2 / (W + 1)` with `W = sqrt(1 + rho_T^2 |g|^2)`, whose
//! first variation is the weak form `int omega <grad u, grad v> / W`.
//! `rho_T` and `omega_T` are evaluated at the centroid.

use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::pattern::SparsityPattern;
use nalgebra_sparse::CscMatrix;
use rayon::prelude::*;

use crate::geometry::Point;
use crate::mesh::TriMesh;
use crate::metric::MetricModel;

const FIXED: usize = usize::MAX;

/// Geometry and coefficients of one mesh, with a fixed Jacobian pattern over
/// the interior vertices.
pub(crate) struct Discretization<'a> {
    pub mesh: &'a TriMesh,
    grads: Vec<[Point; 3]>,
    area: Vec<f64>,
    rho2: Vec<f64>,
    omega: Vec<f64>,
    /// Free-vertex index, or `FIXED` for boundary vertices.
    pub free: Vec<usize>,
    pub free_vertices: Vec<usize>,
    /// For each triangle, the CSC slot of each local pair (row i, col j).
    slots: Vec<[usize; 9]>,
    pattern: SparsityPattern,
    nnz: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Residual,
    Jacobian,
    Linear,
}

struct LocalTerms {
    energy: f64,
    residual: [f64; 3],
    jacobian: [f64; 9],
}

impl<'a> Discretization<'a> {
    pub fn new(m: &MetricModel, mesh: &'a TriMesh) -> Self {
        let nt = mesh.triangles().len();
        let mut grads = Vec::with_capacity(nt);
        let mut area = Vec::with_capacity(nt);
        let mut rho2 = Vec::with_capacity(nt);
        let mut omega = Vec::with_capacity(nt);
        for t in 0..nt {
            grads.push(mesh.shape_gradients(t));
            area.push(mesh.triangle_area(t));
            let c = mesh.centroid(t);
            let r = m.rho(c.x);
            rho2.push(r * r);
            omega.push(m.area_weight_unchecked(c));
        }
        let mut free = vec![FIXED; mesh.n_vertices()];
        let mut free_vertices = Vec::new();
        for v in 0..mesh.n_vertices() {
            if !mesh.is_boundary(v) {
                free[v] = free_vertices.len();
                free_vertices.push(v);
            }
        }
        let n = free_vertices.len();
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        for tri in mesh.triangles() {
            for &a in tri {
                for &b in tri {
                    if free[a] != FIXED && free[b] != FIXED {
                        cols[free[b]].push(free[a]);
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut rows = Vec::new();
        offsets.push(0);
        for c in &mut cols {
            c.sort_unstable();
            c.dedup();
            rows.extend_from_slice(c);
            offsets.push(rows.len());
        }
        let nnz = rows.len();
        let slot = |row: usize, col: usize| -> usize {
            let r = &rows[offsets[col]..offsets[col + 1]];
            offsets[col] + r.binary_search(&row).expect("pattern contains every local pair")
        };
        let slots = mesh
            .triangles()
            .iter()
            .map(|tri| {
                let mut s = [FIXED; 9];
                for i in 0..3 {
                    for j in 0..3 {
                        let (a, b) = (free[tri[i]], free[tri[j]]);
                        if a != FIXED && b != FIXED {
                            s[3 * i + j] = slot(a, b);
                        }
                    }
                }
                s
            })
            .collect();
        let pattern = SparsityPattern::try_from_offsets_and_indices(n, n, offsets, rows)
            .expect("pattern is sorted and in bounds");
        Self { mesh, grads, area, rho2, omega, free, free_vertices, slots, pattern, nnz }
    }

    pub fn n_free(&self) -> usize {
        self.free_vertices.len()
    }

    /// Loads `int s phi_a` by the edge-midpoint rule, over free vertices.
    pub fn load(&self, source: &(dyn Fn(Point) -> f64 + Sync)) -> Vec<f64> {
        let local: Vec<[f64; 3]> = (0..self.area.len())
            .into_par_iter()
            .with_min_len(256)
            .map(|t| {
                let p = self.mesh.corner(t);
                let s = [
                    source(p[1].lerp(p[2], 0.5)),
                    source(p[2].lerp(p[0], 0.5)),
                    source(p[0].lerp(p[1], 0.5)),
                ];
                let w = self.area[t] / 6.0;
                // vertex k touches the midpoints of the two edges leaving it
                [w * (s[1] + s[2]), w * (s[2] + s[0]), w * (s[0] + s[1])]
            })
            .collect();
        let mut out = vec![0.0; self.n_free()];
        for (t, l) in local.iter().enumerate() {
            for (k, &v) in self.mesh.triangles()[t].iter().enumerate() {
                if self.free[v] != FIXED {
                    out[self.free[v]] += l[k];
                }
            }
        }
        out
    }

    pub fn gradient(&self, u: &[f64], t: usize) -> Point {
        let [a, b, c] = self.mesh.triangles()[t];
        let g = &self.grads[t];
        g[0] * u[a] + g[1] * u[b] + g[2] * u[c]
    }

    fn local(&self, u: &[f64], t: usize, mode: Mode) -> LocalTerms {
        let g = self.gradient(u, t);
        let gg = g.dot(g);
        let w = if mode == Mode::Linear { 1.0 } else { (1.0 + self.rho2[t] * gg).sqrt() };
        let aw = self.area[t] * self.omega[t];
        let energy = aw * gg / (w + 1.0);
        let phi = &self.grads[t];
        let proj = [g.dot(phi[0]), g.dot(phi[1]), g.dot(phi[2])];
        let residual = [aw * proj[0] / w, aw * proj[1] / w, aw * proj[2] / w];
        let mut jacobian = [0.0; 9];
        if mode != Mode::Residual {
            let s = if mode == Mode::Linear { 0.0 } else { self.rho2[t] / (w * w) };
            for i in 0..3 {
                for j in 0..3 {
                    jacobian[3 * i + j] = aw / w * (phi[i].dot(phi[j]) - s * proj[i] * proj[j]);
                }
            }
        }
        LocalTerms { energy, residual, jacobian }
    }

    fn locals(&self, u: &[f64], mode: Mode) -> Vec<LocalTerms> {
        (0..self.area.len())
            .into_par_iter()
            .with_min_len(256)
            .map(|t| self.local(u, t, mode))
            .collect()
    }

    /// Discrete energy minus the load work.
    pub fn energy(&self, u: &[f64], load: &[f64]) -> f64 {
        let locals = self.locals(u, Mode::Residual);
        let mut e: f64 = locals.iter().map(|l| l.energy).sum();
        for (k, &v) in self.free_vertices.iter().enumerate() {
            e -= load[k] * u[v];
        }
        e
    }

    /// Residual over the free vertices.
    pub fn residual(&self, u: &[f64], load: &[f64]) -> Vec<f64> {
        let locals = self.locals(u, Mode::Residual);
        self.scatter_residual(&locals, load)
    }

    fn scatter_residual(&self, locals: &[LocalTerms], load: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = load.iter().map(|l| -l).collect();
        for (t, l) in locals.iter().enumerate() {
            for (k, &v) in self.mesh.triangles()[t].iter().enumerate() {
                if self.free[v] != FIXED {
                    r[self.free[v]] += l.residual[k];
                }
            }
        }
        r
    }

    /// Residual and Jacobian values in the fixed pattern.
    pub fn residual_and_jacobian(&self, u: &[f64], load: &[f64]) -> (Vec<f64>, Vec<f64>) {
        self.assemble(u, load, Mode::Jacobian)
    }

    /// The same with `W` frozen at 1: the weighted Laplacian used for
    /// harmonic extension.
    pub fn linear_residual_and_jacobian(&self, u: &[f64], load: &[f64]) -> (Vec<f64>, Vec<f64>) {
        self.assemble(u, load, Mode::Linear)
    }

    fn assemble(&self, u: &[f64], load: &[f64], mode: Mode) -> (Vec<f64>, Vec<f64>) {
        let locals = self.locals(u, mode);
        let r = self.scatter_residual(&locals, load);
        let mut vals = vec![0.0; self.nnz];
        for (t, l) in locals.iter().enumerate() {
            for (k, &s) in self.slots[t].iter().enumerate() {
                if s != FIXED {
                    vals[s] += l.jacobian[k];
                }
            }
        }
        (r, vals)
    }

    pub fn matrix(&self, values: Vec<f64>) -> CscMatrix<f64> {
        CscMatrix::try_from_pattern_and_values(self.pattern.clone(), values).expect("values match the pattern")
    }

    /// Consistent nodal reactions at every vertex: the residual without the
    /// Dirichlet restriction. Zero at free vertices up to the solve tolerance.
    pub fn reactions(&self, u: &[f64]) -> Vec<f64> {
        let locals = self.locals(u, Mode::Residual);
        let mut r = vec![0.0; self.mesh.n_vertices()];
        for (t, l) in locals.iter().enumerate() {
            for (k, &v) in self.mesh.triangles()[t].iter().enumerate() {
                r[v] += l.residual[k];
            }
        }
        r
    }
}

/// A Cholesky factorization that is reused while the pattern is fixed.
pub(crate) struct Factor {
    chol: Option<CscCholesky<f64>>,
}

impl Factor {
    pub fn new() -> Self {
        Self { chol: None }
    }

    /// Solves `J x = b`; `None` when `J` is not numerically positive definite.
    pub fn solve(&mut self, d: &Discretization, values: Vec<f64>, b: &[f64]) -> Option<Vec<f64>> {
        if b.is_empty() {
            return Some(Vec::new());
        }
        match &mut self.chol {
            Some(c) => c.refactor(&values).ok()?,
            None => self.chol = Some(CscCholesky::factor(&d.matrix(values)).ok()?),
        }
        let chol = self.chol.as_ref()?;
        let x = chol.solve(&nalgebra::DVector::from_column_slice(b));
        let out: Vec<f64> = x.column(0).iter().copied().collect();
        out.iter().all(|v| v.is_finite()).then_some(out)
    }
}
