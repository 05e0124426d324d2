//! Dirichlet solves of the soliton graph equation and the cap sequence of
//! Jenkins-Serrin problems.
//!
//! Infinite data is never represented: for cap level `n` the A-edges carry
//! `n`, the B-edges `-n` and C-data is clamped to `[-n, n]`.

mod discrete;

use std::sync::Arc;

use crate::domain::{EdgeKind, ValidDomain};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mesh::{triangulate_with, MeshOptions, TriMesh, VertexRole};
use crate::metric::MetricModel;

pub(crate) use discrete::Discretization;
use discrete::Factor;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Target for the max-norm of the algebraic residual.
    pub tol: f64,
    pub max_newton: usize,
    /// Sufficient-decrease constant of the energy line search.
    pub armijo: f64,
    pub max_backtracks: usize,
    /// The first continuation step is `2^-levels` of the full data.
    pub continuation_levels: u32,
    /// Number of step halvings allowed before continuation gives up.
    pub max_bisections: u32,
    /// Energy changes below `roundoff * |E|` are treated as roundoff.
    pub roundoff: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_newton: 60,
            armijo: 1e-4,
            max_backtracks: 50,
            continuation_levels: 6,
            max_bisections: 24,
            roundoff: 1e-12,
        }
    }
}

/// A piecewise-linear solution on a mesh.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub mesh: Arc<TriMesh>,
    pub u: Vec<f64>,
    /// Cap level, for fields of a Jenkins-Serrin run.
    pub cap: Option<f64>,
    pub residual_norm: f64,
    pub newton_iters: usize,
    /// Constant subtracted after the solve (C-empty normalization).
    pub shift: f64,
}

impl SolutionField {
    pub fn value_at(&self, p: Point) -> Option<f64> {
        self.mesh.interpolate(&self.u, p)
    }

    pub fn gradient(&self, tri: usize) -> Point {
        self.mesh.gradient(&self.u, tri)
    }

    /// `W = sqrt(1 + rho^2 |grad u|^2)` per triangle, `rho` at the centroid.
    pub fn w(&self, m: &MetricModel) -> Vec<f64> {
        (0..self.mesh.triangles().len())
            .map(|t| {
                let g = self.gradient(t);
                let r = m.rho(self.mesh.centroid(t).x);
                (1.0 + r * r * g.dot(g)).sqrt()
            })
            .collect()
    }

    /// Largest gradient norm over triangles whose vertices are all interior.
    pub fn max_interior_gradient(&self) -> f64 {
        let mesh = &self.mesh;
        (0..mesh.triangles().len())
            .filter(|&t| mesh.triangles()[t].iter().all(|&v| !mesh.is_boundary(v)))
            .map(|t| self.gradient(t).norm())
            .fold(0.0, f64::max)
    }

    /// Consistent nodal reactions (the unconstrained residual) per vertex.
    pub fn reactions(&self, m: &MetricModel) -> Vec<f64> {
        Discretization::new(m, &self.mesh).reactions(&self.u)
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

struct Stall {
    reason: String,
    iterations: usize,
    residual: f64,
}

/// A mesh-bound solver that keeps its factorization pattern across solves.
struct Engine<'a> {
    disc: Discretization<'a>,
    factor: Factor,
    settings: SolverSettings,
    iterations: usize,
}

impl<'a> Engine<'a> {
    fn new(m: &MetricModel, mesh: &'a TriMesh, settings: SolverSettings) -> Self {
        Self { disc: Discretization::new(m, mesh), factor: Factor::new(), settings, iterations: 0 }
    }

    fn set_boundary(&self, u: &mut [f64], boundary: &[f64]) {
        for (v, val) in u.iter_mut().enumerate() {
            if self.disc.free[v] == usize::MAX {
                *val = boundary[v];
            }
        }
    }

    fn add_free(&self, u: &mut [f64], delta: &[f64], s: f64) {
        for (k, &v) in self.disc.free_vertices.iter().enumerate() {
            u[v] += s * delta[k];
        }
    }

    /// Weighted-harmonic extension of the boundary values.
    fn harmonic(&mut self, boundary: &[f64], load: &[f64]) -> std::result::Result<Vec<f64>, Stall> {
        let mut u = vec![0.0; boundary.len()];
        self.set_boundary(&mut u, boundary);
        let (r, vals) = self.disc.linear_residual_and_jacobian(&u, load);
        let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
        let delta = self.factor.solve(&self.disc, vals, &rhs).ok_or_else(|| Stall {
            reason: "harmonic extension: singular stiffness".into(),
            iterations: 0,
            residual: inf_norm(&r),
        })?;
        self.add_free(&mut u, &delta, 1.0);
        Ok(u)
    }

    /// Damped Newton on the convex energy, boundary values already in `u`.
    fn newton(&mut self, u: &mut [f64], load: &[f64]) -> std::result::Result<f64, Stall> {
        let s = self.settings;
        let mut rn = f64::INFINITY;
        for it in 0..=s.max_newton {
            let (r, vals) = self.disc.residual_and_jacobian(u, load);
            rn = inf_norm(&r);
            if !rn.is_finite() {
                return Err(Stall { reason: "non-finite residual".into(), iterations: it, residual: rn });
            }
            if rn <= s.tol {
                return Ok(rn);
            }
            if it == s.max_newton {
                break;
            }
            self.iterations += 1;
            let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
            let delta = self.factor.solve(&self.disc, vals, &rhs).ok_or_else(|| Stall {
                reason: "Jacobian factorization failed".into(),
                iterations: it,
                residual: rn,
            })?;
            let slope: f64 = r.iter().zip(&delta).map(|(a, b)| a * b).sum();
            let e0 = self.disc.energy(u, load);
            let mut alpha = 1.0;
            let mut accepted = false;
            let mut trial = u.to_vec();
            for _ in 0..=s.max_backtracks {
                trial.copy_from_slice(u);
                self.add_free(&mut trial, &delta, alpha);
                let e1 = self.disc.energy(&trial, load);
                if e1 <= e0 + s.armijo * alpha * slope {
                    accepted = true;
                    break;
                }
                // near convergence the energy decrease drowns in roundoff
                if (e1 - e0).abs() <= s.roundoff * e0.abs().max(f64::MIN_POSITIVE)
                    && inf_norm(&self.disc.residual(&trial, load)) < rn
                {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                return Err(Stall { reason: "line search failed".into(), iterations: it + 1, residual: rn });
            }
            u.copy_from_slice(&trial);
        }
        Err(Stall { reason: "Newton iteration limit reached".into(), iterations: s.max_newton, residual: rn })
    }

    /// Follows `b(s) = b0 + s (b1 - b0)`, `load(s) = l0 + s (l1 - l0)` from a
    /// solution `u0` at `s = 0` to `s = 1`, doubling successful steps.
    fn continuation(
        &mut self,
        u0: Vec<f64>,
        b0: &[f64],
        b1: &[f64],
        l0: &[f64],
        l1: &[f64],
    ) -> std::result::Result<(Vec<f64>, f64), (Stall, Vec<f64>)> {
        let s_cfg = self.settings;
        let mut u = u0;
        let mut s = 0.0f64;
        let mut step = 0.5f64.powi(s_cfg.continuation_levels as i32);
        let min_step = step * 0.5f64.powi(s_cfg.max_bisections as i32);
        let lerp = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect() };
        loop {
            let target = (s + step).min(1.0);
            let b = lerp(b0, b1, target);
            let load = lerp(l0, l1, target);
            let mut trial = u.clone();
            self.set_boundary(&mut trial, &b);
            match self.newton(&mut trial, &load) {
                Ok(rn) => {
                    u = trial;
                    s = target;
                    if s >= 1.0 {
                        return Ok((u, rn));
                    }
                    step *= 2.0;
                }
                Err(stall) => {
                    step *= 0.5;
                    if step < min_step {
                        let reason = format!("continuation stalled at s = {s}: {}", stall.reason);
                        return Err((Stall { reason, ..stall }, trial));
                    }
                }
            }
        }
    }

    /// Cold solve: harmonic start, continuation from zero data on failure.
    fn solve_cold(&mut self, boundary: &[f64], load: &[f64]) -> Result<(Vec<f64>, f64)> {
        let start = self.harmonic(boundary, load).map_err(|s| self.error(s, vec![0.0; boundary.len()]))?;
        self.solve_from(start, boundary, load, None)
    }

    /// Newton from `start`; on failure, continuation from `previous`
    /// (a solution with its own boundary values and load) or from zero.
    fn solve_from(
        &mut self,
        start: Vec<f64>,
        boundary: &[f64],
        load: &[f64],
        previous: Option<(&[f64], &[f64])>,
    ) -> Result<(Vec<f64>, f64)> {
        let mut u = start;
        self.set_boundary(&mut u, boundary);
        if let Ok(rn) = self.newton(&mut u, load) {
            return Ok((u, rn));
        }
        let zero = vec![0.0; boundary.len()];
        let zero_load = vec![0.0; load.len()];
        let (u0, b0, l0) = match previous {
            Some((prev, prev_load)) => (prev.to_vec(), prev, prev_load),
            None => (zero.clone(), &zero[..], &zero_load[..]),
        };
        self.continuation(u0, b0, boundary, l0, load).map_err(|(s, last)| self.error(s, last))
    }

    fn error(&self, s: Stall, last_iterate: Vec<f64>) -> Error {
        Error::Solver { reason: s.reason, iterations: self.iterations.max(s.iterations), residual: s.residual, last_iterate }
    }
}

fn check_boundary(mesh: &TriMesh, boundary: &[f64]) -> Result<()> {
    if boundary.len() != mesh.n_vertices() {
        return Err(Error::Contract(format!(
            "{} boundary values for a mesh with {} vertices",
            boundary.len(),
            mesh.n_vertices()
        )));
    }
    if let Some(v) = (0..mesh.n_vertices()).find(|&v| mesh.is_boundary(v) && !boundary[v].is_finite()) {
        return Err(Error::Contract(format!("boundary value at vertex {v} is not finite")));
    }
    Ok(())
}

/// Source term `s` in `-div(omega grad u / W) = s`.
pub type Source<'s> = &'s (dyn Fn(Point) -> f64 + Sync);

/// Solves the Dirichlet problem with the values of `boundary` at boundary
/// vertices (interior entries are ignored).
pub fn solve_dirichlet(m: &MetricModel, mesh: &Arc<TriMesh>, boundary: &[f64], source: Option<Source>) -> Result<SolutionField> {
    solve_dirichlet_with(m, mesh, boundary, source, None, &SolverSettings::default())
}

/// As [`solve_dirichlet`], optionally starting Newton from `initial`.
pub fn solve_dirichlet_with(
    m: &MetricModel,
    mesh: &Arc<TriMesh>,
    boundary: &[f64],
    source: Option<Source>,
    initial: Option<&[f64]>,
    settings: &SolverSettings,
) -> Result<SolutionField> {
    m.require_flat()?;
    check_boundary(mesh, boundary)?;
    if let Some(init) = initial {
        if init.len() != mesh.n_vertices() || init.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("initial guess must be finite with one value per vertex".into()));
        }
    }
    let mut engine = Engine::new(m, mesh, *settings);
    let load = match source {
        Some(s) => engine.disc.load(s),
        None => vec![0.0; engine.disc.n_free()],
    };
    let (u, rn) = match initial {
        Some(init) => engine.solve_from(init.to_vec(), boundary, &load, None)?,
        None => engine.solve_cold(boundary, &load)?,
    };
    Ok(SolutionField { mesh: mesh.clone(), u, cap: None, residual_norm: rn, newton_iters: engine.iterations, shift: 0.0 })
}

/// Strictly increasing positive cap levels.
#[derive(Debug, Clone, PartialEq)]
pub struct CapSchedule(Vec<f64>);

impl CapSchedule {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Contract("cap schedule is empty".into()));
        }
        if levels.iter().any(|&n| !(n > 0.0) || !n.is_finite()) {
            return Err(Error::Contract("cap levels must be positive and finite".into()));
        }
        if levels.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Contract("cap levels must be strictly increasing".into()));
        }
        Ok(Self(levels))
    }

    /// `start, 2 start, 4 start, ...` with `count` levels.
    pub fn doubling(start: f64, count: usize) -> Result<Self> {
        Self::new((0..count).map(|k| start * 2f64.powi(k as i32)).collect())
    }

    pub fn levels(&self) -> &[f64] {
        &self.0
    }
}

/// Boundary values for cap `n`: `n` on A, `-n` on B, C-data clamped to
/// `[-n, n]`. A domain vertex takes the C-data of an adjacent C-edge (the
/// mean if both are C) and otherwise the mean of the two caps.
pub fn cap_boundary_values(d: &ValidDomain, mesh: &TriMesh, n: f64) -> Vec<f64> {
    let value = |edge: usize, p: Point| -> f64 {
        let e = &d.edges()[edge];
        match e.kind {
            EdgeKind::A => n,
            EdgeKind::B => -n,
            EdgeKind::C => e.data_at(p).unwrap_or(0.0).clamp(-n, n),
        }
    };
    let is_c = |edge: usize| d.edges()[edge].kind == EdgeKind::C;
    mesh.vertices()
        .iter()
        .enumerate()
        .map(|(v, &p)| match mesh.role(v) {
            VertexRole::Interior => 0.0,
            VertexRole::Edge(e) => value(e, p),
            VertexRole::Corner { incoming, outgoing } => match (is_c(incoming), is_c(outgoing)) {
                (true, true) => 0.5 * (value(incoming, p) + value(outgoing, p)),
                (true, false) => value(incoming, p),
                (false, true) => value(outgoing, p),
                (false, false) => 0.5 * (value(incoming, p) + value(outgoing, p)),
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct JsOptions {
    pub mesh: MeshOptions,
    pub settings: SolverSettings,
    /// Normalization point for C-empty domains; the domain centroid if unset.
    pub reference: Option<Point>,
}

impl JsOptions {
    pub fn new(h_target: f64) -> Self {
        Self { mesh: MeshOptions::new(h_target), settings: SolverSettings::default(), reference: None }
    }
}

#[derive(Debug)]
pub struct CapFailure {
    pub index: usize,
    pub cap: f64,
    pub error: Error,
}

/// Fields of a cap sequence; `failure` is set when a cap could not be solved,
/// in which case `fields` holds the caps before it.
#[derive(Debug)]
pub struct JsRun {
    pub mesh: Arc<TriMesh>,
    pub fields: Vec<SolutionField>,
    pub failure: Option<CapFailure>,
}

impl JsRun {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn solve_jenkins_serrin(m: &MetricModel, d: &ValidDomain, schedule: &CapSchedule, h_target: f64) -> Result<JsRun> {
    solve_jenkins_serrin_with(m, d, schedule, &JsOptions::new(h_target))
}

pub fn solve_jenkins_serrin_with(m: &MetricModel, d: &ValidDomain, schedule: &CapSchedule, opts: &JsOptions) -> Result<JsRun> {
    let mesh = Arc::new(triangulate_with(d, &opts.mesh)?);
    solve_jenkins_serrin_on(m, d, mesh, schedule, opts)
}

/// Runs the cap sequence on a given mesh of `d`. Each cap starts from the
/// previous field with the new boundary values.
pub fn solve_jenkins_serrin_on(
    m: &MetricModel,
    d: &ValidDomain,
    mesh: Arc<TriMesh>,
    schedule: &CapSchedule,
    opts: &JsOptions,
) -> Result<JsRun> {
    m.require_flat()?;
    let c_empty = !d.domain().has_kind(EdgeKind::C);
    let reference = opts.reference.unwrap_or_else(|| d.centroid());
    let ref_vertex = mesh.locate(reference).is_none().then(|| {
        (0..mesh.n_vertices())
            .filter(|&v| !mesh.is_boundary(v))
            .min_by(|&a, &b| mesh.vertices()[a].dist(reference).total_cmp(&mesh.vertices()[b].dist(reference)))
    });
    let mut engine = Engine::new(m, &mesh, opts.settings);
    let load = vec![0.0; engine.disc.n_free()];
    let mut fields: Vec<SolutionField> = Vec::new();
    let mut previous: Option<(Vec<f64>, Vec<f64>)> = None;
    for (index, &cap) in schedule.levels().iter().enumerate() {
        let boundary = cap_boundary_values(d, &mesh, cap);
        let before = engine.iterations;
        let solved = match &previous {
            None => engine.solve_cold(&boundary, &load),
            Some((u_prev, _)) => engine.solve_from(u_prev.clone(), &boundary, &load, Some((u_prev, &load))),
        };
        let (u, rn) = match solved {
            Ok(x) => x,
            Err(error) => {
                return Ok(JsRun { mesh, fields, failure: Some(CapFailure { index, cap, error }) });
            }
        };
        let shift = if c_empty {
            match ref_vertex {
                Some(Some(v)) => u[v],
                _ => mesh.interpolate(&u, reference).unwrap_or(0.0),
            }
        } else {
            0.0
        };
        fields.push(SolutionField {
            mesh: mesh.clone(),
            u: u.iter().map(|x| x - shift).collect(),
            cap: Some(cap),
            residual_norm: rn,
            newton_iters: engine.iterations - before,
            shift,
        });
        previous = Some((u, boundary));
    }
    Ok(JsRun { mesh, fields, failure: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub passes: bool,
    /// Largest `u1 - u2` over all vertices (positive means a violation).
    pub worst_violation: f64,
    pub worst_vertex: usize,
    pub tol: f64,
    pub max_abs_difference: f64,
}

/// Checks `u1 <= u2 + tol` vertexwise with `tol = 1e-8 * amplitude`.
pub fn comparison_check(u1: &SolutionField, u2: &SolutionField) -> Result<ComparisonReport> {
    let amplitude = u1.u.iter().chain(&u2.u).fold(1.0f64, |a, x| a.max(x.abs()));
    comparison_check_with(u1, u2, 1e-8 * amplitude)
}

pub fn comparison_check_with(u1: &SolutionField, u2: &SolutionField, tol: f64) -> Result<ComparisonReport> {
    if !(Arc::ptr_eq(&u1.mesh, &u2.mesh) || *u1.mesh == *u2.mesh) || u1.u.len() != u2.u.len() {
        return Err(Error::Contract("fields live on different meshes".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut worst_vertex = 0;
    let mut max_abs: f64 = 0.0;
    for (v, (a, b)) in u1.u.iter().zip(&u2.u).enumerate() {
        if a - b > worst {
            worst = a - b;
            worst_vertex = v;
        }
        max_abs = max_abs.max((a - b).abs());
    }
    Ok(ComparisonReport { passes: worst <= tol, worst_violation: worst, worst_vertex, tol, max_abs_difference: max_abs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{scherk_quadrilateral, ScherkParams};

    fn square() -> Arc<TriMesh> {
        Arc::new(TriMesh::rectangle(0.0, 1.0, 0.0, 1.0, 8, 8).unwrap())
    }

    #[test]
    fn constant_data_is_reproduced_without_corrections() {
        let m = MetricModel::euclidean_r3(1.0);
        let mesh = square();
        let f = solve_dirichlet(&m, &mesh, &vec![5.0; mesh.n_vertices()], None).unwrap();
        assert_eq!(f.newton_iters, 0);
        assert!(f.u.iter().all(|v| (v - 5.0).abs() < 1e-12));
    }

    #[test]
    fn boundary_values_are_exact_and_residual_small() {
        let m = MetricModel::hyperbolic_h2xr(1.0);
        let mesh = square();
        let b: Vec<f64> = mesh.vertices().iter().map(|p| 3.0 * (p.x * 2.0).sin() - p.t).collect();
        let f = solve_dirichlet(&m, &mesh, &b, None).unwrap();
        assert!(f.residual_norm <= 1e-10);
        for v in 0..mesh.n_vertices() {
            if mesh.is_boundary(v) {
                assert_eq!(f.u[v], b[v]);
            }
        }
    }

    #[test]
    fn steep_data_needs_continuation_but_converges() {
        let m = MetricModel::euclidean_r3(1.0);
        let mesh = square();
        let b: Vec<f64> = mesh.vertices().iter().map(|p| if p.t == 0.0 { 200.0 } else { 0.0 }).collect();
        let f = solve_dirichlet(&m, &mesh, &b, None).unwrap();
        assert!(f.residual_norm <= 1e-10);
        assert!(f.u.iter().all(|v| *v >= -1e-9 && *v <= 200.0 + 1e-9));
    }

    #[test]
    fn schedule_contract() {
        assert!(CapSchedule::new(vec![2.0, 4.0, 8.0]).is_ok());
        assert!(CapSchedule::new(vec![2.0, 2.0]).is_err());
        assert!(CapSchedule::new(vec![-1.0, 2.0]).is_err());
        assert!(CapSchedule::new(vec![]).is_err());
        assert_eq!(CapSchedule::doubling(2.0, 4).unwrap().levels(), &[2.0, 4.0, 8.0, 16.0]);
    }

    #[test]
    fn comparison_with_shifted_data() {
        let m = MetricModel::euclidean_r3(1.0);
        let mesh = square();
        let b: Vec<f64> = mesh.vertices().iter().map(|p| p.x * p.x).collect();
        let b2: Vec<f64> = b.iter().map(|v| v + 1.0).collect();
        let f1 = solve_dirichlet(&m, &mesh, &b, None).unwrap();
        let f2 = solve_dirichlet(&m, &mesh, &b2, None).unwrap();
        let rep = comparison_check(&f1, &f2).unwrap();
        assert!(rep.passes);
        let other = Arc::new(TriMesh::rectangle(0.0, 1.0, 0.0, 1.0, 4, 4).unwrap());
        let f3 = solve_dirichlet(&m, &other, &vec![0.0; other.n_vertices()], None).unwrap();
        assert!(comparison_check(&f1, &f3).is_err());
    }

    #[test]
    fn all_c_zero_data_gives_zero_fields() {
        let m = MetricModel::euclidean_r3(1.0);
        let p = ScherkParams::new(0.0, 0.5, 0.3, -0.3).with_kinds([EdgeKind::C; 4]);
        let d = ValidDomain::new(&m, scherk_quadrilateral(&m, &p).unwrap()).unwrap();
        let run = solve_jenkins_serrin(&m, &d, &CapSchedule::new(vec![1.0, 2.0, 4.0]).unwrap(), 0.1).unwrap();
        assert!(run.is_complete());
        for f in &run.fields {
            assert!(f.u.iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn cap_values_follow_edge_kinds() {
        let m = MetricModel::euclidean_r3(1.0);
        let p = ScherkParams::new(0.0, 2f64.ln(), 0.3, -0.3).with_data([0.0, 7.0, 0.0, -0.5]);
        let d = ValidDomain::new(&m, scherk_quadrilateral(&m, &p).unwrap()).unwrap();
        let mesh = triangulate_with(&d, &MeshOptions::new(0.1)).unwrap();
        let b = cap_boundary_values(&d, &mesh, 4.0);
        for v in 0..mesh.n_vertices() {
            match mesh.role(v) {
                VertexRole::Edge(0) | VertexRole::Edge(2) => assert_eq!(b[v], 4.0),
                VertexRole::Edge(1) => assert_eq!(b[v], 4.0),
                VertexRole::Edge(3) => assert_eq!(b[v], -0.5),
                VertexRole::Corner { incoming: 0, outgoing: 1 } => assert_eq!(b[v], 4.0),
                VertexRole::Corner { incoming: 3, outgoing: 0 } => assert_eq!(b[v], -0.5),
                _ => {}
            }
        }
    }

    mod props {
        use proptest::prelude::*;

        use super::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(12))]

            /// Adding a constant to the data adds it to the solution, and the
            /// comparison check sees the ordering both ways.
            #[test]
            fn shifted_data_shifts_the_solution(k in 0.01f64..5.0, a in -3.0f64..3.0, b in -3.0f64..3.0, h2 in any::<bool>()) {
                let m = if h2 { MetricModel::hyperbolic_h2xr(1.0) } else { MetricModel::euclidean_r3(1.0) };
                let mesh = square();
                let lo: Vec<f64> = mesh.vertices().iter().map(|p| a * p.x * p.x + b * p.t).collect();
                let hi: Vec<f64> = lo.iter().map(|v| v + k).collect();
                let f1 = solve_dirichlet(&m, &mesh, &lo, None).unwrap();
                let f2 = solve_dirichlet(&m, &mesh, &hi, None).unwrap();
                for (u1, u2) in f1.u.iter().zip(&f2.u) {
                    prop_assert!((u2 - u1 - k).abs() < 1e-8);
                }
                prop_assert!(comparison_check(&f1, &f2).unwrap().passes);
                prop_assert!(!comparison_check(&f2, &f1).unwrap().passes);
            }
        }
    }
}
