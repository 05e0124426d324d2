//! Triangle meshes of admissible domains.
//!
//! The boundary is sampled with spacing `boundary_ratio * h` (finer still
//! near domain vertices), inserted as constraint edges of a Delaunay
//! triangulation, and refined with an angle bound and a maximal area of an
//! equilateral triangle of side `h`. Refinement grades the size from the
//! boundary spacing up to `h` in the interior.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};

use crate::curves::Curve;
use crate::domain::ValidDomain;
use crate::error::{Error, Result};
use crate::geometry::{segment_distance, Point};

/// A boundary edge `a -> b` with the interior on its left, tagged with the
/// index of the domain edge it discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub tag: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    Interior,
    /// On the interior of domain edge `tag`.
    Edge(usize),
    /// Domain vertex between edge `incoming` and edge `outgoing`.
    Corner { incoming: usize, outgoing: usize },
}

#[derive(Debug)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
    roles: Vec<VertexRole>,
    h_target: f64,
    locator: OnceLock<Locator>,
}

impl Clone for TriMesh {
    fn clone(&self) -> Self {
        Self {
            vertices: self.vertices.clone(),
            triangles: self.triangles.clone(),
            boundary_edges: self.boundary_edges.clone(),
            roles: self.roles.clone(),
            h_target: self.h_target,
            locator: OnceLock::new(),
        }
    }
}

impl PartialEq for TriMesh {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.triangles == other.triangles && self.boundary_edges == other.boundary_edges
    }
}

impl TriMesh {
    /// Checks orientation and conformity; roles are derived from the tags.
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>, boundary_edges: Vec<BoundaryEdge>, h_target: f64) -> Result<Self> {
        let mut roles = vec![VertexRole::Interior; vertices.len()];
        let mut incoming: HashMap<usize, usize> = HashMap::new();
        let mut outgoing: HashMap<usize, usize> = HashMap::new();
        for e in &boundary_edges {
            if incoming.insert(e.b, e.tag).is_some() || outgoing.insert(e.a, e.tag).is_some() {
                return Err(Error::Mesh(format!("boundary is not a simple cycle at edge {} -> {}", e.a, e.b)));
            }
        }
        for (&v, &out) in &outgoing {
            let inc = *incoming
                .get(&v)
                .ok_or_else(|| Error::Mesh(format!("boundary vertex {v} has no incoming edge")))?;
            roles[v] = if inc == out { VertexRole::Edge(out) } else { VertexRole::Corner { incoming: inc, outgoing: out } };
        }
        let mesh = Self { vertices, triangles, boundary_edges, roles, h_target, locator: OnceLock::new() };
        mesh.check_conformity()?;
        Ok(mesh)
    }

    /// Structured mesh of a rectangle, each cell cut along the same diagonal.
    /// Tags: 0 bottom, 1 right, 2 top, 3 left.
    pub fn rectangle(x0: f64, x1: f64, t0: f64, t1: f64, nx: usize, nt: usize) -> Result<Self> {
        if nx == 0 || nt == 0 || !(x1 > x0) || !(t1 > t0) {
            return Err(Error::Mesh("degenerate rectangle".into()));
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut vertices = Vec::with_capacity((nx + 1) * (nt + 1));
        for j in 0..=nt {
            for i in 0..=nx {
                vertices.push(Point::new(
                    x0 + (x1 - x0) * i as f64 / nx as f64,
                    t0 + (t1 - t0) * j as f64 / nt as f64,
                ));
            }
        }
        let mut triangles = Vec::with_capacity(2 * nx * nt);
        for j in 0..nt {
            for i in 0..nx {
                let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }
        let mut boundary = Vec::new();
        for i in 0..nx {
            boundary.push(BoundaryEdge { a: id(i, 0), b: id(i + 1, 0), tag: 0 });
        }
        for j in 0..nt {
            boundary.push(BoundaryEdge { a: id(nx, j), b: id(nx, j + 1), tag: 1 });
        }
        for i in (0..nx).rev() {
            boundary.push(BoundaryEdge { a: id(i + 1, nt), b: id(i, nt), tag: 2 });
        }
        for j in (0..nt).rev() {
            boundary.push(BoundaryEdge { a: id(0, j + 1), b: id(0, j), tag: 3 });
        }
        let h = ((x1 - x0) / nx as f64).max((t1 - t0) / nt as f64);
        TriMesh::new(vertices, triangles, boundary, h)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn role(&self, v: usize) -> VertexRole {
        self.roles[v]
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.roles[v] != VertexRole::Interior
    }

    pub fn h_target(&self) -> f64 {
        self.h_target
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn boundary_vertex_count(&self) -> usize {
        self.roles.iter().filter(|r| **r != VertexRole::Interior).count()
    }

    pub fn corner(&self, tri: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[tri];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, tri: usize) -> f64 {
        let [a, b, c] = self.corner(tri);
        0.5 * (b - a).cross(c - a)
    }

    pub fn centroid(&self, tri: usize) -> Point {
        let [a, b, c] = self.corner(tri);
        Point::new((a.x + b.x + c.x) / 3.0, (a.t + b.t + c.t) / 3.0)
    }

    /// Gradients of the three barycentric coordinates of a triangle.
    pub fn shape_gradients(&self, tri: usize) -> [Point; 3] {
        let [a, b, c] = self.corner(tri);
        let two_area = (b - a).cross(c - a);
        // grad(lambda_a) is the inward normal of the opposite edge over its height.
        let g = |p: Point, q: Point| Point::new(p.t - q.t, q.x - p.x) * (1.0 / two_area);
        [g(b, c), g(c, a), g(a, b)]
    }

    /// Gradient of the piecewise-linear field `u` on triangle `tri`.
    pub fn gradient(&self, u: &[f64], tri: usize) -> Point {
        let g = self.shape_gradients(tri);
        let [a, b, c] = self.triangles[tri];
        g[0] * u[a] + g[1] * u[b] + g[2] * u[c]
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        let mut worst = 180.0f64;
        for t in 0..self.triangles.len() {
            let p = self.corner(t);
            for k in 0..3 {
                let u = p[(k + 1) % 3] - p[k];
                let v = p[(k + 2) % 3] - p[k];
                let ang = u.cross(v).abs().atan2(u.dot(v)).to_degrees();
                worst = worst.min(ang);
            }
        }
        worst
    }

    pub fn max_edge_length(&self) -> f64 {
        let mut m: f64 = 0.0;
        for t in 0..self.triangles.len() {
            let p = self.corner(t);
            for k in 0..3 {
                m = m.max(p[k].dist(p[(k + 1) % 3]));
            }
        }
        m
    }

    /// Triangles incident to each vertex.
    pub fn vertex_triangles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                out[v].push(t);
            }
        }
        out
    }

    fn check_conformity(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut directed: HashSet<(usize, usize)> = HashSet::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= n) {
                return Err(Error::Mesh(format!("triangle {t} refers to a missing vertex")));
            }
            if !(self.triangle_area(t) > 0.0) {
                return Err(Error::Mesh(format!("triangle {t} is inverted or degenerate")));
            }
            for k in 0..3 {
                if !directed.insert((tri[k], tri[(k + 1) % 3])) {
                    return Err(Error::Mesh(format!("edge {} -> {} appears twice", tri[k], tri[(k + 1) % 3])));
                }
            }
        }
        let boundary: HashSet<(usize, usize)> = self.boundary_edges.iter().map(|e| (e.a, e.b)).collect();
        for &(a, b) in &directed {
            let has_twin = directed.contains(&(b, a));
            if has_twin == boundary.contains(&(a, b)) {
                return Err(Error::Mesh(format!("edge {a} -> {b} is neither shared nor tagged as boundary")));
            }
        }
        if boundary.iter().any(|e| !directed.contains(e)) {
            return Err(Error::Mesh("a tagged boundary edge is not a triangle edge".into()));
        }
        let mut used = vec![false; n];
        for tri in &self.triangles {
            for &v in tri {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::Mesh(format!("vertex {v} belongs to no triangle")));
        }
        Ok(())
    }

    /// Conformity, orientation, tags, and the minimum angle bound.
    pub fn check_invariants(&self, min_angle_deg: f64) -> Result<()> {
        self.check_conformity()?;
        let a = self.min_angle_deg();
        if a < min_angle_deg {
            return Err(Error::Mesh(format!("minimum angle {a:.2} deg is below {min_angle_deg} deg")));
        }
        Ok(())
    }

    /// Containing triangle and barycentric coordinates.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        self.locator.get_or_init(|| Locator::new(self)).locate(self, p)
    }

    /// Value of the piecewise-linear field `u` at `p`.
    pub fn interpolate(&self, u: &[f64], p: Point) -> Option<f64> {
        let (t, l) = self.locate(p)?;
        let [a, b, c] = self.triangles[t];
        Some(l[0] * u[a] + l[1] * u[b] + l[2] * u[c])
    }

    /// Renumbers vertices by reverse Cuthill-McKee to keep the Cholesky
    /// envelope narrow.
    fn reordered(self) -> Result<Self> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let order = reverse_cuthill_mckee(&adj);
        let mut new_id = vec![0; n];
        for (k, &v) in order.iter().enumerate() {
            new_id[v] = k;
        }
        let vertices = order.iter().map(|&v| self.vertices[v]).collect();
        let triangles = self.triangles.iter().map(|t| [new_id[t[0]], new_id[t[1]], new_id[t[2]]]).collect();
        let boundary = self
            .boundary_edges
            .iter()
            .map(|e| BoundaryEdge { a: new_id[e.a], b: new_id[e.b], tag: e.tag })
            .collect();
        TriMesh::new(vertices, triangles, boundary, self.h_target)
    }
}

fn bfs_levels(adj: &[Vec<usize>], start: usize) -> (Vec<usize>, usize) {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut q = VecDeque::from([start]);
    dist[start] = 0;
    let mut last = start;
    while let Some(v) = q.pop_front() {
        last = v;
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
        }
    }
    (dist, last)
}

fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        // pseudo-peripheral start: far end of a BFS from the seed
        let (_, far) = bfs_levels(adj, seed);
        let mut q = VecDeque::from([far]);
        visited[far] = true;
        while let Some(v) = q.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (adj[w].len(), w));
            for w in next {
                visited[w] = true;
                q.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

#[derive(Debug)]
struct Locator {
    origin: Point,
    cell: f64,
    nx: usize,
    nt: usize,
    buckets: Vec<Vec<usize>>,
}

impl Locator {
    fn new(mesh: &TriMesh) -> Self {
        let (mut lo, mut hi) = (mesh.vertices[0], mesh.vertices[0]);
        for p in &mesh.vertices {
            lo = Point::new(lo.x.min(p.x), lo.t.min(p.t));
            hi = Point::new(hi.x.max(p.x), hi.t.max(p.t));
        }
        let area = (hi.x - lo.x).max(1e-300) * (hi.t - lo.t).max(1e-300);
        let cell = (area / mesh.triangles.len().max(1) as f64).sqrt() * 2.0;
        let nx = (((hi.x - lo.x) / cell).ceil() as usize).clamp(1, 4096);
        let nt = (((hi.t - lo.t) / cell).ceil() as usize).clamp(1, 4096);
        let cx = (hi.x - lo.x) / nx as f64;
        let ct = (hi.t - lo.t) / nt as f64;
        let cell = cx.max(ct).max(1e-300);
        let mut buckets = vec![Vec::new(); nx * nt];
        let idx = |v: f64, o: f64, n: usize| (((v - o) / cell).floor().max(0.0) as usize).min(n - 1);
        for t in 0..mesh.triangles.len() {
            let p = mesh.corner(t);
            let (x0, x1) = (p.iter().map(|q| q.x).fold(f64::INFINITY, f64::min), p.iter().map(|q| q.x).fold(f64::NEG_INFINITY, f64::max));
            let (t0, t1) = (p.iter().map(|q| q.t).fold(f64::INFINITY, f64::min), p.iter().map(|q| q.t).fold(f64::NEG_INFINITY, f64::max));
            for j in idx(t0, lo.t, nt)..=idx(t1, lo.t, nt) {
                for i in idx(x0, lo.x, nx)..=idx(x1, lo.x, nx) {
                    buckets[j * nx + i].push(t);
                }
            }
        }
        Self { origin: lo, cell, nx, nt, buckets }
    }

    fn locate(&self, mesh: &TriMesh, p: Point) -> Option<(usize, [f64; 3])> {
        let fx = (p.x - self.origin.x) / self.cell;
        let ft = (p.t - self.origin.t) / self.cell;
        if fx < -1e-9 || ft < -1e-9 || fx > self.nx as f64 + 1e-9 || ft > self.nt as f64 + 1e-9 {
            return None;
        }
        let i = (fx.floor().max(0.0) as usize).min(self.nx - 1);
        let j = (ft.floor().max(0.0) as usize).min(self.nt - 1);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for &t in &self.buckets[j * self.nx + i] {
            let [a, b, c] = mesh.corner(t);
            let area2 = (b - a).cross(c - a);
            let l = [(b - p).cross(c - p) / area2, (c - p).cross(a - p) / area2, (a - p).cross(b - p) / area2];
            let worst = l.iter().copied().fold(f64::INFINITY, f64::min);
            if worst >= 0.0 {
                return Some((t, l));
            }
            if best.map_or(true, |b| worst > b.2) {
                best = Some((t, l, worst));
            }
        }
        // accept points within roundoff of a triangle
        best.filter(|b| b.2 > -1e-10).map(|b| (b.0, b.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshOptions {
    /// Largest triangle size in the interior.
    pub h_target: f64,
    /// Boundary spacing as a fraction of `h_target`.
    pub boundary_ratio: f64,
    /// Spacing at domain vertices as a fraction of the boundary spacing.
    pub corner_ratio: f64,
    /// Growth of the boundary spacing with distance from a domain vertex.
    pub grading: f64,
    /// Angle bound handed to the Delaunay refinement.
    pub refine_angle_deg: f64,
    /// Required minimum angle of the final mesh.
    pub min_angle_deg: f64,
    pub max_vertices: usize,
    /// Adds a row of vertices offset from the boundary, staggered against
    /// the boundary samples, so the first layer of cells is aligned with the
    /// boundary.
    pub boundary_layer: bool,
}

impl MeshOptions {
    pub fn new(h_target: f64) -> Self {
        Self {
            h_target,
            boundary_ratio: 0.25,
            corner_ratio: 0.25,
            grading: 0.25,
            refine_angle_deg: 28.0,
            min_angle_deg: 20.0,
            max_vertices: 400_000,
            boundary_layer: true,
        }
    }
}

pub fn triangulate(d: &ValidDomain, h_target: f64) -> Result<TriMesh> {
    triangulate_with(d, &MeshOptions::new(h_target))
}

/// Samples of edge `i`, endpoints included, with graded spacing.
fn sample_edge(d: &ValidDomain, i: usize, opts: &MeshOptions) -> Vec<Point> {
    let curve = &d.edges()[i].curve;
    let verts = d.vertices();
    let delta = opts.boundary_ratio * opts.h_target;
    let delta_c = opts.corner_ratio * delta;
    let spacing = |p: Point| {
        let dv = verts.iter().map(|v| v.dist(p)).fold(f64::INFINITY, f64::min);
        delta.min(delta_c + opts.grading * dv)
    };
    let knots = curve.knots();
    let (r0, r1) = (knots[0], knots[knots.len() - 1]);
    let flat = d.edge_polyline(i).flat_length();
    let m = ((8.0 * flat / delta_c).ceil() as usize).clamp(256, 400_000);
    let params: Vec<f64> = (0..=m).map(|k| r0 + (r1 - r0) * k as f64 / m as f64).collect();
    let pts: Vec<Point> = params.iter().map(|&r| curve.position(r)).collect();
    // count(s) = int ds / spacing
    let mut count = vec![0.0; m + 1];
    for k in 0..m {
        let ds = pts[k].dist(pts[k + 1]);
        count[k + 1] = count[k] + ds * 0.5 * (1.0 / spacing(pts[k]) + 1.0 / spacing(pts[k + 1]));
    }
    let total = count[m];
    let n = (total.ceil() as usize).max(1);
    let mut out = Vec::with_capacity(n + 1);
    out.push(pts[0]);
    let mut k = 0;
    for j in 1..n {
        let target = total * j as f64 / n as f64;
        while count[k + 1] < target {
            k += 1;
        }
        let w = (target - count[k]) / (count[k + 1] - count[k]);
        out.push(curve.position(params[k] + w * (params[k + 1] - params[k])));
    }
    out.push(pts[m]);
    out
}

/// Points at height `sqrt(3)/2 * s` above the midpoint of each boundary
/// segment of length `s`, kept only where they stay clear of the rest of the
/// boundary and of each other (which drops them near corners).
fn layer_points(ring: &[Point]) -> Vec<Point> {
    let n = ring.len();
    let mut out: Vec<Point> = Vec::new();
    let mut lens = Vec::with_capacity(n);
    for k in 0..n {
        lens.push(ring[k].dist(ring[(k + 1) % n]));
    }
    let cell = lens.iter().copied().fold(0.0, f64::max).max(1e-300);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |p: Point| ((p.x / cell).floor() as i64, (p.t / cell).floor() as i64);
    for k in 0..n {
        let m = ring[k].lerp(ring[(k + 1) % n], 0.5);
        grid.entry(key(m)).or_default().push(k);
    }
    let mut placed: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for k in 0..n {
        let (a, b) = (ring[k], ring[(k + 1) % n]);
        let s = lens[k];
        let h = 0.5 * 3f64.sqrt() * s;
        let p = a.lerp(b, 0.5) + (b - a).normalized().perp() * h;
        let (i, j) = key(p);
        let reach = ((h + s) / cell).ceil() as i64 + 1;
        let mut ok = true;
        'search: for di in -reach..=reach {
            for dj in -reach..=reach {
                for &q in grid.get(&(i + di, j + dj)).into_iter().flatten() {
                    if q != k && segment_distance(p, ring[q], ring[(q + 1) % n]) < 0.8 * h {
                        ok = false;
                        break 'search;
                    }
                }
                for &q in placed.get(&(i + di, j + dj)).into_iter().flatten() {
                    if out[q].dist(p) < 0.7 * s {
                        ok = false;
                        break 'search;
                    }
                }
            }
        }
        if ok && crate::geometry::winding_number(ring, p) != 0 {
            placed.entry((i, j)).or_default().push(out.len());
            out.push(p);
        }
    }
    out
}

pub fn triangulate_with(d: &ValidDomain, opts: &MeshOptions) -> Result<TriMesh> {
    if !(opts.h_target > 0.0) || !opts.h_target.is_finite() {
        return Err(Error::Mesh("h_target must be positive".into()));
    }
    let n_edges = d.edges().len();
    let mut ring: Vec<Point> = Vec::new();
    let mut ring_tag: Vec<usize> = Vec::new();
    for i in 0..n_edges {
        let s = sample_edge(d, i, opts);
        for p in &s[..s.len() - 1] {
            ring.push(*p);
            ring_tag.push(i);
        }
    }
    if crate::geometry::polyline_self_intersection(&ring, true).is_some() {
        return Err(Error::Mesh("sampled boundary intersects itself".into()));
    }

    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    let mut handles = Vec::with_capacity(ring.len());
    for p in &ring {
        let h = cdt.insert(Point2::new(p.x, p.t)).map_err(|e| Error::Mesh(format!("{e:?}")))?;
        handles.push(h);
    }
    let distinct: HashSet<_> = handles.iter().collect();
    if distinct.len() != handles.len() {
        return Err(Error::Mesh("boundary samples collapse: the domain is too thin for this mesh size".into()));
    }
    if opts.boundary_layer {
        for p in layer_points(&ring) {
            cdt.insert(Point2::new(p.x, p.t)).map_err(|e| Error::Mesh(format!("{e:?}")))?;
        }
    }
    for k in 0..handles.len() {
        let (a, b) = (handles[k], handles[(k + 1) % handles.len()]);
        if !cdt.can_add_constraint(a, b) {
            return Err(Error::Mesh("boundary constraint crosses another boundary segment".into()));
        }
        cdt.add_constraint(a, b);
    }
    let params = RefinementParameters::<f64>::new()
        .exclude_outer_faces(true)
        .with_angle_limit(AngleLimit::from_deg(opts.refine_angle_deg))
        .with_max_allowed_area(3f64.sqrt() / 4.0 * opts.h_target * opts.h_target)
        .with_max_additional_vertices(opts.max_vertices);
    let result = cdt.refine(params);
    if !result.refinement_complete {
        return Err(Error::Mesh(format!(
            "refinement needs more than {} vertices; the domain is too thin for h = {}",
            opts.max_vertices, opts.h_target
        )));
    }
    let excluded: HashSet<_> = result.excluded_faces.iter().copied().collect();

    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        if excluded.contains(&face.fix()) {
            continue;
        }
        let mut tri = [0usize; 3];
        for (k, v) in face.vertices().iter().enumerate() {
            let key = v.fix().index();
            tri[k] = *index.entry(key).or_insert_with(|| {
                let p = v.position();
                vertices.push(Point::new(p.x, p.y));
                vertices.len() - 1
            });
        }
        triangles.push(tri);
    }
    if triangles.is_empty() {
        return Err(Error::Mesh("triangulation produced no interior triangles".into()));
    }

    let mut directed: HashSet<(usize, usize)> = HashSet::new();
    for t in &triangles {
        for k in 0..3 {
            directed.insert((t[k], t[(k + 1) % 3]));
        }
    }
    let nseg = ring.len();
    let mut boundary = Vec::new();
    for t in &triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            if directed.contains(&(b, a)) {
                continue;
            }
            let mid = vertices[a].lerp(vertices[b], 0.5);
            let seg = (0..nseg)
                .min_by(|&i, &j| {
                    let di = segment_distance(mid, ring[i], ring[(i + 1) % nseg]);
                    let dj = segment_distance(mid, ring[j], ring[(j + 1) % nseg]);
                    di.total_cmp(&dj)
                })
                .expect("non-empty ring");
            boundary.push(BoundaryEdge { a, b, tag: ring_tag[seg] });
        }
    }
    let mesh = TriMesh::new(vertices, triangles, boundary, opts.h_target)?.reordered()?;
    mesh.check_invariants(opts.min_angle_deg)?;
    Ok(mesh)
}
