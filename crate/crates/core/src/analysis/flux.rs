//! The flux functional `F_u[gamma] = int lambda <rho grad u / W, nu> ds`,
//! with `lambda = rho e^{ct}` the f-length weight. Its integrand is
//! `lambda * tau` with the normal trace `tau` bounded by 1 in magnitude.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::curves::quadrature::integrate;
use crate::curves::ParamCurve;
use crate::domain::{EdgeKind, ValidDomain};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::metric::MetricModel;
use crate::solver::SolutionField;

/// Which unit normal of a path the flux is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Left normal of the direction of travel (inward on a CCW boundary).
    Left,
    /// Right normal (outward on a CCW boundary).
    Right,
}

impl Side {
    fn normal(self, tangent: Point) -> Point {
        let n = tangent.normalized().perp();
        match self {
            Side::Left => n,
            Side::Right => -n,
        }
    }
}

/// `rho <g, nu> / sqrt(1 + rho^2 |g|^2)`.
pub fn normal_trace(rho: f64, g: Point, nu: Point) -> f64 {
    rho * g.dot(nu) / (1.0 + rho * rho * g.dot(g)).sqrt()
}

/// f-length of the straight segment `[a, b]`.
fn segment_f_length(m: &MetricModel, a: Point, b: Point) -> f64 {
    let len = a.dist(b);
    integrate(|s| m.line_weight_unchecked(a.lerp(b, s)), 0.0, 1.0, 1e-14, 1e-300) * len
}

/// Flux through a path inside the mesh. The path is cut where it crosses
/// triangle edges; on each piece the gradient is constant and the weight is
/// integrated by Gauss-Kronrod.
pub fn flux(m: &MetricModel, field: &SolutionField, path: &ParamCurve, side: Side) -> Result<f64> {
    m.require_flat()?;
    let mesh = &field.mesh;
    let pts = path.samples();
    let nseg = if path.is_closed() { pts.len() } else { pts.len() - 1 };
    let mut total = 0.0;
    for k in 0..nseg {
        let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
        let nu = side.normal(b - a);
        let len = a.dist(b);
        let mut s = 0.0f64;
        while s < 1.0 {
            // triangle just ahead of the current position
            let probe = a.lerp(b, (s + 1e-9).min(1.0));
            let (tri, _) = mesh
                .locate(probe)
                .ok_or_else(|| Error::Contract(format!("flux path leaves the mesh near ({}, {})", probe.x, probe.t)))?;
            let c = mesh.corner(tri);
            // barycentric coordinates along the segment are affine in s
            let area2 = (c[1] - c[0]).cross(c[2] - c[0]);
            let bary = |p: Point| {
                [(c[1] - p).cross(c[2] - p) / area2, (c[2] - p).cross(c[0] - p) / area2, (c[0] - p).cross(c[1] - p) / area2]
            };
            let (la, lb) = (bary(a), bary(b));
            let mut exit: f64 = 1.0;
            for i in 0..3 {
                let d = lb[i] - la[i];
                if d < 0.0 {
                    let si = -la[i] / d;
                    if si > s + 1e-12 {
                        exit = exit.min(si);
                    }
                }
            }
            let exit = exit.max((s + 1e-9).min(1.0));
            let g = mesh.gradient(&field.u, tri);
            let piece = integrate(
                |r| {
                    let p = a.lerp(b, r);
                    let rho = m.rho(p.x);
                    m.line_weight_unchecked(p) * normal_trace(rho, g, nu)
                },
                s,
                exit,
                1e-13,
                1e-300,
            );
            total += piece * len;
            s = exit;
        }
    }
    Ok(total)
}

/// Flux through one domain edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFlux {
    pub edge: usize,
    pub kind: EdgeKind,
    pub flux: f64,
    pub length_f: f64,
    pub ratio: f64,
    /// Sum of consistent nodal reactions along the edge (corner vertices
    /// split evenly); conservative by construction.
    pub reaction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxReport {
    pub cap: Option<f64>,
    pub h: f64,
    pub edges: Vec<EdgeFlux>,
    /// Outward flux through the whole boundary.
    pub total: f64,
    pub perimeter_f: f64,
}

impl FluxReport {
    /// Largest `|F| - L_f` over the edges.
    pub fn max_excess(&self) -> f64 {
        self.edges.iter().map(|e| e.flux.abs() - e.length_f).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `|F[boundary]| / (h * L_f[boundary])`.
    pub fn balance_ratio(&self) -> f64 {
        self.total.abs() / (self.h * self.perimeter_f)
    }

    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        if let Some(c) = self.cap {
            let _ = writeln!(s, "cap: {c:.16e}");
        }
        let _ = writeln!(s, "h: {:.16e}", self.h);
        let _ = writeln!(s, "total_flux: {:.16e}", self.total);
        let _ = writeln!(s, "perimeter_f: {:.16e}", self.perimeter_f);
        let _ = writeln!(s, "balance_ratio: {:.16e}", self.balance_ratio());
        for e in &self.edges {
            let _ = writeln!(
                s,
                "edge_{}: kind={} flux={:.16e} length_f={:.16e} ratio={:.16e} reaction={:.16e}",
                e.edge, e.kind, e.flux, e.length_f, e.ratio, e.reaction
            );
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("edge,kind,flux,length_f,ratio,reaction\n");
        for e in &self.edges {
            let _ = writeln!(s, "{},{},{:.16e},{:.16e},{:.16e},{:.16e}", e.edge, e.kind, e.flux, e.length_f, e.ratio, e.reaction);
        }
        s
    }
}

/// One sample of the boundary normal trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    /// Midpoint of the boundary segment.
    pub point: Point,
    /// f-length of the segment (after rescaling to the exact edge length).
    pub weight: f64,
    pub value: f64,
}

/// Recovered gradient of each boundary segment: the area-weighted mean of the
/// gradients of all triangles touching either of its endpoints.
fn edge_traces(m: &MetricModel, field: &SolutionField, d: &ValidDomain) -> Vec<Vec<TraceSample>> {
    let mesh = &field.mesh;
    let star = mesh.vertex_triangles();
    let mut out = vec![Vec::new(); d.edges().len()];
    for e in mesh.boundary_edges() {
        let (pa, pb) = (mesh.vertices()[e.a], mesh.vertices()[e.b]);
        let mut tris: Vec<usize> = star[e.a].iter().chain(&star[e.b]).copied().collect();
        tris.sort_unstable();
        tris.dedup();
        let (mut g, mut area) = (Point::default(), 0.0);
        for &t in &tris {
            let a = mesh.triangle_area(t);
            g += mesh.gradient(&field.u, t) * a;
            area += a;
        }
        let g = g * (1.0 / area);
        let mid = pa.lerp(pb, 0.5);
        let nu = Side::Right.normal(pb - pa);
        out[e.tag].push(TraceSample { point: mid, weight: segment_f_length(m, pa, pb), value: normal_trace(m.rho(mid.x), g, nu) });
    }
    for (i, samples) in out.iter_mut().enumerate() {
        let sum: f64 = samples.iter().map(|s| s.weight).sum();
        let scale = d.edge_length(i) / sum;
        for s in samples.iter_mut() {
            s.weight *= scale;
        }
    }
    out
}

/// Normal trace profile along domain edge `edge`, ordered along the edge.
pub fn boundary_normal_trace(m: &MetricModel, field: &SolutionField, d: &ValidDomain, edge: usize) -> Result<Vec<TraceSample>> {
    m.require_flat()?;
    if edge >= d.edges().len() {
        return Err(Error::Contract(format!("edge {edge} out of range")));
    }
    let mut samples = edge_traces(m, field, d).swap_remove(edge);
    // order by arclength of the closest point on the edge polyline
    let poly = d.edge_polyline(edge).samples().to_vec();
    let along = |p: Point| {
        let mut best = (f64::INFINITY, 0.0);
        let mut acc = 0.0;
        for w in poly.windows(2) {
            let dd = crate::geometry::segment_distance(p, w[0], w[1]);
            if dd < best.0 {
                let seg = w[1] - w[0];
                let s = ((p - w[0]).dot(seg) / seg.dot(seg)).clamp(0.0, 1.0);
                best = (dd, acc + s * seg.norm());
            }
            acc += w[0].dist(w[1]);
        }
        best.1
    };
    samples.sort_by(|a, b| along(a.point).total_cmp(&along(b.point)));
    Ok(samples)
}

/// Fluxes through every domain edge of the solved domain.
pub fn flux_report(m: &MetricModel, field: &SolutionField, d: &ValidDomain) -> Result<FluxReport> {
    m.require_flat()?;
    let mesh = &field.mesh;
    let traces = edge_traces(m, field, d);
    let reactions = field.reactions(m);
    let mut reaction = vec![0.0; d.edges().len()];
    let mut seen: HashMap<usize, ()> = HashMap::new();
    for e in mesh.boundary_edges() {
        for v in [e.a, e.b] {
            if seen.insert(v, ()).is_none() {
                match mesh.role(v) {
                    crate::mesh::VertexRole::Edge(t) => reaction[t] += reactions[v],
                    crate::mesh::VertexRole::Corner { incoming, outgoing } => {
                        reaction[incoming] += 0.5 * reactions[v];
                        reaction[outgoing] += 0.5 * reactions[v];
                    }
                    crate::mesh::VertexRole::Interior => {}
                }
            }
        }
    }
    let edges: Vec<EdgeFlux> = traces
        .iter()
        .enumerate()
        .map(|(i, samples)| {
            let flux: f64 = samples.iter().map(|s| s.weight * s.value).sum();
            let length_f = d.edge_length(i);
            EdgeFlux { edge: i, kind: d.edges()[i].kind, flux, length_f, ratio: flux / length_f, reaction: reaction[i] }
        })
        .collect();
    let total = edges.iter().map(|e| e.flux).sum();
    Ok(FluxReport { cap: field.cap, h: mesh.h_target(), edges, total, perimeter_f: d.perimeter() })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::mesh::TriMesh;
    use crate::solver::solve_dirichlet;

    fn field_on_square(f: impl Fn(Point) -> f64) -> SolutionField {
        let mesh = Arc::new(TriMesh::rectangle(0.0, 1.0, 0.0, 1.0, 10, 10).unwrap());
        let u: Vec<f64> = mesh.vertices().iter().map(|&p| f(p)).collect();
        SolutionField { mesh, u, cap: None, residual_norm: 0.0, newton_iters: 0, shift: 0.0 }
    }

    #[test]
    fn constant_field_has_zero_flux() {
        let m = MetricModel::euclidean_r3(1.0);
        let f = field_on_square(|_| 3.0);
        let path = ParamCurve::new(vec![Point::new(0.1, 0.2), Point::new(0.8, 0.7), Point::new(0.3, 0.9)]).unwrap();
        assert_eq!(flux(&m, &f, &path, Side::Left).unwrap(), 0.0);
    }

    /// Metric form `int f^2 / W h_c(grad u, nu) ds` with `h_c = e^{ct} I`:
    /// `grad u = e^{-ct} g`, the h_c-unit normal is `e^{-ct/2} nu` and
    /// `ds = e^{ct/2} |dp|`.
    fn direct_flux(m: &MetricModel, g: Point, a: Point, b: Point) -> f64 {
        let nu = (b - a).normalized().perp();
        integrate(
            |s| {
                let p = a.lerp(b, s);
                let ect = (m.c() * p.t).exp();
                let fv = m.f_value(p).unwrap();
                let grad = g * (1.0 / ect);
                let w = (1.0 + fv * fv * ect * grad.dot(grad)).sqrt();
                let nu_hc = nu * (-0.5 * m.c() * p.t).exp();
                fv * fv / w * ect * grad.dot(nu_hc) * ect.sqrt() * a.dist(b)
            },
            0.0,
            1.0,
            1e-14,
            1e-300,
        )
    }

    #[test]
    fn linear_field_matches_direct_quadrature() {
        let m = MetricModel::hyperbolic_h2xr(0.7);
        let g = Point::new(1.3, -0.4);
        let f = field_on_square(|p| g.dot(p));
        let (a, b) = (Point::new(0.15, 0.1), Point::new(0.85, 0.75));
        let got = flux(&m, &f, &ParamCurve::new(vec![a, b]).unwrap(), Side::Left).unwrap();
        let direct = direct_flux(&m, g, a, b);
        assert!((got - direct).abs() < 1e-12 * direct.abs().max(1.0), "{got} vs {direct}");
    }

    mod props {
        use proptest::prelude::*;

        use super::*;

        fn inner_point() -> impl Strategy<Value = Point> {
            (0.02f64..0.98, 0.02f64..0.98).prop_map(|(x, t)| Point::new(x, t))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn linear_fields_match_the_metric_form(
                h2 in any::<bool>(),
                c in -1.5f64..1.5,
                gx in -20.0f64..20.0,
                gt in -20.0f64..20.0,
                a in inner_point(),
                b in inner_point(),
            ) {
                prop_assume!(a.dist(b) > 1e-3);
                let m = if h2 { MetricModel::hyperbolic_h2xr(c) } else { MetricModel::euclidean_r3(c) };
                let g = Point::new(gx, gt);
                let f = field_on_square(|p| g.dot(p));
                let got = flux(&m, &f, &ParamCurve::new(vec![a, b]).unwrap(), Side::Left).unwrap();
                let direct = direct_flux(&m, g, a, b);
                prop_assert!((got - direct).abs() < 1e-11 * direct.abs().max(1.0), "{} vs {}", got, direct);
            }

            #[test]
            fn flux_is_additive_over_any_split(a in inner_point(), b in inner_point(), s in 0.01f64..0.99, k in 0.5f64..8.0) {
                prop_assume!(a.dist(b) > 1e-3);
                let m = MetricModel::euclidean_r3(1.0);
                let f = field_on_square(|p| (k * p.x).sin() * p.t + p.x * p.x);
                let c = a.lerp(b, s);
                let f1 = flux(&m, &f, &ParamCurve::new(vec![a, c]).unwrap(), Side::Right).unwrap();
                let f2 = flux(&m, &f, &ParamCurve::new(vec![c, b]).unwrap(), Side::Right).unwrap();
                let fw = flux(&m, &f, &ParamCurve::new(vec![a, c, b]).unwrap(), Side::Right).unwrap();
                prop_assert!((fw - f1 - f2).abs() <= 1e-12 * (1.0 + fw.abs()));
            }

            #[test]
            fn normal_trace_is_below_one(rho in 1e-3f64..1e3, gx in -1e6f64..1e6, gt in -1e6f64..1e6, angle in 0.0f64..6.3) {
                let nu = Point::new(angle.cos(), angle.sin());
                let v = normal_trace(rho, Point::new(gx, gt), nu);
                prop_assert!(v.abs() < 1.0 || (v.abs() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn flux_is_additive_and_orientation_flips_sign() {
        let m = MetricModel::euclidean_r3(1.0);
        let f = field_on_square(|p| (p.x * 3.0).sin() + p.t * p.t);
        let (a, c, b) = (Point::new(0.1, 0.3), Point::new(0.47, 0.52), Point::new(0.9, 0.8));
        let whole = ParamCurve::new(vec![a, c, b]).unwrap();
        let f1 = flux(&m, &f, &ParamCurve::new(vec![a, c]).unwrap(), Side::Left).unwrap();
        let f2 = flux(&m, &f, &ParamCurve::new(vec![c, b]).unwrap(), Side::Left).unwrap();
        let fw = flux(&m, &f, &whole, Side::Left).unwrap();
        assert!((fw - f1 - f2).abs() < 1e-12);
        let fr = flux(&m, &f, &whole, Side::Right).unwrap();
        assert!((fw + fr).abs() < 1e-14);
        let outside = ParamCurve::new(vec![a, Point::new(1.5, 0.5)]).unwrap();
        assert!(flux(&m, &f, &outside, Side::Left).is_err());
    }

    #[test]
    fn interior_flux_is_bounded_by_f_length() {
        let m = MetricModel::euclidean_r3(1.0);
        let f = field_on_square(|p| 1e6 * p.x);
        let path = ParamCurve::new(vec![Point::new(0.5, 0.05), Point::new(0.5, 0.95)]).unwrap();
        let fl = crate::curves::f_length(&m, &path).unwrap();
        let fx = flux(&m, &f, &path, Side::Right).unwrap();
        assert!(fx <= fl && fx > 0.999 * fl);
    }

    #[test]
    fn solved_square_has_small_boundary_imbalance() {
        let m = MetricModel::euclidean_r3(1.0);
        let mesh = Arc::new(TriMesh::rectangle(0.0, 1.0, 0.0, 1.0, 16, 16).unwrap());
        let b: Vec<f64> = mesh.vertices().iter().map(|p| p.x * p.x - p.t).collect();
        let sol = solve_dirichlet(&m, &mesh, &b, None).unwrap();
        let probe = ParamCurve::closed(vec![
            Point::new(0.2, 0.2),
            Point::new(0.8, 0.2),
            Point::new(0.8, 0.8),
            Point::new(0.2, 0.8),
        ])
        .unwrap();
        // a closed interior path encloses no source
        let fx = flux(&m, &sol, &probe, Side::Right).unwrap();
        assert!(fx.abs() < 0.05, "{fx}");
    }
}
