//! Convergence and divergence sets of a cap sequence.
//!
//! A vertex is divergent when its last increment per unit cap increment
//! reaches the growth threshold. Interfaces between the two classes are
//! traced as the threshold level set of the rate field, smoothed, and
//! measured for f-curvature.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::curves::{f_curvature_profile, ParamCurve};
use crate::domain::ValidDomain;
use crate::error::{Error, Result};
use crate::geometry::{segments_intersect, Point};
use crate::mesh::TriMesh;
use crate::metric::MetricModel;
use crate::solver::SolutionField;

pub const DEFAULT_GROWTH_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    /// Boundary vertices carry prescribed data and are not classified.
    Boundary,
    Convergent,
    Divergent,
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexClass::Boundary => "boundary",
            VertexClass::Convergent => "convergent",
            VertexClass::Divergent => "divergent",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceEnd {
    pub point: Point,
    /// Index of the closest domain vertex.
    pub nearest_vertex: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interface {
    pub curve: ParamCurve,
    /// Largest |k_f| over interior samples; `None` for curves too short to
    /// carry a curvature sample.
    pub max_kf: Option<f64>,
    /// Endpoints of an open interface; `None` for a closed loop.
    pub ends: Option<[InterfaceEnd; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub cells: usize,
    pub area: f64,
}

#[derive(Debug, Clone)]
pub struct DivergenceReport {
    pub mesh: Arc<TriMesh>,
    pub h: f64,
    pub threshold: f64,
    pub caps: Vec<f64>,
    /// Last increment per unit cap increment; `None` at boundary vertices.
    pub rates: Vec<Option<f64>>,
    pub classes: Vec<VertexClass>,
    pub interfaces: Vec<Interface>,
    /// Connected components of divergent cells.
    pub components: Vec<Component>,
}

impl DivergenceReport {
    pub fn count(&self, class: VertexClass) -> usize {
        self.classes.iter().filter(|c| **c == class).count()
    }

    pub fn divergence_set_is_empty(&self) -> bool {
        self.count(VertexClass::Divergent) == 0
    }

    /// Largest interface |k_f|, if any interface carries a measurement.
    pub fn max_interface_kf(&self) -> Option<f64> {
        self.interfaces.iter().filter_map(|i| i.max_kf).reduce(f64::max)
    }

    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let caps: Vec<String> = self.caps.iter().map(|c| format!("{c:.16e}")).collect();
        let _ = writeln!(s, "h: {:.16e}", self.h);
        let _ = writeln!(s, "threshold: {:.16e}", self.threshold);
        let _ = writeln!(s, "caps: {}", caps.join(" "));
        let _ = writeln!(s, "convergent_vertices: {}", self.count(VertexClass::Convergent));
        let _ = writeln!(s, "divergent_vertices: {}", self.count(VertexClass::Divergent));
        let _ = writeln!(s, "components: {}", self.components.len());
        for (k, c) in self.components.iter().enumerate() {
            let _ = writeln!(s, "component_{k}: cells={} area={:.16e}", c.cells, c.area);
        }
        let _ = writeln!(s, "interfaces: {}", self.interfaces.len());
        for (k, i) in self.interfaces.iter().enumerate() {
            let kf = i.max_kf.map_or("none".to_string(), |v| format!("{v:.16e}"));
            let _ = write!(s, "interface_{k}: samples={} max_kf={kf}", i.curve.len());
            match &i.ends {
                Some(ends) => {
                    for (j, e) in ends.iter().enumerate() {
                        let _ = write!(
                            s,
                            " end{j}=({:.16e},{:.16e}) vertex{j}={} distance{j}={:.16e}",
                            e.point.x, e.point.t, e.nearest_vertex, e.distance
                        );
                    }
                }
                None => s.push_str(" closed"),
            }
            s.push('\n');
        }
        s
    }

    /// One row per mesh vertex.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("vertex,x,t,rate,class\n");
        for (v, p) in self.mesh.vertices().iter().enumerate() {
            let rate = self.rates[v].map_or(String::new(), |r| format!("{r:.16e}"));
            let _ = writeln!(s, "{v},{:.16e},{:.16e},{rate},{}", p.x, p.t, self.classes[v]);
        }
        s
    }

    /// Interface samples, one row per sample.
    pub fn interfaces_csv(&self) -> String {
        let mut s = String::from("interface,sample,x,t\n");
        for (k, i) in self.interfaces.iter().enumerate() {
            for (j, p) in i.curve.samples().iter().enumerate() {
                let _ = writeln!(s, "{k},{j},{:.16e},{:.16e}", p.x, p.t);
            }
        }
        s
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Chains marching-triangle segments (keyed by the mesh edge each endpoint
/// lies on) into polylines.
fn chain_segments(segments: &[((usize, usize), (usize, usize))], points: &HashMap<(usize, usize), Point>) -> Vec<(Vec<Point>, bool)> {
    let mut at: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, (a, b)) in segments.iter().enumerate() {
        at.entry(*a).or_default().push(i);
        at.entry(*b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start_seg: usize, start_key: (usize, usize), used: &mut Vec<bool>| -> (Vec<(usize, usize)>, bool) {
        let mut keys = vec![start_key];
        let mut seg = start_seg;
        let mut key = start_key;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == key { b } else { a };
            keys.push(next);
            if next == start_key {
                return (keys, true);
            }
            match at[&next].iter().find(|&&s| !used[s]) {
                Some(&s) => {
                    seg = s;
                    key = next;
                }
                None => return (keys, false),
            }
        }
    };
    // open chains start at keys touched by a single segment
    let mut starts: Vec<(usize, usize)> = at.iter().filter(|(_, v)| v.len() == 1).map(|(k, _)| *k).collect();
    starts.sort_unstable();
    for k in starts {
        let s = at[&k][0];
        if !used[s] {
            let (keys, closed) = walk(s, k, &mut used);
            out.push((keys.iter().map(|k| points[k]).collect(), closed));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            let (keys, closed) = walk(s, segments[s].0, &mut used);
            let mut pts: Vec<Point> = keys.iter().map(|k| points[k]).collect();
            if closed {
                pts.pop();
            }
            out.push((pts, closed));
        }
    }
    out
}

fn smooth(pts: &mut [Point], closed: bool, passes: usize) {
    let n = pts.len();
    if n < 3 {
        return;
    }
    for _ in 0..passes {
        let prev = pts.to_vec();
        let range = if closed { 0..n } else { 1..n - 1 };
        for i in range {
            let (a, b) = (prev[(i + n - 1) % n], prev[(i + 1) % n]);
            pts[i] = prev[i] * 0.5 + (a + b) * 0.25;
        }
    }
}

/// Classifies the vertices of a cap sequence (at least three fields on one
/// mesh) and extracts the interfaces between the classes.
pub fn classify_convergence(m: &MetricModel, d: &ValidDomain, fields: &[SolutionField], threshold: f64) -> Result<DivergenceReport> {
    m.require_flat()?;
    if fields.len() < 3 {
        return Err(Error::Contract(format!("classification needs at least 3 cap levels, got {}", fields.len())));
    }
    let mesh = fields[0].mesh.clone();
    if fields.iter().any(|f| !(Arc::ptr_eq(&f.mesh, &mesh) || *f.mesh == *mesh)) {
        return Err(Error::Contract("fields live on different meshes".into()));
    }
    let caps: Vec<f64> = fields
        .iter()
        .map(|f| f.cap.ok_or_else(|| Error::Contract("classification needs fields of a cap sequence".into())))
        .collect::<Result<_>>()?;
    if caps.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Contract("cap levels must be strictly increasing".into()));
    }
    let (last, prev) = (&fields[fields.len() - 1], &fields[fields.len() - 2]);
    let dn = caps[caps.len() - 1] - caps[caps.len() - 2];
    let n = mesh.n_vertices();
    let rates: Vec<Option<f64>> = (0..n).map(|v| (!mesh.is_boundary(v)).then(|| (last.u[v] - prev.u[v]) / dn)).collect();
    let classes: Vec<VertexClass> = rates
        .iter()
        .map(|r| match r {
            None => VertexClass::Boundary,
            Some(r) if *r >= threshold => VertexClass::Divergent,
            Some(_) => VertexClass::Convergent,
        })
        .collect();

    // level set rate == threshold over fully interior triangles
    let mut points: HashMap<(usize, usize), Point> = HashMap::new();
    let mut segments = Vec::new();
    for tri in mesh.triangles() {
        let vals: Vec<f64> = match tri.iter().map(|&v| rates[v].map(|r| r - threshold)).collect::<Option<Vec<_>>>() {
            Some(v) => v,
            None => continue,
        };
        let mut cut = Vec::new();
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            let (fa, fb) = (vals[k], vals[(k + 1) % 3]);
            if (fa >= 0.0) != (fb >= 0.0) {
                let key = edge_key(a, b);
                let s = fa / (fa - fb);
                points.entry(key).or_insert_with(|| {
                    let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
                    if a < b {
                        pa.lerp(pb, s)
                    } else {
                        pb.lerp(pa, 1.0 - s)
                    }
                });
                cut.push(key);
            }
        }
        if cut.len() == 2 {
            segments.push((cut[0], cut[1]));
        }
    }
    let verts = d.vertices();
    let h = mesh.h_target();
    let mut interfaces = Vec::new();
    for (mut pts, closed) in chain_segments(&segments, &points) {
        if pts.len() < 2 {
            continue;
        }
        let raw = if closed { ParamCurve::closed(pts.clone()) } else { ParamCurve::new(pts.clone()) };
        if let Ok(raw) = raw {
            pts = raw.resample_uniform(h).into_samples();
        }
        smooth(&mut pts, closed, 3);
        let curve = match if closed { ParamCurve::closed(pts) } else { ParamCurve::new(pts) } {
            Ok(c) => c,
            Err(_) => continue,
        };
        let max_kf = f_curvature_profile(m, &curve).ok().and_then(|k| k.into_iter().map(f64::abs).reduce(f64::max));
        let end = |p: Point| {
            let (i, dist) = verts
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.dist(p)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("a domain has vertices");
            InterfaceEnd { point: p, nearest_vertex: i, distance: dist }
        };
        let ends = (!closed).then(|| {
            let s = curve.samples();
            [end(s[0]), end(s[s.len() - 1])]
        });
        interfaces.push(Interface { curve, max_kf, ends });
    }

    // components of divergent cells
    let nt = mesh.triangles().len();
    let divergent: Vec<bool> = mesh
        .triangles()
        .iter()
        .map(|tri| {
            let r: Vec<f64> = tri.iter().filter_map(|&v| rates[v]).collect();
            !r.is_empty() && r.iter().sum::<f64>() / r.len() as f64 >= threshold
        })
        .collect();
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        for k in 0..3 {
            by_edge.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_default().push(t);
        }
    }
    let mut label = vec![usize::MAX; nt];
    let mut components = Vec::new();
    for seed in 0..nt {
        if !divergent[seed] || label[seed] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut stack = vec![seed];
        label[seed] = id;
        let (mut cells, mut area) = (0, 0.0);
        while let Some(t) = stack.pop() {
            cells += 1;
            area += mesh.triangle_area(t);
            let tri = mesh.triangles()[t];
            for k in 0..3 {
                for &o in &by_edge[&edge_key(tri[k], tri[(k + 1) % 3])] {
                    if divergent[o] && label[o] == usize::MAX {
                        label[o] = id;
                        stack.push(o);
                    }
                }
            }
        }
        components.push(Component { cells, area });
    }

    Ok(DivergenceReport { mesh, h, threshold, caps, rates, classes, interfaces, components })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub check: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureVerdict {
    pub findings: Vec<Finding>,
}

impl StructureVerdict {
    pub fn passes(&self) -> bool {
        self.findings.iter().all(|f| f.status != CheckStatus::Fail)
    }

    pub fn finding(&self, check: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.check == check)
    }
}

impl fmt::Display for StructureVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.findings {
            let status = match x.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skipped",
            };
            writeln!(f, "{}: {status} ({})", x.check, x.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureOptions {
    /// Interface endpoints must lie within `endpoint_factor * h` of a vertex.
    pub endpoint_factor: f64,
    pub min_cells: usize,
}

impl Default for StructureOptions {
    fn default() -> Self {
        Self { endpoint_factor: 2.0, min_cells: 2 }
    }
}

pub fn verify_divergence_structure(m: &MetricModel, d: &ValidDomain, reports: &[DivergenceReport]) -> StructureVerdict {
    verify_divergence_structure_with(m, d, reports, &StructureOptions::default())
}

fn polylines_cross(a: &ParamCurve, b: &ParamCurve) -> bool {
    let segs = |c: &ParamCurve| -> Vec<(Point, Point)> {
        let s = c.samples();
        let n = if c.is_closed() { s.len() } else { s.len() - 1 };
        (0..n).map(|i| (s[i], s[(i + 1) % s.len()])).collect()
    };
    let (sa, sb) = (segs(a), segs(b));
    sa.iter().any(|(p, q)| sb.iter().any(|(r, s)| segments_intersect(*p, *q, *r, *s)))
}

pub fn verify_divergence_structure_with(
    _m: &MetricModel,
    _d: &ValidDomain,
    reports: &[DivergenceReport],
    opts: &StructureOptions,
) -> StructureVerdict {
    let mut findings = Vec::new();
    let mut ordered: Vec<&DivergenceReport> = reports.iter().collect();
    ordered.sort_by(|a, b| b.h.total_cmp(&a.h));

    let kf: Vec<Option<f64>> = ordered.iter().map(|r| r.max_interface_kf()).collect();
    let kf_text = ordered
        .iter()
        .zip(&kf)
        .map(|(r, k)| format!("h={}: {}", r.h, k.map_or("none".into(), |v| format!("{v:.4e}"))))
        .collect::<Vec<_>>()
        .join(", ");
    let status = if ordered.len() < 2 {
        CheckStatus::Skipped
    } else if kf.iter().all(|k| k.is_none()) {
        CheckStatus::Skipped
    } else if kf.iter().any(|k| k.is_none()) {
        CheckStatus::Fail
    } else {
        let v: Vec<f64> = kf.iter().map(|k| k.unwrap()).collect();
        if v.windows(2).all(|w| w[1] < w[0]) {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    };
    let detail = match (ordered.len(), kf.iter().all(|k| k.is_none())) {
        (0 | 1, _) => format!("needs two resolutions; {kf_text}"),
        (_, true) => format!("no interfaces at any resolution; {kf_text}"),
        _ => format!("max interface |k_f| by resolution: {kf_text}"),
    };
    findings.push(Finding { check: "interface_curvature_decreases", status, detail });

    let mut bad_ends = Vec::new();
    let mut n_ends = 0;
    for r in &ordered {
        for (k, i) in r.interfaces.iter().enumerate() {
            for e in i.ends.iter().flatten() {
                n_ends += 1;
                if e.distance > opts.endpoint_factor * r.h {
                    bad_ends.push(format!("h={} interface {k} ends {:.3e} from vertex {}", r.h, e.distance, e.nearest_vertex));
                }
            }
        }
    }
    findings.push(Finding {
        check: "interface_endpoints_at_vertices",
        status: if n_ends == 0 { CheckStatus::Skipped } else if bad_ends.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: if n_ends == 0 { "no interface endpoints".into() } else if bad_ends.is_empty() { format!("{n_ends} endpoints within {}h", opts.endpoint_factor) } else { bad_ends.join("; ") },
    });

    let mut small = Vec::new();
    let mut flat = Vec::new();
    let mut n_comp = 0;
    for r in &ordered {
        for (k, c) in r.components.iter().enumerate() {
            n_comp += 1;
            if c.cells < opts.min_cells {
                small.push(format!("h={} component {k} has {} cell(s)", r.h, c.cells));
            }
            if !(c.area > 0.0) {
                flat.push(format!("h={} component {k} has no area", r.h));
            }
        }
    }
    let status_of = |bad: &Vec<String>| if n_comp == 0 { CheckStatus::Skipped } else if bad.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail };
    findings.push(Finding {
        check: "components_not_isolated",
        status: status_of(&small),
        detail: if n_comp == 0 { "divergence set is empty".into() } else if small.is_empty() { format!("{n_comp} components") } else { small.join("; ") },
    });
    findings.push(Finding {
        check: "components_have_area",
        status: status_of(&flat),
        detail: if n_comp == 0 { "divergence set is empty".into() } else if flat.is_empty() { format!("{n_comp} components") } else { flat.join("; ") },
    });

    let mut crossings = Vec::new();
    let mut n_pairs = 0;
    for r in &ordered {
        for i in 0..r.interfaces.len() {
            for j in i + 1..r.interfaces.len() {
                n_pairs += 1;
                if polylines_cross(&r.interfaces[i].curve, &r.interfaces[j].curve) {
                    crossings.push(format!("h={} interfaces {i} and {j} meet", r.h));
                }
            }
        }
    }
    findings.push(Finding {
        check: "interfaces_disjoint",
        status: if n_pairs == 0 { CheckStatus::Skipped } else if crossings.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: if n_pairs == 0 { "fewer than two interfaces".into() } else if crossings.is_empty() { format!("{n_pairs} pairs checked") } else { crossings.join("; ") },
    });
    StructureVerdict { findings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{scherk_quadrilateral, ScherkParams};

    fn domain() -> (MetricModel, ValidDomain) {
        let m = MetricModel::euclidean_r3(1.0);
        let d = ValidDomain::new(&m, scherk_quadrilateral(&m, &ScherkParams::new(0.0, 2f64.ln(), 0.3, -0.3)).unwrap()).unwrap();
        (m, d)
    }

    fn synthetic(mesh: &Arc<TriMesh>, caps: &[f64], f: impl Fn(Point, f64) -> f64) -> Vec<SolutionField> {
        caps.iter()
            .map(|&n| SolutionField {
                mesh: mesh.clone(),
                u: mesh.vertices().iter().map(|&p| f(p, n)).collect(),
                cap: Some(n),
                residual_norm: 0.0,
                newton_iters: 0,
                shift: 0.0,
            })
            .collect()
    }

    #[test]
    fn needs_three_fields() {
        let (m, d) = domain();
        let mesh = Arc::new(crate::mesh::triangulate(&d, 0.1).unwrap());
        let f = synthetic(&mesh, &[1.0, 2.0], |_, _| 0.0);
        assert!(matches!(classify_convergence(&m, &d, &f, 0.5), Err(Error::Contract(_))));
    }

    #[test]
    fn bounded_sequence_is_convergent() {
        let (m, d) = domain();
        let mesh = Arc::new(crate::mesh::triangulate(&d, 0.1).unwrap());
        let f = synthetic(&mesh, &[2.0, 4.0, 8.0], |p, n| p.x - 1.0 / n);
        let r = classify_convergence(&m, &d, &f, 0.5).unwrap();
        assert!(r.divergence_set_is_empty());
        assert!(r.interfaces.is_empty());
        let v = verify_divergence_structure(&m, &d, &[r]);
        assert!(v.passes(), "{v}");
    }

    #[test]
    fn straight_interface_is_found_and_flat_in_r3() {
        // left half diverges: the interface is the vertical line x = 0, a
        // geodesic of the R3 model
        let (m, d) = domain();
        let mesh = Arc::new(crate::mesh::triangulate(&d, 0.04).unwrap());
        let f = synthetic(&mesh, &[2.0, 4.0, 8.0], |p, n| if p.x < 0.0 { n } else { 1.0 } + 0.0 * p.t);
        let r = classify_convergence(&m, &d, &f, 0.5).unwrap();
        assert_eq!(r.interfaces.len(), 1);
        let i = &r.interfaces[0];
        assert!(i.curve.samples().iter().all(|p| p.x.abs() < 0.04));
        assert_eq!(r.components.len(), 1);
        assert!(r.components[0].cells >= 2 && r.components[0].area > 0.0);
        assert!(r.count(VertexClass::Divergent) > 0 && r.count(VertexClass::Convergent) > 0);
        // the interface runs between the bottom and top edges, far from the
        // domain vertices, so the endpoint check fails
        let v = verify_divergence_structure(&m, &d, &[r]);
        assert_eq!(v.finding("interface_endpoints_at_vertices").unwrap().status, CheckStatus::Fail);
    }

    #[test]
    fn fake_chord_ending_mid_edge_fails() {
        let (m, d) = domain();
        let mesh = Arc::new(crate::mesh::triangulate(&d, 0.1).unwrap());
        let mid_c = Point::new(0.3, 0.4);
        let curve = ParamCurve::new(vec![Point::new(-0.3, 0.4), Point::new(0.0, 0.4), mid_c]).unwrap();
        let end = |p: Point| {
            let (i, dist) = d.vertices().iter().enumerate().map(|(i, v)| (i, v.dist(p))).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
            InterfaceEnd { point: p, nearest_vertex: i, distance: dist }
        };
        let report = DivergenceReport {
            mesh: mesh.clone(),
            h: 0.1,
            threshold: 0.5,
            caps: vec![2.0, 4.0, 8.0],
            rates: vec![None; mesh.n_vertices()],
            classes: vec![VertexClass::Boundary; mesh.n_vertices()],
            interfaces: vec![Interface { ends: Some([end(Point::new(-0.3, 0.4)), end(mid_c)]), curve, max_kf: Some(0.0) }],
            components: vec![Component { cells: 10, area: 0.1 }],
        };
        let v = verify_divergence_structure(&m, &d, &[report]);
        assert!(!v.passes());
        assert_eq!(v.finding("interface_endpoints_at_vertices").unwrap().status, CheckStatus::Fail);
        assert_eq!(v.finding("interface_curvature_decreases").unwrap().status, CheckStatus::Skipped);
    }

    #[test]
    fn crossing_interfaces_are_reported() {
        let (m, d) = domain();
        let mesh = Arc::new(crate::mesh::triangulate(&d, 0.1).unwrap());
        let a = ParamCurve::new(vec![Point::new(-0.2, 0.2), Point::new(0.2, 0.6)]).unwrap();
        let b = ParamCurve::new(vec![Point::new(-0.2, 0.6), Point::new(0.2, 0.2)]).unwrap();
        let report = DivergenceReport {
            mesh: mesh.clone(),
            h: 0.1,
            threshold: 0.5,
            caps: vec![2.0, 4.0, 8.0],
            rates: vec![None; mesh.n_vertices()],
            classes: vec![VertexClass::Boundary; mesh.n_vertices()],
            interfaces: vec![
                Interface { curve: a, max_kf: None, ends: None },
                Interface { curve: b, max_kf: None, ends: None },
            ],
            components: vec![Component { cells: 1, area: 0.0 }],
        };
        let v = verify_divergence_structure(&m, &d, &[report]);
        assert_eq!(v.finding("interfaces_disjoint").unwrap().status, CheckStatus::Fail);
        assert_eq!(v.finding("components_not_isolated").unwrap().status, CheckStatus::Fail);
        assert_eq!(v.finding("components_have_area").unwrap().status, CheckStatus::Fail);
    }
}
