//! Admissible domains: boundary arcs of kind A (`+inf`), B (`-inf`) and C
//! (finite data), their validation, admissible polygons and the structural
//! existence conditions.

mod examples;
mod polygon;

pub use examples::{scherk_quadrilateral, ScherkParams};
pub use polygon::{
    check_existence, check_existence_with, enumerate_polygons, enumerate_polygons_with, polygon_report,
    AdmissiblePolygon, Balance, ChordFailure, EnumerationOptions, ExistenceOptions, ExistenceVerdict,
    PolygonReport, PolygonSet, Side, Verdict,
};

use std::fmt;
use std::sync::Arc;

use crate::curves::{f_curvature_profile, f_length, AnalyticCurve, Curve, ParamCurve};
use crate::error::{Error, Result};
use crate::geometry::{polygon_centroid, polyline_self_intersection, segment_distance, signed_area, winding_number, Point};
use crate::metric::MetricModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Boundary value `+inf`; must be an f-geodesic.
    A,
    /// Boundary value `-inf`; must be an f-geodesic.
    B,
    /// Finite continuous data; must be f-convex.
    C,
}

impl EdgeKind {
    pub fn label(self) -> &'static str {
        match self {
            EdgeKind::A => "A",
            EdgeKind::B => "B",
            EdgeKind::C => "C",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "A" | "a" => Some(EdgeKind::A),
            "B" | "b" => Some(EdgeKind::B),
            "C" | "c" => Some(EdgeKind::C),
            _ => None,
        }
    }

    /// A and B swapped; C unchanged.
    pub fn mirrored(self) -> Self {
        match self {
            EdgeKind::A => EdgeKind::B,
            EdgeKind::B => EdgeKind::A,
            EdgeKind::C => EdgeKind::C,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub type DataFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// Finite boundary data on a C-edge.
#[derive(Clone)]
pub enum EdgeData {
    Constant(f64),
    Function(DataFn),
}

impl EdgeData {
    pub fn eval(&self, p: Point) -> f64 {
        match self {
            EdgeData::Constant(v) => *v,
            EdgeData::Function(f) => f(p),
        }
    }

    pub fn negated(&self) -> EdgeData {
        match self {
            EdgeData::Constant(v) => EdgeData::Constant(-v),
            EdgeData::Function(f) => {
                let f = f.clone();
                EdgeData::Function(Arc::new(move |p| -f(p)))
            }
        }
    }
}

impl fmt::Debug for EdgeData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeData::Constant(v) => write!(f, "Constant({v})"),
            EdgeData::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// Geometry of a boundary arc.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeCurve {
    Analytic(AnalyticCurve),
    Sampled(ParamCurve),
}

impl EdgeCurve {
    pub fn reversed(&self) -> EdgeCurve {
        match self {
            EdgeCurve::Analytic(c) => EdgeCurve::Analytic(c.reversed()),
            EdgeCurve::Sampled(c) => EdgeCurve::Sampled(c.reversed()),
        }
    }

    pub fn f_length(&self, m: &MetricModel) -> Result<f64> {
        match self {
            EdgeCurve::Analytic(c) => f_length(m, c),
            EdgeCurve::Sampled(c) => f_length(m, c),
        }
    }

    /// Polyline with samples on the curve and flat spacing at most about `spacing`.
    pub fn polyline(&self, spacing: f64) -> ParamCurve {
        match self {
            EdgeCurve::Analytic(c) => {
                let n = ((c.approx_flat_length() / spacing).ceil() as usize).clamp(2, 200_000);
                c.sample(n)
            }
            EdgeCurve::Sampled(c) => c.clone(),
        }
    }

    /// f-curvature at interior samples: `(sample index, point, k_f)`.
    pub fn f_curvature_samples(&self, m: &MetricModel, n: usize) -> Result<Vec<(usize, Point, f64)>> {
        match self {
            EdgeCurve::Analytic(c) => Ok((1..n)
                .map(|i| {
                    let r = i as f64 / n as f64;
                    (i, c.position(r), c.f_curvature_at(m, r))
                })
                .collect()),
            EdgeCurve::Sampled(c) => {
                let k = f_curvature_profile(m, c)?;
                Ok(k.into_iter().enumerate().map(|(i, v)| (i + 1, c.samples()[i + 1], v)).collect())
            }
        }
    }
}

impl Curve for EdgeCurve {
    fn knots(&self) -> Vec<f64> {
        match self {
            EdgeCurve::Analytic(c) => c.knots(),
            EdgeCurve::Sampled(c) => c.knots(),
        }
    }

    fn position(&self, r: f64) -> Point {
        match self {
            EdgeCurve::Analytic(c) => c.position(r),
            EdgeCurve::Sampled(c) => c.position(r),
        }
    }

    fn velocity(&self, r: f64) -> Point {
        match self {
            EdgeCurve::Analytic(c) => c.velocity(r),
            EdgeCurve::Sampled(c) => c.velocity(r),
        }
    }

    fn start(&self) -> Point {
        match self {
            EdgeCurve::Analytic(c) => c.start(),
            EdgeCurve::Sampled(c) => c.start(),
        }
    }

    fn end(&self) -> Point {
        match self {
            EdgeCurve::Analytic(c) => c.end(),
            EdgeCurve::Sampled(c) => c.end(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub kind: EdgeKind,
    pub curve: EdgeCurve,
    /// Present exactly when `kind == C`.
    pub data: Option<EdgeData>,
}

impl Edge {
    pub fn new(kind: EdgeKind, curve: EdgeCurve, data: Option<EdgeData>) -> Result<Self> {
        match (kind, &data) {
            (EdgeKind::C, None) => Err(Error::InvalidDomain("a C-edge needs finite boundary data".into())),
            (EdgeKind::A | EdgeKind::B, Some(_)) => {
                Err(Error::InvalidDomain(format!("an {kind}-edge carries infinite data, not a function")))
            }
            _ => Ok(Self { kind, curve, data }),
        }
    }

    pub fn a(curve: EdgeCurve) -> Self {
        Self { kind: EdgeKind::A, curve, data: None }
    }

    pub fn b(curve: EdgeCurve) -> Self {
        Self { kind: EdgeKind::B, curve, data: None }
    }

    pub fn c(curve: EdgeCurve, value: f64) -> Self {
        Self { kind: EdgeKind::C, curve, data: Some(EdgeData::Constant(value)) }
    }

    pub fn c_with(curve: EdgeCurve, data: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        Self { kind: EdgeKind::C, curve, data: Some(EdgeData::Function(Arc::new(data))) }
    }

    /// Finite data at `p` (C-edges only).
    pub fn data_at(&self, p: Point) -> Option<f64> {
        self.data.as_ref().map(|d| d.eval(p))
    }

    /// A and B exchanged, C data negated.
    pub fn mirrored(&self) -> Edge {
        Edge { kind: self.kind.mirrored(), curve: self.curve.clone(), data: self.data.as_ref().map(EdgeData::negated) }
    }
}

/// Cyclically ordered boundary arcs; vertex `i` is the start of edge `i`.
#[derive(Debug, Clone)]
pub struct AdmissibleDomain {
    edges: Vec<Edge>,
}

impl AdmissibleDomain {
    pub fn new(edges: Vec<Edge>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::InvalidDomain("a domain needs at least two boundary arcs".into()));
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> Vec<Point> {
        self.edges.iter().map(|e| e.curve.start()).collect()
    }

    pub fn has_kind(&self, kind: EdgeKind) -> bool {
        self.edges.iter().any(|e| e.kind == kind)
    }

    /// Same geometry with A and B exchanged and C data negated.
    pub fn mirrored(&self) -> AdmissibleDomain {
        AdmissibleDomain { edges: self.edges.iter().map(Edge::mirrored).collect() }
    }

    /// Replaces the kinds, keeping geometry; C-edges without data get `0`.
    pub fn relabeled(&self, kinds: &[EdgeKind]) -> Result<AdmissibleDomain> {
        if kinds.len() != self.edges.len() {
            return Err(Error::InvalidDomain(format!("{} labels for {} edges", kinds.len(), self.edges.len())));
        }
        let edges = self
            .edges
            .iter()
            .zip(kinds)
            .map(|(e, &k)| Edge {
                kind: k,
                curve: e.curve.clone(),
                data: match k {
                    EdgeKind::C => Some(e.data.clone().unwrap_or(EdgeData::Constant(0.0))),
                    _ => None,
                },
            })
            .collect();
        Ok(AdmissibleDomain { edges })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Closure,
    Orientation,
    Simplicity,
    SharedEndpointA,
    SharedEndpointB,
    GeodesicEdge,
    ConvexEdge,
    Chart,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Closure => "consecutive edges must share endpoints",
            Rule::Orientation => "boundary must be counter-clockwise",
            Rule::Simplicity => "boundary must be a simple closed curve",
            Rule::SharedEndpointA => "no two A share endpoint",
            Rule::SharedEndpointB => "no two B share endpoint",
            Rule::GeodesicEdge => "A and B edges must be f-geodesics",
            Rule::ConvexEdge => "C edges must be f-convex",
            Rule::Chart => "boundary must lie in the chart",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: Rule,
    pub edge: Option<usize>,
    /// Worst offending sample: index along the edge, position, value.
    pub worst: Option<(usize, Point, f64)>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        if let Some(e) = self.edge {
            write!(f, " (edge {e})")?;
        }
        if let Some((i, p, v)) = self.worst {
            write!(f, " worst sample {i} at ({:.6}, {:.6}): {v:.3e}", p.x, p.t)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    /// Bound on `|k_f|` along A- and B-edges.
    pub tol_geodesic: f64,
    /// C-edges need `k_f >= -tol_convex` (inward normal).
    pub tol_convex: f64,
    /// Allowed gap between consecutive edges.
    pub closure_tol: f64,
    /// Samples per analytic edge for the curvature test.
    pub curvature_samples: usize,
    /// Flat spacing of the boundary polyline used for geometric tests.
    pub spacing: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { tol_geodesic: 1e-4, tol_convex: 1e-4, closure_tol: 1e-8, curvature_samples: 400, spacing: 2e-3 }
    }
}

pub fn validate_domain(m: &MetricModel, d: &AdmissibleDomain) -> ValidationReport {
    validate_domain_with(m, d, &ValidationOptions::default())
}

pub fn validate_domain_with(m: &MetricModel, d: &AdmissibleDomain, opts: &ValidationOptions) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = d.len();
    let polylines: Vec<ParamCurve> = d.edges.iter().map(|e| e.curve.polyline(opts.spacing)).collect();

    for (i, pl) in polylines.iter().enumerate() {
        if let Some((k, p)) = pl.samples().iter().enumerate().find(|(_, p)| !m.in_chart(**p)) {
            report.violations.push(Violation { rule: Rule::Chart, edge: Some(i), worst: Some((k, *p, 0.0)) });
        }
    }
    if report.has(Rule::Chart) || m.require_flat().is_err() {
        return report;
    }

    for i in 0..n {
        let end = d.edges[i].curve.end();
        let next = d.edges[(i + 1) % n].curve.start();
        let gap = end.dist(next);
        if gap > opts.closure_tol {
            report.violations.push(Violation { rule: Rule::Closure, edge: Some(i), worst: Some((0, end, gap)) });
        }
    }

    for i in 0..n {
        let (k0, k1) = (d.edges[i].kind, d.edges[(i + 1) % n].kind);
        if k0 == k1 && k0 != EdgeKind::C {
            let rule = if k0 == EdgeKind::A { Rule::SharedEndpointA } else { Rule::SharedEndpointB };
            report.violations.push(Violation {
                rule,
                edge: Some(i),
                worst: Some((0, d.edges[i].curve.end(), 0.0)),
            });
        }
    }

    for (i, e) in d.edges.iter().enumerate() {
        let samples = match e.curve.f_curvature_samples(m, opts.curvature_samples) {
            Ok(s) => s,
            Err(_) => continue,
        };
        match e.kind {
            EdgeKind::A | EdgeKind::B => {
                if let Some(&(k, p, v)) = samples.iter().max_by(|a, b| a.2.abs().total_cmp(&b.2.abs())) {
                    if v.abs() > opts.tol_geodesic {
                        report.violations.push(Violation { rule: Rule::GeodesicEdge, edge: Some(i), worst: Some((k, p, v)) });
                    }
                }
            }
            EdgeKind::C => {
                if let Some(&(k, p, v)) = samples.iter().min_by(|a, b| a.2.total_cmp(&b.2)) {
                    if v < -opts.tol_convex {
                        report.violations.push(Violation { rule: Rule::ConvexEdge, edge: Some(i), worst: Some((k, p, v)) });
                    }
                }
            }
        }
    }

    if !report.has(Rule::Closure) {
        let ring = closed_ring(&polylines);
        if let Some((a, b)) = polyline_self_intersection(&ring, true) {
            report.violations.push(Violation { rule: Rule::Simplicity, edge: None, worst: Some((a, ring[a], b as f64)) });
        } else if signed_area(&ring) <= 0.0 {
            report.violations.push(Violation { rule: Rule::Orientation, edge: None, worst: None });
        }
    }
    report
}

/// Closed ring from per-edge polylines (shared endpoints kept once).
fn closed_ring(polylines: &[ParamCurve]) -> Vec<Point> {
    let mut ring = Vec::new();
    for pl in polylines {
        let s = pl.samples();
        ring.extend_from_slice(&s[..s.len() - 1]);
    }
    ring
}

/// A domain that passed validation, with cached edge lengths and boundary geometry.
#[derive(Debug, Clone)]
pub struct ValidDomain {
    model: MetricModel,
    domain: AdmissibleDomain,
    options: ValidationOptions,
    edge_lengths: Vec<f64>,
    polylines: Vec<ParamCurve>,
    ring: Vec<Point>,
    area: f64,
    diameter: f64,
}

impl ValidDomain {
    pub fn new(m: &MetricModel, d: AdmissibleDomain) -> Result<Self> {
        Self::with_options(m, d, ValidationOptions::default())
    }

    pub fn with_options(m: &MetricModel, d: AdmissibleDomain, options: ValidationOptions) -> Result<Self> {
        let report = validate_domain_with(m, &d, &options);
        if !report.is_valid() {
            return Err(Error::InvalidDomain(report.to_string()));
        }
        let edge_lengths = d.edges.iter().map(|e| e.curve.f_length(m)).collect::<Result<Vec<_>>>()?;
        let polylines: Vec<ParamCurve> = d.edges.iter().map(|e| e.curve.polyline(options.spacing)).collect();
        let ring = closed_ring(&polylines);
        let area = signed_area(&ring);
        let (mut lo, mut hi) = (ring[0], ring[0]);
        for p in &ring {
            lo = Point::new(lo.x.min(p.x), lo.t.min(p.t));
            hi = Point::new(hi.x.max(p.x), hi.t.max(p.t));
        }
        let diameter = lo.dist(hi);
        Ok(Self { model: m.clone(), domain: d, options, edge_lengths, polylines, ring, area, diameter })
    }

    pub fn model(&self) -> &MetricModel {
        &self.model
    }

    pub fn domain(&self) -> &AdmissibleDomain {
        &self.domain
    }

    pub fn options(&self) -> &ValidationOptions {
        &self.options
    }

    pub fn edges(&self) -> &[Edge] {
        self.domain.edges()
    }

    pub fn vertices(&self) -> Vec<Point> {
        self.domain.vertices()
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        self.edge_lengths[i]
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths.iter().sum()
    }

    /// Boundary polyline of edge `i` at the validation spacing.
    pub fn edge_polyline(&self, i: usize) -> &ParamCurve {
        &self.polylines[i]
    }

    /// Closed boundary ring (counter-clockwise).
    pub fn boundary(&self) -> &[Point] {
        &self.ring
    }

    /// Flat area.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Area centroid of the boundary ring.
    pub fn centroid(&self) -> Point {
        polygon_centroid(&self.ring)
    }

    /// Diagonal of the bounding box.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        let n = self.ring.len();
        (0..n).map(|i| segment_distance(p, self.ring[i], self.ring[(i + 1) % n])).fold(f64::INFINITY, f64::min)
    }

    /// Inside the closure of the domain, up to `tol` from the boundary.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        winding_number(&self.ring, p) != 0 || self.distance_to_boundary(p) <= tol
    }

    /// Index of the edge whose polyline is nearest to `p`, and the distance.
    pub fn nearest_edge(&self, p: Point) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, pl) in self.polylines.iter().enumerate() {
            let d = pl.samples().windows(2).map(|w| segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::ReaperFrame;

    fn square(kind: EdgeKind) -> AdmissibleDomain {
        let p = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let edges = (0..4)
            .map(|i| {
                let curve = EdgeCurve::Analytic(AnalyticCurve::Segment { from: p[i], to: p[(i + 1) % 4] });
                match kind {
                    EdgeKind::C => Edge::c(curve, 0.0),
                    k => Edge { kind: k, curve, data: None },
                }
            })
            .collect();
        AdmissibleDomain::new(edges).unwrap()
    }

    #[test]
    fn scherk_is_valid() {
        let m = MetricModel::euclidean_r3(1.0);
        let d = scherk_quadrilateral(&m, &ScherkParams::new(0.0, 2f64.ln(), 0.3, -0.3)).unwrap();
        let r = validate_domain(&m, &d);
        assert!(r.is_valid(), "{r}");
        let vd = ValidDomain::new(&m, d).unwrap();
        assert!(vd.area() > 0.0);
        assert!(vd.contains(vd.centroid(), 0.0));
    }

    #[test]
    fn adjacent_a_edges_are_rejected() {
        let m = MetricModel::euclidean_r3(1.0);
        let d = scherk_quadrilateral(&m, &ScherkParams::new(0.0, 2f64.ln(), 0.3, -0.3)).unwrap();
        let d = d.relabeled(&[EdgeKind::A, EdgeKind::A, EdgeKind::A, EdgeKind::C]).unwrap();
        let r = validate_domain(&m, &d);
        assert!(r.has(Rule::SharedEndpointA));
        assert!(r.to_string().contains("no two A share endpoint"));
    }

    #[test]
    fn horizontal_sides_are_not_geodesics() {
        let m = MetricModel::euclidean_r3(1.0);
        let r = validate_domain(&m, &square(EdgeKind::A));
        let bad: Vec<usize> = r.violations.iter().filter(|v| v.rule == Rule::GeodesicEdge).filter_map(|v| v.edge).collect();
        assert_eq!(bad, vec![0, 2]);
        let worst = r.violations.iter().find(|v| v.rule == Rule::GeodesicEdge).unwrap().worst.unwrap();
        assert!((worst.2.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn convexity_uses_the_inward_normal() {
        let m = MetricModel::euclidean_r3(1.0);
        // bottom side: k_f = 0 - <(0,1),(0,1)> = -1 < 0: not f-convex
        let r = validate_domain(&m, &square(EdgeKind::C));
        let bad: Vec<usize> = r.violations.iter().filter(|v| v.rule == Rule::ConvexEdge).filter_map(|v| v.edge).collect();
        assert_eq!(bad, vec![0]);
        let flat = MetricModel::euclidean_r3(0.0);
        assert!(validate_domain(&flat, &square(EdgeKind::C)).is_valid());
    }

    #[test]
    fn orientation_closure_and_simplicity() {
        let flat = MetricModel::euclidean_r3(0.0);
        let sq = square(EdgeKind::C);
        let reversed: Vec<Edge> = sq
            .edges()
            .iter()
            .rev()
            .map(|e| Edge { curve: e.curve.reversed(), ..e.clone() })
            .collect();
        let r = validate_domain(&flat, &AdmissibleDomain::new(reversed).unwrap());
        assert!(r.has(Rule::Orientation));

        let mut open = sq.edges().to_vec();
        open[1].curve = EdgeCurve::Analytic(AnalyticCurve::Segment { from: Point::new(1.0, 0.1), to: Point::new(1.0, 1.0) });
        assert!(validate_domain(&flat, &AdmissibleDomain::new(open).unwrap()).has(Rule::Closure));

        let p = [Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        let bow: Vec<Edge> = (0..4)
            .map(|i| Edge::c(EdgeCurve::Analytic(AnalyticCurve::Segment { from: p[i], to: p[(i + 1) % 4] }), 0.0))
            .collect();
        assert!(validate_domain(&flat, &AdmissibleDomain::new(bow).unwrap()).has(Rule::Simplicity));
    }

    #[test]
    fn edge_constructor_contracts() {
        let seg = EdgeCurve::Analytic(AnalyticCurve::Segment { from: Point::new(0.0, 0.0), to: Point::new(0.0, 1.0) });
        assert!(Edge::new(EdgeKind::C, seg.clone(), None).is_err());
        assert!(Edge::new(EdgeKind::A, seg.clone(), Some(EdgeData::Constant(1.0))).is_err());
        assert!(Edge::new(EdgeKind::B, seg, None).is_ok());
        let frame = ReaperFrame::from_model(&MetricModel::euclidean_r3(1.0)).unwrap();
        assert!(frame.reaper(0.0, -0.2, 0.2).is_ok());
    }
}
