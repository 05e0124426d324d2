//! Scherk-type quadrilaterals bounded by two grim reapers and two drift lines.

use crate::curves::ReaperFrame;
use crate::error::{Error, Result};
use crate::geometry::signed_area;
use crate::metric::MetricModel;

use super::{AdmissibleDomain, Edge, EdgeCurve, EdgeData, EdgeKind};

/// Reapers at heights `a < b` over the frame window `[s, r]`, closed by the
/// drift lines at `s` and `r`. Edges are ordered counter-clockwise: bottom
/// reaper, right line, top reaper, left line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScherkParams {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub s: f64,
    pub kinds: [EdgeKind; 4],
    /// Constant data, used on C-edges only.
    pub data: [f64; 4],
}

impl ScherkParams {
    /// A on both reapers, C with data 0 on both lines.
    pub fn new(a: f64, b: f64, r: f64, s: f64) -> Self {
        Self { a, b, r, s, kinds: [EdgeKind::A, EdgeKind::C, EdgeKind::A, EdgeKind::C], data: [0.0; 4] }
    }

    pub fn with_kinds(mut self, kinds: [EdgeKind; 4]) -> Self {
        self.kinds = kinds;
        self
    }

    pub fn with_data(mut self, data: [f64; 4]) -> Self {
        self.data = data;
        self
    }
}

pub fn scherk_quadrilateral(m: &MetricModel, p: &ScherkParams) -> Result<AdmissibleDomain> {
    let frame = ReaperFrame::from_model(m).map_err(|e| Error::InvalidDomain(e.to_string()))?;
    let hw = frame.half_width();
    if !(p.a < p.b) {
        return Err(Error::InvalidDomain(format!("need a < b, got a = {}, b = {}", p.a, p.b)));
    }
    if !(-hw < p.s && p.s < p.r && p.r < hw) {
        return Err(Error::InvalidDomain(format!(
            "need -{hw} < s < r < {hw} (reaper window), got s = {}, r = {}",
            p.s, p.r
        )));
    }
    let curves = [
        EdgeCurve::Analytic(frame.reaper(p.a, p.s, p.r)?),
        EdgeCurve::Analytic(frame.line(p.r, frame.reaper_height(p.a, p.r), frame.reaper_height(p.b, p.r))),
        EdgeCurve::Analytic(frame.reaper(p.b, p.r, p.s)?),
        EdgeCurve::Analytic(frame.line(p.s, frame.reaper_height(p.b, p.s), frame.reaper_height(p.a, p.s))),
    ];
    let edges: Vec<Edge> = curves
        .into_iter()
        .zip(p.kinds.iter().zip(p.data))
        .map(|(curve, (&kind, value))| Edge {
            kind,
            curve,
            data: (kind == EdgeKind::C).then_some(EdgeData::Constant(value)),
        })
        .collect();
    let corners: Vec<_> = edges.iter().map(|e| crate::curves::Curve::start(&e.curve)).collect();
    debug_assert!(signed_area(&corners) > 0.0, "the reaper frame is right-handed");
    AdmissibleDomain::new(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Curve;
    use crate::domain::{validate_domain, ValidDomain};
    use crate::geometry::Point;

    #[test]
    fn r3_edge_lengths_match_closed_forms() {
        let m = MetricModel::euclidean_r3(1.0);
        let r = 0.3f64;
        let d = ValidDomain::new(&m, scherk_quadrilateral(&m, &ScherkParams::new(0.0, 2f64.ln(), r, -r)).unwrap()).unwrap();
        let sec = 1.0 / r.cos();
        assert!((d.edge_length(0) - 2.0 * r.tan()).abs() < 1e-13);
        assert!((d.edge_length(1) - sec).abs() < 1e-13);
        assert!((d.edge_length(2) - 4.0 * r.tan()).abs() < 1e-13);
        assert!((d.edge_length(3) - sec).abs() < 1e-13);
    }

    #[test]
    fn degenerate_height_shrinks_lines() {
        let m = MetricModel::euclidean_r3(1.0);
        let mut prev = f64::INFINITY;
        for b in [1e-1, 1e-3, 1e-6] {
            let d = scherk_quadrilateral(&m, &ScherkParams::new(0.0, b, 0.3, -0.3)).unwrap();
            let l = d.edge(1).curve.f_length(&m).unwrap();
            assert!(l < prev && l < 2.0 * b);
            prev = l;
        }
        assert!(scherk_quadrilateral(&m, &ScherkParams::new(0.0, 0.0, 0.3, -0.3)).is_err());
    }

    #[test]
    fn h2xr_quadrilateral_is_admissible() {
        let m = MetricModel::hyperbolic_h2xr(1.0);
        let frame = ReaperFrame::from_model(&m).unwrap();
        // window (-pi/4, pi/4) in the unnormalized tilted coordinate xi = X / k
        assert!((frame.half_width() / frame.k - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let d = scherk_quadrilateral(&m, &ScherkParams::new(0.0, 0.5, 0.5, -0.5)).unwrap();
        assert!(validate_domain(&m, &d).is_valid());
        assert!(scherk_quadrilateral(&m, &ScherkParams::new(0.0, 0.5, 1.2, -0.5)).is_err());
        let e = d.edge(1);
        let dir = e.curve.end() - e.curve.start();
        assert!(dir.cross(Point::new(1.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn ordering_is_enforced() {
        let m = MetricModel::euclidean_r3(1.0);
        assert!(scherk_quadrilateral(&m, &ScherkParams::new(0.0, 1.0, -0.3, 0.3)).is_err());
        assert!(scherk_quadrilateral(&m, &ScherkParams::new(0.0, 1.0, 1.6, 0.3)).is_err());
        assert!(scherk_quadrilateral(&MetricModel::custom("x", 1.0, |_| 1.0, |_| 0.0), &ScherkParams::new(0.0, 1.0, 0.3, -0.3)).is_err());
    }
}
