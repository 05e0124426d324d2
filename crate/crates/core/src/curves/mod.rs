//! f-length, f-curvature and f-geodesics of curves in the chart.
//!
//! The f-length of `gamma` is `L_f = int rho(x) e^{ct} |gamma'| dr` and the
//! scalar f-curvature is `k_f = e^{-ct/2} (kappa - <V, N>)`, where `kappa` is
//! the flat curvature, `N` the left unit normal and `V` the drift. A curve is
//! an f-geodesic exactly when `k_f` vanishes.

mod analytic;
mod geodesic;
pub mod quadrature;

pub use analytic::{AnalyticCurve, ReaperFrame};
pub use geodesic::{connect_geodesic, shoot_geodesic, ConnectOptions, GeodesicShot, ShootOptions, Termination};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::metric::MetricModel;

/// A parameterized planar curve.
pub trait Curve {
    /// Parameter breakpoints; the integrand may be non-smooth only there.
    fn knots(&self) -> Vec<f64>;
    fn position(&self, r: f64) -> Point;
    fn velocity(&self, r: f64) -> Point;

    fn start(&self) -> Point {
        self.position(self.knots()[0])
    }

    fn end(&self) -> Point {
        let k = self.knots();
        self.position(k[k.len() - 1])
    }
}

/// Sampled curve; linear between consecutive samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCurve {
    samples: Vec<Point>,
    closed: bool,
}

impl ParamCurve {
    /// At least two samples, consecutive samples distinct.
    pub fn new(samples: Vec<Point>) -> Result<Self> {
        Self::checked(samples, false)
    }

    pub fn closed(samples: Vec<Point>) -> Result<Self> {
        Self::checked(samples, true)
    }

    fn checked(samples: Vec<Point>, closed: bool) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidCurve("a curve needs at least two samples".into()));
        }
        if let Some(i) = samples.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidCurve(format!("sample {i} is not finite")));
        }
        if let Some(i) = samples.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::InvalidCurve(format!("samples {i} and {} coincide", i + 1)));
        }
        Ok(Self { samples, closed })
    }

    pub(crate) fn from_samples_unchecked(samples: Vec<Point>) -> Self {
        Self { samples, closed: false }
    }

    pub fn samples(&self) -> &[Point] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Point> {
        self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn segment_count(&self) -> usize {
        if self.closed {
            self.samples.len()
        } else {
            self.samples.len() - 1
        }
    }

    fn segment(&self, i: usize) -> (Point, Point) {
        let n = self.samples.len();
        (self.samples[i], self.samples[(i + 1) % n])
    }

    pub fn flat_length(&self) -> f64 {
        (0..self.segment_count()).map(|i| {
            let (a, b) = self.segment(i);
            a.dist(b)
        }).sum()
    }

    pub fn max_segment(&self) -> f64 {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                a.dist(b)
            })
            .fold(0.0, f64::max)
    }

    pub fn reversed(&self) -> ParamCurve {
        let mut s = self.samples.clone();
        s.reverse();
        Self { samples: s, closed: self.closed }
    }

    /// Joins `other` after `self`; the shared endpoint is kept once.
    pub fn concat(&self, other: &ParamCurve) -> Result<ParamCurve> {
        let mut s = self.samples.clone();
        let skip = usize::from(other.samples[0] == *s.last().expect("non-empty"));
        s.extend_from_slice(&other.samples[skip..]);
        ParamCurve::new(s)
    }

    /// Resamples uniformly in flat arclength with spacing at most `spacing`.
    pub fn resample_uniform(&self, spacing: f64) -> ParamCurve {
        let total = self.flat_length();
        let n = ((total / spacing).ceil() as usize).max(1);
        let mut cumulative = Vec::with_capacity(self.samples.len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        for w in self.samples.windows(2) {
            acc += w[0].dist(w[1]);
            cumulative.push(acc);
        }
        let mut out = Vec::with_capacity(n + 1);
        let mut seg = 0;
        for i in 0..=n {
            let target = total * i as f64 / n as f64;
            while seg + 2 < cumulative.len() && cumulative[seg + 1] < target {
                seg += 1;
            }
            let len = cumulative[seg + 1] - cumulative[seg];
            let s = if len > 0.0 { ((target - cumulative[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
            out.push(self.samples[seg].lerp(self.samples[seg + 1], s));
        }
        out[n] = *self.samples.last().expect("non-empty");
        out.dedup();
        ParamCurve::from_samples_unchecked(out)
    }

    /// Largest Euclidean distance from a sample of `self` to the polyline `other`.
    pub fn sup_distance_to(&self, other: &ParamCurve) -> f64 {
        self.samples
            .iter()
            .map(|&p| {
                other
                    .samples
                    .windows(2)
                    .map(|w| crate::geometry::segment_distance(p, w[0], w[1]))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

impl Curve for ParamCurve {
    fn knots(&self) -> Vec<f64> {
        (0..=self.segment_count()).map(|i| i as f64).collect()
    }

    fn position(&self, r: f64) -> Point {
        let nseg = self.segment_count();
        let i = (r.floor().max(0.0) as usize).min(nseg - 1);
        let (a, b) = self.segment(i);
        a.lerp(b, r - i as f64)
    }

    fn velocity(&self, r: f64) -> Point {
        let nseg = self.segment_count();
        let i = (r.floor().max(0.0) as usize).min(nseg - 1);
        let (a, b) = self.segment(i);
        b - a
    }

    fn start(&self) -> Point {
        self.samples[0]
    }

    fn end(&self) -> Point {
        if self.closed {
            self.samples[0]
        } else {
            self.samples[self.samples.len() - 1]
        }
    }
}

/// `int rho(x) e^{ct} |gamma'(r)| dr`, integrated piecewise between knots.
pub fn f_length<C: Curve + ?Sized>(m: &MetricModel, curve: &C) -> Result<f64> {
    m.require_flat()?;
    let knots = curve.knots();
    let mut outside = None;
    let mut total = 0.0;
    for w in knots.windows(2) {
        total += quadrature::integrate(
            |r| {
                let p = curve.position(r);
                if !m.in_chart(p) {
                    outside.get_or_insert(p);
                    return 0.0;
                }
                m.line_weight_unchecked(p) * curve.velocity(r).norm()
            },
            w[0],
            w[1],
            1e-13,
            1e-15,
        );
    }
    match outside {
        Some(p) => Err(Error::OutsideChart(p)),
        None => Ok(total),
    }
}

/// Signed circumscribed-circle curvature of three points (positive when turning left).
pub fn three_point_curvature(a: Point, b: Point, c: Point) -> f64 {
    let denom = a.dist(b) * b.dist(c) * a.dist(c);
    if denom == 0.0 {
        return 0.0;
    }
    2.0 * (b - a).cross(c - b) / denom
}

/// f-curvature at the interior sample `index`.
pub fn f_curvature(m: &MetricModel, curve: &ParamCurve, index: usize) -> Result<f64> {
    m.require_flat()?;
    let n = curve.samples.len();
    let (a, b, c) = if curve.closed {
        (curve.samples[(index + n - 1) % n], curve.samples[index % n], curve.samples[(index + 1) % n])
    } else {
        if index == 0 || index + 1 >= n {
            return Err(Error::InvalidCurve(format!(
                "f-curvature needs an interior sample, got index {index} of {n}"
            )));
        }
        (curve.samples[index - 1], curve.samples[index], curve.samples[index + 1])
    };
    if !m.in_chart(b) {
        return Err(Error::OutsideChart(b));
    }
    let kappa = three_point_curvature(a, b, c);
    let normal = (c - a).normalized().perp();
    let v = m.drift_unchecked(b);
    Ok((-0.5 * m.c() * b.t).exp() * (kappa - v.dot(normal)))
}

/// f-curvature at every interior sample.
pub fn f_curvature_profile(m: &MetricModel, curve: &ParamCurve) -> Result<Vec<f64>> {
    let n = curve.samples.len();
    let range = if curve.closed { 0..n } else { 1..n.saturating_sub(1) };
    range.map(|i| f_curvature(m, curve, i)).collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{E, PI};

    use super::*;

    fn reaper_samples(n: usize, x0: f64, x1: f64) -> ParamCurve {
        let pts = (0..=n)
            .map(|i| {
                let x = x0 + (x1 - x0) * i as f64 / n as f64;
                Point::new(x, -x.cos().ln())
            })
            .collect();
        ParamCurve::new(pts).unwrap()
    }

    #[test]
    fn vertical_segment_length() {
        let m = MetricModel::euclidean_r3(1.0);
        let seg = ParamCurve::new(vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
        assert!((f_length(&m, &seg).unwrap() - (E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn analytic_reaper_length_is_exact() {
        let m = MetricModel::euclidean_r3(1.0);
        let f = ReaperFrame::from_model(&m).unwrap();
        let arc = f.reaper(0.0, -0.3, 0.3).unwrap();
        let exact = 2.0 * 0.3f64.tan();
        assert!((f_length(&m, &arc).unwrap() - exact).abs() < 1e-14);
        // a polyline converges at second order
        let coarse = f_length(&m, &reaper_samples(200, -0.3, 0.3)).unwrap();
        let fine = f_length(&m, &reaper_samples(400, -0.3, 0.3)).unwrap();
        let ratio = (coarse - exact).abs() / (fine - exact).abs();
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn flat_model_length_is_flat_length() {
        let m = MetricModel::euclidean_r3(0.0);
        let seg = ParamCurve::new(vec![Point::new(0.1, 0.2), Point::new(1.1, -0.3), Point::new(2.0, 0.0)]).unwrap();
        assert!((f_length(&m, &seg).unwrap() - seg.flat_length()).abs() < 1e-14);
    }

    #[test]
    fn outside_chart_errors() {
        let m = MetricModel::euclidean_r3(1.0);
        let seg = ParamCurve::new(vec![Point::new(0.0, 0.0), Point::new(0.0, 30.0)]).unwrap();
        assert!(matches!(f_length(&m, &seg), Err(Error::OutsideChart(_))));
    }

    #[test]
    fn f_curvature_examples() {
        let m = MetricModel::euclidean_r3(1.0);
        let vertical = ParamCurve::new((0..5).map(|i| Point::new(0.0, i as f64 * 0.1)).collect()).unwrap();
        for k in f_curvature_profile(&m, &vertical).unwrap() {
            assert!(k.abs() < 1e-15);
        }
        let reaper = reaper_samples(1000, -0.5, 0.5);
        let k0 = f_curvature(&m, &reaper, 500).unwrap();
        assert!(k0.abs() < 1e-5, "{k0}");

        let flat = MetricModel::euclidean_r3(0.0);
        let radius = 2.0;
        let circle: Vec<Point> =
            (0..400).map(|i| Point::from_angle(2.0 * PI * i as f64 / 400.0) * radius).collect();
        let ccw = ParamCurve::closed(circle.clone()).unwrap();
        for k in f_curvature_profile(&flat, &ccw).unwrap() {
            assert!((k - 1.0 / radius).abs() < 1e-12);
        }
        let cw = ccw.reversed();
        assert!((f_curvature(&flat, &cw, 7).unwrap() + 1.0 / radius).abs() < 1e-12);
        assert!(f_curvature(&m, &vertical, 0).is_err());
        assert!(f_curvature(&m, &vertical, 4).is_err());
    }

    #[test]
    fn resample_keeps_endpoints_and_spacing() {
        let c = reaper_samples(37, -1.0, 1.2);
        let r = c.resample_uniform(0.01);
        assert_eq!(r.samples()[0], c.samples()[0]);
        assert_eq!(r.samples().last(), c.samples().last());
        assert!(r.max_segment() <= 0.01 + 1e-12);
    }

    #[test]
    fn invalid_curves_are_rejected() {
        assert!(ParamCurve::new(vec![Point::new(0.0, 0.0)]).is_err());
        assert!(ParamCurve::new(vec![Point::new(0.0, 0.0), Point::new(0.0, 0.0)]).is_err());
        assert!(ParamCurve::new(vec![Point::new(0.0, 0.0), Point::new(f64::NAN, 0.0)]).is_err());
    }

    mod props {
        use proptest::prelude::*;

        use super::*;

        fn polyline() -> impl Strategy<Value = ParamCurve> {
            prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 3..12).prop_filter_map("distinct", |v| {
                ParamCurve::new(v.into_iter().map(|(x, t)| Point::new(x, t)).collect()).ok()
            })
        }

        proptest! {
            #[test]
            fn length_is_additive_and_reversal_invariant(c in polyline(), split in 1usize..10) {
                let m = MetricModel::hyperbolic_h2xr(0.8);
                let n = c.len();
                let k = 1 + split % (n - 1);
                prop_assume!(k < n - 1);
                let first = ParamCurve::new(c.samples()[..=k].to_vec()).unwrap();
                let second = ParamCurve::new(c.samples()[k..].to_vec()).unwrap();
                let whole = f_length(&m, &c).unwrap();
                let parts = f_length(&m, &first).unwrap() + f_length(&m, &second).unwrap();
                prop_assert!((whole - parts).abs() <= 1e-12 * whole);
                let rev = f_length(&m, &c.reversed()).unwrap();
                prop_assert!((whole - rev).abs() <= 1e-12 * whole);
                prop_assert!(whole >= 0.0);
            }

            #[test]
            fn f_curvature_flips_with_orientation(c in polyline()) {
                let m = MetricModel::euclidean_r3(1.0);
                let n = c.len();
                let rev = c.reversed();
                for i in 1..n - 1 {
                    let a = f_curvature(&m, &c, i).unwrap();
                    let b = f_curvature(&m, &rev, n - 1 - i).unwrap();
                    prop_assert!((a + b).abs() <= 1e-9 * (1.0 + a.abs()));
                }
            }
        }
    }
}
