//! Closed-form f-geodesics of the constant-drift models.
//!
//! When the drift `V` is constant with `k = |V| > 0`, write points in the
//! orthonormal frame `(e1, e2)` with `e2 = V / k`. The f-geodesics are the
//! lines parallel to `e2` and the translates of the grim reaper
//! `Y = -ln(cos(k X)) / k`, `|X| < pi / (2k)`. For `R^3` with `c = 1` this is
//! `t = -ln cos x`; for `H^2 x R` it is the reaper in the direction
//! `tau = d_x + c d_t`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::metric::MetricModel;

use super::{Curve, ParamCurve};

/// Orthonormal frame adapted to a constant drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReaperFrame {
    pub e1: Point,
    pub e2: Point,
    pub k: f64,
}

impl ReaperFrame {
    pub fn from_drift(v: Point) -> Result<Self> {
        let k = v.norm();
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidCurve("reaper frame needs a non-zero drift".into()));
        }
        let e2 = v * (1.0 / k);
        Ok(Self { e1: Point::new(e2.t, -e2.x), e2, k })
    }

    pub fn from_model(m: &MetricModel) -> Result<Self> {
        let v = m
            .constant_drift()
            .ok_or_else(|| Error::InvalidCurve(format!("model '{}' has no constant drift", m.name())))?;
        Self::from_drift(v)
    }

    pub fn to_chart(&self, x: f64, y: f64) -> Point {
        self.e1 * x + self.e2 * y
    }

    pub fn from_chart(&self, p: Point) -> (f64, f64) {
        (p.dot(self.e1), p.dot(self.e2))
    }

    /// Half-width `pi / (2k)` of the reaper window in the frame coordinate.
    pub fn half_width(&self) -> f64 {
        FRAC_PI_2 / self.k
    }

    /// `|tau|^2 = 1 + c^2` for `tau = (1, c)`; equals `k^2`.
    pub fn tau_norm_sq(&self) -> f64 {
        self.k * self.k
    }

    pub fn reaper_height(&self, offset: f64, x: f64) -> f64 {
        offset - (self.k * x).cos().ln() / self.k
    }

    pub fn reaper_point(&self, offset: f64, x: f64) -> Point {
        self.to_chart(x, self.reaper_height(offset, x))
    }

    /// Reaper arc at height `offset`, traversed from `x_from` to `x_to`.
    pub fn reaper(&self, offset: f64, x_from: f64, x_to: f64) -> Result<AnalyticCurve> {
        let hw = self.half_width();
        if x_from.abs() >= hw || x_to.abs() >= hw {
            return Err(Error::InvalidCurve(format!(
                "reaper window must lie inside (-{hw}, {hw})"
            )));
        }
        if x_from == x_to {
            return Err(Error::InvalidCurve("degenerate reaper arc".into()));
        }
        Ok(AnalyticCurve::Reaper { frame: *self, offset, x_from, x_to })
    }

    /// Segment parallel to the drift at frame abscissa `x`.
    pub fn line(&self, x: f64, y_from: f64, y_to: f64) -> AnalyticCurve {
        AnalyticCurve::Segment { from: self.to_chart(x, y_from), to: self.to_chart(x, y_to) }
    }
}

/// Curves with exact position, velocity and acceleration, parameter `r` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticCurve {
    Segment { from: Point, to: Point },
    Reaper { frame: ReaperFrame, offset: f64, x_from: f64, x_to: f64 },
}

impl AnalyticCurve {
    pub fn acceleration(&self, r: f64) -> Point {
        match *self {
            AnalyticCurve::Segment { .. } => Point::default(),
            AnalyticCurve::Reaper { frame, x_from, x_to, .. } => {
                let dx = x_to - x_from;
                let x = x_from + r * dx;
                let sec = 1.0 / (frame.k * x).cos();
                frame.e2 * (dx * dx * frame.k * sec * sec)
            }
        }
    }

    /// Exact signed flat curvature (left normal) at parameter `r`.
    pub fn flat_curvature(&self, r: f64) -> f64 {
        let v = self.velocity(r);
        let a = self.acceleration(r);
        v.cross(a) / v.norm().powi(3)
    }

    /// Exact f-curvature `e^{-ct/2}(kappa - <V, N>)` at parameter `r`.
    pub fn f_curvature_at(&self, m: &MetricModel, r: f64) -> f64 {
        let p = self.position(r);
        let n = self.velocity(r).normalized().perp();
        let v = m.drift_unchecked(p);
        (-0.5 * m.c() * p.t).exp() * (self.flat_curvature(r) - v.dot(n))
    }

    pub fn reversed(&self) -> AnalyticCurve {
        match *self {
            AnalyticCurve::Segment { from, to } => AnalyticCurve::Segment { from: to, to: from },
            AnalyticCurve::Reaper { frame, offset, x_from, x_to } => {
                AnalyticCurve::Reaper { frame, offset, x_from: x_to, x_to: x_from }
            }
        }
    }

    /// `n + 1` samples uniform in the parameter.
    pub fn sample(&self, n: usize) -> ParamCurve {
        let n = n.max(1);
        let pts = (0..=n).map(|i| self.position(i as f64 / n as f64)).collect();
        ParamCurve::from_samples_unchecked(pts)
    }

    /// Rough flat length from a fixed sampling, used for choosing sample counts.
    pub fn approx_flat_length(&self) -> f64 {
        self.sample(64).flat_length()
    }
}

impl Curve for AnalyticCurve {
    fn knots(&self) -> Vec<f64> {
        vec![0.0, 1.0]
    }

    fn position(&self, r: f64) -> Point {
        match *self {
            AnalyticCurve::Segment { from, to } => from.lerp(to, r),
            AnalyticCurve::Reaper { frame, offset, x_from, x_to } => {
                frame.reaper_point(offset, x_from + r * (x_to - x_from))
            }
        }
    }

    fn velocity(&self, r: f64) -> Point {
        match *self {
            AnalyticCurve::Segment { from, to } => to - from,
            AnalyticCurve::Reaper { frame, x_from, x_to, .. } => {
                let dx = x_to - x_from;
                let x = x_from + r * dx;
                (frame.e1 + frame.e2 * (frame.k * x).tan()) * dx
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;

    #[test]
    fn r3_frame_is_the_chart() {
        let f = ReaperFrame::from_model(&MetricModel::euclidean_r3(1.0)).unwrap();
        assert_eq!(f.e1, Point::new(1.0, 0.0));
        assert_eq!(f.e2, Point::new(0.0, 1.0));
        let p = f.reaper_point(0.0, 0.3);
        assert!((p.t + 0.3f64.cos().ln()).abs() < 1e-15);
    }

    #[test]
    fn h2xr_window_matches_tilted_reaper() {
        let f = ReaperFrame::from_model(&MetricModel::hyperbolic_h2xr(1.0)).unwrap();
        assert!((f.tau_norm_sq() - 2.0).abs() < 1e-14);
        // The tilted reaper is written against the unnormalized frame
        // (varsigma, tau) with |tau| = k, so its window is pi / (2 k^2).
        assert!((f.half_width() / f.k - FRAC_PI_4).abs() < 1e-15);
        // sigma(xi) = xi * varsigma + phi(xi) * tau with phi = -ln cos(k^2 xi) / k^2.
        let (varsigma, tau) = (Point::new(1.0, -1.0), Point::new(1.0, 1.0));
        for xi in [-0.7f64, -0.2, 0.0, 0.5] {
            let phi = -(2.0 * xi).cos().ln() / 2.0;
            let expected = varsigma * xi + tau * phi;
            let got = f.reaper_point(0.0, f.k * xi);
            assert!(expected.dist(got) < 1e-14, "{xi}: {expected:?} vs {got:?}");
        }
    }

    #[test]
    fn reapers_and_drift_lines_have_zero_f_curvature() {
        for m in [MetricModel::euclidean_r3(1.0), MetricModel::hyperbolic_h2xr(1.0), MetricModel::euclidean_r3(2.5)] {
            let f = ReaperFrame::from_model(&m).unwrap();
            let arc = f.reaper(0.4, -0.9 * f.half_width(), 0.8 * f.half_width()).unwrap();
            let line = f.line(0.2, -1.0, 1.5);
            for i in 0..=20 {
                let r = i as f64 / 20.0;
                assert!(arc.f_curvature_at(&m, r).abs() < 1e-12);
                assert!(arc.reversed().f_curvature_at(&m, r).abs() < 1e-12);
                assert!(line.f_curvature_at(&m, r).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn window_is_enforced() {
        let f = ReaperFrame::from_model(&MetricModel::euclidean_r3(1.0)).unwrap();
        assert!(f.reaper(0.0, -1.6, 0.0).is_err());
        assert!(ReaperFrame::from_model(&MetricModel::euclidean_r3(0.0)).is_err());
    }
}
