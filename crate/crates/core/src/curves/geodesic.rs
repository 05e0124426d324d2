//! f-geodesics as planar curves with curvature `<V, N>`.
//!
//! In flat arclength `s` with tangent angle `theta` the geodesic equation is
//! `x' = cos theta`, `t' = sin theta`, `theta' = -V_x sin theta + V_t cos theta`.
//! It is integrated with an embedded Dormand-Prince 5(4) pair.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::metric::MetricModel;

use super::{f_length, ParamCurve};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    /// Local error tolerance of the integrator (absolute and relative).
    pub tol: f64,
    /// Flat distance between output samples.
    pub spacing: f64,
    /// Shooting stops when `|theta'|` exceeds this value.
    pub max_curvature: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self { tol: 1e-9, spacing: 2e-3, max_curvature: 1e6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    LengthReached,
    ChartExit,
    CurvatureBlowUp,
}

#[derive(Debug, Clone)]
pub struct GeodesicShot {
    pub start: Point,
    /// Initial tangent angle in `[0, 2 pi)`.
    pub angle: f64,
    pub termination: Termination,
    /// Flat arclength actually travelled.
    pub length: f64,
    pub curve: ParamCurve,
    /// Unit tangents at the samples.
    pub tangents: Vec<Point>,
}

type State = [f64; 3];

enum Step {
    Done(State),
    Blowup,
}

struct GeodesicOde<'a> {
    m: &'a MetricModel,
    tol: f64,
    max_curvature: f64,
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

impl<'a> GeodesicOde<'a> {
    fn rhs(&self, y: &State) -> State {
        let (s, c) = y[2].sin_cos();
        let v = self.m.drift_unchecked(Point::new(y[0], y[1]));
        [c, s, -v.x * s + v.t * c]
    }

    fn try_step(&self, y: &State, h: f64) -> (State, f64) {
        let mut k = [[0.0; 3]; 7];
        k[0] = self.rhs(y);
        for stage in 1..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage - 1][j];
                if a != 0.0 {
                    for d in 0..3 {
                        ys[d] += h * a * kj[d];
                    }
                }
            }
            k[stage] = self.rhs(&ys);
        }
        let mut y5 = *y;
        let mut err: f64 = 0.0;
        for d in 0..3 {
            let mut hi = 0.0;
            let mut lo = 0.0;
            for s in 0..7 {
                hi += B5[s] * k[s][d];
                lo += B4[s] * k[s][d];
            }
            y5[d] += h * hi;
            let scale = self.tol * (1.0 + y[d].abs().max(y5[d].abs()));
            err = err.max((h * (hi - lo)).abs() / scale);
        }
        (y5, err)
    }

    /// Integrates exactly `ds` of arclength (either sign).
    fn advance(&self, y0: State, ds: f64, h_hint: &mut f64) -> Result<Step> {
        let mut y = y0;
        let mut done = 0.0;
        let dir = ds.signum();
        let total = ds.abs();
        let min_step = 1e-14 * (1.0 + total);
        while done < total {
            if self.rhs(&y)[2].abs() > self.max_curvature {
                return Ok(Step::Blowup);
            }
            let mut h = h_hint.min(total - done);
            if total - done <= min_step {
                y = self.try_step(&y, dir * (total - done)).0;
                break;
            }
            loop {
                if h < min_step {
                    return Err(Error::Integration(format!("step size underflow at ({}, {})", y[0], y[1])));
                }
                let (y_new, err) = self.try_step(&y, dir * h);
                if err <= 1.0 {
                    y = y_new;
                    done += h;
                    let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    // Do not let the last (clipped) step shrink the hint.
                    if h >= *h_hint * 0.999 || grow < 1.0 {
                        *h_hint = (h * grow).max(min_step);
                    }
                    break;
                }
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                *h_hint = h;
            }
            if !y.iter().all(|v| v.is_finite()) {
                return Err(Error::Integration("non-finite state".into()));
            }
        }
        Ok(Step::Done(y))
    }
}

fn state(p: Point, angle: f64) -> State {
    [p.x, p.t, angle]
}

fn point(y: &State) -> Point {
    Point::new(y[0], y[1])
}

/// Shoots the f-geodesic from `p0` with initial tangent angle `angle`.
pub fn shoot_geodesic(
    m: &MetricModel,
    p0: Point,
    angle: f64,
    max_flat_length: f64,
    opts: &ShootOptions,
) -> Result<GeodesicShot> {
    m.require_flat()?;
    if !m.in_chart(p0) {
        return Err(Error::OutsideChart(p0));
    }
    if !(max_flat_length > 0.0) {
        return Err(Error::Integration("shooting length must be positive".into()));
    }
    let ode = GeodesicOde { m, tol: opts.tol, max_curvature: opts.max_curvature };
    let angle = angle.rem_euclid(TAU);
    let n = ((max_flat_length / opts.spacing).ceil() as usize).max(1);
    let ds = max_flat_length / n as f64;
    let mut y = state(p0, angle);
    let mut samples = vec![p0];
    let mut tangents = vec![Point::from_angle(angle)];
    let mut h = ds;
    let mut termination = Termination::LengthReached;
    for _ in 0..n {
        match ode.advance(y, ds, &mut h)? {
            Step::Done(next) => {
                if !m.in_chart(point(&next)) {
                    termination = Termination::ChartExit;
                    break;
                }
                y = next;
                samples.push(point(&y));
                tangents.push(Point::from_angle(y[2]));
            }
            Step::Blowup => {
                termination = Termination::CurvatureBlowUp;
                break;
            }
        }
    }
    if samples.len() < 2 {
        return Err(Error::Integration(format!("geodesic left the chart immediately ({termination:?})")));
    }
    let length = ds * (samples.len() - 1) as f64;
    Ok(GeodesicShot {
        start: p0,
        angle,
        termination,
        length,
        curve: ParamCurve::from_samples_unchecked(samples),
        tangents,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectOptions {
    pub shoot: ShootOptions,
    /// Angle scan step in radians.
    pub scan_step: f64,
    /// Scanned window of initial angles.
    pub window: (f64, f64),
    /// Shots are `length_factor * |q - p|` long.
    pub length_factor: f64,
    /// Required flat endpoint accuracy.
    pub tol: f64,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        Self {
            shoot: ShootOptions { tol: 1e-12, ..ShootOptions::default() },
            scan_step: PI / 180.0,
            window: (0.0, TAU),
            length_factor: 4.0,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Miss {
    /// Signed distance of the target from the curve (positive on the left).
    signed: f64,
    dist: f64,
    arclength: f64,
}

struct Shooter<'a> {
    m: &'a MetricModel,
    ode: GeodesicOde<'a>,
    p: Point,
    q: Point,
    max_len: f64,
    coarse: f64,
}

impl<'a> Shooter<'a> {
    fn miss(&self, angle: f64) -> Result<Option<Miss>> {
        let n = ((self.max_len / self.coarse).ceil() as usize).max(2);
        let ds = self.max_len / n as f64;
        let mut y = state(self.p, angle);
        let mut states = vec![y];
        let mut h = ds;
        for _ in 0..n {
            match self.ode.advance(y, ds, &mut h)? {
                Step::Done(next) if self.m.in_chart(point(&next)) => {
                    y = next;
                    states.push(y);
                }
                _ => break,
            }
        }
        let (best, _) = states
            .iter()
            .enumerate()
            .map(|(i, s)| (i, point(s).dist(self.q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        if best == 0 || best + 1 == states.len() {
            return Ok(None);
        }
        // Newton on g(s) = (gamma(s) - q) . T(s) from the closest sample.
        let mut s_off = 0.0;
        let mut cur = states[best];
        let mut h = ds;
        for _ in 0..8 {
            let g_pt = point(&cur);
            let tangent = Point::from_angle(cur[2]);
            let d = g_pt - self.q;
            let g = d.dot(tangent);
            let theta_dot = self.ode.rhs(&cur)[2];
            let dg = 1.0 + theta_dot * d.dot(tangent.perp());
            if dg.abs() < 1e-12 {
                break;
            }
            let step = (-g / dg).clamp(-ds, ds);
            if step.abs() < 1e-15 {
                break;
            }
            match self.ode.advance(cur, step, &mut h)? {
                Step::Done(next) => {
                    cur = next;
                    s_off += step;
                }
                Step::Blowup => return Ok(None),
            }
        }
        let tangent = Point::from_angle(cur[2]);
        let d = self.q - point(&cur);
        Ok(Some(Miss {
            signed: tangent.cross(d),
            dist: d.norm(),
            arclength: best as f64 * ds + s_off,
        }))
    }
}

/// Connects `p` to `q` by an f-geodesic: an angle scan brackets sign changes
/// of the signed miss at `q`, bisection refines each bracket, and the
/// shortest (in f-length) connection wins.
pub fn connect_geodesic(m: &MetricModel, p: Point, q: Point, opts: &ConnectOptions) -> Result<ParamCurve> {
    m.require_flat()?;
    for pt in [p, q] {
        if !m.in_chart(pt) {
            return Err(Error::OutsideChart(pt));
        }
    }
    let dist = p.dist(q);
    if dist == 0.0 {
        return Err(Error::NoConnection("endpoints coincide".into()));
    }
    let shooter = Shooter {
        m,
        ode: GeodesicOde { m, tol: opts.shoot.tol, max_curvature: opts.shoot.max_curvature },
        p,
        q,
        max_len: opts.length_factor * dist,
        coarse: dist / 64.0,
    };
    let (lo, hi) = opts.window;
    let n_scan = (((hi - lo) / opts.scan_step).ceil() as usize).max(2);
    let full_circle = (hi - lo - TAU).abs() < 1e-12;
    let angles: Vec<f64> = (0..n_scan).map(|i| lo + (hi - lo) * i as f64 / n_scan as f64).collect();
    let mut evals = Vec::with_capacity(n_scan + 1);
    for &a in &angles {
        evals.push(shooter.miss(a)?);
    }
    let mut pairs: Vec<(f64, f64, Option<Miss>, Option<Miss>)> =
        angles.windows(2).zip(evals.windows(2)).map(|(a, e)| (a[0], a[1], e[0], e[1])).collect();
    if full_circle {
        pairs.push((angles[n_scan - 1], angles[0] + TAU, evals[n_scan - 1], evals[0]));
    } else {
        let last = shooter.miss(hi)?;
        pairs.push((angles[n_scan - 1], hi, evals[n_scan - 1], last));
    }

    let mut solutions: Vec<(f64, f64)> = Vec::new();
    for (a0, a1, e0, e1) in pairs {
        let (Some(m0), Some(m1)) = (e0, e1) else { continue };
        if m0.dist >= dist || m1.dist >= dist {
            continue;
        }
        if m0.dist <= opts.tol {
            solutions.push((a0, m0.arclength));
            continue;
        }
        if m0.signed.signum() == m1.signed.signum() {
            continue;
        }
        let (mut lo_a, mut hi_a, mut lo_m) = (a0, a1, m0);
        let mut found = None;
        for _ in 0..200 {
            let mid = 0.5 * (lo_a + hi_a);
            let Some(mm) = shooter.miss(mid)? else { break };
            if mm.dist <= 0.1 * opts.tol || hi_a - lo_a < 1e-15 {
                found = Some((mid, mm));
                break;
            }
            if mm.signed.signum() == lo_m.signed.signum() {
                lo_a = mid;
                lo_m = mm;
            } else {
                hi_a = mid;
            }
        }
        if let Some((a, mm)) = found {
            if mm.dist <= opts.tol {
                solutions.push((a, mm.arclength));
            }
        }
    }
    if solutions.is_empty() {
        return Err(Error::NoConnection(format!(
            "no sign change of the miss function from ({}, {}) to ({}, {})",
            p.x, p.t, q.x, q.t
        )));
    }

    let mut best: Option<(f64, ParamCurve)> = None;
    for (angle, arclength) in solutions {
        let n = ((arclength / opts.shoot.spacing).ceil() as usize).max(2);
        let ds = arclength / n as f64;
        let mut y = state(p, angle);
        let mut samples = vec![p];
        let mut h = ds;
        let mut ok = true;
        for _ in 0..n {
            match shooter.ode.advance(y, ds, &mut h)? {
                Step::Done(next) => {
                    y = next;
                    samples.push(point(&y));
                }
                Step::Blowup => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || point(&y).dist(q) > opts.tol {
            continue;
        }
        *samples.last_mut().expect("non-empty") = q;
        let curve = ParamCurve::from_samples_unchecked(samples);
        let len = f_length(m, &curve)?;
        if best.as_ref().map_or(true, |(l, _)| len < *l) {
            best = Some((len, curve));
        }
    }
    best.map(|(_, c)| c)
        .ok_or_else(|| Error::NoConnection("bracketed solutions failed the endpoint check".into()))
}
