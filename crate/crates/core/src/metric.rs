//! Warped product `P x_rho R` with Ilmanen's conformal factor.
//!
//! With `phi == 1` the plane `P` carries `h_c = e^{ct}(dx^2 + dt^2)` and the
//! weight `f = e^{ct/2} rho(x)`. Every quantity the other modules need reduces
//! to a scalar weight in the flat chart:
//!
//! * f-length element: `f |gamma'|_{h_c} = rho(x) e^{ct} |gamma'|`;
//! * soliton equation: `div(rho^2 e^{ct} grad u / W) = 0`,
//!   `W = sqrt(1 + rho^2 |grad u|^2)`;
//! * f-geodesics: flat curvature equals `<V, N>` with
//!   `V = grad(c t + log rho) = ((log rho)', c)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::Point;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Working window `[x_min, x_max] x [t_min, t_max]` of the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Chart {
    pub fn new(x_min: f64, x_max: f64, t_min: f64, t_max: f64) -> Self {
        Self { x_min, x_max, t_min, t_max }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.t >= self.t_min && p.t <= self.t_max
    }
}

impl Default for Chart {
    fn default() -> Self {
        Chart::new(-20.0, 20.0, -20.0, 20.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// `R^3`: `rho == 1`.
    EuclideanR3,
    /// `H^2 x R` with `H^2 = R x_{e^x} R`: `rho = e^x`.
    HyperbolicH2xR,
    Custom,
}

/// The data `(c, rho, phi)` that defines `f`, `h_c` and the derived weights.
#[derive(Clone)]
pub struct MetricModel {
    kind: ModelKind,
    name: String,
    c: f64,
    rho: ScalarFn,
    rho_log_deriv: ScalarFn,
    phi: Option<ScalarFn>,
    chart: Chart,
}

impl fmt::Debug for MetricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricModel")
            .field("name", &self.name)
            .field("c", &self.c)
            .field("flat_base", &self.phi.is_none())
            .field("chart", &self.chart)
            .finish()
    }
}

impl MetricModel {
    /// `rho == 1`, `phi == 1`.
    pub fn euclidean_r3(c: f64) -> Self {
        Self {
            kind: ModelKind::EuclideanR3,
            name: "r3".into(),
            c,
            rho: Arc::new(|_| 1.0),
            rho_log_deriv: Arc::new(|_| 0.0),
            phi: None,
            chart: Chart::default(),
        }
    }

    /// `rho = e^x`, `phi == 1`.
    pub fn hyperbolic_h2xr(c: f64) -> Self {
        Self {
            kind: ModelKind::HyperbolicH2xR,
            name: "h2xr".into(),
            c,
            rho: Arc::new(f64::exp),
            rho_log_deriv: Arc::new(|_| 1.0),
            phi: None,
            chart: Chart::default(),
        }
    }

    /// Built-in model by name (`"r3"` or `"h2xr"`).
    pub fn by_name(name: &str, c: f64) -> Result<Self> {
        match name {
            "r3" => Ok(Self::euclidean_r3(c)),
            "h2xr" => Ok(Self::hyperbolic_h2xr(c)),
            other => Err(Error::Config(format!("unknown metric model '{other}' (expected r3 or h2xr)"))),
        }
    }

    /// A library-only model with analytic `rho` and `(log rho)'`.
    pub fn custom(
        name: impl Into<String>,
        c: f64,
        rho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        rho_log_deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            kind: ModelKind::Custom,
            name: name.into(),
            c,
            rho: Arc::new(rho),
            rho_log_deriv: Arc::new(rho_log_deriv),
            phi: None,
            chart: Chart::default(),
        }
    }

    /// Attach a non-trivial base coefficient `phi`. Such models are accepted
    /// but every flat-chart reduction refuses them.
    pub fn with_phi(mut self, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.phi = Some(Arc::new(phi));
        self
    }

    pub fn with_chart(mut self, chart: Chart) -> Self {
        self.chart = chart;
        self
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn is_flat_base(&self) -> bool {
        self.phi.is_none()
    }

    pub fn rho(&self, x: f64) -> f64 {
        (self.rho)(x)
    }

    pub fn rho_log_deriv(&self, x: f64) -> f64 {
        (self.rho_log_deriv)(x)
    }

    pub fn phi(&self, x: f64) -> f64 {
        self.phi.as_ref().map_or(1.0, |phi| phi(x))
    }

    fn check(&self, p: Point) -> Result<()> {
        if self.chart.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsideChart(p))
        }
    }

    fn check_flat(&self, p: Point) -> Result<()> {
        if self.phi.is_some() {
            return Err(Error::NonFlatBase);
        }
        self.check(p)
    }

    /// `f(x, t) = e^{ct/2} rho(x)`.
    pub fn f_value(&self, p: Point) -> Result<f64> {
        self.check(p)?;
        Ok((0.5 * self.c * p.t).exp() * self.rho(p.x))
    }

    /// Flat gradient of `Lambda = c t + log rho(x)`.
    pub fn drift_vector(&self, p: Point) -> Result<Point> {
        self.check_flat(p)?;
        Ok(self.drift_unchecked(p))
    }

    /// `rho(x) e^{ct}`: the f-length density per unit flat arclength.
    pub fn line_weight(&self, p: Point) -> Result<f64> {
        self.check_flat(p)?;
        Ok(self.line_weight_unchecked(p))
    }

    /// `rho(x)^2 e^{ct}`: the coefficient of the flat weak form.
    pub fn area_weight(&self, p: Point) -> Result<f64> {
        self.check_flat(p)?;
        Ok(self.area_weight_unchecked(p))
    }

    /// `Lambda(x, t) = c t + log rho(x)`.
    pub fn log_weight(&self, p: Point) -> f64 {
        self.c * p.t + self.rho(p.x).ln()
    }

    pub(crate) fn drift_unchecked(&self, p: Point) -> Point {
        Point::new(self.rho_log_deriv(p.x), self.c)
    }

    pub(crate) fn line_weight_unchecked(&self, p: Point) -> f64 {
        self.rho(p.x) * (self.c * p.t).exp()
    }

    pub(crate) fn area_weight_unchecked(&self, p: Point) -> f64 {
        let rho = self.rho(p.x);
        rho * rho * (self.c * p.t).exp()
    }

    /// The drift `V` when it is constant over the chart (both built-ins).
    pub fn constant_drift(&self) -> Option<Point> {
        match self.kind {
            ModelKind::EuclideanR3 => Some(Point::new(0.0, self.c)),
            ModelKind::HyperbolicH2xR => Some(Point::new(1.0, self.c)),
            ModelKind::Custom => None,
        }
    }

    pub fn in_chart(&self, p: Point) -> bool {
        self.chart.contains(p)
    }

    pub(crate) fn require_flat(&self) -> Result<()> {
        if self.phi.is_some() {
            Err(Error::NonFlatBase)
        } else {
            Ok(())
        }
    }
}
