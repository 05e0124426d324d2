//! Numerical toolkit for horizontal Jenkins-Serrin graphs of translating
//! solitons of mean curvature flow in warped products `P x_rho R`.
//!
//! Everything is computed in the flat `(x, t)` chart of the vertical plane `P`,
//! where the conformal metric is `h_c = e^{ct}(dx^2 + dt^2)` and the weight
//! `f = e^{ct/2} rho(x)`.
//!
//! * [`metric`]: the warped-product model and its scalar weights.
//! * [`curves`]: f-length, f-curvature, shooting and connecting f-geodesics.
//! * [`domain`]: admissible domains and polygons, the `alpha_f`/`beta_f`
//!   calculus and the structural existence conditions.
//! * [`mesh`]: triangulation of admissible domains.
//! * [`solver`]: Newton solves of the soliton equation and the capped
//!   (Perron) sequences approximating infinite boundary data.
//! * [`analysis`]: flux functional, normal traces and divergence-set checks.
//! * [`io`] and [`config`]: CSV/VTK output and the experiment file formats.

pub mod analysis;
pub mod config;
pub mod curves;
pub mod domain;
mod error;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod metric;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::Point;
pub use metric::{Chart, MetricModel};

pub use analysis::{
    boundary_normal_trace, classify_convergence, flux, flux_report, verify_divergence_structure,
    DivergenceReport, FluxReport, StructureVerdict,
};
pub use curves::{
    connect_geodesic, f_curvature, f_length, shoot_geodesic, AnalyticCurve, ConnectOptions, Curve,
    GeodesicShot, ParamCurve, ReaperFrame, ShootOptions, Termination,
};
pub use domain::{
    check_existence, enumerate_polygons, polygon_report, scherk_quadrilateral, validate_domain,
    AdmissibleDomain, AdmissiblePolygon, Edge, EdgeKind, ExistenceVerdict, PolygonReport,
    ScherkParams, ValidDomain,
};
pub use config::ExperimentConfig;
pub use mesh::{triangulate, triangulate_with, MeshOptions, TriMesh};
pub use solver::{
    comparison_check, solve_dirichlet, solve_jenkins_serrin, solve_jenkins_serrin_with, CapSchedule, JsOptions,
    JsRun, SolutionField, SolverSettings,
};
