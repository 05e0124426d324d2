//! Experiment and domain files.
//!
//! Both are TOML documents with flat sections. An experiment names the
//! metric, the domain (a built-in constructor or a domain file), solver,
//! mesh and existence-check settings, and which outputs to write:
//!
//! ```toml
//! [metric]
//! name = "r3"
//! c = 1.0
//!
//! [domain]
//! constructor = "scherk"
//! a = 0.0
//! b = 0.6931471805599453
//! r = 0.3
//! s = -0.3
//!
//! [solver]
//! h_target = 0.02
//! caps = [2, 4, 8, 16]
//!
//! [output]
//! directory = "out"
//! ```
//!
//! A domain file lists the metric and the boundary edges counter-clockwise:
//!
//! ```toml
//! metric = "r3"
//! c = 1.0
//!
//! [[edge]]
//! data = "+inf"
//! curve = "reaper"
//! offset = 0.0
//! from = -0.3
//! to = 0.3
//!
//! [[edge]]
//! data = 0.0
//! curve = "csv"
//! path = "right.csv"
//! ```
//!
//! Edge data is `"+inf"` (an A-edge), `"-inf"` (B) or a number (C). Curves
//! are `reaper` (`offset`, `from`, `to` in the reaper frame), `tilted-line`
//! (a segment along the drift at frame abscissa `x`, frame heights `from` to
//! `to`), `vertical` (chart abscissa `x`, chart heights `from` to `to`) or
//! `csv` (`path`, relative to the domain file).

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::curves::{AnalyticCurve, ReaperFrame};
use crate::domain::{
    scherk_quadrilateral, AdmissibleDomain, Edge, EdgeCurve, EdgeData, EdgeKind, EnumerationOptions,
    ExistenceOptions, ScherkParams, ValidationOptions,
};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::io::read_curve;
use crate::mesh::MeshOptions;
use crate::metric::MetricModel;
use crate::solver::{CapSchedule, JsOptions, SolverSettings};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    pub name: String,
    pub c: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub file: Option<PathBuf>,
    pub constructor: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    /// Edge kinds of the Scherk quadrilateral, e.g. `"ACAC"`.
    pub kinds: Option<String>,
    /// Constant data of the Scherk C-edges.
    pub data: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub h_target: f64,
    pub caps: Vec<f64>,
    pub tol: f64,
    pub max_newton: usize,
    pub armijo: f64,
    pub max_backtracks: usize,
    pub continuation_levels: u32,
    pub max_bisections: u32,
    pub growth_threshold: f64,
    /// Normalization point for domains without C-edges.
    pub reference: Option<[f64; 2]>,
}

impl Default for SolverSection {
    fn default() -> Self {
        let s = SolverSettings::default();
        Self {
            h_target: 0.02,
            caps: vec![2.0, 4.0, 8.0, 16.0],
            tol: s.tol,
            max_newton: s.max_newton,
            armijo: s.armijo,
            max_backtracks: s.max_backtracks,
            continuation_levels: s.continuation_levels,
            max_bisections: s.max_bisections,
            growth_threshold: crate::analysis::DEFAULT_GROWTH_THRESHOLD,
            reference: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshSection {
    pub boundary_ratio: f64,
    pub corner_ratio: f64,
    pub grading: f64,
    pub refine_angle_deg: f64,
    pub min_angle_deg: f64,
    pub max_vertices: usize,
    pub boundary_layer: bool,
}

impl Default for MeshSection {
    fn default() -> Self {
        let o = MeshOptions::new(1.0);
        Self {
            boundary_ratio: o.boundary_ratio,
            corner_ratio: o.corner_ratio,
            grading: o.grading,
            refine_angle_deg: o.refine_angle_deg,
            min_angle_deg: o.min_angle_deg,
            max_vertices: o.max_vertices,
            boundary_layer: o.boundary_layer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckSection {
    pub max_polygons: usize,
    pub tol_balance: f64,
    pub tol_geodesic: f64,
    pub tol_convex: f64,
}

impl Default for CheckSection {
    fn default() -> Self {
        let v = ValidationOptions::default();
        let e = ExistenceOptions::default();
        Self {
            max_polygons: e.enumeration.max_polygons,
            tol_balance: e.tol_balance,
            tol_geodesic: v.tol_geodesic,
            tol_convex: v.tol_convex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub fields: bool,
    pub vtk: bool,
    pub flux: bool,
    pub divergence: bool,
    pub check: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { directory: PathBuf::from("out"), fields: true, vtk: true, flux: true, divergence: true, check: true }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub metric: Option<MetricSection>,
    pub domain: DomainSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub mesh: MeshSection,
    #[serde(default)]
    pub check: CheckSection,
    #[serde(default)]
    pub output: OutputSection,
    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum DataValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    kind: Option<String>,
    data: Option<DataValue>,
    curve: String,
    offset: Option<f64>,
    x: Option<f64>,
    from: Option<f64>,
    to: Option<f64>,
    path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    metric: Option<String>,
    c: Option<f64>,
    #[serde(default)]
    edge: Vec<EdgeRecord>,
}

fn cfg(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(cfg(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ExperimentConfig {
    /// Parses and validates; relative paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut c: ExperimentConfig = toml::from_str(text).map_err(|e| cfg(e.to_string()))?;
        c.base_dir = base_dir.to_path_buf();
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| cfg(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base).map_err(|e| match e {
            Error::Config(m) => cfg(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.output.directory)
    }

    /// Checks every contract that does not require numerical work: caps
    /// strictly increasing, positive tolerances, referenced files present,
    /// a consistent metric.
    pub fn validate(&self) -> Result<()> {
        let s = &self.solver;
        positive("solver.h_target", s.h_target)?;
        positive("solver.tol", s.tol)?;
        positive("solver.armijo", s.armijo)?;
        positive("solver.growth_threshold", s.growth_threshold)?;
        if s.caps.is_empty() {
            return Err(cfg("solver.caps must not be empty"));
        }
        CapSchedule::new(s.caps.clone()).map_err(|e| cfg(format!("solver.caps: {e}")))?;
        if s.max_newton == 0 {
            return Err(cfg("solver.max_newton must be at least 1"));
        }
        if let Some([x, t]) = s.reference {
            if !(x.is_finite() && t.is_finite()) {
                return Err(cfg("solver.reference must be finite"));
            }
        }
        let m = &self.mesh;
        positive("mesh.boundary_ratio", m.boundary_ratio)?;
        positive("mesh.corner_ratio", m.corner_ratio)?;
        positive("mesh.refine_angle_deg", m.refine_angle_deg)?;
        if !(m.grading >= 0.0) {
            return Err(cfg("mesh.grading must be non-negative"));
        }
        if m.refine_angle_deg >= 33.0 {
            return Err(cfg("mesh.refine_angle_deg must stay below 33 degrees"));
        }
        let k = &self.check;
        if k.max_polygons == 0 {
            return Err(cfg("check.max_polygons must be at least 1"));
        }
        positive("check.tol_balance", k.tol_balance)?;
        positive("check.tol_geodesic", k.tol_geodesic)?;
        positive("check.tol_convex", k.tol_convex)?;
        self.model()?;
        self.domain_spec()?;
        Ok(())
    }

    fn domain_file(&self) -> Result<Option<(DomainFile, PathBuf)>> {
        let Some(file) = &self.domain.file else { return Ok(None) };
        let path = self.resolve(file);
        let text = std::fs::read_to_string(&path).map_err(|e| cfg(format!("domain file {}: {e}", path.display())))?;
        let parsed: DomainFile =
            toml::from_str(&text).map_err(|e| cfg(format!("domain file {}: {e}", path.display())))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Some((parsed, dir)))
    }

    pub fn model(&self) -> Result<MetricModel> {
        let from_file = self.domain_file()?.and_then(|(f, _)| match (f.metric, f.c) {
            (None, None) => None,
            (name, c) => Some((name, c)),
        });
        let (name, c) = match (&self.metric, from_file) {
            (Some(m), None) => (m.name.clone(), m.c),
            (None, Some((Some(name), Some(c)))) => (name, c),
            (None, Some(_)) => return Err(cfg("domain file must give both metric and c")),
            (None, None) => return Err(cfg("no [metric] section and no metric in the domain file")),
            (Some(m), Some((name, c))) => {
                if name.as_deref().is_some_and(|n| n != m.name) || c.is_some_and(|c| c != m.c) {
                    return Err(cfg(format!(
                        "metric '{}' c = {} conflicts with the domain file's {:?} c = {:?}",
                        m.name, m.c, name, c
                    )));
                }
                (m.name.clone(), m.c)
            }
        };
        if !c.is_finite() {
            return Err(cfg("metric c must be finite"));
        }
        MetricModel::by_name(&name, c)
    }

    fn domain_spec(&self) -> Result<()> {
        let d = &self.domain;
        match (&d.file, &d.constructor) {
            (Some(_), Some(_)) => Err(cfg("domain: give either file or constructor, not both")),
            (None, None) => Err(cfg("domain: need file or constructor")),
            (Some(_), None) => {
                if d.a.is_some() || d.b.is_some() || d.r.is_some() || d.s.is_some() || d.kinds.is_some() || d.data.is_some() {
                    return Err(cfg("domain: constructor parameters given together with a file"));
                }
                let (file, dir) = self.domain_file()?.expect("file is set");
                if file.edge.len() < 2 {
                    return Err(cfg("domain file needs at least two edges"));
                }
                for (i, e) in file.edge.iter().enumerate() {
                    if let Some(p) = &e.path {
                        let full = if p.is_absolute() { p.clone() } else { dir.join(p) };
                        if !full.is_file() {
                            return Err(cfg(format!("edge {i}: curve file {} not found", full.display())));
                        }
                    }
                }
                Ok(())
            }
            (None, Some(name)) => {
                if name != "scherk" {
                    return Err(cfg(format!("unknown domain constructor '{name}' (expected scherk)")));
                }
                self.scherk_params().map(|_| ())
            }
        }
    }

    fn scherk_params(&self) -> Result<ScherkParams> {
        let d = &self.domain;
        let get = |v: Option<f64>, n: &str| {
            v.filter(|x| x.is_finite()).ok_or_else(|| cfg(format!("domain.{n} is required and must be finite")))
        };
        let mut p = ScherkParams::new(get(d.a, "a")?, get(d.b, "b")?, get(d.r, "r")?, get(d.s, "s")?);
        if let Some(k) = &d.kinds {
            let kinds: Vec<EdgeKind> = k
                .chars()
                .map(|ch| EdgeKind::parse(&ch.to_string()).ok_or_else(|| cfg(format!("domain.kinds: bad kind '{ch}'"))))
                .collect::<Result<_>>()?;
            let kinds: [EdgeKind; 4] =
                kinds.try_into().map_err(|_| cfg("domain.kinds needs exactly four letters"))?;
            p = p.with_kinds(kinds);
        }
        if let Some(data) = d.data {
            if data.iter().any(|v| !v.is_finite()) {
                return Err(cfg("domain.data must be finite"));
            }
            p = p.with_data(data);
        }
        Ok(p)
    }

    /// Builds the (not yet validated) domain.
    pub fn build_domain(&self, m: &MetricModel) -> Result<AdmissibleDomain> {
        if self.domain.constructor.is_some() {
            return scherk_quadrilateral(m, &self.scherk_params()?);
        }
        let (file, dir) = self.domain_file()?.ok_or_else(|| cfg("domain: need file or constructor"))?;
        let edges = file
            .edge
            .iter()
            .enumerate()
            .map(|(i, e)| edge_from_record(m, e, &dir).map_err(|err| cfg(format!("edge {i}: {err}"))))
            .collect::<Result<Vec<_>>>()?;
        AdmissibleDomain::new(edges)
    }

    pub fn schedule(&self) -> Result<CapSchedule> {
        CapSchedule::new(self.solver.caps.clone())
    }

    pub fn solver_settings(&self) -> SolverSettings {
        let s = &self.solver;
        SolverSettings {
            tol: s.tol,
            max_newton: s.max_newton,
            armijo: s.armijo,
            max_backtracks: s.max_backtracks,
            continuation_levels: s.continuation_levels,
            max_bisections: s.max_bisections,
            ..SolverSettings::default()
        }
    }

    pub fn mesh_options(&self) -> MeshOptions {
        let m = &self.mesh;
        MeshOptions {
            h_target: self.solver.h_target,
            boundary_ratio: m.boundary_ratio,
            corner_ratio: m.corner_ratio,
            grading: m.grading,
            refine_angle_deg: m.refine_angle_deg,
            min_angle_deg: m.min_angle_deg,
            max_vertices: m.max_vertices,
            boundary_layer: m.boundary_layer,
        }
    }

    pub fn js_options(&self) -> JsOptions {
        JsOptions {
            mesh: self.mesh_options(),
            settings: self.solver_settings(),
            reference: self.solver.reference.map(|[x, t]| Point::new(x, t)),
        }
    }

    pub fn validation_options(&self) -> ValidationOptions {
        ValidationOptions {
            tol_geodesic: self.check.tol_geodesic,
            tol_convex: self.check.tol_convex,
            ..ValidationOptions::default()
        }
    }

    pub fn existence_options(&self) -> ExistenceOptions {
        ExistenceOptions {
            enumeration: EnumerationOptions { max_polygons: self.check.max_polygons, ..EnumerationOptions::default() },
            tol_balance: self.check.tol_balance,
        }
    }
}

fn edge_from_record(m: &MetricModel, e: &EdgeRecord, dir: &Path) -> Result<Edge> {
    let data_kind = match &e.data {
        None => None,
        Some(DataValue::Number(v)) if v.is_finite() => Some((EdgeKind::C, Some(*v))),
        Some(DataValue::Number(v)) if *v > 0.0 => Some((EdgeKind::A, None)),
        Some(DataValue::Number(_)) => Some((EdgeKind::B, None)),
        Some(DataValue::Text(s)) => match s.trim() {
            "+inf" | "inf" => Some((EdgeKind::A, None)),
            "-inf" => Some((EdgeKind::B, None)),
            other => return Err(cfg(format!("data '{other}' is neither a number nor +inf/-inf"))),
        },
    };
    let kind = match (&e.kind, data_kind) {
        (Some(k), dk) => {
            let k = EdgeKind::parse(k).ok_or_else(|| cfg(format!("unknown edge kind '{k}'")))?;
            if let Some((dk, _)) = dk {
                if dk != k {
                    return Err(cfg(format!("kind {k} contradicts data (a {dk}-edge)")));
                }
            }
            k
        }
        (None, Some((k, _))) => k,
        (None, None) => return Err(cfg("edge needs kind or data")),
    };
    let value = data_kind.and_then(|(_, v)| v);
    if kind == EdgeKind::C && value.is_none() {
        return Err(cfg("C-edge needs finite data"));
    }
    let need = |v: Option<f64>, n: &str| {
        v.filter(|x| x.is_finite()).ok_or_else(|| cfg(format!("curve '{}' needs finite '{n}'", e.curve)))
    };
    let curve = match e.curve.as_str() {
        "reaper" => {
            let frame = ReaperFrame::from_model(m)?;
            EdgeCurve::Analytic(frame.reaper(need(e.offset, "offset")?, need(e.from, "from")?, need(e.to, "to")?)?)
        }
        "tilted-line" => {
            let frame = ReaperFrame::from_model(m)?;
            EdgeCurve::Analytic(frame.line(need(e.x, "x")?, need(e.from, "from")?, need(e.to, "to")?))
        }
        "vertical" => {
            let x = need(e.x, "x")?;
            EdgeCurve::Analytic(AnalyticCurve::Segment {
                from: Point::new(x, need(e.from, "from")?),
                to: Point::new(x, need(e.to, "to")?),
            })
        }
        "csv" => {
            let p = e.path.as_ref().ok_or_else(|| cfg("curve 'csv' needs 'path'"))?;
            let full = if p.is_absolute() { p.clone() } else { dir.join(p) };
            EdgeCurve::Sampled(read_curve(&full)?)
        }
        other => return Err(cfg(format!("unknown curve '{other}' (reaper, tilted-line, vertical, csv)"))),
    };
    Edge::new(kind, curve, value.map(EdgeData::Constant))
}

/// Ready-made experiments: `(name, description, config text)`.
pub const EXAMPLES: &[(&str, &str, &str)] = &[
    (
        "r3-scherk",
        "R^3, c = 1: reapers t = -ln cos x at heights 0 and ln 2 over |x| < 0.3, A on both reapers",
        r#"[metric]
name = "r3"
c = 1.0

[domain]
constructor = "scherk"
a = 0.0
b = 0.6931471805599453
r = 0.3
s = -0.3
kinds = "ACAC"
data = [0.0, 0.0, 0.0, 0.0]

[solver]
h_target = 0.02
caps = [2.0, 4.0, 8.0, 16.0]

[output]
directory = "out-r3-scherk"
"#,
    ),
    (
        "r3-scherk-wide",
        "R^3, c = 1: the same quadrilateral over |x| < 0.45, where the structural condition fails",
        r#"[metric]
name = "r3"
c = 1.0

[domain]
constructor = "scherk"
a = 0.0
b = 0.6931471805599453
r = 0.45
s = -0.45
kinds = "ACAC"
data = [0.0, 0.0, 0.0, 0.0]

[solver]
h_target = 0.02
caps = [2.0, 4.0, 8.0, 16.0]

[output]
directory = "out-r3-scherk-wide"
"#,
    ),
    (
        "h2xr-scherk",
        "H^2 x R, c = 1: reapers in the direction d_x + d_t, A on both reapers",
        r#"[metric]
name = "h2xr"
c = 1.0

[domain]
constructor = "scherk"
a = 0.0
b = 0.5
r = 0.2
s = -0.2
kinds = "ACAC"
data = [0.0, 0.0, 0.0, 0.0]

[solver]
h_target = 0.02
caps = [2.0, 4.0, 8.0, 16.0]

[output]
directory = "out-h2xr-scherk"
"#,
    ),
];

pub fn example(name: &str) -> Option<&'static str> {
    EXAMPLES.iter().find(|(n, _, _)| *n == name).map(|(_, _, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ValidDomain;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::parse(text, Path::new("."))
    }

    #[test]
    fn examples_parse_and_build_valid_domains() {
        for (name, _, text) in EXAMPLES {
            let c = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let m = c.model().unwrap();
            let d = c.build_domain(&m).unwrap();
            ValidDomain::with_options(&m, d, c.validation_options()).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(example("nope").is_none());
    }

    #[test]
    fn defaults_fill_missing_sections() {
        let c = parse("[metric]\nname = \"r3\"\nc = 1\n[domain]\nconstructor = \"scherk\"\na = 0\nb = 1\nr = 0.3\ns = -0.3\n")
            .unwrap();
        assert_eq!(c.solver, SolverSection::default());
        assert_eq!(c.mesh_options(), MeshOptions::new(0.02));
        assert_eq!(c.solver_settings(), SolverSettings::default());
        assert_eq!(c.output.directory, PathBuf::from("out"));
    }

    #[test]
    fn rejects_bad_contracts() {
        let base = "[metric]\nname = \"r3\"\nc = 1\n[domain]\nconstructor = \"scherk\"\na = 0\nb = 1\nr = 0.3\ns = -0.3\n";
        for extra in [
            "[solver]\ncaps = [2, 2]\n",
            "[solver]\ncaps = [4, 2]\n",
            "[solver]\ncaps = []\n",
            "[solver]\nh_target = 0\n",
            "[solver]\nh_target = -1\n",
            "[solver]\nunknown = 1\n",
            "[check]\nmax_polygons = 0\n",
        ] {
            assert!(matches!(parse(&format!("{base}{extra}")), Err(Error::Config(_))), "{extra}");
        }
        assert!(parse("[metric]\nname = \"s2\"\nc = 1\n[domain]\nconstructor = \"scherk\"\na = 0\nb = 1\nr = 0.3\ns = -0.3\n").is_err());
        assert!(parse("[metric]\nname = \"r3\"\nc = 1\n[domain]\nconstructor = \"scherk\"\na = 0\n").is_err());
        assert!(parse("[metric]\nname = \"r3\"\nc = 1\n[domain]\nfile = \"missing.toml\"\n").is_err());
        assert!(parse("not toml at all [").is_err());
    }

    fn scratch_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("soliton-config-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn domain_file_matches_constructor() {
        let dir = scratch_dir("file");
        let m = MetricModel::euclidean_r3(1.0);
        let frame = ReaperFrame::from_model(&m).unwrap();
        let (a, b, r) = (0.0, 2f64.ln(), 0.3);
        let right = frame.line(r, frame.reaper_height(a, r), frame.reaper_height(b, r)).sample(40);
        std::fs::write(dir.join("right.csv"), crate::io::curve_to_csv(&right)).unwrap();
        let domain = format!(
            "metric = \"r3\"\nc = 1.0\n\
             [[edge]]\ndata = \"+inf\"\ncurve = \"reaper\"\noffset = {a}\nfrom = {}\nto = {r}\n\
             [[edge]]\ndata = 0.0\ncurve = \"csv\"\npath = \"right.csv\"\n\
             [[edge]]\nkind = \"A\"\ncurve = \"reaper\"\noffset = {b}\nfrom = {r}\nto = {}\n\
             [[edge]]\ndata = 0\ncurve = \"tilted-line\"\nx = {}\nfrom = {}\nto = {}\n",
            -r,
            -r,
            -r,
            frame.reaper_height(b, -r),
            frame.reaper_height(a, -r),
        );
        std::fs::write(dir.join("quad.toml"), domain).unwrap();
        let c = ExperimentConfig::parse("[domain]\nfile = \"quad.toml\"\n", &dir).unwrap();
        let m2 = c.model().unwrap();
        let d = c.build_domain(&m2).unwrap();
        let kinds: Vec<EdgeKind> = d.edges().iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EdgeKind::A, EdgeKind::C, EdgeKind::A, EdgeKind::C]);
        let vd = ValidDomain::new(&m2, d).unwrap();
        let reference = ValidDomain::new(&m, scherk_quadrilateral(&m, &ScherkParams::new(a, b, r, -r)).unwrap()).unwrap();
        for (x, y) in vd.edge_lengths().iter().zip(reference.edge_lengths()) {
            assert!((x - y).abs() < 1e-9 * y, "{x} vs {y}");
        }

        let conflict = ExperimentConfig::parse("[metric]\nname = \"h2xr\"\nc = 1\n[domain]\nfile = \"quad.toml\"\n", &dir);
        assert!(matches!(conflict, Err(Error::Config(_))));
        std::fs::write(dir.join("bad.toml"), "[[edge]]\ndata = \"+inf\"\ncurve = \"csv\"\npath = \"nope.csv\"\n[[edge]]\ndata = 1\ncurve = \"csv\"\npath = \"right.csv\"\n").unwrap();
        assert!(ExperimentConfig::parse("[metric]\nname = \"r3\"\nc = 1\n[domain]\nfile = \"bad.toml\"\n", &dir).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn edge_record_kind_and_data_must_agree() {
        let m = MetricModel::euclidean_r3(1.0);
        let rec = |kind: Option<&str>, data: Option<DataValue>| EdgeRecord {
            kind: kind.map(String::from),
            data,
            curve: "vertical".into(),
            offset: None,
            x: Some(0.0),
            from: Some(0.0),
            to: Some(1.0),
            path: None,
        };
        let dir = Path::new(".");
        assert!(edge_from_record(&m, &rec(Some("A"), Some(DataValue::Number(1.0))), dir).is_err());
        assert!(edge_from_record(&m, &rec(Some("C"), None), dir).is_err());
        assert!(edge_from_record(&m, &rec(None, None), dir).is_err());
        assert!(edge_from_record(&m, &rec(None, Some(DataValue::Text("big".into()))), dir).is_err());
        assert_eq!(edge_from_record(&m, &rec(None, Some(DataValue::Text("-inf".into()))), dir).unwrap().kind, EdgeKind::B);
        assert_eq!(edge_from_record(&m, &rec(Some("C"), Some(DataValue::Number(2.5))), dir).unwrap().data_at(Point::default()), Some(2.5));
    }
}
