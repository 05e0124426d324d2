use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use soliton_core::analysis::{self, FluxReport, Side};
use soliton_core::curves::{self, ConnectOptions, ShootOptions, Termination};
use soliton_core::domain::{check_existence_with, validate_domain_with, EdgeKind, ExistenceVerdict, ValidDomain};
use soliton_core::io::{self as sio, num};
use soliton_core::{Error, ExperimentConfig, JsRun, MetricModel};

use crate::args::{FlengthArgs, FluxArgs, GeodesicCmd, MetricArgs, Overrides, SideArg, SolveArgs};
use crate::manifest::{Manifest, Status};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 2;
pub const EXIT_PARTIAL: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_CONTRACT: u8 = 65;
pub const EXIT_INTERNAL: u8 = 70;

/// Per-edge `|F| <= L_f + EDGE_SLACK`.
const EDGE_SLACK: f64 = 1e-6;
/// `|F[boundary]| <= BALANCE_LIMIT * h * L_f[boundary]`.
const BALANCE_LIMIT: f64 = 0.05;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config(_) => EXIT_USAGE,
            Error::Contract(_)
            | Error::InvalidDomain(_)
            | Error::InvalidPolygon(_)
            | Error::InvalidCurve(_)
            | Error::NonFlatBase
            | Error::OutsideChart(_) => EXIT_CONTRACT,
            Error::Integration(_) | Error::NoConnection(_) | Error::Solver { .. } => EXIT_FAIL,
            Error::Mesh(_) | Error::Io(_) => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_INTERNAL, e.to_string())
    }
}

pub type CmdResult = Result<u8, Failure>;

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn model(a: &MetricArgs) -> Result<MetricModel, Failure> {
    MetricModel::by_name(&a.metric, a.c).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))
}

fn termination_label(t: Termination) -> &'static str {
    match t {
        Termination::LengthReached => "length reached",
        Termination::ChartExit => "chart exit",
        Termination::CurvatureBlowUp => "curvature blow-up",
    }
}

pub fn geodesic(cmd: &GeodesicCmd) -> CmdResult {
    match cmd {
        GeodesicCmd::Shoot { metric, from, angle, len, spacing, tol, out } => {
            let m = model(metric)?;
            if !(*len > 0.0 && len.is_finite()) {
                return Err(Failure::new(EXIT_USAGE, "--len must be positive"));
            }
            let mut opts = ShootOptions::default();
            if let Some(s) = spacing {
                opts.spacing = *s;
            }
            if let Some(t) = tol {
                opts.tol = *t;
            }
            if !(opts.spacing > 0.0 && opts.tol > 0.0) {
                return Err(Failure::new(EXIT_USAGE, "--spacing and --tol must be positive"));
            }
            let shot = curves::shoot_geodesic(&m, *from, *angle, *len, &opts)?;
            emit(&sio::curve_to_csv(&shot.curve), out.as_deref())?;
            eprintln!("termination: {}", termination_label(shot.termination));
            eprintln!("flat_length: {}", num(shot.length));
            Ok(EXIT_PASS)
        }
        GeodesicCmd::Connect { metric, from, to, window, scan_step, out } => {
            let m = model(metric)?;
            let mut opts = ConnectOptions::default();
            if let Some(w) = window {
                opts.window = *w;
            }
            if let Some(deg) = scan_step {
                if !(*deg > 0.0) {
                    return Err(Failure::new(EXIT_USAGE, "--scan-step must be positive"));
                }
                opts.scan_step = deg.to_radians();
            }
            let curve = curves::connect_geodesic(&m, *from, *to, &opts)?;
            emit(&sio::curve_to_csv(&curve), out.as_deref())?;
            Ok(EXIT_PASS)
        }
    }
}

pub fn flength(a: &FlengthArgs) -> CmdResult {
    let mut s = String::new();
    if let Some(path) = &a.config {
        let cfg = ExperimentConfig::load(path)?;
        let m = cfg.model()?;
        let d = ValidDomain::with_options(&m, cfg.build_domain(&m)?, cfg.validation_options())?;
        for (i, e) in d.edges().iter().enumerate() {
            let _ = writeln!(s, "edge_{i}: kind={} f_length={}", e.kind, num(d.edge_length(i)));
        }
        let _ = writeln!(s, "perimeter_f: {}", num(d.perimeter()));
    } else {
        let (Some(name), Some(c), Some(curve)) = (&a.metric, a.c, &a.curve) else {
            return Err(Failure::new(EXIT_USAGE, "flength needs --config, or --metric, --c and --curve"));
        };
        let m = model(&MetricArgs { metric: name.clone(), c })?;
        let curve = sio::read_curve(curve)?;
        let _ = writeln!(s, "f_length: {}", num(curves::f_length(&m, &curve)?));
    }
    emit(&s, None)?;
    Ok(EXIT_PASS)
}

fn load(path: &Path, o: Option<&Overrides>) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(o) = o {
        if let Some(caps) = &o.caps {
            cfg.solver.caps = caps.clone();
        }
        if let Some(h) = o.h {
            cfg.solver.h_target = h;
        }
        cfg.validate()?;
    }
    Ok(cfg)
}

fn verdict_text(v: &ExistenceVerdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict: {}", v.verdict);
    let _ = writeln!(s, "partial: {}", v.partial);
    if !v.reason.is_empty() {
        let _ = writeln!(s, "reason: {}", v.reason);
    }
    if let Some(b) = v.balance {
        let _ = writeln!(s, "balance: alpha_f={} beta_f={} holds={}", num(b.alpha), num(b.beta), b.holds);
    }
    for (p, r) in v.polygons.polygons.iter().zip(&v.reports) {
        let _ = writeln!(
            s,
            "polygon {}: alpha_f={} beta_f={} perimeter_f={} passes={}",
            p.describe(),
            num(r.alpha_f),
            num(r.beta_f),
            num(r.perimeter_f),
            r.passes()
        );
    }
    if let Some(w) = v.witness {
        let _ = writeln!(s, "witness: {}", v.polygons.polygons[w].describe());
    }
    s
}

fn existence_code(v: &ExistenceVerdict) -> u8 {
    if !v.passes() {
        EXIT_FAIL
    } else if v.partial {
        EXIT_PARTIAL
    } else {
        EXIT_PASS
    }
}

pub fn check(path: &Path) -> CmdResult {
    let cfg = load(path, None)?;
    let m = cfg.model()?;
    let d = cfg.build_domain(&m)?;
    let report = validate_domain_with(&m, &d, &cfg.validation_options());
    if !report.is_valid() {
        emit(&format!("valid: false\n{report}verdict: not admissible\n"), None)?;
        return Ok(EXIT_FAIL);
    }
    let d = ValidDomain::with_options(&m, d, cfg.validation_options())?;
    let v = check_existence_with(&d, &cfg.existence_options())?;
    emit(&format!("valid: true\n{}", verdict_text(&v)), None)?;
    Ok(existence_code(&v))
}

fn cap_label(c: f64) -> String {
    format!("{c}")
}

struct Solved {
    m: MetricModel,
    d: ValidDomain,
    run: JsRun,
    reports: Vec<FluxReport>,
}

impl Solved {
    fn flux_ok(&self) -> bool {
        self.reports.iter().all(|r| r.max_excess() <= EDGE_SLACK && r.balance_ratio() <= BALANCE_LIMIT)
    }

    fn summary(&self) -> String {
        let mut s = String::new();
        for (f, r) in self.run.fields.iter().zip(&self.reports) {
            let _ = write!(
                s,
                "cap {}: newton={} residual={:.3e} balance_ratio={:.3e} max_excess={:.3e}",
                cap_label(f.cap.unwrap_or(f64::NAN)),
                f.newton_iters,
                f.residual_norm,
                r.balance_ratio(),
                r.max_excess()
            );
            for e in &r.edges {
                let _ = write!(s, " {}{}={:.6}", e.kind, e.edge, e.ratio);
            }
            s.push('\n');
        }
        if let Some(fail) = &self.run.failure {
            let _ = writeln!(s, "cap {} failed: {}", cap_label(fail.cap), fail.error);
        }
        s
    }
}

fn solve_config(cfg: &ExperimentConfig) -> Result<Solved, Failure> {
    let m = cfg.model()?;
    let d = ValidDomain::with_options(&m, cfg.build_domain(&m)?, cfg.validation_options())?;
    let run = soliton_core::solve_jenkins_serrin_with(&m, &d, &cfg.schedule()?, &cfg.js_options())?;
    let reports = run.fields.iter().map(|f| analysis::flux_report(&m, f, &d)).collect::<Result<Vec<_>, _>>()?;
    Ok(Solved { m, d, run, reports })
}

fn flux_table(reports: &[FluxReport]) -> String {
    let mut s = String::from("cap,edge,kind,flux,length_f,ratio,reaction\n");
    for r in reports {
        let cap = r.cap.map_or(String::new(), num);
        for e in &r.edges {
            let _ = writeln!(s, "{cap},{},{},{},{},{},{}", e.edge, e.kind, num(e.flux), num(e.length_f), num(e.ratio), num(e.reaction));
        }
    }
    s
}

fn require_caps(cfg: &ExperimentConfig) -> Result<(), Failure> {
    if cfg.output.divergence && cfg.solver.caps.len() < 3 {
        return Err(Failure::new(
            EXIT_CONTRACT,
            format!("divergence classification needs at least 3 cap levels, got {}", cfg.solver.caps.len()),
        ));
    }
    Ok(())
}

pub fn solve(a: &SolveArgs) -> CmdResult {
    let mut cfg = load(&a.config, Some(&a.overrides))?;
    if let Some(out) = &a.out {
        cfg.output.directory = std::env::current_dir()?.join(out);
    }
    require_caps(&cfg)?;
    let dir = cfg.output_dir();
    let mut manifest = Manifest::start(&dir, "solve")?;
    match solve_into(&cfg, &mut manifest) {
        Ok((code, status)) => {
            manifest.finish(status)?;
            Ok(code)
        }
        Err(f) => {
            manifest.note(format!("error: {}", f.message))?;
            manifest.finish(Status::Failed)?;
            Err(f)
        }
    }
}

fn solve_into(cfg: &ExperimentConfig, manifest: &mut Manifest) -> Result<(u8, Status), Failure> {
    let solved = solve_config(cfg)?;
    let Solved { m, d, run, reports } = &solved;
    let mut out = String::new();
    let _ = writeln!(out, "vertices: {}", run.mesh.n_vertices());
    let _ = writeln!(out, "triangles: {}", run.mesh.triangles().len());
    out.push_str(&solved.summary());

    if cfg.output.check {
        let v = check_existence_with(d, &cfg.existence_options())?;
        let _ = writeln!(out, "existence: {}", v.verdict);
        manifest.write("existence.txt", &verdict_text(&v))?;
    }
    if run.fields.is_empty() {
        if let Some(f) = &run.failure {
            manifest.note(format!("cap {} failed: {}", cap_label(f.cap), f.error))?;
        }
        emit(&out, None)?;
        return Ok((EXIT_PARTIAL, Status::Partial));
    }
    if cfg.output.fields {
        manifest.write("fields.csv", &sio::fields_to_csv(&run.fields)?)?;
        manifest.write("triangles.csv", &sio::triangles_to_csv(&run.mesh))?;
    }
    if cfg.output.vtk {
        manifest.write("mesh.vtk", &sio::to_vtk(&run.mesh, &run.fields)?)?;
    }
    if cfg.output.flux {
        manifest.write("flux.csv", &flux_table(reports))?;
        let kv: Vec<String> = reports.iter().map(FluxReport::to_key_value).collect();
        manifest.write("flux.txt", &kv.join("\n"))?;
    }
    let mut structure_ok = true;
    if cfg.output.divergence {
        if run.fields.len() >= 3 {
            let div = analysis::classify_convergence(m, d, &run.fields, cfg.solver.growth_threshold)?;
            let verdict = analysis::verify_divergence_structure(m, d, std::slice::from_ref(&div));
            let _ = writeln!(
                out,
                "divergence: convergent={} divergent={} interfaces={} components={}",
                div.count(analysis::VertexClass::Convergent),
                div.count(analysis::VertexClass::Divergent),
                div.interfaces.len(),
                div.components.len()
            );
            out.push_str(&verdict.to_string());
            structure_ok = verdict.passes();
            manifest.write("divergence.txt", &div.to_key_value())?;
            manifest.write("divergence.csv", &div.to_csv())?;
            manifest.write("interfaces.csv", &div.interfaces_csv())?;
            manifest.write("structure.txt", &verdict.to_string())?;
        } else {
            manifest.note(format!("divergence classification skipped: only {} caps converged", run.fields.len()))?;
        }
    }
    let flux_ok = solved.flux_ok();
    let _ = writeln!(out, "flux_checks: {}", if flux_ok { "pass" } else { "fail" });
    if let Some(f) = &run.failure {
        manifest.note(format!("cap {} failed: {}", cap_label(f.cap), f.error))?;
    }
    emit(&out, None)?;
    Ok(if run.failure.is_some() {
        (EXIT_PARTIAL, Status::Partial)
    } else if !flux_ok || !structure_ok {
        (EXIT_FAIL, Status::Complete)
    } else {
        (EXIT_PASS, Status::Complete)
    })
}

pub fn flux(a: &FluxArgs) -> CmdResult {
    let cfg = load(&a.config, Some(&a.overrides))?;
    let path = a.curve.as_deref().map(sio::read_curve).transpose()?;
    let solved = solve_config(&cfg)?;
    let side = match a.side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let mut out = String::new();
    for (f, r) in solved.run.fields.iter().zip(&solved.reports) {
        out.push_str(&r.to_key_value());
        if let Some(p) = &path {
            let _ = writeln!(out, "curve_flux: {}", num(analysis::flux(&solved.m, f, p, side)?));
            let _ = writeln!(out, "curve_f_length: {}", num(curves::f_length(&solved.m, p)?));
        }
        out.push('\n');
    }
    let a_ratios: Vec<Vec<f64>> = (0..solved.d.edges().len())
        .filter(|&i| solved.d.edges()[i].kind != EdgeKind::C)
        .map(|i| solved.reports.iter().map(|r| r.edges[i].ratio).collect())
        .collect();
    let rising = a_ratios.iter().all(|v| v.windows(2).all(|w| w[1] > w[0]));
    let _ = writeln!(out, "infinite_edge_ratios_rising: {rising}");
    let flux_ok = solved.flux_ok();
    let _ = writeln!(out, "flux_checks: {}", if flux_ok { "pass" } else { "fail" });
    if let Some(f) = &solved.run.failure {
        let _ = writeln!(out, "cap {} failed: {}", cap_label(f.cap), f.error);
    }
    emit(&out, None)?;
    Ok(if solved.run.failure.is_some() {
        EXIT_PARTIAL
    } else if flux_ok {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

pub fn example(name: Option<&str>) -> CmdResult {
    match name {
        None => {
            let mut s = String::new();
            for (n, desc, _) in soliton_core::config::EXAMPLES {
                let _ = writeln!(s, "{n}: {desc}");
            }
            emit(&s, None)?;
            Ok(EXIT_PASS)
        }
        Some(n) => match soliton_core::config::example(n) {
            Some(text) => {
                emit(text, None)?;
                Ok(EXIT_PASS)
            }
            None => Err(Failure::new(EXIT_USAGE, format!("unknown example '{n}'; run `soliton example` for the list"))),
        },
    }
}
