//! Admissible polygons, `alpha_f`/`beta_f` and the structural conditions
//! `2 alpha_f(P) < L_f[dP]`, `2 beta_f(P) < L_f[dP]`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::curves::{connect_geodesic, f_curvature_profile, f_length, ConnectOptions, Curve, ParamCurve};
use crate::error::{Error, Result};
use crate::geometry::{polyline_self_intersection, Point};

use super::{EdgeKind, ValidDomain};

/// A polygon side: a whole boundary edge or an interior chord between two
/// domain vertices.
#[derive(Debug, Clone, PartialEq)]
pub enum Side {
    Edge(usize),
    Chord { from: usize, to: usize, curve: ParamCurve },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissiblePolygon {
    sides: Vec<Side>,
}

impl AdmissiblePolygon {
    pub fn new(sides: Vec<Side>) -> Self {
        Self { sides }
    }

    /// The polygon `P = Omega` with `n` edges.
    pub fn whole(n: usize) -> Self {
        Self { sides: (0..n).map(Side::Edge).collect() }
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn is_whole_domain(&self, n: usize) -> bool {
        self.sides.len() == n && self.sides.iter().enumerate().all(|(i, s)| *s == Side::Edge(i))
    }

    fn endpoints(side: &Side, n: usize) -> (usize, usize) {
        match side {
            Side::Edge(i) => (*i, (*i + 1) % n),
            Side::Chord { from, to, .. } => (*from, *to),
        }
    }

    /// Domain vertex index at the start of each side.
    pub fn vertex_indices(&self, n: usize) -> Vec<usize> {
        self.sides.iter().map(|s| Self::endpoints(s, n).0).collect()
    }

    /// Short description such as `E0 E1 D(2-0)`.
    pub fn describe(&self) -> String {
        self.sides
            .iter()
            .map(|s| match s {
                Side::Edge(i) => format!("E{i}"),
                Side::Chord { from, to, .. } => format!("D({from}-{to})"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonReport {
    pub label: String,
    pub alpha_f: f64,
    pub beta_f: f64,
    pub perimeter_f: f64,
    pub passes_alpha: bool,
    pub passes_beta: bool,
    /// f-length of each side, in order.
    pub side_lengths: Vec<f64>,
}

impl PolygonReport {
    pub fn passes(&self) -> bool {
        self.passes_alpha && self.passes_beta
    }
}

/// Relative strictness margin: a pass needs `L - 2 alpha >= margin * L`.
pub const STRICT_MARGIN: f64 = 1e-9;

fn check_chord(d: &ValidDomain, curve: &ParamCurve, from: usize, to: usize) -> std::result::Result<(), String> {
    let v = d.vertices();
    let tol_end = 1e-8 * (1.0 + d.diameter());
    if curve.start().dist(v[from]) > tol_end || curve.end().dist(v[to]) > tol_end {
        return Err(format!("chord does not join vertices {from} and {to}"));
    }
    if curve.len() > 2 {
        let k = f_curvature_profile(d.model(), curve).map_err(|e| e.to_string())?;
        let worst = k.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if worst > d.options().tol_geodesic {
            return Err(format!("chord is not an f-geodesic (|k_f| up to {worst:.3e})"));
        }
    }
    let tol_in = 1e-6 * d.diameter();
    let s = curve.samples();
    if let Some(p) = s[1..s.len() - 1].iter().find(|p| !d.contains(**p, tol_in)) {
        return Err(format!("chord leaves the domain near ({:.6}, {:.6})", p.x, p.t));
    }
    Ok(())
}

fn ring_of(d: &ValidDomain, p: &AdmissiblePolygon) -> Vec<Point> {
    let mut ring = Vec::new();
    for side in &p.sides {
        let s = match side {
            Side::Edge(i) => d.edge_polyline(*i).samples(),
            Side::Chord { curve, .. } => curve.samples(),
        };
        ring.extend_from_slice(&s[..s.len() - 1]);
    }
    ring
}

fn validate_polygon(d: &ValidDomain, p: &AdmissiblePolygon) -> Result<()> {
    let n = d.edges().len();
    if p.sides.len() < 2 {
        return Err(Error::InvalidPolygon("a polygon needs at least two sides".into()));
    }
    for (k, side) in p.sides.iter().enumerate() {
        let (a, b) = AdmissiblePolygon::endpoints(side, n);
        if a >= n || b >= n {
            return Err(Error::InvalidPolygon(format!("side {k} refers to a missing vertex")));
        }
        let next = AdmissiblePolygon::endpoints(&p.sides[(k + 1) % p.sides.len()], n).0;
        if b != next {
            return Err(Error::InvalidPolygon(format!("side {k} ends at vertex {b} but the next side starts at {next}")));
        }
        if let Side::Chord { from, to, curve } = side {
            if from == to {
                return Err(Error::InvalidPolygon(format!("chord {k} is degenerate")));
            }
            check_chord(d, curve, *from, *to).map_err(Error::InvalidPolygon)?;
        }
    }
    if !p.is_whole_domain(n) {
        let ring = ring_of(d, p);
        if polyline_self_intersection(&ring, true).is_some() {
            return Err(Error::InvalidPolygon(format!("polygon {} is not simple", p.describe())));
        }
    }
    Ok(())
}

/// `alpha_f`, `beta_f` and `L_f` of a polygon of a validated domain.
pub fn polygon_report(d: &ValidDomain, p: &AdmissiblePolygon) -> Result<PolygonReport> {
    validate_polygon(d, p)?;
    report_unchecked(d, p)
}

fn report_unchecked(d: &ValidDomain, p: &AdmissiblePolygon) -> Result<PolygonReport> {
    let mut side_lengths = Vec::with_capacity(p.sides.len());
    let (mut alpha, mut beta, mut not_a, mut not_b) = (0.0, 0.0, 0.0, 0.0);
    for side in &p.sides {
        let (len, kind) = match side {
            Side::Edge(i) => (d.edge_length(*i), Some(d.edges()[*i].kind)),
            Side::Chord { curve, .. } => (f_length(d.model(), curve)?, None),
        };
        side_lengths.push(len);
        match kind {
            Some(EdgeKind::A) => {
                alpha += len;
                not_b += len;
            }
            Some(EdgeKind::B) => {
                beta += len;
                not_a += len;
            }
            _ => {
                not_a += len;
                not_b += len;
            }
        }
    }
    let perimeter: f64 = side_lengths.iter().sum();
    // 2 alpha < L  <=>  alpha < L - alpha, the f-length of the non-A sides.
    Ok(PolygonReport {
        label: p.describe(),
        alpha_f: alpha,
        beta_f: beta,
        perimeter_f: perimeter,
        passes_alpha: not_a - alpha >= STRICT_MARGIN * perimeter,
        passes_beta: not_b - beta >= STRICT_MARGIN * perimeter,
        side_lengths,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationOptions {
    pub max_polygons: usize,
    pub connect: ConnectOptions,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self { max_polygons: 256, connect: ConnectOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChordFailure {
    pub from: usize,
    pub to: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct PolygonSet {
    /// `polygons[0]` is always the whole domain.
    pub polygons: Vec<AdmissiblePolygon>,
    pub chord_failures: Vec<ChordFailure>,
    /// More candidates existed than `max_polygons`.
    pub capped: bool,
}

/// Vertex subsets with enumerations beyond this size are not attempted.
const MAX_ENUMERATED_VERTICES: usize = 24;

pub fn enumerate_polygons(d: &ValidDomain, max_polygons: usize) -> PolygonSet {
    enumerate_polygons_with(d, &EnumerationOptions { max_polygons, ..EnumerationOptions::default() })
}

/// Candidate polygons over vertex subsets (in boundary order) of size at
/// least three, joined by boundary edges between adjacent vertices and by
/// f-geodesic chords otherwise. At most one chord (the shortest found) is
/// used per vertex pair.
pub fn enumerate_polygons_with(d: &ValidDomain, opts: &EnumerationOptions) -> PolygonSet {
    let n = d.edges().len();
    let mut set = PolygonSet { polygons: vec![AdmissiblePolygon::whole(n)], chord_failures: Vec::new(), capped: false };
    if opts.max_polygons <= 1 {
        set.capped = n > 3;
        return set;
    }
    if n > MAX_ENUMERATED_VERTICES {
        set.capped = true;
        return set;
    }
    let verts = d.vertices();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 2..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == 0 && j == n - 1))
        .collect();
    let results: Vec<((usize, usize), std::result::Result<ParamCurve, String>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let r = connect_geodesic(d.model(), verts[i], verts[j], &opts.connect)
                .map_err(|e| e.to_string())
                .and_then(|c| check_chord(d, &c, i, j).map(|_| c));
            ((i, j), r)
        })
        .collect();
    let mut chords: HashMap<(usize, usize), ParamCurve> = HashMap::new();
    for ((i, j), r) in results {
        match r {
            Ok(c) => {
                chords.insert((i, j), c);
            }
            Err(reason) => set.chord_failures.push(ChordFailure { from: i, to: j, reason }),
        }
    }

    let full = (1u32 << n) - 1;
    'masks: for mask in 1..full {
        if mask.count_ones() < 3 {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut sides = Vec::with_capacity(subset.len());
        for k in 0..subset.len() {
            let (a, b) = (subset[k], subset[(k + 1) % subset.len()]);
            if b == (a + 1) % n {
                sides.push(Side::Edge(a));
                continue;
            }
            let curve = if a < b {
                chords.get(&(a, b)).cloned()
            } else {
                chords.get(&(b, a)).map(|c| c.reversed())
            };
            match curve {
                Some(curve) => sides.push(Side::Chord { from: a, to: b, curve }),
                None => continue 'masks,
            }
        }
        let poly = AdmissiblePolygon::new(sides);
        if polyline_self_intersection(&ring_of(d, &poly), true).is_some() {
            continue;
        }
        if set.polygons.len() >= opts.max_polygons {
            set.capped = true;
            break;
        }
        set.polygons.push(poly);
    }
    set
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Some C-edge present; every polygon satisfies both strict conditions.
    CaseA,
    /// No C-edges; `alpha_f(Omega) = beta_f(Omega)` and every proper polygon
    /// satisfies both strict conditions.
    CaseB,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CaseA => "case (a)",
            Verdict::CaseB => "case (b)",
            Verdict::Fails => "fails",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Balance {
    pub alpha: f64,
    pub beta: f64,
    pub tol: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceOptions {
    pub enumeration: EnumerationOptions,
    /// `|alpha_f(Omega) - beta_f(Omega)| <= tol_balance * L_f[dOmega]`.
    pub tol_balance: f64,
}

impl Default for ExistenceOptions {
    fn default() -> Self {
        Self { enumeration: EnumerationOptions::default(), tol_balance: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct ExistenceVerdict {
    pub verdict: Verdict,
    /// The polygon cap was reached; unlisted polygons were not checked.
    pub partial: bool,
    /// Index into `polygons.polygons` / `reports` of the first failing polygon.
    pub witness: Option<usize>,
    pub reason: String,
    pub reports: Vec<PolygonReport>,
    pub polygons: PolygonSet,
    pub balance: Option<Balance>,
}

impl ExistenceVerdict {
    pub fn passes(&self) -> bool {
        self.verdict != Verdict::Fails
    }

    pub fn witness_report(&self) -> Option<&PolygonReport> {
        self.witness.map(|i| &self.reports[i])
    }
}

pub fn check_existence(d: &ValidDomain) -> Result<ExistenceVerdict> {
    check_existence_with(d, &ExistenceOptions::default())
}

pub fn check_existence_with(d: &ValidDomain, opts: &ExistenceOptions) -> Result<ExistenceVerdict> {
    let n = d.edges().len();
    let polygons = enumerate_polygons_with(d, &opts.enumeration);
    let reports = polygons
        .polygons
        .par_iter()
        .map(|p| report_unchecked(d, p))
        .collect::<Result<Vec<_>>>()?;
    let has_c = d.domain().has_kind(EdgeKind::C);
    let mut verdict = ExistenceVerdict {
        verdict: if has_c { Verdict::CaseA } else { Verdict::CaseB },
        partial: polygons.capped,
        witness: None,
        reason: String::new(),
        reports,
        polygons,
        balance: None,
    };
    if !has_c {
        let whole = &verdict.reports[0];
        let tol = opts.tol_balance * whole.perimeter_f;
        let holds = (whole.alpha_f - whole.beta_f).abs() <= tol;
        verdict.balance = Some(Balance { alpha: whole.alpha_f, beta: whole.beta_f, tol, holds });
        if !holds {
            verdict.verdict = Verdict::Fails;
            verdict.witness = Some(0);
            verdict.reason = format!(
                "alpha_f(Omega) = {:.12} differs from beta_f(Omega) = {:.12}",
                whole.alpha_f, whole.beta_f
            );
            return Ok(verdict);
        }
    }
    // With no C-edges, Omega itself has 2 alpha = L exactly and is exempt.
    let failing = verdict
        .reports
        .iter()
        .enumerate()
        .find(|(i, r)| (has_c || !verdict.polygons.polygons[*i].is_whole_domain(n)) && !r.passes());
    if let Some((i, r)) = failing {
        verdict.verdict = Verdict::Fails;
        verdict.witness = Some(i);
        verdict.reason = format!(
            "polygon {} violates {}: alpha_f = {:.12}, beta_f = {:.12}, L_f = {:.12}",
            r.label,
            if r.passes_alpha { "2 beta_f < L_f" } else { "2 alpha_f < L_f" },
            r.alpha_f,
            r.beta_f,
            r.perimeter_f
        );
    }
    Ok(verdict)
}
