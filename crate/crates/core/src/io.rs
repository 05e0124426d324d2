//! Text formats: curve CSV, per-cap field tables and legacy VTK meshes.
//!
//! Floating point values are written with 17 significant digits so that a
//! round trip through text is exact.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::curves::ParamCurve;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mesh::TriMesh;
use crate::solver::SolutionField;

/// Scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn curve_to_csv(curve: &ParamCurve) -> String {
    let mut s = String::from("x,t\n");
    for p in curve.samples() {
        let _ = writeln!(s, "{},{}", num(p.x), num(p.t));
    }
    s
}

/// Parses a two-column `x,t` table. A header row is detected by a
/// non-numeric first field.
pub fn curve_from_csv(text: &str) -> Result<ParamCurve> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut pts = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Config(format!("curve csv: {e}")))?;
        if record.len() != 2 {
            return Err(Error::Config(format!("curve csv row {}: expected 2 columns, got {}", line + 1, record.len())));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(t)) if x.is_finite() && t.is_finite() => pts.push(Point::new(x, t)),
            _ if line == 0 && pts.is_empty() && record[0].parse::<f64>().is_err() => continue,
            _ => return Err(Error::Config(format!("curve csv row {}: not a finite number pair", line + 1))),
        }
    }
    ParamCurve::new(pts).map_err(|e| Error::Config(format!("curve csv: {e}")))
}

pub fn read_curve(path: &Path) -> Result<ParamCurve> {
    let text = std::fs::read_to_string(path)?;
    curve_from_csv(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub fn write_curve(path: &Path, curve: &ParamCurve) -> Result<()> {
    std::fs::write(path, curve_to_csv(curve))?;
    Ok(())
}

fn shared_mesh(fields: &[SolutionField]) -> Result<&Arc<TriMesh>> {
    let first = fields.first().ok_or_else(|| Error::Contract("no fields to write".into()))?;
    if fields.iter().any(|f| !Arc::ptr_eq(&f.mesh, &first.mesh) && *f.mesh != *first.mesh) {
        return Err(Error::Contract("fields live on different meshes".into()));
    }
    Ok(&first.mesh)
}

fn column_name(field: &SolutionField, index: usize) -> String {
    match field.cap {
        Some(c) => format!("u_cap_{c}"),
        None => format!("u_{index}"),
    }
}

/// One row per vertex: `vertex,x,t` followed by one `u` column per field.
pub fn fields_to_csv(fields: &[SolutionField]) -> Result<String> {
    let mesh = shared_mesh(fields)?;
    let mut s = String::from("vertex,x,t");
    for (i, f) in fields.iter().enumerate() {
        s.push(',');
        s.push_str(&column_name(f, i));
    }
    s.push('\n');
    for (v, p) in mesh.vertices().iter().enumerate() {
        let _ = write!(s, "{v},{},{}", num(p.x), num(p.t));
        for f in fields {
            s.push(',');
            s.push_str(&num(f.u[v]));
        }
        s.push('\n');
    }
    Ok(s)
}

pub fn triangles_to_csv(mesh: &TriMesh) -> String {
    let mut s = String::from("triangle,v0,v1,v2\n");
    for (k, t) in mesh.triangles().iter().enumerate() {
        let _ = writeln!(s, "{k},{},{},{}", t[0], t[1], t[2]);
    }
    s
}

/// Legacy ASCII unstructured grid, one point scalar per field.
pub fn to_vtk(mesh: &TriMesh, fields: &[SolutionField]) -> Result<String> {
    if !fields.is_empty() && **shared_mesh(fields)? != *mesh {
        return Err(Error::Contract("fields do not live on the given mesh".into()));
    }
    let n = mesh.n_vertices();
    let tris = mesh.triangles();
    let mut s = String::from("# vtk DataFile Version 3.0\nsoliton fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {n} double");
    for p in mesh.vertices() {
        let _ = writeln!(s, "{} {} 0", num(p.x), num(p.t));
    }
    let _ = writeln!(s, "CELLS {} {}", tris.len(), 4 * tris.len());
    for t in tris {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {}", tris.len());
    for _ in tris {
        s.push_str("5\n");
    }
    if !fields.is_empty() {
        let _ = writeln!(s, "POINT_DATA {n}");
        for (i, f) in fields.iter().enumerate() {
            let _ = writeln!(s, "SCALARS {} double 1\nLOOKUP_TABLE default", column_name(f, i));
            for &u in &f.u {
                let _ = writeln!(s, "{}", num(u));
            }
        }
    }
    Ok(s)
}
