//! Comma-separated solution tables with header `t,z,w`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fraccalc::{GradedMesh, WeightedGrid};

/// Nodes of a table must match the mesh to this absolute tolerance.
pub const NODE_TOL: f64 = 1e-12;

pub const HEADER: &str = "t,z,w";

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:?}")
}

pub fn write_table(grid: &WeightedGrid) -> String {
    let mut out = String::with_capacity(64 * grid.w().len());
    out.push_str(HEADER);
    out.push('\n');
    for (i, (&t, &w)) in grid.mesh().nodes().iter().zip(grid.w()).enumerate() {
        let _ = writeln!(out, "{},{},{}", fmt_num(t), fmt_num(grid.z_at(i)), fmt_num(w));
    }
    out
}

/// One row of a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub t: f64,
    pub z: f64,
    pub w: f64,
}

fn parse_num(s: &str, line: usize, col: &str) -> Result<f64> {
    let s = s.trim();
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s
            .parse()
            .map_err(|_| Error::schema(format!("line {line}, column {col}"), format!("not a number: {s:?}"))),
    }
}

pub fn read_table(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == HEADER => {}
        _ => return Err(Error::schema("line 1", format!("expected header {HEADER:?}"))),
    }
    lines
        .map(|(i, l)| {
            let line = i + 1;
            let cols: Vec<&str> = l.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::schema(format!("line {line}"), "expected three columns"));
            }
            Ok(Row {
                t: parse_num(cols[0], line, "t")?,
                z: parse_num(cols[1], line, "z")?,
                w: parse_num(cols[2], line, "w")?,
            })
        })
        .collect()
}

/// Check that the rows sit on `mesh` and return their `w` column.
pub fn weights_on_mesh(rows: &[Row], mesh: &GradedMesh) -> Result<Vec<f64>> {
    if rows.len() != mesh.len() {
        return Err(Error::MeshMismatch(format!(
            "table has {} rows, mesh has {} nodes",
            rows.len(),
            mesh.len()
        )));
    }
    for (k, (row, &t)) in rows.iter().zip(mesh.nodes()).enumerate() {
        if (row.t - t).abs() > NODE_TOL {
            return Err(Error::MeshMismatch(format!("row {k}: t = {} but node is {t}", row.t)));
        }
        if !row.w.is_finite() {
            return Err(Error::MeshMismatch(format!("row {k}: w is not finite")));
        }
    }
    Ok(rows.iter().map(|r| r.w).collect())
}
