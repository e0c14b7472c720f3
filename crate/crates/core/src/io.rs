//! Text outputs: point and segment tables, CSV reports and JSON summaries.
//!
//! Floats are written with 17 significant digits so files round-trip exactly.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::StudyError;
use crate::march::FrontGraph;
use crate::metrics::{Evenness, Histogram};

/// `x` in scientific notation with 17 significant digits; `nan` for NaN.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> StudyError + '_ {
    move |source| StudyError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_error(path: &Path) -> impl FnOnce(csv::Error) -> StudyError + '_ {
    move |e| StudyError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), StudyError> {
    fs::create_dir_all(dir).map_err(io_error(dir))
}

/// Writes a header and rows of preformatted cells.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), StudyError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error(path))?;
    w.write_record(header).map_err(csv_error(path))?;
    for row in rows {
        w.write_record(row).map_err(csv_error(path))?;
    }
    w.flush().map_err(io_error(path))
}

/// One row per accepted point, in acceptance order:
/// `id,x,y,t,nu1,nu2,nu3,parent_a,parent_b,error`.
///
/// Ids are point indices plus one; `0` marks a missing parent and `nan` a
/// missing error.
pub fn write_points(path: &Path, graph: &FrontGraph, errors: Option<&[Option<f64>]>) -> Result<(), StudyError> {
    let rows: Vec<Vec<String>> = graph
        .accepted_points()
        .enumerate()
        .map(|(k, p)| {
            let (a, b) = p.parents.map_or((0, 0), |(a, b)| (a.0 + 1, b.0 + 1));
            let e = errors.and_then(|e| e[k]).unwrap_or(f64::NAN);
            vec![
                (p.id.0 + 1).to_string(),
                fmt_f64(p.pos.x),
                fmt_f64(p.pos.y),
                fmt_f64(p.pos.z),
                fmt_f64(p.normal.x),
                fmt_f64(p.normal.y),
                fmt_f64(p.normal.z),
                a.to_string(),
                b.to_string(),
                fmt_f64(e),
            ]
        })
        .collect();
    write_table(path, &["id", "x", "y", "t", "nu1", "nu2", "nu3", "parent_a", "parent_b", "error"], &rows)
}

/// Band segments of every recorded snapshot: `snapshot,time,a,b,xa,ya,xb,yb`.
pub fn write_segments(path: &Path, graph: &FrontGraph) -> Result<(), StudyError> {
    let mut rows = Vec::new();
    for (k, snap) in graph.snapshots.iter().enumerate() {
        for &(a, b) in &snap.segments {
            let (pa, pb) = (graph.point(a).pos, graph.point(b).pos);
            rows.push(vec![
                k.to_string(),
                fmt_f64(snap.time),
                (a.0 + 1).to_string(),
                (b.0 + 1).to_string(),
                fmt_f64(pa.x),
                fmt_f64(pa.y),
                fmt_f64(pb.x),
                fmt_f64(pb.y),
            ]);
        }
    }
    write_table(path, &["snapshot", "time", "a", "b", "xa", "ya", "xb", "yb"], &rows)
}

/// `bin_lower,parent_a,parent_b` with the distances in units of `h`.
pub fn write_evenness(path: &Path, evenness: &Evenness) -> Result<(), StudyError> {
    let bins = evenness.parent_a.counts.len().max(evenness.parent_b.counts.len());
    let count = |h: &Histogram, k: usize| h.counts.get(k).copied().unwrap_or(0).to_string();
    let rows: Vec<Vec<String>> = (0..bins)
        .map(|k| vec![fmt_f64(Histogram::bin_lower(k)), count(&evenness.parent_a, k), count(&evenness.parent_b, k)])
        .collect();
    write_table(path, &["bin_lower", "parent_a", "parent_b"], &rows)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), StudyError> {
    let file = File::create(path).map_err(io_error(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| StudyError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    writeln!(w).map_err(io_error(path))?;
    w.flush().map_err(io_error(path))
}
