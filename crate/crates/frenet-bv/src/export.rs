//! Deterministic CSV/JSON/OBJ writers.
//!
//! Floats print in shortest round-trip form, struct fields serialize in
//! declaration order, and files are written atomically (temp then rename),
//! so identical inputs produce byte-identical outputs.

use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::Serialize;

use crate::curvegeom::{Curve, GeomSummary, JumpAngleReport};
use crate::error::{Error, Result};
use crate::solver::{FramePath, ResidualReport};

/// Output formats accepted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Obj,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "obj" => Ok(Format::Obj),
            other => Err(Error::BadFormat(other.to_string())),
        }
    }
}

/// Everything the `solve` summary records.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryDoc {
    pub name: String,
    pub dimension: usize,
    pub length: f64,
    pub grid_nodes: usize,
    pub invariants: Option<GeomSummary>,
    pub tantrix_spherical_variation: Option<f64>,
    pub tantrix_total_variation: Option<f64>,
    pub max_orthogonality_defect: f64,
    pub max_residual: Option<f64>,
    pub residual_at: Option<f64>,
    pub jumps: Vec<JumpAngleReport>,
}

impl SummaryDoc {
    pub fn with_residual(mut self, report: &ResidualReport) -> Self {
        self.max_residual = Some(report.max_residual);
        self.residual_at = Some(report.at_s);
        self
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    /// `"mollify"` for the epsilon ladder, `"truncate"` for jump levels.
    pub study: String,
    pub parameter: f64,
    pub frechet: f64,
    pub tc_exact: f64,
    pub tat_exact: f64,
    pub discarded_mass: f64,
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp: PathBuf = path.with_extension("tmp");
    let io_err = |source: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err)?;
        }
    }
    {
        let mut f = std::fs::File::create(&tmp).map_err(io_err)?;
        f.write_all(bytes).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
    }
    std::fs::rename(&tmp, path).map_err(io_err)
}

/// `s, g11..g33, jump` rows; planar frames embed as the upper-left block
/// of a 3 x 3 identity.
pub fn frames_csv(path: &FramePath) -> String {
    let mut out = String::from("s,g11,g12,g13,g21,g22,g23,g31,g32,g33,jump\n");
    for i in 0..path.len() {
        let m = path.frame(i).matrix();
        let entry = |r: usize, c: usize| -> f64 {
            if r < m.nrows() && c < m.ncols() {
                m[(r, c)]
            } else if r == c {
                1.0
            } else {
                0.0
            }
        };
        let jump = if path.is_jump_node(i) { 1 } else { 0 };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            path.s(i),
            entry(0, 0),
            entry(0, 1),
            entry(0, 2),
            entry(1, 0),
            entry(1, 1),
            entry(1, 2),
            entry(2, 0),
            entry(2, 1),
            entry(2, 2),
            jump
        ));
    }
    out
}

/// `s, x, y, z` rows.
pub fn curve_csv(curve: &Curve) -> String {
    let mut out = String::from("s,x,y,z\n");
    for i in 0..curve.len() {
        let p = curve.point(i);
        out.push_str(&format!("{},{},{},{}\n", curve.s(i), p.x, p.y, p.z));
    }
    out
}

/// Wavefront OBJ polyline: `v` records followed by one `l` element.
pub fn curve_obj(curve: &Curve) -> String {
    let mut out = String::new();
    for i in 0..curve.len() {
        let p = curve.point(i);
        out.push_str(&format!("v {} {} {}\n", p.x, p.y, p.z));
    }
    out.push('l');
    for i in 1..=curve.len() {
        out.push_str(&format!(" {i}"));
    }
    out.push('\n');
    out
}

/// Curve as a JSON table with the same columns as the CSV.
pub fn curve_json(curve: &Curve) -> Result<String> {
    #[derive(Serialize)]
    struct Doc {
        s: Vec<f64>,
        points: Vec<[f64; 3]>,
    }
    let doc = Doc {
        s: curve.svals().to_vec(),
        points: curve.points().iter().map(|p| [p.x, p.y, p.z]).collect(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Numerical(e.to_string()))
}

pub fn summary_json(doc: &SummaryDoc) -> Result<String> {
    serde_json::to_string_pretty(doc).map_err(|e| Error::Numerical(e.to_string()))
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("study,parameter,frechet,tc_exact,tat_exact,discarded_mass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.study, r.parameter, r.frechet, r.tc_exact, r.tat_exact, r.discarded_mass
        ));
    }
    out
}

/// Reads a curve back from its CSV export.
pub fn parse_curve_csv(text: &str) -> Result<Curve> {
    let mut svals = Vec::new();
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line != "s,x,y,z" {
                return Err(Error::ScenarioParse {
                    name: "curve.csv".into(),
                    message: format!("unexpected header `{line}`"),
                });
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::ScenarioParse {
                name: "curve.csv".into(),
                message: format!("line {}: expected 4 fields", lineno + 1),
            });
        }
        let parse = |f: &str| -> Result<f64> {
            f.parse().map_err(|_| Error::ScenarioParse {
                name: "curve.csv".into(),
                message: format!("line {}: bad number `{f}`", lineno + 1),
            })
        };
        svals.push(parse(fields[0])?);
        points.push(Vector3::new(
            parse(fields[1])?,
            parse(fields[2])?,
            parse(fields[3])?,
        ));
    }
    Curve::from_samples(svals, points)
}
