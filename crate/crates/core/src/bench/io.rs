//! Point-cloud files (CSV and ASCII PLY) and result tables.
//!
//! CSV clouds have the header `x,y[,z][,nx,ny[,nz]][,label]`. Numbers are
//! written with the shortest representation that round-trips exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::analysis::ConvergenceRecord;
use crate::error::{Error, Result};
use crate::pointcloud::{PointLabel, SurfacePointCloud, Vec3};

/// Normals this close to unit length are renormalized on load.
pub const NORMAL_RENORMALIZE_TOL: f64 = 1e-3;

/// Contents of a point-cloud file, normals optional.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCloud {
    pub dim: usize,
    pub positions: Vec<Vec3>,
    pub normals: Option<Vec<Vec3>>,
    pub labels: Vec<PointLabel>,
}

impl LoadedCloud {
    /// Builds a cloud from the stored normals.
    pub fn into_cloud(self) -> Result<SurfacePointCloud> {
        let normals = self.normals.ok_or(Error::MissingNormals)?;
        SurfacePointCloud::with_labels(self.dim, self.positions, normals, self.labels)
    }

    /// Builds a cloud with the given normals, ignoring any stored ones.
    pub fn with_normals(self, normals: Vec<Vec3>) -> Result<SurfacePointCloud> {
        SurfacePointCloud::with_labels(self.dim, self.positions, normals, self.labels)
    }
}

/// File formats understood by [`load_point_cloud`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    Csv,
    Ply,
}

impl CloudFormat {
    /// Guesses the format from the file extension (CSV unless `.ply`).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("ply") => CloudFormat::Ply,
            _ => CloudFormat::Csv,
        }
    }
}

pub fn load_point_cloud(path: &Path, format: CloudFormat) -> Result<LoadedCloud> {
    let file = File::open(path)?;
    match format {
        CloudFormat::Csv => parse_csv(BufReader::new(file)),
        CloudFormat::Ply => parse_ply(BufReader::new(file)),
    }
}

fn check_normal(n: Vec3, line: usize) -> Result<Vec3> {
    let len = n.norm();
    if (len - 1.0).abs() <= 1e-12 {
        Ok(n)
    } else if (len - 1.0).abs() <= NORMAL_RENORMALIZE_TOL {
        log::warn!("line {line}: normal of length {len} renormalized");
        Ok(n / len)
    } else {
        Err(Error::Parse {
            line,
            message: format!("normal has length {len}"),
        })
    }
}

struct Columns {
    dim: usize,
    pos: [usize; 3],
    normal: Option<[usize; 3]>,
    label: Option<usize>,
}

impl Columns {
    fn from_names(names: &[&str], line: usize) -> Result<Self> {
        let find = |n: &str| names.iter().position(|h| h.trim().eq_ignore_ascii_case(n));
        let missing = |n: &str| Error::Parse {
            line,
            message: format!("missing column `{n}`"),
        };
        let x = find("x").ok_or_else(|| missing("x"))?;
        let y = find("y").ok_or_else(|| missing("y"))?;
        let z = find("z");
        let dim = if z.is_some() { 3 } else { 2 };
        let normal = match (find("nx"), find("ny"), find("nz")) {
            (Some(nx), Some(ny), nz) if dim == 2 || nz.is_some() => {
                Some([nx, ny, nz.unwrap_or(usize::MAX)])
            }
            (None, None, None) => None,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "incomplete normal columns".into(),
                })
            }
        };
        Ok(Self {
            dim,
            pos: [x, y, z.unwrap_or(usize::MAX)],
            normal,
            label: find("label"),
        })
    }

    fn width(&self) -> usize {
        let mut w = self.dim;
        if self.normal.is_some() {
            w += self.dim;
        }
        w + usize::from(self.label.is_some())
    }
}

/// Accumulates rows, counting malformed ones and keeping the first error.
struct RowSink {
    cols: Columns,
    positions: Vec<Vec3>,
    normals: Vec<Vec3>,
    labels: Vec<PointLabel>,
    bad_rows: usize,
    first_error: Option<(usize, String)>,
}

impl RowSink {
    fn new(cols: Columns) -> Self {
        Self {
            cols,
            positions: Vec::new(),
            normals: Vec::new(),
            labels: Vec::new(),
            bad_rows: 0,
            first_error: None,
        }
    }

    fn push(&mut self, fields: &[&str], line: usize) -> Result<()> {
        match self.parse(fields, line) {
            Ok(()) => Ok(()),
            Err(Error::Parse { line, message }) => {
                self.bad_rows += 1;
                self.first_error.get_or_insert((line, message));
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    fn parse(&mut self, fields: &[&str], line: usize) -> Result<()> {
        let cols = &self.cols;
        if fields.len() < cols.width() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", cols.width(), fields.len()),
            });
        }
        let num = |i: usize| -> Result<f64> {
            if i == usize::MAX {
                return Ok(0.0);
            }
            let s = fields.get(i).map(|s| s.trim()).unwrap_or("");
            s.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("`{s}` is not a number"),
            })
        };
        let p = Vec3::new(num(cols.pos[0])?, num(cols.pos[1])?, num(cols.pos[2])?);
        if let Some(nc) = cols.normal {
            let n = Vec3::new(num(nc[0])?, num(nc[1])?, num(nc[2])?);
            self.normals.push(check_normal(n, line)?);
        }
        let label = match cols.label {
            Some(i) => fields[i].trim().parse().map_err(|e: Error| Error::Parse {
                line,
                message: e.to_string(),
            })?,
            None => PointLabel::Interior,
        };
        self.positions.push(p);
        self.labels.push(label);
        Ok(())
    }

    fn finish(self) -> Result<LoadedCloud> {
        if let Some((line, message)) = self.first_error {
            return Err(Error::Parse {
                line,
                message: format!("{} malformed row(s), first: {message}", self.bad_rows),
            });
        }
        let has_normals = self.cols.normal.is_some();
        Ok(LoadedCloud {
            dim: self.cols.dim,
            positions: self.positions,
            normals: has_normals.then_some(self.normals),
            labels: self.labels,
        })
    }
}

fn parse_csv(reader: impl std::io::Read) -> Result<LoadedCloud> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let names: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut sink = RowSink::new(Columns::from_names(&names, 1)?);
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let fields: Vec<&str> = rec.iter().collect();
        sink.push(&fields, i + 2)?;
    }
    sink.finish()
}

fn parse_ply(reader: impl BufRead) -> Result<LoadedCloud> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = || -> Result<(usize, String)> {
        match lines.next() {
            Some((i, l)) => Ok((i, l?)),
            None => Err(Error::Parse {
                line: 0,
                message: "unexpected end of PLY file".into(),
            }),
        }
    };
    let bad = |line: usize, message: &str| Error::Parse {
        line,
        message: message.to_owned(),
    };
    let (l, magic) = next()?;
    if magic.trim() != "ply" {
        return Err(bad(l, "not a PLY file"));
    }
    let mut vertices = None;
    let mut props: Vec<String> = Vec::new();
    let mut in_vertex = false;
    let header_end;
    loop {
        let (l, line) = next()?;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["format", fmt, ..] if *fmt != "ascii" => {
                return Err(bad(l, "only ASCII PLY is supported"))
            }
            ["element", "vertex", n] => {
                vertices = Some(n.parse::<usize>().map_err(|_| bad(l, "bad vertex count"))?);
                in_vertex = true;
            }
            ["element", ..] => in_vertex = false,
            ["property", "list", ..] => {}
            ["property", _, name] if in_vertex => props.push((*name).to_owned()),
            ["end_header"] => {
                header_end = l;
                break;
            }
            _ => {}
        }
    }
    let count = vertices.ok_or_else(|| bad(header_end, "no vertex element"))?;
    let names: Vec<&str> = props.iter().map(String::as_str).collect();
    let cols = Columns::from_names(&names, header_end)?;
    if cols.dim != 3 {
        return Err(bad(header_end, "PLY vertices need x, y and z"));
    }
    let mut sink = RowSink::new(cols);
    for _ in 0..count {
        let (l, line) = next()?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        sink.push(&fields, l)?;
    }
    sink.finish()
}

/// Writes a cloud as CSV with normals and labels.
pub fn save_point_cloud(cloud: &SurfacePointCloud, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["x", "y", "z", "nx", "ny", "nz", "label"];
    if cloud.dim() == 2 {
        header = vec!["x", "y", "nx", "ny", "label"];
    }
    w.write_record(&header)?;
    let d = cloud.dim();
    for i in 0..cloud.len() {
        let (x, n) = (cloud.position(i), cloud.normal(i));
        let mut row: Vec<String> = (0..d).map(|k| x[k].to_string()).collect();
        row.extend((0..d).map(|k| n[k].to_string()));
        row.push(cloud.label(i).as_str().to_owned());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub const CONVERGENCE_HEADER: [&str; 11] = [
    "experiment",
    "N_p",
    "h",
    "order_r",
    "rc_factor",
    "dn",
    "N_n",
    "eps_factor",
    "L2",
    "Linf",
    "wall_time_s",
];

pub fn write_convergence_csv(records: &[ConvergenceRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CONVERGENCE_HEADER)?;
    for r in records {
        w.write_record([
            r.experiment.clone(),
            r.n_points.to_string(),
            r.h.to_string(),
            r.order_r.to_string(),
            r.rc_factor.to_string(),
            r.dn.to_string(),
            r.n_n.to_string(),
            r.eps_factor.to_string(),
            r.l2.to_string(),
            r.linf.to_string(),
            r.wall_time_s.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One probe sample of the diffusion benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSample {
    pub t: f64,
    pub f_at_x0: f64,
    pub f_at_x1: f64,
    pub alpha: f64,
}

pub const TIME_SERIES_HEADER: [&str; 4] = ["t", "f_at_x0", "f_at_x1", "alpha"];

pub fn write_time_series_csv(samples: &[TimeSample], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TIME_SERIES_HEADER)?;
    for s in samples {
        w.write_record([s.t, s.f_at_x0, s.f_at_x1, s.alpha].map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Per-point scalar output, e.g. curvature on a loaded cloud.
pub fn write_point_values_csv(
    cloud: &SurfacePointCloud,
    name: &str,
    values: &[f64],
    out: impl Write,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "z", name])?;
    for (x, v) in cloud.positions().iter().zip(values) {
        w.write_record([x.x, x.y, x.z, *v].map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
