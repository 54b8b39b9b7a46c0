//! File formats.
//!
//! Graph file (plain text, `#` lines are comments, `# id <name>` names the graph):
//!
//! ```text
//! # id w3r-n8-001
//! 8 12 3
//! 0 1 0.734
//! ...
//! ```
//!
//! Results, trace, curve, fit and p* tables are CSV. Results files start with
//! a `# schema=...` line; readers refuse files with a different schema.
//! Floats are written in shortest round-trip form, so a re-run that produces
//! the same numbers produces the same bytes.
//!
//! Statevector dumps are binary: `n` as little-endian `u32`, then `2^n` pairs
//! of little-endian `f64` (real, imaginary).

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::maxcut::{Edge, GraphInstance};
use crate::metrics::{EnsembleCurve, FitResult};
use crate::optimizer::IterationRecord;
use crate::protocol::{LevelRecord, Mode};
use crate::statevector::StateVector;

pub const RESULTS_SCHEMA: &str = "abqaoa-results/1";

const RESULTS_HEADER: [&str; 12] =
    ["graph_id", "n", "mode", "level", "e_best", "e_opt", "e_max", "r", "f", "n_ite_mean", "seed", "h"];

pub fn write_graph(path: &Path, g: &GraphInstance) -> Result<()> {
    let mut s = format!("# id {}\n{} {} {}\n", g.id(), g.n(), g.edges().len(), g.regularity());
    for e in g.edges() {
        s.push_str(&format!("{} {} {}\n", e.a, e.b, e.weight));
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

/// Reads a graph file; without an `# id` line the file stem becomes the id.
pub fn read_graph(path: &Path) -> Result<GraphInstance> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let mut id = None;
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(name) = comment.trim().strip_prefix("id ") {
                id = Some(name.trim().to_string());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(line_no, format!("expected 3 fields, found {}", fields.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|e| parse_err(line_no, format!("`{s}`: {e}")));
        match header {
            None => header = Some((int(fields[0])?, int(fields[1])?, int(fields[2])?)),
            Some(_) => {
                let weight = fields[2].parse::<f64>().map_err(|e| parse_err(line_no, format!("`{}`: {e}", fields[2])))?;
                edges.push(Edge { a: int(fields[0])?, b: int(fields[1])?, weight });
            }
        }
    }
    let (n, m, regularity) = header.ok_or_else(|| parse_err(1, "missing `n m regularity` header".into()))?;
    if edges.len() != m {
        return Err(parse_err(text.lines().count(), format!("header promises {m} edges, found {}", edges.len())));
    }
    let id = id.unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    GraphInstance::new(id, n, regularity, edges)
}

/// One row of a results file: the best restart of one level on one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub graph_id: String,
    pub n: usize,
    pub mode: Mode,
    pub level: usize,
    pub e_best: f64,
    pub e_opt: f64,
    pub e_max: f64,
    pub r: f64,
    pub f: f64,
    pub n_ite_mean: f64,
    pub seed: u64,
    pub h: Vec<f64>,
}

impl ResultRow {
    pub fn from_level(graph_id: &str, mode: Mode, seed: u64, rec: &LevelRecord) -> Self {
        ResultRow {
            graph_id: graph_id.to_string(),
            n: rec.best_point.bias.len(),
            mode,
            level: rec.level,
            e_best: rec.e_best,
            e_opt: rec.e_opt,
            e_max: rec.e_max,
            r: rec.r,
            f: rec.f,
            n_ite_mean: rec.n_ite_mean,
            seed,
            h: rec.best_point.bias.values().to_vec(),
        }
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes rows sorted by `(graph_id, mode, level)`.
pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.graph_id, a.mode, a.level).cmp(&(&b.graph_id, b.mode, b.level)));
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "# schema={RESULTS_SCHEMA}").map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in sorted {
        w.write_record([
            r.graph_id.clone(),
            r.n.to_string(),
            r.mode.to_string(),
            r.level.to_string(),
            r.e_best.to_string(),
            r.e_opt.to_string(),
            r.e_max.to_string(),
            r.r.to_string(),
            r.f.to_string(),
            r.n_ite_mean.to_string(),
            r.seed.to_string(),
            join(&r.h),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let (first, rest) = text.split_once('\n').unwrap_or((&text, ""));
    match first.trim().strip_prefix("# schema=") {
        Some(s) if s == RESULTS_SCHEMA => {}
        Some(s) => return Err(parse_err(1, format!("schema `{s}` is not `{RESULTS_SCHEMA}`"))),
        None => return Err(parse_err(1, "missing `# schema=` line".into())),
    }
    let mut rdr = csv::Reader::from_reader(rest.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(RESULTS_HEADER) {
        return Err(parse_err(2, format!("unexpected columns {:?}", headers.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 3;
        let num = |k: usize| -> Result<f64> { rec[k].parse().map_err(|e| parse_err(line, format!("{}: {e}", RESULTS_HEADER[k]))) };
        let int = |k: usize| -> Result<u64> { rec[k].parse().map_err(|e| parse_err(line, format!("{}: {e}", RESULTS_HEADER[k]))) };
        let h = rec[11]
            .split_whitespace()
            .map(|x| x.parse::<f64>().map_err(|e| parse_err(line, format!("h: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(ResultRow {
            graph_id: rec[0].to_string(),
            n: int(1)? as usize,
            mode: rec[2].parse().map_err(|e: Error| parse_err(line, e.to_string()))?,
            level: int(3)? as usize,
            e_best: num(4)?,
            e_opt: num(5)?,
            e_max: num(6)?,
            r: num(7)?,
            f: num(8)?,
            n_ite_mean: num(9)?,
            seed: int(10)?,
            h,
        });
    }
    Ok(rows)
}

/// Columns `iteration, energy, fidelity, fidelity_start, h_1 .. h_n`; missing fidelities are empty.
pub fn write_trace(path: &Path, trace: &[IterationRecord]) -> Result<()> {
    let n = trace.first().map_or(0, |t| t.h.len());
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    let mut header = vec!["iteration".to_string(), "energy".into(), "fidelity".into(), "fidelity_start".into()];
    header.extend((1..=n).map(|j| format!("h_{j}")));
    w.write_record(&header)?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for t in trace {
        let mut rec = vec![t.iteration.to_string(), t.energy.to_string(), opt(t.fidelity), opt(t.fidelity_start)];
        rec.extend(t.h.iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_trace(path: &Path) -> Result<Vec<IterationRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let num = |s: &str| s.parse::<f64>().map_err(|e| parse_err(line, format!("`{s}`: {e}")));
        let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
        if rec.len() < 4 {
            return Err(parse_err(line, "too few columns".into()));
        }
        out.push(IterationRecord {
            iteration: rec[0].parse().map_err(|e| parse_err(line, format!("iteration: {e}")))?,
            energy: num(&rec[1])?,
            fidelity: opt(&rec[2])?,
            fidelity_start: opt(&rec[3])?,
            h: rec.iter().skip(4).map(num).collect::<Result<_>>()?,
        });
    }
    Ok(out)
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Parse { path: path.to_path_buf(), line: 0, message: format!("{other:?}") },
    }
}

pub fn write_statevector(path: &Path, psi: &StateVector) -> Result<()> {
    let mut buf = Vec::with_capacity(4 + 16 * psi.amplitudes().len());
    buf.extend_from_slice(&(psi.n() as u32).to_le_bytes());
    for a in psi.amplitudes() {
        buf.extend_from_slice(&a.re.to_le_bytes());
        buf.extend_from_slice(&a.im.to_le_bytes());
    }
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn read_statevector(path: &Path) -> Result<StateVector> {
    let mut bytes = Vec::new();
    fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(|e| Error::io(path, e))?;
    let bad = |message: String| Error::Parse { path: path.to_path_buf(), line: 0, message };
    if bytes.len() < 4 {
        return Err(bad("truncated header".into()));
    }
    let n = u32::from_le_bytes(bytes[..4].try_into().expect("4 bytes")) as usize;
    if n > 40 {
        return Err(bad(format!("implausible qubit count {n}")));
    }
    let expected = 4 + 16 * (1usize << n);
    if bytes.len() != expected {
        return Err(bad(format!("expected {expected} bytes for {n} qubits, found {}", bytes.len())));
    }
    let f = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().expect("8 bytes"));
    let amps = (0..1usize << n).map(|k| Complex64::new(f(4 + 16 * k), f(12 + 16 * k))).collect();
    StateVector::from_amplitudes(amps)
}

/// Columns `n, mode, p, mean_1mr, std_1mr, mean_1mf, std_1mf, ensemble_size`.
pub fn write_curves(path: &Path, curves: &[EnsembleCurve]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(["n", "mode", "p", "mean_1mr", "std_1mr", "mean_1mf", "std_1mf", "ensemble_size"])?;
    for c in curves {
        for pt in &c.points {
            w.write_record([
                c.n.to_string(),
                c.mode.to_string(),
                pt.p.to_string(),
                pt.mean_infidelity_r.to_string(),
                pt.std_infidelity_r.to_string(),
                pt.mean_infidelity_f.to_string(),
                pt.std_infidelity_f.to_string(),
                c.ensemble_size.to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub n: usize,
    pub mode: Mode,
    /// `"accuracy"` (fit of `1 - r`) or `"fidelity"` (fit of `1 - F`).
    pub quantity: String,
    pub fit: FitResult,
}

/// Columns `n, mode, quantity, form, p0, c, residual`.
pub fn write_fits(path: &Path, rows: &[FitRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(["n", "mode", "quantity", "form", "p0", "c", "residual"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.mode.to_string(),
            r.quantity.clone(),
            r.fit.form.as_str().to_string(),
            r.fit.p0.to_string(),
            r.fit.c.to_string(),
            r.fit.residual.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PStarRow {
    pub n: usize,
    pub p_star_standard: Option<usize>,
    pub p_star_adaptive: Option<usize>,
}

impl PStarRow {
    pub fn speedup(&self) -> Option<f64> {
        Some(crate::metrics::speedup(self.p_star_standard?, self.p_star_adaptive?))
    }
}

/// Columns `n, p_star_standard, p_star_adaptive, speedup`; unknown entries are empty.
pub fn write_p_star(path: &Path, rows: &[PStarRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(["n", "p_star_standard", "p_star_adaptive", "speedup"])?;
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.n.to_string(),
            opt(r.p_star_standard),
            opt(r.p_star_adaptive),
            r.speedup().map(|s| format!("{s:.4}")).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
