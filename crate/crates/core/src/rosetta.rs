//! Matrix-of-relations reports.
//!
//! Three matrices are assembled for a problem:
//!
//! * `M`, objective against objective: lattice points pushed through both
//!   surfaces, with the constraint bounds drawn as dashed lines;
//! * `N`, variable against variable: a lattice slice through the design point
//!   marked feasible or not, with the solution's projections as rectangles;
//! * `Q`, objective against variable: sensitivities at the design point.
//!
//! Scatter data is deterministic lattice sampling of the surfaces, not
//! measured data. Diagonal cells of `M` and `N` carry histograms.
//!
//! # CSV layout
//!
//! `{problem}_Q.csv` has a header `objective,<variable names...>` and one row
//! per surface. `{problem}_M.csv` and `{problem}_N.csv` share the columns
//! `row,col,kind,x0,y0,x1,y1,count`, where `row`/`col` index the cell and
//! `kind` is one of
//!
//! * `point`: `x0,y0` is the sample (column quantity first), `count` is 1
//!   when feasible, else 0;
//! * `vline` / `hline`: a constraint bound at `x0` / `y0`;
//! * `rect`: projected solution `[x0,x1] x [y0,y1]`;
//! * `hist`: diagonal bin centred at `x0` holding `y0` samples of which
//!   `count` are feasible.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::designspace::{DesignProblem, Lattice, lattice_value};
use crate::error::{Error, Result, check_dim};
use crate::orthotope::SolveResult;
use crate::surface::{DesignPoint, Interval};

pub const CANVAS: f64 = 900.0;
pub const DEFAULT_RESOLUTION: usize = 11;
const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matrix {
    M,
    N,
    Q,
}

impl Matrix {
    pub const ALL: [Matrix; 3] = [Matrix::M, Matrix::N, Matrix::Q];

    fn tag(self) -> &'static str {
        match self {
            Matrix::M => "M",
            Matrix::N => "N",
            Matrix::Q => "Q",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub centers: Vec<f64>,
    pub totals: Vec<u64>,
    pub feasible: Vec<u64>,
}

/// Objective pair `(row, col)`: `x` is objective `col`, `y` objective `row`.
#[derive(Debug, Clone, PartialEq)]
pub struct MCell {
    pub row: usize,
    pub col: usize,
    pub points: Vec<Sample>,
    /// Bound on the column objective, drawn vertically.
    pub vline: Option<f64>,
    /// Bound on the row objective, drawn horizontally.
    pub hline: Option<f64>,
}

/// Variable pair `(row, col)`: `x` is variable `col`, `y` variable `row`.
#[derive(Debug, Clone, PartialEq)]
pub struct NCell {
    pub row: usize,
    pub col: usize,
    pub points: Vec<Sample>,
    /// `(x interval, y interval)`.
    pub rectangles: Vec<(Interval, Interval)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RosettaReport {
    pub problem: String,
    pub objectives: Vec<String>,
    pub variables: Vec<String>,
    pub design_point: DesignPoint,
    pub resolution: usize,
    /// `q_matrix[i][j]` is the sensitivity of surface `i` to variable `j`.
    pub q_matrix: Vec<Vec<f64>>,
    pub m_cells: Vec<MCell>,
    pub m_diagonal: Vec<Histogram>,
    pub n_cells: Vec<NCell>,
    pub n_diagonal: Vec<Histogram>,
    /// Axis ranges used for plotting.
    pub objective_ranges: Vec<Interval>,
    pub variable_ranges: Vec<Interval>,
}

/// Two-dimensional shadow of an orthotope.
pub fn project_orthotope(o: &[Interval], j: usize, k: usize) -> Result<(Interval, Interval)> {
    for i in [j, k] {
        if i >= o.len() {
            return Err(Error::IndexOutOfRange { index: i, len: o.len() });
        }
    }
    if j == k {
        return Err(Error::Schema(format!("projection needs two distinct coordinates, got ({j}, {k})")));
    }
    Ok((o[j], o[k]))
}

fn equal_bins(range: Interval, values: impl Iterator<Item = (f64, bool)>) -> Histogram {
    let w = range.width() / HISTOGRAM_BINS as f64;
    let centers = (0..HISTOGRAM_BINS).map(|b| range.lo + w * (b as f64 + 0.5)).collect();
    let mut totals = vec![0; HISTOGRAM_BINS];
    let mut feasible = vec![0; HISTOGRAM_BINS];
    for (v, ok) in values {
        let b = if w > 0.0 { (((v - range.lo) / w) as usize).min(HISTOGRAM_BINS - 1) } else { 0 };
        totals[b] += 1;
        feasible[b] += ok as u64;
    }
    Histogram { centers, totals, feasible }
}

/// Assembles the report at the problem's seed. `resolution` lattice points
/// are taken per axis.
pub fn build_report(p: &DesignProblem, solution: Option<&SolveResult>, resolution: usize) -> Result<RosettaReport> {
    let n = p.dimension();
    if let Some(s) = solution {
        check_dim(n, s.orthotope.len())?;
    }
    let seed = p.seed();
    let region = p.region();
    let lattice: Lattice = region.grid(&vec![resolution; n])?;
    let surfaces = p.surfaces();

    let q_matrix = surfaces
        .iter()
        .map(|s| (0..n).map(|j| s.sensitivity(j, seed)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    // objective values per lattice point
    let values: Vec<Vec<f64>> = (0..lattice.len())
        .map(|idx| {
            let x = lattice.point(idx);
            surfaces.iter().map(|s| s.evaluate(&x)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let bounds: Vec<Option<f64>> = (0..surfaces.len()).map(|i| p.bound_for_surface(i)).collect();
    let objective_ranges: Vec<Interval> = (0..surfaces.len())
        .map(|i| {
            let (mut lo, mut hi) =
                values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v[i]), hi.max(v[i])));
            if let Some(c) = bounds[i] {
                lo = lo.min(c);
                hi = hi.max(c);
            }
            Interval { lo, hi }
        })
        .collect();
    let variable_ranges = p.ambient();

    let mut m_cells = Vec::new();
    for row in 0..surfaces.len() {
        for col in 0..row {
            let points = values
                .iter()
                .zip(&lattice.feasible)
                .map(|(v, &feasible)| Sample { x: v[col], y: v[row], feasible })
                .collect();
            m_cells.push(MCell { row, col, points, vline: bounds[col], hline: bounds[row] });
        }
    }
    let m_diagonal = (0..surfaces.len())
        .map(|i| equal_bins(objective_ranges[i], values.iter().zip(&lattice.feasible).map(|(v, &f)| (v[i], f))))
        .collect();

    let mut n_cells = Vec::new();
    for row in 0..n {
        for col in 0..row {
            let mut points = Vec::with_capacity(resolution * resolution);
            let mut x = seed.to_vec();
            for a in 0..resolution {
                for b in 0..resolution {
                    x[col] = lattice_value(variable_ranges[col], a, resolution);
                    x[row] = lattice_value(variable_ranges[row], b, resolution);
                    points.push(Sample { x: x[col], y: x[row], feasible: region.is_point_feasible(&x)? });
                }
            }
            let rectangles = match solution {
                Some(s) => vec![project_orthotope(&s.orthotope, col, row)?],
                None => Vec::new(),
            };
            n_cells.push(NCell { row, col, points, rectangles });
        }
    }
    let n_diagonal = (0..n)
        .map(|j| {
            let axis = &lattice.axes[j];
            let mut totals = vec![0; axis.len()];
            let mut feasible = vec![0; axis.len()];
            let stride: usize = lattice.axes[j + 1..].iter().map(Vec::len).product();
            for (idx, &ok) in lattice.feasible.iter().enumerate() {
                let k = (idx / stride) % axis.len();
                totals[k] += 1;
                feasible[k] += ok as u64;
            }
            Histogram { centers: axis.clone(), totals, feasible }
        })
        .collect();

    Ok(RosettaReport {
        problem: p.name().to_string(),
        objectives: surfaces.iter().map(|s| s.name.clone()).collect(),
        variables: p.variables().iter().map(|v| v.name.clone()).collect(),
        design_point: seed.clone(),
        resolution,
        q_matrix,
        m_cells,
        m_diagonal,
        n_cells,
        n_diagonal,
        objective_ranges,
        variable_ranges,
    })
}

/// One line of the M and N CSV files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub row: usize,
    pub col: usize,
    pub kind: String,
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub x1: Option<f64>,
    pub y1: Option<f64>,
    pub count: Option<u64>,
}

impl CellRow {
    fn new(row: usize, col: usize, kind: &str) -> Self {
        CellRow { row, col, kind: kind.into(), x0: None, y0: None, x1: None, y1: None, count: None }
    }
}

fn point_rows(row: usize, col: usize, points: &[Sample]) -> impl Iterator<Item = CellRow> + '_ {
    points.iter().map(move |s| CellRow {
        x0: Some(s.x),
        y0: Some(s.y),
        count: Some(s.feasible as u64),
        ..CellRow::new(row, col, "point")
    })
}

fn hist_rows(i: usize, h: &Histogram) -> impl Iterator<Item = CellRow> + '_ {
    (0..h.centers.len()).map(move |b| CellRow {
        x0: Some(h.centers[b]),
        y0: Some(h.totals[b] as f64),
        count: Some(h.feasible[b]),
        ..CellRow::new(i, i, "hist")
    })
}

impl RosettaReport {
    pub fn m_rows(&self) -> Vec<CellRow> {
        let mut rows = Vec::new();
        for (i, h) in self.m_diagonal.iter().enumerate() {
            rows.extend(hist_rows(i, h));
        }
        for c in &self.m_cells {
            if let Some(x) = c.vline {
                rows.push(CellRow { x0: Some(x), ..CellRow::new(c.row, c.col, "vline") });
            }
            if let Some(y) = c.hline {
                rows.push(CellRow { y0: Some(y), ..CellRow::new(c.row, c.col, "hline") });
            }
            rows.extend(point_rows(c.row, c.col, &c.points));
        }
        rows
    }

    pub fn n_rows(&self) -> Vec<CellRow> {
        let mut rows = Vec::new();
        for (i, h) in self.n_diagonal.iter().enumerate() {
            rows.extend(hist_rows(i, h));
        }
        for c in &self.n_cells {
            for (x, y) in &c.rectangles {
                rows.push(CellRow {
                    x0: Some(x.lo),
                    y0: Some(y.lo),
                    x1: Some(x.hi),
                    y1: Some(y.hi),
                    ..CellRow::new(c.row, c.col, "rect")
                });
            }
            rows.extend(point_rows(c.row, c.col, &c.points));
        }
        rows
    }

    pub fn q_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["objective".to_string()];
        header.extend(self.variables.iter().cloned());
        w.write_record(&header)?;
        for (name, row) in self.objectives.iter().zip(&self.q_matrix) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(|v| format_float(*v)));
            w.write_record(&rec)?;
        }
        finish(w)
    }

    pub fn csv(&self, matrix: Matrix) -> Result<String> {
        match matrix {
            Matrix::Q => self.q_csv(),
            Matrix::M => write_cell_rows(&self.m_rows()),
            Matrix::N => write_cell_rows(&self.n_rows()),
        }
    }

    pub fn svg(&self, matrix: Matrix) -> String {
        match matrix {
            Matrix::Q => self.q_svg(),
            Matrix::M => self.m_svg(),
            Matrix::N => self.n_svg(),
        }
    }

    pub fn file_name(&self, matrix: Matrix, format: Format) -> String {
        format!("{}_{}.{}", self.problem, matrix.tag(), format.extension())
    }

    fn q_svg(&self) -> String {
        let rows = self.objectives.len();
        let cols = self.variables.len();
        let mut svg =
            SvgGrid::new(&format!("{} Q matrix: sensitivities at the design point", self.problem), rows, cols);
        let scale = self.q_matrix.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for (i, name) in self.objectives.iter().enumerate() {
            svg.row_label(i, name);
        }
        for (j, name) in self.variables.iter().enumerate() {
            svg.col_label(j, name);
        }
        for (i, row) in self.q_matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let (x, y, w, h) = svg.cell(i, j);
                let alpha = if scale > 0.0 { v.abs() / scale } else { 0.0 };
                let colour = if v < 0.0 { "#2b6cb0" } else { "#c53030" };
                let _ = writeln!(
                    svg.body,
                    r##"<rect x="{}" y="{}" width="{}" height="{}" fill="{colour}" fill-opacity="{}" stroke="#4a5568"/>"##,
                    f2(x),
                    f2(y),
                    f2(w),
                    f2(h),
                    f2(0.15 + 0.7 * alpha)
                );
                let _ = writeln!(
                    svg.body,
                    r#"<text x="{}" y="{}" font-size="16" text-anchor="middle">{}</text>"#,
                    f2(x + w / 2.0),
                    f2(y + h / 2.0 + 6.0),
                    format_float(v)
                );
            }
        }
        svg.finish()
    }

    fn m_svg(&self) -> String {
        let k = self.objectives.len();
        let mut svg = SvgGrid::new(&format!("{} M matrix: lattice samples through the surfaces", self.problem), k, k);
        for (i, name) in self.objectives.iter().enumerate() {
            svg.row_label(i, name);
            svg.col_label(i, name);
        }
        for (i, h) in self.m_diagonal.iter().enumerate() {
            svg.histogram(i, h, self.objective_ranges[i]);
        }
        for c in &self.m_cells {
            let frame = Frame::new(svg.cell(c.row, c.col), self.objective_ranges[c.col], self.objective_ranges[c.row]);
            svg.frame(&frame);
            svg.points(&frame, &c.points);
            if let Some(x) = c.vline {
                let (x0, y0) = frame.map(x, frame.ry.lo);
                let (x1, y1) = frame.map(x, frame.ry.hi);
                svg.dashed(x0, y0, x1, y1);
            }
            if let Some(y) = c.hline {
                let (x0, y0) = frame.map(frame.rx.lo, y);
                let (x1, y1) = frame.map(frame.rx.hi, y);
                svg.dashed(x0, y0, x1, y1);
            }
        }
        svg.finish()
    }

    fn n_svg(&self) -> String {
        let n = self.variables.len();
        let mut svg = SvgGrid::new(&format!("{} N matrix: lattice slice through the design point", self.problem), n, n);
        for (j, name) in self.variables.iter().enumerate() {
            svg.row_label(j, name);
            svg.col_label(j, name);
        }
        for (j, h) in self.n_diagonal.iter().enumerate() {
            svg.histogram(j, h, self.variable_ranges[j]);
        }
        for c in &self.n_cells {
            let frame = Frame::new(svg.cell(c.row, c.col), self.variable_ranges[c.col], self.variable_ranges[c.row]);
            svg.frame(&frame);
            for (x, y) in &c.rectangles {
                let (x0, y0) = frame.map(x.lo, y.hi);
                let (x1, y1) = frame.map(x.hi, y.lo);
                let _ = writeln!(
                    svg.body,
                    r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#f6ad55" fill-opacity="0.45" stroke="#c05621"/>"##,
                    f2(x0),
                    f2(y0),
                    f2(x1 - x0),
                    f2(y1 - y0)
                );
            }
            svg.points(&frame, &c.points);
        }
        svg.finish()
    }

    /// Writes the three matrices in `format` under `dir`.
    pub fn emit(&self, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for m in Matrix::ALL {
            let text = match format {
                Format::Csv => self.csv(m)?,
                Format::Svg => self.svg(m),
            };
            let path = dir.join(self.file_name(m, format));
            std::fs::write(&path, text)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Shortest round-tripping decimal form.
fn format_float(v: f64) -> String {
    if v == 0.0 { "0".into() } else { format!("{v}") }
}

pub fn write_cell_rows(rows: &[CellRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(["row", "col", "kind", "x0", "y0", "x1", "y1", "count"])?;
    }
    finish(w)
}

pub fn parse_cell_rows(text: &str) -> Result<Vec<CellRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<std::result::Result<Vec<CellRow>, _>>()?)
}

/// Sensitivity rows of the Q matrix, one `(objective, row)` per surface.
pub type QRows = Vec<(String, Vec<f64>)>;

/// Q CSV as `(variables, rows)`.
pub fn parse_q_csv(text: &str) -> Result<(Vec<String>, QRows)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    let variables = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let name = rec.get(0).unwrap_or_default().to_string();
        let values = rec
            .iter()
            .skip(1)
            .map(|s| s.parse::<f64>().map_err(|_| Error::Schema(format!("bad number `{s}` in Q matrix"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push((name, values));
    }
    Ok((variables, rows))
}

pub fn write_q_csv(variables: &[String], rows: &[(String, Vec<f64>)]) -> Result<String> {
    let report = RosettaReport {
        problem: String::new(),
        objectives: rows.iter().map(|r| r.0.clone()).collect(),
        variables: variables.to_vec(),
        design_point: DesignPoint(Vec::new()),
        resolution: 0,
        q_matrix: rows.iter().map(|r| r.1.clone()).collect(),
        m_cells: Vec::new(),
        m_diagonal: Vec::new(),
        n_cells: Vec::new(),
        n_diagonal: Vec::new(),
        objective_ranges: Vec::new(),
        variable_ranges: Vec::new(),
    };
    report.q_csv()
}

fn f2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" { "0.00".into() } else { s }
}

const MARGIN: f64 = 60.0;
const PAD: f64 = 6.0;

/// Data-to-canvas mapping for one cell.
struct Frame {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    rx: Interval,
    ry: Interval,
}

impl Frame {
    fn new((x, y, w, h): (f64, f64, f64, f64), rx: Interval, ry: Interval) -> Self {
        Frame { x: x + PAD, y: y + PAD, w: w - 2.0 * PAD, h: h - 2.0 * PAD, rx, ry }
    }

    fn map(&self, u: f64, v: f64) -> (f64, f64) {
        let fx = if self.rx.width() > 0.0 { (u - self.rx.lo) / self.rx.width() } else { 0.5 };
        let fy = if self.ry.width() > 0.0 { (v - self.ry.lo) / self.ry.width() } else { 0.5 };
        (self.x + fx * self.w, self.y + (1.0 - fy) * self.h)
    }
}

struct SvgGrid {
    rows: usize,
    cols: usize,
    body: String,
}

impl SvgGrid {
    fn new(title: &str, rows: usize, cols: usize) -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
            c = CANVAS
        );
        let _ = writeln!(body, "<title>{}</title>", escape(title));
        let _ = writeln!(body, r##"<rect x="0" y="0" width="{c}" height="{c}" fill="#ffffff"/>"##, c = CANVAS);
        let _ = writeln!(
            body,
            r#"<text x="{}" y="24" font-size="16" text-anchor="middle">{}</text>"#,
            f2(CANVAS / 2.0),
            escape(title)
        );
        SvgGrid { rows: rows.max(1), cols: cols.max(1), body }
    }

    fn cell(&self, i: usize, j: usize) -> (f64, f64, f64, f64) {
        let w = (CANVAS - 1.5 * MARGIN) / self.cols as f64;
        let h = (CANVAS - 1.5 * MARGIN) / self.rows as f64;
        (MARGIN + j as f64 * w, MARGIN + i as f64 * h, w, h)
    }

    fn row_label(&mut self, i: usize, name: &str) {
        let (_, y, _, h) = self.cell(i, 0);
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="14" text-anchor="end">{}</text>"#,
            f2(MARGIN - 6.0),
            f2(y + h / 2.0),
            escape(name)
        );
    }

    fn col_label(&mut self, j: usize, name: &str) {
        let (x, _, w, _) = self.cell(0, j);
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
            f2(x + w / 2.0),
            f2(MARGIN - 8.0),
            escape(name)
        );
    }

    fn frame(&mut self, f: &Frame) {
        let _ = writeln!(
            self.body,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#a0aec0"/>"##,
            f2(f.x),
            f2(f.y),
            f2(f.w),
            f2(f.h)
        );
    }

    fn points(&mut self, f: &Frame, points: &[Sample]) {
        for s in points {
            let (cx, cy) = f.map(s.x, s.y);
            let fill = if s.feasible { "#2b6cb0" } else { "#cbd5e0" };
            let _ = writeln!(self.body, r#"<circle cx="{}" cy="{}" r="1.8" fill="{fill}"/>"#, f2(cx), f2(cy));
        }
    }

    fn dashed(&mut self, x0: f64, y0: f64, x1: f64, y1: f64) {
        let _ = writeln!(
            self.body,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#e53e3e" stroke-width="1.5" stroke-dasharray="6 4"/>"##,
            f2(x0),
            f2(y0),
            f2(x1),
            f2(y1)
        );
    }

    fn histogram(&mut self, i: usize, h: &Histogram, range: Interval) {
        let top = h.totals.iter().copied().max().unwrap_or(0).max(1) as f64;
        let frame = Frame::new(self.cell(i, i), range, Interval { lo: 0.0, hi: top });
        self.frame(&frame);
        let bar = frame.w / h.centers.len().max(1) as f64;
        for b in 0..h.centers.len() {
            let x = frame.x + b as f64 * bar;
            for (count, fill) in [(h.totals[b], "#cbd5e0"), (h.feasible[b], "#2b6cb0")] {
                let height = frame.h * count as f64 / top;
                let _ = writeln!(
                    self.body,
                    r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
                    f2(x + 1.0),
                    f2(frame.y + frame.h - height),
                    f2((bar - 2.0).max(0.5)),
                    f2(height)
                );
            }
        }
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
