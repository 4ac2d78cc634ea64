//! Long-format tables with a fixed, self-describing column set.

use std::io::Write;
use std::path::Path;

use crate::error::CliResult;

pub const COLUMNS: &[(&str, &str)] = &[
    ("figure", "figure id or sweep name"),
    ("curve", "curve label"),
    ("profile", "detector frequency profile"),
    ("delta_smooth", "tanh edge smoothing"),
    ("sigma", "spectral width in Hz"),
    ("omega0", "centre frequency in Hz"),
    ("r_a", "Alice radius in m"),
    ("r_b", "Bob radius in m"),
    ("r_s", "Schwarzschild radius in m"),
    ("z_r", "Rayleigh length in m"),
    ("distance_m", "Alice-Bob separation in m"),
    ("n_meas", "number of measurements"),
    ("n_bar", "mean photon number"),
    ("squeeze_fraction", "sinh^2 r / n_bar"),
    ("squeeze_db", "squeezing in dB below shot noise"),
    ("alpha", "coherent amplitude"),
    ("r", "squeezing parameter"),
    ("t", "channel transmission"),
    ("delta", "redshift"),
    ("eps", "detector detuning"),
    ("shift_hz", "(delta - eps) * omega0"),
    ("offset_hz", "frequency offset from the centre"),
    ("theta", "overlap"),
    ("one_minus_theta", "overlap deficit"),
    ("dtheta_drs", "dTheta/dr_s in 1/m"),
    ("qfi", "quantum Fisher information"),
    ("bound", "relative error bound on r_s"),
    ("profile_sq", "squared frequency profile"),
];

fn column_index(name: &str) -> usize {
    COLUMNS.iter().position(|(c, _)| *c == name).unwrap_or_else(|| panic!("unknown column {name}"))
}

/// Shortest round-trip digits; exponent form outside `[1e-4, 1e15)`.
pub fn format_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    cells: Vec<Option<Cell>>,
}

impl Default for Row {
    fn default() -> Self {
        Self { cells: vec![None; COLUMNS.len()] }
    }
}

impl Row {
    pub fn num(mut self, name: &str, x: f64) -> Self {
        self.cells[column_index(name)] = Some(Cell::Num(x));
        self
    }

    pub fn text(mut self, name: &str, s: impl Into<String>) -> Self {
        self.cells[column_index(name)] = Some(Cell::Text(s.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match &self.cells[column_index(name)] {
            Some(Cell::Num(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn label(&self, name: &str) -> Option<&str> {
        match &self.cells[column_index(name)] {
            Some(Cell::Text(s)) => Some(s),
            _ => None,
        }
    }

    fn record(&self) -> Vec<String> {
        self.cells
            .iter()
            .map(|c| match c {
                None => String::new(),
                Some(Cell::Num(x)) => format_num(*x),
                Some(Cell::Text(s)) => s.clone(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Axis {
    pub column: &'static str,
    pub log: bool,
}

impl Axis {
    pub const fn linear(column: &'static str) -> Self {
        Self { column, log: false }
    }

    pub const fn log(column: &'static str) -> Self {
        Self { column, log: true }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub title: String,
    pub x: Axis,
    pub y: Axis,
    pub meta: Vec<(String, String)>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(name: impl Into<String>, title: impl Into<String>, x: Axis, y: Axis) -> Self {
        Self { name: name.into(), title: title.into(), x, y, meta: Vec::new(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    /// Curve labels in first-seen order.
    pub fn curves(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for r in &self.rows {
            if let Some(c) = r.label("curve") {
                if !seen.iter().any(|s| s == c) {
                    seen.push(c.to_string());
                }
            }
        }
        seen
    }

    pub fn write_csv<W: Write>(&self, mut w: W, scenario: &str) -> CliResult<()> {
        write!(w, "# probe {}\r\n", self.name)?;
        write!(w, "# title: {}\r\n", self.title)?;
        write!(w, "# scenario: {scenario}\r\n")?;
        write!(w, "# x: {}{}\r\n", self.x.column, if self.x.log { " (log)" } else { "" })?;
        write!(w, "# y: {}{}\r\n", self.y.column, if self.y.log { " (log)" } else { "" })?;
        for (k, v) in &self.meta {
            write!(w, "# {k}: {v}\r\n")?;
        }
        for (c, doc) in COLUMNS {
            write!(w, "# column {c}: {doc}\r\n")?;
        }
        let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w);
        csv.write_record(COLUMNS.iter().map(|(c, _)| *c))?;
        for r in &self.rows {
            csv.write_record(r.record())?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn save(&self, dir: &Path, scenario: &str) -> CliResult<(std::path::PathBuf, std::path::PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.name));
        let svg_path = dir.join(format!("{}.svg", self.name));
        let file = std::io::BufWriter::new(std::fs::File::create(&csv_path)?);
        self.write_csv(file, scenario)?;
        crate::plot::write_svg(self, &svg_path)?;
        Ok((csv_path, svg_path))
    }
}
