//! Result files: CSV with a fixed column order and JSON fit summaries.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), so files are
//! reproducible at the decimal-string level and round-trip to the same `f64`.
//! Every file starts with a comment carrying the digest of the run config.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::fidelity::{FidelitySeries, GFactorEstimate, SeriesLabel};
use crate::Result;

/// Columns of a fidelity-series CSV.
pub const SERIES_COLUMNS: [&str; 10] = [
    "delta1",
    "delta2",
    "bc",
    "theta",
    "L",
    "fidelity",
    "energy1",
    "energy2",
    "residual1",
    "residual2",
];

/// Hex SHA-256 of a canonical config text.
pub fn digest(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// `x` with 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Text(String),
    /// Written as an empty field.
    Missing,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Float)
    }
}

/// An in-memory CSV table. Comment lines start with `#`.
#[derive(Clone, Debug)]
pub struct CsvTable {
    columns: Vec<String>,
    header: Vec<String>,
    lines: Vec<String>,
}

impl CsvTable {
    pub fn new(digest: &str, columns: &[&str]) -> Self {
        CsvTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            header: vec![format!("config_digest={digest}")],
            lines: Vec::new(),
        }
    }

    /// Adds a comment line to the header block.
    pub fn describe(&mut self, text: &str) -> &mut Self {
        self.header.push(text.to_string());
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> &mut Self {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        self.lines.push(line.join(","));
        self
    }

    /// A comment between data rows, e.g. to mark a skipped cell.
    pub fn marker(&mut self, text: &str) -> &mut Self {
        self.lines.push(format!("# {text}"));
        self
    }

    pub fn rows(&self) -> usize {
        self.lines.iter().filter(|l| !l.starts_with('#')).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            out.push_str("# ");
            out.push_str(h);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(self.render().as_bytes())?;
        w.flush()?;
        Ok(())
    }
}

/// Appends every point of `series`. Gaussian series leave the `bc` column
/// as `gaussian` and the two coupling columns hold `λ₁`, `λ₂`.
pub fn push_series(table: &mut CsvTable, series: &FidelitySeries) {
    let (d1, d2, bc, theta) = match series.label {
        SeriesLabel::Xxz { delta1, delta2, bc } => (delta1, delta2, bc.name(), bc.theta()),
        SeriesLabel::Gaussian { lam1, lam2 } => (lam1, lam2, "gaussian", 0.0),
    };
    for p in &series.points {
        table.row(vec![
            d1.into(),
            d2.into(),
            bc.into(),
            theta.into(),
            p.length.into(),
            p.fidelity.into(),
            p.energy1.into(),
            p.energy2.into(),
            p.residual1.into(),
            p.residual2.into(),
        ]);
    }
}

pub fn series_table(digest: &str, series: &[FidelitySeries]) -> CsvTable {
    let mut table = CsvTable::new(digest, &SERIES_COLUMNS);
    for s in series {
        push_series(&mut table, s);
    }
    table
}

/// JSON summary of one fit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitRecord {
    pub label: SeriesLabel,
    #[serde(flatten)]
    pub fit: GFactorEstimate,
    pub g: f64,
    /// Closed-form value the fit is compared against, when one exists.
    pub predicted_g: Option<f64>,
}

impl FitRecord {
    pub fn new(label: SeriesLabel, fit: GFactorEstimate, predicted_g: Option<f64>) -> Self {
        FitRecord {
            label,
            fit,
            g: fit.g(),
            predicted_g,
        }
    }
}

#[derive(Serialize)]
struct FitFile<'a> {
    config_digest: &'a str,
    fits: &'a [FitRecord],
}

pub fn fits_json(digest: &str, fits: &[FitRecord]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&FitFile {
        config_digest: digest,
        fits,
    })?;
    s.push('\n');
    Ok(s)
}

pub fn write_fits(path: &Path, digest: &str, fits: &[FitRecord]) -> Result<()> {
    std::fs::write(path, fits_json(digest, fits)?)?;
    Ok(())
}

/// `dir/name`, creating `dir` if needed.
pub fn output_path(dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.join(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::SeriesPoint;
    use crate::xxz::BoundaryCondition;

    #[test]
    fn floats_round_trip_with_17_digits() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0] {
            let s = float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn digest_is_stable_hex() {
        let d = digest("delta1=0.2\n");
        assert_eq!(d.len(), 64);
        assert_eq!(d, digest("delta1=0.2\n"));
        assert_ne!(d, digest("delta1=0.3\n"));
        // sha256("")
        assert_eq!(
            digest(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn series_csv_layout() {
        let mut p = SeriesPoint::exact(8, 0.5);
        p.energy1 = -1.0;
        let s = FidelitySeries::new(
            SeriesLabel::Xxz {
                delta1: 0.2,
                delta2: 0.4,
                bc: BoundaryCondition::Periodic,
            },
            vec![p],
            1e-12,
        )
        .unwrap();
        let text = series_table("abc", &[s]).render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# config_digest=abc");
        assert_eq!(lines[1], SERIES_COLUMNS.join(","));
        assert!(lines[2].starts_with("2.0000000000000001e-1,4.0000000000000002e-1,periodic,0.0000000000000000e0,8,5.0000000000000000e-1,"));
        assert_eq!(lines[2].split(',').count(), 10);
    }

    #[test]
    fn markers_are_not_rows() {
        let mut t = CsvTable::new("d", &["a", "b"]);
        t.row(vec![1.0.into(), Cell::Missing]).marker("skipped");
        assert_eq!(t.rows(), 1);
        assert!(t.render().ends_with("1.0000000000000000e0,\n# skipped\n"));
    }
}
