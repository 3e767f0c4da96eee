//! Run configuration and the end-to-end runners behind the command-line
//! tool.
//!
//! A config is a `key = value` text file; `#` starts a comment. Grids are
//! either comma lists (`0.1, 0.3, 0.7`) or inclusive ranges `start:step:stop`.
//! Every key has a default, so an empty file is a valid config. The canonical
//! form (sorted keys, expanded grids, shortest round-trip floats) is what the
//! digest in each output file is computed from; `out` and `workers` are left
//! out of it because they do not change any result.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fidelity::{self, FidelitySeries, SeriesLabel, SolverSettings, SweepReport};
use crate::output::{self, Cell, CsvTable, FitRecord};
use crate::vertex::{self, VertexLattice};
use crate::xxz::BoundaryCondition;
use crate::{bcft, cft2d, gaussian, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub delta1: f64,
    pub delta2: Vec<f64>,
    pub sizes: Vec<usize>,
    pub bc: BoundaryCondition,
    /// Fine Δ₂ grid for the closed-form curve.
    pub curve_delta2: Vec<f64>,

    pub toroidal_delta2: Vec<f64>,
    pub toroidal_sizes: Vec<usize>,
    pub toroidal_theta: f64,

    pub massive_delta1: f64,
    pub massive_delta2: Vec<f64>,
    pub massive_sizes: Vec<usize>,

    pub tol: f64,
    pub seed: u64,
    /// Lanczos iteration cap; 0 picks a size-dependent default.
    pub max_iter: usize,

    pub c_grid: Vec<f64>,
    pub aspect: f64,

    pub oracle_tol: f64,
    pub oracle_pairs: usize,
    pub oracle_sizes: Vec<usize>,
    pub vertex_max_sites: usize,

    pub vertex_l1: usize,
    pub vertex_l2: usize,
    pub vertex_weights: Vec<f64>,

    /// Worker threads; 0 uses every core.
    pub workers: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            delta1: 0.2,
            delta2: range(-0.8, 0.2, 0.8),
            sizes: (8..=18).step_by(2).collect(),
            bc: BoundaryCondition::Periodic,
            curve_delta2: range(-0.99, 0.01, 1.0),
            toroidal_delta2: range(-0.6, 0.2, 0.6),
            toroidal_sizes: (8..=14).step_by(2).collect(),
            toroidal_theta: 0.0,
            massive_delta1: 10.0,
            massive_delta2: vec![-0.5, 0.0, 0.5],
            massive_sizes: (8..=16).step_by(2).collect(),
            tol: 1e-12,
            seed: 0,
            max_iter: 0,
            c_grid: range(0.05, 0.05, 1.4),
            aspect: 1.0,
            oracle_tol: 1e-10,
            oracle_pairs: 20,
            oracle_sizes: (8..=64).step_by(4).collect(),
            vertex_max_sites: 16,
            vertex_l1: 4,
            vertex_l2: 4,
            vertex_weights: range(0.5, 0.25, 1.25),
            workers: 0,
            out: PathBuf::from("results"),
        }
    }
}

/// Inclusive `start, start + step, …, stop`, with values rounded to 12
/// decimals so that e.g. `0.2` lands exactly on the literal.
fn range(start: f64, step: f64, stop: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as i64;
    (0..=n)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .map(|x| if x == 0.0 { 0.0 } else { x })
        .collect()
}

fn config_err(key: &str, value: &str, why: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key} = {value:?}: {why}"))
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let x: f64 = value.trim().parse().map_err(|e| config_err(key, value, e))?;
    if !x.is_finite() {
        return Err(config_err(key, value, "not finite"));
    }
    Ok(x)
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value.trim().parse().map_err(|e| config_err(key, value, e))
}

fn parse_grid(key: &str, value: &str) -> Result<Vec<f64>> {
    let value = value.trim();
    if value.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = value.split(':').collect();
    match parts.len() {
        1 => value.split(',').map(|v| parse_f64(key, v)).collect(),
        3 => {
            let start = parse_f64(key, parts[0])?;
            let step = parse_f64(key, parts[1])?;
            let stop = parse_f64(key, parts[2])?;
            if !(step > 0.0) || stop < start {
                return Err(config_err(key, value, "need step > 0 and stop >= start"));
            }
            if (stop - start) / step > 1e6 {
                return Err(config_err(key, value, "grid too large"));
            }
            Ok(range(start, step, stop))
        }
        _ => Err(config_err(key, value, "expected a list or start:step:stop")),
    }
}

fn parse_sizes(key: &str, value: &str) -> Result<Vec<usize>> {
    let value = value.trim();
    if value.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = value.split(':').collect();
    match parts.len() {
        1 => value.split(',').map(|v| parse_usize(key, v)).collect(),
        3 => {
            let start = parse_usize(key, parts[0])?;
            let step = parse_usize(key, parts[1])?;
            let stop = parse_usize(key, parts[2])?;
            if step == 0 || stop < start {
                return Err(config_err(key, value, "need step > 0 and stop >= start"));
            }
            Ok((start..=stop).step_by(step).collect())
        }
        _ => Err(config_err(key, value, "expected a list or start:step:stop")),
    }
}

fn join<T: std::fmt::Debug>(xs: &[T]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Parses a config text on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let key = key.trim();
            if let Some(prev) = seen.insert(key.to_string(), n + 1) {
                return Err(Error::Config(format!(
                    "line {}: {key} already set on line {prev}",
                    n + 1
                )));
            }
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    /// Sets one key. `lmax` is accepted as shorthand for `sizes = 8:2:lmax`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "delta1" => self.delta1 = parse_f64(key, v)?,
            "delta2" => self.delta2 = parse_grid(key, v)?,
            "sizes" => self.sizes = parse_sizes(key, v)?,
            "lmax" => {
                let lmax = parse_usize(key, v)?;
                if lmax < fidelity::MIN_SERIES_LENGTH {
                    return Err(config_err(key, v, "must be >= 8"));
                }
                self.sizes = (fidelity::MIN_SERIES_LENGTH..=lmax).step_by(2).collect();
            }
            "bc" => self.bc = BoundaryCondition::from_name(v, self.bc.theta())?,
            "theta" => {
                let theta = parse_f64(key, v)?;
                self.bc = BoundaryCondition::from_name(self.bc.name(), theta)?;
            }
            "curve_delta2" => self.curve_delta2 = parse_grid(key, v)?,
            "toroidal_delta2" => self.toroidal_delta2 = parse_grid(key, v)?,
            "toroidal_sizes" => self.toroidal_sizes = parse_sizes(key, v)?,
            "toroidal_theta" => self.toroidal_theta = parse_f64(key, v)?,
            "massive_delta1" => self.massive_delta1 = parse_f64(key, v)?,
            "massive_delta2" => self.massive_delta2 = parse_grid(key, v)?,
            "massive_sizes" => self.massive_sizes = parse_sizes(key, v)?,
            "tol" => self.tol = parse_f64(key, v)?,
            "seed" => self.seed = v.parse().map_err(|e| config_err(key, v, e))?,
            "max_iter" => self.max_iter = parse_usize(key, v)?,
            "c_grid" => self.c_grid = parse_grid(key, v)?,
            "aspect" => self.aspect = parse_f64(key, v)?,
            "oracle_tol" => self.oracle_tol = parse_f64(key, v)?,
            "oracle_pairs" => self.oracle_pairs = parse_usize(key, v)?,
            "oracle_sizes" => self.oracle_sizes = parse_sizes(key, v)?,
            "vertex_max_sites" => self.vertex_max_sites = parse_usize(key, v)?,
            "vertex_l1" => self.vertex_l1 = parse_usize(key, v)?,
            "vertex_l2" => self.vertex_l2 = parse_usize(key, v)?,
            "vertex_weights" => self.vertex_weights = parse_grid(key, v)?,
            "workers" => self.workers = parse_usize(key, v)?,
            "out" => self.out = PathBuf::from(v),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key=value` overrides in order.
    pub fn apply_overrides<'a>(&mut self, pairs: impl IntoIterator<Item = &'a str>) -> Result<()> {
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override {pair:?} is not key=value")))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    /// Every result-affecting key, sorted, one per line.
    pub fn canonical(&self) -> String {
        let mut entries: BTreeMap<&str, String> = BTreeMap::new();
        entries.insert("aspect", format!("{:?}", self.aspect));
        entries.insert("bc", self.bc.name().to_string());
        entries.insert("c_grid", join(&self.c_grid));
        entries.insert("curve_delta2", join(&self.curve_delta2));
        entries.insert("delta1", format!("{:?}", self.delta1));
        entries.insert("delta2", join(&self.delta2));
        entries.insert("massive_delta1", format!("{:?}", self.massive_delta1));
        entries.insert("massive_delta2", join(&self.massive_delta2));
        entries.insert("massive_sizes", join(&self.massive_sizes));
        entries.insert("max_iter", self.max_iter.to_string());
        entries.insert("oracle_pairs", self.oracle_pairs.to_string());
        entries.insert("oracle_sizes", join(&self.oracle_sizes));
        entries.insert("oracle_tol", format!("{:?}", self.oracle_tol));
        entries.insert("seed", self.seed.to_string());
        entries.insert("sizes", join(&self.sizes));
        entries.insert("theta", format!("{:?}", self.bc.theta()));
        entries.insert("tol", format!("{:?}", self.tol));
        entries.insert("toroidal_delta2", join(&self.toroidal_delta2));
        entries.insert("toroidal_sizes", join(&self.toroidal_sizes));
        entries.insert("toroidal_theta", format!("{:?}", self.toroidal_theta));
        entries.insert("vertex_l1", self.vertex_l1.to_string());
        entries.insert("vertex_l2", self.vertex_l2.to_string());
        entries.insert("vertex_max_sites", self.vertex_max_sites.to_string());
        entries.insert("vertex_weights", join(&self.vertex_weights));
        let mut s = String::new();
        for (k, v) in entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn digest(&self) -> String {
        output::digest(&self.canonical())
    }

    pub fn solver(&self) -> SolverSettings {
        SolverSettings {
            tol: self.tol,
            seed: self.seed,
            max_iter: (self.max_iter > 0).then_some(self.max_iter),
            ..SolverSettings::default()
        }
    }

    /// Runs `f` on a pool of `workers` threads (all cores when 0).
    pub fn in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
        Ok(pool.install(f))
    }

    fn check_tol(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(config_err("tol", &self.tol.to_string(), "must be > 0"));
        }
        Ok(())
    }

    /// Writes the canonical config next to the results.
    fn record(&self) -> Result<PathBuf> {
        let path = output::output_path(&self.out, "config.txt")?;
        let text = format!("# config_digest={}\n{}", self.digest(), self.canonical());
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

/// Files written by a runner.
#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
}

impl RunOutput {
    fn add(&mut self, path: PathBuf) {
        info!("wrote {}", path.display());
        self.files.push(path);
    }
}

fn write_table(out: &mut RunOutput, dir: &Path, name: &str, table: &CsvTable) -> Result<()> {
    let path = output::output_path(dir, name)?;
    table.write_to(&path)?;
    out.add(path);
    Ok(())
}

/// ED sweep plus fits; incomplete sweeps are flagged in the series table.
struct Panel {
    report: SweepReport,
    fits: Vec<Option<fidelity::GFactorEstimate>>,
}

fn run_panel(
    cfg: &RunConfig,
    delta1: f64,
    deltas2: &[f64],
    bc: BoundaryCondition,
    sizes: &[usize],
) -> Result<Panel> {
    let report = cfg.in_pool(|| fidelity::sweep_partial(delta1, deltas2, bc, sizes, &cfg.solver()))??;
    let fits = report
        .series
        .iter()
        .map(|s| {
            fidelity::extract_g(s)
                .map_err(|e| warn!("no fit for {:?}: {e}", s.label))
                .ok()
        })
        .collect();
    Ok(Panel { report, fits })
}

fn flag_failures(table: &mut CsvTable, report: &SweepReport) {
    for f in &report.failures {
        table.marker(&format!(
            "INCOMPLETE L={} delta={:?}: {}",
            f.length, f.delta, f.error
        ));
    }
}

fn fit_columns() -> Vec<&'static str> {
    vec![
        "delta2",
        "g",
        "ln_g",
        "stderr_ln_g",
        "f",
        "c1",
        "l_min",
        "l_max",
        "g_bcft",
    ]
}

fn fit_row(delta2: f64, fit: Option<&fidelity::GFactorEstimate>, predicted: Option<f64>) -> Vec<Cell> {
    match fit {
        Some(e) => vec![
            delta2.into(),
            e.g().into(),
            e.ln_g.into(),
            e.stderr_ln_g.into(),
            e.f.into(),
            e.c1.into(),
            e.l_min.into(),
            e.l_max.into(),
            predicted.into(),
        ],
        None => {
            let mut row = vec![delta2.into()];
            row.extend(std::iter::repeat_n(Cell::Missing, 7));
            row.push(predicted.into());
            row
        }
    }
}

/// Main panel, closed-form curve, toroidal panel and critical–massive inset.
///
/// Files: `fig1_series.csv` (raw fidelities of every panel),
/// `fig1_ed.csv`, `fig1_bcft.csv`, `fig1_toroidal.csv`, `fig1_massive.csv`,
/// `fig1_massive_curve.csv` and `fig1_fits.json`. If a ground state fails to
/// converge every file is still written, the series file flags the missing
/// cells, and the first solver error is returned.
pub fn run_fig1(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.check_tol()?;
    for &d in cfg.delta2.iter().chain(&cfg.toroidal_delta2).chain(&cfg.massive_delta2) {
        bcft::lambda_of_delta(d).map_err(|e| Error::Config(format!("delta2 grid: {e}")))?;
    }
    let digest = cfg.digest();
    let mut out = RunOutput::default();
    out.add(cfg.record()?);

    let main = run_panel(cfg, cfg.delta1, &cfg.delta2, cfg.bc, &cfg.sizes)?;
    let toroidal_bc = BoundaryCondition::Toroidal(cfg.toroidal_theta);
    let toroidal = if cfg.toroidal_sizes.is_empty() || cfg.toroidal_delta2.is_empty() {
        None
    } else {
        Some(run_panel(
            cfg,
            cfg.delta1,
            &cfg.toroidal_delta2,
            toroidal_bc,
            &cfg.toroidal_sizes,
        )?)
    };
    let massive = if cfg.massive_sizes.is_empty() || cfg.massive_delta2.is_empty() {
        None
    } else {
        Some(run_panel(
            cfg,
            cfg.massive_delta1,
            &cfg.massive_delta2,
            BoundaryCondition::Periodic,
            &cfg.massive_sizes,
        )?)
    };

    let mut series = CsvTable::new(&digest, &output::SERIES_COLUMNS);
    let mut records = Vec::new();
    for panel in [Some(&main), toroidal.as_ref(), massive.as_ref()].into_iter().flatten() {
        for s in &panel.report.series {
            output::push_series(&mut series, s);
        }
        flag_failures(&mut series, &panel.report);
    }
    write_table(&mut out, &cfg.out, "fig1_series.csv", &series)?;

    let critical_prediction = |d2: f64| bcft::g_critical_xxz(cfg.delta1, d2).ok();
    let mut ed = CsvTable::new(&digest, &fit_columns());
    ed.describe(&format!("delta1={:?} bc={}", cfg.delta1, cfg.bc));
    for ((s, fit), &d2) in main.report.series.iter().zip(&main.fits).zip(&cfg.delta2) {
        let predicted = critical_prediction(d2);
        ed.row(fit_row(d2, fit.as_ref(), predicted));
        if let Some(fit) = fit {
            records.push(FitRecord::new(s.label, *fit, predicted));
        }
    }
    write_table(&mut out, &cfg.out, "fig1_ed.csv", &ed)?;

    let mut curve = CsvTable::new(&digest, &["delta2", "lambda2", "g"]);
    curve.describe(&format!("delta1={:?}", cfg.delta1));
    for &d2 in &cfg.curve_delta2 {
        match (bcft::lambda_of_delta(d2), critical_prediction(d2)) {
            (Ok(c), Some(g)) => {
                curve.row(vec![d2.into(), c.lam.into(), g.into()]);
            }
            _ => {
                curve.marker(&format!("skipped delta2={d2:?}: outside the critical region"));
            }
        }
    }
    write_table(&mut out, &cfg.out, "fig1_bcft.csv", &curve)?;

    if let Some(panel) = &toroidal {
        let mut table = CsvTable::new(&digest, &fit_columns());
        table.describe(&format!("delta1={:?} bc={}", cfg.delta1, toroidal_bc));
        for ((s, fit), &d2) in panel.report.series.iter().zip(&panel.fits).zip(&cfg.toroidal_delta2) {
            let predicted = Some(bcft::g_antiperiodic());
            table.row(fit_row(d2, fit.as_ref(), predicted));
            if let Some(fit) = fit {
                records.push(FitRecord::new(s.label, *fit, predicted));
            }
        }
        write_table(&mut out, &cfg.out, "fig1_toroidal.csv", &table)?;
    }

    let massive_prediction =
        |d2: f64| bcft::lambda_of_delta(d2).and_then(|c| bcft::g_critical_massive(c.k)).ok();
    if let Some(panel) = &massive {
        let mut table = CsvTable::new(&digest, &fit_columns());
        table.describe(&format!("delta1={:?} bc=periodic", cfg.massive_delta1));
        for ((s, fit), &d2) in panel.report.series.iter().zip(&panel.fits).zip(&cfg.massive_delta2) {
            let predicted = massive_prediction(d2);
            table.row(fit_row(d2, fit.as_ref(), predicted));
            if let Some(fit) = fit {
                records.push(FitRecord::new(s.label, *fit, predicted));
            }
        }
        write_table(&mut out, &cfg.out, "fig1_massive.csv", &table)?;

        let mut curve = CsvTable::new(&digest, &["delta2", "K", "g"]);
        for &d2 in &cfg.curve_delta2 {
            match (bcft::lambda_of_delta(d2), massive_prediction(d2)) {
                (Ok(c), Some(g)) => {
                    curve.row(vec![d2.into(), c.k.into(), g.into()]);
                }
                _ => {
                    curve.marker(&format!("skipped delta2={d2:?}: outside the critical region"));
                }
            }
        }
        write_table(&mut out, &cfg.out, "fig1_massive_curve.csv", &curve)?;
    }

    let path = output::output_path(&cfg.out, "fig1_fits.json")?;
    output::write_fits(&path, &digest, &records)?;
    out.add(path);

    for panel in [Some(main), toroidal, massive].into_iter().flatten() {
        if let Some(f) = panel.report.failures.into_iter().next() {
            return Err(f.error);
        }
    }
    Ok(out)
}

/// `g_eight_vertex` over `c_grid × c_grid` as CSV, with marker rows for
/// cells outside the disordered region.
pub fn surface_table(cfg: &RunConfig) -> Result<CsvTable> {
    cft2d::nome(cfg.aspect).map_err(|e| Error::Config(e.to_string()))?;
    let points = cfg.in_pool(|| cft2d::surface(&cfg.c_grid, cfg.aspect))?;
    let mut table = CsvTable::new(&cfg.digest(), &["c", "c_prime", "g"]);
    table.describe(&format!("aspect={:?}", cfg.aspect));
    for p in points {
        match p.g {
            Some(g) => {
                table.row(vec![p.c.into(), p.c_prime.into(), g.into()]);
            }
            None => {
                table.marker(&format!(
                    "skipped c={:?} c_prime={:?}: outside the disordered region",
                    p.c, p.c_prime
                ));
            }
        }
    }
    Ok(table)
}

/// Writes `fig2_surface.csv`.
pub fn run_fig2(cfg: &RunConfig) -> Result<RunOutput> {
    let table = surface_table(cfg)?;
    let mut out = RunOutput::default();
    out.add(cfg.record()?);
    write_table(&mut out, &cfg.out, "fig2_surface.csv", &table)?;
    Ok(out)
}

/// One row of the oracle report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    pub suite: &'static str,
    pub case: String,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
    pub tol: f64,
    pub pass: bool,
}

impl OracleCheck {
    fn new(suite: &'static str, case: String, value: f64, reference: f64, tol: f64) -> Self {
        let error = (value - reference).abs();
        OracleCheck {
            suite,
            case,
            value,
            reference,
            error,
            tol,
            pass: error <= tol,
        }
    }
}

/// Gaussian determinant checks on `oracle_pairs` random coupling pairs and
/// exact transfer-matrix vs enumeration checks on every torus with at most
/// `vertex_max_sites` sites.
pub fn oracle_checks(cfg: &RunConfig) -> Result<Vec<OracleCheck>> {
    if !(cfg.oracle_tol >= 0.0) {
        return Err(config_err("oracle_tol", &cfg.oracle_tol.to_string(), "must be >= 0"));
    }
    if cfg.vertex_max_sites > 16 {
        return Err(config_err(
            "vertex_max_sites",
            &cfg.vertex_max_sites.to_string(),
            "enumeration is limited to 16 sites",
        ));
    }
    let tol = cfg.oracle_tol;
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(f64, f64)> = (0..cfg.oracle_pairs)
        .map(|_| {
            let a: f64 = rng.gen_range(-4.0f64..0.0);
            let b: f64 = rng.gen_range(-4.0f64..0.0);
            (a.exp(), b.exp())
        })
        .collect();
    let sizes: Vec<usize> = cfg.oracle_sizes.iter().copied().filter(|l| l % 2 == 0).collect();
    for (lam1, lam2) in pairs {
        let case = format!("lam1={lam1:.6} lam2={lam2:.6}");
        let series = gaussian::oracle_series(lam1, lam2, &sizes)?;
        for p in &series.points {
            checks.push(OracleCheck::new(
                "gaussian-determinant",
                format!("{case} L={}", p.length),
                p.fidelity.ln(),
                gaussian::mode_product(lam1, lam2, p.length).ln(),
                tol,
            ));
        }
        let fit = fidelity::extract_g(&series)?;
        let ln_g = bcft::g_critical(lam1, lam2)?.ln();
        checks.push(OracleCheck::new("gaussian-ln-g", case.clone(), fit.ln_g, ln_g, tol));
        checks.push(OracleCheck::new("gaussian-bulk", case, fit.f, ln_g, tol));
    }

    let lattices: Vec<VertexLattice> = (1..=vertex::MAX_SIDE)
        .flat_map(|l1| (1..=vertex::MAX_SIDE).map(move |l2| (l1, l2)))
        .filter(|(l1, l2)| l1 * l2 <= cfg.vertex_max_sites)
        .map(|(l1, l2)| VertexLattice::new(l1, l2))
        .collect::<Result<_>>()?;
    let polys: Vec<(VertexLattice, vertex::Polynomial, vertex::Polynomial)> = cfg.in_pool(|| {
        use rayon::prelude::*;
        lattices
            .par_iter()
            .map(|lat| {
                (
                    *lat,
                    lat.partition_polynomial(),
                    vertex::enumeration::partition_polynomial(lat),
                )
            })
            .collect()
    })?;
    for (lat, tm, en) in polys {
        let width = tm.len().max(en.len());
        let mismatched = (0..width)
            .filter(|&i| tm.get(i).copied().unwrap_or(0) != en.get(i).copied().unwrap_or(0))
            .count();
        // exact: integer coefficients must agree regardless of the tolerance
        let mut check = OracleCheck::new(
            "six-vertex-polynomial",
            format!("{}x{}", lat.l1, lat.l2),
            mismatched as f64,
            0.0,
            0.0,
        );
        check.value = vertex::evaluate(&tm, 1.0);
        check.reference = vertex::evaluate(&en, 1.0);
        check.pass = mismatched == 0;
        checks.push(check);
    }
    Ok(checks)
}

/// Writes `oracle.csv`; returns [`Error::OracleMismatch`] after writing if
/// any check failed.
pub fn run_oracle(cfg: &RunConfig) -> Result<RunOutput> {
    let checks = oracle_checks(cfg)?;
    let mut table = CsvTable::new(
        &cfg.digest(),
        &["suite", "case", "value", "reference", "abs_error", "tol", "pass"],
    );
    for c in &checks {
        table.row(vec![
            c.suite.into(),
            c.case.as_str().into(),
            c.value.into(),
            c.reference.into(),
            c.error.into(),
            c.tol.into(),
            if c.pass { "true" } else { "false" }.into(),
        ]);
    }
    let mut out = RunOutput::default();
    out.add(cfg.record()?);
    write_table(&mut out, &cfg.out, "oracle.csv", &table)?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        for c in checks.iter().filter(|c| !c.pass).take(5) {
            warn!("{} {}: |{} - {}| = {:e} > {:e}", c.suite, c.case, c.value, c.reference, c.error, c.tol);
        }
        return Err(Error::OracleMismatch {
            failed,
            total: checks.len(),
        });
    }
    Ok(out)
}

/// Plain `delta1` × `delta2` sweep with `bc` and `sizes`: `sweep.csv` and
/// `sweep_fits.json`.
pub fn run_sweep(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.check_tol()?;
    let digest = cfg.digest();
    let mut out = RunOutput::default();
    out.add(cfg.record()?);
    let panel = run_panel(cfg, cfg.delta1, &cfg.delta2, cfg.bc, &cfg.sizes)?;
    let mut table = output::series_table(&digest, &panel.report.series);
    flag_failures(&mut table, &panel.report);
    write_table(&mut out, &cfg.out, "sweep.csv", &table)?;
    let records: Vec<FitRecord> = panel
        .report
        .series
        .iter()
        .zip(&panel.fits)
        .filter_map(|(s, fit)| {
            let predicted = match s.label {
                SeriesLabel::Xxz { delta1, delta2, bc } if bc.conserves_magnetization() => {
                    bcft::g_critical_xxz(delta1, delta2).ok()
                }
                SeriesLabel::Xxz { .. } => Some(bcft::g_antiperiodic()),
                SeriesLabel::Gaussian { lam1, lam2 } => bcft::g_critical(lam1, lam2).ok(),
            };
            fit.map(|f| FitRecord::new(s.label, f, predicted))
        })
        .collect();
    let path = output::output_path(&cfg.out, "sweep_fits.json")?;
    output::write_fits(&path, &digest, &records)?;
    out.add(path);
    if let Some(f) = panel.report.failures.into_iter().next() {
        return Err(f.error);
    }
    Ok(out)
}

/// `(c, c′, F)` on the `vertex_l1 × vertex_l2` torus over `vertex_weights²`.
pub fn vertex_table(cfg: &RunConfig) -> Result<CsvTable> {
    let lat = VertexLattice::new(cfg.vertex_l1, cfg.vertex_l2)
        .map_err(|e| Error::Config(e.to_string()))?;
    let z = lat.partition_polynomial();
    let mut table = CsvTable::new(&cfg.digest(), &["c", "c_prime", "fidelity"]);
    table.describe(&format!(
        "torus {}x{} Z(w) = {}",
        lat.l1,
        lat.l2,
        z.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
    ));
    for &c in &cfg.vertex_weights {
        for &cp in &cfg.vertex_weights {
            let f = vertex::lattice_fidelity_from(&z, c, cp)
                .map_err(|e| Error::Config(e.to_string()))?;
            table.row(vec![c.into(), cp.into(), f.into()]);
        }
    }
    Ok(table)
}

/// Determinant-route `(L, F)` series of two Gaussian rings.
pub fn gaussian_table(cfg: &RunConfig, lam1: f64, lam2: f64) -> Result<CsvTable> {
    let series = gaussian::oracle_series(lam1, lam2, &cfg.oracle_sizes)?;
    let mut table = CsvTable::new(&cfg.digest(), &["lam1", "lam2", "L", "fidelity", "mode_product"]);
    for p in &series.points {
        table.row(vec![
            lam1.into(),
            lam2.into(),
            p.length.into(),
            p.fidelity.into(),
            gaussian::mode_product(lam1, lam2, p.length).into(),
        ]);
    }
    Ok(table)
}

/// Series fits as standalone JSON text.
pub fn fit_series(digest: &str, series: &[FidelitySeries]) -> Result<String> {
    let records = series
        .iter()
        .map(|s| Ok(FitRecord::new(s.label, fidelity::extract_g(s)?, None)))
        .collect::<Result<Vec<_>>>()?;
    output::fits_json(digest, &records)
}
