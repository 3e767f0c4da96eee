//! Ground-state overlaps across system sizes and extraction of the O(1)
//! factor `g` from `ln F(L) = −f L + ln g + c₁/L`.

use std::collections::BTreeMap;

use log::warn;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{self, LanczosError, LanczosOptions};
use crate::scalar::{self, Scalar};
use crate::spin_basis::SectorBasis;
use crate::xxz::{BoundaryCondition, XxzHamiltonian, XxzParams};
use crate::{Error, Result};

/// Smallest system size accepted in a series.
pub const MIN_SERIES_LENGTH: usize = 8;

/// `|⟨u, v⟩|`. Inputs that are not normalized are renormalized with a warning.
pub fn overlap<S: Scalar>(u: &[S], v: &[S]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    let nu = scalar::norm(u);
    let nv = scalar::norm(v);
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::domain("vector norm", 0.0, "> 0"));
    }
    let raw = scalar::dot(u, v).abs();
    let f = if (nu - 1.0).abs() > 1e-10 || (nv - 1.0).abs() > 1e-10 {
        warn!("overlap of non-normalized vectors (norms {nu}, {nv}); renormalizing");
        raw / (nu * nv)
    } else {
        raw
    };
    Ok(f.min(1.0))
}

/// What a series was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum SeriesLabel {
    Xxz {
        delta1: f64,
        delta2: f64,
        bc: BoundaryCondition,
    },
    Gaussian {
        lam1: f64,
        lam2: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub length: usize,
    pub fidelity: f64,
    pub energy1: f64,
    pub energy2: f64,
    pub residual1: f64,
    pub residual2: f64,
}

impl SeriesPoint {
    /// A point with no solver metadata (closed-form or synthetic data).
    pub fn exact(length: usize, fidelity: f64) -> Self {
        SeriesPoint {
            length,
            fidelity,
            energy1: f64::NAN,
            energy2: f64::NAN,
            residual1: 0.0,
            residual2: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelitySeries {
    pub label: SeriesLabel,
    pub points: Vec<SeriesPoint>,
    /// Solver residual bound the points were computed with.
    pub tol: f64,
}

impl FidelitySeries {
    pub fn new(label: SeriesLabel, points: Vec<SeriesPoint>, tol: f64) -> Result<Self> {
        for p in &points {
            if p.length < MIN_SERIES_LENGTH || p.length % 2 != 0 {
                return Err(Error::InvalidSeries(format!(
                    "length {} must be even and >= {MIN_SERIES_LENGTH}",
                    p.length
                )));
            }
            if !(p.fidelity > 0.0 && p.fidelity <= 1.0) {
                return Err(Error::InvalidSeries(format!(
                    "fidelity {} at L = {} is outside (0, 1]",
                    p.fidelity, p.length
                )));
            }
        }
        if points.windows(2).any(|w| w[0].length >= w[1].length) {
            return Err(Error::InvalidSeries(
                "lengths must be strictly increasing".into(),
            ));
        }
        Ok(FidelitySeries { label, points, tol })
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.length).collect()
    }

    pub fn fidelities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.fidelity).collect()
    }

    /// Copy keeping only points whose length satisfies `keep`.
    pub fn filtered(&self, keep: impl Fn(usize) -> bool) -> Self {
        FidelitySeries {
            label: self.label,
            points: self
                .points
                .iter()
                .copied()
                .filter(|p| keep(p.length))
                .collect(),
            tol: self.tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GFactorEstimate {
    pub ln_g: f64,
    /// Bulk decay rate per site.
    pub f: f64,
    /// Coefficient of the `1/L` correction.
    pub c1: f64,
    pub stderr_ln_g: f64,
    pub max_abs_residual: f64,
    pub l_min: usize,
    pub l_max: usize,
    pub n_points: usize,
}

impl GFactorEstimate {
    pub fn g(&self) -> f64 {
        self.ln_g.exp()
    }

    /// Fitted `ln F` at size `length`.
    pub fn predict_ln_f(&self, length: usize) -> f64 {
        let l = length as f64;
        -self.f * l + self.ln_g + self.c1 / l
    }
}

/// Fits `ln F(L) = −f L + ln g + c₁/L` to a series of at least four points.
pub fn extract_g(series: &FidelitySeries) -> Result<GFactorEstimate> {
    if series.points.len() < 4 {
        return Err(Error::InvalidSeries(format!(
            "need at least 4 points, got {}",
            series.points.len()
        )));
    }
    fit_log_fidelity(&series.lengths(), &series.fidelities())
}

/// Unweighted least squares for `ln F = −f L + ln g + c₁/L` via QR.
pub fn fit_log_fidelity(lengths: &[usize], fidelities: &[f64]) -> Result<GFactorEstimate> {
    if lengths.len() != fidelities.len() {
        return Err(Error::DimensionMismatch {
            expected: lengths.len(),
            actual: fidelities.len(),
        });
    }
    let mut distinct = lengths.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidSeries(format!(
            "degenerate fit: {} distinct sizes, need 3",
            distinct.len()
        )));
    }
    if let Some(bad) = fidelities.iter().find(|f| !(**f > 0.0)) {
        return Err(Error::InvalidSeries(format!("cannot take the log of F = {bad}")));
    }
    let n = lengths.len();
    let design = DMatrix::from_fn(n, 3, |i, j| {
        let l = lengths[i] as f64;
        match j {
            0 => -l,
            1 => 1.0,
            _ => 1.0 / l,
        }
    });
    let rhs = DVector::from_iterator(n, fidelities.iter().map(|f| f.ln()));
    let qr = design.clone().qr();
    let r = qr.r();
    let qtb = qr.q().transpose() * &rhs;
    let coef = r
        .solve_upper_triangular(&qtb)
        .ok_or_else(|| Error::InvalidSeries("singular design matrix".into()))?;
    let resid = &rhs - &design * &coef;
    let max_abs_residual = resid.amax();
    let dof = n as f64 - 3.0;
    let stderr_ln_g = if dof > 0.0 {
        let sigma2 = resid.norm_squared() / dof;
        let r_inv = r
            .try_inverse()
            .ok_or_else(|| Error::InvalidSeries("singular design matrix".into()))?;
        let cov = &r_inv * r_inv.transpose() * sigma2;
        cov[(1, 1)].max(0.0).sqrt()
    } else {
        f64::NAN
    };
    Ok(GFactorEstimate {
        f: coef[0],
        ln_g: coef[1],
        c1: coef[2],
        stderr_ln_g,
        max_abs_residual,
        l_min: distinct[0],
        l_max: distinct[distinct.len() - 1],
        n_points: n,
    })
}

/// Solver knobs shared by every ground state of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub tol: f64,
    pub seed: u64,
    /// Overrides the size-dependent default when set.
    pub max_iter: Option<usize>,
    pub krylov_dim: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-12,
            seed: 0,
            max_iter: None,
            krylov_dim: 250,
        }
    }
}

impl SolverSettings {
    fn options(&self, dim: usize) -> LanczosOptions {
        let mut o = LanczosOptions::for_dim(dim)
            .with_tol(self.tol)
            .with_seed(self.seed);
        o.max_iter = self.max_iter.unwrap_or(o.max_iter.max(2000));
        o.krylov_dim = self.krylov_dim;
        o
    }
}

#[derive(Clone, Debug)]
pub enum StateVector {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl StateVector {
    pub fn len(&self) -> usize {
        match self {
            StateVector::Real(v) => v.len(),
            StateVector::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        match (self, other) {
            (StateVector::Real(a), StateVector::Real(b)) => overlap(a, b),
            (StateVector::Complex(a), StateVector::Complex(b)) => overlap(a, b),
            (StateVector::Real(a), StateVector::Complex(b)) => overlap(&to_complex(a), b),
            (StateVector::Complex(a), StateVector::Real(b)) => overlap(a, &to_complex(b)),
        }
    }
}

fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub params: XxzParams,
    pub energy: f64,
    pub residual: f64,
    pub iterations: usize,
    pub gap_estimate: f64,
    pub vector: StateVector,
}

/// The basis the ground state of a ring lives in: zero magnetization when
/// the boundary conserves it, otherwise the even `n_up` parity sector.
///
/// The toroidal ground state is doubly degenerate between the two parity
/// sectors, so working in the full space would leave the ground vector
/// undetermined.
pub fn ground_state_basis(length: usize, bc: BoundaryCondition) -> Result<SectorBasis> {
    if bc.conserves_magnetization() {
        SectorBasis::half_filled(length)
    } else {
        SectorBasis::parity(length, 0)
    }
}

/// Lowest eigenstate of an XXZ ring in [`ground_state_basis`].
pub fn xxz_ground_state(params: &XxzParams, settings: &SolverSettings) -> Result<GroundState> {
    let basis = ground_state_basis(params.length, params.bc)?;
    xxz_ground_state_in(params, &basis, settings)
}

pub fn xxz_ground_state_in(
    params: &XxzParams,
    basis: &SectorBasis,
    settings: &SolverSettings,
) -> Result<GroundState> {
    let opts = settings.options(basis.dim());
    if params.bc.needs_complex() {
        let h = XxzHamiltonian::<Complex64>::new(*params, basis)?;
        let r = eigensolver::ground_state(&h, &opts).map_err(|e| solver_error(params, e))?;
        Ok(GroundState {
            params: *params,
            energy: r.energy,
            residual: r.residual,
            iterations: r.iterations,
            gap_estimate: r.gap_estimate,
            vector: StateVector::Complex(r.vector),
        })
    } else {
        let h = XxzHamiltonian::<f64>::new(*params, basis)?;
        let r = eigensolver::ground_state(&h, &opts).map_err(|e| solver_error(params, e))?;
        Ok(GroundState {
            params: *params,
            energy: r.energy,
            residual: r.residual,
            iterations: r.iterations,
            gap_estimate: r.gap_estimate,
            vector: StateVector::Real(r.vector),
        })
    }
}

fn solver_error<S: Scalar>(params: &XxzParams, e: LanczosError<S>) -> Error {
    match e {
        LanczosError::NotConverged(best) => Error::NotConverged {
            length: params.length,
            residual: best.residual,
            iterations: best.iterations,
        },
        LanczosError::EmptyOperator => Error::EmptyOperator,
        LanczosError::InvalidTolerance(t) => Error::domain("tol", t, "> 0"),
    }
}

/// Fidelity series between the ground states at `delta1` and `delta2`.
pub fn fidelity_series(
    delta1: f64,
    delta2: f64,
    bc: BoundaryCondition,
    lengths: &[usize],
    settings: &SolverSettings,
) -> Result<FidelitySeries> {
    let mut all = sweep(delta1, &[delta2], bc, lengths, settings)?;
    Ok(all.remove(0))
}

/// One series per entry of `deltas2`, all against the same `delta1`.
///
/// Every distinct `(Δ, L)` ground state is solved once; solves run on the
/// current rayon pool and results are assembled in input order. The first
/// solver failure is returned as an error; see [`sweep_partial`] to keep the
/// cells that did converge.
pub fn sweep(
    delta1: f64,
    deltas2: &[f64],
    bc: BoundaryCondition,
    lengths: &[usize],
    settings: &SolverSettings,
) -> Result<Vec<FidelitySeries>> {
    let report = sweep_partial(delta1, deltas2, bc, lengths, settings)?;
    match report.failures.into_iter().next() {
        Some(failure) => Err(failure.error),
        None => Ok(report.series),
    }
}

/// A `(L, Δ)` ground state that could not be computed.
#[derive(Debug)]
pub struct CellFailure {
    pub length: usize,
    pub delta: f64,
    pub error: Error,
}

#[derive(Debug)]
pub struct SweepReport {
    /// One series per `Δ₂`, holding the sizes where both states were solved.
    pub series: Vec<FidelitySeries>,
    /// Failed cells, ordered by `(L, Δ)`.
    pub failures: Vec<CellFailure>,
}

impl SweepReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Like [`sweep`], but solver failures are collected instead of aborting.
/// Invalid input is still an error.
pub fn sweep_partial(
    delta1: f64,
    deltas2: &[f64],
    bc: BoundaryCondition,
    lengths: &[usize],
    settings: &SolverSettings,
) -> Result<SweepReport> {
    let mut sizes = lengths.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() != lengths.len() {
        return Err(Error::InvalidSeries("duplicate sizes".into()));
    }
    if let Some(&l) = sizes.iter().find(|&&l| l < MIN_SERIES_LENGTH || l % 2 != 0) {
        return Err(Error::InvalidSeries(format!(
            "length {l} must be even and >= {MIN_SERIES_LENGTH}"
        )));
    }
    let mut deltas: Vec<f64> = std::iter::once(delta1).chain(deltas2.iter().copied()).collect();
    if let Some(&d) = deltas.iter().find(|d| !d.is_finite()) {
        return Err(Error::domain("delta", d, "finite"));
    }
    deltas.sort_by(|a, b| a.total_cmp(b));
    deltas.dedup();

    // largest sizes first so the long solves start early
    let cells: Vec<(usize, f64)> = sizes
        .iter()
        .rev()
        .flat_map(|&l| deltas.iter().map(move |&d| (l, d)))
        .collect();
    let solved: Vec<Result<GroundState>> = cells
        .par_iter()
        .map(|&(l, d)| xxz_ground_state(&XxzParams::new(l, d, bc), settings))
        .collect();
    let mut states: BTreeMap<(usize, u64), GroundState> = BTreeMap::new();
    let mut failures = Vec::new();
    for ((length, delta), gs) in cells.into_iter().zip(solved) {
        match gs {
            Ok(gs) => {
                states.insert((length, delta.to_bits()), gs);
            }
            Err(error) => failures.push(CellFailure {
                length,
                delta,
                error,
            }),
        }
    }
    failures.sort_by(|a, b| (a.length, a.delta).partial_cmp(&(b.length, b.delta)).unwrap());

    let series = deltas2
        .iter()
        .map(|&d2| {
            let mut points = Vec::new();
            for &l in &sizes {
                let (Some(a), Some(b)) = (
                    states.get(&(l, delta1.to_bits())),
                    states.get(&(l, d2.to_bits())),
                ) else {
                    continue;
                };
                points.push(SeriesPoint {
                    length: l,
                    fidelity: a.vector.overlap(&b.vector)?,
                    energy1: a.energy,
                    energy2: b.energy,
                    residual1: a.residual,
                    residual2: b.residual,
                });
            }
            FidelitySeries::new(
                SeriesLabel::Xxz {
                    delta1,
                    delta2: d2,
                    bc,
                },
                points,
                settings.tol,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { series, failures })
}
