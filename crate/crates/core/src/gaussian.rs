//! Exact overlaps of harmonic-ring ground states.
//!
//! The ring `H = Σ π²/(2λ) + (λ/2) Σ (φᵢ − φᵢ₊₁)²` has the Gaussian ground
//! state `ψ(φ) ∝ exp(−½ φᵀAφ)` with width `A = λ √K`, where `K` is the ring
//! Laplacian. The zero mode is not normalizable and is projected out, leaving
//! `L − 1` modes. For two Gaussians
//!
//! ```text
//! F = det(A₁)^{1/4} det(A₂)^{1/4} det((A₁+A₂)/2)^{−1/2}
//! ```
//!
//! which for `A ∝ λ` collapses to `r^{(L−1)/2}`, `r = 2√(λ₁λ₂)/(λ₁+λ₂)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::fidelity::{self, FidelitySeries, GFactorEstimate, SeriesLabel, SeriesPoint};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct GaussianState {
    pub length: usize,
    pub lam: f64,
    /// `λ√K` on the full `L`-dimensional space; annihilates the constant vector.
    pub width: DMatrix<f64>,
}

impl GaussianState {
    pub fn new(length: usize, lam: f64) -> Result<Self> {
        if length < 2 {
            return Err(Error::InvalidLength(length));
        }
        if !(lam > 0.0 && lam.is_finite()) {
            return Err(Error::domain("lambda", lam, "> 0"));
        }
        Ok(GaussianState {
            length,
            lam,
            width: sqrt_ring_laplacian(length) * lam,
        })
    }

    /// Width restricted to the complement of the constant vector.
    pub fn reduced_width(&self) -> DMatrix<f64> {
        let h = zero_mode_free_basis(self.length);
        &h * &self.width * h.transpose()
    }
}

/// Ring Laplacian: 2 on the diagonal, −1 between neighbours.
pub fn ring_laplacian(length: usize) -> DMatrix<f64> {
    DMatrix::from_fn(length, length, |i, j| {
        let d = (i + length - j) % length;
        if d == 0 {
            2.0
        } else if d == 1 || d == length - 1 {
            -1.0
        } else {
            0.0
        }
    })
}

/// `√K` from the circulant spectrum `μ_k = 2 − 2 cos(2πk/L)`.
pub fn sqrt_ring_laplacian(length: usize) -> DMatrix<f64> {
    let n = length as f64;
    let roots: Vec<f64> = (0..length)
        .map(|k| (2.0 - 2.0 * (2.0 * PI * k as f64 / n).cos()).max(0.0).sqrt())
        .collect();
    let kernel: Vec<f64> = (0..length)
        .map(|d| {
            roots
                .iter()
                .enumerate()
                .map(|(k, r)| r * (2.0 * PI * (k * d) as f64 / n).cos())
                .sum::<f64>()
                / n
        })
        .collect();
    DMatrix::from_fn(length, length, |i, j| {
        let d = (i + length - j) % length;
        kernel[d.min(length - d)]
    })
}

/// Helmert rows: an orthonormal basis of the vectors summing to zero.
pub fn zero_mode_free_basis(length: usize) -> DMatrix<f64> {
    DMatrix::from_fn(length - 1, length, |row, col| {
        let k = row + 1;
        let norm = ((k * (k + 1)) as f64).sqrt();
        if col < k {
            1.0 / norm
        } else if col == k {
            -(k as f64) / norm
        } else {
            0.0
        }
    })
}

fn log_det_spd(m: DMatrix<f64>) -> Result<f64> {
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::domain("width matrix", 0.0, "positive definite"))?;
    Ok(chol.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum())
}

/// Overlap of two normalized Gaussians with width matrices `a1`, `a2`.
pub fn overlap_of_widths(a1: &DMatrix<f64>, a2: &DMatrix<f64>) -> Result<f64> {
    if a1.shape() != a2.shape() {
        return Err(Error::DimensionMismatch {
            expected: a1.nrows(),
            actual: a2.nrows(),
        });
    }
    let mean = (a1 + a2) * 0.5;
    let ln_f = 0.25 * log_det_spd(a1.clone())? + 0.25 * log_det_spd(a2.clone())?
        - 0.5 * log_det_spd(mean)?;
    Ok(ln_f.exp())
}

/// Ground-state fidelity of two rings via determinants on the zero-mode-free
/// subspace.
pub fn gaussian_overlap(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    if s1.length != s2.length {
        return Err(Error::DimensionMismatch {
            expected: s1.length,
            actual: s2.length,
        });
    }
    overlap_of_widths(&s1.reduced_width(), &s2.reduced_width())
}

/// `Π_{k≠0} √(2√(λ₁λ₂)/(λ₁+λ₂)) = r^{(L−1)/2}`.
pub fn mode_product(lam1: f64, lam2: f64, length: usize) -> f64 {
    let r = 2.0 * (lam1 * lam2).sqrt() / (lam1 + lam2);
    r.powf((length as f64 - 1.0) / 2.0)
}

/// Determinant-route fidelities for every size.
pub fn oracle_series(lam1: f64, lam2: f64, lengths: &[usize]) -> Result<FidelitySeries> {
    let points = lengths
        .iter()
        .map(|&l| {
            let f = gaussian_overlap(&GaussianState::new(l, lam1)?, &GaussianState::new(l, lam2)?)?;
            Ok(SeriesPoint::exact(l, f))
        })
        .collect::<Result<Vec<_>>>()?;
    FidelitySeries::new(SeriesLabel::Gaussian { lam1, lam2 }, points, 0.0)
}

/// Fits the determinant-route series. The fit is exact: `c₁ = 0` and
/// `f = ln g`.
pub fn oracle_g(lam1: f64, lam2: f64, lengths: &[usize]) -> Result<GFactorEstimate> {
    fidelity::extract_g(&oracle_series(lam1, lam2, lengths)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcft;

    #[test]
    fn width_annihilates_constant_and_squares_to_laplacian() {
        for l in [4, 7, 16] {
            let s = sqrt_ring_laplacian(l);
            let ones = DMatrix::from_element(l, 1, 1.0);
            assert!((&s * &ones).amax() < 1e-13);
            assert!((&s * &s - ring_laplacian(l)).amax() < 1e-13);
            assert!((&s - s.transpose()).amax() < 1e-15);
            let h = zero_mode_free_basis(l);
            assert!((&h * h.transpose() - DMatrix::identity(l - 1, l - 1)).amax() < 1e-14);
            assert!((&h * &ones).amax() < 1e-14);
        }
    }

    #[test]
    fn single_mode_integral() {
        let a1 = DMatrix::from_element(1, 1, 1.0);
        let a2 = DMatrix::from_element(1, 1, 2.0);
        let f = overlap_of_widths(&a1, &a2).unwrap();
        assert!((f - (2.0 * 2f64.sqrt() / 3.0).sqrt()).abs() < 1e-15);
        assert!((f - 0.970_983_5).abs() < 1e-7);
    }

    #[test]
    fn equal_stiffness_is_unity() {
        let s = GaussianState::new(12, 0.7).unwrap();
        assert!((gaussian_overlap(&s, &s).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn determinant_matches_mode_product() {
        for l in [2, 3, 8, 16, 33, 64] {
            let f = gaussian_overlap(
                &GaussianState::new(l, 1.0).unwrap(),
                &GaussianState::new(l, 2.0).unwrap(),
            )
            .unwrap();
            assert!((f - mode_product(1.0, 2.0, l)).abs() < 1e-12, "L={l}");
        }
    }

    #[test]
    fn depends_only_on_ratio() {
        let f = |a: f64, b: f64| {
            gaussian_overlap(
                &GaussianState::new(10, a).unwrap(),
                &GaussianState::new(10, b).unwrap(),
            )
            .unwrap()
        };
        assert!((f(1.0, 3.0) - f(0.02, 0.06)).abs() < 1e-12);
    }

    #[test]
    fn fitted_g_matches_prediction() {
        let lengths: Vec<usize> = (8..=64).step_by(8).collect();
        let e = oracle_g(1.0, 2.0, &lengths).unwrap();
        let g = bcft::g_critical(1.0, 2.0).unwrap();
        assert!((e.g() - 1.029_883_571_953_558_8).abs() < 1e-10);
        assert!((e.ln_g - g.ln()).abs() < 1e-10);
        assert!((e.f - g.ln()).abs() < 1e-10);
        assert!(e.c1.abs() < 1e-9);
        let e = oracle_g(1.0, 4.0, &lengths).unwrap();
        assert!((e.g() - 1.25f64.sqrt()).abs() < 1e-10);
        let e = oracle_g(1.0, 1.0, &lengths).unwrap();
        assert!(e.ln_g.abs() < 1e-12 && e.f.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GaussianState::new(1, 1.0).is_err());
        assert!(GaussianState::new(8, 0.0).is_err());
        let a = GaussianState::new(8, 1.0).unwrap();
        let b = GaussianState::new(10, 1.0).unwrap();
        assert!(gaussian_overlap(&a, &b).is_err());
    }
}
