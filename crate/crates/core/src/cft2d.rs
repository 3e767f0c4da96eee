//! Continuum torus and rectangle quantities for the quantum vertex model.
//!
//! On an `L₁ × L₂` torus with real nome `q = exp(−2π L₁/L₂)` the compact boson
//! partition function is `Z(λ) = |η(q)|^{−2} I(λ)`. The `η` factors cancel in
//! fidelity ratios, leaving the instanton sums
//!
//! ```text
//! I(λ) = Σ_{n,m} q^{n²/(4πλ) + πλ m²}
//! ```
//!
//! and the universal factor `I(Λ) / √(I(λ) I(λ′))`.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Below this exponent a theta sum is evaluated in its Jacobi-dual form.
const DUAL_THRESHOLD: f64 = 0.05;

pub fn nome(aspect: f64) -> Result<f64> {
    if !(aspect > 0.0 && aspect.is_finite()) {
        return Err(Error::domain("aspect", aspect, "> 0"));
    }
    Ok((-2.0 * PI * aspect).exp())
}

fn check_nome(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("q", q, "(0, 1)"))
    }
}

/// `η(q) = q^{1/24} Π_{n≥1} (1 − qⁿ)`, truncated once the remaining tail is
/// below `1e-16` in the logarithm.
pub fn dedekind_eta(q: f64) -> Result<f64> {
    check_nome(q)?;
    let mut ln_prod = q.ln() / 24.0;
    let mut qn = q;
    while qn / (1.0 - q) >= 1e-17 {
        ln_prod += (-qn).ln_1p();
        qn *= q;
    }
    Ok(ln_prod.exp())
}

/// `η(q)` with exactly `factors` terms of the product.
pub fn dedekind_eta_truncated(q: f64, factors: usize) -> Result<f64> {
    check_nome(q)?;
    let mut ln_prod = q.ln() / 24.0;
    let mut qn = q;
    for _ in 0..factors {
        ln_prod += (-qn).ln_1p();
        qn *= q;
    }
    Ok(ln_prod.exp())
}

/// `Σ_{n∈ℤ} e^{−a n²}` for `a > 0`.
pub fn theta_sum(a: f64) -> f64 {
    if a < DUAL_THRESHOLD {
        // Jacobi: Σ e^{−a n²} = √(π/a) Σ e^{−π² k²/a}
        (PI / a).sqrt() * theta_direct(PI * PI / a)
    } else {
        theta_direct(a)
    }
}

fn theta_direct(a: f64) -> f64 {
    let mut total = 1.0;
    let mut n = 1u64;
    loop {
        let term = 2.0 * (-a * (n * n) as f64).exp();
        total += term;
        if term < 1e-17 * total {
            return total;
        }
        n += 1;
    }
}

/// `1 + 2 Σ_{n=1}^{terms} e^{−a n²}`, no dual switch.
pub fn theta_sum_fixed(a: f64, terms: usize) -> f64 {
    1.0 + 2.0 * (1..=terms).map(|n| (-a * (n * n) as f64).exp()).sum::<f64>()
}

/// Compact-boson winding/momentum sum at real nome,
/// `(Σ_n q^{n²/(4πλ)}) (Σ_m q^{πλm²})`.
pub fn instanton_sum(lam: f64, q: f64) -> Result<f64> {
    if !(lam > 0.0 && lam.is_finite()) {
        return Err(Error::domain("lambda", lam, "> 0"));
    }
    check_nome(q)?;
    let t = -q.ln();
    Ok(theta_sum(t / (4.0 * PI * lam)) * theta_sum(PI * lam * t))
}

/// Coupling of vertex weight `c` (`a = b = 1`, `d = 0`), solving
/// `c⁴/2 − 1 = −cos(2π²λ)` on the principal branch: `λ = asin(c²/2)/π²`.
pub fn lambda_of_c(c: f64) -> Result<f64> {
    if !(c > 0.0 && c < SQRT_2) {
        return Err(Error::domain("c", c, "(0, sqrt 2)"));
    }
    Ok((c * c / 2.0).asin() / (PI * PI))
}

/// Coupling `Λ` of the cross weight `cc′`, from `(cc′)²/2 − 1 = −cos(2π²Λ)`.
pub fn lambda_of_pair(c: f64, c_prime: f64) -> Result<f64> {
    let w = c * c_prime;
    if !(c > 0.0 && c_prime > 0.0 && w < 2.0) {
        return Err(Error::domain("c c'", w, "(0, 2)"));
    }
    Ok((w / 2.0).asin() / (PI * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CftPoint {
    pub c: f64,
    pub c_prime: f64,
    pub lam: f64,
    pub lam_prime: f64,
    /// Coupling of the cross term `cc′`.
    pub cross_lam: f64,
    pub aspect: f64,
    pub q: f64,
}

impl CftPoint {
    pub fn new(c: f64, c_prime: f64, aspect: f64) -> Result<Self> {
        Ok(CftPoint {
            c,
            c_prime,
            lam: lambda_of_c(c)?,
            lam_prime: lambda_of_c(c_prime)?,
            cross_lam: lambda_of_pair(c, c_prime)?,
            aspect,
            q: nome(aspect)?,
        })
    }

    /// `I(Λ) / √(I(λ) I(λ′))`.
    pub fn g(&self) -> Result<f64> {
        let num = instanton_sum(self.cross_lam, self.q)?;
        let den = instanton_sum(self.lam, self.q)? * instanton_sum(self.lam_prime, self.q)?;
        Ok(num / den.sqrt())
    }
}

/// O(1) fidelity factor of the quantum vertex model on a torus.
pub fn g_eight_vertex(c: f64, c_prime: f64, aspect: f64) -> Result<f64> {
    CftPoint::new(c, c_prime, aspect)?.g()
}

/// Universal part `¼ ln L₂ − ½ ln η(q)` of the free-boson free energy on an
/// `L₁ × L₂` rectangle with uniform Dirichlet or Neumann edges. It carries no
/// coupling dependence, so such geometries produce no O(1) fidelity term.
pub fn rectangle_universal_term(l1: f64, l2: f64) -> Result<f64> {
    if !(l1 > 0.0 && l1.is_finite()) {
        return Err(Error::domain("L1", l1, "> 0"));
    }
    if !(l2 > 0.0 && l2.is_finite()) {
        return Err(Error::domain("L2", l2, "> 0"));
    }
    let q = nome(l1 / l2)?;
    Ok(0.25 * l2.ln() - 0.5 * dedekind_eta(q)?.ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub c: f64,
    pub c_prime: f64,
    /// `None` outside the disordered region.
    pub g: Option<f64>,
}

/// `g_eight_vertex` on the product grid `weights × weights`, row-major in `c`.
pub fn surface(weights: &[f64], aspect: f64) -> Vec<SurfacePoint> {
    let cells: Vec<(f64, f64)> = weights
        .iter()
        .flat_map(|&c| weights.iter().map(move |&cp| (c, cp)))
        .collect();
    cells
        .par_iter()
        .map(|&(c, c_prime)| SurfacePoint {
            c,
            c_prime,
            g: g_eight_vertex(c, c_prime, aspect).ok(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ETA_AT_I: f64 = 0.768_225_422_326_056_7;

    #[test]
    fn eta_values() {
        let q = (-2.0 * PI).exp();
        assert!((dedekind_eta(q).unwrap() - ETA_AT_I).abs() < 1e-15);
        assert!((dedekind_eta(0.1).unwrap() - 0.808_589_818_356_605_9).abs() < 1e-15);
        let tiny = 1e-30;
        assert!((dedekind_eta(tiny).unwrap() / tiny.powf(1.0 / 24.0) - 1.0).abs() < 1e-15);
        assert!(dedekind_eta(0.0).is_err());
        assert!(dedekind_eta(1.0).is_err());
    }

    #[test]
    fn eta_stable_under_doubling() {
        for q in [0.1f64, 0.5, 0.9] {
            let n = (40.0 / -q.ln()).ceil() as usize;
            let a = dedekind_eta_truncated(q, n).unwrap();
            let b = dedekind_eta_truncated(q, 2 * n).unwrap();
            assert!((a - b).abs() < 1e-14 * a, "q={q}");
            assert!((dedekind_eta(q).unwrap() - b).abs() < 1e-14 * b);
        }
    }

    #[test]
    fn theta_dual_form_is_continuous() {
        for a in [0.01, 0.049, 0.051, 0.2, 3.0] {
            let fixed = theta_sum_fixed(a, 2000);
            assert!((theta_sum(a) - fixed).abs() < 1e-13 * fixed, "a={a}");
        }
    }

    #[test]
    fn instanton_reference_value() {
        // mpmath nsum
        let q = (-2.0 * PI).exp();
        let v = instanton_sum(0.08, q).unwrap();
        assert!((v - 1.421_386_405_488_822_9).abs() < 1e-14);
    }

    #[test]
    fn weight_maps() {
        let c = 2f64.powf(0.25);
        assert!((lambda_of_c(c).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-16);
        let near = SQRT_2 * (1.0 - 1e-12);
        assert!((lambda_of_c(near).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-6);
        for i in 1..100 {
            let c = SQRT_2 * i as f64 / 100.0;
            let lam = lambda_of_c(c).unwrap();
            assert_eq!(lambda_of_pair(c, c).unwrap(), lam);
            assert!((-(2.0 * PI * PI * lam).cos() - (c.powi(4) / 2.0 - 1.0)).abs() < 1e-14);
            assert!(lam > 0.0 && lam < 1.0 / (2.0 * PI));
        }
        assert!(lambda_of_c(0.0).is_err());
        assert!(lambda_of_c(SQRT_2).is_err());
        assert!(lambda_of_pair(1.5, 1.4).is_err());
    }

    #[test]
    fn eight_vertex_reference_values() {
        // mpmath evaluation of the defining sums
        let g = g_eight_vertex(0.8, 1.2, 1.0).unwrap();
        assert!((g - 1.006_825_558_688_378_8).abs() < 1e-13);
        let g = g_eight_vertex(0.5, 1.0, 1.0).unwrap();
        assert!((g - 1.006_713_285_324_757_9).abs() < 1e-13);
        let g = g_eight_vertex(0.3, 1.3, 2.0).unwrap();
        assert!((g - 0.961_756_271_604_291_4).abs() < 1e-13);
    }

    #[test]
    fn rectangle_term() {
        let v = rectangle_universal_term(100.0, 100.0).unwrap();
        assert!((v - 1.283_128_581_621_481_8).abs() < 1e-14);
        let a = rectangle_universal_term(30.0, 60.0).unwrap();
        let b = rectangle_universal_term(60.0, 120.0).unwrap();
        assert!((b - a - 0.25 * 2f64.ln()).abs() < 1e-14);
        assert!(rectangle_universal_term(0.0, 1.0).is_err());
        assert!(rectangle_universal_term(1.0, -1.0).is_err());
    }

    #[test]
    fn surface_marks_invalid_cells() {
        let s = surface(&[0.5, 1.0, 1.5], 1.0);
        assert_eq!(s.len(), 9);
        assert!(s[0].g.is_some());
        assert!(s[8].g.is_none());
        assert!(s[2].g.is_none());
    }
}
