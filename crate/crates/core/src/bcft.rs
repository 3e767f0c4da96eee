//! Closed-form free-boson predictions for the O(1) fidelity factor.
//!
//! Couplings are the stiffness `λ` of `S = (λ/2)∫(∂φ)²` with `φ ≡ φ + 2π`, or
//! equivalently the Luttinger parameter `K = 1/(4πλ)`.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    /// Stiffness λ.
    pub lam: f64,
    /// Luttinger parameter K.
    pub k: f64,
}

impl Coupling {
    pub fn from_lambda(lam: f64) -> Result<Self> {
        check_positive("lambda", lam)?;
        Ok(Coupling {
            lam,
            k: 1.0 / (4.0 * PI * lam),
        })
    }

    pub fn from_luttinger(k: f64) -> Result<Self> {
        check_positive("K", k)?;
        Ok(Coupling {
            lam: 1.0 / (4.0 * PI * k),
            k,
        })
    }
}

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, x, "> 0"))
    }
}

/// Continuum coupling of the critical XXZ chain, `λ = (π − arccos Δ)/(2π²)`.
pub fn lambda_of_delta(delta: f64) -> Result<Coupling> {
    if !(delta > -1.0 && delta <= 1.0) {
        return Err(Error::domain("delta", delta, "(-1, 1]"));
    }
    Coupling::from_lambda((PI - delta.acos()) / (2.0 * PI * PI))
}

/// Fidelity g-factor between two critical free bosons,
/// `g = √((λ₁+λ₂) / (2√(λ₁λ₂)))`.
pub fn g_critical(lam1: f64, lam2: f64) -> Result<f64> {
    check_positive("lambda1", lam1)?;
    check_positive("lambda2", lam2)?;
    let (lo, hi) = if lam1 <= lam2 { (lam1, lam2) } else { (lam2, lam1) };
    let r = (hi / lo).sqrt();
    Ok(((r + 1.0 / r) / 2.0).sqrt())
}

/// `g_critical` for two anisotropies of the critical XXZ chain.
pub fn g_critical_xxz(delta1: f64, delta2: f64) -> Result<f64> {
    g_critical(lambda_of_delta(delta1)?.lam, lambda_of_delta(delta2)?.lam)
}

/// Dirichlet boundary degeneracy `2^{−1/2} (πλ)^{−1/4}`.
pub fn g_dirichlet(lam: f64) -> Result<f64> {
    check_positive("lambda", lam)?;
    Ok((PI * lam).powf(-0.25) / SQRT_2)
}

/// Neumann boundary degeneracy `(πλ)^{1/4}`.
pub fn g_neumann(lam: f64) -> Result<f64> {
    check_positive("lambda", lam)?;
    Ok((PI * lam).powf(0.25))
}

/// Couplings seen by the Neumann and Dirichlet species after folding the
/// interface: `(λ₁+λ₂, λ₁λ₂/(λ₁+λ₂))`.
pub fn folded_couplings(lam1: f64, lam2: f64) -> Result<(f64, f64)> {
    check_positive("lambda1", lam1)?;
    check_positive("lambda2", lam2)?;
    let sum = lam1 + lam2;
    Ok((sum, lam1 * lam2 / sum))
}

/// `g_D(λ_D) · g_N(λ_N)` from the folded couplings.
pub fn g_folded(lam1: f64, lam2: f64) -> Result<f64> {
    let (lam_n, lam_d) = folded_couplings(lam1, lam2)?;
    Ok(g_dirichlet(lam_d)? * g_neumann(lam_n)?)
}

/// One side gapped in the Néel phase: the two symmetry-broken states each
/// impose a Dirichlet condition of weight `K^{1/4}`, combined with amplitude
/// `1/√2`, giving `√2 K^{1/4}`.
pub fn g_critical_massive(k: f64) -> Result<f64> {
    check_positive("K", k)?;
    Ok(SQRT_2 * k.powf(0.25))
}

/// Antiperiodic field (toroidal spin-chain closure): no O(1) term.
pub fn g_antiperiodic() -> f64 {
    1.0
}

/// `(Δ₂, g)` along a grid of second anisotropies.
pub fn critical_curve(delta1: f64, deltas2: &[f64]) -> Result<Vec<(f64, f64)>> {
    deltas2
        .iter()
        .map(|&d| Ok((d, g_critical_xxz(delta1, d)?)))
        .collect()
}

/// `(Δ₂, √2 K(Δ₂)^{1/4})` for the massive inset.
pub fn massive_curve(deltas2: &[f64]) -> Result<Vec<(f64, f64)>> {
    deltas2
        .iter()
        .map(|&d| Ok((d, g_critical_massive(lambda_of_delta(d)?.k)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn coupling_map_values() {
        let c = lambda_of_delta(0.0).unwrap();
        assert_relative_eq!(c.lam, 1.0 / (4.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(c.k, 1.0, max_relative = 1e-14);
        let c = lambda_of_delta(1.0).unwrap();
        assert_relative_eq!(c.lam, 1.0 / (2.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(c.k, 0.5, max_relative = 1e-14);
        // mpmath, 30 digits
        assert_relative_eq!(
            lambda_of_delta(0.2).unwrap().lam,
            0.089_778_382_981_065_872,
            max_relative = 1e-14
        );
    }

    #[test]
    fn coupling_map_domain() {
        for d in [-1.0, -1.5, 1.0 + 1e-12, f64::NAN] {
            assert!(lambda_of_delta(d).is_err(), "{d}");
        }
        assert!(Coupling::from_lambda(0.0).is_err());
        assert!(Coupling::from_luttinger(-1.0).is_err());
    }

    #[test]
    fn critical_g_values() {
        assert_eq!(g_critical(0.3, 0.3).unwrap(), 1.0);
        assert_relative_eq!(g_critical(0.1, 0.4).unwrap(), 1.25f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(
            g_critical_xxz(0.2, 0.8).unwrap(),
            1.007_358_305_618_189_1,
            max_relative = 1e-13
        );
        assert!(g_critical(0.0, 1.0).is_err());
        assert!(g_critical(1.0, -2.0).is_err());
    }

    #[test]
    fn boundary_degeneracies() {
        let lam = 1.0 / PI;
        assert_relative_eq!(g_neumann(lam).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(g_dirichlet(lam).unwrap(), 1.0 / SQRT_2, max_relative = 1e-15);
        assert!(g_dirichlet(0.0).is_err());
        assert!(g_neumann(-1.0).is_err());
    }

    #[test]
    fn massive_and_antiperiodic() {
        assert_relative_eq!(g_critical_massive(1.0).unwrap(), SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(
            g_critical_massive(0.5).unwrap(),
            1.189_207_115_002_721,
            max_relative = 1e-14
        );
        assert!(g_critical_massive(0.0).is_err());
        assert_eq!(g_antiperiodic(), 1.0);
    }

    #[test]
    fn coupling_map_increasing() {
        let grid: Vec<f64> = (-99..=100).map(|i| i as f64 / 100.0).collect();
        let lams: Vec<f64> = grid.iter().map(|&d| lambda_of_delta(d).unwrap().lam).collect();
        assert!(lams.windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #[test]
        fn g_critical_properties(a in 1e-3f64..10.0, b in 1e-3f64..10.0, s in 1e-2f64..1e2) {
            let g = g_critical(a, b).unwrap();
            prop_assert!(g >= 1.0);
            prop_assert_eq!(g, g_critical(b, a).unwrap());
            prop_assert!((g_critical(s * a, s * b).unwrap() - g).abs() < 1e-14);
            let via_k = g_critical(
                Coupling::from_luttinger(1.0 / (4.0 * PI * a)).unwrap().lam,
                Coupling::from_luttinger(1.0 / (4.0 * PI * b)).unwrap().lam,
            ).unwrap();
            prop_assert!((via_k - g).abs() < 1e-14);
        }

        #[test]
        fn folding_identity(a in 1e-3f64..10.0, b in 1e-3f64..10.0) {
            let folded = g_folded(a, b).unwrap();
            prop_assert!((folded - g_critical(a, b).unwrap()).abs() < 1e-13);
        }

        #[test]
        fn dirichlet_neumann_product(lam in 1e-4f64..1e2) {
            let p = g_dirichlet(lam).unwrap() * g_neumann(lam).unwrap();
            prop_assert!((p - 1.0 / SQRT_2).abs() < 1e-15);
        }

        #[test]
        fn coupling_round_trip(delta in -0.999f64..=1.0) {
            let c = lambda_of_delta(delta).unwrap();
            prop_assert!((c.lam * c.k * 4.0 * PI - 1.0).abs() < 1e-14);
            prop_assert!(c.lam > 0.0 && c.lam <= 1.0 / (2.0 * PI) + 1e-16);
        }
    }
}
