//! Torus sums against brute-force evaluation.

use std::f64::consts::PI;

use gfid::cft2d::{self, CftPoint};

/// `Σ_{|n|,|m| ≤ cut} q^{n²/(4πλ) + πλ m²}`, largest terms last.
fn double_sum(lam: f64, q: f64, cut: i64) -> f64 {
    let t = -q.ln();
    let mut terms: Vec<f64> = Vec::new();
    for n in -cut..=cut {
        for m in -cut..=cut {
            let e = (n * n) as f64 / (4.0 * PI * lam) + PI * lam * (m * m) as f64;
            terms.push((-t * e).exp());
        }
    }
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

#[test]
fn instanton_sum_factorizes() {
    for lam in [0.02, 0.08, 0.15, 1.0 / (2.0 * PI)] {
        for aspect in [0.5, 1.0, 2.0] {
            let q = cft2d::nome(aspect).unwrap();
            let direct = double_sum(lam, q, 60);
            let v = cft2d::instanton_sum(lam, q).unwrap();
            assert!((v - direct).abs() < 1e-13 * direct, "λ={lam} a={aspect}: {v} vs {direct}");
        }
    }
}

#[test]
fn instanton_duality() {
    let q = cft2d::nome(1.0).unwrap();
    for i in 1..40 {
        let lam = 0.005 * i as f64;
        let a = cft2d::instanton_sum(lam, q).unwrap();
        let b = cft2d::instanton_sum(1.0 / (4.0 * PI * PI * lam), q).unwrap();
        assert!((a - b).abs() < 1e-12 * a, "λ={lam}");
    }
}

#[test]
fn small_nome_limit() {
    for lam in [0.05, 0.1, 0.15] {
        let v = cft2d::instanton_sum(lam, 1e-300).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }
}

#[test]
fn eta_against_long_product() {
    for q in [0.01, 0.3, 0.7] {
        let long = cft2d::dedekind_eta_truncated(q, 5000).unwrap();
        assert!((cft2d::dedekind_eta(q).unwrap() - long).abs() < 1e-14 * long);
    }
}

#[test]
fn eight_vertex_symmetries() {
    let weights: Vec<f64> = (1..=21).map(|i| 1.4 * i as f64 / 22.0).collect();
    for &c in &weights {
        assert_eq!(cft2d::g_eight_vertex(c, c, 1.0).unwrap(), 1.0);
        for &cp in &weights {
            let a = cft2d::g_eight_vertex(c, cp, 1.0).unwrap();
            let b = cft2d::g_eight_vertex(cp, c, 1.0).unwrap();
            assert!((a - b).abs() < 1e-14);
            assert!(a.is_finite() && a > 0.0);
        }
    }
}

#[test]
fn eight_vertex_point_components() {
    let p = CftPoint::new(0.8, 1.2, 1.0).unwrap();
    assert_eq!(p.lam, cft2d::lambda_of_c(0.8).unwrap());
    assert_eq!(p.cross_lam, cft2d::lambda_of_pair(0.8, 1.2).unwrap());
    assert!(p.lam < p.cross_lam && p.cross_lam < p.lam_prime);
    assert!(CftPoint::new(1.5, 1.0, 1.0).is_err());
    assert!(CftPoint::new(1.0, 1.0, 0.0).is_err());
}
