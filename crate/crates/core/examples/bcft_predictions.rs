//! Closed-form g-factors: the critical pair along Δ2 at fixed Δ1, the
//! critical-massive curve, and the single-boundary entropies that the
//! folding trick reduces to.

use gfid::bcft;

fn main() -> gfid::Result<()> {
    let delta1 = 0.2;
    let lam1 = bcft::lambda_of_delta(delta1)?.lam;
    println!("delta1 = {delta1}, lambda1 = {lam1:.10}");
    println!("delta2    lambda2       K2         g_crit      g_folded    g_massive");
    for i in -4..=4 {
        let d2 = 0.2 * i as f64;
        let c2 = bcft::lambda_of_delta(d2)?;
        println!(
            "{d2:5.1}  {:.8}  {:.8}  {:.10}  {:.10}  {:.8}",
            c2.lam,
            c2.k,
            bcft::g_critical(lam1, c2.lam)?,
            bcft::g_folded(lam1, c2.lam)?,
            bcft::g_critical_massive(c2.k)?
        );
    }
    let (lam, lam_prime) = bcft::folded_couplings(lam1, bcft::lambda_of_delta(0.8)?.lam)?;
    println!(
        "\nfolded couplings for (0.2, 0.8): {lam:.8}, {lam_prime:.8}; g_D = {:.8}, g_N = {:.8}",
        bcft::g_dirichlet(lam)?,
        bcft::g_neumann(lam_prime)?
    );
    println!("antiperiodic seam: g = {}", bcft::g_antiperiodic());
    Ok(())
}
