//! One side deep in the Néel phase. The O(1) factor becomes `√2 K^{1/4}` of
//! the critical side.
//!
//! ```bash
//! cargo run --release --example critical_massive -- 10 16
//! ```

use gfid::bcft;
use gfid::fidelity::{self, SolverSettings};
use gfid::xxz::BoundaryCondition;

fn main() -> gfid::Result<()> {
    let mut args = std::env::args().skip(1);
    let delta1: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(10.0);
    let lmax: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(16);
    let lengths: Vec<usize> = (8..=lmax).step_by(2).collect();
    let deltas2 = [-0.5, 0.0, 0.5];

    let series = fidelity::sweep(
        delta1,
        &deltas2,
        BoundaryCondition::Periodic,
        &lengths,
        &SolverSettings::default(),
    )?;
    println!("delta2   g_ed        sqrt2 K^1/4  rel.err");
    for (&d2, s) in deltas2.iter().zip(&series) {
        let fit = fidelity::extract_g(s)?;
        let predicted = bcft::g_critical_massive(bcft::lambda_of_delta(d2)?.k)?;
        println!(
            "{d2:6.2}  {:10.7}  {:10.7}   {:+.2e}",
            fit.g(),
            predicted,
            fit.g() / predicted - 1.0
        );
        for p in &s.points {
            log::debug!("L={} F={:.12e} res=({:.1e},{:.1e})", p.length, p.fidelity, p.residual1, p.residual2);
        }
    }
    Ok(())
}
