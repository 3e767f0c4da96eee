//! Critical–critical XXZ fidelities and the extracted g-factor against the
//! free-boson prediction.
//!
//! ```bash
//! cargo run --release --example xxz_fidelity -- 0.2 18
//! ```

use gfid::bcft;
use gfid::fidelity::{self, SolverSettings};
use gfid::xxz::BoundaryCondition;

fn main() -> gfid::Result<()> {
    let mut args = std::env::args().skip(1);
    let delta1: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.2);
    let lmax: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(16);
    let lengths: Vec<usize> = (8..=lmax).step_by(2).collect();
    let deltas2 = [-0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8];

    let start = std::time::Instant::now();
    let settings = SolverSettings::default();
    let series = fidelity::sweep(delta1, &deltas2, BoundaryCondition::Periodic, &lengths, &settings)?;
    println!("delta2      g_ed        g_bcft      rel.err    stderr(ln g)");
    for s in &series {
        let fit = fidelity::extract_g(s)?;
        let delta2 = match s.label {
            fidelity::SeriesLabel::Xxz { delta2, .. } => delta2,
            _ => unreachable!(),
        };
        let predicted = bcft::g_critical_xxz(delta1, delta2)?;
        println!(
            "{delta2:6.2}  {:10.7}  {:10.7}  {:+9.2e}  {:9.2e}",
            fit.g(),
            predicted,
            fit.g() / predicted - 1.0,
            fit.stderr_ln_g
        );
    }
    println!("L = {lengths:?}, {:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}
