//! Toroidal closure of the XXZ ring: the seam bond turns into a pairing term
//! and the O(1) factor disappears, `g = 1`.
//!
//! ```bash
//! cargo run --release --example toroidal -- 14
//! ```

use gfid::fidelity::{self, SolverSettings};
use gfid::xxz::BoundaryCondition;

fn main() -> gfid::Result<()> {
    let lmax: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(14);
    let lengths: Vec<usize> = (8..=lmax).step_by(2).collect();
    let deltas2 = [-0.6, -0.4, -0.2, 0.0, 0.4, 0.6];
    let bc = BoundaryCondition::Toroidal(0.0);

    let series = fidelity::sweep(0.2, &deltas2, bc, &lengths, &SolverSettings::default())?;
    println!("delta2   g_ed        |g-1|      f");
    for (d2, s) in deltas2.iter().zip(&series) {
        let fit = fidelity::extract_g(s)?;
        println!("{d2:6.2}  {:10.7}  {:9.2e}  {:+.3e}", fit.g(), (fit.g() - 1.0).abs(), fit.f);
    }
    Ok(())
}
