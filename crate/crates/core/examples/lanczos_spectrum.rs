//! Lowest two levels of the periodic XXZ ring in the half-filled sector,
//! with the finite-size gap closing as `1/L` on the critical line.
//!
//! ```bash
//! cargo run --release --example lanczos_spectrum -- 0.5
//! ```

use gfid::eigensolver::{self, LanczosOptions};
use gfid::spin_basis::SectorBasis;
use gfid::xxz::{XxzHamiltonian, XxzParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let delta: f64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0.5);

    println!(" L      dim      E0/L          gap      L*gap   iters");
    for l in (8..=18).step_by(2) {
        let basis = SectorBasis::half_filled(l)?;
        let h = XxzHamiltonian::<f64>::new(XxzParams::periodic(l, delta), &basis)?;
        let opts = LanczosOptions::for_dim(basis.dim());
        let (e0, e1) = eigensolver::lowest_two(&h, &opts)?;
        let gap = e1.energy - e0.energy;
        println!(
            "{l:2}  {:7}  {:+.10}  {gap:.6}  {:.4}  {:5}",
            basis.dim(),
            e0.energy / l as f64,
            l as f64 * gap,
            e0.iterations
        );
    }
    Ok(())
}
