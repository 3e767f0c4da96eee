//! Universal fidelity factor of the quantum eight-vertex model on a torus,
//! over a grid of weights in the disordered region.
//!
//! ```bash
//! cargo run --release --example eight_vertex_surface -- 2.0
//! ```

use gfid::cft2d;

fn main() -> gfid::Result<()> {
    let aspect: f64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1.0);
    let q = cft2d::nome(aspect)?;
    println!("aspect {aspect}: q = {q:.6e}, eta(q) = {:.15}", cft2d::dedekind_eta(q)?);

    let weights: Vec<f64> = (1..=7).map(|i| 0.2 * i as f64).collect();
    print!("c \\ c'");
    for cp in &weights {
        print!("{cp:>9.1}");
    }
    println!();
    let surface = cft2d::surface(&weights, aspect);
    for row in surface.chunks(weights.len()) {
        print!("{:6.1}", row[0].c);
        for p in row {
            match p.g {
                Some(g) => print!("{g:9.5}"),
                None => print!("{:>9}", "-"),
            }
        }
        println!();
    }
    Ok(())
}
