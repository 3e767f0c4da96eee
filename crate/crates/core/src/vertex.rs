//! Six-vertex partition functions on small tori (`a = b = 1`, `d = 0`).
//!
//! `Z(w) = Σ_C w^{n_c(C)}` is a polynomial in the weight `w` with
//! nonnegative integer coefficients. The quantum vertex-model ground state
//! `|Ψ(c²)⟩ ∝ Σ_C c^{n_c(C)} |C⟩` then has overlaps
//!
//! ```text
//! ⟨Ψ(c²)|Ψ(c′²)⟩ = Z(cc′) / √(Z(c²) Z(c′²)).
//! ```
//!
//! Arrows are encoded as bits, `1` pointing right or up. The ice rule is
//! line conservation at each vertex: `left + bottom = right + top`. A vertex
//! is of `c` type when its horizontal arrows differ.

use rayon::prelude::*;

use crate::{Error, Result};

pub const MAX_SIDE: usize = 6;

/// Coefficients `k_n` of `Z(w) = Σ k_n wⁿ`.
pub type Polynomial = Vec<u128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexLattice {
    /// Sites per row (transfer-matrix width).
    pub l1: usize,
    /// Number of rows.
    pub l2: usize,
}

impl VertexLattice {
    pub fn new(l1: usize, l2: usize) -> Result<Self> {
        if l1 == 0 || l2 == 0 || l1 > MAX_SIDE || l2 > MAX_SIDE {
            return Err(Error::LatticeTooLarge { l1, l2 });
        }
        Ok(VertexLattice { l1, l2 })
    }

    pub fn sites(&self) -> usize {
        self.l1 * self.l2
    }

    /// Row-to-row transfer matrix as `(in, out, polynomial)` entries.
    pub fn transfer_matrix(&self) -> Vec<(usize, usize, Polynomial)> {
        let width = self.l1;
        let states = 1usize << width;
        let mut entries = Vec::new();
        for below in 0..states {
            for above in 0..states {
                let mut poly: Polynomial = vec![0; width + 1];
                let mut any = false;
                for h0 in 0..2u8 {
                    if let Some(n_c) = row_c_count(width, below, above, h0) {
                        poly[n_c] += 1;
                        any = true;
                    }
                }
                if any {
                    entries.push((below, above, poly));
                }
            }
        }
        entries
    }

    /// `Tr T^{L2}` as a polynomial in the `c` weight.
    pub fn partition_polynomial(&self) -> Polynomial {
        let states = 1usize << self.l1;
        let degree = self.sites();
        let tm = self.transfer_matrix();
        let diagonal: Vec<Polynomial> = (0..states)
            .into_par_iter()
            .map(|start| {
                let mut vec: Vec<Polynomial> = vec![vec![0; degree + 1]; states];
                vec[start][0] = 1;
                for _ in 0..self.l2 {
                    let mut next: Vec<Polynomial> = vec![vec![0; degree + 1]; states];
                    for (below, above, p) in &tm {
                        let src = &vec[*below];
                        if src.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let dst = &mut next[*above];
                        for (i, &a) in src.iter().enumerate().filter(|(_, a)| **a != 0) {
                            for (j, &b) in p.iter().enumerate().filter(|(_, b)| **b != 0) {
                                dst[i + j] += a * b;
                            }
                        }
                    }
                    vec = next;
                }
                std::mem::take(&mut vec[start])
            })
            .collect();
        let mut z = vec![0u128; degree + 1];
        for p in diagonal {
            for (zi, pi) in z.iter_mut().zip(p) {
                *zi += pi;
            }
        }
        while z.len() > 1 && z[z.len() - 1] == 0 {
            z.pop();
        }
        z
    }

    /// `Z_2D(w)`.
    pub fn z2d(&self, weight: f64) -> Result<f64> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::domain("weight", weight, ">= 0"));
        }
        Ok(evaluate(&self.partition_polynomial(), weight))
    }

    /// `Z(cc′) / √(Z(c²) Z(c′²))`.
    pub fn lattice_fidelity(&self, c: f64, c_prime: f64) -> Result<f64> {
        lattice_fidelity_from(&self.partition_polynomial(), c, c_prime)
    }
}

/// Overlap from a precomputed partition polynomial.
pub fn lattice_fidelity_from(z: &[u128], c: f64, c_prime: f64) -> Result<f64> {
    for (what, x) in [("c", c), ("c'", c_prime)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(what, x, "> 0"));
        }
    }
    let cross = evaluate(z, c * c_prime);
    let norm = (evaluate(z, c * c) * evaluate(z, c_prime * c_prime)).sqrt();
    Ok(cross / norm)
}

/// Number of `c` vertices in a row, or `None` if the row violates the ice
/// rule, given the arrows below and above and the periodic horizontal arrow.
fn row_c_count(width: usize, below: usize, above: usize, h0: u8) -> Option<usize> {
    let mut h = h0 as i32;
    let mut n_c = 0;
    for i in 0..width {
        let v_in = ((below >> i) & 1) as i32;
        let v_out = ((above >> i) & 1) as i32;
        let h_out = h + v_in - v_out;
        if !(0..=1).contains(&h_out) {
            return None;
        }
        if h_out != h {
            n_c += 1;
        }
        h = h_out;
    }
    (h == h0 as i32).then_some(n_c)
}

/// Horner evaluation of an integer polynomial.
pub fn evaluate(poly: &[u128], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &k| acc * x + k as f64)
}

/// Direct enumeration of arrow configurations, independent of the transfer
/// matrix.
pub mod enumeration {
    use super::{Polynomial, VertexLattice};

    /// `n_c` of every ice-rule configuration, in depth-first order over the
    /// `2 L₁ L₂` edge variables.
    pub fn configurations(lattice: &VertexLattice) -> Vec<u32> {
        let (l1, l2) = (lattice.l1, lattice.l2);
        let n = l1 * l2;
        let h = |r: usize, c: usize| (r % l2) * l1 + (c % l1);
        let v = |r: usize, c: usize| n + (r % l2) * l1 + (c % l1);
        // edges of each vertex: left, bottom, right, top
        let vertices: Vec<[usize; 4]> = (0..l2)
            .flat_map(|r| (0..l1).map(move |c| (r, c)))
            .map(|(r, c)| [h(r, c), v(r, c), h(r, c + 1), v(r + 1, c)])
            .collect();
        let mut completes: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
        for (k, e) in vertices.iter().enumerate() {
            completes[*e.iter().max().unwrap()].push(k);
        }
        let mut out = Vec::new();
        let mut edges = vec![0u8; 2 * n];
        dfs(0, 0, &mut edges, &vertices, &completes, &mut out);
        out
    }

    fn dfs(
        edge: usize,
        n_c: u32,
        edges: &mut [u8],
        vertices: &[[usize; 4]],
        completes: &[Vec<usize>],
        out: &mut Vec<u32>,
    ) {
        if edge == edges.len() {
            out.push(n_c);
            return;
        }
        'value: for value in 0..2u8 {
            edges[edge] = value;
            let mut extra = 0;
            for &k in &completes[edge] {
                let [l, b, r, t] = vertices[k].map(|e| edges[e]);
                if l + b != r + t {
                    continue 'value;
                }
                if l != r {
                    extra += 1;
                }
            }
            dfs(edge + 1, n_c + extra, edges, vertices, completes, out);
        }
    }

    /// Histogram of `n_c`, i.e. the partition polynomial.
    pub fn partition_polynomial(lattice: &VertexLattice) -> Polynomial {
        let configs = configurations(lattice);
        let degree = configs.iter().copied().max().unwrap_or(0) as usize;
        let mut z = vec![0u128; degree + 1];
        for n in configs {
            z[n as usize] += 1;
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tori_against_frozen_enumeration() {
        // exhaustive loops over all 2^(2 L1 L2) arrow assignments
        let cases: [(usize, usize, &[u128]); 5] = [
            (1, 1, &[4]),
            (2, 1, &[8]),
            (2, 2, &[16, 0, 0, 0, 2]),
            (3, 2, &[32, 0, 0, 0, 12]),
            (3, 3, &[64, 0, 0, 0, 72, 0, 12]),
        ];
        for (l1, l2, expected) in cases {
            let lat = VertexLattice::new(l1, l2).unwrap();
            assert_eq!(lat.partition_polynomial(), expected.to_vec(), "{l1}x{l2}");
            assert_eq!(enumeration::partition_polynomial(&lat), expected.to_vec());
        }
    }

    #[test]
    fn zero_weight_counts_straight_lines() {
        let lat = VertexLattice::new(3, 4).unwrap();
        // no turning vertices: every row and column line is either present or not
        assert_eq!(lat.z2d(0.0).unwrap(), (1u64 << (3 + 4)) as f64);
    }

    #[test]
    fn fidelity_basic_properties() {
        let lat = VertexLattice::new(3, 3).unwrap();
        assert_eq!(lat.lattice_fidelity(0.9, 0.9).unwrap(), 1.0);
        let a = lat.lattice_fidelity(0.8, 1.2).unwrap();
        let b = lat.lattice_fidelity(1.2, 0.8).unwrap();
        assert_eq!(a, b);
        assert!(a < 1.0);
        assert!(lat.lattice_fidelity(0.0, 1.0).is_err());
        assert!(lat.z2d(-1.0).is_err());
    }

    #[test]
    fn rejects_large_lattices() {
        assert!(VertexLattice::new(7, 2).is_err());
        assert!(VertexLattice::new(2, 0).is_err());
        assert!(VertexLattice::new(6, 6).is_ok());
    }
}
