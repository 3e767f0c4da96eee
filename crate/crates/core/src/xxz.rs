//! Matrix-free XXZ ring Hamiltonian,
//!
//! ```text
//! H = Σ_{i=1..L} [σˣᵢσˣᵢ₊₁ + σʸᵢσʸᵢ₊₁ + Δ σᶻᵢσᶻᵢ₊₁]
//! ```
//!
//! in Pauli normalization, so spin-flip amplitudes are `2` and diagonal
//! entries are integer multiples of `Δ`. Site `L+1` is identified with site 1
//! according to the [`BoundaryCondition`].

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::spin_basis::SectorBasis;
use crate::{Error, Result};

/// Output vectors larger than this are filled in parallel.
const PAR_THRESHOLD: usize = 1 << 13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "theta", rename_all = "lowercase")]
pub enum BoundaryCondition {
    Periodic,
    /// `σ±_{L+1} = e^{±iθ} σ±_1`.
    Twisted(f64),
    /// `σ±_{L+1} = e^{±iθ} σ∓_1`, `σᶻ_{L+1} = −σᶻ_1`. Total magnetization is
    /// conserved only mod 2.
    Toroidal(f64),
}

impl BoundaryCondition {
    pub fn theta(&self) -> f64 {
        match *self {
            BoundaryCondition::Periodic => 0.0,
            BoundaryCondition::Twisted(t) | BoundaryCondition::Toroidal(t) => t,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Twisted(_) => "twisted",
            BoundaryCondition::Toroidal(_) => "toroidal",
        }
    }

    /// Parses `periodic`, `twisted` or `toroidal` with a separately given angle.
    pub fn from_name(name: &str, theta: f64) -> Result<Self> {
        match name {
            "periodic" => Ok(BoundaryCondition::Periodic),
            "twisted" => Ok(BoundaryCondition::Twisted(theta)),
            "toroidal" => Ok(BoundaryCondition::Toroidal(theta)),
            other => Err(Error::Config(format!("unknown boundary condition `{other}`"))),
        }
    }

    pub fn needs_complex(&self) -> bool {
        self.theta() != 0.0
    }

    pub fn conserves_magnetization(&self) -> bool {
        !matches!(self, BoundaryCondition::Toroidal(_))
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XxzParams {
    pub length: usize,
    pub delta: f64,
    pub bc: BoundaryCondition,
}

impl XxzParams {
    pub fn new(length: usize, delta: f64, bc: BoundaryCondition) -> Self {
        XxzParams { length, delta, bc }
    }

    pub fn periodic(length: usize, delta: f64) -> Self {
        Self::new(length, delta, BoundaryCondition::Periodic)
    }

    pub fn bond_list(&self) -> Vec<Bond> {
        let l = self.length;
        (0..l)
            .map(|i| {
                let j = (i + 1) % l;
                let kind = if j != 0 {
                    BondKind::Plain
                } else {
                    match self.bc {
                        BoundaryCondition::Periodic => BondKind::Plain,
                        BoundaryCondition::Twisted(theta) => BondKind::Twisted { theta },
                        BoundaryCondition::Toroidal(theta) => BondKind::Toroidal { theta },
                    }
                };
                Bond { i, j, kind }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BondKind {
    Plain,
    /// Hopping picks up `e^{∓iθ}`.
    Twisted { theta: f64 },
    /// Pair creation/annihilation `2(e^{−iθ}σ⁺σ⁺ + e^{iθ}σ⁻σ⁻)` and an Ising
    /// term of reversed sign.
    Toroidal { theta: f64 },
}

impl BondKind {
    pub fn changes_parity(&self) -> bool {
        matches!(self, BondKind::Toroidal { .. })
    }
}

/// Nearest-neighbour bond between 0-based sites `i` and `j = i + 1 mod L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub kind: BondKind,
}

/// A Hermitian operator known only through its action on vectors.
pub trait LinearOperator<S: Scalar>: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`. Both slices have length `dim()`.
    fn apply(&self, x: &[S], y: &mut [S]);
}

/// Adapts a closure into a [`LinearOperator`].
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnOperator { dim, f }
    }
}

impl<S: Scalar, F: Fn(&[S], &mut [S]) + Sync> LinearOperator<S> for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, x: &[S], y: &mut [S]) {
        (self.f)(x, y)
    }
}

/// The XXZ Hamiltonian restricted to a basis.
pub struct XxzHamiltonian<'a, S> {
    params: XxzParams,
    basis: &'a SectorBasis,
    /// `e^{−iθ}` on the seam; the conjugate is used for the reverse process.
    seam: S,
}

impl<'a, S: Scalar> XxzHamiltonian<'a, S> {
    pub fn new(params: XxzParams, basis: &'a SectorBasis) -> Result<Self> {
        if basis.length() != params.length {
            return Err(Error::DimensionMismatch {
                expected: params.length,
                actual: basis.length(),
            });
        }
        if !params.delta.is_finite() {
            return Err(Error::domain("delta", params.delta, "finite"));
        }
        if !params.bc.conserves_magnetization() && basis.conserves_magnetization() {
            return Err(Error::IncompatibleBasis);
        }
        let theta = params.bc.theta();
        let seam = S::phase(-theta).ok_or(Error::ComplexRequired(theta))?;
        Ok(XxzHamiltonian {
            params,
            basis,
            seam,
        })
    }

    pub fn params(&self) -> &XxzParams {
        &self.params
    }

    pub fn basis(&self) -> &SectorBasis {
        self.basis
    }

    /// `H v` as a new vector.
    pub fn apply_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                actual: v.len(),
            });
        }
        let mut out = vec![S::zero(); v.len()];
        self.apply(v, &mut out);
        Ok(out)
    }

    pub fn diagonal(&self, s: u32) -> f64 {
        let l = self.params.length;
        let mut zz = 0i32;
        for i in 0..l {
            let j = (i + 1) % l;
            let aligned = ((s >> i) ^ (s >> j)) & 1 == 0;
            let sign = if aligned { 1 } else { -1 };
            if j == 0 && matches!(self.params.bc, BoundaryCondition::Toroidal(_)) {
                zz -= sign;
            } else {
                zz += sign;
            }
        }
        self.params.delta * f64::from(zz)
    }

    /// `(H v)_s` for configuration `s`, gathering from connected states.
    #[inline]
    fn row(&self, s: u32, vs: S, v: &[S]) -> S {
        let l = self.params.length;
        let two = S::from_real(2.0);
        let mut acc = vs.scale(self.diagonal(s));
        let last = l - 1;
        for i in 0..last {
            let mask = (1u32 << i) | (1u32 << (i + 1));
            let pair = s & mask;
            if pair != 0 && pair != mask {
                if let Some(k) = self.basis.find(s ^ mask) {
                    acc += two * v[k];
                }
            }
        }
        let mask = (1u32 << last) | 1;
        let hi = (s >> last) & 1;
        let lo = s & 1;
        match self.params.bc {
            BoundaryCondition::Periodic => {
                if hi != lo {
                    if let Some(k) = self.basis.find(s ^ mask) {
                        acc += two * v[k];
                    }
                }
            }
            BoundaryCondition::Twisted(_) => {
                if hi != lo {
                    if let Some(k) = self.basis.find(s ^ mask) {
                        // ⟨s| σ⁺_L σ⁻_1 |t⟩ when site L is up in s
                        let amp = if hi == 1 { self.seam } else { self.seam.conj() };
                        acc += two * amp * v[k];
                    }
                }
            }
            BoundaryCondition::Toroidal(_) => {
                if hi == lo {
                    if let Some(k) = self.basis.find(s ^ mask) {
                        let amp = if hi == 1 { self.seam } else { self.seam.conj() };
                        acc += two * amp * v[k];
                    }
                }
            }
        }
        acc
    }
}

impl<S: Scalar> LinearOperator<S> for XxzHamiltonian<'_, S> {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn apply(&self, x: &[S], y: &mut [S]) {
        debug_assert_eq!(x.len(), self.basis.dim());
        debug_assert_eq!(y.len(), self.basis.dim());
        let states = self.basis.states();
        if y.len() >= PAR_THRESHOLD {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(i, yi)| *yi = self.row(states[i], x[i], x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row(states[i], x[i], x);
            }
        }
    }
}
