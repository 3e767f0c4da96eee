//! Bit-string bases of spin-1/2 chains.
//!
//! Bit `i` of a configuration is the spin at site `i` (0-based), `1` = up.

use crate::{Error, Result};

pub const MIN_LENGTH: usize = 4;
pub const MAX_LENGTH: usize = 24;

/// Which part of the `2^L` space a basis spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    /// Every configuration.
    Full,
    /// Fixed number of up spins.
    Magnetization(usize),
    /// Fixed `n_up mod 2`. Conserved by the toroidal seam, which creates or
    /// annihilates spin pairs.
    Parity(u8),
}

/// Ordered configurations of one sector, with rank lookup.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    length: usize,
    sector: Sector,
    states: Vec<u32>,
}

impl SectorBasis {
    pub fn full(length: usize) -> Result<Self> {
        Self::new(length, Sector::Full)
    }

    pub fn magnetization(length: usize, n_up: usize) -> Result<Self> {
        Self::new(length, Sector::Magnetization(n_up))
    }

    /// Zero-magnetization sector, `n_up = L/2`.
    pub fn half_filled(length: usize) -> Result<Self> {
        Self::new(length, Sector::Magnetization(length / 2))
    }

    pub fn parity(length: usize, parity: u8) -> Result<Self> {
        Self::new(length, Sector::Parity(parity))
    }

    pub fn new(length: usize, sector: Sector) -> Result<Self> {
        if length % 2 != 0 || !(MIN_LENGTH..=MAX_LENGTH).contains(&length) {
            return Err(Error::InvalidLength(length));
        }
        let states: Vec<u32> = match sector {
            Sector::Full => (0..1u32 << length).collect(),
            Sector::Magnetization(n_up) => {
                if n_up > length {
                    return Err(Error::InvalidSector { length, n_up });
                }
                combinations(length, n_up)
            }
            Sector::Parity(p) => {
                if p > 1 {
                    return Err(Error::InvalidSector {
                        length,
                        n_up: p as usize,
                    });
                }
                (0..1u32 << length)
                    .filter(|s| (s.count_ones() & 1) as u8 == p)
                    .collect()
            }
        };
        Ok(SectorBasis {
            length,
            sector,
            states,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn state(&self, index: usize) -> u32 {
        self.states[index]
    }

    /// Conserves magnetization, so cannot host the toroidal seam.
    pub fn conserves_magnetization(&self) -> bool {
        matches!(self.sector, Sector::Magnetization(_))
    }

    pub fn rank_of(&self, config: u32) -> Result<usize> {
        self.find(config).ok_or(Error::NotInBasis(config))
    }

    #[inline]
    pub(crate) fn find(&self, config: u32) -> Option<usize> {
        match self.sector {
            Sector::Full => ((config as u64) < (1u64 << self.length)).then_some(config as usize),
            _ => self.states.binary_search(&config).ok(),
        }
    }
}

/// All `length`-bit words with `k` ones, increasing (Gosper's hack).
fn combinations(length: usize, k: usize) -> Vec<u32> {
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << length;
    let mut out = Vec::new();
    let mut x: u64 = (1u64 << k) - 1;
    while x < limit {
        out.push(x as u32);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
