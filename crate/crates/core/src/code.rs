//! Reed-Muller code construction and encoding over the natural-order
//! Kronecker power of `G = [[1, 0], [1, 1]]`.
//!
//! Row `i` of `G^{⊗m}` has a one in column `j` exactly when the bits of `j`
//! are a subset of the bits of `i`, so its weight is `2^popcount(i)`. The
//! code `RM(r, m)` freezes every row lighter than `d = 2^(m - r)`.

use std::fmt;

use crate::error::{param, Result};

/// Largest supported `m`.
pub const MAX_M: u32 = 20;

/// An `RM(r, m)` code. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    m: u32,
    r: u32,
    n: usize,
    k: usize,
    d: usize,
    frozen: Vec<usize>,
    info: Vec<usize>,
    is_frozen: Vec<bool>,
    last_frozen: Option<usize>,
    k_after_last_frozen: usize,
}

impl CodeSpec {
    pub fn build(m: u32, r: u32) -> Result<Self> {
        if m > MAX_M {
            return param(format!("m = {m} exceeds the supported maximum {MAX_M}"));
        }
        if r > m {
            return param(format!("order r = {r} must not exceed m = {m}"));
        }
        let n = 1usize << m;
        let d = 1usize << (m - r);
        let is_frozen: Vec<bool> = (0..n).map(|i| row_weight(i) < d).collect();
        let frozen: Vec<usize> = (0..n).filter(|&i| is_frozen[i]).collect();
        let info: Vec<usize> = (0..n).filter(|&i| !is_frozen[i]).collect();
        let last_frozen = frozen.last().copied();
        let k_after_last_frozen = match last_frozen {
            Some(lf) => info.iter().filter(|&&i| i > lf).count(),
            None => info.len(),
        };
        Ok(CodeSpec {
            m,
            r,
            n,
            k: info.len(),
            d,
            frozen,
            info,
            is_frozen,
            last_frozen,
            k_after_last_frozen,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Block length `N = 2^m`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `K`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum distance `2^(m - r)`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Frozen indices, ascending.
    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    /// Information indices, ascending.
    pub fn info(&self) -> &[usize] {
        &self.info
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.is_frozen[i]
    }

    /// Frozen-bit mask indexed by bit position.
    pub fn frozen_mask(&self) -> &[bool] {
        &self.is_frozen
    }

    pub fn last_frozen(&self) -> Option<usize> {
        self.last_frozen
    }

    /// Number of information bits after the last frozen bit (`K` for a
    /// rate-1 code, which has no frozen bits).
    pub fn k_after_last_frozen(&self) -> usize {
        self.k_after_last_frozen
    }

    /// Places message bits on the information positions, zeros elsewhere.
    pub fn expand(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k {
            return param(format!(
                "message has {} bits, code dimension is {}",
                msg.len(),
                self.k
            ));
        }
        let mut u = vec![0u8; self.n];
        for (&i, &b) in self.info.iter().zip(msg) {
            u[i] = b & 1;
        }
        Ok(u)
    }

    /// Reads the information positions of `u` back into a message.
    pub fn extract(&self, u: &[u8]) -> Vec<u8> {
        self.info.iter().map(|&i| u[i]).collect()
    }

    /// `x = u G^{⊗m}` for a message of `K` bits.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        let mut x = self.expand(msg)?;
        polar_transform(&mut x);
        Ok(x)
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RM({}, {}): N={} K={} d={} F={:?}",
            self.r, self.m, self.n, self.k, self.d, self.frozen
        )
    }
}

/// Weight of row `i` of `G^{⊗m}`.
pub fn row_weight(i: usize) -> usize {
    1usize << i.count_ones()
}

/// In-place butterfly computing `v G^{⊗m}` over GF(2). The length of `v`
/// must be a power of two. The transform is its own inverse.
pub fn polar_transform(v: &mut [u8]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in v.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, &b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        half *= 2;
    }
}
