//! Exhaustive maximum-likelihood decoding for small codes.
//!
//! For BPSK over AWGN the likelihood is maximised by the codeword with the
//! largest correlation `Σ (1 - 2 x_j) y_j`.

use crate::code::CodeSpec;
use crate::error::{Error, Result};

/// Largest dimension the brute-force routines accept.
pub const MAX_ORACLE_K: usize = 24;

/// Correlations within this distance of the maximum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub x_ml: Vec<u8>,
    pub correlation: f64,
    /// Codewords whose correlation is within [`TIE_TOLERANCE`] of the best.
    pub tie_count: u64,
}

pub fn correlation(x: &[u8], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&b, &v)| if b & 1 == 0 { v } else { -v })
        .sum()
}

/// Every codeword of `spec`, visited in Gray-code order of the message.
#[derive(Debug, Clone)]
pub struct Codewords {
    rows: Vec<Vec<u8>>,
    current: Vec<u8>,
    step: u64,
    total: u64,
}

impl Iterator for Codewords {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.step >= self.total {
            return None;
        }
        if self.step > 0 {
            let row = &self.rows[self.step.trailing_zeros() as usize];
            for (c, &r) in self.current.iter_mut().zip(row) {
                *c ^= r;
            }
        }
        self.step += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.step) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Codewords {}

fn check_cap(spec: &CodeSpec) -> Result<()> {
    if spec.k() > MAX_ORACLE_K {
        return Err(Error::Resource(format!(
            "brute-force enumeration of 2^{} codewords exceeds the 2^{MAX_ORACLE_K} cap",
            spec.k()
        )));
    }
    Ok(())
}

pub fn enumerate_codewords(spec: &CodeSpec) -> Result<Codewords> {
    check_cap(spec)?;
    let rows = (0..spec.k())
        .map(|b| {
            let mut msg = vec![0u8; spec.k()];
            msg[b] = 1;
            spec.encode(&msg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Codewords {
        rows,
        current: vec![0; spec.n()],
        step: 0,
        total: 1u64 << spec.k(),
    })
}

pub fn ml_decode_bruteforce(y: &[f64], spec: &CodeSpec) -> Result<OracleResult> {
    if y.len() != spec.n() {
        return Err(Error::Parameter(format!(
            "received {} symbols for a length-{} code",
            y.len(),
            spec.n()
        )));
    }
    let mut best: Option<(Vec<u8>, f64)> = None;
    for x in enumerate_codewords(spec)? {
        let c = correlation(&x, y);
        if best.as_ref().is_none_or(|(_, b)| c > *b) {
            best = Some((x, c));
        }
    }
    let (x_ml, corr) = best.expect("a code has at least one codeword");
    let tie_count = enumerate_codewords(spec)?
        .filter(|x| (correlation(x, y) - corr).abs() <= TIE_TOLERANCE)
        .count() as u64;
    Ok(OracleResult {
        x_ml,
        correlation: corr,
        tie_count,
    })
}
