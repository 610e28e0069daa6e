//! BPSK over AWGN: modulation, noise, channel LLRs and Eb/N0 conversion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{param, Result};

/// Which stage of decoding a vector of LLRs belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlrDomain {
    /// One LLR per received symbol.
    Channel,
    /// The LLR seen by the SC decoder when each bit `u_i` was decided.
    BitDecision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector {
    domain: LlrDomain,
    values: Vec<f64>,
}

impl LlrVector {
    pub fn new(domain: LlrDomain, values: Vec<f64>) -> Result<Self> {
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return param(format!("non-finite LLR {} at position {j}", values[j]));
        }
        Ok(LlrVector { domain, values })
    }

    pub fn channel(values: Vec<f64>) -> Result<Self> {
        Self::new(LlrDomain::Channel, values)
    }

    pub(crate) fn bit_decision_unchecked(values: Vec<f64>) -> Self {
        LlrVector {
            domain: LlrDomain::BitDecision,
            values,
        }
    }

    pub fn domain(&self) -> LlrDomain {
        self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl std::ops::Index<usize> for LlrVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Noise variance together with the Eb/N0 point and code rate it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub sigma2: f64,
    pub ebn0_db: f64,
    pub rate: f64,
}

impl ChannelParams {
    pub fn from_ebn0(ebn0_db: f64, rate: f64) -> Result<Self> {
        Ok(ChannelParams {
            sigma2: ebn0_to_sigma2(ebn0_db, rate)?,
            ebn0_db,
            rate,
        })
    }
}

/// Maps bit `x` to the symbol `1 - 2x`.
pub fn modulate(x: &[u8]) -> Vec<f64> {
    x.iter().map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 }).collect()
}

/// Adds i.i.d. `N(0, sigma2)` noise to every symbol.
pub fn add_noise<R: Rng + ?Sized>(s: &[f64], sigma2: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return param(format!("noise variance must be positive, got {sigma2}"));
    }
    let sigma = sigma2.sqrt();
    Ok(s
        .iter()
        .map(|&v| {
            let z: f64 = rng.sample(StandardNormal);
            v + sigma * z
        })
        .collect())
}

/// Channel LLRs `2 y / sigma2`.
pub fn llr_init(y: &[f64], sigma2: f64) -> Result<LlrVector> {
    if !(sigma2 > 0.0) {
        return param(format!("noise variance must be positive, got {sigma2}"));
    }
    let scale = 2.0 / sigma2;
    LlrVector::channel(y.iter().map(|&v| scale * v).collect())
}

/// Noise variance for unit-energy BPSK with `Eb` counted per information
/// bit: `1 / (2 R 10^(EbN0/10))`.
pub fn ebn0_to_sigma2(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return param(format!("code rate must lie in (0, 1], got {rate}"));
    }
    if !ebn0_db.is_finite() {
        return param(format!("Eb/N0 must be finite, got {ebn0_db}"));
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)))
}

/// Generator for one simulated frame. Stream `frame` of the ChaCha8 keyed
/// by `seed`, so a frame's draws do not depend on which worker runs it.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}
