//! BPSK over AWGN.
//!
//! Noise comes from a ChaCha8 generator seeded with `seed` and switched to
//! stream `stream_id`, so every trial owns an independent, reproducible
//! sequence regardless of the order trials execute in. Gaussian variates use
//! the Ziggurat sampler of `rand_distr::StandardNormal`; the pinned crate
//! versions fix the exact sample sequence.

use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::binlin::BitVector;
use crate::error::{Error, Result};

/// Channel observations, one real sample per code bit.
#[derive(Clone, Debug, PartialEq)]
pub struct ReceivedVector(Vec<f64>);

impl ReceivedVector {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("non-finite channel sample".into()));
        }
        Ok(Self(samples))
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ReceivedVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Which energy the SNR axis refers to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrConvention {
    /// Energy per information bit; rate counts message bits only.
    #[default]
    Ebn0,
    /// Energy per channel symbol.
    Esn0,
}

/// Noise level for one simulation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub sigma: f64,
    pub snr_db: f64,
    pub rate: f64,
}

impl ChannelParams {
    pub fn new(snr_db: f64, rate: f64, convention: SnrConvention) -> Result<Self> {
        let sigma = match convention {
            SnrConvention::Ebn0 => ebno_to_sigma(snr_db, rate)?,
            SnrConvention::Esn0 => ebno_to_sigma(snr_db, 1.0)?,
        };
        Ok(Self {
            sigma,
            snr_db,
            rate,
        })
    }
}

/// Bit 0 → +1, bit 1 → −1.
pub fn modulate(c: &BitVector) -> Vec<f64> {
    c.iter().map(|b| if b { -1.0 } else { 1.0 }).collect()
}

/// `σ = sqrt(1 / (2 R 10^{Eb/N0 / 10}))` under unit symbol energy.
pub fn ebno_to_sigma(ebno_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "code rate must be in (0, 1], got {rate}"
        )));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))).sqrt())
}

/// Generator for stream `stream_id` under `seed`.
pub fn stream_rng(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// `y = x + σ z`, `z` i.i.d. standard normal from stream `(seed, stream_id)`.
pub fn awgn(x: &[f64], sigma: f64, seed: u64, stream_id: u64) -> ReceivedVector {
    let mut rng = stream_rng(seed, stream_id);
    add_noise(x, sigma, &mut rng)
}

pub fn add_noise(x: &[f64], sigma: f64, rng: &mut impl Rng) -> ReceivedVector {
    ReceivedVector(
        x.iter()
            .map(|&s| {
                let z: f64 = rng.sample(StandardNormal);
                s + sigma * z
            })
            .collect(),
    )
}

/// `2 y / σ²`; positive favors bit 0.
pub fn llr(y: &[f64], sigma: f64) -> Vec<f64> {
    let scale = 2.0 / (sigma * sigma);
    y.iter().map(|&v| scale * v).collect()
}

/// `‖y − x‖²`.
#[inline]
pub fn squared_distance(y: &[f64], x: &[f64]) -> f64 {
    debug_assert_eq!(y.len(), x.len());
    y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `‖y − x(c)‖²` without materializing `x(c)`.
pub fn squared_distance_to_codeword(y: &[f64], c: &BitVector) -> f64 {
    y.iter()
        .enumerate()
        .map(|(j, &v)| {
            let d = if c.get(j) { v + 1.0 } else { v - 1.0 };
            d * d
        })
        .sum()
}
