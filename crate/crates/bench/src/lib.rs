//! Fixtures shared by the benchmarks.

use wsd_core::codebook::{build_ca_polar_code, reliability_order};
use wsd_core::sim::trial_input;
use wsd_core::{CrcSpec, LinearCode, ReliabilitySource};

pub fn ca_polar(n: usize, k: usize) -> LinearCode {
    let order = reliability_order(n, ReliabilitySource::Nr5g).expect("power-of-two length");
    build_ca_polar_code(n, k, CrcSpec::crc11(), &order).expect("valid dimensions")
}

/// `count` noisy observations of random codewords at noise level `sigma`.
pub fn received(code: &LinearCode, sigma: f64, count: u64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|t| trial_input(code, sigma, 42, 0, t).expect("encodable").y)
        .collect()
}
