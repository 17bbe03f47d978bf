//! Operation counters and closed-form complexity models, in ED units.
//!
//! One ED unit is the cost of `‖y − x‖²` for length-`N` vectors, taken as
//! `3N` floating-point operations.

use std::ops::{Add, AddAssign};

/// Categorized operation tallies. Merging is componentwise addition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpCounter {
    /// Full length-`N` squared-distance evaluations.
    pub ed_evaluations: u64,
    /// Additions spent on gain metrics (one per support index).
    pub gain_additions: u64,
    /// Comparisons in best-`m` selection.
    pub sort_comparisons: u64,
    /// SCL f/g node updates, 4 FLOPs each.
    pub scl_node_ops: u64,
    /// OSD test-pattern re-encodings, one ED unit each.
    pub osd_reencodes: u64,
    pub misc_flops: u64,
}

impl OpCounter {
    pub fn merge(&mut self, other: &OpCounter) {
        *self += *other;
    }

    pub fn is_empty(&self) -> bool {
        *self == OpCounter::default()
    }

    pub fn to_ed_units(&self, n: usize) -> f64 {
        to_ed_units(self, n)
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, o: OpCounter) {
        self.ed_evaluations += o.ed_evaluations;
        self.gain_additions += o.gain_additions;
        self.sort_comparisons += o.sort_comparisons;
        self.scl_node_ops += o.scl_node_ops;
        self.osd_reencodes += o.osd_reencodes;
        self.misc_flops += o.misc_flops;
    }
}

impl Add for OpCounter {
    type Output = OpCounter;
    fn add(mut self, o: OpCounter) -> OpCounter {
        self += o;
        self
    }
}

impl std::iter::Sum for OpCounter {
    fn sum<I: Iterator<Item = OpCounter>>(iter: I) -> Self {
        iter.fold(OpCounter::default(), Add::add)
    }
}

/// Normalizes a counter to ED units for block length `n`.
pub fn to_ed_units(c: &OpCounter, n: usize) -> f64 {
    assert!(n >= 1);
    let unit = 3.0 * n as f64;
    let flops = unit * c.ed_evaluations as f64
        + c.gain_additions as f64
        + c.sort_comparisons as f64
        + 4.0 * c.scl_node_ops as f64
        + unit * c.osd_reencodes as f64
        + c.misc_flops as f64;
    flops / unit
}

/// SCL with list size `l`: `(4/3) L log2 N`.
pub fn c_scl(l: usize, n: usize) -> f64 {
    4.0 / 3.0 * l as f64 * (n as f64).log2()
}

/// SCL with back-propagated parity checks over pre-transform blocks `N_ℓ`.
pub fn c_bpc(l: usize, n: usize, block_sizes: &[usize]) -> f64 {
    let extra: f64 = block_sizes
        .iter()
        .map(|&b| b as f64 * (b as f64).log2())
        .sum();
    c_scl(l, n) + 4.0 / (3.0 * n as f64) * extra
}

/// Order-`k` OSD reprocessing: `Σ_{i=0}^{k} C(K, i)`.
pub fn c_osd(k: usize, dim: usize) -> f64 {
    osd_pattern_count(k, dim) as f64
}

/// Exact number of order-`k` test patterns over `dim` positions.
pub fn osd_pattern_count(k: usize, dim: usize) -> u128 {
    (0..=k.min(dim)).map(|i| binomial(dim, i)).sum()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Worst-case cost of one WSD trajectory:
/// `J (m (1 + 1/(3N)) + |S| (w̄ + log2 m) / (3N))`.
pub fn c_wsd(j: usize, m: usize, n: usize, sphere_size: usize, w_bar: f64) -> f64 {
    let three_n = 3.0 * n as f64;
    let m_f = m as f64;
    j as f64 * (m_f * (1.0 + 1.0 / three_n) + sphere_size as f64 * (w_bar + m_f.log2()) / three_n)
}

/// Average cost of stage 1 plus `L_init` trajectories activated with
/// probability `p_act`.
pub fn c_mp_wsd(c_init: f64, p_act: f64, l_init: usize, c_wsd_val: f64) -> f64 {
    c_init + p_act * l_init as f64 * c_wsd_val
}

/// Cost of exhaustive ML decoding: `2^K`.
pub fn c_ml(k: usize) -> f64 {
    2f64.powi(k as i32)
}
