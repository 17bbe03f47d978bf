//! LLR-domain successive-cancellation list decoding.
//!
//! The transform is `x = u · F^{⊗n}` in natural order, so for `u = (a, b)`
//! split in halves, `x = (enc(a) ⊕ enc(b), enc(b))`. Decoding a left child
//! therefore uses `f(x_left, x_right)` and a right child uses
//! `g(x_left, x_right, enc(left decisions))`.

use super::{Candidate, CandidateList};
use crate::binlin::BitVector;
use crate::codebook::{polar_transform_bits, CodeKind, LinearCode};
use crate::complexity::OpCounter;
use crate::error::{Error, Result};

/// Check-node update used for left-child LLRs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckNodeRule {
    /// `sign(a) sign(b) min(|a|, |b|)`.
    #[default]
    MinSum,
    /// `2 atanh(tanh(a/2) tanh(b/2))`.
    Exact,
}

impl CheckNodeRule {
    #[inline]
    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            CheckNodeRule::MinSum => {
                let m = a.abs().min(b.abs());
                if (a < 0.0) != (b < 0.0) {
                    -m
                } else {
                    m
                }
            }
            CheckNodeRule::Exact => {
                let p = (a / 2.0).tanh() * (b / 2.0).tanh();
                2.0 * p.clamp(-1.0 + 1e-15, 1.0 - 1e-15).atanh()
            }
        }
    }
}

#[inline]
fn g(a: f64, b: f64, left_bit: u8) -> f64 {
    if left_bit == 0 {
        b + a
    } else {
        b - a
    }
}

#[derive(Clone)]
struct Path {
    /// `llr[λ]` holds the 2^λ LLRs of the active node at level λ (< n).
    llr: Vec<Vec<f64>>,
    /// Encoding of the finished left sibling at each level.
    left_enc: Vec<Vec<u8>>,
    u: Vec<u8>,
    metric: f64,
}

impl Path {
    fn new(n_log: usize, n: usize) -> Self {
        Self {
            llr: (0..n_log).map(|l| vec![0.0; 1 << l]).collect(),
            left_enc: (0..n_log).map(|l| vec![0; 1 << l]).collect(),
            u: vec![0; n],
            metric: 0.0,
        }
    }

    /// Computes the leaf LLR for bit `i`.
    fn descend(
        &mut self,
        i: usize,
        channel: &[f64],
        n_log: usize,
        rule: CheckNodeRule,
    ) -> (f64, u64) {
        let mut ops = 0u64;
        let top = if i == 0 {
            n_log
        } else {
            let lc = i.trailing_zeros() as usize + 1;
            let level = lc - 1;
            let half = 1 << level;
            let (parent, out) = split_levels(&mut self.llr, channel, lc, level);
            let left = &self.left_enc[level];
            for j in 0..half {
                out[j] = g(parent[j], parent[j + half], left[j]);
            }
            ops += half as u64;
            level
        };
        for level in (1..=top).rev() {
            let half = 1 << (level - 1);
            let (parent, out) = split_levels(&mut self.llr, channel, level, level - 1);
            for j in 0..half {
                out[j] = rule.apply(parent[j], parent[j + half]);
            }
            ops += half as u64;
        }
        (self.llr[0][0], ops)
    }

    /// Records decision `bit` for leaf `i` and folds finished subtrees.
    fn commit(&mut self, i: usize, bit: u8, n_log: usize) {
        self.u[i] = bit;
        let mut cur = vec![bit];
        let mut level = 0;
        while level < n_log && (i >> level) & 1 == 1 {
            let left = &self.left_enc[level];
            let mut merged: Vec<u8> = left.iter().zip(&cur).map(|(a, b)| a ^ b).collect();
            merged.extend_from_slice(&cur);
            cur = merged;
            level += 1;
        }
        if level < n_log {
            self.left_enc[level] = cur;
        }
    }
}

/// Borrows the parent level (channel when `parent == n`) immutably and the
/// child level mutably.
fn split_levels<'a>(
    llr: &'a mut [Vec<f64>],
    channel: &'a [f64],
    parent: usize,
    child: usize,
) -> (&'a [f64], &'a mut [f64]) {
    debug_assert!(child < parent);
    if parent == llr.len() {
        (channel, &mut llr[child])
    } else {
        let (lo, hi) = llr.split_at_mut(parent);
        (&hi[0], &mut lo[child])
    }
}

#[inline]
fn penalty(llr: f64, bit: u8) -> f64 {
    let hard = u8::from(llr < 0.0);
    if hard == bit {
        0.0
    } else {
        llr.abs()
    }
}

/// SCL decoding with min-sum check nodes.
///
/// Accepts a polar code or a CRC-concatenated code with a polar inner code,
/// in which case the list lives in the inner code. Returns up to
/// `list_size` codewords sorted by path metric, ascending.
pub fn scl_decode(llrs: &[f64], code: &LinearCode, list_size: usize) -> Result<CandidateList> {
    scl_decode_with(
        llrs,
        code,
        list_size,
        CheckNodeRule::MinSum,
        &mut OpCounter::default(),
    )
}

pub fn scl_decode_with(
    llrs: &[f64],
    code: &LinearCode,
    list_size: usize,
    rule: CheckNodeRule,
    counters: &mut OpCounter,
) -> Result<CandidateList> {
    let polar = match code.kind() {
        CodeKind::Polar { .. } => code,
        CodeKind::CrcConcatenated { inner, .. }
            if matches!(inner.kind(), CodeKind::Polar { .. }) =>
        {
            inner.as_ref()
        }
        _ => return Err(Error::UnsupportedCode("SCL requires a polar code")),
    };
    if list_size == 0 {
        return Err(Error::InvalidParameter(
            "list size must be at least 1".into(),
        ));
    }
    let n = polar.n();
    if llrs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: llrs.len(),
        });
    }
    let n_log = n.trailing_zeros() as usize;
    let mut frozen = vec![true; n];
    for &i in polar.polar_info_set().expect("polar kind") {
        frozen[i] = false;
    }

    let mut paths = vec![Path::new(n_log, n)];
    let mut ops = 0u64;
    for (i, &is_frozen) in frozen.iter().enumerate() {
        let mut leaf = Vec::with_capacity(paths.len());
        for p in paths.iter_mut() {
            let (l, o) = p.descend(i, llrs, n_log, rule);
            ops += o;
            leaf.push(l);
        }
        if is_frozen {
            for (p, &l) in paths.iter_mut().zip(&leaf) {
                p.metric += penalty(l, 0);
                p.commit(i, 0, n_log);
            }
            continue;
        }
        // (metric, path, bit); sort order is the tie rule.
        let mut forks: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * paths.len());
        for (idx, (p, &l)) in paths.iter().zip(&leaf).enumerate() {
            for bit in [0u8, 1] {
                forks.push((p.metric + penalty(l, bit), idx, bit));
            }
        }
        if forks.len() > list_size {
            forks.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
            forks.truncate(list_size);
            forks.sort_by(|a, b| a.1.cmp(&b.1).then(a.2.cmp(&b.2)));
        }
        let mut uses = vec![0usize; paths.len()];
        for &(_, idx, _) in &forks {
            uses[idx] += 1;
        }
        let mut old: Vec<Option<Path>> = paths.into_iter().map(Some).collect();
        let mut next = Vec::with_capacity(forks.len());
        for (metric, idx, bit) in forks {
            uses[idx] -= 1;
            let mut p = if uses[idx] == 0 {
                old[idx].take().expect("path consumed once")
            } else {
                old[idx].clone().expect("path still present")
            };
            p.metric = metric;
            p.commit(i, bit, n_log);
            next.push(p);
        }
        paths = next;
    }
    counters.scl_node_ops += ops;

    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.sort_by(|&a, &b| paths[a].metric.total_cmp(&paths[b].metric).then(a.cmp(&b)));
    let entries = order
        .into_iter()
        .map(|idx| {
            let mut x = paths[idx].u.clone();
            polar_transform_bits(&mut x);
            Candidate {
                codeword: BitVector::from_u8s(&x),
                score: paths[idx].metric,
            }
        })
        .collect();
    Ok(CandidateList { entries })
}
