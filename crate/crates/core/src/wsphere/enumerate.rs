//! Exhaustive codeword enumeration in Gray-code message order.
//!
//! Consecutive Gray-code messages differ in one bit, so each step XORs one
//! generator row into the running codeword and recounts its weight by word
//! popcount. The message space is split into fixed blocks that are walked
//! independently (in parallel) and merged in block order.

use rayon::prelude::*;

use crate::binlin::{BitMatrix, BitVector};
use crate::codebook::LinearCode;
use crate::error::{Error, Result};

/// Largest dimension that may be enumerated exhaustively.
pub const MAX_ENUMERATION_K: usize = 30;

const BLOCK_LOG2: u32 = 20;

/// Gray code of `t`.
#[inline]
pub fn gray(t: u64) -> u64 {
    t ^ (t >> 1)
}

pub(crate) fn check_budget(k: usize) -> Result<()> {
    if k > MAX_ENUMERATION_K {
        return Err(Error::EnumerationBudget {
            k,
            max: MAX_ENUMERATION_K,
        });
    }
    Ok(())
}

/// Packs generator rows into fixed-width word arrays.
fn pack_rows<const W: usize>(g: &BitMatrix) -> Vec<[u64; W]> {
    g.row_vectors()
        .iter()
        .map(|r| {
            let mut w = [0u64; W];
            w[..r.words().len()].copy_from_slice(r.words());
            w
        })
        .collect()
}

/// Walks all `2^K` codewords, calling `visit(acc, words, weight)` once per
/// codeword. One accumulator is created per block; the returned vector is in
/// block order regardless of scheduling.
fn walk<const W: usize, A, Make, Visit>(g: &BitMatrix, make: Make, visit: Visit) -> Vec<A>
where
    A: Send,
    Make: Fn() -> A + Sync,
    Visit: Fn(&mut A, &[u64; W], u32) + Sync,
{
    let rows = pack_rows::<W>(g);
    let k = rows.len() as u32;
    let total = 1u64 << k;
    let block = 1u64 << BLOCK_LOG2.min(k);
    let blocks = total / block;

    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = make();
            let start = b * block;
            let mut cw = [0u64; W];
            let msg = gray(start);
            for (i, row) in rows.iter().enumerate() {
                if (msg >> i) & 1 == 1 {
                    xor_into(&mut cw, row);
                }
            }
            visit(&mut acc, &cw, popcount(&cw));
            for t in start + 1..start + block {
                xor_into(&mut cw, &rows[t.trailing_zeros() as usize]);
                visit(&mut acc, &cw, popcount(&cw));
            }
            acc
        })
        .collect()
}

#[inline(always)]
fn xor_into<const W: usize>(acc: &mut [u64; W], row: &[u64; W]) {
    for w in 0..W {
        acc[w] ^= row[w];
    }
}

#[inline(always)]
fn popcount<const W: usize>(words: &[u64; W]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

macro_rules! dispatch_width {
    ($n:expr, $f:ident $(, $arg:expr)*) => {{
        match crate::binlin::words_for($n) {
            1 => $f::<1>($($arg),*),
            2 => $f::<2>($($arg),*),
            3 | 4 => $f::<4>($($arg),*),
            5..=8 => $f::<8>($($arg),*),
            9..=16 => $f::<16>($($arg),*),
            _ => Err(Error::InvalidParameter(format!(
                "block length {} too large for exhaustive enumeration",
                $n
            ))),
        }
    }};
}

fn tally_width<const W: usize>(g: &BitMatrix) -> Result<Vec<u64>> {
    let n = g.cols();
    let parts = walk::<W, _, _, _>(g, || vec![0u64; n + 1], |acc, _, w| acc[w as usize] += 1);
    let mut total = vec![0u64; n + 1];
    for p in parts {
        for (t, c) in total.iter_mut().zip(p) {
            *t += c;
        }
    }
    Ok(total)
}

/// Count of codewords at every weight `0..=N`.
pub fn weight_histogram(code: &LinearCode) -> Result<Vec<u64>> {
    check_budget(code.k())?;
    let g = code.generator();
    dispatch_width!(code.n(), tally_width, g)
}

fn collect_width<const W: usize>(g: &BitMatrix, max_weight: u32) -> Result<Vec<BitVector>> {
    let n = g.cols();
    let used = crate::binlin::words_for(n);
    let parts = walk::<W, Vec<[u64; W]>, _, _>(g, Vec::new, |acc, cw, w| {
        if w <= max_weight {
            acc.push(*cw);
        }
    });
    parts
        .into_iter()
        .flatten()
        .map(|cw| BitVector::from_words(n, cw[..used].to_vec()))
        .collect()
}

/// Every codeword of weight at most `max_weight`, in enumeration order.
pub fn collect_low_weight(code: &LinearCode, max_weight: usize) -> Result<Vec<BitVector>> {
    check_budget(code.k())?;
    let g = code.generator();
    let cap = max_weight.min(u32::MAX as usize) as u32;
    dispatch_width!(code.n(), collect_width, g, cap)
}
