use itertools::Itertools;

use super::{Candidate, CandidateList};
use crate::binlin::BitVector;
use crate::channel::squared_distance_to_codeword;
use crate::codebook::LinearCode;
use crate::complexity::OpCounter;
use crate::error::{Error, Result};

/// Order-`k` ordered-statistics decoding.
///
/// Returns the `list_cap` best re-encoded test patterns by squared ED,
/// ties kept in enumeration order (by pattern weight, then lexicographic
/// position set).
pub fn osd_decode(
    y: &[f64],
    code: &LinearCode,
    order: usize,
    list_cap: usize,
) -> Result<CandidateList> {
    osd_decode_counted(y, code, order, list_cap, &mut OpCounter::default())
}

pub fn osd_decode_counted(
    y: &[f64],
    code: &LinearCode,
    order: usize,
    list_cap: usize,
    counters: &mut OpCounter,
) -> Result<CandidateList> {
    let n = code.n();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if list_cap == 0 {
        return Err(Error::InvalidParameter(
            "list cap must be at least 1".into(),
        ));
    }
    let mut columns: Vec<usize> = (0..n).collect();
    columns.sort_by(|&a, &b| y[b].abs().total_cmp(&y[a].abs()).then(a.cmp(&b)));
    let mrb = code.generator().row_reduce(&columns)?;
    let basis = &mrb.reduced.row_vectors()[..mrb.rank];

    let mut base = BitVector::zeros(n);
    for (row, &p) in basis.iter().zip(&mrb.pivot_columns) {
        if y[p] < 0.0 {
            base.xor_assign(row);
        }
    }

    let mut scored: Vec<(f64, BitVector)> = Vec::new();
    for w in 0..=order.min(mrb.rank) {
        for tep in (0..mrb.rank).combinations(w) {
            let mut c = base.clone();
            for i in tep {
                c.xor_assign(&basis[i]);
            }
            scored.push((squared_distance_to_codeword(y, &c), c));
        }
    }
    counters.osd_reencodes += scored.len() as u64;

    // Stable sort keeps enumeration order among equal distances.
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored.truncate(list_cap);
    Ok(CandidateList {
        entries: scored
            .into_iter()
            .map(|(score, codeword)| Candidate { codeword, score })
            .collect(),
    })
}
