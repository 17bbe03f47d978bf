use crate::binlin::BitVector;
use crate::channel::squared_distance_to_codeword;
use crate::codebook::LinearCode;
use crate::complexity::OpCounter;
use crate::error::{Error, Result};
use crate::wsphere::gray;

/// Largest dimension accepted by [`ml_decode`].
pub const MAX_ML_K: usize = 26;

#[derive(Clone, Debug, PartialEq)]
pub struct MlOutcome {
    pub codeword: BitVector,
    pub message: BitVector,
    pub squared_ed: f64,
}

/// Exhaustive maximum-likelihood decoding over BPSK/AWGN.
///
/// Maximizes the correlation `⟨y, x(c)⟩` over all codewords, visiting
/// messages in Gray-code order so each step only touches the support of one
/// generator row. Ties go to the smallest message index.
pub fn ml_decode(y: &[f64], code: &LinearCode) -> Result<MlOutcome> {
    ml_decode_counted(y, code, &mut OpCounter::default())
}

/// [`ml_decode`], charging the nominal `2^K` ED units to `counters`.
pub fn ml_decode_counted(
    y: &[f64],
    code: &LinearCode,
    counters: &mut OpCounter,
) -> Result<MlOutcome> {
    let k = code.k();
    if k > MAX_ML_K {
        return Err(Error::EnumerationBudget { k, max: MAX_ML_K });
    }
    if y.len() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            found: y.len(),
        });
    }
    let supports: Vec<Vec<usize>> = code
        .generator()
        .row_vectors()
        .iter()
        .map(BitVector::support)
        .collect();

    // yx[j] = y_j · x_j for the current codeword; starts at the zero codeword.
    let mut yx: Vec<f64> = y.to_vec();
    let mut corr: f64 = yx.iter().sum();
    let mut best_corr = corr;
    let mut best_msg = 0u64;
    for t in 1..1u64 << k {
        for &j in &supports[t.trailing_zeros() as usize] {
            corr -= 2.0 * yx[j];
            yx[j] = -yx[j];
        }
        let msg = gray(t);
        if corr > best_corr || (corr == best_corr && msg < best_msg) {
            best_corr = corr;
            best_msg = msg;
        }
    }
    counters.ed_evaluations += 1u64 << k;

    let message = BitVector::from_u64(k, best_msg);
    let codeword = code.encode(&message)?;
    let squared_ed = squared_distance_to_codeword(y, &codeword);
    Ok(MlOutcome {
        codeword,
        message,
        squared_ed,
    })
}
