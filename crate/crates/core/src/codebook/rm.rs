use super::{CodeKind, LinearCode};
use crate::binlin::{BitMatrix, BitVector};
use crate::error::{Error, Result};

/// Reed-Muller code RM(order, m) of length `2^m`.
///
/// Rows are evaluation vectors of the monomials of degree `0..=order` in `m`
/// Boolean variables, grouped by degree and, within a degree, by the
/// lexicographic order of the variable subsets. Point `p` assigns bit `i`
/// of `p` to variable `i`.
pub fn build_rm_code(m: usize, order: usize) -> Result<LinearCode> {
    if m == 0 || m > 16 || order > m {
        return Err(Error::InvalidParameter(format!(
            "invalid Reed-Muller parameters (m = {m}, r = {order})"
        )));
    }
    let n = 1usize << m;
    let mut rows = Vec::new();
    for degree in 0..=order {
        for vars in subsets(m, degree) {
            let mask: usize = vars.iter().map(|&v| 1 << v).sum();
            rows.push(BitVector::from_bits((0..n).map(|p| p & mask == mask)));
        }
    }
    LinearCode::with_kind(
        BitMatrix::from_rows(rows)?,
        CodeKind::ReedMuller { m, order },
    )
}

fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..m).combinations(size).collect()
}
