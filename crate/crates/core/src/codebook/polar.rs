use super::reliability::ReliabilityOrder;
use super::{CodeKind, LinearCode};
use crate::binlin::{BitMatrix, BitVector};
use crate::error::{Error, Result};

/// In-place Arikan butterfly on 0/1 bytes, natural order.
///
/// Stage `h` XORs `x[i + h]` into `x[i]` for every block of `2h`; after all
/// stages `x = u · F^{⊗n}` with `F = [[1,0],[1,1]]`. The map is an involution.
pub fn polar_transform_bits(x: &mut [u8]) {
    let n = x.len();
    let mut h = 1;
    while h < n {
        for block in x.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        h *= 2;
    }
}

/// Polar transform of a packed vector whose length is a power of two.
pub fn polar_transform(u: &BitVector) -> Result<BitVector> {
    let n = u.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut bits = u.to_u8s();
    polar_transform_bits(&mut bits);
    Ok(BitVector::from_u8s(&bits))
}

/// Polar code keeping the `k` most reliable synthetic channels.
///
/// Generator rows are `polar_transform(e_i)` for the info set in ascending
/// index order, so message bit `t` lands on the `t`-th smallest info index.
pub fn build_polar_code(n: usize, k: usize, order: &ReliabilityOrder) -> Result<LinearCode> {
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if order.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: order.n(),
        });
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "polar dimension {k} not in 1..={n}"
        )));
    }
    let mut info_set: Vec<usize> = order.ranked()[n - k..].to_vec();
    info_set.sort_unstable();
    let rows = info_set
        .iter()
        .map(|&i| polar_transform(&BitVector::unit(n, i)))
        .collect::<Result<Vec<_>>>()?;
    LinearCode::with_kind(BitMatrix::from_rows(rows)?, CodeKind::Polar { info_set })
}
