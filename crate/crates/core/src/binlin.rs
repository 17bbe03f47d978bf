//! Packed GF(2) vectors and matrices.
//!
//! Bit `j` of a [`BitVector`] lives in bit `j % 64` of word `j / 64`, words
//! ordered low index first. Bits past the logical length are always zero, so
//! whole-word operations (XOR, popcount, comparison) never need masking.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Fixed-length vector over GF(2).
///
/// Ordering compares the packed words low-index-first, which is the
/// lexicographic member order used inside sphere shells.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// All-zero vector. Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "BitVector length must be at least 1");
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        v.words.iter_mut().for_each(|w| *w = u64::MAX);
        v.clear_tail();
        v
    }

    /// Unit vector `e_index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (j, b) in bits.into_iter().enumerate() {
            if b {
                v.set(j, true);
            }
        }
        v
    }

    /// Builds from 0/1 bytes; any nonzero byte counts as 1.
    pub fn from_u8s(bits: &[u8]) -> Self {
        Self::from_bits(bits.iter().map(|&b| b != 0))
    }

    /// Builds from packed words, rejecting set bits past `len`.
    pub fn from_words(len: usize, words: Vec<u64>) -> Result<Self> {
        if len == 0 || words.len() != words_for(len) {
            return Err(Error::DimensionMismatch {
                expected: words_for(len.max(1)),
                found: words.len(),
            });
        }
        let v = Self { len, words };
        let mut check = v.clone();
        check.clear_tail();
        if check != v {
            return Err(Error::InvalidParameter(
                "set bits beyond vector length".into(),
            ));
        }
        Ok(v)
    }

    /// The low `len` bits of `value`, bit `j` of the integer becoming bit `j`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut v = Self::zeros(len);
        v.words[0] = value;
        v.clear_tail();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for API symmetry with collections.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len, "bit index {j} out of range {}", self.len);
        (self.words[j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, j: usize, bit: bool) {
        assert!(j < self.len, "bit index {j} out of range {}", self.len);
        let mask = 1u64 << (j % WORD_BITS);
        if bit {
            self.words[j / WORD_BITS] |= mask;
        } else {
            self.words[j / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, j: usize) {
        assert!(j < self.len, "bit index {j} out of range {}", self.len);
        self.words[j / WORD_BITS] ^= 1u64 << (j % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of set bits, by word popcount.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// In-place XOR. Panics on length mismatch; see [`BitVector::try_xor`].
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "BitVector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn try_xor(&self, other: &BitVector) -> Result<BitVector> {
        check_len(self.len, other.len)?;
        Ok(self.xor(other))
    }

    pub fn complement(&self) -> BitVector {
        let mut out = self.clone();
        out.words.iter_mut().for_each(|w| *w = !*w);
        out.clear_tail();
        out
    }

    /// Indices of set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.ones_iter().collect()
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |j| self.get(j))
    }

    pub fn to_u8s(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Bits `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start < end && end <= self.len);
        BitVector::from_bits((start..end).map(|j| self.get(j)))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

#[inline]
fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Hamming weight of `v`.
#[inline]
pub fn hamming_weight(v: &BitVector) -> usize {
    v.weight()
}

/// Hamming distance between equal-length vectors.
pub fn hamming_distance(a: &BitVector, b: &BitVector) -> Result<usize> {
    check_len(a.len, b.len)?;
    Ok(a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Output of [`BitMatrix::row_reduce`].
#[derive(Clone, Debug)]
pub struct RowReduction {
    /// Same shape as the input. Row `i < rank` has its leading one at
    /// `pivot_columns[i]`; remaining rows are zero.
    pub reduced: BitMatrix,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

impl BitMatrix {
    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::InvalidParameter("matrix needs at least one row".into()))?;
        let cols = first.len();
        for r in &rows {
            check_len(cols, r.len())?;
        }
        Ok(Self { cols, rows })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    /// `v · G`: XOR of the rows selected by `supp(v)`.
    pub fn mat_vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        check_len(self.rows(), v.len())?;
        let mut out = BitVector::zeros(self.cols);
        for i in v.ones_iter() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    /// Gauss-Jordan elimination visiting columns in `column_order`.
    ///
    /// Columns with no available pivot are skipped and the scan continues,
    /// so a rank-deficient prefix of the order is completed by later columns.
    pub fn row_reduce(&self, column_order: &[usize]) -> Result<RowReduction> {
        check_len(self.cols, column_order.len())?;
        let mut seen = vec![false; self.cols];
        for &c in column_order {
            if c >= self.cols || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidParameter(
                    "column order is not a permutation".into(),
                ));
            }
        }

        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let max_rank = self.rows().min(self.cols);
        for &col in column_order {
            if pivots.len() == max_rank {
                break;
            }
            let r = pivots.len();
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
        }
        let rank = pivots.len();
        Ok(RowReduction {
            reduced: BitMatrix {
                cols: self.cols,
                rows,
            },
            pivot_columns: pivots,
            rank,
        })
    }

    pub fn rank(&self) -> usize {
        let order: Vec<usize> = (0..self.cols).collect();
        self.row_reduce(&order).map(|r| r.rank).unwrap_or(0)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::BTreeSet;

    fn naive_weight(v: &BitVector) -> usize {
        (0..v.len()).filter(|&j| v.get(j)).count()
    }

    fn span(m: &BitMatrix) -> BTreeSet<BitVector> {
        let k = m.rows();
        (0u64..1 << k)
            .map(|msg| m.mat_vec_mul(&BitVector::from_u64(k, msg)).unwrap())
            .collect()
    }

    fn random_vec(rng: &mut impl rand::Rng, len: usize) -> BitVector {
        BitVector::from_bits((0..len).map(|_| rng.random::<bool>()))
    }

    #[test]
    fn mat_vec_mul_examples() {
        let g = BitMatrix::from_rows(vec![
            BitVector::from_u8s(&[1, 0, 1]),
            BitVector::from_u8s(&[0, 1, 1]),
        ])
        .unwrap();
        assert!(g.mat_vec_mul(&BitVector::zeros(2)).unwrap().is_zero());
        assert_eq!(g.mat_vec_mul(&BitVector::unit(2, 1)).unwrap(), *g.row(1));
        assert_eq!(
            g.mat_vec_mul(&BitVector::from_u8s(&[1, 1])).unwrap(),
            BitVector::from_u8s(&[1, 1, 0])
        );
        assert!(matches!(
            g.mat_vec_mul(&BitVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weight_and_distance() {
        assert_eq!(hamming_weight(&BitVector::zeros(128)), 0);
        assert_eq!(hamming_weight(&BitVector::ones(7)), 7);
        let a = BitVector::from_u8s(&[1, 0, 1, 1, 0]);
        assert_eq!(hamming_distance(&a, &a).unwrap(), 0);
        assert_eq!(hamming_distance(&a, &a.complement()).unwrap(), 5);
        assert!(hamming_distance(&a, &BitVector::zeros(4)).is_err());
    }

    #[test]
    fn packed_weight_matches_naive_loop() {
        let mut rng = rand::rng();
        for _ in 0..10_000 {
            let len: usize = rng.random_range(1..=512);
            let v = random_vec(&mut rng, len);
            assert_eq!(v.weight(), naive_weight(&v));
        }
    }

    #[test]
    fn tail_bits_stay_clear() {
        let v = BitVector::ones(70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
        assert_eq!(v.complement().weight(), 0);
        assert!(BitVector::from_words(3, vec![0b1000]).is_err());
    }

    #[test]
    fn row_reduce_identity() {
        let id = BitMatrix::identity(6);
        let order: Vec<usize> = (0..6).collect();
        let r = id.row_reduce(&order).unwrap();
        assert_eq!(r.rank, 6);
        assert_eq!(r.pivot_columns, order);
        assert_eq!(r.reduced, id);
    }

    #[test]
    fn row_reduce_duplicated_row() {
        let a = BitVector::from_u8s(&[1, 1, 0, 1]);
        let b = BitVector::from_u8s(&[0, 1, 1, 1]);
        let m = BitMatrix::from_rows(vec![a.clone(), b, a]).unwrap();
        let r = m.row_reduce(&[0, 1, 2, 3]).unwrap();
        assert_eq!(r.rank, 2);
        assert!(r.reduced.row(2).is_zero());
    }

    #[test]
    fn row_reduce_rejects_bad_order() {
        let m = BitMatrix::identity(3);
        assert!(m.row_reduce(&[0, 0, 1]).is_err());
        assert!(m.row_reduce(&[0, 1]).is_err());
    }

    #[test]
    fn row_reduce_skips_dependent_columns() {
        // Columns 0 and 1 are equal, so column 1 can never pivot after 0.
        let m = BitMatrix::from_rows(vec![
            BitVector::from_u8s(&[1, 1, 0]),
            BitVector::from_u8s(&[0, 0, 1]),
        ])
        .unwrap();
        let r = m.row_reduce(&[0, 1, 2]).unwrap();
        assert_eq!(r.pivot_columns, vec![0, 2]);
    }

    #[test]
    fn row_reduce_random_8x16_preserves_span() {
        let mut rng = rand::rng();
        for _ in 0..20 {
            let m =
                BitMatrix::from_rows((0..8).map(|_| random_vec(&mut rng, 16)).collect()).unwrap();
            let mut order: Vec<usize> = (0..16).collect();
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
            let r = m.row_reduce(&order).unwrap();
            assert_eq!(span(&r.reduced), span(&m));
            for (i, &p) in r.pivot_columns.iter().enumerate() {
                for k in 0..8 {
                    assert_eq!(r.reduced.get(k, p), k == i);
                }
            }
        }
    }

    fn arb_vec(len: usize) -> impl Strategy<Value = BitVector> {
        proptest::collection::vec(any::<bool>(), len).prop_map(BitVector::from_bits)
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..=10, 1usize..=24).prop_flat_map(|(k, n)| {
            proptest::collection::vec(arb_vec(n), k)
                .prop_map(|rows| BitMatrix::from_rows(rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn encoding_is_linear((g, a, b) in arb_matrix().prop_flat_map(|g| {
            let k = g.rows();
            (Just(g), arb_vec(k), arb_vec(k))
        })) {
            let lhs = g.mat_vec_mul(&a.xor(&b)).unwrap();
            let rhs = g.mat_vec_mul(&a).unwrap().xor(&g.mat_vec_mul(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn distance_is_weight_of_xor((a, b) in (1usize..300).prop_flat_map(|n| (arb_vec(n), arb_vec(n)))) {
            prop_assert_eq!(hamming_distance(&a, &b).unwrap(), a.xor(&b).weight());
        }

        #[test]
        fn row_reduce_preserves_span(g in arb_matrix()) {
            let order: Vec<usize> = (0..g.cols()).rev().collect();
            let r = g.row_reduce(&order).unwrap();
            prop_assert!(r.rank <= g.rows().min(g.cols()));
            prop_assert_eq!(span(&r.reduced), span(&g));
        }
    }
}
