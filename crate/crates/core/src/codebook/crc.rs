use crate::binlin::BitVector;
use crate::error::{Error, Result};

/// Generator polynomial of a systematic CRC.
///
/// Coefficients are stored constant term first. Both the constant and the
/// leading coefficient must be one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CrcSpec {
    coefficients: BitVector,
}

impl CrcSpec {
    /// Largest supported degree; the shift register is a single word.
    pub const MAX_DEGREE: usize = 63;

    pub fn new(coefficients: BitVector) -> Result<Self> {
        let degree = coefficients.len() - 1;
        if degree == 0 || degree > Self::MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "CRC degree must be in 1..={}, got {degree}",
                Self::MAX_DEGREE
            )));
        }
        if !coefficients.get(0) || !coefficients.get(degree) {
            return Err(Error::InvalidParameter(
                "CRC polynomial needs unit constant and leading coefficients".into(),
            ));
        }
        Ok(Self { coefficients })
    }

    /// Polynomial with the given nonzero exponents, e.g. `[0, 5, 9, 10, 11]`.
    pub fn from_exponents(exponents: &[usize]) -> Result<Self> {
        let degree = exponents
            .iter()
            .copied()
            .max()
            .ok_or_else(|| Error::InvalidParameter("empty CRC polynomial".into()))?;
        let mut c = BitVector::zeros(degree + 1);
        for &e in exponents {
            c.set(e, true);
        }
        Self::new(c)
    }

    /// g(x) = 1 + x^5 + x^9 + x^10 + x^11.
    pub fn crc11() -> Self {
        Self::from_exponents(&[0, 5, 9, 10, 11]).expect("valid polynomial")
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &BitVector {
        &self.coefficients
    }

    /// Exponents with nonzero coefficients, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        self.coefficients.support()
    }

    // g(x) without its leading term, bit i = coefficient of x^i.
    fn feedback_mask(&self) -> u64 {
        self.coefficients.words()[0] & low_mask(self.degree())
    }

    /// Remainder of `bits(x) · x^degree` mod g(x). `bits[0]` is the
    /// highest-degree coefficient.
    fn shifted_remainder(&self, bits: impl Iterator<Item = bool>) -> u64 {
        let deg = self.degree();
        let mask = low_mask(deg);
        let poly = self.feedback_mask();
        let mut reg = 0u64;
        for b in bits {
            let feedback = ((reg >> (deg - 1)) & 1 == 1) ^ b;
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= poly;
            }
        }
        reg
    }
}

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Appends the CRC parity of `msg` (message first, MSB-first division).
pub fn crc_append(msg: &BitVector, crc: &CrcSpec) -> BitVector {
    let deg = crc.degree();
    let k = msg.len();
    let rem = crc.shifted_remainder(msg.iter());
    let mut out = BitVector::zeros(k + deg);
    for j in msg.ones_iter() {
        out.set(j, true);
    }
    for j in 0..deg {
        if (rem >> (deg - 1 - j)) & 1 == 1 {
            out.set(k + j, true);
        }
    }
    out
}

/// True iff `v`, read as a polynomial with `v[0]` highest, is divisible by g(x).
pub fn crc_check(v: &BitVector, crc: &CrcSpec) -> Result<bool> {
    let deg = crc.degree();
    if v.len() <= deg {
        return Err(Error::InvalidParameter(format!(
            "vector of length {} too short for CRC of degree {deg}",
            v.len()
        )));
    }
    let k = v.len() - deg;
    let rem = crc.shifted_remainder((0..k).map(|j| v.get(j)));
    let parity = (0..deg).fold(0u64, |acc, j| (acc << 1) | u64::from(v.get(k + j)));
    Ok(rem == parity)
}
