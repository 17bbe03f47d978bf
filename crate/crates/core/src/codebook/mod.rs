//! Code constructions: generic linear codes, systematic CRC precoding, polar
//! codes, Reed-Muller codes and CRC-polar concatenation.
//!
//! A CRC-aided code is represented by its *effective* generator: row `i` is
//! the inner encoding of `crc_append(e_i)`. Its codewords are exactly the
//! inner codewords whose precoded vector passes the CRC.

mod crc;
mod polar;
mod reliability;
mod rm;

use std::fmt;

pub use crc::{crc_append, crc_check, CrcSpec};
pub use polar::{build_polar_code, polar_transform, polar_transform_bits};
pub use reliability::{reliability_order, ReliabilityOrder, ReliabilitySource};
pub use rm::build_rm_code;

use crate::binlin::{BitMatrix, BitVector};
use crate::error::{Error, Result};

/// Construction metadata carried alongside a generator.
#[derive(Clone, Debug, PartialEq)]
pub enum CodeKind {
    Generic,
    Polar {
        /// Info positions, ascending.
        info_set: Vec<usize>,
    },
    ReedMuller {
        m: usize,
        order: usize,
    },
    CrcConcatenated {
        crc: CrcSpec,
        inner: Box<LinearCode>,
    },
}

/// Binary linear `(N, K)` block code.
#[derive(Clone, PartialEq)]
pub struct LinearCode {
    generator: BitMatrix,
    kind: CodeKind,
    inverse: Inverse,
}

/// Recovers messages from codewords: for a codeword `c`, the message is the
/// XOR of `transforms[i]` over the rows `i` with `c[pivots[i]] = 1`.
#[derive(Clone, Debug, PartialEq)]
struct Inverse {
    pivots: Vec<usize>,
    transforms: Vec<BitVector>,
}

impl Inverse {
    fn new(generator: &BitMatrix) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        let augmented = BitMatrix::from_rows(
            (0..k)
                .map(|i| concat(generator.row(i), &BitVector::unit(k, i)))
                .collect(),
        )?;
        let order: Vec<usize> = (0..n + k).collect();
        let red = augmented.row_reduce(&order)?;
        if red.pivot_columns.iter().take_while(|&&p| p < n).count() != k {
            return Err(Error::InvalidParameter(format!(
                "generator is rank deficient ({} x {n})",
                k
            )));
        }
        let transforms = (0..k).map(|i| red.reduced.row(i).slice(n, n + k)).collect();
        Ok(Self {
            pivots: red.pivot_columns,
            transforms,
        })
    }
}

fn concat(a: &BitVector, b: &BitVector) -> BitVector {
    BitVector::from_bits(a.iter().chain(b.iter()))
}

impl LinearCode {
    /// Generic code from a full-rank generator.
    pub fn from_generator(generator: BitMatrix) -> Result<Self> {
        Self::with_kind(generator, CodeKind::Generic)
    }

    pub(crate) fn with_kind(generator: BitMatrix, kind: CodeKind) -> Result<Self> {
        let inverse = Inverse::new(&generator)?;
        Ok(Self {
            generator,
            kind,
            inverse,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn kind(&self) -> &CodeKind {
        &self.kind
    }

    pub fn crc(&self) -> Option<&CrcSpec> {
        match &self.kind {
            CodeKind::CrcConcatenated { crc, .. } => Some(crc),
            _ => None,
        }
    }

    pub fn inner(&self) -> Option<&LinearCode> {
        match &self.kind {
            CodeKind::CrcConcatenated { inner, .. } => Some(inner),
            _ => None,
        }
    }

    /// Info set when this is a polar code.
    pub fn polar_info_set(&self) -> Option<&[usize]> {
        match &self.kind {
            CodeKind::Polar { info_set } => Some(info_set),
            _ => None,
        }
    }

    /// `c = m G`.
    pub fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        self.generator.mat_vec_mul(msg)
    }

    /// Message of a codeword. The result is meaningful only for members of
    /// the code; use [`LinearCode::is_codeword`] when in doubt.
    pub fn unencode(&self, codeword: &BitVector) -> BitVector {
        let mut msg = BitVector::zeros(self.k());
        for (p, t) in self.inverse.pivots.iter().zip(&self.inverse.transforms) {
            if codeword.get(*p) {
                msg.xor_assign(t);
            }
        }
        msg
    }

    pub fn is_codeword(&self, word: &BitVector) -> bool {
        word.len() == self.n()
            && self
                .encode(&self.unencode(word))
                .map(|c| &c == word)
                .unwrap_or(false)
    }

    /// Short identifier used in reports, e.g. `ca-polar-256-16`.
    pub fn label(&self) -> String {
        let family = match &self.kind {
            CodeKind::Generic => "linear",
            CodeKind::Polar { .. } => "polar",
            CodeKind::ReedMuller { .. } => "rm",
            CodeKind::CrcConcatenated { inner, .. } => match inner.kind {
                CodeKind::Polar { .. } => "ca-polar",
                _ => "ca",
            },
        };
        format!("{family}-{}-{}", self.n(), self.k())
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("n", &self.n())
            .field("k", &self.k())
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

/// Concatenates a CRC outer code with `inner`.
///
/// `inner.k()` must equal `k + crc.degree()`.
pub fn build_ca_code(k: usize, crc: CrcSpec, inner: LinearCode) -> Result<LinearCode> {
    if inner.k() != k + crc.degree() {
        return Err(Error::DimensionMismatch {
            expected: k + crc.degree(),
            found: inner.k(),
        });
    }
    let rows = (0..k)
        .map(|i| inner.encode(&crc_append(&BitVector::unit(k, i), &crc)))
        .collect::<Result<Vec<_>>>()?;
    LinearCode::with_kind(
        BitMatrix::from_rows(rows)?,
        CodeKind::CrcConcatenated {
            crc,
            inner: Box::new(inner),
        },
    )
}

/// CRC-aided polar code with `k` message bits over the bundled or computed
/// reliability order.
pub fn build_ca_polar_code(
    n: usize,
    k: usize,
    crc: CrcSpec,
    order: &ReliabilityOrder,
) -> Result<LinearCode> {
    let inner = build_polar_code(n, k + crc.degree(), order)?;
    build_ca_code(k, crc, inner)
}
