//! Weight spectra and code-weight spheres.
//!
//! The sphere `S_r(0)` holds every codeword whose weight is among the
//! `r + 1` smallest weights of the spectrum, grouped into Hamming shells.
//! Because the code is linear, `S_r(c) = c ⊕ S_r(0)` for any codeword `c`,
//! so one precomputed sphere serves every search center.

mod enumerate;
mod io;

pub use enumerate::{collect_low_weight, gray, weight_histogram, MAX_ENUMERATION_K};
pub use io::{load_sphere, read_sphere, save_sphere, write_sphere, SPHERE_MAGIC};

use crate::binlin::BitVector;
use crate::codebook::LinearCode;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub weight: usize,
    pub count: u64,
}

/// Distinct codeword weights with multiplicities, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpectrum {
    entries: Vec<SpectrumEntry>,
    cap: Option<usize>,
    overflow: u64,
}

impl WeightSpectrum {
    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    /// `d_ℓ` for `ℓ = 0..=L`.
    pub fn weights(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.weight).collect()
    }

    /// Index `L` of the largest listed weight.
    pub fn max_index(&self) -> usize {
        self.entries.len() - 1
    }

    /// Codewords heavier than the cap, aggregated.
    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    /// Total number of codewords, overflow included.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum::<u64>() + self.overflow
    }

    pub fn count_at(&self, weight: usize) -> u64 {
        self.entries
            .iter()
            .find(|e| e.weight == weight)
            .map_or(0, |e| e.count)
    }

    /// `|S_r(0)|`, zero codeword included.
    pub fn sphere_size(&self, r: usize) -> Option<u64> {
        (r < self.entries.len()).then(|| self.entries[..=r].iter().map(|e| e.count).sum())
    }

    /// Builds a spectrum from a weight histogram indexed by weight.
    pub fn from_histogram(histogram: &[u64], cap: Option<usize>) -> Self {
        let mut entries = Vec::new();
        let mut overflow = 0;
        for (w, &count) in histogram.iter().enumerate() {
            if count == 0 {
                continue;
            }
            match cap {
                Some(c) if w > c => overflow += count,
                _ => entries.push(SpectrumEntry { weight: w, count }),
            }
        }
        Self {
            entries,
            cap,
            overflow,
        }
    }
}

/// Weight spectrum by Gray-code enumeration of all `2^K` codewords.
///
/// With `weight_cap`, weights above the cap are folded into
/// [`WeightSpectrum::overflow`].
pub fn enumerate_spectrum(code: &LinearCode, weight_cap: Option<usize>) -> Result<WeightSpectrum> {
    let hist = weight_histogram(code)?;
    Ok(WeightSpectrum::from_histogram(&hist, weight_cap))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellInfo {
    pub weight: usize,
    pub count: usize,
}

/// Precomputed `S_r(0)`.
///
/// Members are stored shell-major (lexicographic by packed words within a
/// shell) with the zero codeword at index 0. Hop candidates are members
/// `1..len()`; their supports are cached in a flat index array.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeWeightSphere {
    n: usize,
    k: usize,
    radius: usize,
    shells: Vec<ShellInfo>,
    members: Vec<BitVector>,
    support_offsets: Vec<usize>,
    support_indices: Vec<u32>,
    mean_nonzero_weight: f64,
}

impl CodeWeightSphere {
    /// Assembles a sphere from explicit shells. Shell 0 must be `{0}` and
    /// every member must carry its shell's weight.
    pub fn from_shells(n: usize, k: usize, shells: Vec<(usize, Vec<BitVector>)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match shells.first() {
            Some((0, m)) if m.len() == 1 && m[0].is_zero() => {}
            _ => return bad("shell 0 must contain exactly the zero codeword".into()),
        }
        let mut infos = Vec::with_capacity(shells.len());
        let mut members = Vec::new();
        let mut prev: Option<usize> = None;
        for (weight, shell) in shells {
            if prev.is_some_and(|p| p >= weight) {
                return bad("shell weights must be strictly increasing".into());
            }
            if shell.is_empty() {
                return bad(format!("shell of weight {weight} is empty"));
            }
            for m in &shell {
                if m.len() != n || m.weight() != weight {
                    return bad(format!(
                        "member does not belong to shell of weight {weight}"
                    ));
                }
            }
            prev = Some(weight);
            infos.push(ShellInfo {
                weight,
                count: shell.len(),
            });
            members.extend(shell);
        }

        let mut support_offsets = Vec::with_capacity(members.len());
        let mut support_indices = Vec::new();
        support_offsets.push(0);
        for m in &members[1..] {
            support_indices.extend(m.ones_iter().map(|j| j as u32));
            support_offsets.push(support_indices.len());
        }
        let nonzero = members.len() - 1;
        let mean_nonzero_weight = if nonzero == 0 {
            0.0
        } else {
            support_indices.len() as f64 / nonzero as f64
        };
        Ok(Self {
            n,
            k,
            radius: infos.len() - 1,
            shells: infos,
            members,
            support_offsets,
            support_indices,
            mean_nonzero_weight,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Radius index `r`.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn shells(&self) -> &[ShellInfo] {
        &self.shells
    }

    /// Members of shell `l`.
    pub fn shell_members(&self, l: usize) -> &[BitVector] {
        let start: usize = self.shells[..l].iter().map(|s| s.count).sum();
        &self.members[start..start + self.shells[l].count]
    }

    /// `|S_r(0)|` including the zero codeword.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of hop candidates (nonzero members).
    pub fn nonzero_len(&self) -> usize {
        self.members.len() - 1
    }

    pub fn members(&self) -> &[BitVector] {
        &self.members
    }

    /// Nonzero member `i` (`0 ≤ i < nonzero_len()`).
    #[inline]
    pub fn candidate(&self, i: usize) -> &BitVector {
        &self.members[i + 1]
    }

    #[inline]
    pub fn candidate_support(&self, i: usize) -> &[u32] {
        &self.support_indices[self.support_offsets[i]..self.support_offsets[i + 1]]
    }

    /// Mean weight over nonzero members (`w̄`).
    pub fn mean_nonzero_weight(&self) -> f64 {
        self.mean_nonzero_weight
    }

    /// The sub-sphere `S_r'(0)` for `r' ≤ r`.
    pub fn truncated(&self, radius: usize) -> Result<Self> {
        if radius > self.radius {
            return Err(Error::RadiusTooLarge {
                requested: radius,
                available: self.radius,
            });
        }
        let shells = (0..=radius)
            .map(|l| (self.shells[l].weight, self.shell_members(l).to_vec()))
            .collect();
        Self::from_shells(self.n, self.k, shells)
    }
}

/// Collects `S_r(0)` for `code`.
pub fn build_sphere(code: &LinearCode, r: usize) -> Result<CodeWeightSphere> {
    let spectrum = enumerate_spectrum(code, None)?;
    build_sphere_with_spectrum(code, r, &spectrum)
}

/// Like [`build_sphere`] but reuses a spectrum computed earlier.
pub fn build_sphere_with_spectrum(
    code: &LinearCode,
    r: usize,
    spectrum: &WeightSpectrum,
) -> Result<CodeWeightSphere> {
    if r > spectrum.max_index() {
        return Err(Error::RadiusTooLarge {
            requested: r,
            available: spectrum.max_index(),
        });
    }
    let weights = spectrum.weights();
    let d_r = weights[r];
    let mut low = collect_low_weight(code, d_r)?;
    low.sort_unstable_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.cmp(b)));

    let mut shells: Vec<(usize, Vec<BitVector>)> =
        weights[..=r].iter().map(|&w| (w, Vec::new())).collect();
    for cw in low {
        let w = cw.weight();
        let l = weights[..=r]
            .binary_search(&w)
            .map_err(|_| Error::InvalidParameter(format!("weight {w} missing from spectrum")))?;
        shells[l].1.push(cw);
    }
    CodeWeightSphere::from_shells(code.n(), code.k(), shells)
}

/// `center ⊕ s`: maps a member of `S_r(0)` into `S_r(center)`.
pub fn translate_member(center: &BitVector, s: &BitVector) -> Result<BitVector> {
    center.try_xor(s)
}
