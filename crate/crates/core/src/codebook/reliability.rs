use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static NR_SEQUENCE_TEXT: &str = include_str!("../../data/nr_reliability_1024.txt");

/// Where a polar reliability ranking came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReliabilitySource {
    /// Universal 5G NR sequence (TS 38.212, length 1024), filtered to `N`.
    Nr5g,
    /// Polarization weight `Σ b_i · 2^{i/4}`.
    BetaExpansion,
    /// Loaded from a user-supplied text file.
    External,
}

/// Synthetic-channel indices ordered from least to most reliable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReliabilityOrder {
    n: usize,
    ranked: Vec<usize>,
    source: ReliabilitySource,
}

impl ReliabilityOrder {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranked(&self) -> &[usize] {
        &self.ranked
    }

    pub fn source(&self) -> ReliabilitySource {
        self.source
    }

    /// Reads one index per line, least reliable first, keeping indices
    /// below `n`. Blank lines are ignored.
    pub fn from_file(path: impl AsRef<Path>, n: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let seq = parse_sequence(&text)?;
        from_sequence(&seq, n, ReliabilitySource::External)
    }
}

fn parse_sequence(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<usize>()
                .map_err(|e| Error::InvalidParameter(format!("bad reliability index {l:?}: {e}")))
        })
        .collect()
}

fn nr_sequence() -> &'static [usize] {
    static SEQ: OnceLock<Vec<usize>> = OnceLock::new();
    SEQ.get_or_init(|| parse_sequence(NR_SEQUENCE_TEXT).expect("bundled sequence parses"))
}

fn from_sequence(seq: &[usize], n: usize, source: ReliabilitySource) -> Result<ReliabilityOrder> {
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if seq.len() < n {
        return Err(Error::InvalidParameter(format!(
            "reliability sequence of length {} shorter than N = {n}",
            seq.len()
        )));
    }
    let ranked: Vec<usize> = seq.iter().copied().filter(|&i| i < n).collect();
    let mut seen = vec![false; n];
    for &i in &ranked {
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidParameter(format!(
                "reliability sequence repeats index {i}"
            )));
        }
    }
    if ranked.len() != n {
        return Err(Error::InvalidParameter(format!(
            "reliability sequence covers {} of {n} indices",
            ranked.len()
        )));
    }
    Ok(ReliabilityOrder { n, ranked, source })
}

fn polarization_weight(index: usize) -> f64 {
    (0..usize::BITS as usize)
        .filter(|&b| (index >> b) & 1 == 1)
        .map(|b| 2f64.powf(b as f64 / 4.0))
        .sum()
}

/// Ranking for block length `n`. The bundled table covers `n ≤ 1024`.
pub fn reliability_order(n: usize, source: ReliabilitySource) -> Result<ReliabilityOrder> {
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    match source {
        ReliabilitySource::Nr5g => {
            if n > nr_sequence().len() {
                return Err(Error::InvalidParameter(format!(
                    "bundled 5G sequence supports N <= 1024, got {n}"
                )));
            }
            from_sequence(nr_sequence(), n, source)
        }
        ReliabilitySource::BetaExpansion => {
            let mut ranked: Vec<usize> = (0..n).collect();
            // Stable sort keeps ascending index order among equal weights.
            ranked.sort_by(|&a, &b| polarization_weight(a).total_cmp(&polarization_weight(b)));
            Ok(ReliabilityOrder { n, ranked, source })
        }
        ReliabilitySource::External => Err(Error::InvalidParameter(
            "external reliability orders are loaded with ReliabilityOrder::from_file".into(),
        )),
    }
}
