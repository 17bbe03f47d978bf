//! Decoders: exhaustive ML, SCL, order-k OSD, code-weight sphere descent
//! and the two-stage pipeline combining a list decoder with multipoint
//! sphere search.

mod ml;
mod osd;
mod pipeline;
mod scl;
mod wsd;

pub use ml::{ml_decode, ml_decode_counted, MlOutcome, MAX_ML_K};
pub use osd::osd_decode;
pub use pipeline::{two_stage_decode, Stage1};
pub use scl::{scl_decode, scl_decode_with, CheckNodeRule};
pub use wsd::{
    default_filter_size, gain_metric, mp_wsd, wsd_step, wsd_trajectory, ActivationMode,
    StepOutcome, TrajectoryTrace, WsdParams,
};

use crate::binlin::BitVector;
use crate::complexity::OpCounter;

/// A candidate codeword with its decoder-specific score (lower is better).
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub codeword: BitVector,
    pub score: f64,
}

/// Stage-1 output, best first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateList {
    pub entries: Vec<Candidate>,
}

impl CandidateList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.entries.first()
    }

    pub fn codewords(&self) -> impl Iterator<Item = &BitVector> {
        self.entries.iter().map(|c| &c.codeword)
    }
}

/// Which part of the pipeline produced the final decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodeStage {
    /// A stage-1 candidate passed the CRC; no sphere search ran.
    Stage1CrcPass,
    /// Sphere search disabled; stage-1 decision returned as is.
    Stage1Only,
    /// Sphere search ran.
    MpWsd,
}

#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub best_codeword: BitVector,
    pub best_message: BitVector,
    /// `‖y − x(best_codeword)‖²`.
    pub squared_ed: f64,
    pub stage: DecodeStage,
    pub traces: Vec<TrajectoryTrace>,
    /// Outer iterations executed by the multipoint search.
    pub wsd_iterations: usize,
    pub counters: OpCounter,
}

impl DecodeResult {
    pub fn wsd_activated(&self) -> bool {
        self.stage == DecodeStage::MpWsd
    }
}
