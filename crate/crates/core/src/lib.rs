//! Two-stage near-ML decoding of short block codes: list decoding followed
//! by code-weight sphere search, plus the tooling to measure it.

pub mod binlin;
pub mod channel;
pub mod codebook;
pub mod complexity;
pub mod decoders;
pub mod error;
pub mod sim;
pub mod wsphere;

pub use binlin::{BitMatrix, BitVector};
pub use channel::{ChannelParams, ReceivedVector, SnrConvention};
pub use codebook::{CodeKind, CrcSpec, LinearCode, ReliabilityOrder, ReliabilitySource};
pub use complexity::OpCounter;
pub use decoders::{ActivationMode, CandidateList, DecodeResult, DecodeStage, Stage1, WsdParams};
pub use error::{Error, Result};
pub use wsphere::{CodeWeightSphere, WeightSpectrum};
