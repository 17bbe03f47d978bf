//! Experiment configuration (TOML).
//!
//! ```toml
//! seed = 1
//! sphere_file = "ca-polar-256-16-r3.cws"
//!
//! [code]
//! family = "ca_polar"
//! n = 256
//! k = 16
//!
//! [channel]
//! snr_db = [1.0, 1.5, 2.0]
//!
//! [stage1]
//! decoder = "scl"
//! list_size = 16
//!
//! [wsd]
//! radius = 3
//! max_iterations = 4
//! num_paths = 16
//!
//! [stop]
//! max_trials = 100000
//! min_errors = 100
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::SnrConvention;
use crate::codebook::{
    build_ca_polar_code, build_polar_code, build_rm_code, reliability_order, CrcSpec, LinearCode,
    ReliabilityOrder, ReliabilitySource,
};
use crate::complexity::binomial;
use crate::decoders::{default_filter_size, ActivationMode, Stage1, WsdParams};
use crate::error::{Error, Result};

/// CRC-11 used by CA-polar codes unless overridden.
pub const DEFAULT_CRC_EXPONENTS: [usize; 5] = [11, 10, 9, 5, 0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeFamily {
    Polar,
    CaPolar,
    Rm,
}

fn default_reliability() -> ReliabilitySource {
    ReliabilitySource::Nr5g
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub family: CodeFamily,
    pub n: usize,
    /// Message length (CRC bits excluded).
    pub k: usize,
    /// CRC polynomial as a list of exponents; CA-polar only.
    #[serde(default)]
    pub crc: Option<Vec<usize>>,
    #[serde(default = "default_reliability")]
    pub reliability: ReliabilitySource,
    /// Ranking file for `reliability = "external"`.
    #[serde(default)]
    pub reliability_file: Option<PathBuf>,
}

impl CodeSpec {
    pub fn new(family: CodeFamily, n: usize, k: usize) -> Self {
        Self {
            family,
            n,
            k,
            crc: None,
            reliability: ReliabilitySource::Nr5g,
            reliability_file: None,
        }
    }

    fn order(&self) -> Result<ReliabilityOrder> {
        match (&self.reliability, &self.reliability_file) {
            (ReliabilitySource::External, Some(path)) => ReliabilityOrder::from_file(path, self.n),
            (ReliabilitySource::External, None) => Err(Error::Config(
                "reliability = \"external\" needs reliability_file".into(),
            )),
            (source, _) => reliability_order(self.n, *source),
        }
    }

    pub fn build(&self) -> Result<LinearCode> {
        if self.crc.is_some() && self.family != CodeFamily::CaPolar {
            return Err(Error::Config("crc is only valid for ca_polar codes".into()));
        }
        match self.family {
            CodeFamily::Polar => build_polar_code(self.n, self.k, &self.order()?),
            CodeFamily::CaPolar => {
                let exps = self.crc.as_deref().unwrap_or(&DEFAULT_CRC_EXPONENTS);
                build_ca_polar_code(
                    self.n,
                    self.k,
                    CrcSpec::from_exponents(exps)?,
                    &self.order()?,
                )
            }
            CodeFamily::Rm => {
                if !self.n.is_power_of_two() {
                    return Err(Error::NotPowerOfTwo(self.n));
                }
                let m = self.n.trailing_zeros() as usize;
                let mut dim = 0u128;
                for order in 0..=m {
                    dim += binomial(m, order);
                    if dim == self.k as u128 {
                        return build_rm_code(m, order);
                    }
                }
                Err(Error::Config(format!(
                    "no Reed-Muller code of length {} has dimension {}",
                    self.n, self.k
                )))
            }
        }
    }
}

/// `family:n:k` with family one of `polar`, `ca-polar`, `rm`.
impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad code spec {s:?}; expected family:n:k"));
        let parts: Vec<&str> = s.split(':').collect();
        let [family, n, k] = parts[..] else {
            return Err(bad());
        };
        let family = match family {
            "polar" => CodeFamily::Polar,
            "ca-polar" | "ca_polar" => CodeFamily::CaPolar,
            "rm" => CodeFamily::Rm,
            _ => return Err(bad()),
        };
        Ok(Self::new(
            family,
            n.parse().map_err(|_| bad())?,
            k.parse().map_err(|_| bad())?,
        ))
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            CodeFamily::Polar => "polar",
            CodeFamily::CaPolar => "ca-polar",
            CodeFamily::Rm => "rm",
        };
        write!(f, "{family}:{}:{}", self.n, self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub snr_db: Vec<f64>,
    #[serde(default)]
    pub convention: SnrConvention,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage1Kind {
    Scl,
    Osd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage1Spec {
    pub decoder: Stage1Kind,
    /// SCL list size.
    #[serde(default)]
    pub list_size: Option<usize>,
    /// OSD order.
    #[serde(default)]
    pub order: Option<usize>,
    /// OSD candidates kept (default 16).
    #[serde(default)]
    pub list_cap: Option<usize>,
}

impl Stage1Spec {
    pub fn resolve(&self) -> Result<Stage1> {
        match self.decoder {
            Stage1Kind::Scl => {
                if self.order.is_some() || self.list_cap.is_some() {
                    return Err(Error::Config("order and list_cap apply to osd only".into()));
                }
                let list_size = self
                    .list_size
                    .ok_or_else(|| Error::Config("scl needs list_size".into()))?;
                if list_size == 0 {
                    return Err(Error::Config("list_size must be at least 1".into()));
                }
                Ok(Stage1::Scl { list_size })
            }
            Stage1Kind::Osd => {
                if self.list_size.is_some() {
                    return Err(Error::Config("list_size applies to scl only".into()));
                }
                let order = self
                    .order
                    .ok_or_else(|| Error::Config("osd needs order".into()))?;
                let list_cap = self.list_cap.unwrap_or(16);
                if list_cap == 0 {
                    return Err(Error::Config("list_cap must be at least 1".into()));
                }
                Ok(Stage1::Osd { order, list_cap })
            }
        }
    }
}

fn default_iterations() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WsdSpec {
    pub radius: usize,
    /// Filter size `m`; omitted means `max(10, ⌈0.02 |S_r(0)|⌉)`.
    #[serde(default)]
    pub filter_size: Option<usize>,
    #[serde(default = "default_iterations")]
    pub max_iterations: usize,
    pub num_paths: usize,
    #[serde(default)]
    pub activation: ActivationMode,
}

impl WsdSpec {
    pub fn resolve(&self, sphere_size: usize) -> Result<WsdParams> {
        WsdParams::new(
            self.radius,
            self.filter_size
                .unwrap_or_else(|| default_filter_size(sphere_size)),
            self.max_iterations,
            self.num_paths,
            self.activation,
        )
        .map_err(|e| Error::Config(e.to_string()))
    }
}

fn default_min_errors() -> u64 {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopSpec {
    pub max_trials: u64,
    #[serde(default = "default_min_errors")]
    pub min_errors: u64,
    /// Per-SNR-point cap, checked between trial batches.
    #[serde(default)]
    pub max_wall_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default)]
    pub sphere_file: Option<PathBuf>,
    pub code: CodeSpec,
    pub channel: ChannelSpec,
    pub stage1: Stage1Spec,
    /// Absent means stage 1 only.
    #[serde(default)]
    pub wsd: Option<WsdSpec>,
    pub stop: StopSpec,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let snr = &self.channel.snr_db;
        if snr.is_empty() {
            return Err(Error::Config("snr_db grid is empty".into()));
        }
        if snr.iter().any(|s| !s.is_finite()) || snr.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "snr_db grid must be finite and strictly ascending".into(),
            ));
        }
        if self.stop.min_errors == 0 {
            return Err(Error::Config("min_errors must be at least 1".into()));
        }
        if self.stop.max_trials == 0 {
            return Err(Error::Config("max_trials must be at least 1".into()));
        }
        if self
            .stop
            .max_wall_seconds
            .is_some_and(|s| s.is_nan() || s <= 0.0)
        {
            return Err(Error::Config("max_wall_seconds must be positive".into()));
        }
        self.stage1.resolve()?;
        if let Some(w) = &self.wsd {
            w.resolve(1)?;
        }
        Ok(())
    }
}
