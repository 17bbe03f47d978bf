use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::stats::wilson_interval;
use crate::binlin::BitVector;
use crate::channel::{add_noise, modulate, stream_rng, ChannelParams};
use crate::codebook::LinearCode;
use crate::complexity::OpCounter;
use crate::decoders::{ml_decode_counted, two_stage_decode, DecodeStage, Stage1, WsdParams};
use crate::error::{Error, Result};
use crate::wsphere::{load_sphere, CodeWeightSphere};

/// Trials decoded between stopping-rule checks. Fixed so that results do
/// not depend on the worker count.
pub const TRIAL_BATCH: u64 = 128;

/// Stream of trial `trial` at SNR point `snr_index`.
pub fn stream_id(snr_index: usize, trial: u64) -> u64 {
    ((snr_index as u64) << 40) | trial
}

/// A transmitted message and the channel output for it.
#[derive(Clone, Debug)]
pub struct TrialInput {
    pub message: BitVector,
    pub y: Vec<f64>,
}

/// Draws the message, then the noise, from the trial's own stream.
pub fn trial_input(
    code: &LinearCode,
    sigma: f64,
    seed: u64,
    snr_index: usize,
    trial: u64,
) -> Result<TrialInput> {
    let mut rng = stream_rng(seed, stream_id(snr_index, trial));
    let message = BitVector::from_bits((0..code.k()).map(|_| rng.random::<bool>()));
    let x = modulate(&code.encode(&message)?);
    let y = add_noise(&x, sigma, &mut rng).into_inner();
    Ok(TrialInput { message, y })
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct TrialOutcome {
    error: bool,
    crc_pass: bool,
    activated: bool,
    ed_units: f64,
    iterations: usize,
}

/// One SNR point of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub code: String,
    pub stage1: String,
    pub wsd_r: usize,
    pub wsd_m: usize,
    pub wsd_j: usize,
    pub l_init: usize,
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub bler: f64,
    pub bler_lo: f64,
    pub bler_hi: f64,
    /// Fraction of trials in which sphere search ran.
    pub p_act: f64,
    /// Mean measured cost per trial.
    pub ed_units: f64,
    /// Mean outer iterations over activated trials.
    pub avg_iters: f64,
    pub seed: u64,
    pub crc_passes: u64,
    pub activations: u64,
    pub wall_seconds: f64,
}

/// A configuration with its code and sphere materialized.
#[derive(Clone, Debug)]
pub struct Experiment {
    config: ExperimentConfig,
    code: LinearCode,
    stage1: Stage1,
    wsd: Option<(WsdParams, CodeWeightSphere)>,
}

fn resolve_path(path: &Path, data_dir: Option<&Path>) -> PathBuf {
    match data_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

impl Experiment {
    /// Loads the sphere file, resolving relative paths against `data_dir`.
    /// A radius-0 search needs no file.
    pub fn new(config: ExperimentConfig, data_dir: Option<&Path>) -> Result<Self> {
        let sphere = match (&config.wsd, &config.sphere_file) {
            (None, _) => None,
            (Some(_), Some(path)) => Some(load_sphere(resolve_path(path, data_dir))?),
            (Some(w), None) if w.radius == 0 => None,
            (Some(_), None) => {
                return Err(Error::Config(
                    "sphere_file is required when the wsd radius is above 0".into(),
                ))
            }
        };
        Self::with_sphere(config, sphere)
    }

    /// Uses `sphere` instead of reading `sphere_file`. A sphere of larger
    /// radius than configured is truncated.
    pub fn with_sphere(config: ExperimentConfig, sphere: Option<CodeWeightSphere>) -> Result<Self> {
        config.validate()?;
        let code = config.code.build()?;
        let stage1 = config.stage1.resolve()?;
        let wsd = match &config.wsd {
            None => None,
            Some(spec) => {
                let sphere = match sphere {
                    Some(s) => s,
                    None if spec.radius == 0 => CodeWeightSphere::from_shells(
                        code.n(),
                        code.k(),
                        vec![(0, vec![BitVector::zeros(code.n())])],
                    )?,
                    None => return Err(Error::Config("no sphere supplied".into())),
                };
                if sphere.n() != code.n() || sphere.k() != code.k() {
                    return Err(Error::Config(format!(
                        "sphere is for a ({}, {}) code, config describes ({}, {})",
                        sphere.n(),
                        sphere.k(),
                        code.n(),
                        code.k()
                    )));
                }
                let sphere = if sphere.radius() > spec.radius {
                    sphere.truncated(spec.radius)?
                } else if sphere.radius() < spec.radius {
                    return Err(Error::RadiusTooLarge {
                        requested: spec.radius,
                        available: sphere.radius(),
                    });
                } else {
                    sphere
                };
                Some((spec.resolve(sphere.len())?, sphere))
            }
        };
        Ok(Self {
            config,
            code,
            stage1,
            wsd,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn stage1(&self) -> Stage1 {
        self.stage1
    }

    pub fn wsd_params(&self) -> Option<&WsdParams> {
        self.wsd.as_ref().map(|(p, _)| p)
    }

    pub fn sphere(&self) -> Option<&CodeWeightSphere> {
        self.wsd.as_ref().map(|(_, s)| s)
    }

    pub fn channel(&self, snr_db: f64) -> Result<ChannelParams> {
        let rate = self.code.k() as f64 / self.code.n() as f64;
        ChannelParams::new(snr_db, rate, self.config.channel.convention)
    }

    fn decode_trial(&self, input: &TrialInput) -> Result<TrialOutcome> {
        let wsd = self.wsd.as_ref().map(|(p, s)| (p, s));
        let out = two_stage_decode(&input.y, &self.code, self.stage1, wsd)?;
        Ok(TrialOutcome {
            error: out.best_message != input.message,
            crc_pass: out.stage == DecodeStage::Stage1CrcPass,
            activated: out.wsd_activated(),
            ed_units: out.counters.to_ed_units(self.code.n()),
            iterations: out.wsd_iterations,
        })
    }

    fn ml_trial(&self, input: &TrialInput) -> Result<TrialOutcome> {
        let mut counters = OpCounter::default();
        let out = ml_decode_counted(&input.y, &self.code, &mut counters)?;
        Ok(TrialOutcome {
            error: out.message != input.message,
            ed_units: counters.to_ed_units(self.code.n()),
            ..Default::default()
        })
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn sweep_with<F>(
    exp: &Experiment,
    threads: usize,
    stage1_label: &str,
    with_wsd: bool,
    decode: F,
) -> Result<Vec<SweepRecord>>
where
    F: Fn(&TrialInput) -> Result<TrialOutcome> + Sync,
{
    let cfg = &exp.config;
    let stop = &cfg.stop;
    let pool = pool(threads)?;
    let (wsd_r, wsd_m, wsd_j, l_init) = match exp.wsd_params().filter(|_| with_wsd) {
        Some(p) => (p.radius, p.filter_size, p.max_iterations, p.num_paths),
        None => (0, 0, 0, 0),
    };
    let mut records = Vec::with_capacity(cfg.channel.snr_db.len());
    for (si, &snr_db) in cfg.channel.snr_db.iter().enumerate() {
        let sigma = exp.channel(snr_db)?.sigma;
        let start = Instant::now();
        let (mut trials, mut errors, mut crc_passes, mut activations) = (0u64, 0u64, 0u64, 0u64);
        let (mut ed_sum, mut iter_sum) = (0.0f64, 0u64);
        'batches: while trials < stop.max_trials {
            let hi = (trials + TRIAL_BATCH).min(stop.max_trials);
            let outcomes: Vec<TrialOutcome> = pool.install(|| {
                (trials..hi)
                    .into_par_iter()
                    .map(|t| decode(&trial_input(&exp.code, sigma, cfg.seed, si, t)?))
                    .collect::<Result<Vec<_>>>()
            })?;
            for o in outcomes {
                trials += 1;
                errors += u64::from(o.error);
                crc_passes += u64::from(o.crc_pass);
                activations += u64::from(o.activated);
                ed_sum += o.ed_units;
                if o.activated {
                    iter_sum += o.iterations as u64;
                }
                if errors >= stop.min_errors {
                    break 'batches;
                }
            }
            if stop
                .max_wall_seconds
                .is_some_and(|cap| start.elapsed().as_secs_f64() >= cap)
            {
                break;
            }
        }
        let (bler_lo, bler_hi) = wilson_interval(errors, trials);
        let per_trial = |v: f64| if trials == 0 { 0.0 } else { v / trials as f64 };
        records.push(SweepRecord {
            code: exp.code.label(),
            stage1: stage1_label.to_string(),
            wsd_r,
            wsd_m,
            wsd_j,
            l_init,
            snr_db,
            trials,
            errors,
            bler: per_trial(errors as f64),
            bler_lo,
            bler_hi,
            p_act: per_trial(activations as f64),
            ed_units: per_trial(ed_sum),
            avg_iters: if activations == 0 {
                0.0
            } else {
                iter_sum as f64 / activations as f64
            },
            seed: cfg.seed,
            crc_passes,
            activations,
            wall_seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(records)
}

/// Runs every SNR point of the experiment on `threads` workers.
///
/// Each SNR point stops at the trial that reaches `min_errors`, or at
/// `max_trials`. Results are identical for any worker count unless the
/// wall-time cap triggers.
pub fn run_sweep(exp: &Experiment, threads: usize) -> Result<Vec<SweepRecord>> {
    sweep_with(exp, threads, &exp.stage1.label(), true, |t| {
        exp.decode_trial(t)
    })
}

/// Exhaustive ML over the same trial streams as [`run_sweep`].
pub fn run_ml_sweep(exp: &Experiment, threads: usize) -> Result<Vec<SweepRecord>> {
    sweep_with(exp, threads, "ml", false, |t| exp.ml_trial(t))
}
