//! Code-weight sphere descent.
//!
//! A step scores every nonzero sphere member `c` by the correlation gain of
//! hopping from the center `ĉ` to `ĉ ⊕ c`, keeps the `m` best, and moves to
//! the survivor of least squared ED if it beats the center.

use std::cmp::Ordering;

use super::{CandidateList, DecodeResult, DecodeStage};
use crate::binlin::BitVector;
use crate::channel::{modulate, squared_distance, squared_distance_to_codeword};
use crate::codebook::LinearCode;
use crate::complexity::OpCounter;
use crate::error::{Error, Result};
use crate::wsphere::CodeWeightSphere;

/// When the sphere search runs.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum ActivationMode {
    /// Only when no stage-1 candidate passes the CRC.
    #[default]
    CrcGated,
    /// On every received word.
    AlwaysOn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WsdParams {
    /// Radius index `r` of the sphere.
    pub radius: usize,
    /// Survivors kept by the correlation filter.
    pub filter_size: usize,
    pub max_iterations: usize,
    /// Number of anchors `L_init`.
    pub num_paths: usize,
    pub activation: ActivationMode,
}

impl WsdParams {
    pub fn new(
        radius: usize,
        filter_size: usize,
        max_iterations: usize,
        num_paths: usize,
        activation: ActivationMode,
    ) -> Result<Self> {
        let p = Self {
            radius,
            filter_size,
            max_iterations,
            num_paths,
            activation,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("filter_size", self.filter_size),
            ("max_iterations", self.max_iterations),
            ("num_paths", self.num_paths),
        ] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be at least 1"
                )));
            }
        }
        Ok(())
    }
}

/// `max(10, ⌈0.02 |S|⌉)` for a sphere of `sphere_size` members (zero included).
pub fn default_filter_size(sphere_size: usize) -> usize {
    10.max((sphere_size * 2).div_ceil(100))
}

/// `G = Σ_{j ∈ support} −2 y_j x̂_j`: the change in `⟨y, x⟩` when the
/// symbols on `support` flip sign.
pub fn gain_metric(y: &[f64], x_hat: &[f64], support: &[u32]) -> f64 {
    support
        .iter()
        .map(|&j| -2.0 * y[j as usize] * x_hat[j as usize])
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub center: BitVector,
    pub squared_ed: f64,
    pub improved: bool,
}

/// One filter-and-search step around `center`, whose BPSK image is
/// `x_center`.
pub fn wsd_step(
    y: &[f64],
    center: &BitVector,
    x_center: &[f64],
    sphere: &CodeWeightSphere,
    m: usize,
    counters: &mut OpCounter,
) -> Result<StepOutcome> {
    let n = sphere.n();
    if y.len() != n || x_center.len() != n || center.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len().min(x_center.len()).min(center.len()),
        });
    }
    if m == 0 {
        return Err(Error::InvalidParameter(
            "filter size must be at least 1".into(),
        ));
    }
    let center_ed = squared_distance(y, x_center);
    let unchanged = StepOutcome {
        center: center.clone(),
        squared_ed: center_ed,
        improved: false,
    };
    let total = sphere.nonzero_len();
    if total == 0 {
        return Ok(unchanged);
    }

    let t: Vec<f64> = y.iter().zip(x_center).map(|(a, b)| -2.0 * a * b).collect();
    counters.misc_flops += 2 * n as u64;
    let mut gains = Vec::with_capacity(total);
    let mut adds = 0u64;
    for i in 0..total {
        let s = sphere.candidate_support(i);
        adds += s.len() as u64;
        gains.push(s.iter().map(|&j| t[j as usize]).sum::<f64>());
    }
    counters.gain_additions += adds;

    let m_eff = m.min(total);
    let by_gain =
        |a: &usize, b: &usize| -> Ordering { gains[*b].total_cmp(&gains[*a]).then(a.cmp(b)) };
    let mut idx: Vec<usize> = (0..total).collect();
    if m_eff < total {
        idx.select_nth_unstable_by(m_eff - 1, by_gain);
        idx.truncate(m_eff);
    }
    idx.sort_unstable_by(by_gain);
    counters.sort_comparisons += total as u64 * (m_eff.max(2) as f64).log2().ceil() as u64;

    let mut x_new = x_center.to_vec();
    let mut best: Option<(f64, usize)> = None;
    for &i in &idx {
        let s = sphere.candidate_support(i);
        for &j in s {
            x_new[j as usize] = -x_new[j as usize];
        }
        let ed = squared_distance(y, &x_new);
        for &j in s {
            x_new[j as usize] = -x_new[j as usize];
        }
        if best.is_none_or(|(b, _)| ed < b) {
            best = Some((ed, i));
        }
    }
    counters.ed_evaluations += m_eff as u64;
    counters.misc_flops += m_eff as u64;

    match best {
        Some((ed, i)) if ed < center_ed => Ok(StepOutcome {
            center: center.xor(sphere.candidate(i)),
            squared_ed: ed,
            improved: true,
        }),
        _ => Ok(unchanged),
    }
}

/// Hop history of one anchor.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryTrace {
    pub path_index: usize,
    /// Anchor followed by every accepted hop.
    pub centers: Vec<BitVector>,
    /// Squared ED of each entry of `centers`; strictly decreasing.
    pub squared_eds: Vec<f64>,
    /// Active flag after each outer iteration.
    pub active: Vec<bool>,
    /// Number of steps executed.
    pub iterations_used: usize,
}

impl TrajectoryTrace {
    pub fn final_center(&self) -> &BitVector {
        self.centers.last().expect("trace starts at the anchor")
    }

    pub fn final_squared_ed(&self) -> f64 {
        *self.squared_eds.last().expect("trace starts at the anchor")
    }
}

struct PathState {
    x: Vec<f64>,
    trace: TrajectoryTrace,
    active: bool,
}

impl PathState {
    fn start(y: &[f64], anchor: &BitVector, path_index: usize, counters: &mut OpCounter) -> Self {
        counters.ed_evaluations += 1;
        Self {
            x: modulate(anchor),
            trace: TrajectoryTrace {
                path_index,
                centers: vec![anchor.clone()],
                squared_eds: vec![squared_distance_to_codeword(y, anchor)],
                active: Vec::new(),
                iterations_used: 0,
            },
            active: true,
        }
    }

    /// Returns whether the path moved.
    fn advance(
        &mut self,
        y: &[f64],
        sphere: &CodeWeightSphere,
        m: usize,
        counters: &mut OpCounter,
    ) -> Result<bool> {
        let step = wsd_step(y, self.trace.final_center(), &self.x, sphere, m, counters)?;
        self.trace.iterations_used += 1;
        if step.improved {
            self.x = modulate(&step.center);
            self.trace.centers.push(step.center);
            self.trace.squared_eds.push(step.squared_ed);
        } else {
            self.active = false;
        }
        Ok(step.improved)
    }
}

fn check_sphere(y: &[f64], sphere: &CodeWeightSphere, params: &WsdParams) -> Result<()> {
    params.validate()?;
    if y.len() != sphere.n() {
        return Err(Error::DimensionMismatch {
            expected: sphere.n(),
            found: y.len(),
        });
    }
    if sphere.radius() != params.radius {
        return Err(Error::InvalidParameter(format!(
            "sphere radius {} does not match configured radius {}",
            sphere.radius(),
            params.radius
        )));
    }
    Ok(())
}

/// Up to `J` steps from `c0`, stopping at the first step without a hop.
pub fn wsd_trajectory(
    y: &[f64],
    c0: &BitVector,
    sphere: &CodeWeightSphere,
    params: &WsdParams,
    counters: &mut OpCounter,
) -> Result<TrajectoryTrace> {
    check_sphere(y, sphere, params)?;
    let mut path = PathState::start(y, c0, 0, counters);
    for _ in 0..params.max_iterations {
        let moved = path.advance(y, sphere, params.filter_size, counters)?;
        path.trace.active.push(path.active);
        if !moved {
            break;
        }
    }
    Ok(path.trace)
}

/// Multipoint search from the first `L_init` entries of `init_list`.
///
/// Iterations are the outer loop and paths the inner one; the search stops
/// once an iteration moves no path. Returns the final center of least
/// squared ED, ties to the lowest path index.
pub fn mp_wsd(
    y: &[f64],
    code: &LinearCode,
    init_list: &CandidateList,
    sphere: &CodeWeightSphere,
    params: &WsdParams,
) -> Result<DecodeResult> {
    check_sphere(y, sphere, params)?;
    if init_list.is_empty() {
        return Err(Error::InvalidParameter("initial list is empty".into()));
    }
    if code.n() != sphere.n() || code.k() != sphere.k() {
        return Err(Error::InvalidParameter(format!(
            "sphere is for a ({}, {}) code, decoding a ({}, {}) code",
            sphere.n(),
            sphere.k(),
            code.n(),
            code.k()
        )));
    }
    let mut counters = OpCounter::default();
    let mut paths: Vec<PathState> = init_list
        .codewords()
        .take(params.num_paths)
        .enumerate()
        .map(|(k, c)| PathState::start(y, c, k, &mut counters))
        .collect();

    let mut iterations = 0;
    for _ in 0..params.max_iterations {
        iterations += 1;
        let mut updated = false;
        for p in paths.iter_mut() {
            if p.active {
                updated |= p.advance(y, sphere, params.filter_size, &mut counters)?;
            }
            p.trace.active.push(p.active);
        }
        if !updated {
            break;
        }
    }

    let best = paths
        .iter()
        .enumerate()
        .min_by(|(a, pa), (b, pb)| {
            pa.trace
                .final_squared_ed()
                .total_cmp(&pb.trace.final_squared_ed())
                .then(a.cmp(b))
        })
        .map(|(i, _)| i)
        .expect("at least one path");
    let best_codeword = paths[best].trace.final_center().clone();
    Ok(DecodeResult {
        best_message: code.unencode(&best_codeword),
        squared_ed: squared_distance_to_codeword(y, &best_codeword),
        best_codeword,
        stage: DecodeStage::MpWsd,
        traces: paths.into_iter().map(|p| p.trace).collect(),
        wsd_iterations: iterations,
        counters,
    })
}
