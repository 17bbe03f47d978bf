use super::osd::osd_decode_counted;
use super::scl::scl_decode_with;
use super::wsd::{mp_wsd, ActivationMode, WsdParams};
use super::{Candidate, CandidateList, CheckNodeRule, DecodeResult, DecodeStage};
use crate::binlin::BitVector;
use crate::channel::squared_distance_to_codeword;
use crate::codebook::{crc_check, LinearCode};
use crate::complexity::OpCounter;
use crate::error::{Error, Result};
use crate::wsphere::CodeWeightSphere;

/// Initial list decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage1 {
    /// Min-sum SCL with list size `list_size`.
    Scl { list_size: usize },
    /// Order-`order` OSD keeping the `list_cap` best candidates.
    Osd { order: usize, list_cap: usize },
}

impl Stage1 {
    pub fn label(&self) -> String {
        match self {
            Stage1::Scl { list_size } => format!("scl{list_size}"),
            Stage1::Osd { order, .. } => format!("osd{order}"),
        }
    }
}

/// Stage-1 candidate mapped onto the searched code.
struct Projected {
    codeword: BitVector,
    message: BitVector,
    crc_ok: bool,
}

/// For CRC-concatenated codes stage 1 runs on the inner code; candidates are
/// checked against the CRC and projected by re-encoding their first `K`
/// message bits.
fn project(code: &LinearCode, c: &BitVector) -> Result<Projected> {
    match (code.inner(), code.crc()) {
        (Some(inner), Some(crc)) => {
            let u = inner.unencode(c);
            let crc_ok = crc_check(&u, crc)?;
            let message = u.slice(0, code.k());
            let codeword = code.encode(&message)?;
            Ok(Projected {
                codeword,
                message,
                crc_ok,
            })
        }
        _ => Ok(Projected {
            message: code.unencode(c),
            codeword: c.clone(),
            crc_ok: false,
        }),
    }
}

fn run_stage1(
    y: &[f64],
    code: &LinearCode,
    stage1: Stage1,
    counters: &mut OpCounter,
) -> Result<CandidateList> {
    match stage1 {
        Stage1::Scl { list_size } => {
            // Min-sum decisions and metric order are invariant to LLR scale.
            let llrs: Vec<f64> = y.iter().map(|v| 2.0 * v).collect();
            scl_decode_with(&llrs, code, list_size, CheckNodeRule::MinSum, counters)
        }
        Stage1::Osd { order, list_cap } => {
            let target = code.inner().unwrap_or(code);
            osd_decode_counted(y, target, order, list_cap, counters)
        }
    }
}

/// Stage 1 followed, when activated, by multipoint sphere search.
///
/// With `wsd = None` the stage-1 decision is returned: the first CRC-valid
/// candidate if any, else the projected top candidate.
pub fn two_stage_decode(
    y: &[f64],
    code: &LinearCode,
    stage1: Stage1,
    wsd: Option<(&WsdParams, &CodeWeightSphere)>,
) -> Result<DecodeResult> {
    if y.len() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            found: y.len(),
        });
    }
    let gated = wsd.is_none_or(|(p, _)| p.activation == ActivationMode::CrcGated);
    let has_crc = code.crc().is_some();
    if wsd.is_some() && gated && !has_crc {
        return Err(Error::Config(
            "crc_gated activation requires a CRC-concatenated code".into(),
        ));
    }

    let mut counters = OpCounter::default();
    let list = run_stage1(y, code, stage1, &mut counters)?;
    let projected = list
        .codewords()
        .map(|c| project(code, c))
        .collect::<Result<Vec<_>>>()?;

    let finish = |p: &Projected, stage, counters| DecodeResult {
        squared_ed: squared_distance_to_codeword(y, &p.codeword),
        best_codeword: p.codeword.clone(),
        best_message: p.message.clone(),
        stage,
        traces: Vec::new(),
        wsd_iterations: 0,
        counters,
    };

    if gated && has_crc {
        if let Some(p) = projected.iter().find(|p| p.crc_ok) {
            return Ok(finish(p, DecodeStage::Stage1CrcPass, counters));
        }
    }
    let Some((params, sphere)) = wsd else {
        let top = projected
            .first()
            .expect("stage 1 returns at least one candidate");
        return Ok(finish(top, DecodeStage::Stage1Only, counters));
    };

    let anchors = CandidateList {
        entries: projected
            .into_iter()
            .zip(&list.entries)
            .take(params.num_paths)
            .map(|(p, c)| Candidate {
                codeword: p.codeword,
                score: c.score,
            })
            .collect(),
    };
    let mut result = mp_wsd(y, code, &anchors, sphere, params)?;
    result.counters += counters;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::modulate;
    use crate::codebook::{
        build_ca_polar_code, build_rm_code, reliability_order, CrcSpec, ReliabilitySource,
    };
    use crate::wsphere::build_sphere;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn ca64() -> LinearCode {
        let order = reliability_order(64, ReliabilitySource::Nr5g).unwrap();
        build_ca_polar_code(64, 16, CrcSpec::crc11(), &order).unwrap()
    }

    #[test]
    fn noiseless_gated_passes_crc() {
        let code = ca64();
        let sphere = build_sphere(&code, 2).unwrap();
        let p = WsdParams::new(2, 10, 4, 4, ActivationMode::CrcGated).unwrap();
        let msg = BitVector::from_u64(16, 0x1234);
        let c = code.encode(&msg).unwrap();
        for stage1 in [
            Stage1::Scl { list_size: 4 },
            Stage1::Osd {
                order: 1,
                list_cap: 4,
            },
        ] {
            let out = two_stage_decode(&modulate(&c), &code, stage1, Some((&p, &sphere))).unwrap();
            assert_eq!(out.stage, DecodeStage::Stage1CrcPass);
            assert_eq!(out.best_message, msg);
            assert_eq!(out.squared_ed, 0.0);
            assert_eq!(out.counters.ed_evaluations, 0);
            assert_eq!(out.counters.gain_additions, 0);
        }
    }

    #[test]
    fn always_on_always_activates() {
        let code = ca64();
        let sphere = build_sphere(&code, 1).unwrap();
        let p = WsdParams::new(1, 10, 2, 2, ActivationMode::AlwaysOn).unwrap();
        let c = code.encode(&BitVector::from_u64(16, 7)).unwrap();
        let out = two_stage_decode(
            &modulate(&c),
            &code,
            Stage1::Scl { list_size: 2 },
            Some((&p, &sphere)),
        )
        .unwrap();
        assert!(out.wsd_activated());
        assert_eq!(out.best_codeword, c);
        assert_eq!(out.traces.len(), 2);
    }

    #[test]
    fn gated_without_crc_is_rejected() {
        let code = build_rm_code(5, 2).unwrap();
        let sphere = build_sphere(&code, 1).unwrap();
        let p = WsdParams::new(1, 10, 2, 2, ActivationMode::CrcGated).unwrap();
        let y = vec![1.0; 32];
        assert!(matches!(
            two_stage_decode(
                &y,
                &code,
                Stage1::Osd {
                    order: 1,
                    list_cap: 2
                },
                Some((&p, &sphere))
            ),
            Err(Error::Config(_))
        ));
        let p = WsdParams {
            activation: ActivationMode::AlwaysOn,
            ..p
        };
        let out = two_stage_decode(
            &y,
            &code,
            Stage1::Osd {
                order: 1,
                list_cap: 2,
            },
            Some((&p, &sphere)),
        )
        .unwrap();
        assert!(out.best_codeword.is_zero());
    }

    #[test]
    fn results_are_consistent_and_deterministic() {
        let code = ca64();
        let sphere = build_sphere(&code, 2).unwrap();
        let p = WsdParams::new(2, 10, 4, 4, ActivationMode::CrcGated).unwrap();
        let mut rng = rand::rng();
        let mut activated = 0;
        for _ in 0..200 {
            let c = code
                .encode(&BitVector::from_bits((0..16).map(|_| rng.random::<bool>())))
                .unwrap();
            let y: Vec<f64> = modulate(&c)
                .into_iter()
                .map(|s| s + 0.9 * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let a = two_stage_decode(&y, &code, Stage1::Scl { list_size: 4 }, Some((&p, &sphere)))
                .unwrap();
            let b = two_stage_decode(&y, &code, Stage1::Scl { list_size: 4 }, Some((&p, &sphere)))
                .unwrap();
            assert_eq!(a.best_codeword, b.best_codeword);
            assert_eq!(a.counters, b.counters);
            assert!(code.is_codeword(&a.best_codeword));
            assert_eq!(code.encode(&a.best_message).unwrap(), a.best_codeword);
            assert_eq!(
                a.squared_ed,
                squared_distance_to_codeword(&y, &a.best_codeword)
            );
            activated += usize::from(a.wsd_activated());
        }
        assert!(activated > 0);
    }
}
