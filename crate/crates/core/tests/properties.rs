//! Property tests for cross-module invariants.

use std::sync::OnceLock;

use proptest::prelude::*;
use wsd_core::binlin::BitVector;
use wsd_core::channel::{modulate, squared_distance, squared_distance_to_codeword};
use wsd_core::codebook::{
    build_ca_polar_code, build_rm_code, crc_append, crc_check, polar_transform, reliability_order,
    CrcSpec, LinearCode, ReliabilitySource,
};
use wsd_core::complexity::OpCounter;
use wsd_core::decoders::{
    gain_metric, mp_wsd, osd_decode, two_stage_decode, wsd_trajectory, ActivationMode, Candidate,
    CandidateList, Stage1, WsdParams,
};
use wsd_core::sim::{format_g, parse_csv, wilson_interval, write_csv, SweepRecord};
use wsd_core::wsphere::{build_sphere, translate_member, CodeWeightSphere};

fn ca64() -> &'static (LinearCode, CodeWeightSphere) {
    static CELL: OnceLock<(LinearCode, CodeWeightSphere)> = OnceLock::new();
    CELL.get_or_init(|| {
        let order = reliability_order(64, ReliabilitySource::Nr5g).unwrap();
        let code = build_ca_polar_code(64, 16, CrcSpec::crc11(), &order).unwrap();
        let sphere = build_sphere(&code, 2).unwrap();
        (code, sphere)
    })
}

fn rm32() -> &'static (LinearCode, CodeWeightSphere) {
    static CELL: OnceLock<(LinearCode, CodeWeightSphere)> = OnceLock::new();
    CELL.get_or_init(|| {
        let code = build_rm_code(5, 2).unwrap();
        let sphere = build_sphere(&code, 1).unwrap();
        (code, sphere)
    })
}

fn bits(len: usize) -> impl Strategy<Value = BitVector> {
    prop::collection::vec(any::<bool>(), len).prop_map(BitVector::from_bits)
}

fn noise(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..1.5, len)
}

fn received(code: &LinearCode, msg: &BitVector, z: &[f64]) -> Vec<f64> {
    modulate(&code.encode(msg).unwrap())
        .iter()
        .zip(z)
        .map(|(x, n)| x + n)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_is_linear_and_invertible(a in bits(16), b in bits(16)) {
        let (code, _) = ca64();
        let ca = code.encode(&a).unwrap();
        let cb = code.encode(&b).unwrap();
        prop_assert_eq!(code.encode(&a.xor(&b)).unwrap(), ca.xor(&cb));
        prop_assert_eq!(code.unencode(&ca), a);
        prop_assert!(code.is_codeword(&ca));
    }

    #[test]
    fn ca_codewords_carry_valid_crc(msg in bits(16)) {
        let (code, _) = ca64();
        let inner = code.inner().unwrap();
        let u = inner.unencode(&code.encode(&msg).unwrap());
        prop_assert!(crc_check(&u, code.crc().unwrap()).unwrap());
        prop_assert_eq!(u, crc_append(&msg, code.crc().unwrap()));
    }

    #[test]
    fn polar_transform_is_an_involution(u in bits(128)) {
        prop_assert_eq!(polar_transform(&polar_transform(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn translated_sphere_members_stay_at_their_distance(msg in bits(16), i in 0usize..246) {
        let (code, sphere) = ca64();
        let center = code.encode(&msg).unwrap();
        let i = i % sphere.nonzero_len();
        let moved = translate_member(&center, sphere.candidate(i)).unwrap();
        prop_assert!(code.is_codeword(&moved));
        prop_assert_eq!(moved.xor(&center).weight(), sphere.candidate(i).weight());
    }

    #[test]
    fn gain_is_half_the_ed_drop(y in noise(32), c in bits(32), i in 0usize..620) {
        let (_, sphere) = rm32();
        let i = i % sphere.nonzero_len();
        let x = modulate(&c);
        let moved = c.xor(sphere.candidate(i));
        let g = gain_metric(&y, &x, sphere.candidate_support(i));
        let delta = squared_distance_to_codeword(&y, &moved) - squared_distance(&y, &x);
        prop_assert!((delta + 2.0 * g).abs() < 1e-9);
    }

    #[test]
    fn trajectories_strictly_descend(msg in bits(16), start in bits(16), z in noise(64)) {
        let (code, sphere) = ca64();
        let y = received(code, &msg, &z);
        let c0 = code.encode(&start).unwrap();
        let p = WsdParams::new(2, 10, 4, 1, ActivationMode::AlwaysOn).unwrap();
        let tr = wsd_trajectory(&y, &c0, sphere, &p, &mut OpCounter::default()).unwrap();
        prop_assert!(tr.squared_eds.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(tr.iterations_used <= 4);
        prop_assert_eq!(tr.centers.len(), tr.squared_eds.len());
    }

    #[test]
    fn mp_wsd_never_loses_to_an_anchor(msg in bits(16), starts in prop::collection::vec(bits(16), 1..6), z in noise(64)) {
        let (code, sphere) = ca64();
        let y = received(code, &msg, &z);
        let list = CandidateList {
            entries: starts
                .iter()
                .map(|s| Candidate { codeword: code.encode(s).unwrap(), score: 0.0 })
                .collect(),
        };
        let p = WsdParams::new(2, 10, 4, starts.len(), ActivationMode::AlwaysOn).unwrap();
        let out = mp_wsd(&y, code, &list, sphere, &p).unwrap();
        for c in list.codewords() {
            prop_assert!(out.squared_ed <= squared_distance_to_codeword(&y, c));
        }
        prop_assert_eq!(out.squared_ed, squared_distance_to_codeword(&y, &out.best_codeword));
        prop_assert_eq!(code.encode(&out.best_message).unwrap(), out.best_codeword);
    }

    #[test]
    fn pipeline_is_deterministic(msg in bits(16), z in noise(64), osd in any::<bool>()) {
        let (code, sphere) = ca64();
        let y = received(code, &msg, &z);
        let p = WsdParams::new(2, 10, 4, 4, ActivationMode::CrcGated).unwrap();
        let stage1 = if osd { Stage1::Osd { order: 1, list_cap: 4 } } else { Stage1::Scl { list_size: 4 } };
        let a = two_stage_decode(&y, code, stage1, Some((&p, sphere))).unwrap();
        let b = two_stage_decode(&y, code, stage1, Some((&p, sphere))).unwrap();
        prop_assert_eq!(&a.best_codeword, &b.best_codeword);
        prop_assert_eq!(a.squared_ed.to_bits(), b.squared_ed.to_bits());
        prop_assert_eq!(a.counters, b.counters);
        prop_assert_eq!(a.traces, b.traces);
        prop_assert!(code.is_codeword(&a.best_codeword));
    }

    #[test]
    fn osd_candidates_are_sorted_codewords(msg in bits(16), z in noise(32), order in 0usize..3) {
        let (code, _) = rm32();
        let y = received(code, &msg, &z);
        let list = osd_decode(&y, code, order, 50).unwrap();
        prop_assert!(list.entries.windows(2).all(|w| w[0].score <= w[1].score));
        for c in &list.entries {
            prop_assert!(code.is_codeword(&c.codeword));
            prop_assert_eq!(c.score, squared_distance_to_codeword(&y, &c.codeword));
        }
    }

    #[test]
    fn counter_merge_is_commutative_and_associative(v in prop::collection::vec(0u64..1 << 40, 18)) {
        let mk = |s: &[u64]| OpCounter {
            ed_evaluations: s[0], gain_additions: s[1], sort_comparisons: s[2],
            scl_node_ops: s[3], osd_reencodes: s[4], misc_flops: s[5],
        };
        let (a, b, c) = (mk(&v[0..6]), mk(&v[6..12]), mk(&v[12..18]));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!((a + b) + c, a + (b + c));
    }

    #[test]
    fn wilson_brackets_the_estimate(trials in 1u64..100_000, frac in 0.0f64..=1.0) {
        let errors = ((trials as f64) * frac).floor() as u64;
        let (lo, hi) = wilson_interval(errors, trials);
        let p = errors as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
    }

    #[test]
    fn csv_round_trip(snr in -5.0f64..10.0, trials in 1u64..1_000_000, errs in 0u64..1000, ed in 0.0f64..1e6) {
        let errors = errs.min(trials);
        let bler = errors as f64 / trials as f64;
        let (bler_lo, bler_hi) = wilson_interval(errors, trials);
        let rec = SweepRecord {
            code: "ca-polar-256-16".into(), stage1: "scl16".into(), wsd_r: 3, wsd_m: 11, wsd_j: 4,
            l_init: 16, snr_db: snr, trials, errors, bler, bler_lo, bler_hi, p_act: bler,
            ed_units: ed, avg_iters: 2.5, seed: 9, crc_passes: 0, activations: errors,
            wall_seconds: 1.0,
        };
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&rec), &mut buf).unwrap();
        let rows = parse_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(rows.len(), 1);
        let row = &rows[0];
        prop_assert_eq!(row.trials, trials);
        prop_assert_eq!(row.errors, errors);
        prop_assert_eq!(format_g(row.snr_db), format_g(snr));
        prop_assert_eq!(format_g(row.ed_units), format_g(ed));
        prop_assert_eq!(format_g(row.bler_hi), format_g(bler_hi));
        prop_assert!((row.bler - bler).abs() <= 1e-5 * bler.max(1e-300));
    }
}
