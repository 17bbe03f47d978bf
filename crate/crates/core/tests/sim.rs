use std::fs;

use wsd_core::decoders::ActivationMode;
use wsd_core::sim::{
    parse_csv, run_ml_sweep, run_sweep, write_csv, write_csv_file, ChannelSpec, CodeFamily,
    CodeSpec, Experiment, ExperimentConfig, Stage1Kind, Stage1Spec, StopSpec, WsdSpec, CSV_HEADER,
};
use wsd_core::wsphere::{build_sphere, save_sphere};
use wsd_core::Error;

fn config(
    snr_db: Vec<f64>,
    wsd: Option<WsdSpec>,
    max_trials: u64,
    min_errors: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        seed: 11,
        sphere_file: None,
        code: CodeSpec::new(CodeFamily::CaPolar, 64, 16),
        channel: ChannelSpec {
            snr_db,
            convention: Default::default(),
        },
        stage1: Stage1Spec {
            decoder: Stage1Kind::Scl,
            list_size: Some(4),
            order: None,
            list_cap: None,
        },
        wsd,
        stop: StopSpec {
            max_trials,
            min_errors,
            max_wall_seconds: None,
        },
    }
}

fn wsd(activation: ActivationMode) -> WsdSpec {
    WsdSpec {
        radius: 2,
        filter_size: None,
        max_iterations: 4,
        num_paths: 4,
        activation,
    }
}

fn experiment(cfg: ExperimentConfig) -> Experiment {
    let code = cfg.code.build().unwrap();
    let sphere = cfg
        .wsd
        .as_ref()
        .map(|w| build_sphere(&code, w.radius).unwrap());
    Experiment::with_sphere(cfg, sphere).unwrap()
}

#[test]
fn high_snr_is_error_free_and_quiet() {
    let exp = experiment(config(
        vec![12.0],
        Some(wsd(ActivationMode::CrcGated)),
        1000,
        100,
    ));
    let r = &run_sweep(&exp, 1).unwrap()[0];
    assert_eq!(r.trials, 1000);
    assert_eq!(r.errors, 0);
    assert_eq!(r.bler, 0.0);
    assert_eq!(r.p_act, 0.0);
    assert_eq!(r.crc_passes, 1000);
}

#[test]
fn gated_trials_either_pass_crc_or_activate() {
    let exp = experiment(config(
        vec![0.0, 2.0],
        Some(wsd(ActivationMode::CrcGated)),
        800,
        1_000_000,
    ));
    for r in run_sweep(&exp, 2).unwrap() {
        assert_eq!(r.crc_passes + r.activations, r.trials);
        assert!((0.0..=1.0).contains(&r.p_act));
        assert!(r.bler_lo <= r.bler && r.bler <= r.bler_hi);
    }
}

#[test]
fn always_on_activates_every_trial() {
    let exp = experiment(config(
        vec![3.0],
        Some(wsd(ActivationMode::AlwaysOn)),
        300,
        1_000_000,
    ));
    let r = &run_sweep(&exp, 1).unwrap()[0];
    assert_eq!(r.activations, 300);
    assert_eq!(r.p_act, 1.0);
}

#[test]
fn stops_at_min_errors() {
    let exp = experiment(config(vec![0.0], None, 100_000, 25));
    let r = &run_sweep(&exp, 1).unwrap()[0];
    assert_eq!(r.errors, 25);
    assert!(r.trials < 100_000);
    assert_eq!((r.wsd_r, r.wsd_m, r.wsd_j, r.l_init), (0, 0, 0, 0));
    assert_eq!(r.stage1, "scl4");
}

#[test]
fn same_seed_same_csv() {
    let exp = experiment(config(
        vec![1.0, 2.0],
        Some(wsd(ActivationMode::CrcGated)),
        2000,
        40,
    ));
    let csv = |threads| {
        let mut buf = Vec::new();
        write_csv(&run_sweep(&exp, threads).unwrap(), &mut buf).unwrap();
        buf
    };
    assert_eq!(csv(1), csv(3));
}

#[test]
fn bler_ordering_stage1_wsd_ml() {
    // Same trial streams for every arm.
    let base = config(vec![2.0], None, 4000, 1_000_000);
    let stage1 = run_sweep(&experiment(base.clone()), 1).unwrap()[0].clone();
    let mut with = base.clone();
    with.wsd = Some(wsd(ActivationMode::CrcGated));
    let refined = run_sweep(&experiment(with), 1).unwrap()[0].clone();
    let ml = run_ml_sweep(&experiment(base), 1).unwrap()[0].clone();
    assert_eq!(stage1.trials, 4000);
    assert!(
        refined.errors <= stage1.errors,
        "{} > {}",
        refined.errors,
        stage1.errors
    );
    assert!(
        ml.errors <= refined.errors,
        "{} > {}",
        ml.errors,
        refined.errors
    );
    assert!(refined.bler_hi < stage1.bler_lo);
    assert_eq!(ml.stage1, "ml");
    assert_eq!(ml.ed_units, 65536.0);
}

#[test]
fn sphere_file_is_resolved_against_data_dir() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(vec![2.0], Some(wsd(ActivationMode::CrcGated)), 50, 10);
    let code = cfg.code.build().unwrap();
    save_sphere(&build_sphere(&code, 3).unwrap(), dir.path().join("s.cws")).unwrap();
    cfg.sphere_file = Some("s.cws".into());
    // A radius-3 file serves a radius-2 configuration.
    let exp = Experiment::new(cfg.clone(), Some(dir.path())).unwrap();
    assert_eq!(exp.sphere().unwrap().radius(), 2);
    assert_eq!(exp.wsd_params().unwrap().filter_size, 10);

    cfg.sphere_file = Some("missing.cws".into());
    assert!(matches!(
        Experiment::new(cfg.clone(), Some(dir.path())),
        Err(Error::MissingSphere(_))
    ));
    cfg.sphere_file = None;
    assert!(matches!(Experiment::new(cfg, None), Err(Error::Config(_))));
}

#[test]
fn radius_zero_needs_no_file() {
    let mut w = wsd(ActivationMode::AlwaysOn);
    w.radius = 0;
    let exp = Experiment::new(config(vec![2.0], Some(w), 100, 10), None).unwrap();
    let r = &run_sweep(&exp, 1).unwrap()[0];
    assert_eq!(r.p_act, 1.0);
    assert!(r.avg_iters >= 1.0);
}

#[test]
fn mismatched_sphere_is_rejected() {
    let other = CodeSpec::new(CodeFamily::CaPolar, 128, 16).build().unwrap();
    let sphere = build_sphere(&other, 2).unwrap();
    let cfg = config(vec![2.0], Some(wsd(ActivationMode::CrcGated)), 10, 1);
    assert!(Experiment::with_sphere(cfg, Some(sphere)).is_err());
}

#[test]
fn csv_file_round_trip() {
    let exp = experiment(config(
        vec![1.0, 3.0],
        Some(wsd(ActivationMode::CrcGated)),
        500,
        20,
    ));
    let records = run_sweep(&exp, 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    write_csv_file(&records, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let rows = parse_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(&records) {
        assert_eq!(row.code, rec.code);
        assert_eq!(row.trials, rec.trials);
        assert_eq!(row.errors, rec.errors);
        assert_eq!(row.snr_db, rec.snr_db);
        assert_eq!(row.wsd_m, rec.wsd_m);
        assert!((row.ed_units - rec.ed_units).abs() <= 1e-5 * rec.ed_units);
    }
    let mut again = Vec::new();
    write_csv(&records, &mut again).unwrap();
    assert_eq!(again, text.into_bytes());
    assert!(write_csv_file(&records, dir.path().join("no/such/dir.csv")).is_err());
}
