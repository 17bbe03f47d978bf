use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use wsd_core::sim::{
    run_ml_sweep, run_sweep, write_csv_file, CodeSpec, Experiment, ExperimentConfig, SweepRecord,
};
use wsd_core::wsphere::{build_sphere, load_sphere, save_sphere};
use wsd_core::{BitVector, CodeWeightSphere};

#[derive(Parser)]
#[command(
    name = "simharness",
    version,
    about = "Code-weight sphere decoding experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code-weight sphere, or inspect an existing sphere file.
    Sphere(SphereArgs),
    /// Run a BLER/complexity sweep and write CSV.
    Simulate(SweepArgs),
    /// Run exhaustive ML over the same trials as `simulate`.
    Mltruth(SweepArgs),
}

#[derive(Args)]
struct SphereArgs {
    /// Code as family:n:k, e.g. ca-polar:256:16, polar:64:16, rm:128:29.
    #[arg(long, required_unless_present = "inspect")]
    code: Option<CodeSpec>,
    /// Radius index r.
    #[arg(long, required_unless_present = "inspect")]
    radius: Option<usize>,
    /// Where to write the sphere file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the shell table of an existing sphere file.
    #[arg(long, conflicts_with_all = ["code", "radius", "out"])]
    inspect: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment TOML file.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    /// Directory that relative sphere paths are resolved against.
    #[arg(long, env = "WSD_DATA_DIR")]
    data_dir: Option<PathBuf>,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn print_shells(sphere: &CodeWeightSphere) {
    println!(
        "N = {}, K = {}, r = {}",
        sphere.n(),
        sphere.k(),
        sphere.radius()
    );
    println!(
        "{:>5} {:>8} {:>12} {:>12}",
        "shell", "weight", "count", "cumulative"
    );
    let mut total = 0;
    for (l, s) in sphere.shells().iter().enumerate() {
        total += s.count;
        println!("{l:>5} {:>8} {:>12} {total:>12}", s.weight, s.count);
    }
    println!(
        "|S_r(0)| = {} (with zero), {} (without)",
        sphere.len(),
        sphere.nonzero_len()
    );
    println!("mean nonzero weight = {:.4}", sphere.mean_nonzero_weight());
}

fn sphere_cmd(args: SphereArgs) -> Result<()> {
    if let Some(path) = args.inspect {
        let sphere = load_sphere(&path).with_context(|| format!("reading {}", path.display()))?;
        print_shells(&sphere);
        return Ok(());
    }
    let (Some(spec), Some(radius)) = (args.code, args.radius) else {
        bail!("--code and --radius are required");
    };
    let start = Instant::now();
    let code = spec.build()?;
    let sphere = if radius == 0 {
        CodeWeightSphere::from_shells(
            code.n(),
            code.k(),
            vec![(0, vec![BitVector::zeros(code.n())])],
        )?
    } else {
        build_sphere(&code, radius)?
    };
    println!("code {} ({})", spec, code.label());
    print_shells(&sphere);
    println!("built in {:.2} s", start.elapsed().as_secs_f64());
    if let Some(out) = args.out {
        save_sphere(&sphere, &out).with_context(|| format!("writing {}", out.display()))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn load_experiment(args: &SweepArgs) -> Result<Experiment> {
    let mut cfg = ExperimentConfig::from_file(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let data_dir = args
        .data_dir
        .clone()
        .or_else(|| args.config.parent().map(Path::to_path_buf));
    Ok(Experiment::new(cfg, data_dir.as_deref())?)
}

fn report(records: &[SweepRecord], out: &Path) -> Result<()> {
    for r in records {
        println!(
            "{} {} snr={} trials={} errors={} bler={:.3e} [{:.3e}, {:.3e}] p_act={:.4} ed_units={:.2} ({:.1} s)",
            r.code, r.stage1, r.snr_db, r.trials, r.errors, r.bler, r.bler_lo, r.bler_hi, r.p_act, r.ed_units, r.wall_seconds
        );
    }
    write_csv_file(records, out).with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sphere(args) => sphere_cmd(args),
        Command::Simulate(args) => {
            let exp = load_experiment(&args)?;
            report(&run_sweep(&exp, args.threads)?, &args.out)
        }
        Command::Mltruth(args) => {
            let exp = load_experiment(&args)?;
            report(&run_ml_sweep(&exp, args.threads)?, &args.out)
        }
    }
}
