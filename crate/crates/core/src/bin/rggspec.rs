//! Command-line harness: generation, moment tables, volume verification,
//! bound sweeps, radius design, and SIS simulation.
//!
//! Every command accepts `--config PATH` (flat JSON, one object per
//! command) with CLI flags overriding file values, and embeds the fully
//! resolved configuration, seeds included, in its output.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use rggspec::bound::{self, C1_PAPER};
use rggspec::moments1d::{self, reference_volumes};
use rggspec::moments2d;
use rggspec::polytope;
use rggspec::rgg::{self, RggSpec};
use rggspec::rng::derive_seed;
use rggspec::sis;
use rggspec::spectral;

#[derive(Parser)]
#[command(name = "rggspec", version, about = "Random geometric graph spectra and SIS epidemic design")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an RGG realization: positions CSV and edge list
    Generate(GenerateArgs),
    /// Compare empirical spectral moments against analytic expectations
    Moments(MomentsArgs),
    /// Verify chain-polytope volumes with the Monte Carlo oracle
    Volumes(VolumesArgs),
    /// Sweep target degrees, comparing empirical radius against the bound
    Bound(BoundArgs),
    /// Design the connectivity radius for a target epidemic threshold
    Design(DesignArgs),
    /// Run the SIS dynamics and classify the outcome
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

macro_rules! resolve {
    ($flag:expr, $file:expr, $default:expr) => {
        $flag.or($file).unwrap_or($default)
    };
}

fn load_cfg<T: for<'de> Deserialize<'de> + Default>(path: &Option<PathBuf>) -> anyhow::Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn create(out_dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    Ok(BufWriter::new(
        File::create(&path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn write_json(out_dir: &Path, name: &str, value: &serde_json::Value) -> anyhow::Result<()> {
    let mut w = create(out_dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

// ---------------------------------------------------------------- generate

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct GenerateCfg {
    n: Option<usize>,
    d: Option<usize>,
    r: Option<f64>,
    seed: Option<u64>,
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<()> {
    let cfg: GenerateCfg = load_cfg(&args.common.config)?;
    let spec = RggSpec {
        n: resolve!(args.n, cfg.n, 1000),
        d: resolve!(args.d, cfg.d, 1),
        r: resolve!(args.r, cfg.r, 0.01),
        seed: resolve!(args.seed, cfg.seed, 0),
    };
    let g = rgg::build(&spec)?;
    let out = &args.common.out;
    g.positions().write_csv(&mut create(out, "positions.csv")?)?;
    g.write_edge_list(&mut create(out, "edges.txt")?)?;
    write_json(
        out,
        "generate_config.json",
        &json!({
            "command": "generate",
            "n": spec.n, "d": spec.d, "r": spec.r, "seed": spec.seed,
            "edges": g.num_edges(),
        }),
    )?;
    eprintln!("generate: n={} d={} r={} seed={} edges={}", spec.n, spec.d, spec.r, spec.seed, g.num_edges());
    Ok(())
}

// ----------------------------------------------------------------- moments

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    r: Option<f64>,
    /// highest moment order
    #[arg(long)]
    k_max: Option<usize>,
    /// number of realizations
    #[arg(long)]
    seeds: Option<usize>,
    /// master seed; per-realization seeds derive from it
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo samples for 2D analytic orders k >= 4
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct MomentsCfg {
    n: Option<usize>,
    d: Option<usize>,
    r: Option<f64>,
    k_max: Option<usize>,
    seeds: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
}

fn cmd_moments(args: MomentsArgs) -> anyhow::Result<()> {
    let cfg: MomentsCfg = load_cfg(&args.common.config)?;
    let n = resolve!(args.n, cfg.n, 1000);
    let d = resolve!(args.d, cfg.d, 1);
    let r = resolve!(args.r, cfg.r, 0.01);
    let k_max = resolve!(args.k_max, cfg.k_max, 4);
    let runs = resolve!(args.seeds, cfg.seeds, 10);
    let seed = resolve!(args.seed, cfg.seed, 0);
    let samples = resolve!(args.samples, cfg.samples, 1_000_000);
    if d != 1 && d != 2 {
        bail!("analytic moments are available for d in {{1, 2}}, got d={d}");
    }

    let mut per_run = Vec::with_capacity(runs);
    for i in 0..runs {
        let g = rgg::build(&RggSpec { n, d, r, seed: derive_seed(seed, 0, i as u64) })?;
        per_run.push(spectral::moments_by_walks(&g, k_max)?);
    }

    let mut rows = Vec::new();
    for k in 1..=k_max {
        let values: Vec<f64> = per_run.iter().map(|m| m[k - 1]).collect();
        let mean = values.iter().sum::<f64>() / runs as f64;
        let var =
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (runs as f64 - 1.0).max(1.0);
        let (analytic, provenance, correction) = analytic_moment(n, d, r, k, samples, seed)?;
        rows.push(json!({
            "k": k,
            "analytic": analytic,
            "provenance": provenance,
            "correction": correction,
            "empirical_mean": mean,
            "empirical_std": var.sqrt(),
        }));
    }
    let report = json!({
        "config": {
            "command": "moments",
            "n": n, "d": d, "r": r, "k_max": k_max,
            "seeds": runs, "seed": seed, "samples": samples,
        },
        "rows": rows,
    });
    write_json(&args.common.out, "moments.json", &report)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn analytic_moment(
    n: usize,
    d: usize,
    r: f64,
    k: usize,
    samples: usize,
    seed: u64,
) -> anyhow::Result<(f64, &'static str, Option<f64>)> {
    if k == 1 {
        return Ok((0.0, "closed-form", None));
    }
    match d {
        1 => {
            let p = moments1d::predict_moment_1d(n, r, k)?;
            let tag = match k {
                2 => "closed-form",
                _ => "reference-table",
            };
            Ok((p.value, tag, p.correction))
        }
        2 => match k {
            2 | 3 => Ok((moments2d::expected_moment_2d_closed(n, r, k)?, "closed-form", None)),
            _ => {
                let est = moments2d::expected_moment_2d_mc(n, r, k, samples, derive_seed(seed, 1, k as u64))?;
                Ok((est.value, "monte-carlo", None))
            }
        },
        _ => unreachable!("d validated earlier"),
    }
}

// ----------------------------------------------------------------- volumes

#[derive(Args)]
struct VolumesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// verify k = 1..=k_max
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct VolumesCfg {
    k_max: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
}

fn cmd_volumes(args: VolumesArgs) -> anyhow::Result<()> {
    let cfg: VolumesCfg = load_cfg(&args.common.config)?;
    let k_max = resolve!(args.k_max, cfg.k_max, 8);
    let samples = resolve!(args.samples, cfg.samples, 1_000_000);
    let seed = resolve!(args.seed, cfg.seed, 0);

    let reference = reference_volumes();
    let mut rows = Vec::new();
    let mut all_pass = true;
    for k in 1..=k_max {
        let est = polytope::estimate_volume(k, samples, derive_seed(seed, 2, k as u64))?;
        let reference_value = reference.volume(k).ok();
        let pass = reference_value
            .map(|v| (est.estimate - v).abs() <= 3.0 * est.std_error)
            .unwrap_or(true);
        all_pass &= pass;
        let formula = match moments1d::volume_from_eulerian(k) {
            Ok(v) => json!(v),
            Err(e) => json!({ "error": e.to_string() }),
        };
        rows.push(json!({
            "k": k,
            "estimate": est.estimate,
            "std_error": est.std_error,
            "samples": est.samples,
            "seed": est.seed,
            "reference": reference_value,
            "formula": formula,
            "pass": pass,
        }));
    }
    let report = json!({
        "config": { "command": "volumes", "k_max": k_max, "samples": samples, "seed": seed },
        "rows": rows,
        "all_pass": all_pass,
    });
    write_json(&args.common.out, "volumes.json", &report)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

// ------------------------------------------------------------------- bound

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    dbar_min: Option<f64>,
    #[arg(long)]
    dbar_max: Option<f64>,
    #[arg(long)]
    dbar_step: Option<f64>,
    /// realizations per target degree
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// growth constant c_d
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct BoundCfg {
    n: Option<usize>,
    d: Option<usize>,
    dbar_min: Option<f64>,
    dbar_max: Option<f64>,
    dbar_step: Option<f64>,
    seeds: Option<usize>,
    seed: Option<u64>,
    c: Option<f64>,
}

fn cmd_bound(args: BoundArgs) -> anyhow::Result<()> {
    let cfg: BoundCfg = load_cfg(&args.common.config)?;
    let n = resolve!(args.n, cfg.n, 1000);
    let d = resolve!(args.d, cfg.d, 1);
    let dbar_min = resolve!(args.dbar_min, cfg.dbar_min, 10.0);
    let dbar_max = resolve!(args.dbar_max, cfg.dbar_max, 100.0);
    let dbar_step = resolve!(args.dbar_step, cfg.dbar_step, 10.0);
    let seeds = resolve!(args.seeds, cfg.seeds, 5);
    let seed = resolve!(args.seed, cfg.seed, 0);
    let c = resolve!(args.c, cfg.c, C1_PAPER);
    if dbar_step <= 0.0 {
        bail!("dbar_step must be > 0");
    }

    let mut targets = Vec::new();
    let mut dbar = dbar_min;
    while dbar <= dbar_max + 1e-9 {
        targets.push(dbar);
        dbar += dbar_step;
    }
    let rows = bound::bound_sweep(n, d, &targets, seeds, c, seed)?;
    bound::write_sweep_csv(&rows, &mut create(&args.common.out, "sweep.csv")?)?;
    write_json(
        &args.common.out,
        "bound_config.json",
        &json!({
            "command": "bound",
            "n": n, "d": d,
            "dbar_min": dbar_min, "dbar_max": dbar_max, "dbar_step": dbar_step,
            "seeds": seeds, "seed": seed, "c": c,
            "rows": rows.len(),
            "violations": rows.iter().filter(|r| r.violated).count(),
        }),
    )?;
    eprintln!(
        "bound: {} rows, {} violations",
        rows.len(),
        rows.iter().filter(|r| r.violated).count()
    );
    Ok(())
}

// ------------------------------------------------------------------ design

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// infection rate
    #[arg(long)]
    beta: Option<f64>,
    /// recovery rate
    #[arg(long)]
    delta: Option<f64>,
    /// growth constant; defaults to the published c1 for d=1 and a fitted
    /// value for d=2
    #[arg(long)]
    c: Option<f64>,
    /// samples for the d=2 coefficient fit
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct DesignCfg {
    n: Option<usize>,
    d: Option<usize>,
    beta: Option<f64>,
    delta: Option<f64>,
    c: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
}

fn cmd_design(args: DesignArgs) -> anyhow::Result<()> {
    let cfg: DesignCfg = load_cfg(&args.common.config)?;
    let n = resolve!(args.n, cfg.n, 1000);
    let d = resolve!(args.d, cfg.d, 1);
    let beta = resolve!(args.beta, cfg.beta, 0.020);
    let delta = resolve!(args.delta, cfg.delta, 0.35);
    let samples = resolve!(args.samples, cfg.samples, 1_000_000);
    let seed = resolve!(args.seed, cfg.seed, 0);

    let (c, c_provenance) = match (args.c.or(cfg.c), d) {
        (Some(c), _) => (c, "user-supplied"),
        (None, 1) => (C1_PAPER, "published c1"),
        (None, 2) => (bound::fit_c2(samples, seed)?.c, "fitted, not from paper"),
        (None, d) => bail!("no default growth constant for d={d}; pass --c"),
    };
    let result = bound::design_radius(n, d, beta, delta, c)?;
    let report = json!({
        "config": {
            "command": "design",
            "n": n, "d": d, "beta": beta, "delta": delta,
            "c": c, "c_provenance": c_provenance,
            "samples": samples, "seed": seed,
        },
        "result": result,
    });
    write_json(&args.common.out, "design.json", &report)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

// ---------------------------------------------------------------- simulate

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// initial infection level: p0 = level * Uniform[0,1)
    #[arg(long)]
    p0_level: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    die_out_threshold: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SimulateCfg {
    n: Option<usize>,
    d: Option<usize>,
    r: Option<f64>,
    beta: Option<f64>,
    delta: Option<f64>,
    p0_level: Option<f64>,
    steps: Option<usize>,
    die_out_threshold: Option<f64>,
    seed: Option<u64>,
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let cfg: SimulateCfg = load_cfg(&args.common.config)?;
    let n = resolve!(args.n, cfg.n, 1000);
    let d = resolve!(args.d, cfg.d, 1);
    let r = resolve!(args.r, cfg.r, 0.005);
    let beta = resolve!(args.beta, cfg.beta, 0.020);
    let delta = resolve!(args.delta, cfg.delta, 0.018);
    let p0_level = resolve!(args.p0_level, cfg.p0_level, 0.01);
    let steps = resolve!(args.steps, cfg.steps, 2000);
    let die_out_threshold = resolve!(
        args.die_out_threshold,
        cfg.die_out_threshold,
        sis::DEFAULT_DIE_OUT_THRESHOLD
    );
    let seed = resolve!(args.seed, cfg.seed, 0);

    let g = rgg::build(&RggSpec { n, d, r, seed })?;
    let params = sis::EpidemicParams {
        beta,
        delta,
        p0: sis::seed_infection(n, p0_level, seed)?,
        steps,
        die_out_threshold,
    };
    let traj = sis::simulate(&g, &params)?;
    let threshold = sis::threshold_check(&g, beta, delta)?;

    let out = &args.common.out;
    traj.write_csv(&mut create(out, "trajectory.csv")?)?;
    traj.write_ppm(&mut create(out, "heatmap.ppm")?)?;
    let indeterminate =
        traj.outcome == sis::Outcome::HorizonReached && threshold.near_threshold;
    let report = json!({
        "config": {
            "command": "simulate",
            "n": n, "d": d, "r": r, "beta": beta, "delta": delta,
            "p0_level": p0_level, "steps": steps,
            "die_out_threshold": die_out_threshold, "seed": seed,
        },
        "outcome": traj.outcome,
        "die_out_step": traj.die_out_step,
        "clamp_count": traj.clamp_count,
        "steps_recorded": traj.probabilities.len() - 1,
        "threshold": threshold,
        "indeterminate_at_horizon": indeterminate,
    });
    write_json(out, "outcome.json", &report)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Moments(a) => cmd_moments(a),
        Command::Volumes(a) => cmd_volumes(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Design(a) => cmd_design(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
