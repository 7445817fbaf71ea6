//! `phasedecode` command-line driver: generate synthetic data, run the
//! eight configurations, inspect dataset files.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use phasedecode::dataio::{
    default_sidecar_path, generate_synthetic, load_dataset, normalize_dim, save_dataset, Sidecar, SynthParams,
    DEFAULT_NOISE_SIGMA,
};
use phasedecode::experiment::{
    format_confusion, format_table, parse_config_list, ConfigId, EvalReport, MultiSubjectReport, RunOptions,
    SieveParams,
};
use phasedecode::spectral::DhtMode;
use phasedecode::{Dataset64, RngSeed, Scalar};

/// Sieve length used for real subject data when `--sieve-n` is absent.
const REAL_DATA_SIEVE_N: usize = 14000;

#[derive(Parser)]
#[command(name = "phasedecode", version)]
#[command(about = "Random-sieve phase features for two-class trial decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic two-class dataset (CSV + JSON sidecar)
    Generate(GenerateArgs),
    /// Evaluate configurations with leave-one-out cross-validation
    Run(RunArgs),
    /// Print a summary of a dataset file
    Inspect(InspectArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Output CSV path
    #[arg(long, default_value = "synth.csv")]
    out: PathBuf,

    /// Sidecar path (default: the CSV path with a .json extension)
    #[arg(long)]
    sidecar: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Samples per trial (feature dimension)
    #[arg(long, default_value_t = 1024)]
    n: usize,

    #[arg(long, default_value_t = 40)]
    samples_per_class: usize,

    /// Harmonic DFT bins, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 7, 12])]
    harmonics: Vec<usize>,

    /// Class-1 phase per harmonic, comma separated (default all 0)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    base_phases: Option<Vec<f64>>,

    /// Phase separation between the classes, in (0, pi]
    #[arg(long, default_value_t = FRAC_PI_2)]
    delta_phi: f64,

    #[arg(long, default_value_t = 0.5)]
    gain_min: f64,

    #[arg(long, default_value_t = 2.0)]
    gain_max: f64,

    /// Standard deviation of the additive Gaussian noise
    #[arg(long, default_value_t = DEFAULT_NOISE_SIGMA)]
    noise_sigma: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Precision {
    F32,
    F64,
}

#[derive(Clone, Copy, ValueEnum)]
enum DhtArg {
    Analytic,
    Literal,
}

impl From<DhtArg> for DhtMode {
    fn from(a: DhtArg) -> Self {
        match a {
            DhtArg::Analytic => DhtMode::Analytic,
            DhtArg::Literal => DhtMode::Literal,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Dataset CSV; repeat for several subjects
    #[arg(long, required = true)]
    data: Vec<PathBuf>,

    /// Sidecar per --data, in the same order (default: CSV path with .json)
    #[arg(long)]
    sidecar: Vec<PathBuf>,

    /// `all` or a list such as `c1,c5,c8`
    #[arg(long, default_value = "all")]
    configs: String,

    /// Sieve length N; datasets are truncated to it. Defaults to the
    /// generator's dimension for synthetic data, 14000 otherwise.
    #[arg(long)]
    sieve_n: Option<usize>,

    /// Zeros per sieve mask (default N/2)
    #[arg(long)]
    sieve_m: Option<usize>,

    #[arg(long, value_enum, default_value = "analytic")]
    dht_mode: DhtArg,

    #[arg(long, default_value_t = RunOptions::DEFAULT_REPETITIONS,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    repetitions: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// JSON report path
    #[arg(long, default_value = "report.json")]
    report: PathBuf,

    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,

    #[arg(long, value_enum, default_value = "f64")]
    precision: Precision,

    /// Record every repetition's sieve positions in the report
    #[arg(long)]
    export_masks: bool,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    data: PathBuf,

    #[arg(long)]
    sidecar: Option<PathBuf>,
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Run(a) => run(a),
        Command::Inspect(a) => inspect(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn sidecar_for(csv: &Path, explicit: Option<&PathBuf>) -> PathBuf {
    explicit.cloned().unwrap_or_else(|| default_sidecar_path(csv))
}

fn generate(a: GenerateArgs) -> Result<()> {
    let params = SynthParams {
        n_features: a.n,
        samples_per_class: a.samples_per_class,
        base_phases: a.base_phases.unwrap_or_else(|| vec![0.0; a.harmonics.len()]),
        harmonic_bins: a.harmonics,
        delta_phi: a.delta_phi,
        gain_min: a.gain_min,
        gain_max: a.gain_max,
        noise_sigma: a.noise_sigma,
        seed: a.seed,
    };
    let ds: Dataset64 = generate_synthetic(&params)?;
    let sidecar = sidecar_for(&a.out, a.sidecar.as_ref());
    save_dataset(&ds, &a.out, &sidecar, Some(&params))?;

    let [c1, c2] = ds.class_counts();
    println!(
        "wrote {} ({} samples x {} features)",
        a.out.display(),
        ds.len(),
        ds.feature_dim()
    );
    println!("sidecar {}", sidecar.display());
    println!("classes: {c1} picture, {c2} sentence");
    println!(
        "seed {}, harmonics {:?}, delta_phi {:.6}, gain [{}, {}], noise sigma {}",
        params.seed, params.harmonic_bins, params.delta_phi, params.gain_min, params.gain_max, params.noise_sigma
    );
    Ok(())
}

fn run(a: RunArgs) -> Result<()> {
    if !a.sidecar.is_empty() && a.sidecar.len() != a.data.len() {
        bail!(
            "{} --sidecar paths given for {} --data files",
            a.sidecar.len(),
            a.data.len()
        );
    }
    let ids = parse_config_list(&a.configs)?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = a.threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().context("building worker pool")?;

    let reports = pool.install(|| {
        a.data
            .iter()
            .enumerate()
            .map(|(i, csv)| {
                let sidecar = sidecar_for(csv, a.sidecar.get(i));
                match a.precision {
                    Precision::F64 => run_subject::<f64>(&a, &ids, csv, &sidecar),
                    Precision::F32 => run_subject::<f32>(&a, &ids, csv, &sidecar),
                }
                .with_context(|| format!("evaluating {}", csv.display()))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    for r in &reports {
        println!(
            "subject {} ({} samples, N = {}, m = {})",
            r.dataset.subject_id, r.dataset.n_samples, r.settings.sieve.n, r.settings.sieve.m
        );
        print!("{}", format_table(r));
        report_warnings(r);
    }

    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])?
    } else {
        let multi = MultiSubjectReport::new(reports);
        println!("unweighted mean over {} subjects", multi.subjects.len());
        for m in &multi.subject_mean {
            println!("{:<6} | {:>6.1}", m.config.to_string(), m.accuracy_mean);
        }
        serde_json::to_string_pretty(&multi)?
    };
    fs::write(&a.report, json + "\n").with_context(|| format!("writing {}", a.report.display()))?;
    println!("report written to {}", a.report.display());
    Ok(())
}

fn run_subject<T: Scalar>(a: &RunArgs, ids: &[ConfigId], csv: &Path, sidecar: &Path) -> Result<EvalReport> {
    let (ds, meta) = load_dataset::<T>(csv, sidecar)?;
    let n = a.sieve_n.unwrap_or_else(|| default_sieve_n(&meta));
    let (ds, action) = normalize_dim(&ds, n)?;

    let mut options = RunOptions::new(n);
    if let Some(m) = a.sieve_m {
        options.sieve = SieveParams { n_total: n, m };
    }
    options.dht_mode = a.dht_mode.into();
    options.repetitions = a.repetitions;
    options.export_masks = a.export_masks;

    let mut report = phasedecode::experiment::run_configs(ids, &ds, RngSeed::new(a.seed), &options)?;
    report.dataset.normalization = Some(action);
    Ok(report)
}

fn default_sieve_n(meta: &Sidecar) -> usize {
    if meta.generator.is_some() {
        meta.feature_dim
    } else {
        REAL_DATA_SIEVE_N
    }
}

fn report_warnings(r: &EvalReport) {
    for c in &r.configs {
        let unconverged: usize = c.runs.iter().map(|x| x.svm_unconverged_folds).sum();
        if unconverged > 0 {
            eprintln!(
                "warning: {}: {unconverged} SVM folds stopped at the iteration cap",
                c.config
            );
        }
        let near_zero: usize = c.runs.iter().map(|x| x.near_zero_values).sum();
        if near_zero > 0 {
            eprintln!(
                "note: {}: {near_zero} near-zero spectral values, their phase is 0",
                c.config
            );
        }
    }
    if let Some(best) = r
        .configs
        .iter()
        .max_by(|x, y| x.accuracy_mean.total_cmp(&y.accuracy_mean))
    {
        print!("{}", format_confusion(best));
    }
}

fn inspect(a: InspectArgs) -> Result<()> {
    let sidecar = sidecar_for(&a.data, a.sidecar.as_ref());
    let (ds, meta) = load_dataset::<f64>(&a.data, &sidecar)?;
    let [c1, c2] = ds.class_counts();
    println!("file:            {}", a.data.display());
    println!("subject:         {}", meta.meta.subject_id);
    println!("samples:         {} ({c1} picture, {c2} sentence)", ds.len());
    println!("feature dim:     {}", ds.feature_dim());
    println!("sampling period: {} s", meta.meta.sampling_period_s);
    if !meta.meta.roi_names.is_empty() {
        println!("ROIs:            {}", meta.meta.roi_names.join(", "));
    }
    if !meta.meta.provenance.is_empty() {
        println!("provenance:      {}", meta.meta.provenance);
    }
    if let Some(g) = &meta.generator {
        println!("generator:       {}", serde_json::to_string(g)?);
    }
    let values = ds.samples().iter().flat_map(|s| s.signal.as_slice().iter().copied());
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    println!("value range:     [{lo:.4}, {hi:.4}]");
    println!("default sieve N: {}", default_sieve_n(&meta));
    Ok(())
}
