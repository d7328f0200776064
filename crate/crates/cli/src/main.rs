use std::env;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rtm_core::bench::{
    clause_report, load_model, mae, run_experiment_on, run_sweep, sweep_summary_csv,
    write_artifacts, ExperimentConfig, GridConfig,
};
use rtm_core::datagen::{generate, DatasetSpec};
use rtm_core::spl::{spl_run, trajectory_csv, SplEnvironment, SplState, DEFAULT_INITIAL_LAMBDA};
use rtm_core::{seeded_rng, Dataset, Error, Variant};

const OUTPUT_DIR_VAR: &str = "RTM_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "rtm",
    version,
    about = "Regression Tsetlin machines with weighted clauses"
)]
#[command(
    after_help = "Output files default to the directory named by RTM_OUTPUT_DIR, or the current directory."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic binary-input dataset (target = 100 * decimal(x))
    Generate(GenerateArgs),
    /// Train a machine on CSV data and write run artifacts
    Train(TrainArgs),
    /// Report the MAE of a saved model on a CSV dataset
    Eval(EvalArgs),
    /// Run every cell of a JSON grid
    Sweep(SweepArgs),
    /// Simulate stochastic point location in an informative environment
    SplDemo(SplArgs),
    /// Print the weighted clauses of a saved model
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Dataset spec as JSON; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input width, 1 to 52 [default: 3]
    #[arg(long)]
    bits: Option<usize>,
    /// Add Gaussian noise to training targets
    #[arg(long)]
    noisy: bool,
    /// Noise standard deviation in target units [default: 7]
    #[arg(long)]
    noise_sigma: Option<f64>,
    /// Training rows [default: 8000]
    #[arg(long)]
    n_train: Option<usize>,
    /// Test rows [default: 2000]
    #[arg(long)]
    n_test: Option<usize>,
    /// Generator seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Training CSV [default: dataset.csv in the output directory]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Test CSV [default: <out stem>.test.csv]
    #[arg(long)]
    test_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// Experiment config as JSON; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Training CSV; without it the config's dataset spec is generated
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Test CSV [default: <dataset stem>.test.csv]
    #[arg(long)]
    test: Option<PathBuf>,
    /// rtm, rtm-iw or rtm-rw
    #[arg(long)]
    variant: Option<Variant>,
    /// Number of clauses
    #[arg(long)]
    m: Option<usize>,
    /// Resolution [default: m for rtm, 100 m otherwise]
    #[arg(long = "T")]
    resolution: Option<u64>,
    /// Specificity [default: 2]
    #[arg(long)]
    s: Option<f64>,
    /// States per automaton action [default: 100]
    #[arg(long = "N")]
    n_states: Option<u32>,
    /// Real-weight learning rate [default: 0.01]
    #[arg(long)]
    alpha: Option<f64>,
    /// Training epochs [default: 200]
    #[arg(long)]
    epochs: Option<usize>,
    /// Seed; repeat or comma-separate for several [default: 0]
    #[arg(long, value_delimiter = ',')]
    seed: Vec<u64>,
    /// Only decrement weights of clauses that fire
    #[arg(long)]
    decrement_requires_fire: bool,
    /// Artifact directory [default: config output_dir, then the output directory]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    dataset: PathBuf,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Grid config as JSON
    #[arg(long)]
    grid: PathBuf,
    /// Artifact directory [default: grid output_dir, then <output directory>/<grid name>]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SplArgs {
    /// Probability that the environment points toward the optimum
    #[arg(long, default_value_t = 0.9)]
    p: f64,
    /// Location of the optimum
    #[arg(long, default_value_t = 0.3)]
    lambda_star: f64,
    /// Steps on the unit interval
    #[arg(long = "N", default_value_t = 100)]
    n_steps: u64,
    /// Number of updates
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Starting point
    #[arg(long, default_value_t = DEFAULT_INITIAL_LAMBDA)]
    init: f64,
    /// Trajectory CSV (step,lambda)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    model: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::WidthMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn output_dir() -> PathBuf {
    env::var_os(OUTPUT_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn sibling_test_path(train: &Path) -> PathBuf {
    let stem = train.file_stem().unwrap_or_default().to_string_lossy();
    train.with_file_name(format!("{stem}.test.csv"))
}

fn ensure_parent(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))
        }
        _ => Ok(()),
    }
}

fn cmd_generate(a: GenerateArgs) -> CliResult<()> {
    let mut spec = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => DatasetSpec::new(3, false),
    };
    if let Some(bits) = a.bits {
        spec.n_bits = bits;
    }
    if a.noisy || a.noise_sigma.is_some() {
        spec.noisy = true;
    }
    if let Some(sigma) = a.noise_sigma {
        spec.noise_sigma = Some(sigma);
    }
    if let Some(n) = a.n_train {
        spec.n_train = n;
    }
    if let Some(n) = a.n_test {
        spec.n_test = n;
    }
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let (train, test) = generate::<f64>(&spec)?;
    let out = a.out.unwrap_or_else(|| output_dir().join("dataset.csv"));
    let test_out = a.test_out.unwrap_or_else(|| sibling_test_path(&out));
    ensure_parent(&out)?;
    ensure_parent(&test_out)?;
    train.write_csv(&out)?;
    test.write_csv(&test_out)?;
    eprintln!(
        "wrote {} ({} rows) and {} ({} rows)",
        out.display(),
        train.len(),
        test_out.display(),
        test.len()
    );
    Ok(())
}

fn experiment_config(a: &TrainArgs) -> CliResult<ExperimentConfig> {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::from_json_file(path).map_err(|e| match e {
            Error::Json(_) => usage(format!("{}: {e}", path.display())),
            other => other.into(),
        })?,
        None => {
            let variant = a
                .variant
                .ok_or_else(|| usage("--variant is required without --config"))?;
            let m =
                a.m.ok_or_else(|| usage("--m is required without --config"))?;
            ExperimentConfig::new(DatasetSpec::new(3, false), variant, m)
        }
    };
    if let Some(v) = a.variant {
        cfg.variant = v;
    }
    if let Some(m) = a.m {
        cfg.m = m;
    }
    if a.resolution.is_some() {
        cfg.resolution = a.resolution;
    }
    if let Some(s) = a.s {
        cfg.s = s;
    }
    if let Some(n) = a.n_states {
        cfg.n_states = n;
    }
    if let Some(alpha) = a.alpha {
        cfg.alpha = alpha;
    }
    if let Some(epochs) = a.epochs {
        cfg.epochs = epochs;
    }
    if !a.seed.is_empty() {
        cfg.seeds = a.seed.clone();
    }
    if a.decrement_requires_fire {
        cfg.decrement_requires_fire = true;
    }
    Ok(cfg)
}

fn load_data(a: &TrainArgs, cfg: &mut ExperimentConfig) -> CliResult<(Dataset, Dataset)> {
    let Some(train_path) = &a.dataset else {
        if a.config.is_none() {
            return Err(usage("--dataset is required without --config"));
        }
        return Ok(generate::<f64>(&cfg.dataset)?);
    };
    let test_path = a
        .test
        .clone()
        .unwrap_or_else(|| sibling_test_path(train_path));
    if !test_path.exists() {
        return Err(usage(format!(
            "no test set: pass --test or provide {}",
            test_path.display()
        )));
    }
    let train = Dataset::read_csv(train_path)?;
    let test = Dataset::read_csv(&test_path)?;
    if train.n_bits() != test.n_bits() {
        return Err(usage(format!(
            "feature width mismatch: {} has {} inputs, {} has {}",
            train_path.display(),
            train.n_bits(),
            test_path.display(),
            test.n_bits()
        )));
    }
    cfg.dataset = DatasetSpec::new(train.n_bits(), false).with_sizes(train.len(), test.len());
    Ok((train, test))
}

fn cmd_train(a: TrainArgs) -> CliResult<()> {
    let mut cfg = experiment_config(&a)?;
    let (train, test) = load_data(&a, &mut cfg)?;
    cfg.validate()?;
    let out = a
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(output_dir);
    cfg.output_dir = Some(out.clone());
    let outcome = run_experiment_on::<f64>(&cfg, &train, &test)?;
    write_artifacts(&outcome, &out)?;
    for run in &outcome.runs {
        let f = run.report.final_metrics();
        println!(
            "seed {} train_mae {} test_mae {}",
            run.seed, f.train_mae, f.test_mae
        );
    }
    let best = outcome.best();
    let f = best.report.final_metrics();
    println!("final train_mae {} test_mae {}", f.train_mae, f.test_mae);
    eprintln!(
        "best seed {} in {:.2?}; artifacts in {}",
        best.seed,
        best.report.elapsed,
        out.display()
    );
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> CliResult<()> {
    let model = load_model::<f64>(&a.model)?;
    let data = Dataset::read_csv(&a.dataset)?;
    if model.n_inputs() != data.n_bits() {
        return Err(usage(format!(
            "feature width mismatch: model expects {} inputs, {} has {}",
            model.n_inputs(),
            a.dataset.display(),
            data.n_bits()
        )));
    }
    let preds = model.predict_dataset(&data)?;
    println!("mae {}", mae(&preds, &data.targets())?);
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> CliResult<()> {
    let grid = GridConfig::from_json_file(&a.grid).map_err(|e| match e {
        Error::Json(_) => usage(format!("{}: {e}", a.grid.display())),
        other => other.into(),
    })?;
    let out = a
        .out
        .clone()
        .or_else(|| grid.output_dir.clone())
        .unwrap_or_else(|| output_dir().join(&grid.name));
    let cells = run_sweep::<f64>(&grid, Some(&out))?;
    print!("{}", sweep_summary_csv(&cells));
    eprintln!("{} cells; artifacts in {}", cells.len(), out.display());
    Ok(())
}

fn cmd_spl(a: SplArgs) -> CliResult<()> {
    let env = SplEnvironment::<f64>::new(a.lambda_star, a.p)?;
    let init = SplState::new(a.init, a.n_steps)?;
    let trajectory = spl_run(&env, init, a.steps, &mut seeded_rng(a.seed))?;
    let tail = &trajectory[trajectory.len() - (a.steps / 10).max(1)..];
    println!(
        "final {} tail_mean {}",
        trajectory[trajectory.len() - 1],
        tail.iter().sum::<f64>() / tail.len() as f64
    );
    if let Some(path) = a.out {
        ensure_parent(&path)?;
        fs::write(&path, trajectory_csv(&trajectory))
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_report(a: ReportArgs) -> CliResult<()> {
    let model = load_model::<f64>(&a.model)?;
    print!("{}", clause_report(&model));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::SplDemo(a) => cmd_spl(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Failure::Usage(_) => ExitCode::from(1),
                Failure::Runtime(_) => ExitCode::from(2),
            }
        }
    }
}
