//! The `qperc` command line.
//!
//! A thin shell over `qperc-core`: every command parses its arguments,
//! calls the library and writes the result. Exit status is 0 on success,
//! 1 for usage and validation errors and 2 for runtime failures; errors are
//! printed as a single `error: ...` line.

mod config;
mod plot;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qperc_core::bounds::{num_hyperplanes, Curve};
use qperc_core::data::{
    load_dataset_csv, load_two_class_csv, make_hard_dataset, make_planted_margin_dataset, margin,
    normalize, sample_hyperplanes, write_dataset_csv, LabeledDataset,
};
use qperc_core::experiments::{
    run_experiment, run_fig1, write_atomic, ExperimentName, ExperimentSpec, Fig1Config,
    Params, SweepVar, CODE_VERSION,
};
use qperc_core::grover::{Backend, NoiseKind, NoiseModel};
use qperc_core::perceptron::{
    classical_online, hybrid_quantum, online_quantum, version_space_quantum, Algorithm,
    QuantumOptions, RunResult, RUN_CSV_HEADER,
};
use qperc_core::rng::derive_seed;
use qperc_core::Error;

pub use plot::{render_svg, PlotSpec};

pub const OUT_DIR_ENV: &str = "QPERC_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "qperc", version, about = "Grover-search perceptron simulator and benchmarks")]
struct Cli {
    /// Master RNG seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory (default ./out, or $QPERC_OUT_DIR).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// File of key=value defaults; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate datasets or compute margins.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Run one learner on a dataset file and print its CSV row.
    Run(RunArgs),
    /// Evaluate bound calculators.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Run an experiment suite: fig1, fig2, fig3, hard-steps, lemma1, loo.
    Experiment(ExperimentArgs),
    /// Render a runner CSV as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
enum DatasetCommand {
    /// Write the Hard sample of size n.
    GenHard {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a planted-margin sample.
    GenPlanted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the hard margin of a dataset file.
    Margin(DataFileArgs),
}

#[derive(Debug, Args)]
struct DataFileArgs {
    /// Dataset export CSV, or a two-class CSV when --classes is given.
    #[arg(long)]
    file: Option<PathBuf>,
    /// `a,b`: read a labelled CSV, keep classes a (+1) and b (-1), normalise.
    #[arg(long)]
    classes: Option<String>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// classical, classical_one_update_per_pass, online, version_space, hybrid.
    algorithm: String,
    #[command(flatten)]
    data: DataFileArgs,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Margin; estimated from the data when omitted.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value = "analytic")]
    backend: String,
    #[arg(long, default_value = "none")]
    noise: String,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Print `curve,x_var,x,value` rows over a log-spaced sweep.
    Sweep {
        /// online, version_space, hybrid or all.
        #[arg(long, default_value = "all")]
        curve: String,
        /// n or inv_gamma.
        #[arg(long, default_value = "n")]
        var: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 16)]
        points: usize,
        /// Fixed margin for the n sweep.
        #[arg(long, default_value_t = 0.01)]
        gamma: f64,
        /// Fixed sample size for the inv_gamma sweep.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
    },
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    name: String,
    /// Parameters as `--key value` pairs.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    params: Vec<String>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Column for the x axis (inferred for runner CSVs).
    #[arg(long)]
    x: Option<String>,
    /// Column for the y axis.
    #[arg(long)]
    y: Option<String>,
    /// Column naming the series.
    #[arg(long)]
    series: Option<String>,
    /// Keep only rows whose `x_var` equals this value (fig1 CSVs).
    #[arg(long)]
    x_var: Option<String>,
    #[arg(long)]
    log_x: Option<bool>,
    #[arg(long)]
    log_y: Option<bool>,
    #[arg(long)]
    title: Option<String>,
}

/// Failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Runs `qperc` with `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let args = match config::merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            return e.code;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let text = e.to_string();
                    let first = text.lines().next().unwrap_or("invalid usage");
                    let first = first.strip_prefix("error: ").unwrap_or(first);
                    let _ = writeln!(err, "error: {first}");
                    1
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> CliResult {
    let dir = out_dir(&cli);
    let seed = cli.seed;
    match cli.command {
        Command::Dataset(cmd) => dataset(cmd, &dir, seed, out),
        Command::Run(args) => run_algorithm(args, &dir, seed, out),
        Command::Bounds(cmd) => bounds(cmd, out),
        Command::Experiment(args) => experiment(args, &dir, seed, out),
        Command::Plot(args) => plot_command(args, out),
    }
}

fn check_open(name: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(usage(format!("{name} must be in (0,1)")))
    }
}

fn write_dataset(ds: &LabeledDataset, path: &Path, out: &mut dyn Write) -> CliResult {
    let mut buf = Vec::new();
    write_dataset_csv(ds, &mut buf)?;
    write_atomic(path, &buf)?;
    writeln!(out, "{}", path.display())?;
    Ok(())
}

fn load(args: &DataFileArgs) -> CliResult<LabeledDataset> {
    let file = args.file.as_ref().ok_or_else(|| usage("missing required flag --file"))?;
    match &args.classes {
        None => Ok(load_dataset_csv(file)?),
        Some(c) => {
            let (a, b) = c
                .split_once(',')
                .ok_or_else(|| usage("--classes must be two comma-separated names"))?;
            Ok(normalize(&load_two_class_csv(file, a.trim(), b.trim())?)?)
        }
    }
}

fn dataset(cmd: DatasetCommand, dir: &Path, seed: u64, out: &mut dyn Write) -> CliResult {
    match cmd {
        DatasetCommand::GenHard { n, out: path } => {
            let ds = make_hard_dataset(n)?;
            let path = path.unwrap_or_else(|| dir.join(format!("hard{n}.csv")));
            write_dataset(&ds, &path, out)
        }
        DatasetCommand::GenPlanted { n, d, gamma, out: path } => {
            let ds = make_planted_margin_dataset(n, d, gamma, seed)?;
            let path = path.unwrap_or_else(|| dir.join(format!("planted_n{n}_d{d}_g{gamma}_s{seed}.csv")));
            write_dataset(&ds, &path, out)
        }
        DatasetCommand::Margin(args) => {
            let ds = load(&args)?;
            let r = margin(&ds);
            writeln!(out, "gamma,method,n,dim")?;
            writeln!(out, "{},{},{},{}", r.gamma, r.method.as_str(), ds.len(), ds.dim())?;
            Ok(())
        }
    }
}

fn run_algorithm(args: RunArgs, dir: &Path, seed: u64, out: &mut dyn Write) -> CliResult {
    let epsilon = check_open("epsilon", args.epsilon)?;
    let algorithm = Algorithm::parse(&args.algorithm)?;
    if let Some(g) = args.gamma {
        check_open("gamma", g)?;
    }
    let backend = Backend::parse(&args.backend)?;
    let noise = NoiseModel::new(NoiseKind::parse(&args.noise)?, args.p)?;
    let opts = QuantumOptions { backend, noise };
    let ds = load(&args.data)?;

    let gamma = || -> CliResult<f64> {
        match args.gamma {
            Some(g) => Ok(g),
            None => {
                let g = margin(&ds).gamma;
                if g <= 0.0 {
                    Err(usage("dataset is not linearly separable; pass --gamma"))
                } else {
                    Ok(g.min(1.0 - 1e-12))
                }
            }
        }
    };
    let hyperplanes = |gamma: f64| -> CliResult<_> {
        let k = num_hyperplanes(gamma, epsilon)? as usize;
        Ok(sample_hyperplanes(k, ds.dim(), derive_seed(seed, "run/hyperplanes", 0))?)
    };
    let result: RunResult = match algorithm {
        Algorithm::Classical(protocol) => {
            let mut r = classical_online(&ds, protocol)?;
            r.seed = seed;
            r
        }
        Algorithm::Online => online_quantum(&ds, gamma()?, epsilon, &opts, seed)?,
        Algorithm::VersionSpace => {
            let g = gamma()?;
            let mut r = version_space_quantum(&ds, &hyperplanes(g)?, epsilon, &opts, seed)?;
            r.gamma = Some(g);
            r
        }
        Algorithm::Hybrid => {
            let g = gamma()?;
            let mut r = hybrid_quantum(&ds, &hyperplanes(g)?, epsilon, &opts, seed)?;
            r.gamma = Some(g);
            r
        }
    };
    let csv = format!("{RUN_CSV_HEADER}\n{}\n", result.csv_row());
    let stem = format!("run_{}", algorithm.as_str());
    write_atomic(&dir.join(format!("{stem}.csv")), csv.as_bytes())?;
    let mut meta = format!(
        "command=run\nalgorithm={}\nmaster_seed={seed}\ncode_version={CODE_VERSION}\nfile={}\nepsilon={epsilon}\nbackend={}\nnoise={}\np={}\n",
        algorithm.as_str(),
        args.data.file.as_deref().unwrap_or(Path::new("")).display(),
        backend.as_str(),
        noise.kind().as_str(),
        noise.p()
    );
    if let Some(g) = result.gamma {
        meta.push_str(&format!("gamma={g}\n"));
    }
    write_atomic(&dir.join(format!("{stem}.meta")), meta.as_bytes())?;
    write!(out, "{csv}")?;
    Ok(())
}

fn bounds(cmd: BoundsCommand, out: &mut dyn Write) -> CliResult {
    let BoundsCommand::Sweep { curve, var, from, to, points, gamma, n, epsilon } = cmd;
    let curves: Vec<Curve> = match curve.as_str() {
        "all" => Curve::ALL.to_vec(),
        c => vec![Curve::parse(c)?],
    };
    let var = match var.as_str() {
        "n" => SweepVar::N,
        "inv_gamma" | "inv-gamma" => SweepVar::InvGamma,
        v => return Err(usage(format!("--var must be n or inv_gamma, got '{v}'"))),
    };
    let cfg = Fig1Config {
        vars: vec![var],
        epsilon: check_open("epsilon", epsilon)?,
        gamma: check_open("gamma", gamma)?,
        n_from: from,
        n_to: to,
        n_points: points,
        n_fixed: n,
        inv_gamma_from: from,
        inv_gamma_to: to,
        inv_gamma_points: points,
    };
    let report = run_fig1(&cfg)?;
    writeln!(out, "curve,x_var,x,value")?;
    for r in report.rows.iter().filter(|r| curves.contains(&r.curve)) {
        writeln!(out, "{},{},{},{}", r.curve.as_str(), r.x_var.as_str(), r.x, r.value)?;
    }
    Ok(())
}

/// Global flags that land among the trailing experiment parameters.
#[derive(Default)]
struct Globals {
    seed: Option<u64>,
    out_dir: Option<PathBuf>,
}

/// `--key value` and `--key=value` pairs.
fn parse_pairs(raw: &[String]) -> CliResult<(Params, Globals)> {
    let mut params = Params::new();
    let mut globals = Globals::default();
    let mut it = raw.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| usage(format!("unexpected argument '{arg}'; parameters are --key value pairs")))?;
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k, v.to_string()),
            None => (key, it.next().ok_or_else(|| usage(format!("missing value for --{key}")))?.clone()),
        };
        match key.replace('_', "-").as_str() {
            "seed" => globals.seed = Some(value.parse().map_err(|_| usage(format!("--seed: invalid value '{value}'")))?),
            "out-dir" => globals.out_dir = Some(PathBuf::from(value)),
            "config" => {}
            _ => params.insert(key, value),
        }
    }
    Ok((params, globals))
}

fn experiment(args: ExperimentArgs, dir: &Path, seed: u64, out: &mut dyn Write) -> CliResult {
    let (params, globals) = parse_pairs(&args.params)?;
    let spec = ExperimentSpec {
        name: ExperimentName::parse(&args.name)?,
        params,
        seed: globals.seed.unwrap_or(seed),
        output_dir: globals.out_dir.unwrap_or_else(|| dir.to_path_buf()),
    };
    let result = run_experiment(&spec)?;
    writeln!(out, "{}", result.summary)?;
    Ok(())
}

fn plot_command(args: PlotArgs, out: &mut dyn Write) -> CliResult {
    let text = fs::read_to_string(&args.csv).map_err(|e| Error::Io { path: args.csv.clone(), source: e })?;
    let spec = PlotSpec {
        x: args.x,
        y: args.y,
        series: args.series,
        x_var: args.x_var,
        log_x: args.log_x,
        log_y: args.log_y,
        title: args.title,
    };
    let svg = render_svg(&text, &spec).map_err(|m| Failure { code: 2, message: format!("{}: {m}", args.csv.display()) })?;
    write_atomic(&args.out, svg.as_bytes())?;
    writeln!(out, "{}", args.out.display())?;
    Ok(())
}
