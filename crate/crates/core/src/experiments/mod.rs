//! Seeded experiment runners.
//!
//! Each runner is a pure function of its parameters and a master seed.
//! Trials draw from streams derived from `(master seed, tag, trial index)`
//! and are collected in trial order, so output does not depend on thread
//! scheduling. [`run_experiment`] writes `<name>.csv` and `<name>.meta`
//! into the output directory.

mod fig1;
mod fig2;
mod fig3;
mod lemma1;
mod loo;
mod params;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::data::{make_hard_dataset, prefix_fraction};
use crate::error::{Error, Result};
use crate::perceptron::{classical_online, Protocol};

pub use fig1::{run_fig1, Fig1Config, Fig1Report, Fig1Row, SlopeRow, SweepVar};
pub use fig2::{run_fig2, Fig2Config, Fig2Report, RatioRow};
pub use fig3::{run_fig3, Fig3Config, Fig3Report};
pub use lemma1::{run_lemma1_mc, Lemma1Config, Lemma1Row};
pub use loo::{run_loo_study, LooConfig, LooReport, LooTrial};
pub use params::Params;

pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentName {
    Fig1,
    Fig2,
    Fig3,
    HardSteps,
    Lemma1,
    Loo,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 6] = [
        ExperimentName::Fig1,
        ExperimentName::Fig2,
        ExperimentName::Fig3,
        ExperimentName::HardSteps,
        ExperimentName::Lemma1,
        ExperimentName::Loo,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(ExperimentName::Fig1),
            "fig2" => Ok(ExperimentName::Fig2),
            "fig3" => Ok(ExperimentName::Fig3),
            "hard-steps" | "hard_steps" => Ok(ExperimentName::HardSteps),
            "lemma1" | "lemma1_mc" => Ok(ExperimentName::Lemma1),
            "loo" | "loo_study" => Ok(ExperimentName::Loo),
            _ => Err(Error::invalid(format!("unknown experiment '{s}'"))),
        }
    }

    /// Stem of the output files.
    pub fn file_stem(self) -> &'static str {
        match self {
            ExperimentName::Fig1 => "fig1",
            ExperimentName::Fig2 => "fig2",
            ExperimentName::Fig3 => "fig3",
            ExperimentName::HardSteps => "hard_steps",
            ExperimentName::Lemma1 => "lemma1_mc",
            ExperimentName::Loo => "loo_study",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub params: Params,
    pub seed: u64,
    pub output_dir: PathBuf,
}

/// Files written by a run and a one-line summary for the terminal.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// `n`, `train_fraction`, `protocol`; prints the classical step count.
#[derive(Clone, Debug, PartialEq)]
pub struct HardStepsConfig {
    pub n: usize,
    pub train_fraction: f64,
    pub protocol: Protocol,
}

impl Default for HardStepsConfig {
    fn default() -> Self {
        HardStepsConfig {
            n: 1000,
            train_fraction: 0.5,
            protocol: Protocol::OneUpdatePerPass,
        }
    }
}

impl HardStepsConfig {
    pub fn from_params(p: &Params) -> Result<Self> {
        let d = Self::default();
        let cfg = HardStepsConfig {
            n: p.usize("n", d.n)?,
            train_fraction: p.f64("train_fraction", d.train_fraction)?,
            protocol: Protocol::parse(&p.string("protocol", d.protocol.as_str()))?,
        };
        p.reject_unknown()?;
        Ok(cfg)
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        vec![
            ("n".into(), self.n.to_string()),
            ("train_fraction".into(), self.train_fraction.to_string()),
            ("protocol".into(), self.protocol.as_str().into()),
        ]
    }
}

/// Classical wall steps on the first `ceil(fraction n)` Hard points, in
/// index order.
pub fn run_hard_steps(n: usize, train_fraction: f64, protocol: Protocol) -> Result<u64> {
    let ds = make_hard_dataset(n)?;
    let train = prefix_fraction(&ds, train_fraction)?;
    Ok(classical_online(&train, protocol)?.ledger.wall_steps)
}

/// Writes `contents` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// `key=value` lines stamping a run.
pub fn meta_text(name: ExperimentName, seed: u64, params: &[(String, String)]) -> String {
    let mut s = String::new();
    writeln!(s, "experiment={}", name.file_stem()).unwrap();
    writeln!(s, "master_seed={seed}").unwrap();
    writeln!(s, "code_version={CODE_VERSION}").unwrap();
    for (k, v) in params {
        writeln!(s, "{k}={v}").unwrap();
    }
    s
}

struct Outputs<'a> {
    spec: &'a ExperimentSpec,
    files: Vec<PathBuf>,
}

impl Outputs<'_> {
    fn write(&mut self, stem: &str, ext: &str, contents: &str) -> Result<()> {
        let path = self.spec.output_dir.join(format!("{stem}.{ext}"));
        write_atomic(&path, contents.as_bytes())?;
        self.files.push(path);
        Ok(())
    }

    fn meta(&mut self, params: &[(String, String)]) -> Result<()> {
        let text = meta_text(self.spec.name, self.spec.seed, params);
        self.write(self.spec.name.file_stem(), "meta", &text)
    }

    fn finish(self, summary: String) -> ExperimentOutput {
        ExperimentOutput {
            files: self.files,
            summary,
        }
    }
}

/// Parses the spec's parameters, runs the experiment and writes its files.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let mut out = Outputs {
        spec,
        files: Vec::new(),
    };
    let stem = spec.name.file_stem();
    let summary = match spec.name {
        ExperimentName::Fig1 => {
            let cfg = Fig1Config::from_params(&spec.params)?;
            let report = run_fig1(&cfg)?;
            out.write(stem, "csv", &report.csv())?;
            out.write("fig1_slopes", "csv", &report.slopes_csv())?;
            out.meta(&cfg.meta())?;
            report.summary()
        }
        ExperimentName::Fig2 => {
            let cfg = Fig2Config::from_params(&spec.params)?;
            let report = run_fig2(&cfg, spec.seed)?;
            out.write(stem, "csv", &report.csv())?;
            out.write("fig2_baselines", "csv", &report.baselines_csv())?;
            out.meta(&cfg.meta())?;
            report.summary()
        }
        ExperimentName::Fig3 => {
            let cfg = Fig3Config::from_params(&spec.params)?;
            let report = run_fig3(&cfg, spec.seed)?;
            out.write(stem, "csv", &report.csv())?;
            out.meta(&cfg.meta())?;
            format!("{} rows", report.rows.len())
        }
        ExperimentName::HardSteps => {
            let cfg = HardStepsConfig::from_params(&spec.params)?;
            let steps = run_hard_steps(cfg.n, cfg.train_fraction, cfg.protocol)?;
            let csv = format!(
                "n,train_fraction,protocol,wall_steps\n{},{},{},{steps}\n",
                cfg.n,
                cfg.train_fraction,
                cfg.protocol.as_str()
            );
            out.write(stem, "csv", &csv)?;
            out.meta(&cfg.meta())?;
            steps.to_string()
        }
        ExperimentName::Lemma1 => {
            let cfg = Lemma1Config::from_params(&spec.params)?;
            let rows = run_lemma1_mc(&cfg.gammas, cfg.trials, spec.seed)?;
            out.write(stem, "csv", &lemma1::csv(&rows))?;
            out.meta(&cfg.meta())?;
            format!("{} rows", rows.len())
        }
        ExperimentName::Loo => {
            let cfg = LooConfig::from_params(&spec.params)?;
            let ds = cfg.dataset()?;
            let report = run_loo_study(&ds, cfg.epsilon, cfg.trials, spec.seed)?;
            out.write(stem, "csv", &report.csv())?;
            let mut meta = cfg.meta();
            meta.extend(report.meta());
            out.meta(&meta)?;
            report.summary()
        }
    };
    Ok(out.finish(summary))
}
