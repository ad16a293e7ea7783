use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use super::params::{open_range, positive, Params};
use crate::bounds::num_hyperplanes;
use crate::data::{
    load_two_class_csv, make_hard_dataset, margin, normalize, sample_hyperplanes, shuffle_split,
    LabeledDataset,
};
use crate::error::{Error, Result};
use crate::grover::{Backend, NoiseKind, NoiseModel};
use crate::perceptron::{
    classical_online, hybrid_quantum, online_quantum, version_space_quantum, Algorithm, Protocol,
    QuantumOptions,
};
use crate::rng::derive_seed;
use crate::stats::mean_std;

const QUANTUM: [Algorithm; 3] = [Algorithm::Online, Algorithm::VersionSpace, Algorithm::Hybrid];
const PROTOCOLS: [Protocol; 2] = [Protocol::OneUpdatePerPass, Protocol::StreamUntilClean];

/// Quantum-to-classical wall-step ratios on the Iris and Hard splits.
#[derive(Clone, Debug, PartialEq)]
pub struct Fig2Config {
    pub trials: usize,
    pub epsilon: f64,
    /// Two-class Iris CSV; `None` skips the Iris half.
    pub iris_path: Option<PathBuf>,
    pub iris_classes: (String, String),
    pub iris_fraction: f64,
    pub hard_n: usize,
    pub hard_fraction: f64,
    /// Classical protocol in the denominator of the reported ratio.
    pub baseline: Protocol,
    pub quantum: QuantumOptions,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Fig2Config {
            trials: 30,
            epsilon: 0.05,
            iris_path: Some(PathBuf::from("data/iris.csv")),
            iris_classes: ("setosa".into(), "versicolor".into()),
            iris_fraction: 0.1,
            hard_n: 1000,
            hard_fraction: 0.5,
            baseline: Protocol::OneUpdatePerPass,
            quantum: QuantumOptions::default(),
        }
    }
}

pub(crate) fn quantum_options(p: &Params) -> Result<QuantumOptions> {
    let backend = Backend::parse(&p.string("backend", "analytic"))?;
    let kind = NoiseKind::parse(&p.string("noise", "none"))?;
    let noise = NoiseModel::new(kind, p.f64("p", 0.0)?)?;
    Ok(QuantumOptions { backend, noise })
}

pub(crate) fn quantum_meta(q: &QuantumOptions) -> Vec<(String, String)> {
    vec![
        ("backend".into(), q.backend.as_str().into()),
        ("noise".into(), q.noise.kind().as_str().into()),
        ("p".into(), q.noise.p().to_string()),
    ]
}

impl Fig2Config {
    pub fn from_params(p: &Params) -> Result<Self> {
        let d = Self::default();
        let iris = p.string("iris", "data/iris.csv");
        let classes = p.string("iris_classes", "setosa,versicolor");
        let (a, b) = classes
            .split_once(',')
            .ok_or_else(|| Error::invalid("iris-classes must be two comma-separated names"))?;
        let cfg = Fig2Config {
            trials: positive("trials", p.usize("trials", d.trials)?)?,
            epsilon: open_range("epsilon", p.f64("epsilon", d.epsilon)?, 0.0, 1.0)?,
            iris_path: (iris != "none").then(|| PathBuf::from(iris)),
            iris_classes: (a.trim().to_string(), b.trim().to_string()),
            iris_fraction: open_range("iris_fraction", p.f64("iris_fraction", d.iris_fraction)?, 0.0, 1.0 + 1e-12)?,
            hard_n: positive("hard_n", p.usize("hard_n", d.hard_n)?)?,
            hard_fraction: open_range("hard_fraction", p.f64("hard_fraction", d.hard_fraction)?, 0.0, 1.0 + 1e-12)?,
            baseline: Protocol::parse(&p.string("baseline", d.baseline.as_str()))?,
            quantum: quantum_options(p)?,
        };
        p.reject_unknown()?;
        Ok(cfg)
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("trials".into(), self.trials.to_string()),
            ("epsilon".into(), self.epsilon.to_string()),
            (
                "iris".into(),
                self.iris_path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "none".into()),
            ),
            ("iris_classes".into(), format!("{},{}", self.iris_classes.0, self.iris_classes.1)),
            ("iris_fraction".into(), self.iris_fraction.to_string()),
            ("hard_n".into(), self.hard_n.to_string()),
            ("hard_fraction".into(), self.hard_fraction.to_string()),
            ("baseline".into(), self.baseline.as_str().into()),
            ("split".into(), "seeded shuffle, prefix".into()),
        ];
        m.extend(quantum_meta(&self.quantum));
        m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub baseline: Protocol,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig2Report {
    pub baseline: Protocol,
    /// Rows for both classical protocols.
    pub rows: Vec<RatioRow>,
}

impl Fig2Report {
    pub fn rows_for(&self, baseline: Protocol) -> impl Iterator<Item = &RatioRow> {
        self.rows.iter().filter(move |r| r.baseline == baseline)
    }

    pub fn ratio(&self, dataset: &str, algorithm: Algorithm, baseline: Protocol) -> Option<&RatioRow> {
        self.rows
            .iter()
            .find(|r| r.dataset == dataset && r.algorithm == algorithm && r.baseline == baseline)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("dataset,algorithm,mean_ratio,std_ratio,trials\n");
        for r in self.rows_for(self.baseline) {
            writeln!(s, "{},{},{},{},{}", r.dataset, r.algorithm.as_str(), r.mean_ratio, r.std_ratio, r.trials).unwrap();
        }
        s
    }

    pub fn baselines_csv(&self) -> String {
        let mut s = String::from("dataset,algorithm,baseline,mean_ratio,std_ratio,trials\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                r.dataset,
                r.algorithm.as_str(),
                r.baseline.as_str(),
                r.mean_ratio,
                r.std_ratio,
                r.trials
            )
            .unwrap();
        }
        s
    }

    pub fn summary(&self) -> String {
        self.rows_for(self.baseline)
            .map(|r| format!("{}/{}: {:.3}", r.dataset, r.algorithm.as_str(), r.mean_ratio))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// A labelled source sample plus how its splits' margins are obtained.
struct Source {
    name: &'static str,
    data: LabeledDataset,
    fraction: f64,
    /// Any `m` points of the Hard sample have margin `1/sqrt(m)`.
    hard: bool,
}

/// Ratios `[algorithm][protocol]` for one trial.
fn trial(src: &Source, cfg: &Fig2Config, seed: u64, t: u64) -> Result<[[f64; 2]; 3]> {
    let tag = |what: &str| derive_seed(seed, &format!("fig2/{}/{what}", src.name), t);
    let (train, _) = shuffle_split(&src.data, src.fraction, tag("split"))?;
    let gamma = if src.hard {
        1.0 / (train.len() as f64).sqrt()
    } else {
        margin(&train).gamma
    };
    if gamma <= 0.0 {
        return Err(Error::invalid(format!("{} split {t} is not linearly separable", src.name)));
    }
    let gamma = gamma.min(1.0 - 1e-12);
    let mut classical = [0.0; 2];
    for (slot, protocol) in classical.iter_mut().zip(PROTOCOLS) {
        let run = classical_online(&train, protocol).map_err(|e| {
            Error::CapExceeded(format!("classical baseline on {} split {t}: {e}", src.name))
        })?;
        *slot = run.ledger.wall_steps as f64;
    }
    let k = num_hyperplanes(gamma, cfg.epsilon)? as usize;
    let hs = sample_hyperplanes(k, train.dim(), tag("hyperplanes"))?;
    let q = &cfg.quantum;
    let costs = [
        online_quantum(&train, gamma, cfg.epsilon, q, tag("online"))?.ledger.wall_steps,
        version_space_quantum(&train, &hs, cfg.epsilon, q, tag("version_space"))?.ledger.wall_steps,
        hybrid_quantum(&train, &hs, cfg.epsilon, q, tag("hybrid"))?.ledger.wall_steps,
    ];
    Ok(costs.map(|c| [c as f64 / classical[0], c as f64 / classical[1]]))
}

pub fn run_fig2(cfg: &Fig2Config, seed: u64) -> Result<Fig2Report> {
    let mut sources = Vec::new();
    if let Some(path) = &cfg.iris_path {
        let raw = load_two_class_csv(path, &cfg.iris_classes.0, &cfg.iris_classes.1)?;
        sources.push(Source {
            name: "iris",
            data: normalize(&raw)?,
            fraction: cfg.iris_fraction,
            hard: false,
        });
    }
    sources.push(Source {
        name: "hard",
        data: make_hard_dataset(cfg.hard_n)?,
        fraction: cfg.hard_fraction,
        hard: true,
    });

    let mut rows = Vec::new();
    for src in &sources {
        let per_trial = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| trial(src, cfg, seed, t))
            .collect::<Result<Vec<_>>>()?;
        for (pi, protocol) in PROTOCOLS.into_iter().enumerate() {
            for (ai, algorithm) in QUANTUM.into_iter().enumerate() {
                let ratios: Vec<f64> = per_trial.iter().map(|r| r[ai][pi]).collect();
                let (mean_ratio, std_ratio) = mean_std(&ratios);
                rows.push(RatioRow {
                    dataset: src.name.to_string(),
                    algorithm,
                    baseline: protocol,
                    mean_ratio,
                    std_ratio,
                    trials: cfg.trials,
                });
            }
        }
    }
    Ok(Fig2Report { baseline: cfg.baseline, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_has_zero_spread() {
        let cfg = Fig2Config { trials: 1, iris_path: None, hard_n: 40, ..Default::default() };
        let r = run_fig2(&cfg, 0).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert!(r.rows.iter().all(|row| row.std_ratio == 0.0 && row.trials == 1));
    }

    #[test]
    fn reproducible() {
        let cfg = Fig2Config { trials: 3, iris_path: None, hard_n: 30, ..Default::default() };
        assert_eq!(run_fig2(&cfg, 5).unwrap(), run_fig2(&cfg, 5).unwrap());
    }
}
