use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use super::fig2::{quantum_meta, quantum_options};
use super::params::{open_range, positive, Params};
use crate::bounds::{generalization_bound, num_hyperplanes};
use crate::data::{load_dataset_csv, make_planted_margin_dataset, margin, sample_hyperplanes, LabeledDataset};
use crate::error::{Error, Result};
use crate::perceptron::{hybrid_quantum, separates, QuantumOptions};
use crate::rng::derive_seed;
use crate::stats::{mean_std, std_error};

/// Leave-one-out study of the hybrid perceptron. The sample is read from
/// `file` (dataset export format) or planted from `n`, `d`, `gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct LooConfig {
    pub file: Option<PathBuf>,
    pub n: usize,
    pub d: usize,
    pub gamma: f64,
    pub data_seed: u64,
    pub epsilon: f64,
    pub trials: usize,
    pub quantum: QuantumOptions,
}

impl Default for LooConfig {
    fn default() -> Self {
        LooConfig {
            file: None,
            n: 60,
            d: 2,
            gamma: 0.1,
            data_seed: 0,
            epsilon: 0.1,
            trials: 50,
            quantum: QuantumOptions::default(),
        }
    }
}

impl LooConfig {
    pub fn from_params(p: &Params) -> Result<Self> {
        let d = Self::default();
        let cfg = LooConfig {
            file: p.get("file").map(PathBuf::from),
            n: p.usize("n", d.n)?,
            d: p.usize("d", d.d)?,
            gamma: p.f64("gamma", d.gamma)?,
            data_seed: p.u64("data_seed", d.data_seed)?,
            epsilon: open_range("epsilon", p.f64("epsilon", d.epsilon)?, 0.0, 1.0)?,
            trials: positive("trials", p.usize("trials", d.trials)?)?,
            quantum: quantum_options(p)?,
        };
        p.reject_unknown()?;
        Ok(cfg)
    }

    pub fn dataset(&self) -> Result<LabeledDataset> {
        match &self.file {
            Some(path) => load_dataset_csv(path),
            None => make_planted_margin_dataset(self.n, self.d, self.gamma, self.data_seed),
        }
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        let mut m = match &self.file {
            Some(f) => vec![("file".into(), f.display().to_string())],
            None => vec![
                ("dataset".into(), "planted".into()),
                ("n".into(), self.n.to_string()),
                ("d".into(), self.d.to_string()),
                ("gamma".into(), self.gamma.to_string()),
                ("data_seed".into(), self.data_seed.to_string()),
            ],
        };
        m.push(("epsilon".into(), self.epsilon.to_string()));
        m.push(("trials".into(), self.trials.to_string()));
        m.extend(quantum_meta(&self.quantum));
        m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LooTrial {
    pub trial: usize,
    pub loo_error: f64,
    /// Some drawn hyperplane separates the whole sample.
    pub version_space_nonempty: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LooReport {
    pub trials: Vec<LooTrial>,
    pub n: usize,
    pub gamma: f64,
    pub epsilon: f64,
    pub k: u64,
    pub mean_loo: f64,
    pub stderr: f64,
    pub k_over_n: f64,
    /// Risk bound at sample size `N - 1`.
    pub generalization_bound: f64,
}

impl LooReport {
    pub fn csv(&self) -> String {
        let mut s = String::from("trial,loo_error,version_space_nonempty,k,k_over_n,generalization_bound\n");
        for t in &self.trials {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                t.trial, t.loo_error, t.version_space_nonempty, self.k, self.k_over_n, self.generalization_bound
            )
            .unwrap();
        }
        s
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        vec![
            ("sample_gamma".into(), self.gamma.to_string()),
            ("k".into(), self.k.to_string()),
            ("mean_loo".into(), self.mean_loo.to_string()),
            ("stderr_loo".into(), self.stderr.to_string()),
        ]
    }

    pub fn summary(&self) -> String {
        format!(
            "mean LOO {:.4} +- {:.4}; K/N {:.4}; bound {:.4}",
            self.mean_loo, self.stderr, self.k_over_n, self.generalization_bound
        )
    }
}

pub fn run_loo_study(ds: &LabeledDataset, epsilon: f64, trials: usize, seed: u64) -> Result<LooReport> {
    run_loo_study_with(ds, epsilon, trials, &QuantumOptions::default(), seed)
}

/// Per trial: one draw of `K = num_hyperplanes(gamma_S, eps)` hyperplanes
/// shared by all folds, one hybrid run per fold `S - {x_i}`, and the
/// fraction of held-out points the fold hypotheses misclassify.
pub fn run_loo_study_with(
    ds: &LabeledDataset,
    epsilon: f64,
    trials: usize,
    opts: &QuantumOptions,
    seed: u64,
) -> Result<LooReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if ds.len() < 2 {
        return Err(Error::invalid("leave-one-out needs at least 2 points"));
    }
    let gamma = margin(ds).gamma;
    if gamma <= 0.0 {
        return Err(Error::invalid("leave-one-out study needs a linearly separable sample"));
    }
    let gamma = gamma.min(1.0 - 1e-12);
    let n = ds.len();
    let k = num_hyperplanes(gamma, epsilon)?;
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let hs = sample_hyperplanes(k as usize, ds.dim(), derive_seed(seed, "loo/hyperplanes", t as u64))?;
            let mut errors = 0;
            for (i, p) in ds.points().iter().enumerate() {
                let fold = ds.without(i);
                let fold_seed = derive_seed(seed, "loo/fold", (t * n + i) as u64);
                let run = hybrid_quantum(&fold, &hs, epsilon, opts, fold_seed)?;
                errors += usize::from(p.is_mistake(&run.hyperplane));
            }
            Ok(LooTrial {
                trial: t,
                loo_error: errors as f64 / n as f64,
                version_space_nonempty: hs.iter().any(|w| separates(w, ds)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = results.iter().map(|t| t.loo_error).collect();
    let (mean_loo, _) = mean_std(&errors);
    Ok(LooReport {
        n,
        gamma,
        epsilon,
        k,
        mean_loo,
        stderr: std_error(&errors),
        k_over_n: k as f64 / n as f64,
        generalization_bound: generalization_bound(n - 1, gamma, epsilon)?,
        trials: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loo_bounded_when_version_space_nonempty() {
        let ds = make_planted_margin_dataset(20, 2, 0.2, 3).unwrap();
        let r = run_loo_study(&ds, 0.1, 6, 1).unwrap();
        assert_eq!(r.trials.len(), 6);
        for t in r.trials.iter().filter(|t| t.version_space_nonempty) {
            assert!(t.loo_error <= r.k_over_n);
        }
    }

    #[test]
    fn rejects_non_separable() {
        use crate::data::{Label, LabeledPoint};
        let ds = LabeledDataset::new(
            "x",
            1,
            vec![LabeledPoint::new(vec![1.0], Label::Pos), LabeledPoint::new(vec![1.0], Label::Neg)],
        )
        .unwrap();
        assert!(run_loo_study(&ds, 0.1, 1, 0).is_err());
    }
}
