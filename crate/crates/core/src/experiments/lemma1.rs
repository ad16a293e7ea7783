use std::fmt::Write as _;

use rayon::prelude::*;

use super::params::{positive, Params};
use crate::bounds::gaussian_separation_probability;
use crate::data::{sample_hyperplanes, Label, LabeledDataset, LabeledPoint};
use crate::error::{Error, Result};
use crate::perceptron::separates;
use crate::rng::derive_seed;
use crate::stats::binomial_std_error;

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Config {
    pub gammas: Vec<f64>,
    pub trials: usize,
}

impl Default for Lemma1Config {
    fn default() -> Self {
        Lemma1Config {
            gammas: vec![0.01, 0.03, 0.05, 0.1f64.sin(), 0.2, 0.4],
            trials: 100_000,
        }
    }
}

impl Lemma1Config {
    pub fn from_params(p: &Params) -> Result<Self> {
        let d = Self::default();
        let cfg = Lemma1Config {
            gammas: p.f64_list("gammas", &d.gammas)?,
            trials: positive("trials", p.usize("trials", d.trials)?)?,
        };
        p.reject_unknown()?;
        Ok(cfg)
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        let gammas: Vec<String> = self.gammas.iter().map(f64::to_string).collect();
        vec![
            ("gammas".into(), gammas.join(",")),
            ("trials".into(), self.trials.to_string()),
            ("dataset".into(), "wedge, alpha = asin(gamma)".into()),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Row {
    pub gamma: f64,
    pub alpha: f64,
    pub trials: usize,
    pub empirical: f64,
    pub stderr: f64,
    /// Exact separation probability `alpha / pi` of the wedge.
    pub wedge_exact: f64,
    /// `erf(gamma / sqrt 2)`.
    pub lemma_bound: f64,
    pub first_order: f64,
}

/// The wedge `{((cos a, sin a), +1), ((cos a, -sin a), -1)}` of margin `sin a`.
pub fn wedge_dataset(alpha: f64) -> LabeledDataset {
    let (s, c) = alpha.sin_cos();
    LabeledDataset::new(
        format!("wedge-{alpha}"),
        2,
        vec![
            LabeledPoint::new(vec![c, s], Label::Pos),
            LabeledPoint::new(vec![c, -s], Label::Neg),
        ],
    )
    .expect("finite wedge")
}

/// Fraction of Gaussian hyperplanes separating the wedge of margin `gamma`.
pub fn run_lemma1_mc(gammas: &[f64], trials: usize, seed: u64) -> Result<Vec<Lemma1Row>> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    gammas
        .par_iter()
        .enumerate()
        .map(|(i, &gamma)| {
            if !(gamma > 0.0 && gamma < 1.0) {
                return Err(Error::invalid("gamma must be in (0,1)"));
            }
            let alpha = gamma.asin();
            let ds = wedge_dataset(alpha);
            let hs = sample_hyperplanes(trials, 2, derive_seed(seed, "lemma1", i as u64))?;
            let hits = hs.iter().filter(|w| separates(w, &ds)).count();
            let empirical = hits as f64 / trials as f64;
            let (lemma_bound, first_order) = gaussian_separation_probability(gamma)?;
            Ok(Lemma1Row {
                gamma,
                alpha,
                trials,
                empirical,
                stderr: binomial_std_error(empirical, trials),
                wedge_exact: alpha / std::f64::consts::PI,
                lemma_bound,
                first_order,
            })
        })
        .collect()
}

pub(crate) fn csv(rows: &[Lemma1Row]) -> String {
    let mut s = String::from("gamma,alpha,trials,empirical,stderr,wedge_exact,lemma_bound,first_order\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.gamma, r.alpha, r.trials, r.empirical, r.stderr, r.wedge_exact, r.lemma_bound, r.first_order
        )
        .unwrap();
    }
    s
}
