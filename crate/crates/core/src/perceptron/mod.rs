//! The classical perceptron and the three Grover-based learners.
//!
//! Every learner charges a [`CostLedger`]. One wall step is one
//! data-touching primitive: a classical point test, or one Grover iteration
//! over the training points. A Grover iteration over hyperplanes costs `N`
//! steps because its oracle evaluates every training point.

mod classical;
mod quantum;

use std::fmt::Write as _;

use crate::data::LabeledDataset;
use crate::error::Result;
use crate::grover::{Backend, NoiseModel};
use crate::hyperplane::Hyperplane;

pub use classical::{classical_online, classical_online_with, ClassicalLimits, DEFAULT_MAX_EXAMINATIONS};
pub use quantum::{
    hybrid_quantum, online_quantum, online_quantum_auto, version_space_quantum, AutoGammaRun,
    QuantumOptions,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CostLedger {
    pub oracle_queries: u64,
    pub classical_verifications: u64,
    pub updates: u64,
    pub wall_steps: u64,
}

impl CostLedger {
    /// A classical test of `points` data points.
    pub(crate) fn charge_points(&mut self, points: u64) {
        self.oracle_queries += points;
        self.wall_steps += points;
    }

    /// `iterations` Grover iterations, each querying `width` points.
    pub(crate) fn charge_grover(&mut self, iterations: u64, width: u64) {
        self.oracle_queries += iterations * width;
        self.wall_steps += iterations * width;
    }

    /// Classical check of a search candidate touching `points` points.
    pub(crate) fn charge_verification(&mut self, points: u64) {
        self.classical_verifications += points;
        self.wall_steps += points;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    /// Full passes updating on every mistake until a pass is clean.
    StreamUntilClean,
    /// Full passes applying only the first mistake of each pass.
    OneUpdatePerPass,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::StreamUntilClean => "stream_until_clean",
            Protocol::OneUpdatePerPass => "one_update_per_pass",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "stream_until_clean" => Ok(Protocol::StreamUntilClean),
            "one_update_per_pass" => Ok(Protocol::OneUpdatePerPass),
            _ => Err(crate::Error::invalid(format!("unknown protocol '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Classical(Protocol),
    Online,
    VersionSpace,
    Hybrid,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Classical(Protocol::StreamUntilClean) => "classical",
            Algorithm::Classical(Protocol::OneUpdatePerPass) => "classical_one_update_per_pass",
            Algorithm::Online => "online",
            Algorithm::VersionSpace => "version_space",
            Algorithm::Hybrid => "hybrid",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Algorithm::Classical(Protocol::StreamUntilClean)),
            "classical_one_update_per_pass" => Ok(Algorithm::Classical(Protocol::OneUpdatePerPass)),
            "online" => Ok(Algorithm::Online),
            "version_space" | "version-space" => Ok(Algorithm::VersionSpace),
            "hybrid" => Ok(Algorithm::Hybrid),
            _ => Err(crate::Error::invalid(format!("unknown algorithm '{s}'"))),
        }
    }
}

pub const RUN_CSV_HEADER: &str = "algorithm,dataset,n,gamma,epsilon,backend,noise_kind,noise_p,seed,separates,updates,oracle_queries,classical_verifications,wall_steps";

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub hyperplane: Hyperplane,
    /// Strict separation of the whole training set, checked without charge.
    pub separates: bool,
    pub ledger: CostLedger,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub dataset: String,
    pub n: usize,
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
    pub backend: Option<Backend>,
    pub noise: NoiseModel,
}

impl RunResult {
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.algorithm.as_str(),
            self.dataset,
            self.n,
            opt(self.gamma),
            opt(self.epsilon),
            self.backend.map(Backend::as_str).unwrap_or(""),
            self.noise.kind().as_str(),
            self.noise.p(),
            self.seed,
            self.separates,
            self.ledger.updates,
            self.ledger.oracle_queries,
            self.ledger.classical_verifications,
            self.ledger.wall_steps
        )
        .expect("writing to a String");
        s
    }
}

/// `y <w, x> > 0` for every point, without charging any cost.
pub fn separates(w: &Hyperplane, ds: &LabeledDataset) -> bool {
    ds.points().iter().all(|p| p.signed_margin(w) > 0.0)
}

/// Charged classical check that `w` strictly separates `ds`.
pub fn verify_separator(w: &Hyperplane, ds: &LabeledDataset, ledger: &mut CostLedger) -> Result<bool> {
    ds.check_dim(w)?;
    ledger.charge_points(ds.len() as u64);
    Ok(separates(w, ds))
}
