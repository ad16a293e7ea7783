use rand::Rng;

use super::{separates, verify_separator, Algorithm, CostLedger, RunResult};
use crate::bounds::{amplification_rounds, novikoff_bound, online_attempts, version_space_attempts};
use crate::data::{margin_with_passes, LabeledDataset};
use crate::error::{Error, Result};
use crate::grover::{qsearch, Backend, GroverInstance, NoiseModel};
use crate::hyperplane::Hyperplane;
use crate::rng::{self, SimRng};

/// Search backend and noise channel shared by the quantum learners.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantumOptions {
    pub backend: Backend,
    pub noise: NoiseModel,
}

impl Default for QuantumOptions {
    fn default() -> Self {
        QuantumOptions {
            backend: Backend::Analytic,
            noise: NoiseModel::none(),
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon must be in (0,1)"))
    }
}

/// One QSearch attempt over `n` items marked by `pred`, charged at `width`
/// steps per Grover iteration. The statevector backend searches the space
/// padded to a power of two; padding items are never marked.
fn search<R: Rng + ?Sized>(
    n: usize,
    pred: impl FnMut(usize) -> bool,
    width: u64,
    opts: &QuantumOptions,
    ledger: &mut CostLedger,
    rng: &mut R,
) -> Result<usize> {
    let mut inst = GroverInstance::from_predicate(n, pred)?;
    if opts.backend == Backend::Statevector {
        inst = inst.padded_to_power_of_two();
    }
    let out = qsearch(&inst, opts.backend, &opts.noise, rng)?;
    ledger.charge_grover(out.iterations_used, width);
    Ok(out.index)
}

/// Searches for a point with non-positive signed margin and verifies the
/// candidate. `margins[i]` is `y_i <w, x_i>` for the current `w`.
fn find_mistake<R: Rng + ?Sized>(
    margins: &[f64],
    opts: &QuantumOptions,
    ledger: &mut CostLedger,
    rng: &mut R,
) -> Result<Option<usize>> {
    let i = search(margins.len(), |i| margins[i] <= 0.0, 1, opts, ledger, rng)?;
    ledger.charge_verification(1);
    Ok(margins.get(i).filter(|&&m| m <= 0.0).map(|_| i))
}

fn result(
    ds: &LabeledDataset,
    w: Hyperplane,
    ledger: CostLedger,
    algorithm: Algorithm,
    seed: u64,
    gamma: Option<f64>,
    epsilon: f64,
    opts: &QuantumOptions,
) -> RunResult {
    RunResult {
        separates: separates(&w, ds),
        hyperplane: w,
        ledger,
        algorithm,
        seed,
        dataset: ds.name().to_string(),
        n: ds.len(),
        gamma,
        epsilon: Some(epsilon),
        backend: Some(opts.backend),
        noise: opts.noise,
    }
}

fn rng_for(seed: u64, algorithm: Algorithm) -> SimRng {
    rng::substream(seed, algorithm.as_str(), 0)
}

/// Online quantum perceptron: `ceil(1/gamma^2)` rounds of
/// `ceil(log_{3/4}(gamma^2 eps))` searches for a misclassified point, each
/// verified hit updating `w += y x`. A round without updates is followed by
/// a full verification pass and the run stops once it is clean.
pub fn online_quantum(
    ds: &LabeledDataset,
    gamma: f64,
    epsilon: f64,
    opts: &QuantumOptions,
    seed: u64,
) -> Result<RunResult> {
    check_epsilon(epsilon)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid("gamma must be in (0,1)"));
    }
    if ds.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    let rounds = novikoff_bound(gamma)?;
    let attempts = online_attempts(gamma, epsilon)?;
    let mut rng = rng_for(seed, Algorithm::Online);
    let mut w = Hyperplane::zeros(ds.dim());
    let mut margins = ds.signed_margins(&w);
    let mut ledger = CostLedger::default();
    for round in 0..rounds {
        let mut updated = false;
        for _ in 0..attempts {
            if let Some(i) = find_mistake(&margins, opts, &mut ledger, &mut rng)? {
                let p = &ds.points()[i];
                w.add_scaled(&p.x, p.y.value());
                margins = ds.signed_margins(&w);
                ledger.updates += 1;
                updated = true;
            }
        }
        if !updated && round + 1 < rounds && verify_separator(&w, ds, &mut ledger)? {
            break;
        }
    }
    Ok(result(ds, w, ledger, Algorithm::Online, seed, Some(gamma), epsilon, opts))
}

/// [`online_quantum`] with the margin estimated from the data first.
#[derive(Clone, Debug, PartialEq)]
pub struct AutoGammaRun {
    pub run: RunResult,
    pub gamma: f64,
    /// Cost of the margin estimate: one data pass per solver cycle.
    pub estimation: CostLedger,
}

pub fn online_quantum_auto(
    ds: &LabeledDataset,
    epsilon: f64,
    opts: &QuantumOptions,
    seed: u64,
) -> Result<AutoGammaRun> {
    let (report, passes) = margin_with_passes(ds);
    if report.gamma <= 0.0 {
        return Err(Error::invalid("training set is not linearly separable"));
    }
    let mut estimation = CostLedger::default();
    estimation.charge_points(passes * ds.len() as u64);
    let gamma = report.gamma.min(1.0 - 1e-12);
    Ok(AutoGammaRun {
        run: online_quantum(ds, gamma, epsilon, opts, seed)?,
        gamma,
        estimation,
    })
}

fn check_hyperplanes(ds: &LabeledDataset, hyperplanes: &[Hyperplane]) -> Result<()> {
    if hyperplanes.is_empty() {
        return Err(Error::invalid("hyperplane list is empty"));
    }
    hyperplanes.iter().try_for_each(|w| ds.check_dim(w))
}

/// Version-space quantum perceptron: `ceil(log_{3/4} eps)` searches over the
/// hyperplanes for one separating every point; falls back to the first.
pub fn version_space_quantum(
    ds: &LabeledDataset,
    hyperplanes: &[Hyperplane],
    epsilon: f64,
    opts: &QuantumOptions,
    seed: u64,
) -> Result<RunResult> {
    check_epsilon(epsilon)?;
    check_hyperplanes(ds, hyperplanes)?;
    let n = ds.len() as u64;
    let mut rng = rng_for(seed, Algorithm::VersionSpace);
    let mut ledger = CostLedger::default();
    let consistent: Vec<bool> = hyperplanes.iter().map(|w| separates(w, ds)).collect();
    let mut chosen = &hyperplanes[0];
    for _ in 0..version_space_attempts(epsilon)? {
        let k = search(hyperplanes.len(), |k| consistent[k], n, opts, &mut ledger, &mut rng)?;
        ledger.charge_verification(n);
        if consistent.get(k).copied().unwrap_or(false) {
            chosen = &hyperplanes[k];
            break;
        }
    }
    Ok(result(ds, chosen.clone(), ledger, Algorithm::VersionSpace, seed, None, epsilon, opts))
}

/// Hybrid quantum perceptron: each hyperplane in turn gets up to `K2`
/// searches for a misclassified point and is accepted when none is found.
/// A hyperplane is dropped at its first verified mistake. Falls back to the
/// first hyperplane.
pub fn hybrid_quantum(
    ds: &LabeledDataset,
    hyperplanes: &[Hyperplane],
    epsilon: f64,
    opts: &QuantumOptions,
    seed: u64,
) -> Result<RunResult> {
    check_epsilon(epsilon)?;
    check_hyperplanes(ds, hyperplanes)?;
    let k2 = amplification_rounds(hyperplanes.len() as u64, epsilon)?;
    let mut rng = rng_for(seed, Algorithm::Hybrid);
    let mut ledger = CostLedger::default();
    let mut chosen = &hyperplanes[0];
    for w in hyperplanes {
        let margins = ds.signed_margins(w);
        let mut rejected = false;
        for _ in 0..k2 {
            if find_mistake(&margins, opts, &mut ledger, &mut rng)?.is_some() {
                rejected = true;
                break;
            }
        }
        if !rejected {
            chosen = w;
            break;
        }
        ledger.updates += 1;
    }
    Ok(result(ds, chosen.clone(), ledger, Algorithm::Hybrid, seed, None, epsilon, opts))
}
