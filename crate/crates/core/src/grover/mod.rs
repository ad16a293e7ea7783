//! Grover amplitude amplification and the randomized-schedule search.
//!
//! Two backends are provided. [`Backend::Analytic`] samples from the
//! two-dimensional rotation picture and accepts any `N`;
//! [`Backend::Statevector`] applies the oracle and diffusion operators to a
//! full amplitude vector and requires `N = 2^q`. Indices are 0-based.

mod curve;
mod statevector;

use std::f64::consts::FRAC_PI_2;

use rand::Rng;

use crate::bounds::ceil_tol;
use crate::error::{Error, Result};

pub use curve::{p_of_m_curve, Curve, CurvePoint, CURVE_CSV_HEADER};
pub use statevector::{statevector_grover_sample, Statevector, MAX_QUBITS};

/// `asin(sqrt(a))` for a marked fraction `a`.
pub fn theta_from_fraction(a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::invalid(format!("marked fraction {a} must be in [0,1]")));
    }
    Ok(a.sqrt().asin())
}

/// Probability of measuring a marked item after `j` Grover iterations.
pub fn success_probability(theta: f64, j: u64) -> f64 {
    ((2 * j + 1) as f64 * theta).sin().powi(2)
}

/// `M = ceil(1 / sin(2 asin(sqrt(1/N))))`, the size of QSearch's draw range.
pub fn schedule_bound(n_items: usize) -> Result<usize> {
    if n_items < 2 {
        return Err(Error::invalid("schedule bound needs at least 2 items"));
    }
    let theta = (1.0 / n_items as f64).sqrt().asin();
    Ok(ceil_tol(1.0 / (2.0 * theta).sin()) as usize)
}

/// Success probability with the iteration count uniform on `{0..M-1}`:
/// `(1 - sin(4 M theta) / (2 M sin(2 theta))) / 2`.
pub fn avg_success_probability(theta: f64, m_range: usize) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::invalid("theta must be in (0, pi/2)"));
    }
    if m_range == 0 {
        return Err(Error::invalid("draw range must be at least 1"));
    }
    let m = m_range as f64;
    Ok(0.5 * (1.0 - (4.0 * m * theta).sin() / (2.0 * m * (2.0 * theta).sin())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    None,
    BitFlip,
    Depolarizing,
}

impl NoiseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::None => "none",
            NoiseKind::BitFlip => "bit_flip",
            NoiseKind::Depolarizing => "depolarizing",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NoiseKind::None),
            "bit_flip" | "bit-flip" | "bitflip" => Ok(NoiseKind::BitFlip),
            "depolarizing" | "depolarization" => Ok(NoiseKind::Depolarizing),
            _ => Err(Error::invalid(format!("unknown noise kind '{s}'"))),
        }
    }
}

/// Error channel applied once after every Grover iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    kind: NoiseKind,
    p: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if kind == NoiseKind::None {
            return Ok(Self::none());
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid("noise probability must be in [0,1]"));
        }
        Ok(NoiseModel { kind, p })
    }

    pub fn none() -> Self {
        NoiseModel {
            kind: NoiseKind::None,
            p: 0.0,
        }
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_noiseless(&self) -> bool {
        self.kind == NoiseKind::None || self.p == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Analytic,
    Statevector,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Analytic => "analytic",
            Backend::Statevector => "statevector",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Backend::Analytic),
            "statevector" => Ok(Backend::Statevector),
            _ => Err(Error::invalid(format!("unknown backend '{s}'"))),
        }
    }
}

/// A search space `{0..N-1}` with its marked set.
#[derive(Clone, Debug, PartialEq)]
pub struct GroverInstance {
    mask: Vec<bool>,
    marked: Vec<usize>,
}

impl GroverInstance {
    pub fn from_predicate(n_items: usize, mut pred: impl FnMut(usize) -> bool) -> Result<Self> {
        if n_items == 0 {
            return Err(Error::invalid("search space must be non-empty"));
        }
        let mask: Vec<bool> = (0..n_items).map(&mut pred).collect();
        let marked = (0..n_items).filter(|&i| mask[i]).collect();
        Ok(GroverInstance { mask, marked })
    }

    pub fn from_marked(n_items: usize, marked: &[usize]) -> Result<Self> {
        if let Some(&i) = marked.iter().find(|&&i| i >= n_items) {
            return Err(Error::invalid(format!("marked index {i} out of range")));
        }
        Self::from_predicate(n_items, |i| marked.contains(&i))
    }

    pub fn n_items(&self) -> usize {
        self.mask.len()
    }

    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn marked_fraction(&self) -> f64 {
        self.marked.len() as f64 / self.mask.len() as f64
    }

    pub fn theta(&self) -> f64 {
        self.marked_fraction().sqrt().asin()
    }

    /// The same marked set in a space padded with never-marked items up to
    /// the next power of two.
    pub fn padded_to_power_of_two(&self) -> Self {
        let n = self.n_items().next_power_of_two();
        let mut mask = self.mask.clone();
        mask.resize(n, false);
        GroverInstance {
            mask,
            marked: self.marked.clone(),
        }
    }

    pub(crate) fn mask(&self) -> &[bool] {
        &self.mask
    }

    fn uniform_marked<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.marked[rng.random_range(0..self.marked.len())]
    }

    fn uniform_unmarked<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut idx = rng.random_range(0..self.n_items() - self.marked.len());
        for &m in &self.marked {
            if m <= idx {
                idx += 1;
            } else {
                break;
            }
        }
        idx
    }
}

/// Marked probability after `j` iterations under depolarizing noise of
/// strength `p` in the rotation picture.
pub fn noisy_success_probability(inst: &GroverInstance, j: u64, noise: &NoiseModel) -> Result<f64> {
    let exact = success_probability(inst.theta(), j);
    match noise.kind() {
        NoiseKind::None => Ok(exact),
        NoiseKind::Depolarizing => {
            let keep = (1.0 - noise.p()).powi(j.min(i32::MAX as u64) as i32);
            Ok(keep * exact + (1.0 - keep) * inst.marked_fraction())
        }
        NoiseKind::BitFlip => Err(Error::UnsupportedBackend(
            "bit-flip noise is not expressible in the rotation picture; use the statevector backend"
                .into(),
        )),
    }
}

/// Measured index after `j` iterations in the rotation picture.
pub fn analytic_grover_sample<R: Rng + ?Sized>(
    inst: &GroverInstance,
    j: u64,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<usize> {
    let p = noisy_success_probability(inst, j, noise)?;
    let marked = match inst.marked_count() {
        0 => false,
        c if c == inst.n_items() => true,
        _ => rng.random::<f64>() < p,
    };
    Ok(if marked {
        inst.uniform_marked(rng)
    } else {
        inst.uniform_unmarked(rng)
    })
}

pub fn grover_sample<R: Rng + ?Sized>(
    inst: &GroverInstance,
    j: u64,
    backend: Backend,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<usize> {
    match backend {
        Backend::Analytic => analytic_grover_sample(inst, j, noise, rng),
        Backend::Statevector => statevector_grover_sample(inst, j, noise, rng),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QSearchOutcome {
    pub index: usize,
    pub iterations_used: u64,
    /// Set by the caller after classical verification.
    pub was_marked: Option<bool>,
}

impl QSearchOutcome {
    pub fn verify(&mut self, pred: impl FnOnce(usize) -> bool) -> bool {
        let marked = pred(self.index);
        self.was_marked = Some(marked);
        marked
    }
}

/// QSearch with draw range `m_range`: `m` uniform on `{0..m_range-1}`, then
/// one backend measurement after `m` iterations.
pub fn qsearch_with_range<R: Rng + ?Sized>(
    inst: &GroverInstance,
    m_range: usize,
    backend: Backend,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<QSearchOutcome> {
    let m = rng.random_range(0..m_range.max(1)) as u64;
    Ok(QSearchOutcome {
        index: grover_sample(inst, m, backend, noise, rng)?,
        iterations_used: m,
        was_marked: None,
    })
}

/// One QSearch attempt. A single-item space is checked classically.
pub fn qsearch<R: Rng + ?Sized>(
    inst: &GroverInstance,
    backend: Backend,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<QSearchOutcome> {
    if inst.n_items() == 1 {
        return Ok(QSearchOutcome {
            index: 0,
            iterations_used: 0,
            was_marked: None,
        });
    }
    qsearch_with_range(inst, schedule_bound(inst.n_items())?, backend, noise, rng)
}
