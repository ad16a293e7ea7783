use num_complex::Complex64;
use rand::Rng;

use super::{GroverInstance, NoiseKind, NoiseModel};
use crate::error::{Error, Result};

pub const MAX_QUBITS: u32 = 20;

/// Amplitudes over the computational basis of `q` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<Complex64>,
    qubits: u32,
}

impl Statevector {
    /// The uniform superposition over `n = 2^q` basis states.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::invalid(format!(
                "statevector size {n} must be a power of two, at least 2"
            )));
        }
        let qubits = n.trailing_zeros();
        if qubits > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "statevector limited to {MAX_QUBITS} qubits, got {qubits}"
            )));
        }
        let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(Statevector {
            amplitudes: vec![a; n],
            qubits,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `R`: sign flip on marked basis states.
    pub fn apply_oracle(&mut self, marked: &[bool]) {
        for (a, &m) in self.amplitudes.iter_mut().zip(marked) {
            if m {
                *a = -*a;
            }
        }
    }

    /// `G = 2|psi0><psi0| - 1`: inversion about the mean.
    pub fn apply_diffusion(&mut self) {
        let mean = self.amplitudes.iter().sum::<Complex64>() / self.amplitudes.len() as f64;
        for a in &mut self.amplitudes {
            *a = 2.0 * mean - *a;
        }
    }

    /// Flips qubit `k` on every basis index.
    pub fn apply_bit_flip(&mut self, k: u32) {
        let bit = 1usize << k;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                self.amplitudes.swap(i, i | bit);
            }
        }
    }

    /// Replaces the state by the basis state `i`.
    pub fn collapse_to(&mut self, i: usize) {
        self.amplitudes.fill(Complex64::new(0.0, 0.0));
        self.amplitudes[i] = Complex64::new(1.0, 0.0);
    }

    /// One stochastic trajectory step of the noise channel.
    pub fn apply_noise<R: Rng + ?Sized>(&mut self, noise: &NoiseModel, rng: &mut R) {
        match noise.kind() {
            NoiseKind::None => {}
            NoiseKind::BitFlip => {
                for k in 0..self.qubits {
                    if rng.random::<f64>() < noise.p() {
                        self.apply_bit_flip(k);
                    }
                }
            }
            NoiseKind::Depolarizing => {
                if rng.random::<f64>() < noise.p() {
                    let i = rng.random_range(0..self.amplitudes.len());
                    self.collapse_to(i);
                }
            }
        }
    }

    pub fn marked_probability(&self, marked: &[bool]) -> f64 {
        self.amplitudes
            .iter()
            .zip(marked)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    }

    /// Samples a basis index from `|alpha_i|^2`.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut u = rng.random::<f64>() * self.norm_sqr();
        for (i, a) in self.amplitudes.iter().enumerate() {
            u -= a.norm_sqr();
            if u < 0.0 {
                return i;
            }
        }
        self.amplitudes
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .unwrap_or(0)
    }

    /// State after `j` noisy iterations of `G R` from the uniform state.
    pub fn evolve<R: Rng + ?Sized>(
        inst: &GroverInstance,
        j: u64,
        noise: &NoiseModel,
        rng: &mut R,
    ) -> Result<Self> {
        let mut sv = Self::uniform(inst.n_items())?;
        for _ in 0..j {
            sv.apply_oracle(inst.mask());
            sv.apply_diffusion();
            sv.apply_noise(noise, rng);
        }
        Ok(sv)
    }
}

/// Measured index after `j` iterations on a full amplitude vector.
pub fn statevector_grover_sample<R: Rng + ?Sized>(
    inst: &GroverInstance,
    j: u64,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<usize> {
    let sv = Statevector::evolve(inst, j, noise, rng)?;
    Ok(sv.measure(rng))
}
