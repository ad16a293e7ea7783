//! Classical simulation of Grover-search perceptron learning.
//!
//! The crate is organised bottom-up:
//!
//! * [`data`] builds, loads and normalises labeled samples and solves the
//!   hard-margin problem exactly.
//! * [`grover`] simulates amplitude amplification with an analytic
//!   rotation backend and a statevector backend, with optional noise.
//! * [`perceptron`] holds the classical perceptron and the three
//!   Grover-based learners, all charging a common [`perceptron::CostLedger`].
//! * [`bounds`] evaluates the closed-form complexity and risk bounds.
//! * [`experiments`] drives the seeded benchmark suites and writes CSV output.

pub mod bounds;
pub mod data;
pub mod error;
pub mod experiments;
pub mod grover;
pub mod hyperplane;
pub mod perceptron;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use hyperplane::Hyperplane;
