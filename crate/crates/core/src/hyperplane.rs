use crate::error::{Error, Result};

/// A candidate separator `w`; a point `x` is classified as `sign(<w, x>)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane(Vec<f64>);

impl Hyperplane {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::invalid("hyperplane must have positive dimension"));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("hyperplane entries must be finite"));
        }
        Ok(Hyperplane(w))
    }

    pub fn zeros(dim: usize) -> Self {
        Hyperplane(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        dot(&self.0, x)
    }

    pub fn norm(&self) -> f64 {
        dot(&self.0, &self.0).sqrt()
    }

    /// `w <- w + scale * x`
    pub fn add_scaled(&mut self, x: &[f64], scale: f64) {
        for (w, v) in self.0.iter_mut().zip(x) {
            *w += scale * v;
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
