//! Labeled samples: construction, ingestion, normalisation and splitting.

mod io;
mod margin;
mod planted;

use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hyperplane::{dot, Hyperplane};
use crate::rng;

pub use io::{load_dataset_csv, load_two_class_csv, write_dataset_csv};
pub use margin::{
    hard_dataset_margin, margin, margin_sweep_2d, margin_with_passes, MarginMethod, MarginReport,
};
pub use planted::make_planted_margin_dataset;

/// Binary class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Pos,
    Neg,
}

impl Label {
    pub fn from_sign(v: f64) -> Self {
        if v < 0.0 {
            Label::Neg
        } else {
            Label::Pos
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Label::Pos => 1.0,
            Label::Neg => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Pos => 1,
            Label::Neg => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPoint {
    pub x: Vec<f64>,
    pub y: Label,
}

impl LabeledPoint {
    pub fn new(x: Vec<f64>, y: Label) -> Self {
        LabeledPoint { x, y }
    }

    /// `y * <w, x>`; the point is a mistake for `w` when this is `<= 0`.
    pub fn signed_margin(&self, w: &Hyperplane) -> f64 {
        self.y.value() * w.dot(&self.x)
    }

    pub fn is_mistake(&self, w: &Hyperplane) -> bool {
        self.signed_margin(w) <= 0.0
    }

    pub fn norm(&self) -> f64 {
        dot(&self.x, &self.x).sqrt()
    }

    /// `y * x`
    pub(crate) fn signed(&self) -> Vec<f64> {
        let s = self.y.value();
        self.x.iter().map(|v| s * v).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    name: String,
    dim: usize,
    points: Vec<LabeledPoint>,
}

impl LabeledDataset {
    pub fn new(name: impl Into<String>, dim: usize, points: Vec<LabeledPoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dataset dimension must be positive"));
        }
        if let Some(p) = points.iter().find(|p| p.x.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.x.len(),
            });
        }
        if points.iter().flat_map(|p| &p.x).any(|v| !v.is_finite()) {
            return Err(Error::invalid("dataset features must be finite"));
        }
        Ok(LabeledDataset {
            name: name.into(),
            dim,
            points,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn count_label(&self, y: Label) -> usize {
        self.points.iter().filter(|p| p.y == y).count()
    }

    /// Points in the given index order.
    pub fn select(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            name: self.name.clone(),
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// The sample with point `i` removed.
    pub fn without(&self, i: usize) -> LabeledDataset {
        let mut points = self.points.clone();
        points.remove(i);
        LabeledDataset {
            name: self.name.clone(),
            dim: self.dim,
            points,
        }
    }

    /// The first `count` points in index order.
    pub fn prefix(&self, count: usize) -> LabeledDataset {
        let idx: Vec<usize> = (0..count.min(self.len())).collect();
        self.select(&idx)
    }

    /// Signed margins `y_i <w, x_i>` for every point.
    pub fn signed_margins(&self, w: &Hyperplane) -> Vec<f64> {
        self.points.iter().map(|p| p.signed_margin(w)).collect()
    }

    pub fn check_dim(&self, w: &Hyperplane) -> Result<()> {
        if w.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: w.dim(),
            });
        }
        Ok(())
    }
}

/// Number of training points for a split fraction: `ceil(fraction * n)`,
/// at least one.
pub fn split_size(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n.max(1))
}

/// Seeded uniform shuffle followed by a prefix split into (train, rest).
pub fn shuffle_split(
    ds: &LabeledDataset,
    fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid("train fraction must be in (0,1]"));
    }
    let mut idx: Vec<usize> = (0..ds.len()).collect();
    idx.shuffle(&mut rng::seeded(seed));
    let k = split_size(ds.len(), fraction);
    Ok((ds.select(&idx[..k]), ds.select(&idx[k..])))
}

/// The first `ceil(fraction * n)` points in index order.
pub fn prefix_fraction(ds: &LabeledDataset, fraction: f64) -> Result<LabeledDataset> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid("train fraction must be in (0,1]"));
    }
    Ok(ds.prefix(split_size(ds.len(), fraction)))
}

/// The Hard sample: `x_i = (-1)^(i+1) e_i`, `y_i = (-1)^i` for `i = 1..n`.
pub fn make_hard_dataset(n: usize) -> Result<LabeledDataset> {
    if n == 0 {
        return Err(Error::invalid("hard dataset size must be at least 1"));
    }
    let points = (1..=n)
        .map(|i| {
            let odd = i % 2 == 1;
            let mut x = vec![0.0; n];
            x[i - 1] = if odd { 1.0 } else { -1.0 };
            LabeledPoint::new(x, if odd { Label::Neg } else { Label::Pos })
        })
        .collect();
    LabeledDataset::new(format!("hard{n}"), n, points)
}

/// Scale every point by the inverse of the largest point norm.
pub fn normalize(ds: &LabeledDataset) -> Result<LabeledDataset> {
    if ds.is_empty() {
        return Err(Error::invalid("cannot normalize an empty dataset"));
    }
    let max_norm = ds.points.iter().map(LabeledPoint::norm).fold(0.0, f64::max);
    if max_norm == 0.0 {
        return Err(Error::invalid("cannot normalize an all-zero dataset"));
    }
    let points = ds
        .points
        .iter()
        .map(|p| LabeledPoint::new(p.x.iter().map(|v| v / max_norm).collect(), p.y))
        .collect();
    LabeledDataset::new(ds.name.clone(), ds.dim, points)
}

/// `k` independent standard Gaussian vectors in `R^d`.
pub fn sample_hyperplanes(k: usize, d: usize, seed: u64) -> Result<Vec<Hyperplane>> {
    if k == 0 || d == 0 {
        return Err(Error::invalid("need k >= 1 hyperplanes of dimension d >= 1"));
    }
    let mut rng = rng::seeded(seed);
    (0..k)
        .map(|_| Hyperplane::new((0..d).map(|_| StandardNormal.sample(&mut rng)).collect()))
        .collect()
}
