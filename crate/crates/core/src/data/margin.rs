//! Hard-margin computation.
//!
//! For a sample separable through the origin, the margin
//! `max_{|w|=1} min_i y_i <w, x_i>` equals the distance from the origin to
//! the convex hull of the signed points `z_i = y_i x_i`, and the nearest
//! hull point is a maximising direction. The optimizer below finds that
//! point with Wolfe's minimum-norm-point algorithm, which terminates after
//! finitely many corral updates and gives certified bounds: the witness
//! margin is a lower bound and the nearest-point norm an upper bound.

use std::f64::consts::PI;

use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::hyperplane::{dot, Hyperplane};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginMethod {
    Analytic,
    Optimizer,
    Exhaustive2d,
}

impl MarginMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MarginMethod::Analytic => "analytic",
            MarginMethod::Optimizer => "optimizer",
            MarginMethod::Exhaustive2d => "exhaustive-2d",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarginReport {
    /// Zero when the sample is not strictly separable through the origin.
    pub gamma: f64,
    pub witness: Option<Hyperplane>,
    pub method: MarginMethod,
}

impl MarginReport {
    fn non_separable(method: MarginMethod) -> Self {
        MarginReport {
            gamma: 0.0,
            witness: None,
            method,
        }
    }

    fn from_direction(ds: &LabeledDataset, w: Vec<f64>, method: MarginMethod) -> Self {
        let norm = dot(&w, &w).sqrt();
        if !(norm > 0.0) {
            return Self::non_separable(method);
        }
        let w = Hyperplane::new(w.into_iter().map(|v| v / norm).collect())
            .expect("finite direction");
        let gamma = ds
            .points()
            .iter()
            .map(|p| p.signed_margin(&w))
            .fold(f64::INFINITY, f64::min);
        if gamma > 0.0 {
            MarginReport {
                gamma,
                witness: Some(w),
                method,
            }
        } else {
            Self::non_separable(method)
        }
    }
}

/// Closed form for the Hard sample of size `n`: `1/sqrt(n)` attained by
/// `w = -(1,...,1)/sqrt(n)`.
pub fn hard_dataset_margin(n: usize) -> Result<MarginReport> {
    if n == 0 {
        return Err(Error::invalid("hard dataset size must be at least 1"));
    }
    let s = 1.0 / (n as f64).sqrt();
    Ok(MarginReport {
        gamma: s,
        witness: Some(Hyperplane::new(vec![-s; n])?),
        method: MarginMethod::Analytic,
    })
}

/// Lower-triangular Cholesky factor of `1 1^T + G_S` for the corral `S`,
/// grown one column at a time.
struct Corral<'a> {
    z: &'a [Vec<f64>],
    members: Vec<usize>,
    chol: Vec<Vec<f64>>,
}

impl<'a> Corral<'a> {
    fn new(z: &'a [Vec<f64>]) -> Self {
        Corral {
            z,
            members: Vec::new(),
            chol: Vec::new(),
        }
    }

    fn lifted_dot(&self, a: usize, b: usize) -> f64 {
        1.0 + dot(&self.z[a], &self.z[b])
    }

    /// Appends `j`; returns false if `j` is affinely dependent on the corral.
    fn push(&mut self, j: usize) -> bool {
        let k = self.members.len();
        let mut row = vec![0.0; k + 1];
        for i in 0..k {
            let mut s = self.lifted_dot(self.members[i], j);
            for t in 0..i {
                s -= self.chol[i][t] * row[t];
            }
            row[i] = s / self.chol[i][i];
        }
        let diag_sq = self.lifted_dot(j, j) - row[..k].iter().map(|v| v * v).sum::<f64>();
        if diag_sq <= 1e-13 * self.lifted_dot(j, j) {
            return false;
        }
        row[k] = diag_sq.sqrt();
        self.members.push(j);
        self.chol.push(row);
        true
    }

    fn rebuild(&mut self, members: Vec<usize>) {
        self.members.clear();
        self.chol.clear();
        for j in members {
            // A subset of an affinely independent set stays independent.
            let ok = self.push(j);
            debug_assert!(ok);
        }
    }

    /// Barycentric weights of the minimum-norm point of the affine hull.
    fn affine_min_norm(&self) -> Vec<f64> {
        let k = self.members.len();
        let mut u = vec![1.0; k];
        for i in 0..k {
            let s: f64 = (0..i).map(|t| self.chol[i][t] * u[t]).sum();
            u[i] = (u[i] - s) / self.chol[i][i];
        }
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|t| self.chol[t][i] * u[t]).sum();
            u[i] = (u[i] - s) / self.chol[i][i];
        }
        let total: f64 = u.iter().sum();
        u.iter().map(|v| v / total).collect()
    }

    fn point(&self, weights: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.z[0].len()];
        for (&j, &l) in self.members.iter().zip(weights) {
            for (xi, zi) in x.iter_mut().zip(&self.z[j]) {
                *xi += l * zi;
            }
        }
        x
    }
}

/// Nearest point to the origin in the convex hull of `z`, with the number of
/// full scans over `z` spent finding it.
fn min_norm_point(z: &[Vec<f64>]) -> (Vec<f64>, u64) {
    let max_sq = z.iter().map(|v| dot(v, v)).fold(0.0, f64::max);
    let start = (0..z.len())
        .min_by(|&a, &b| dot(&z[a], &z[a]).total_cmp(&dot(&z[b], &z[b])))
        .expect("non-empty");
    let mut corral = Corral::new(z);
    corral.push(start);
    let mut weights = vec![1.0];
    let mut x = z[start].clone();
    let max_major = 50 * (z.len() + z[0].len()) + 1000;
    let mut scans = 0;

    for _ in 0..max_major {
        let xx = dot(&x, &x);
        if xx <= 1e-24 * max_sq {
            break;
        }
        scans += 1;
        let (j, best) = z
            .iter()
            .enumerate()
            .map(|(j, v)| (j, dot(&x, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        let slack = 1e-12 * xx + 8.0 * f64::EPSILON * xx.sqrt() * max_sq.sqrt();
        if xx - best <= slack || corral.members.contains(&j) || !corral.push(j) {
            break;
        }
        weights.push(0.0);

        loop {
            let target = corral.affine_min_norm();
            if target.iter().all(|&v| v > 1e-15) {
                weights = target;
                break;
            }
            // Step from the current weights toward the affine minimiser until
            // the first weight hits zero, then drop the vanished members.
            let step = weights
                .iter()
                .zip(&target)
                .filter(|(_, &t)| t <= 1e-15)
                .map(|(&w, &t)| w / (w - t))
                .fold(1.0, f64::min);
            let moved: Vec<f64> = weights
                .iter()
                .zip(&target)
                .map(|(&w, &t)| w + step * (t - w))
                .collect();
            let min_pos = moved
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("non-empty");
            let (members, kept): (Vec<usize>, Vec<f64>) = corral
                .members
                .iter()
                .zip(&moved)
                .enumerate()
                .filter(|&(i, (_, &w))| i != min_pos && w > 1e-15)
                .map(|(_, (&m, &w))| (m, w))
                .unzip();
            let total: f64 = kept.iter().sum();
            weights = kept.iter().map(|w| w / total).collect();
            corral.rebuild(members);
        }
        x = corral.point(&weights);
    }
    (x, scans)
}

/// Hard margin of `ds` through the origin. Non-separable samples (including
/// samples whose hull touches the origin) report `gamma = 0` and no witness.
pub fn margin(ds: &LabeledDataset) -> MarginReport {
    margin_with_passes(ds).0
}

/// [`margin`] together with the number of passes over the data it made,
/// counting the final certification pass.
pub fn margin_with_passes(ds: &LabeledDataset) -> (MarginReport, u64) {
    if ds.is_empty() {
        return (MarginReport::non_separable(MarginMethod::Optimizer), 0);
    }
    let z: Vec<Vec<f64>> = ds.points().iter().map(|p| p.signed()).collect();
    let (x, scans) = min_norm_point(&z);
    (MarginReport::from_direction(ds, x, MarginMethod::Optimizer), scans + 1)
}

/// Exhaustive angular sweep for two-dimensional samples: a grid with
/// `1e-5` rad resolution followed by ternary refinement of the best cell.
/// Independent of [`margin`], used to cross-check it.
pub fn margin_sweep_2d(ds: &LabeledDataset) -> Result<MarginReport> {
    if ds.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: ds.dim(),
        });
    }
    let z: Vec<[f64; 2]> = ds
        .points()
        .iter()
        .map(|p| {
            let s = p.signed();
            [s[0], s[1]]
        })
        .collect();
    let objective = |phi: f64| {
        let (s, c) = phi.sin_cos();
        z.iter().map(|v| c * v[0] + s * v[1]).fold(f64::INFINITY, f64::min)
    };
    let step = 1e-5;
    let cells = (2.0 * PI / step).ceil() as usize;
    let (best_phi, _) = (0..cells)
        .map(|i| {
            let phi = i as f64 * step;
            (phi, objective(phi))
        })
        .fold((0.0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    // Where positive, the objective is a minimum of concave arcs.
    let (mut lo, mut hi) = (best_phi - step, best_phi + step);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if objective(m1) < objective(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let phi = 0.5 * (lo + hi);
    let (s, c) = phi.sin_cos();
    Ok(MarginReport::from_direction(ds, vec![c, s], MarginMethod::Exhaustive2d))
}
