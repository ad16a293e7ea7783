use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Label, LabeledDataset, LabeledPoint};
use crate::error::{Error, Result};
use crate::hyperplane::dot;
use crate::rng;

fn unit_gaussian<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = dot(&v, &v).sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Unit vector along the component of `v` orthogonal to the unit vector `u`,
/// or `None` when that component vanishes.
fn orthogonal_part(v: &[f64], u: &[f64]) -> Option<Vec<f64>> {
    let c = dot(v, u);
    let r: Vec<f64> = v.iter().zip(u).map(|(a, b)| a - c * b).collect();
    let n = dot(&r, &r).sqrt();
    (n > 1e-9).then(|| r.into_iter().map(|x| x / n).collect())
}

/// Sample of `n` unit-ball points in `R^d` separable through the origin with
/// margin exactly `gamma`.
///
/// A hidden unit direction `u` is drawn first; every point is sampled on the
/// sphere and its component along `u` reflected about `gamma` when it is too
/// small. The closest point of each class is then reshaped so that the two
/// signed points straddle `gamma u`, pinning the optimum of the margin
/// problem to `u`. Points 0 and 1 are forced to opposite labels.
pub fn make_planted_margin_dataset(
    n: usize,
    d: usize,
    gamma: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if n < 2 {
        return Err(Error::invalid("planted dataset needs at least 2 points"));
    }
    if d < 2 {
        return Err(Error::invalid("planted dataset needs dimension at least 2"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid("gamma must be in (0,1)"));
    }
    let mut rng = rng::substream(seed, "planted", 0);
    let u = unit_gaussian(d, &mut rng);

    let mut points = Vec::with_capacity(n);
    // (signed alignment with u, unit residual direction) per point
    let mut shape = Vec::with_capacity(n);
    for i in 0..n {
        let x = unit_gaussian(d, &mut rng);
        let c = dot(&x, &u);
        let y = match i {
            0 => Label::Pos,
            1 => Label::Neg,
            _ => Label::from_sign(c),
        };
        let residual = match orthogonal_part(&x, &u) {
            Some(r) => r,
            None => loop {
                if let Some(r) = orthogonal_part(&unit_gaussian(d, &mut rng), &u) {
                    break r;
                }
            },
        };
        let a = c.abs();
        let along = if a < gamma { (2.0 * gamma - a).min(1.0) } else { a };
        let across = (1.0 - along * along).max(0.0).sqrt();
        let s = y.value();
        let x: Vec<f64> = u
            .iter()
            .zip(&residual)
            .map(|(ui, ri)| s * along * ui + across * ri)
            .collect();
        points.push(LabeledPoint::new(x, y));
        shape.push((along, residual));
    }

    let closest = |label: Label| {
        (0..n)
            .filter(|&i| points[i].y == label)
            .min_by(|&a, &b| shape[a].0.total_cmp(&shape[b].0))
            .expect("both labels present")
    };
    let pos = closest(Label::Pos);
    let neg = closest(Label::Neg);
    let (c_pos, ref e) = shape[pos];
    let scale = gamma / c_pos;
    let offset = scale * (1.0 - c_pos * c_pos).max(0.0).sqrt();
    points[pos].x = u.iter().zip(e).map(|(ui, ei)| gamma * ui + offset * ei).collect();
    points[neg].x = u.iter().zip(e).map(|(ui, ei)| -gamma * ui + offset * ei).collect();

    LabeledDataset::new(format!("planted-n{n}-d{d}-g{gamma}-s{seed}"), d, points)
}

#[cfg(test)]
mod tests {
    use super::super::margin;
    use super::*;

    #[test]
    fn realised_margin_matches_request() {
        let ds = make_planted_margin_dataset(100, 5, 0.1, 7).unwrap();
        assert!((margin(&ds).gamma - 0.1).abs() < 1e-6);
        assert!(ds.points().iter().all(|p| p.norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn random_tuples_hit_requested_margin() {
        let mut rng = rng::seeded(99);
        for _ in 0..50 {
            let n = rng.random_range(2..=120);
            let d = rng.random_range(2..=8);
            let gamma = rng.random_range(0.02..0.6);
            let seed = rng.random();
            let ds = make_planted_margin_dataset(n, d, gamma, seed).unwrap();
            let got = margin(&ds).gamma;
            assert!((got - gamma).abs() < 1e-6, "n={n} d={d} gamma={gamma}: {got}");
        }
    }

    #[test]
    fn both_labels_present() {
        let ds = make_planted_margin_dataset(2, 2, 0.5, 1).unwrap();
        assert_eq!(ds.count_label(Label::Pos), 1);
        assert_eq!(ds.count_label(Label::Neg), 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = make_planted_margin_dataset(30, 3, 0.2, 5).unwrap();
        let b = make_planted_margin_dataset(30, 3, 0.2, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, make_planted_margin_dataset(30, 3, 0.2, 6).unwrap());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(make_planted_margin_dataset(1, 2, 0.1, 0).is_err());
        assert!(make_planted_margin_dataset(5, 1, 0.1, 0).is_err());
        assert!(make_planted_margin_dataset(5, 2, 1.0, 0).is_err());
        assert!(make_planted_margin_dataset(5, 2, 0.0, 0).is_err());
    }
}
