use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use super::{
    avg_success_probability, noisy_success_probability, qsearch_with_range, Backend,
    GroverInstance, NoiseKind, NoiseModel,
};
use crate::error::Result;
use crate::rng;
use crate::stats::binomial_std_error;

pub const CURVE_CSV_HEADER: &str =
    "M,p_estimate,stderr,backend,noise_kind,noise_p,n_items,marked_count,seed";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub m: usize,
    pub p_estimate: f64,
    pub stderr: f64,
    /// Closed form rather than Monte Carlo.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub points: Vec<CurvePoint>,
    pub backend: Backend,
    pub noise: NoiseModel,
    pub n_items: usize,
    pub marked_count: usize,
}

impl Curve {
    pub fn write_csv<W: Write>(&self, seed: u64, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CURVE_CSV_HEADER}")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                p.m,
                p.p_estimate,
                p.stderr,
                self.backend.as_str(),
                self.noise.kind().as_str(),
                self.noise.p(),
                self.n_items,
                self.marked_count,
                seed
            )?;
        }
        Ok(())
    }
}

fn exact_value(inst: &GroverInstance, m: usize, noise: &NoiseModel) -> Result<f64> {
    let a = inst.marked_fraction();
    if noise.kind() == NoiseKind::None && a > 0.0 && a < 1.0 {
        return avg_success_probability(inst.theta(), m);
    }
    let mut total = 0.0;
    for j in 0..m as u64 {
        total += noisy_success_probability(inst, j, noise)?;
    }
    Ok(total / m as f64)
}

/// QSearch success probability with draw range `M` for `M = 1..=m_max`.
///
/// The analytic backend with no noise or depolarizing noise is evaluated in
/// closed form; every other combination is estimated from
/// `trials_per_point` seeded QSearch runs per `M`.
pub fn p_of_m_curve<R: Rng + ?Sized>(
    inst: &GroverInstance,
    backend: Backend,
    noise: &NoiseModel,
    m_max: usize,
    trials_per_point: usize,
    rng: &mut R,
) -> Result<Curve> {
    if trials_per_point == 0 {
        return Err(crate::Error::invalid("trials_per_point must be at least 1"));
    }
    let closed_form = backend == Backend::Analytic && noise.kind() != NoiseKind::BitFlip;
    let master: u64 = rng.random();
    let points = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            if closed_form {
                return Ok(CurvePoint {
                    m,
                    p_estimate: exact_value(inst, m, noise)?,
                    stderr: 0.0,
                    exact: true,
                });
            }
            let mut r = rng::substream(master, "p_of_m", m as u64);
            let mut hits = 0usize;
            for _ in 0..trials_per_point {
                let out = qsearch_with_range(inst, m, backend, noise, &mut r)?;
                hits += usize::from(inst.is_marked(out.index));
            }
            let p = hits as f64 / trials_per_point as f64;
            Ok(CurvePoint {
                m,
                p_estimate: p,
                stderr: binomial_std_error(p, trials_per_point),
                exact: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve {
        points,
        backend,
        noise: *noise,
        n_items: inst.n_items(),
        marked_count: inst.marked_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn noiseless_curve_within_envelope() {
        let inst = GroverInstance::from_marked(64, &[7]).unwrap();
        let curve = p_of_m_curve(&inst, Backend::Analytic, &NoiseModel::none(), 200, 1, &mut seeded(0)).unwrap();
        let s2 = (2.0 * inst.theta()).sin();
        for p in &curve.points {
            assert!(p.exact);
            assert!((p.p_estimate - 0.5).abs() <= 1.0 / (2.0 * p.m as f64 * s2) + 1e-12);
        }
    }

    #[test]
    fn full_depolarizing_collapses_to_base_rate() {
        let inst = GroverInstance::from_marked(64, &[7]).unwrap();
        let noise = NoiseModel::new(NoiseKind::Depolarizing, 1.0).unwrap();
        let curve = p_of_m_curve(&inst, Backend::Analytic, &noise, 50, 1, &mut seeded(0)).unwrap();
        let a = 1.0 / 64.0;
        for p in &curve.points {
            assert!((p.p_estimate - a).abs() < 1e-12, "M={} {}", p.m, p.p_estimate);
        }
    }

    #[test]
    fn monte_carlo_matches_closed_form() {
        let inst = GroverInstance::from_marked(16, &[2]).unwrap();
        let exact = p_of_m_curve(&inst, Backend::Analytic, &NoiseModel::none(), 8, 1, &mut seeded(0)).unwrap();
        let mc = p_of_m_curve(&inst, Backend::Statevector, &NoiseModel::none(), 8, 4000, &mut seeded(1)).unwrap();
        for (e, m) in exact.points.iter().zip(&mc.points) {
            let se = crate::stats::binomial_std_error(e.p_estimate, 4000);
            assert!((e.p_estimate - m.p_estimate).abs() <= 3.0 * se + 1e-12, "M={}", e.m);
        }
    }

    #[test]
    fn csv_layout() {
        let inst = GroverInstance::from_marked(4, &[0]).unwrap();
        let curve = p_of_m_curve(&inst, Backend::Analytic, &NoiseModel::none(), 2, 1, &mut seeded(0)).unwrap();
        let mut buf = Vec::new();
        curve.write_csv(9, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CURVE_CSV_HEADER);
        let cells: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cells[0], "1");
        assert!((cells[1].parse::<f64>().unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(&cells[2..], ["0", "analytic", "none", "0", "4", "1", "9"]);
        assert_eq!(lines.len(), 3);
    }
}
