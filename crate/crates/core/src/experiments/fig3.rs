use std::fmt::Write as _;

use super::params::{positive, Params};
use crate::error::{Error, Result};
use crate::grover::{p_of_m_curve, Backend, CurvePoint, GroverInstance, NoiseKind, NoiseModel};
use crate::rng::substream;

/// QSearch success probability against the draw range `M` for one marked
/// item, with no noise, bit-flip noise and depolarizing noise.
#[derive(Clone, Debug, PartialEq)]
pub struct Fig3Config {
    pub n: usize,
    pub m_max: usize,
    pub trials: usize,
    pub p: f64,
    /// Backend for the depolarizing curve; bit-flip always runs on the
    /// statevector backend and the noise-free curve is exact.
    pub depolarizing_backend: Backend,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Fig3Config {
            n: 64,
            m_max: 32,
            trials: 10_000,
            p: 0.05,
            depolarizing_backend: Backend::Analytic,
        }
    }
}

impl Fig3Config {
    pub fn from_params(p: &Params) -> Result<Self> {
        let d = Self::default();
        let cfg = Fig3Config {
            n: p.usize("n", d.n)?,
            m_max: positive("m_max", p.usize("m_max", d.m_max)?)?,
            trials: positive("trials", p.usize("trials", d.trials)?)?,
            p: p.f64("p", d.p)?,
            depolarizing_backend: Backend::parse(&p.string("depolarizing_backend", d.depolarizing_backend.as_str()))?,
        };
        p.reject_unknown()?;
        if cfg.n < 2 || !cfg.n.is_power_of_two() {
            return Err(Error::invalid("n must be a power of two, at least 2"));
        }
        if !(0.0..=1.0).contains(&cfg.p) {
            return Err(Error::invalid("p must be in [0,1]"));
        }
        Ok(cfg)
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        vec![
            ("n".into(), self.n.to_string()),
            ("marked_count".into(), "1".into()),
            ("m_max".into(), self.m_max.to_string()),
            ("trials".into(), self.trials.to_string()),
            ("p".into(), self.p.to_string()),
            ("depolarizing_backend".into(), self.depolarizing_backend.as_str().into()),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig3Report {
    pub rows: Vec<(NoiseKind, CurvePoint)>,
}

impl Fig3Report {
    pub fn curve(&self, kind: NoiseKind) -> Vec<CurvePoint> {
        self.rows.iter().filter(|(k, _)| *k == kind).map(|(_, p)| *p).collect()
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("noise_kind,M,p_estimate,stderr\n");
        for (kind, p) in &self.rows {
            writeln!(s, "{},{},{},{}", kind.as_str(), p.m, p.p_estimate, p.stderr).unwrap();
        }
        s
    }
}

pub fn run_fig3(cfg: &Fig3Config, seed: u64) -> Result<Fig3Report> {
    let inst = GroverInstance::from_marked(cfg.n, &[0])?;
    let runs = [
        (NoiseKind::None, Backend::Analytic),
        (NoiseKind::BitFlip, Backend::Statevector),
        (NoiseKind::Depolarizing, cfg.depolarizing_backend),
    ];
    let mut rows = Vec::new();
    for (i, (kind, backend)) in runs.into_iter().enumerate() {
        let noise = NoiseModel::new(kind, cfg.p)?;
        let mut rng = substream(seed, "fig3", i as u64);
        let curve = p_of_m_curve(&inst, backend, &noise, cfg.m_max, cfg.trials, &mut rng)?;
        rows.extend(curve.points.into_iter().map(|p| (kind, p)));
    }
    Ok(Fig3Report { rows })
}
