use std::fmt::Write as _;

use super::params::{open_range, positive, Params};
use crate::bounds::Curve;
use crate::error::{Error, Result};
use crate::stats::{log_log_slope, log_space};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVar {
    N,
    InvGamma,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::N => "n",
            SweepVar::InvGamma => "inv_gamma",
        }
    }
}

/// Sweeps of the three complexity bounds. The N sweep holds `gamma` fixed,
/// the 1/gamma sweep holds `n_fixed` fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct Fig1Config {
    pub vars: Vec<SweepVar>,
    pub epsilon: f64,
    pub gamma: f64,
    pub n_from: f64,
    pub n_to: f64,
    pub n_points: usize,
    pub n_fixed: usize,
    pub inv_gamma_from: f64,
    pub inv_gamma_to: f64,
    pub inv_gamma_points: usize,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Fig1Config {
            vars: vec![SweepVar::N, SweepVar::InvGamma],
            epsilon: 0.05,
            gamma: 0.01,
            n_from: 1e2,
            n_to: 1e5,
            n_points: 16,
            n_fixed: 1000,
            inv_gamma_from: 1e1,
            inv_gamma_to: 1e3,
            inv_gamma_points: 16,
        }
    }
}

impl Fig1Config {
    pub fn from_params(p: &Params) -> Result<Self> {
        let d = Self::default();
        let vars = match p.string("var", "both").as_str() {
            "both" => d.vars.clone(),
            "n" => vec![SweepVar::N],
            "inv_gamma" | "inv-gamma" | "gamma" => vec![SweepVar::InvGamma],
            other => return Err(Error::invalid(format!("var must be n, inv_gamma or both, got '{other}'"))),
        };
        let cfg = Fig1Config {
            vars,
            epsilon: open_range("epsilon", p.f64("epsilon", d.epsilon)?, 0.0, 1.0)?,
            gamma: open_range("gamma", p.f64("gamma", d.gamma)?, 0.0, 1.0)?,
            n_from: p.f64("n_from", d.n_from)?,
            n_to: p.f64("n_to", d.n_to)?,
            n_points: p.usize("n_points", d.n_points)?,
            n_fixed: positive("n_fixed", p.usize("n_fixed", d.n_fixed)?)?,
            inv_gamma_from: p.f64("inv_gamma_from", d.inv_gamma_from)?,
            inv_gamma_to: p.f64("inv_gamma_to", d.inv_gamma_to)?,
            inv_gamma_points: p.usize("inv_gamma_points", d.inv_gamma_points)?,
        };
        p.reject_unknown()?;
        Ok(cfg)
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        let vars: Vec<&str> = self.vars.iter().map(|v| v.as_str()).collect();
        vec![
            ("var".into(), vars.join("+")),
            ("epsilon".into(), self.epsilon.to_string()),
            ("gamma".into(), self.gamma.to_string()),
            ("n_from".into(), self.n_from.to_string()),
            ("n_to".into(), self.n_to.to_string()),
            ("n_points".into(), self.n_points.to_string()),
            ("n_fixed".into(), self.n_fixed.to_string()),
            ("inv_gamma_from".into(), self.inv_gamma_from.to_string()),
            ("inv_gamma_to".into(), self.inv_gamma_to.to_string()),
            ("inv_gamma_points".into(), self.inv_gamma_points.to_string()),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig1Row {
    pub curve: Curve,
    pub x_var: SweepVar,
    pub x: f64,
    pub value: u64,
    /// `value` divided by the curve's failure-amplification factor.
    pub adjusted: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeRow {
    pub curve: Curve,
    pub x_var: SweepVar,
    pub slope: f64,
    /// Slope of the amplification-adjusted values.
    pub adjusted_slope: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig1Report {
    pub rows: Vec<Fig1Row>,
    pub slopes: Vec<SlopeRow>,
}

impl Fig1Report {
    pub fn slope(&self, curve: Curve, var: SweepVar) -> Option<&SlopeRow> {
        self.slopes.iter().find(|s| s.curve == curve && s.x_var == var)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("curve,x_var,x,value\n");
        for r in &self.rows {
            writeln!(s, "{},{},{},{}", r.curve.as_str(), r.x_var.as_str(), r.x, r.value).unwrap();
        }
        s
    }

    pub fn slopes_csv(&self) -> String {
        let mut s = String::from("curve,x_var,slope,adjusted_slope\n");
        for r in &self.slopes {
            writeln!(s, "{},{},{},{}", r.curve.as_str(), r.x_var.as_str(), r.slope, r.adjusted_slope).unwrap();
        }
        s
    }

    pub fn summary(&self) -> String {
        self.slopes
            .iter()
            .map(|r| format!("{}/{}: {:.3} (adjusted {:.3})", r.curve.as_str(), r.x_var.as_str(), r.slope, r.adjusted_slope))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn sweep_points(from: f64, to: f64, points: usize, integral: bool) -> Result<Vec<f64>> {
    if points == 0 || !(from > 0.0 && to >= from) {
        return Err(Error::invalid("sweep range is empty"));
    }
    let mut xs = log_space(from, to, points);
    if integral {
        xs.iter_mut().for_each(|x| *x = x.round());
        xs.dedup();
    }
    Ok(xs)
}

pub fn run_fig1(cfg: &Fig1Config) -> Result<Fig1Report> {
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for &var in &cfg.vars {
        let xs = match var {
            SweepVar::N => sweep_points(cfg.n_from, cfg.n_to, cfg.n_points, true)?,
            SweepVar::InvGamma => sweep_points(cfg.inv_gamma_from, cfg.inv_gamma_to, cfg.inv_gamma_points, false)?,
        };
        if var == SweepVar::InvGamma && xs[0] <= 1.0 {
            return Err(Error::invalid("1/gamma sweep must start above 1"));
        }
        for curve in Curve::ALL {
            let mut raw = Vec::new();
            let mut adjusted = Vec::new();
            for &x in &xs {
                let (n, gamma) = match var {
                    SweepVar::N => (x as usize, cfg.gamma),
                    SweepVar::InvGamma => (cfg.n_fixed, 1.0 / x),
                };
                let value = curve.bound(n, gamma, cfg.epsilon)?;
                let adj = value as f64 / curve.amplification(gamma, cfg.epsilon)? as f64;
                raw.push((x, value as f64));
                adjusted.push((x, adj));
                rows.push(Fig1Row { curve, x_var: var, x, value, adjusted: adj });
            }
            if let (Some(slope), Some(adjusted_slope)) = (log_log_slope(&raw), log_log_slope(&adjusted)) {
                slopes.push(SlopeRow { curve, x_var: var, slope, adjusted_slope });
            }
        }
    }
    Ok(Fig1Report { rows, slopes })
}
