//! Closed-form bounds and constants.
//!
//! The complexity calculators are constant-explicit worst cases assembled
//! from the learners' literal loop bounds: outer rounds times repetitions
//! times the largest Grover iteration count one search can draw.

use std::f64::consts::PI;

use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::grover;

/// `ceil(x)`, absorbing rounding noise just above an integer.
pub(crate) fn ceil_tol(x: f64) -> u64 {
    (x - 1e-9 * x.abs().max(1.0)).ceil().max(0.0) as u64
}

/// `log_{3/4}(x)` for `x` in `(0, 1)`.
pub fn log34(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::invalid(format!("log_3/4 argument {x} must be in (0,1)")));
    }
    Ok(x.ln() / 0.75f64.ln())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("gamma must be in (0,1)"))
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon must be in (0,1)"))
    }
}

fn check_inputs(n: usize, gamma: f64, epsilon: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_gamma(gamma)?;
    check_epsilon(epsilon)
}

/// Largest Grover iteration count plus one for a search over `n` items;
/// a one-item search costs a single classical check.
pub fn search_width(n: usize) -> u64 {
    if n < 2 {
        1
    } else {
        grover::schedule_bound(n).expect("n >= 2") as u64
    }
}

/// `ceil(1/gamma^2)`.
pub fn novikoff_bound(gamma: f64) -> Result<u64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid("gamma must be in (0,1]"));
    }
    Ok(ceil_tol(1.0 / (gamma * gamma)))
}

/// `K = ceil(ln(eps/2) / ln(1 - sqrt(2/pi) gamma))` Gaussian hyperplanes.
/// The formula only needs `eps/2 < 1`, so `eps` may range over `(0,2)`.
pub fn num_hyperplanes(gamma: f64, epsilon: f64) -> Result<u64> {
    check_gamma(gamma)?;
    if !(epsilon > 0.0 && epsilon < 2.0) {
        return Err(Error::invalid("epsilon must be in (0,2) for the hyperplane count"));
    }
    let q = 1.0 - (2.0 / PI).sqrt() * gamma;
    if q <= 0.0 {
        return Err(Error::invalid("gamma too large for the hyperplane count"));
    }
    Ok(ceil_tol((epsilon / 2.0).ln() / q.ln()).max(1))
}

/// `K2 = ceil(log_{3/4}(1 - (1 - eps/2)^(1/(K-1))))`, and
/// `ceil(log_{3/4}(eps/2))` when `K = 1`.
pub fn amplification_rounds(k: u64, epsilon: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    let arg = match k {
        0 => return Err(Error::invalid("K must be at least 1")),
        1 => epsilon / 2.0,
        _ => -((1.0 - epsilon / 2.0).ln() / (k - 1) as f64).exp_m1(),
    };
    Ok(ceil_tol(log34(arg)?).max(1))
}

/// QSearch attempts per round of the online learner:
/// `ceil(log_{3/4}(gamma^2 eps))`.
pub fn online_attempts(gamma: f64, epsilon: f64) -> Result<u64> {
    check_gamma(gamma)?;
    check_epsilon(epsilon)?;
    Ok(ceil_tol(log34(gamma * gamma * epsilon)?).max(1))
}

/// QSearch attempts of the version-space learner: `ceil(log_{3/4}(eps))`.
pub fn version_space_attempts(epsilon: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    Ok(ceil_tol(log34(epsilon)?).max(1))
}

pub fn online_q_bound(n: usize, gamma: f64, epsilon: f64) -> Result<u64> {
    check_inputs(n, gamma, epsilon)?;
    Ok(novikoff_bound(gamma)? * online_attempts(gamma, epsilon)? * search_width(n))
}

pub fn version_space_bound(n: usize, gamma: f64, epsilon: f64) -> Result<u64> {
    check_inputs(n, gamma, epsilon)?;
    let k = num_hyperplanes(gamma, epsilon)? as usize;
    Ok(version_space_attempts(epsilon)? * search_width(k) * n as u64)
}

pub fn hybrid_bound(n: usize, gamma: f64, epsilon: f64) -> Result<u64> {
    check_inputs(n, gamma, epsilon)?;
    let k = num_hyperplanes(gamma, epsilon)?;
    Ok(k * amplification_rounds(k, epsilon)? * search_width(n))
}

/// Probability bound that one Gaussian hyperplane separates a sample of
/// margin `gamma`: the exact `erf(gamma/sqrt 2)` and its first-order form
/// `sqrt(2/pi) gamma`.
pub fn gaussian_separation_probability(gamma: f64) -> Result<(f64, f64)> {
    check_gamma(gamma)?;
    Ok((erf(gamma / 2f64.sqrt()), (2.0 / PI).sqrt() * gamma))
}

/// `ln(1/eps) / ((n+1) gamma)`.
pub fn generalization_bound(n: usize, gamma: f64, epsilon: f64) -> Result<f64> {
    check_inputs(n, gamma, epsilon)?;
    Ok((1.0 / epsilon).ln() / (n as f64 + 1.0) / gamma)
}

/// The three quantum complexity curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Curve {
    Online,
    VersionSpace,
    Hybrid,
}

impl Curve {
    pub const ALL: [Curve; 3] = [Curve::Online, Curve::VersionSpace, Curve::Hybrid];

    pub fn as_str(self) -> &'static str {
        match self {
            Curve::Online => "online",
            Curve::VersionSpace => "version_space",
            Curve::Hybrid => "hybrid",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "online" => Ok(Curve::Online),
            "version_space" | "version-space" => Ok(Curve::VersionSpace),
            "hybrid" => Ok(Curve::Hybrid),
            _ => Err(Error::invalid(format!("unknown curve '{s}'"))),
        }
    }

    pub fn bound(self, n: usize, gamma: f64, epsilon: f64) -> Result<u64> {
        match self {
            Curve::Online => online_q_bound(n, gamma, epsilon),
            Curve::VersionSpace => version_space_bound(n, gamma, epsilon),
            Curve::Hybrid => hybrid_bound(n, gamma, epsilon),
        }
    }

    /// Failure-amplification factor of the curve: the repetition count that
    /// carries the logarithmic dependence on `gamma` and `eps`.
    pub fn amplification(self, gamma: f64, epsilon: f64) -> Result<u64> {
        match self {
            Curve::Online => online_attempts(gamma, epsilon),
            Curve::VersionSpace => version_space_attempts(epsilon),
            Curve::Hybrid => amplification_rounds(num_hyperplanes(gamma, epsilon)?, epsilon),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_absorbs_rounding() {
        assert_eq!(ceil_tol(1.0 + 1e-13), 1);
        assert_eq!(ceil_tol(1.001), 2);
        assert_eq!(ceil_tol(100.00000000001), 100);
    }

    #[test]
    fn novikoff_values() {
        assert_eq!(novikoff_bound(0.1).unwrap(), 100);
        assert_eq!(novikoff_bound(1.0).unwrap(), 1);
        assert!(novikoff_bound(0.0).is_err());
    }

    #[test]
    fn k_equals_one_edge() {
        let gamma = 0.1;
        let eps = 2.0 * (1.0 - (2.0 / PI).sqrt() * gamma);
        assert_eq!(num_hyperplanes(gamma, eps).unwrap(), 1);
    }

    #[test]
    fn log34_domain() {
        assert!(log34(0.0).is_err());
        assert!(log34(1.0).is_err());
        assert!((log34(0.75).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn generalization_vanishes_at_eps_one_limit() {
        assert!(generalization_bound(10, 0.1, 1.0 - 1e-12).unwrap() < 1e-9);
    }

    #[test]
    fn curve_names_round_trip() {
        for c in Curve::ALL {
            assert_eq!(Curve::parse(c.as_str()).unwrap(), c);
        }
    }
}
