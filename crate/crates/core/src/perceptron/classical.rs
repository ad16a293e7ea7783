use super::{Algorithm, CostLedger, Protocol, RunResult};
use crate::bounds::novikoff_bound;
use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::grover::NoiseModel;
use crate::hyperplane::Hyperplane;

pub const DEFAULT_MAX_EXAMINATIONS: u64 = 10_000_000;

/// Termination guards for the classical perceptron.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalLimits {
    /// Known margin; caps updates at `ceil(1/gamma^2) + 1`.
    pub gamma: Option<f64>,
    pub max_examinations: u64,
}

impl Default for ClassicalLimits {
    fn default() -> Self {
        ClassicalLimits {
            gamma: None,
            max_examinations: DEFAULT_MAX_EXAMINATIONS,
        }
    }
}

pub fn classical_online(ds: &LabeledDataset, protocol: Protocol) -> Result<RunResult> {
    classical_online_with(ds, protocol, &ClassicalLimits::default())
}

/// The perceptron from `w = 0`, updating `w += y x` on `y <w, x> <= 0`.
pub fn classical_online_with(
    ds: &LabeledDataset,
    protocol: Protocol,
    limits: &ClassicalLimits,
) -> Result<RunResult> {
    if ds.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    let max_updates = match limits.gamma {
        Some(g) => Some(novikoff_bound(g)? + 1),
        None => None,
    };
    let mut w = Hyperplane::zeros(ds.dim());
    let mut ledger = CostLedger::default();
    loop {
        let mut clean = true;
        for p in ds.points() {
            if ledger.wall_steps >= limits.max_examinations {
                return Err(Error::CapExceeded(format!(
                    "classical perceptron exceeded {} examinations",
                    limits.max_examinations
                )));
            }
            ledger.charge_points(1);
            if p.is_mistake(&w) && (clean || protocol == Protocol::StreamUntilClean) {
                w.add_scaled(&p.x, p.y.value());
                ledger.updates += 1;
                clean = false;
                if max_updates.is_some_and(|m| ledger.updates > m) {
                    return Err(Error::CapExceeded(format!(
                        "classical perceptron exceeded {} updates",
                        max_updates.unwrap_or_default()
                    )));
                }
            }
        }
        if clean {
            break;
        }
    }
    Ok(RunResult {
        separates: super::separates(&w, ds),
        hyperplane: w,
        ledger,
        algorithm: Algorithm::Classical(protocol),
        seed: 0,
        dataset: ds.name().to_string(),
        n: ds.len(),
        gamma: limits.gamma,
        epsilon: None,
        backend: None,
        noise: NoiseModel::none(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{make_hard_dataset, Label, LabeledPoint};

    #[test]
    fn single_point() {
        let ds = LabeledDataset::new("s", 2, vec![LabeledPoint::new(vec![1.0, 0.0], Label::Pos)]).unwrap();
        for protocol in [Protocol::StreamUntilClean, Protocol::OneUpdatePerPass] {
            let r = classical_online(&ds, protocol).unwrap();
            assert_eq!(r.ledger.updates, 1);
            assert_eq!(r.hyperplane.as_slice(), &[1.0, 0.0]);
            assert!(r.separates);
            assert_eq!(r.ledger.wall_steps, 2);
        }
    }

    #[test]
    fn hard_step_counts() {
        let hard = make_hard_dataset(1000).unwrap().prefix(500);
        let one = classical_online(&hard, Protocol::OneUpdatePerPass).unwrap();
        assert_eq!(one.ledger.wall_steps, 250_500);
        assert_eq!(one.ledger.updates, 500);
        let stream = classical_online(&hard, Protocol::StreamUntilClean).unwrap();
        assert_eq!(stream.ledger.wall_steps, 1000);
        assert_eq!(make_hard_dataset(2).map(|d| classical_online(&d, Protocol::OneUpdatePerPass).unwrap().ledger.wall_steps).unwrap(), 6);
    }

    #[test]
    fn non_separable_hits_cap() {
        let ds = LabeledDataset::new(
            "x",
            1,
            vec![LabeledPoint::new(vec![1.0], Label::Pos), LabeledPoint::new(vec![1.0], Label::Neg)],
        )
        .unwrap();
        let limits = ClassicalLimits { gamma: None, max_examinations: 1000 };
        assert!(matches!(classical_online_with(&ds, Protocol::StreamUntilClean, &limits), Err(Error::CapExceeded(_))));
        let limits = ClassicalLimits { gamma: Some(0.5), max_examinations: u64::MAX };
        assert!(matches!(classical_online_with(&ds, Protocol::StreamUntilClean, &limits), Err(Error::CapExceeded(_))));
    }
}
