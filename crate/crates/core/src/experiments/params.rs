use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// String-valued experiment parameters. Typed accessors record which keys
/// were read so that leftovers can be rejected.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keys are normalised to use underscores.
    pub fn insert(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.replace('-', "_"), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.values.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T, what: &str) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{key} must be {what}, got '{v}'"))),
        }
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        self.parsed(key, default, "a number")
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        self.parsed(key, default, "a non-negative integer")
    }

    pub fn u64(&self, key: &str, default: u64) -> Result<u64> {
        self.parsed(key, default, "a non-negative integer")
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        self.get(key).unwrap_or(default).to_string()
    }

    pub fn f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("{key} must be a comma-separated list of numbers")))
                })
                .collect(),
        }
    }

    pub fn reject_unknown(&self) -> Result<()> {
        let used = self.used.borrow();
        match self.values.keys().find(|k| !used.contains(*k)) {
            Some(k) => Err(Error::invalid(format!("unknown parameter '{}'", k.replace('_', "-")))),
            None => Ok(()),
        }
    }
}

/// Fails unless `lo < x < hi`.
pub(crate) fn open_range(name: &str, x: f64, lo: f64, hi: f64) -> Result<f64> {
    if x > lo && x < hi {
        Ok(x)
    } else {
        Err(Error::invalid(format!("{name} must be in ({lo},{hi})")))
    }
}

pub(crate) fn positive(name: &str, x: usize) -> Result<usize> {
    if x == 0 {
        Err(Error::invalid(format!("{name} must be at least 1")))
    } else {
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typed_access_and_unknown_keys() {
        let mut p = Params::new();
        p.insert("train-fraction", "0.5");
        p.insert("bogus", "1");
        assert_eq!(p.f64("train_fraction", 1.0).unwrap(), 0.5);
        assert_eq!(p.usize("n", 7).unwrap(), 7);
        assert_eq!(p.reject_unknown().unwrap_err().to_string(), "unknown parameter 'bogus'");
        let mut q = Params::new();
        q.insert("n", "x");
        assert!(q.usize("n", 1).is_err());
        q.insert("gammas", "0.1, 0.2");
        assert_eq!(q.f64_list("gammas", &[]).unwrap(), vec![0.1, 0.2]);
    }
}
