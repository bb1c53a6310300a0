use serde::Serialize;
use std::collections::BTreeMap;

/// One named estimate. `error` is the shot-noise standard error, 0 for exact evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableReport {
    pub name: String,
    pub value: f64,
    pub error: f64,
    pub metadata: BTreeMap<String, String>,
}

impl ObservableReport {
    pub fn exact(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value, error: 0.0, metadata: BTreeMap::new() }
    }

    pub fn sampled(name: impl Into<String>, value: f64, error: f64) -> Self {
        Self { name: name.into(), value, error: error.max(0.0), metadata: BTreeMap::new() }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    /// `|value − target| ≤ k·error`, with a floor for exact reports.
    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.error + 1e-12
    }
}

/// Running mean and variance (Welford) for per-shot values.
#[derive(Clone, Copy, Debug, Default)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<T: IntoIterator<Item = f64>>(iter: T) -> Self {
        let mut m = Moments::default();
        iter.into_iter().for_each(|x| m.push(x));
        m
    }
}
