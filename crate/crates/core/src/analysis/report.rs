use serde::Serialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// Acceptance band attached to a metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Tolerance {
    /// value < bound
    Below { bound: f64 },
    /// value > bound
    Above { bound: f64 },
    /// |value - target| <= abs
    Within { target: f64, abs: f64 },
    /// |value / target - 1| <= rel
    Relative { target: f64, rel: f64 },
}

impl Tolerance {
    pub fn below(bound: f64) -> Self {
        Tolerance::Below { bound }
    }

    pub fn above(bound: f64) -> Self {
        Tolerance::Above { bound }
    }

    pub fn within(target: f64, abs: f64) -> Self {
        Tolerance::Within { target, abs }
    }

    pub fn relative(target: f64, rel: f64) -> Self {
        Tolerance::Relative { target, rel }
    }

    pub fn check(&self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        match *self {
            Tolerance::Below { bound } => v < bound,
            Tolerance::Above { bound } => v > bound,
            Tolerance::Within { target, abs } => (v - target).abs() <= abs,
            Tolerance::Relative { target, rel } => (v / target - 1.0).abs() <= rel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub value: f64,
    pub tolerance: Option<Tolerance>,
    pub params: BTreeMap<String, Value>,
}

impl Metric {
    /// Informational metric without a pass/fail band.
    pub fn info(value: f64) -> Self {
        Metric { value, tolerance: None, params: BTreeMap::new() }
    }

    pub fn checked(value: f64, tol: Tolerance) -> Self {
        Metric { value, tolerance: Some(tol), params: BTreeMap::new() }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn pass(&self) -> Option<bool> {
        self.tolerance.map(|t| t.check(self.value))
    }

    fn to_json(&self) -> Value {
        let params: Map<String, Value> = self.params.clone().into_iter().collect();
        json!({
            "params": params,
            "pass": self.pass(),
            "tolerance": self.tolerance,
            "value": self.value,
        })
    }
}

/// Named metrics, serialised as a JSON object keyed by metric name in
/// lexicographic order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    metrics: BTreeMap<String, Metric>,
    warnings: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, m: Metric) {
        self.metrics.insert(name.into(), m);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn get(&self, name: &str) -> Option<&Metric> {
        self.metrics.get(name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).map(|m| m.value)
    }

    pub fn metrics(&self) -> impl Iterator<Item = (&str, &Metric)> {
        self.metrics.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.metrics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metrics.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Names of checked metrics that fail their tolerance.
    pub fn failures(&self) -> Vec<&str> {
        self.metrics
            .iter()
            .filter(|(_, m)| m.pass() == Some(false))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Absorbs another report's metrics under `prefix.`.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for (k, m) in other.metrics {
            let key = if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
            self.metrics.insert(key, m);
        }
        self.warnings.extend(other.warnings);
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self.metrics.iter().map(|(k, m)| (k.clone(), m.to_json())).collect();
        Value::Object(map)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serialises")
    }
}
