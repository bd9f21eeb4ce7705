//! Machine-readable run reports.

use serde::Serialize;
use serde_json::{Map, Value};

pub const REPORT_SCHEMA: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub residuals: Vec<Residual>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            command: command.into(),
            inputs: Map::new(),
            outputs: Map::new(),
            residuals: Vec::new(),
            pass: true,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), serde_json::to_value(v).expect("serializable input"));
        self
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.outputs.insert(key.into(), serde_json::to_value(v).expect("serializable output"));
        self
    }

    /// Records `value <= tolerance`.
    pub fn at_most(&mut self, name: &str, value: f64, tolerance: f64) -> &mut Self {
        self.check(name, value, tolerance, value <= tolerance)
    }

    /// Records a residual with an explicit verdict.
    pub fn check(&mut self, name: &str, value: f64, tolerance: f64, pass: bool) -> &mut Self {
        self.residuals.push(Residual { name: name.into(), value, tolerance, pass });
        self.pass &= pass;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }
}
