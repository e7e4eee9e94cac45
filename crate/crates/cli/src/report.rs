use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub max_error: f64,
    pub tolerance: f64,
    /// Fitted convergence order, for checks on rates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_order: Option<f64>,
    /// Condition on the fitted order, such as `>= 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub required_order: Option<String>,
    /// Inputs and values behind a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<Value>,
}

impl Check {
    /// Passes when `max_error ≤ tolerance`; `offending` is kept only on failure.
    pub fn bounded(name: impl Into<String>, max_error: f64, tolerance: f64, offending: Value) -> Self {
        let pass = max_error <= tolerance;
        Self {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            max_error,
            tolerance,
            fitted_order: None,
            required_order: None,
            offending: (!pass).then_some(offending),
        }
    }

    /// Passes when the fitted order satisfies `pass`; an exact fit (`None`)
    /// counts as arbitrarily high order.
    pub fn order(
        name: impl Into<String>,
        fitted: Option<f64>,
        required: &str,
        pass: bool,
        final_error: f64,
        offending: Value,
    ) -> Self {
        Self {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            max_error: final_error,
            tolerance: f64::NAN,
            fitted_order: fitted,
            required_order: Some(required.to_string()),
            offending: (!pass).then_some(offending),
        }
    }

    /// A check that could not be carried out.
    pub fn failed(name: impl Into<String>, offending: Value) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            max_error: f64::NAN,
            tolerance: f64::NAN,
            fitted_order: None,
            required_order: None,
            offending: Some(offending),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub status: Status,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl Report {
    pub fn new(command: &str, inputs: &[&[u8]]) -> Self {
        Self {
            command: command.to_string(),
            inputs_digest: digest(inputs),
            status: Status::Pass,
            checks: Vec::new(),
            tables: Vec::new(),
            wall_time_seconds: None,
        }
    }

    pub fn check(&mut self, check: Check) {
        if !check.passed() {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn table(&mut self, table: Table) {
        self.tables.push(table);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// SHA-256 over length-prefixed input parts, hex encoded.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
