use serde::Serialize;
use serde_json::Value;

/// JSON schema version stamped on every top-level report.
pub const SCHEMA_VERSION: u32 = 1;

/// One named check with what was measured and the tolerance applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool, measured: impl Into<Value>) -> Self {
        Self {
            name: name.into(),
            passed,
            measured: measured.into(),
            tolerance: None,
            detail: None,
        }
    }

    /// Passes when `measured < tolerance`; NaN fails.
    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured < tolerance, measured).with_tolerance(tolerance)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        match self.tolerance {
            Some(t) => format!(
                "[{verdict}] {} (measured {}, tolerance {t:e})",
                self.name, self.measured
            ),
            None => format!("[{verdict}] {} (measured {})", self.name, self.measured),
        }
    }
}
