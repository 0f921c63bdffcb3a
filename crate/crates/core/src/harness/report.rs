use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The outcome of one bounded check. A counterexample is present exactly
/// when the verdict is `Fail`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    pub millis: u64,
}

impl CheckReport {
    /// Runs `check`, timing it; `Err` carries the counterexample.
    pub fn run<F>(name: &str, params: &[(&str, String)], check: F) -> CheckReport
    where
        F: FnOnce() -> Result<(), String>,
    {
        let start = Instant::now();
        let result = check();
        let millis = start.elapsed().as_millis() as u64;
        let (verdict, counterexample) = match result {
            Ok(()) => (Verdict::Pass, None),
            Err(c) => (Verdict::Fail, Some(c)),
        };
        CheckReport {
            name: name.to_string(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            verdict,
            counterexample,
            millis,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        write!(f, "{verdict} {}", self.name)?;
        if !self.params.is_empty() {
            let params: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, " [{}]", params.join(", "))?;
        }
        write!(f, " ({} ms)", self.millis)?;
        if let Some(c) = &self.counterexample {
            write!(f, ": {c}")?;
        }
        Ok(())
    }
}

/// Sorts reports by name, then parameters.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.params.cmp(&b.params)));
}
