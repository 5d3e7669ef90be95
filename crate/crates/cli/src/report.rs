use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub inputs: Value,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

impl Case {
    pub fn new(inputs: Value, expected: Value, computed: Value, pass: bool) -> Self {
        Case {
            inputs,
            expected,
            computed,
            pass,
        }
    }

    /// A case that passes iff `expected == computed`.
    pub fn exact(inputs: Value, expected: Value, computed: Value) -> Self {
        let pass = expected == computed;
        Case::new(inputs, expected, computed, pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Outcome of one verification suite. Wall time is deliberately absent so
/// that the serialized payload is identical across reruns; it travels in
/// the cache envelope instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: Value,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(suite: &str, params: Value, cases: Vec<Case>) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        VerificationReport {
            suite: suite.to_string(),
            params,
            summary: Summary {
                total: cases.len(),
                passed,
                failed: cases.len() - passed,
            },
            cases,
        }
    }

    pub fn pass(&self) -> bool {
        self.summary.failed == 0 && self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Human-readable differences against an earlier report of the same suite.
    pub fn diff(&self, earlier: &VerificationReport) -> Vec<String> {
        let mut out = Vec::new();
        if self.suite != earlier.suite {
            out.push(format!("suite: {} -> {}", earlier.suite, self.suite));
        }
        if self.params != earlier.params {
            out.push(format!("params: {} -> {}", earlier.params, self.params));
        }
        let shared = self.cases.len().min(earlier.cases.len());
        for (i, (now, was)) in self.cases.iter().zip(&earlier.cases).enumerate() {
            if now != was {
                out.push(format!(
                    "case {i} {}: computed {} (pass={}) was {} (pass={})",
                    now.inputs, now.computed, now.pass, was.computed, was.pass
                ));
            }
        }
        for c in &self.cases[shared..] {
            out.push(format!("new case {}", c.inputs));
        }
        for c in &earlier.cases[shared..] {
            out.push(format!("dropped case {}", c.inputs));
        }
        out
    }
}
