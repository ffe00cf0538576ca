use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Only where an operation defines it, such as a search hitting its node limit.
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail beats inconclusive beats pass.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Self {
        verdicts.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl Claim {
    pub fn new(name: impl Into<String>, ok: bool, detail: Value) -> Self {
        Self { name: name.into(), verdict: Verdict::from_bool(ok), detail, runtime_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    pub verdict: Verdict,
    pub claims: Vec<Claim>,
    pub data: Value,
    pub witness_files: Vec<String>,
    pub runtime_ms: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64, claims: Vec<Claim>, data: Value) -> Self {
        let verdict = Verdict::combine(claims.iter().map(|c| c.verdict));
        Self { command, seed, verdict, claims, data, witness_files: Vec::new(), runtime_ms: 0.0 }
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict == Verdict::Pass {
            0
        } else {
            1
        }
    }

    /// One line per claim, for standard error.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            out.push_str(&format!("[{}] {}\n", c.verdict.label(), c.name));
        }
        out.push_str(&format!("overall: {}", self.verdict.label()));
        out
    }
}

/// Remove every `runtime_ms` field, recursively.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("runtime_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
