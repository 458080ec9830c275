//! Machine-readable verdicts. Reports are self-contained for re-audit:
//! identity name, instance description, precision, verdict, and either a
//! witness or a defect. Numeric payloads are decimal strings.

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub identity: String,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<serde_json::Value>,
}

impl CheckReport {
    pub fn pass(identity: &str, instance: String) -> CheckReport {
        CheckReport {
            identity: identity.into(),
            instance,
            precision: None,
            verdict: Verdict::Pass,
            witness: None,
            defect: None,
        }
    }

    pub fn fail(identity: &str, instance: String, defect: serde_json::Value) -> CheckReport {
        CheckReport {
            identity: identity.into(),
            instance,
            precision: None,
            verdict: Verdict::Fail,
            witness: None,
            defect: Some(defect),
        }
    }

    pub fn with_precision(mut self, s: u32) -> CheckReport {
        self.precision = Some(s);
        self
    }

    pub fn with_witness(mut self, w: serde_json::Value) -> CheckReport {
        self.witness = Some(w);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
