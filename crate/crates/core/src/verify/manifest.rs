//! Expected verdicts. A case/context pair that is not listed is expected to
//! pass (or to be unposable at that context).

use serde::{Deserialize, Serialize};

use super::{IdentityReport, Verdict};

pub const EMBEDDED: &str = include_str!("../../manifest/expected.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Expectation {
    pub id: String,
    pub n: u8,
    pub m: u8,
    #[serde(rename = "N")]
    pub sites: u8,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_term_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub id: String,
    pub n: u8,
    pub m: u8,
    #[serde(rename = "N")]
    pub sites: u8,
    pub expected: Verdict,
    pub actual: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Manifest {
    pub fn embedded() -> Manifest {
        Manifest::parse(EMBEDDED).expect("embedded manifest is valid")
    }

    pub fn parse(text: &str) -> Result<Manifest, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn expectation(&self, r: &IdentityReport) -> Option<&Expectation> {
        self.expectations.iter().find(|e| e.id == r.id && (e.n, e.m, e.sites) == r.context())
    }

    /// Reports that differ from the manifest, including any oracle
    /// disagreement, which is never expected.
    pub fn compare(&self, reports: &[IdentityReport]) -> Vec<Mismatch> {
        let mut out = Vec::new();
        for r in reports {
            let exp = self.expectation(r);
            let expected = exp.map(|e| e.verdict).unwrap_or(Verdict::Pass);
            // An unlisted case that could not be posed (e.g. `T_-1` at a fixed
            // `λ = 0`) makes no claim either way.
            let unposed = matches!(r.verdict, Verdict::Unsupported | Verdict::EmptyQuantifier);
            if exp.is_none() && unposed && r.oracle_agrees {
                continue;
            }
            let mut detail = None;
            if !r.oracle_agrees {
                detail = Some("symbolic and oracle verdicts disagree".to_string());
            } else if let Some(n) = exp.and_then(|e| e.residual_term_count) {
                if n != r.residual_term_count {
                    detail = Some(format!("residual term count {} (expected {n})", r.residual_term_count));
                }
            }
            if expected != r.verdict || detail.is_some() {
                out.push(Mismatch {
                    id: r.id.clone(),
                    n: r.n,
                    m: r.m,
                    sites: r.sites,
                    expected,
                    actual: r.verdict,
                    detail,
                });
            }
        }
        out
    }
}
