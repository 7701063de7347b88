use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::bench::RuntimeRow;
use crate::intention::Embedding;
use super::experiment::{BaselineRow, SweepRow};

/// Everything an evaluation run produced. Serialization is deterministic
/// given the same inputs (timings aside).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub runtime: Vec<RuntimeRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub baseline: Vec<BaselineRow>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn sweep_csv(&self) -> String {
        let mut out = String::from("planes,strategy,accuracy,precision_ill\n");
        for r in &self.sweep {
            let p = r.precision_ill.map(|p| format!("{p:.6}")).unwrap_or_default();
            let _ = writeln!(out, "{},{},{:.6},{}", r.planes, r.strategy.short_name(), r.accuracy, p);
        }
        out
    }

    pub fn baseline_csv(&self) -> String {
        let mut out = String::from("embedding,planes,strategy,accuracy\n");
        for r in &self.baseline {
            let e = match r.embedding {
                Embedding::Lsa => "lsa",
                Embedding::Raw => "tfidf",
            };
            let _ = writeln!(out, "{e},{},{},{:.6}", r.planes, r.strategy.short_name(), r.accuracy);
        }
        out
    }

    pub fn runtime_csv(&self) -> String {
        let mut out = String::from("strategy,ns_per_record\n");
        for r in &self.runtime {
            let _ = writeln!(out, "{},{:.3}", r.strategy.short_name(), r.ns_per_record);
        }
        out
    }
}
