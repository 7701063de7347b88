use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Significance {
    Low,
    Medium,
    High,
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Significance::Low => "low",
            Significance::Medium => "medium",
            Significance::High => "high",
        })
    }
}

impl FromStr for Significance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(Significance::Low),
            "medium" => Ok(Significance::Medium),
            "high" => Ok(Significance::High),
            _ => Err(Error::InvalidConfig(format!("unknown significance `{s}`"))),
        }
    }
}

/// One row of the weight table: precision in `(above, up_to]` percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightRule {
    pub significance: Significance,
    pub above: f64,
    pub up_to: f64,
    pub weight: u8,
}

impl WeightRule {
    fn matches(&self, significance: Significance, precision: f64) -> bool {
        self.significance == significance && precision > self.above && precision <= self.up_to
    }
}

pub const WEIGHT_RULES: [WeightRule; 4] = [
    WeightRule {
        significance: Significance::High,
        above: 90.0,
        up_to: 100.0,
        weight: 5,
    },
    WeightRule {
        significance: Significance::High,
        above: 80.0,
        up_to: 90.0,
        weight: 4,
    },
    WeightRule {
        significance: Significance::Medium,
        above: 60.0,
        up_to: 70.0,
        weight: 3,
    },
    WeightRule {
        significance: Significance::Low,
        above: f64::NEG_INFINITY,
        up_to: 90.0,
        weight: 2,
    },
];

/// Table lookup. Combinations outside the table fall to the nearest band
/// below: the next lower precision band of the same tier, else the next
/// tier down, ending at the low tier.
pub fn resolve_weight(significance: Significance, precision_percent: f64) -> u8 {
    let p = if precision_percent.is_nan() {
        0.0
    } else {
        precision_percent.clamp(0.0, 100.0)
    };
    if let Some(rule) = WEIGHT_RULES.iter().find(|r| r.matches(significance, p)) {
        return rule.weight;
    }
    let lower = WEIGHT_RULES
        .iter()
        .filter(|r| r.significance == significance && r.up_to < p)
        .max_by(|a, b| a.up_to.total_cmp(&b.up_to));
    if let Some(rule) = lower {
        return rule.weight;
    }
    match significance {
        Significance::High => resolve_weight(Significance::Medium, p),
        Significance::Medium => resolve_weight(Significance::Low, p),
        Significance::Low => 2,
    }
}
