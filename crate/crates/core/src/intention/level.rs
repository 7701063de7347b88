use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordinal intention spectrum, lowest = benign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntentionLevel {
    WellIntention = 0,
    BorderLine = 1,
    ModeratelyIll = 2,
    VeryIll = 3,
    ExtremelyIll = 4,
}

impl IntentionLevel {
    pub const ALL: [IntentionLevel; 5] = [
        IntentionLevel::WellIntention,
        IntentionLevel::BorderLine,
        IntentionLevel::ModeratelyIll,
        IntentionLevel::VeryIll,
        IntentionLevel::ExtremelyIll,
    ];

    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn from_ordinal(ordinal: u8) -> Option<Self> {
        Self::ALL.get(ordinal as usize).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            IntentionLevel::WellIntention => "well-intention",
            IntentionLevel::BorderLine => "border-line",
            IntentionLevel::ModeratelyIll => "moderately-ill",
            IntentionLevel::VeryIll => "very-ill",
            IntentionLevel::ExtremelyIll => "extremely-ill",
        }
    }

    /// Moderately-ill and above.
    pub fn is_ill(self) -> bool {
        self >= IntentionLevel::ModeratelyIll
    }

    /// `n` evenly spaced levels spanning the spectrum, for 2..=5.
    pub fn scale(n: usize) -> Result<Vec<IntentionLevel>> {
        let ordinals: &[u8] = match n {
            2 => &[0, 4],
            3 => &[0, 2, 4],
            4 => &[0, 1, 3, 4],
            5 => &[0, 1, 2, 3, 4],
            _ => return Err(Error::InvalidConfig(format!("level count {n} outside 2..=5"))),
        };
        Ok(ordinals.iter().map(|o| Self::ALL[*o as usize]).collect())
    }

    /// Nearest member of `levels` by ordinal; ties go to the lower level.
    pub fn nearest_in(self, levels: &[IntentionLevel]) -> Option<IntentionLevel> {
        levels
            .iter()
            .copied()
            .min_by_key(|l| ((l.ordinal() as i16 - self.ordinal() as i16).abs(), l.ordinal()))
    }
}

/// Picks `count` evenly spaced members of a sorted level set.
pub fn evenly_spaced(levels: &[IntentionLevel], count: usize) -> Result<Vec<IntentionLevel>> {
    let mut sorted = levels.to_vec();
    sorted.sort();
    sorted.dedup();
    if count < 2 || count > sorted.len() {
        return Err(Error::InvalidConfig(format!(
            "cannot pick {count} levels from {}",
            sorted.len()
        )));
    }
    let last = (sorted.len() - 1) as f64;
    let mut out: Vec<IntentionLevel> = (0..count)
        .map(|i| sorted[(i as f64 * last / (count - 1) as f64).round() as usize])
        .collect();
    out.dedup();
    Ok(out)
}

impl fmt::Display for IntentionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for IntentionLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Ok(n) = t.parse::<u8>() {
            return Self::from_ordinal(n).ok_or_else(|| Error::MalformedInput(format!("unknown level `{s}`")));
        }
        Self::ALL
            .into_iter()
            .find(|l| l.label().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::MalformedInput(format!("unknown level `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use IntentionLevel::*;

    #[test]
    fn labels_round_trip() {
        for l in IntentionLevel::ALL {
            assert_eq!(l.label().parse::<IntentionLevel>().unwrap(), l);
            assert_eq!(l.ordinal().to_string().parse::<IntentionLevel>().unwrap(), l);
        }
        assert!("sneaky".parse::<IntentionLevel>().is_err());
    }

    #[test]
    fn ordering_and_ill() {
        assert!(WellIntention < BorderLine && VeryIll < ExtremelyIll);
        assert!(!BorderLine.is_ill());
        assert!(ModeratelyIll.is_ill());
    }

    #[test]
    fn scales() {
        assert_eq!(IntentionLevel::scale(2).unwrap(), vec![WellIntention, ExtremelyIll]);
        assert_eq!(IntentionLevel::scale(4).unwrap(), vec![WellIntention, BorderLine, VeryIll, ExtremelyIll]);
        assert!(IntentionLevel::scale(1).is_err());
    }

    #[test]
    fn collapsing() {
        let four = IntentionLevel::scale(4).unwrap();
        assert_eq!(evenly_spaced(&four, 2).unwrap(), vec![WellIntention, ExtremelyIll]);
        assert_eq!(evenly_spaced(&four, 3).unwrap(), vec![WellIntention, VeryIll, ExtremelyIll]);
        assert_eq!(evenly_spaced(&four, 4).unwrap(), four);
        assert_eq!(ModeratelyIll.nearest_in(&[BorderLine, VeryIll]), Some(BorderLine));
        assert_eq!(BorderLine.nearest_in(&[WellIntention, ExtremelyIll]), Some(WellIntention));
    }
}
