use std::fmt;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, NaiveTime, Timelike};
use serde::{Deserialize, Serialize};

/// A calendar instant split into components. When `utc_offset_minutes` is
/// known the components hold UTC; otherwise the time is naive (local,
/// offset unknown).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimePoint {
    pub year: i32,
    pub month: u32,
    pub day: u32,
    pub hour: u32,
    pub minute: u32,
    pub second: u32,
    pub utc_offset_minutes: Option<i32>,
}

impl TimePoint {
    pub fn new(year: i32, month: u32, day: u32, hour: u32, minute: u32, second: u32) -> Option<Self> {
        let tp = Self {
            year,
            month,
            day,
            hour,
            minute,
            second,
            utc_offset_minutes: None,
        };
        tp.is_valid().then_some(tp)
    }

    pub fn from_naive(dt: NaiveDateTime, utc_offset_minutes: Option<i32>) -> Self {
        Self {
            year: dt.year(),
            month: dt.month(),
            day: dt.day(),
            hour: dt.hour(),
            minute: dt.minute(),
            second: dt.second(),
            utc_offset_minutes,
        }
    }

    pub fn to_naive(&self) -> Option<NaiveDateTime> {
        let date = NaiveDate::from_ymd_opt(self.year, self.month, self.day)?;
        let time = NaiveTime::from_hms_opt(self.hour, self.minute, self.second)?;
        Some(NaiveDateTime::new(date, time))
    }

    pub fn is_valid(&self) -> bool {
        self.year >= 0 && self.to_naive().is_some()
    }

    /// Components in the fixed order (year, month, day, hour, minute, second).
    pub fn components(&self) -> [i64; 6] {
        [
            self.year as i64,
            self.month as i64,
            self.day as i64,
            self.hour as i64,
            self.minute as i64,
            self.second as i64,
        ]
    }

    /// Parses EXIF (`2015:04:25 11:56:00`) or ISO-like (`2015-04-25T11:56:00`)
    /// date-times with an optional `Z`/`±HH:MM` suffix. Date-only values get
    /// midnight. A known offset (inline, else `fallback_offset`) converts the
    /// components to UTC.
    pub fn parse(text: &str, fallback_offset: Option<i32>) -> Result<Self, String> {
        let text = text.trim();
        let (body, inline_offset) = split_offset(text)?;
        let offset = inline_offset.or(fallback_offset);
        let body = body.replace('T', " ");
        let (date_part, time_part) = match body.split_once(' ') {
            Some((d, t)) => (d.trim(), Some(t.trim())),
            None => (body.trim(), None),
        };
        let date = parse_date(date_part)?;
        let time = match time_part {
            Some(t) => parse_time(t)?,
            None => NaiveTime::MIN,
        };
        Ok(Self::at(NaiveDateTime::new(date, time), offset))
    }

    /// Combines a time-of-day text (`HH:MM:SS`) with a date.
    pub fn parse_time_on(date: &TimePoint, text: &str) -> Result<Self, String> {
        let (body, inline_offset) = split_offset(text.trim())?;
        let time = parse_time(body.trim())?;
        let day = NaiveDate::from_ymd_opt(date.year, date.month, date.day)
            .ok_or_else(|| "invalid date".to_string())?;
        // GPS time is UTC unless stated otherwise.
        Ok(Self::at(NaiveDateTime::new(day, time), inline_offset.or(Some(0))))
    }

    fn at(local: NaiveDateTime, offset: Option<i32>) -> Self {
        match offset {
            Some(minutes) => {
                let utc = local - Duration::minutes(minutes as i64);
                Self::from_naive(utc, Some(minutes))
            }
            None => Self::from_naive(local, None),
        }
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:04}:{:02}:{:02} {:02}:{:02}:{:02}",
            self.year, self.month, self.day, self.hour, self.minute, self.second
        )?;
        if self.utc_offset_minutes.is_some() {
            write!(f, "Z")?;
        }
        Ok(())
    }
}

/// Parses `Z`, `+05:45`, `-0300`, `+05` into signed minutes.
pub fn parse_offset(text: &str) -> Result<i32, String> {
    let text = text.trim();
    if text == "Z" || text == "z" {
        return Ok(0);
    }
    let (sign, rest) = match text.as_bytes().first() {
        Some(b'+') => (1, &text[1..]),
        Some(b'-') => (-1, &text[1..]),
        _ => return Err(format!("bad utc offset `{text}`")),
    };
    let digits: String = rest.chars().filter(|c| *c != ':').collect();
    let (h, m) = match digits.len() {
        2 => (&digits[..2], "0"),
        4 => (&digits[..2], &digits[2..]),
        _ => return Err(format!("bad utc offset `{text}`")),
    };
    let h: i32 = h.parse().map_err(|_| format!("bad utc offset `{text}`"))?;
    let m: i32 = m.parse().map_err(|_| format!("bad utc offset `{text}`"))?;
    if h > 14 || m > 59 {
        return Err(format!("utc offset out of range `{text}`"));
    }
    Ok(sign * (h * 60 + m))
}

fn split_offset(text: &str) -> Result<(&str, Option<i32>), String> {
    if let Some(body) = text.strip_suffix(['Z', 'z']) {
        return Ok((body, Some(0)));
    }
    // An offset sign can only follow the time part.
    if let Some(space) = text.rfind([' ', 'T']) {
        let tail = &text[space + 1..];
        if let Some(pos) = tail.rfind(['+', '-']) {
            let offset = parse_offset(&tail[pos..])?;
            return Ok((&text[..space + 1 + pos], Some(offset)));
        }
    } else if text.len() > 8 {
        // time-only value with an offset, e.g. `11:56:00+05:45`
        if let Some(pos) = text.rfind(['+', '-']) {
            if text[..pos].contains(':') && !text[..pos].contains('-') {
                let offset = parse_offset(&text[pos..])?;
                return Ok((&text[..pos], Some(offset)));
            }
        }
    }
    Ok((text, None))
}

fn parse_date(text: &str) -> Result<NaiveDate, String> {
    let parts: Vec<&str> = text.split([':', '-']).collect();
    if parts.len() != 3 {
        return Err(format!("bad date `{text}`"));
    }
    let y: i32 = parts[0].parse().map_err(|_| format!("bad year in `{text}`"))?;
    let m: u32 = parts[1].parse().map_err(|_| format!("bad month in `{text}`"))?;
    let d: u32 = parts[2].parse().map_err(|_| format!("bad day in `{text}`"))?;
    if y < 0 {
        return Err(format!("negative year in `{text}`"));
    }
    NaiveDate::from_ymd_opt(y, m, d).ok_or_else(|| format!("invalid calendar date `{text}`"))
}

fn parse_time(text: &str) -> Result<NaiveTime, String> {
    // drop fractional seconds
    let text = text.split('.').next().unwrap_or(text);
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("bad time `{text}`"));
    }
    let h: u32 = parts[0].trim().parse().map_err(|_| format!("bad hour in `{text}`"))?;
    let m: u32 = parts[1].trim().parse().map_err(|_| format!("bad minute in `{text}`"))?;
    let s: u32 = parts[2].trim().parse().map_err(|_| format!("bad second in `{text}`"))?;
    NaiveTime::from_hms_opt(h, m, s).ok_or_else(|| format!("time out of range `{text}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exif_and_iso_forms_agree() {
        let a = TimePoint::parse("2015:04:25 11:56:00", None).unwrap();
        let b = TimePoint::parse("2015-04-25T11:56:00", None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.utc_offset_minutes, None);
    }

    #[test]
    fn offset_normalizes_to_utc() {
        let t = TimePoint::parse("2015:04:25 11:56:00+05:45", None).unwrap();
        assert_eq!((t.hour, t.minute), (6, 11));
        assert_eq!(t.utc_offset_minutes, Some(345));

        let t = TimePoint::parse("2015:04:25 01:00:00", Some(120)).unwrap();
        assert_eq!((t.day, t.hour), (24, 23));
    }

    #[test]
    fn date_only_is_midnight() {
        let t = TimePoint::parse("2020:01:01", None).unwrap();
        assert_eq!(t.components(), [2020, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn rejects_invalid_calendar() {
        assert!(TimePoint::parse("2021:02:29 00:00:00", None).is_err());
        assert!(TimePoint::parse("2021:13:01 00:00:00", None).is_err());
        assert!(TimePoint::parse("2021:01:01 24:00:00", None).is_err());
        assert!(TimePoint::new(2021, 4, 31, 0, 0, 0).is_none());
    }

    #[test]
    fn gps_time_combines_with_date() {
        let d = TimePoint::parse("2015:04:25", None).unwrap();
        let t = TimePoint::parse_time_on(&d, "06:11:00").unwrap();
        assert_eq!(t.components(), [2015, 4, 25, 6, 11, 0]);
        assert_eq!(t.utc_offset_minutes, Some(0));
    }

    #[test]
    fn offsets() {
        assert_eq!(parse_offset("+05:45").unwrap(), 345);
        assert_eq!(parse_offset("-0300").unwrap(), -180);
        assert_eq!(parse_offset("Z").unwrap(), 0);
        assert!(parse_offset("05:00").is_err());
    }
}
