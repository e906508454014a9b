//! Angle literals: decimal radians or `pi*p/q`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleLiteral(f64);

impl AngleLiteral {
    pub fn radians(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AngleParseError {
    #[error("empty angle")]
    Empty,
    #[error("malformed angle {0:?}: expected radians or pi*p/q")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("angle {0} outside [0, 2pi]")]
    OutOfRange(f64),
}

fn parse_int(s: &str, whole: &str) -> Result<i64, AngleParseError> {
    s.trim().parse().map_err(|_| AngleParseError::Malformed(whole.to_owned()))
}

/// `pi`, `pi*p`, `pi/q` or `pi*p/q`, with the `pi` prefix already removed.
fn parse_pi_multiple(rest: &str, whole: &str) -> Result<f64, AngleParseError> {
    let (num, den) = match rest.split_once('/') {
        Some((n, d)) => (n, parse_int(d, whole)?),
        None => (rest, 1),
    };
    let num = match num.trim() {
        "" => 1,
        n => parse_int(n.strip_prefix('*').ok_or_else(|| AngleParseError::Malformed(whole.to_owned()))?, whole)?,
    };
    if den == 0 {
        return Err(AngleParseError::ZeroDenominator(whole.to_owned()));
    }
    Ok(PI * num as f64 / den as f64)
}

impl FromStr for AngleLiteral {
    type Err = AngleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(AngleParseError::Empty);
        }
        let value = match t.strip_prefix("pi") {
            Some(rest) => parse_pi_multiple(rest, t)?,
            None => t.parse::<f64>().map_err(|_| AngleParseError::Malformed(t.to_owned()))?,
        };
        // a hair of slack so "pi*2" and decimal spellings of 2π are accepted
        if !(0.0..=2.0 * PI + 1e-12).contains(&value) {
            return Err(AngleParseError::OutOfRange(value));
        }
        Ok(Self(value.min(2.0 * PI)))
    }
}

impl fmt::Display for AngleLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<f64, AngleParseError> {
        s.parse::<AngleLiteral>().map(AngleLiteral::radians)
    }

    #[test]
    fn pi_forms() {
        assert_eq!(parse("pi*1/2"), Ok(PI / 2.0));
        assert_eq!(parse("pi"), Ok(PI));
        assert_eq!(parse("pi/6"), Ok(PI / 6.0));
        assert_eq!(parse("pi*2"), Ok(2.0 * PI));
        assert_eq!(parse(" pi*3/4 "), Ok(3.0 * PI / 4.0));
    }

    #[test]
    fn decimals() {
        assert_eq!(parse("0"), Ok(0.0));
        assert_eq!(parse("1.2"), Ok(1.2));
        assert_eq!(parse("1e-1"), Ok(0.1));
    }

    #[test]
    fn rejects() {
        assert!(matches!(parse(""), Err(AngleParseError::Empty)));
        assert!(matches!(parse("pi*1/0"), Err(AngleParseError::ZeroDenominator(_))));
        assert!(matches!(parse("pi*5/2"), Err(AngleParseError::OutOfRange(_))));
        assert!(matches!(parse("-0.1"), Err(AngleParseError::OutOfRange(_))));
        for bad in ["pie", "pi*x/2", "pi2", "tau", "pi*1/2/3"] {
            assert!(matches!(parse(bad), Err(AngleParseError::Malformed(_))), "{bad}");
        }
    }
}
