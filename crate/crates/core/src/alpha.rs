use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact threshold `p/q` with `0 < p/q <= 1`, stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RationalAlpha {
    p: u64,
    q: u64,
}

impl RationalAlpha {
    pub const HALF: RationalAlpha = RationalAlpha { p: 1, q: 2 };

    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("alpha denominator is zero".into()));
        }
        if p == 0 || p > q {
            return Err(Error::InvalidArgument(format!(
                "alpha must satisfy 0 < p/q <= 1, got {p}/{q}"
            )));
        }
        let g = p.gcd(&q);
        Ok(RationalAlpha { p: p / g, q: q / g })
    }

    /// `1/k`.
    pub fn reciprocal(k: u64) -> Result<Self> {
        RationalAlpha::new(1, k)
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn q(self) -> u64 {
        self.q
    }

    /// `alpha / (1 + alpha)`, the constant inherited by the small variant
    /// from the with-sources variant.
    pub fn over_one_plus(self) -> Self {
        RationalAlpha::new(self.p, self.p + self.q).expect("positive")
    }
}

impl fmt::Display for RationalAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Only the exact form `P/Q` is accepted; decimals are rejected.
impl FromStr for RationalAlpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s.trim().split_once('/').ok_or_else(|| {
            Error::InvalidArgument(format!("alpha must be a fraction P/Q, got {s:?}"))
        })?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("bad alpha component {t:?}")))
        };
        RationalAlpha::new(parse(p)?, parse(q)?)
    }
}

impl TryFrom<String> for RationalAlpha {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RationalAlpha> for String {
    fn from(a: RationalAlpha) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        let a: RationalAlpha = "2/4".parse().unwrap();
        assert_eq!((a.p(), a.q()), (1, 2));
        assert_eq!(a, RationalAlpha::HALF);
        assert_eq!("1/1".parse::<RationalAlpha>().unwrap().to_string(), "1/1");
    }

    #[test]
    fn rejects_bad_values() {
        for s in ["0.5", "0/3", "3/2", "1/0", "a/b", "1/2/3", ""] {
            assert!(s.parse::<RationalAlpha>().is_err(), "{s}");
        }
    }

    #[test]
    fn over_one_plus() {
        assert_eq!(RationalAlpha::HALF.over_one_plus(), RationalAlpha::new(1, 3).unwrap());
    }

    #[test]
    fn serde_as_string() {
        let j = serde_json::to_string(&RationalAlpha::HALF).unwrap();
        assert_eq!(j, "\"1/2\"");
        let back: RationalAlpha = serde_json::from_str("\"2/6\"").unwrap();
        assert_eq!(back, RationalAlpha::new(1, 3).unwrap());
    }
}
