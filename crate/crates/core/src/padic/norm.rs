use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A value of the absolute value: p^(e/2) for an integer half-exponent e, or 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormValue {
    Zero,
    Pow(i64),
}

impl NormValue {
    pub const ONE: NormValue = NormValue::Pow(0);

    /// |x| = p^(-v) for an element of Q_p of valuation v.
    pub fn from_valuation(v: i64) -> NormValue {
        NormValue::Pow(-2 * v)
    }

    pub fn half_exponent(self) -> Option<i64> {
        match self {
            NormValue::Zero => None,
            NormValue::Pow(e) => Some(e),
        }
    }

    pub fn is_zero(self) -> bool {
        self == NormValue::Zero
    }

    pub fn max(self, other: NormValue) -> NormValue {
        std::cmp::max(self, other)
    }

    /// The ratio self / other; `None` when other is zero.
    pub fn ratio(self, other: NormValue) -> Option<NormValue> {
        match (self, other) {
            (_, NormValue::Zero) => None,
            (NormValue::Zero, _) => Some(NormValue::Zero),
            (NormValue::Pow(a), NormValue::Pow(b)) => Some(NormValue::Pow(a - b)),
        }
    }

    pub fn inv(self) -> Option<NormValue> {
        NormValue::ONE.ratio(self)
    }

    pub fn to_f64(self, p: u32) -> f64 {
        match self {
            NormValue::Zero => 0.0,
            NormValue::Pow(e) => (p as f64).powf(e as f64 / 2.0),
        }
    }
}

impl std::ops::Mul for NormValue {
    type Output = NormValue;
    fn mul(self, rhs: NormValue) -> NormValue {
        match (self, rhs) {
            (NormValue::Pow(a), NormValue::Pow(b)) => NormValue::Pow(a + b),
            _ => NormValue::Zero,
        }
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NormValue::Zero, NormValue::Zero) => Ordering::Equal,
            (NormValue::Zero, _) => Ordering::Less,
            (_, NormValue::Zero) => Ordering::Greater,
            (NormValue::Pow(a), NormValue::Pow(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormValue {
    /// `p^k` for integral exponents, `p^k/2` otherwise, `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Zero => f.write_str("0"),
            NormValue::Pow(e) if e % 2 == 0 => write!(f, "p^{}", e / 2),
            NormValue::Pow(e) => write!(f, "p^{e}/2"),
        }
    }
}

impl FromStr for NormValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("", format!("bad norm value `{s}`"));
        if s == "0" {
            return Ok(NormValue::Zero);
        }
        let body = s.strip_prefix("p^").ok_or_else(bad)?;
        match body.split_once('/') {
            Some((n, "2")) => {
                let e: i64 = n.parse().map_err(|_| bad())?;
                Ok(NormValue::Pow(e))
            }
            Some(_) => Err(bad()),
            None => {
                let k: i64 = body.parse().map_err(|_| bad())?;
                Ok(NormValue::Pow(2 * k))
            }
        }
    }
}
