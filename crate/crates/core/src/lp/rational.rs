//! Exact rationals: arbitrary-precision fractions kept in lowest terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `p`, `p/q` or a finite decimal such as `0.35`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?} (expected p, p/q or a decimal)"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole.trim() {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = Rational::new(frac_num, scale);
        let whole = Rational::from_integer(whole);
        return Ok(if negative { whole - frac_part } else { whole + frac_part });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// `[numerator, denominator]`, each a JSON integer when it fits in `i64`.
pub fn to_json(r: &Rational) -> Value {
    let part = |b: &BigInt| match b.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(b.to_string()),
    };
    Value::Array(vec![part(r.numer()), part(r.denom())])
}

pub fn from_json(v: &Value) -> Result<Rational> {
    let bad = || Error::Parse(format!("expected [numerator, denominator], got {v}"));
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
    let part = |x: &Value| -> Result<BigInt> {
        match x {
            Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(bad),
            Value::String(s) => s.parse().map_err(|_| bad()),
            _ => Err(bad()),
        }
    };
    let (p, q) = (part(&arr[0])?, part(&arr[1])?);
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Decimal rendering for display only.
pub fn approx(r: &Rational) -> String {
    format!("{:.6}", r.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/5").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("6/10").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("0.35").unwrap(), rat(7, 20));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("22").unwrap(), int(22));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn json_pairs() {
        let v = to_json(&rat(-3, 6));
        assert_eq!(v.to_string(), "[-1,2]");
        assert_eq!(from_json(&v).unwrap(), rat(-1, 2));
    }
}
