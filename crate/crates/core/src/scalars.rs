//! Exact rationals, the κ admissibility gate, and the complex scalars used
//! for evaluation at torus points.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator after each operation.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tableaux::Partition;

pub type Rational = num_rational::BigRational;

/// Complex double used only by the numeric evaluation paths.
pub type Complex = num_complex::Complex64;

/// `p/q` as a rational. Panics if `q == 0`.
pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Serializes as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    match r.to_f64() {
        Some(v) => v,
        // very large numerators/denominators: scale down through the integer parts
        None => {
            let n = r.numer().to_f64().unwrap_or(f64::NAN);
            let d = r.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn complex_pair(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

/// serde adapter: a rational as its `"p/q"` string.
pub mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// An admissible value of κ, validated against the shape it will be used with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaParam {
    #[serde(with = "rational_str")]
    value: Rational,
    shape: Partition,
    psd_range: bool,
}

impl KappaParam {
    /// Validates `value` against the pole set
    /// `{-m/c : 1 <= c <= τ₁-1} ∪ {m/c : 1 <= c <= ℓ(τ)-1}` (m ≥ 1).
    pub fn new(value: Rational, shape: &Partition) -> Result<Self> {
        if let Some((numer, denom)) = pole_witness(&value, shape) {
            return Err(Error::PoleExcluded {
                kappa: value,
                numer,
                denom,
            });
        }
        Ok(Self::unchecked(value, shape))
    }

    /// Skips the pole gate. Only for probing the failure modes of the recurrence.
    pub fn unchecked(value: Rational, shape: &Partition) -> Self {
        let h = int(shape.max_hook() as i64);
        let psd_range = value.abs() * h < Rational::one();
        KappaParam {
            value,
            shape: shape.clone(),
            psd_range,
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Whether `-1/h_τ < κ < 1/h_τ`, the window in which the form is positive.
    pub fn psd_range(&self) -> bool {
        self.psd_range
    }
}

fn pole_witness(value: &Rational, shape: &Partition) -> Option<(i64, i64)> {
    if value.is_zero() {
        return None;
    }
    let den = value.denom().to_i64()?;
    let num = value.numer().to_i64()?;
    // value = ±m/c forces c to be a multiple of the reduced denominator
    let bound = if value.is_negative() {
        shape.parts()[0] as i64 - 1
    } else {
        shape.len() as i64 - 1
    };
    (den <= bound).then_some((num, den))
}

pub fn make_kappa(p: i64, d: i64, shape: &Partition) -> Result<KappaParam> {
    if d == 0 {
        return Err(Error::Parse("kappa denominator is zero".into()));
    }
    KappaParam::new(q(p, d), shape)
}

/// `1/(h_τ+1)`: outside the pole set and inside the positivity window.
pub fn default_kappa(shape: &Partition) -> KappaParam {
    KappaParam::new(q(1, shape.max_hook() as i64 + 1), shape).expect("1/(h+1) is never a pole")
}
