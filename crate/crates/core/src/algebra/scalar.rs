//! Scalar fields used throughout the crate.
//!
//! Every algorithm is generic over [`Scalar`], which is implemented for
//! exact arbitrary-precision rationals ([`Rational`]) and for `f64`. Mixing
//! the two inside one computation is impossible at the type level; the
//! runtime-tagged [`Value`] is what crosses I/O boundaries, and its
//! arithmetic rejects mixed operands.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Default relative tolerance for float comparisons.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Builds the rational `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Which numeric mode a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

/// Field operations shared by the exact and floating-point scalar types.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Exact conversion from a float; `None` for rationals unless the float is
    /// finite (every finite binary64 value is a dyadic rational).
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn to_value(&self) -> Value;

    /// Exact zero test. Floats compare against literal `0.0`.
    fn is_zero(&self) -> bool;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    /// `true` when the value should be treated as zero in elimination. Exact
    /// for rationals; for floats, `|x| <= eps * scale`.
    fn is_negligible(&self, scale: f64) -> bool;
    fn is_negative(&self) -> bool;

    /// Equality up to `rel_tol` (relative, with an absolute floor of
    /// `rel_tol` near zero). Exact equality for rationals.
    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool;

    fn exp(&self) -> Result<Self>;
    fn sin(&self) -> Result<Self>;
    fn cos(&self) -> Result<Self>;
    fn ln(&self) -> Result<Self>;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Self::one() / self.clone())
        }
    }

    fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.clone() / other.clone())
        }
    }

    fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            sq = sq.clone() * sq;
            e >>= 1;
        }
        Ok(acc)
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        int(n)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_value(&self) -> Value {
        Value::Exact(self.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn approx_eq(&self, other: &Self, _rel_tol: f64) -> bool {
        self == other
    }
    fn exp(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Ok(One::one())
        } else {
            Err(Error::Transcendental("exp"))
        }
    }
    fn sin(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Ok(Zero::zero())
        } else {
            Err(Error::Transcendental("sin"))
        }
    }
    fn cos(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Ok(One::one())
        } else {
            Err(Error::Transcendental("cos"))
        }
    }
    fn ln(&self) -> Result<Self> {
        if One::is_one(self) {
            Ok(Zero::zero())
        } else if !Signed::is_positive(self) {
            Err(Error::NonSmooth("ln of a non-positive argument"))
        } else {
            Err(Error::Transcendental("ln"))
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_value(&self) -> Value {
        Value::Float(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-12 * scale.max(1.0)
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let diff = (self - other).abs();
        diff <= rel_tol * self.abs().max(other.abs()).max(1.0)
    }
    fn exp(&self) -> Result<Self> {
        Ok(f64::exp(*self))
    }
    fn sin(&self) -> Result<Self> {
        Ok(f64::sin(*self))
    }
    fn cos(&self) -> Result<Self> {
        Ok(f64::cos(*self))
    }
    fn ln(&self) -> Result<Self> {
        if *self <= 0.0 {
            Err(Error::NonSmooth("ln of a non-positive argument"))
        } else {
            Ok(f64::ln(*self))
        }
    }
}

/// A mode-tagged scalar as it appears in JSON documents and reports.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn mode(&self) -> Mode {
        match self {
            Value::Exact(_) => Mode::Rational,
            Value::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => Scalar::to_f64(r),
            Value::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(r) => Zero::is_zero(r),
            Value::Float(x) => *x == 0.0,
        }
    }

    /// Converts into scalar type `S`. An exact value converts into either
    /// mode; a float only converts into float mode.
    pub fn to_scalar<S: Scalar>(&self) -> Result<S> {
        match (self, S::MODE) {
            (Value::Exact(r), _) => Ok(S::from_rational(r)),
            (Value::Float(x), Mode::Float) => Ok(S::from_f64(*x).expect("float mode")),
            (Value::Float(_), Mode::Rational) => Err(Error::MixedMode),
        }
    }

    fn combine(
        &self,
        other: &Value,
        exact: impl Fn(&Rational, &Rational) -> Result<Rational>,
        float: impl Fn(f64, f64) -> f64,
    ) -> Result<Value> {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => exact(a, b).map(Value::Exact),
            (Value::Float(a), Value::Float(b)) => Ok(Value::Float(float(*a, *b))),
            _ => Err(Error::MixedMode),
        }
    }

    pub fn try_add(&self, other: &Value) -> Result<Value> {
        self.combine(other, |a, b| Ok(a + b), |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Value) -> Result<Value> {
        self.combine(other, |a, b| Ok(a - b), |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Value) -> Result<Value> {
        self.combine(other, |a, b| Ok(a * b), |a, b| a * b)
    }

    pub fn try_div(&self, other: &Value) -> Result<Value> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.combine(other, |a, b| Ok(a / b), |a, b| a / b)
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueRepr {
    Exact { num: String, den: String },
    Float(f64),
}

impl Serialize for Value {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        match self {
            Value::Exact(r) => ValueRepr::Exact {
                num: r.numer().to_string(),
                den: r.denom().to_string(),
            },
            Value::Float(x) => ValueRepr::Float(*x),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ValueRepr::deserialize(d)? {
            ValueRepr::Float(x) => Ok(Value::Float(x)),
            ValueRepr::Exact { num, den } => {
                let n: BigInt = num.trim().parse().map_err(serde::de::Error::custom)?;
                let d: BigInt = den.trim().parse().map_err(serde::de::Error::custom)?;
                if Zero::is_zero(&d) {
                    return Err(serde::de::Error::custom("zero denominator"));
                }
                Ok(Value::Exact(Rational::new(n, d)))
            }
        }
    }
}

/// Parses `"3"`, `"-1/2"` or `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if Zero::is_zero(&d) {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}
