//! Max-plus scalars and tuples.
//!
//! `MaxPlus::Bottom` is the semiring zero (-inf): neutral for ⊕ = max and
//! absorbing for ⊗ = +. `MaxPlus::Finite(0)` is the semiring one. The
//! variant order makes the derived `Ord` put `Bottom` below every finite
//! value, so ⊕ is simply `max`.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MaxPlus<S> {
    #[default]
    Bottom,
    Finite(S),
}

impl<S: Scalar> MaxPlus<S> {
    pub fn zero() -> Self {
        MaxPlus::Bottom
    }

    pub fn one() -> Self {
        MaxPlus::Finite(S::zero())
    }

    pub fn finite(v: S) -> Self {
        MaxPlus::Finite(v)
    }

    pub fn int(v: i64) -> Self {
        MaxPlus::Finite(S::int(v))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, MaxPlus::Bottom)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_bottom()
    }

    pub fn value(&self) -> Option<&S> {
        match self {
            MaxPlus::Bottom => None,
            MaxPlus::Finite(v) => Some(v),
        }
    }

    pub fn into_value(self) -> Option<S> {
        match self {
            MaxPlus::Bottom => None,
            MaxPlus::Finite(v) => Some(v),
        }
    }

    /// ⊕
    pub fn plus(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// ⊗
    pub fn times(&self, other: &Self) -> Self {
        match (self, other) {
            (MaxPlus::Finite(a), MaxPlus::Finite(b)) => MaxPlus::Finite(a.clone() + b.clone()),
            _ => MaxPlus::Bottom,
        }
    }

    /// ⊗ with a finite scalar.
    pub fn times_scalar(&self, s: &S) -> Self {
        match self {
            MaxPlus::Finite(a) => MaxPlus::Finite(a.clone() + s.clone()),
            MaxPlus::Bottom => MaxPlus::Bottom,
        }
    }

    /// Accumulates `other` into `self` with ⊕.
    pub fn plus_assign(&mut self, other: Self) {
        if other > *self {
            *self = other;
        }
    }
}

impl<S: Scalar> From<S> for MaxPlus<S> {
    fn from(v: S) -> Self {
        MaxPlus::Finite(v)
    }
}

impl<S: fmt::Display> fmt::Display for MaxPlus<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxPlus::Bottom => f.write_str("-inf"),
            MaxPlus::Finite(v) => write!(f, "{v}"),
        }
    }
}

pub fn w_plus<S: Scalar>(a: &MaxPlus<S>, b: &MaxPlus<S>) -> MaxPlus<S> {
    a.plus(b)
}

pub fn w_times<S: Scalar>(a: &MaxPlus<S>, b: &MaxPlus<S>) -> MaxPlus<S> {
    a.times(b)
}

/// Parses an exact rational from an integer (`-3`), a decimal literal
/// (`2.75`, converted exactly) or a fraction (`7/4`).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let err = || Error::InvalidWeight(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_int(num.trim()).ok_or_else(err)?;
        let den: BigInt = parse_int(den.trim()).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    let mut denom = BigInt::one();
    for _ in 0..frac_part.len() {
        denom *= 10;
    }
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for MaxPlus<BigRational> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "-inf" || t == "-∞" {
            return Ok(MaxPlus::Bottom);
        }
        parse_rational(t).map(MaxPlus::Finite)
    }
}

/// An element of the product semiring R_max^I, one coordinate per family
/// member. The length is fixed at construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MaxPlusTuple<S>(Vec<MaxPlus<S>>);

impl<S: Scalar> MaxPlusTuple<S> {
    pub fn new(coords: Vec<MaxPlus<S>>) -> Self {
        MaxPlusTuple(coords)
    }

    pub fn from_finite(coords: impl IntoIterator<Item = S>) -> Self {
        MaxPlusTuple(coords.into_iter().map(MaxPlus::Finite).collect())
    }

    pub fn bottom(len: usize) -> Self {
        MaxPlusTuple(vec![MaxPlus::Bottom; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[MaxPlus<S>] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &MaxPlus<S> {
        &self.0[i]
    }

    pub fn is_all_finite(&self) -> bool {
        self.0.iter().all(MaxPlus::is_finite)
    }

    pub fn has_finite(&self) -> bool {
        self.0.iter().any(MaxPlus::is_finite)
    }

    /// Coordinate-wise ⊗.
    pub fn times(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!("tuple lengths {} and {}", self.len(), other.len())));
        }
        Ok(MaxPlusTuple(self.0.iter().zip(&other.0).map(|(a, b)| a.times(b)).collect()))
    }

    /// Minimum over the finite coordinates.
    pub fn vmin(&self) -> Result<S> {
        self.0.iter().filter_map(MaxPlus::value).min().cloned().ok_or(Error::AllBottom)
    }

    /// Subtracts [`vmin`](Self::vmin) from every finite coordinate.
    pub fn vnorm(&self) -> Result<Self> {
        let m = self.vmin()?;
        Ok(MaxPlusTuple(
            self.0
                .iter()
                .map(|c| match c {
                    MaxPlus::Finite(v) => MaxPlus::Finite(v.clone() - m.clone()),
                    MaxPlus::Bottom => MaxPlus::Bottom,
                })
                .collect(),
        ))
    }

    pub fn into_inner(self) -> Vec<MaxPlus<S>> {
        self.0
    }
}

impl<S: fmt::Display> fmt::Display for MaxPlusTuple<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
