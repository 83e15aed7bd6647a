//! Exact rational scalars, absolute values on the rationals and rigorous
//! enclosures of `log2 |x|`.
//!
//! Nothing in here touches floating point. Magnitudes such as `2^(n!)` are far
//! outside the range of any float, so every comparison is either an exact
//! rational comparison or an integer bit-length comparison.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient field element. Always kept in lowest terms with a positive
/// denominator; zero is `0/1`.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_biguint(v: BigUint) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Parses `"p"`, `"-p"` or `"p/q"` with `q > 0`. Input need not be in lowest
/// terms; the result always is.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal {text:?}"));
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    match text.split_once('/') {
        None => Ok(Scalar::from_integer(parse_int(text)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            if den.starts_with(['-', '+']) {
                return Err(bad());
            }
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Scalar::new(num, den))
        }
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter for [`Scalar`] fields, using the rational-string form.
pub mod scalar_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(
            x: &Option<Scalar>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            x.as_ref().map(format_scalar).serialize(s)
        }
    }
}

/// A prime, checked by trial division at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::Domain(format!("{p} is not prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Absolute value on the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsValue {
    Archimedean,
    Padic(Prime),
}

impl AbsValue {
    pub fn padic(p: u64) -> Result<Self> {
        Prime::new(p).map(AbsValue::Padic)
    }

    pub fn is_nonarchimedean(&self) -> bool {
        matches!(self, AbsValue::Padic(_))
    }

    pub fn apply(&self, x: &Scalar) -> Scalar {
        match self {
            AbsValue::Archimedean => abs_archimedean(x),
            AbsValue::Padic(p) => abs_padic(x, *p),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum AbsValueRepr {
    Archimedean,
    Padic { p: u64 },
}

impl Serialize for AbsValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AbsValue::Archimedean => AbsValueRepr::Archimedean,
            AbsValue::Padic(p) => AbsValueRepr::Padic { p: p.get() },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbsValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match AbsValueRepr::deserialize(d)? {
            AbsValueRepr::Archimedean => Ok(AbsValue::Archimedean),
            AbsValueRepr::Padic { p } => AbsValue::padic(p).map_err(serde::de::Error::custom),
        }
    }
}

pub fn abs_archimedean(x: &Scalar) -> Scalar {
    x.abs()
}

/// `v_p(x)` by repeated exact division; `None` for `x = 0`.
pub fn padic_valuation(x: &Scalar, p: Prime) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p.get());
    let count = |v: &BigInt| -> i64 {
        let mut v = v.abs();
        let mut k = 0;
        loop {
            let (q, r) = v.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            v = q;
            k += 1;
        }
    };
    Some(count(x.numer()) - count(x.denom()))
}

/// `|x|_p = p^(-v_p(x))`, with `|0|_p = 0`.
pub fn abs_padic(x: &Scalar, p: Prime) -> Scalar {
    match padic_valuation(x, p) {
        None => Scalar::zero(),
        Some(v) => {
            let base = Scalar::from_integer(BigInt::from(p.get()));
            let pw = num_traits::pow(base, v.unsigned_abs() as usize);
            if v > 0 {
                pw.recip()
            } else {
                pw
            }
        }
    }
}

/// Rigorous enclosure of `log2` of a nonnegative magnitude.
///
/// `NegInfinity` stands for magnitude exactly zero. Bounds are exact
/// rationals so that closed-form growth laws such as `log2 |X_n| = n!` are
/// represented with zero width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogMagInterval {
    NegInfinity,
    Bounds { lo: Scalar, hi: Scalar },
}

impl LogMagInterval {
    pub fn exact(v: Scalar) -> Self {
        LogMagInterval::Bounds {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!(
                "log interval lower bound {} exceeds upper bound {}",
                format_scalar(&lo),
                format_scalar(&hi)
            )));
        }
        Ok(LogMagInterval::Bounds { lo, hi })
    }

    pub fn zero() -> Self {
        Self::exact(Scalar::zero())
    }

    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, LogMagInterval::NegInfinity)
    }

    pub fn lo(&self) -> Option<&Scalar> {
        match self {
            LogMagInterval::NegInfinity => None,
            LogMagInterval::Bounds { lo, .. } => Some(lo),
        }
    }

    pub fn hi(&self) -> Option<&Scalar> {
        match self {
            LogMagInterval::NegInfinity => None,
            LogMagInterval::Bounds { hi, .. } => Some(hi),
        }
    }

    pub fn width(&self) -> Option<Scalar> {
        match self {
            LogMagInterval::NegInfinity => None,
            LogMagInterval::Bounds { lo, hi } => Some(hi - lo),
        }
    }

    /// Enclosure of `log2 (a * b)`.
    pub fn mul_mag(&self, other: &Self) -> Self {
        match (self, other) {
            (LogMagInterval::Bounds { lo: a, hi: b }, LogMagInterval::Bounds { lo: c, hi: d }) => {
                LogMagInterval::Bounds {
                    lo: a + c,
                    hi: b + d,
                }
            }
            _ => LogMagInterval::NegInfinity,
        }
    }

    /// Enclosure of `log2 (a^m)`; `a^0 = 1` even for `a = 0`.
    pub fn pow_mag(&self, m: u32) -> Self {
        if m == 0 {
            return Self::zero();
        }
        match self {
            LogMagInterval::NegInfinity => LogMagInterval::NegInfinity,
            LogMagInterval::Bounds { lo, hi } => {
                let m = int(i64::from(m));
                LogMagInterval::Bounds {
                    lo: lo * &m,
                    hi: hi * &m,
                }
            }
        }
    }

    /// Whether `2^v` lies in the enclosure.
    pub fn contains_log(&self, v: &Scalar) -> bool {
        match self {
            LogMagInterval::NegInfinity => false,
            LogMagInterval::Bounds { lo, hi } => lo <= v && v <= hi,
        }
    }
}

impl Serialize for LogMagInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LogMagInterval::NegInfinity => ["-inf", "-inf"].serialize(s),
            LogMagInterval::Bounds { lo, hi } => {
                [format_scalar(lo), format_scalar(hi)].serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for LogMagInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        match (lo.as_str(), hi.as_str()) {
            ("-inf", "-inf") => Ok(LogMagInterval::NegInfinity),
            ("-inf", _) | (_, "-inf") => Err(D::Error::custom(
                "-inf must appear in both bounds (magnitude zero)",
            )),
            _ => {
                let lo = parse_scalar(&lo).map_err(D::Error::custom)?;
                let hi = parse_scalar(&hi).map_err(D::Error::custom)?;
                LogMagInterval::new(lo, hi).map_err(D::Error::custom)
            }
        }
    }
}

/// Enclosure `[lo, hi]` of `log2 mag` from integer bit lengths, `hi - lo <= 2`.
///
/// For `mag = a/b`: `lo = bits(a) - bits(b) - 1`, `hi = bits(a) - bits(b) + 1`,
/// collapsed to the exact value when `a` and `b` are both powers of two.
pub fn log2_interval(mag: &Scalar) -> Result<LogMagInterval> {
    if mag.is_negative() {
        return Err(Error::Domain(format!(
            "log2 of negative magnitude {}",
            format_scalar(mag)
        )));
    }
    if mag.is_zero() {
        return Ok(LogMagInterval::NegInfinity);
    }
    let a = mag.numer().magnitude();
    let b = mag.denom().magnitude();
    let diff = bit_len(a) - bit_len(b);
    if is_power_of_two(a) && is_power_of_two(b) {
        return Ok(LogMagInterval::exact(int(diff)));
    }
    Ok(LogMagInterval::Bounds {
        lo: int(diff - 1),
        hi: int(diff + 1),
    })
}

pub fn log2_interval_uint(v: &BigUint) -> LogMagInterval {
    log2_interval(&from_biguint(v.clone())).expect("nonnegative")
}

fn bit_len(v: &BigUint) -> i64 {
    v.bits() as i64
}

fn is_power_of_two(v: &BigUint) -> bool {
    !v.is_zero() && v.count_ones() == 1
}

/// `2^e <= x` for rational `e` and positive rational `x`, decided exactly
/// by comparing `2^p` with `x^q` where `e = p/q`.
pub fn pow2_le(e: &Scalar, x: &Scalar) -> bool {
    cmp_pow2(e, x) != Ordering::Greater
}

/// `x <= 2^e`, decided exactly.
pub fn le_pow2(x: &Scalar, e: &Scalar) -> bool {
    cmp_pow2(e, x) != Ordering::Less
}

/// Compares `2^e` with `x > 0`.
fn cmp_pow2(e: &Scalar, x: &Scalar) -> Ordering {
    assert!(x.is_positive(), "cmp_pow2 requires a positive magnitude");
    let q = e
        .denom()
        .to_usize()
        .expect("exponent denominator fits in usize");
    let xq = num_traits::pow(x.clone(), q);
    let p = e.numer();
    let two = BigUint::from(2u32);
    let shift = p.magnitude().to_usize().expect("exponent fits in usize");
    let pow = Scalar::from_integer(BigInt::from(two.pow(shift as u32)));
    let lhs = if p.is_negative() { pow.recip() } else { pow };
    lhs.cmp(&xq)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}
