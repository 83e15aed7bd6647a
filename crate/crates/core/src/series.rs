//! Truncated formal power series over the rationals.
//!
//! A [`Series`] stores the coefficients `c_0..=c_N` together with the
//! truncation order `N`. Binary operations require equal orders; use
//! [`align`] to re-truncate two series to the smaller order first. No
//! operation ever produces coefficients beyond what its inputs determine.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{format_scalar, int, parse_scalar, Scalar};

/// Series with at least this fraction of zero coefficients are multiplied
/// through the support-based kernel.
const SPARSE_ZERO_FRACTION: (usize, usize) = (9, 10);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Scalar>,
}

impl Series {
    /// Builds a series of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(Series { coeffs })
    }

    /// Builds a series of the given order from leading coefficients,
    /// padding with zeros. Extra coefficients beyond `order` are an error.
    pub fn from_prefix(prefix: Vec<Scalar>, order: usize) -> Result<Self> {
        if prefix.len() > order + 1 {
            return Err(Error::Domain(format!(
                "{} coefficients do not fit in order {order}",
                prefix.len()
            )));
        }
        let mut coeffs = prefix;
        coeffs.resize(order + 1, Scalar::zero());
        Ok(Series { coeffs })
    }

    /// Integer-coefficient convenience constructor, zero padded to `order`.
    pub fn from_ints(prefix: &[i64], order: usize) -> Self {
        Self::from_prefix(prefix.iter().map(|&v| int(v)).collect(), order)
            .expect("prefix longer than order")
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![Scalar::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Scalar::one(), order)
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^n`. Panics if `n` exceeds the truncation order.
    pub fn coeff(&self, n: usize) -> &Scalar {
        &self.coeffs[n]
    }

    pub fn get(&self, n: usize) -> Option<&Scalar> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Index of the last nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_sparse(&self) -> bool {
        let zeros = self.coeffs.len() - self.nonzero_count();
        zeros * SPARSE_ZERO_FRACTION.1 >= self.coeffs.len() * SPARSE_ZERO_FRACTION.0
    }

    pub fn truncated(&self, order: usize) -> Result<Series> {
        if order > self.order() {
            return Err(Error::Usage(format!(
                "cannot extend a series of order {} to order {order}",
                self.order()
            )));
        }
        Ok(Series {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_order(&self, other: &Series) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        if self.is_sparse() || other.is_sparse() {
            Ok(self.mul_sparse(other))
        } else {
            Ok(self.mul_dense(other))
        }
    }

    pub(crate) fn mul_dense(&self, other: &Series) -> Series {
        let order = self.order();
        let coeffs = (0..=order)
            .map(|n| {
                let mut acc = Scalar::zero();
                for k in 0..=n {
                    let (a, b) = (&self.coeffs[k], &other.coeffs[n - k]);
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect();
        Series { coeffs }
    }

    pub(crate) fn mul_sparse(&self, other: &Series) -> Series {
        SparseSeries::from_dense(self)
            .mul(&SparseSeries::from_dense(other))
            .expect("orders already checked")
            .to_dense()
    }

    /// `self^m` by binary powering; `self^0 = 1`.
    pub fn pow(&self, m: u32) -> Series {
        let mut result = Series::one(self.order());
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same order");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same order");
            }
        }
        result
    }

    /// Drops the first `k` coefficients, i.e. divides by `z^k`. The known
    /// order shrinks by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Series> {
        if k > self.order() {
            return Err(Error::Usage(format!(
                "cannot shift a series of order {} down by {k}",
                self.order()
            )));
        }
        Series::new(self.coeffs[k..].to_vec())
    }

    /// Solves `divisor * X = self` through the common order.
    ///
    /// Both inputs are scaled by `1 / divisor_0` and `X` is built by the
    /// recursion `X_n = D_n - sum_{j<n} C_{n-j} X_j`.
    pub fn divide(&self, divisor: &Series) -> Result<Series> {
        self.check_order(divisor)?;
        let c0 = divisor.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotInvertible(
                "divisor has zero constant term; cancel leading zeros first".into(),
            ));
        }
        let inv = c0.recip();
        let c: Vec<Scalar> = divisor.coeffs.iter().map(|v| v * &inv).collect();
        let c_support: Vec<usize> = (1..c.len()).filter(|&i| !c[i].is_zero()).collect();
        let mut x: Vec<Scalar> = Vec::with_capacity(c.len());
        for n in 0..=self.order() {
            let mut acc = &self.coeffs[n] * &inv;
            for &i in c_support.iter().take_while(|&&i| i <= n) {
                let xj = &x[n - i];
                if !xj.is_zero() {
                    acc -= &c[i] * xj;
                }
            }
            x.push(acc);
        }
        Ok(Series { coeffs: x })
    }
}

/// Re-truncates both series to the smaller of their orders.
pub fn align(a: &Series, b: &Series) -> (Series, Series) {
    let order = a.order().min(b.order());
    (
        a.truncated(order).expect("min order"),
        b.truncated(order).expect("min order"),
    )
}

/// Cancels a common power of `z` from `dividend` and `divisor` so that the
/// divisor gets a nonzero constant term.
///
/// Returns the shifted `(dividend, divisor)`. Fails when the divisor vanishes
/// to a higher order than the dividend, since no power series quotient
/// exists then.
pub fn cancel_common_valuation(dividend: &Series, divisor: &Series) -> Result<(Series, Series)> {
    let (d, c) = align(dividend, divisor);
    let vc = c
        .valuation()
        .ok_or_else(|| Error::NotInvertible("divisor is zero through its order".into()))?;
    match d.valuation() {
        Some(vd) if vd < vc => Err(Error::NotInvertible(format!(
            "divisor valuation {vc} exceeds dividend valuation {vd}; no power series quotient"
        ))),
        _ => Ok((d.shift_down(vc)?, c.shift_down(vc)?)),
    }
}

/// Support-keyed representation for series that are mostly zero, such as
/// the gap series `sum z^(2^k)` and its powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSeries {
    order: usize,
    terms: BTreeMap<usize, Scalar>,
}

impl SparseSeries {
    pub fn new(order: usize) -> Self {
        SparseSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::new(order);
        s.set(0, Scalar::one());
        s
    }

    pub fn from_dense(series: &Series) -> Self {
        let terms = series
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        SparseSeries {
            order: series.order(),
            terms,
        }
    }

    pub fn to_dense(&self) -> Series {
        let mut coeffs = vec![Scalar::zero(); self.order + 1];
        for (&i, c) in &self.terms {
            coeffs[i] = c.clone();
        }
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Sets a coefficient; zero values remove the entry. Panics past the order.
    pub fn set(&mut self, n: usize, value: Scalar) {
        assert!(n <= self.order, "index {n} beyond order {}", self.order);
        if value.is_zero() {
            self.terms.remove(&n);
        } else {
            self.terms.insert(n, value);
        }
    }

    pub fn coeff(&self, n: usize) -> Scalar {
        assert!(n <= self.order, "index {n} beyond order {}", self.order);
        self.terms.get(&n).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn nonzero_count(&self) -> usize {
        self.terms.len()
    }

    pub fn truncated(&self, order: usize) -> Result<SparseSeries> {
        if order > self.order {
            return Err(Error::Usage(format!(
                "cannot extend a series of order {} to order {order}",
                self.order
            )));
        }
        Ok(SparseSeries {
            order,
            terms: self
                .terms
                .range(..=order)
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        })
    }

    pub fn mul(&self, other: &SparseSeries) -> Result<SparseSeries> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        let mut terms: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (&i, a) in &self.terms {
            for (&j, b) in other.terms.range(..=self.order - i) {
                *terms.entry(i + j).or_insert_with(Scalar::zero) += a * b;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(SparseSeries {
            order: self.order,
            terms,
        })
    }

    /// Successive powers `self^0, self^1, ..., self^max`.
    pub fn powers(&self, max: u32) -> Vec<SparseSeries> {
        let mut out = vec![SparseSeries::one(self.order)];
        for _ in 0..max {
            let next = out.last().unwrap().mul(self).expect("same order");
            out.push(next);
        }
        out
    }
}

/// Polynomial `A(t) = sum_j A_j t^j` whose coefficients are series of one
/// common truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPoly {
    coeffs: Vec<Series>,
}

impl SeriesPoly {
    pub fn new(coeffs: Vec<Series>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Domain("a polynomial needs at least one coefficient".into()))?;
        let order = first.order();
        if let Some(bad) = coeffs.iter().find(|s| s.order() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: bad.order(),
            });
        }
        Ok(SeriesPoly { coeffs })
    }

    /// `t^m` with constant coefficient 1.
    pub fn monomial(m: usize, order: usize) -> Self {
        let mut coeffs = vec![Series::zero(order); m + 1];
        coeffs[m] = Series::one(order);
        SeriesPoly { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        SeriesPoly {
            coeffs: vec![Series::zero(order)],
        }
    }

    /// Stored length minus one; trailing zero coefficients still count.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn order(&self) -> usize {
        self.coeffs[0].order()
    }

    pub fn coeff(&self, j: usize) -> &Series {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Series::is_zero)
    }

    pub fn truncated(&self, order: usize) -> Result<SeriesPoly> {
        Ok(SeriesPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|s| s.truncated(order))
                .collect::<Result<_>>()?,
        })
    }

    /// `A(X)`, truncated at the smaller of the two orders.
    pub fn eval(&self, x: &Series) -> Series {
        let order = self.order().min(x.order());
        let x = x.truncated(order).expect("min order");
        let mut acc = Series::zero(order);
        // Horner
        for a in self.coeffs.iter().rev() {
            let a = a.truncated(order).expect("min order");
            acc = acc
                .mul(&x)
                .expect("same order")
                .add(&a)
                .expect("same order");
        }
        acc
    }

    /// Formal derivative `sum_j j A_j t^(j-1)`; a degree-0 input yields the
    /// zero polynomial.
    pub fn derivative(&self) -> SeriesPoly {
        if self.coeffs.len() == 1 {
            return SeriesPoly::zero(self.order());
        }
        SeriesPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, a)| a.scale(&int(j as i64)))
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            kind: Some("series".into()),
            order: self.order(),
            coeffs: self.coeffs.iter().map(format_scalar).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SeriesRepr::deserialize(d)?;
        if let Some(kind) = &repr.kind {
            if kind != "series" {
                return Err(D::Error::custom(format!(
                    "expected kind \"series\", got {kind:?}"
                )));
            }
        }
        if repr.coeffs.len() != repr.order + 1 {
            return Err(D::Error::custom(format!(
                "series of order {} needs exactly {} coefficients, got {}",
                repr.order,
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| parse_scalar(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Series::new(coeffs).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    coeffs: Vec<Series>,
}

impl Serialize for SeriesPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            kind: Some("poly".into()),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeriesPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PolyRepr::deserialize(d)?;
        if let Some(kind) = &repr.kind {
            if kind != "poly" {
                return Err(D::Error::custom(format!(
                    "expected kind \"poly\", got {kind:?}"
                )));
            }
        }
        SeriesPoly::new(repr.coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;

    fn s(prefix: &[i64], order: usize) -> Series {
        Series::from_ints(prefix, order)
    }

    #[test]
    fn add_examples() {
        assert_eq!(s(&[1, 1], 3).add(&s(&[1, -1], 3)).unwrap(), s(&[2], 3));
        let x = s(&[3, 0, -2, 7], 3);
        assert_eq!(Series::zero(3).add(&x).unwrap(), x);
        let a = Series::from_prefix(vec![ratio(1, 2), int(1)], 2).unwrap();
        let b = Series::from_prefix(vec![ratio(1, 3)], 2).unwrap();
        let want = Series::from_prefix(vec![ratio(5, 6), int(1)], 2).unwrap();
        assert_eq!(a.add(&b).unwrap(), want);
    }

    #[test]
    fn order_mismatch_is_usage_error() {
        let err = s(&[1], 2).add(&s(&[1], 3)).unwrap_err();
        assert!(matches!(err, Error::OrderMismatch { left: 2, right: 3 }));
        assert!(err.is_usage());
        let (a, b) = align(&s(&[1, 2, 3], 2), &s(&[1, 1, 1, 1], 3));
        assert_eq!(a.add(&b).unwrap(), s(&[2, 3, 4], 2));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(&[1, 1], 4).mul(&s(&[1, 1], 4)).unwrap(), s(&[1, 2, 1], 4));
        let x = s(&[1, 2, 3], 4);
        assert_eq!(x.mul(&x).unwrap(), s(&[1, 4, 10, 12, 9], 4));
        // gap series truncated at 6: indices 1, 2, 4
        let l = s(&[0, 1, 1, 0, 1], 6);
        assert_eq!(l.mul(&l).unwrap().coeff(6), &int(2));
    }

    #[test]
    fn pow_examples() {
        let x = s(&[1, 1, 2], 6);
        assert_eq!(x.pow(0), Series::one(6));
        assert_eq!(x.pow(1), x);
        assert_eq!(x.pow(3).coeff(4), &int(18));
    }

    #[test]
    fn divide_examples() {
        let c = s(&[1, 1, 1], 5);
        assert_eq!(c.divide(&c).unwrap(), Series::one(5));
        let geo = s(&[1], 6).divide(&s(&[1, -1], 6)).unwrap();
        assert_eq!(geo, s(&[1; 7], 6));
        let q = s(&[1, 1], 3).divide(&s(&[1, 1, 1], 3)).unwrap();
        assert_eq!(q, s(&[1, 0, -1, 1], 3));
        assert_eq!(q.mul(&s(&[1, 1, 1], 3)).unwrap(), s(&[1, 1], 3));
    }

    #[test]
    fn divide_normalizes_leading_coefficient() {
        let c = s(&[2, 2], 4);
        let d = s(&[4], 4);
        let x = d.divide(&c).unwrap();
        assert_eq!(x.mul(&c).unwrap(), d);
    }

    #[test]
    fn divide_by_zero_constant_term() {
        let err = s(&[1], 3).divide(&s(&[0, 1], 3)).unwrap_err();
        assert!(matches!(err, Error::NotInvertible(_)));
        // z + z^2 = z (1 + z)
        let (d, c) = cancel_common_valuation(&s(&[0, 1, 1], 4), &s(&[0, 1], 4)).unwrap();
        assert_eq!(d.divide(&c).unwrap(), s(&[1, 1], 3));
        assert!(cancel_common_valuation(&s(&[1], 4), &s(&[0, 1], 4)).is_err());
        assert!(cancel_common_valuation(&s(&[1], 4), &Series::zero(4)).is_err());
    }

    #[test]
    fn poly_eval_and_derivative() {
        let x = s(&[1, 1], 3);
        assert_eq!(SeriesPoly::monomial(2, 3).eval(&x), s(&[1, 2, 1], 3));
        assert_eq!(SeriesPoly::zero(3).eval(&x), Series::zero(3));

        let a = SeriesPoly::new(vec![s(&[3], 3), s(&[0, 1], 3), s(&[1, 1], 3)]).unwrap();
        assert_eq!(a.eval(&x), s(&[4, 4, 4, 1], 3));

        let da = a.derivative();
        assert_eq!(da.degree(), 1);
        assert_eq!(da.coeffs(), &[s(&[0, 1], 3), s(&[2, 2], 3)]);
        assert_eq!(
            SeriesPoly::monomial(2, 3).derivative().coeffs(),
            &[Series::zero(3), s(&[2], 3)]
        );
        let constant = SeriesPoly::new(vec![s(&[5, 1], 3)]).unwrap();
        assert!(constant.derivative().is_zero());
        assert_eq!(constant.derivative().degree(), 0);
    }

    #[test]
    fn poly_rejects_mixed_orders() {
        assert!(SeriesPoly::new(vec![s(&[1], 2), s(&[1], 3)]).is_err());
        assert!(SeriesPoly::new(vec![]).is_err());
    }

    #[test]
    fn sparse_detection_and_kernel() {
        let mut coeffs = vec![0i64; 40];
        coeffs[1] = 1;
        coeffs[2] = 1;
        coeffs[32] = 1;
        let l = s(&coeffs, 39);
        assert!(l.is_sparse());
        assert!(!s(&[1, 2, 3], 3).is_sparse());
        assert_eq!(l.mul_sparse(&l), l.mul_dense(&l));
    }

    #[test]
    fn series_json() {
        let x = Series::from_prefix(vec![ratio(1, 2), int(-3)], 2).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"series","order":2,"coeffs":["1/2","-3","0"]}"#
        );
        assert_eq!(serde_json::from_str::<Series>(&text).unwrap(), x);
        let unnormalized: Series =
            serde_json::from_str(r#"{"order":1,"coeffs":["2/4","6/3"]}"#).unwrap();
        assert_eq!(unnormalized.coeffs(), &[ratio(1, 2), int(2)]);
        assert!(serde_json::from_str::<Series>(r#"{"order":2,"coeffs":["1"]}"#).is_err());
        assert!(
            serde_json::from_str::<Series>(r#"{"kind":"poly","order":0,"coeffs":["1"]}"#).is_err()
        );

        let a = SeriesPoly::new(vec![s(&[3], 1), s(&[0, 1], 1)]).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.starts_with(r#"{"kind":"poly","coeffs":[{"kind":"series""#));
        assert_eq!(serde_json::from_str::<SeriesPoly>(&text).unwrap(), a);
    }
}
