//! Growth laws for `|X_n|`, margins of the fast-growth criteria, the
//! division bound check and a heuristic growth classifier.
//!
//! A growth criterion asks that some left-hand side be `o(|X_(n-lambda)|)`.
//! At finite `n` the best one can do is report the margin
//! `log2 LHS - log2 RHS` as a rigorous interval and look at its trend; the
//! verdicts produced here are explicitly empirical. Every quantity on that
//! path is an exact rational or an exact bit-length bound.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{
    factorial, format_scalar, from_biguint, int, log2_interval, log2_interval_uint, scalar_serde,
    AbsValue, LogMagInterval, Scalar,
};
use crate::series::Series;

/// Description of `n -> log2 |X_n|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthSpec {
    /// Explicit enclosures for `n = 0..len`.
    Table(Vec<LogMagInterval>),
    /// `log2 |X_n| = a n! + b n + c`.
    FactorialExponent { a: Scalar, b: Scalar, c: Scalar },
    /// `log2 |X_n| = n log2 r`.
    Geometric { log2_r: Scalar },
    /// Exact coefficients measured with the given absolute value.
    FromSeries { series: Series, abs: AbsValue },
}

impl GrowthSpec {
    /// Number of indices the spec covers, `None` when unbounded.
    pub fn domain_len(&self) -> Option<usize> {
        match self {
            GrowthSpec::Table(t) => Some(t.len()),
            GrowthSpec::FromSeries { series, .. } => Some(series.order() + 1),
            _ => None,
        }
    }

    fn abs_value(&self) -> Option<AbsValue> {
        match self {
            GrowthSpec::FromSeries { abs, .. } => Some(*abs),
            _ => None,
        }
    }
}

/// Rigorous enclosure of `log2 |X_n|`.
pub fn eval_log_abs(spec: &GrowthSpec, n: usize) -> Result<LogMagInterval> {
    let out_of_domain =
        |len: usize| Error::Domain(format!("index {n} outside growth spec domain 0..{len}"));
    match spec {
        GrowthSpec::Table(t) => t.get(n).cloned().ok_or_else(|| out_of_domain(t.len())),
        GrowthSpec::FactorialExponent { a, b, c } => {
            let nf = from_biguint(factorial(n as u64));
            Ok(LogMagInterval::exact(a * nf + b * int(n as i64) + c))
        }
        GrowthSpec::Geometric { log2_r } => Ok(LogMagInterval::exact(log2_r * int(n as i64))),
        GrowthSpec::FromSeries { series, abs } => {
            let x = series
                .get(n)
                .ok_or_else(|| out_of_domain(series.order() + 1))?;
            log2_interval(&abs.apply(x))
        }
    }
}

/// Enclosure of `log2 sum_l |X_l|` over `l <= n/2` (inclusive) or `l < n/2`.
///
/// Lower bound: the largest term. Upper bound: largest term times the term
/// count. An empty range gives `NegInfinity`.
pub fn sum_log_abs(spec: &GrowthSpec, n: usize, inclusive: bool) -> Result<LogMagInterval> {
    let logs = (0..half_range_len(n, inclusive))
        .map(|l| eval_log_abs(spec, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum_enclosure(&logs))
}

/// Number of indices `l` with `l <= n/2` (inclusive) or `l < n/2` (strict).
fn half_range_len(n: usize, inclusive: bool) -> usize {
    if inclusive {
        n / 2 + 1
    } else {
        n.div_ceil(2)
    }
}

fn sum_enclosure(logs: &[LogMagInterval]) -> LogMagInterval {
    let mut lo: Option<&Scalar> = None;
    let mut hi: Option<&Scalar> = None;
    for iv in logs {
        if let LogMagInterval::Bounds { lo: l, hi: h } = iv {
            lo = Some(lo.map_or(l, |cur| cur.max(l)));
            hi = Some(hi.map_or(h, |cur| cur.max(h)));
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            let count = log2_interval_uint(&BigUint::from(logs.len()));
            LogMagInterval::Bounds {
                lo: lo.clone(),
                hi: hi + count.hi().expect("count is positive"),
            }
        }
        _ => LogMagInterval::NegInfinity,
    }
}

/// Monotone positive bound `rho(n)` on the coefficients of the ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhoSpec {
    /// `n!`
    Factorial,
    /// `r^n` with `r >= 1`.
    Geometric { r: Scalar },
    /// `(n + 1)^degree`, shifted so that `rho(0) > 0`.
    Polynomial { degree: u32 },
    /// Explicit enclosures of `log2 rho(n)` for `n = 0..len`.
    Table(Vec<LogMagInterval>),
    /// `rho = 1`
    One,
}

impl RhoSpec {
    /// Enclosure of `log2 rho(n)`.
    pub fn log2(&self, n: usize) -> Result<LogMagInterval> {
        match self {
            RhoSpec::Factorial => Ok(log2_interval_uint(&factorial(n as u64))),
            RhoSpec::Geometric { r } => log2_interval(&num_traits::pow(r.clone(), n)),
            RhoSpec::Polynomial { degree } => {
                Ok(log2_interval_uint(&BigUint::from(n + 1).pow(*degree)))
            }
            RhoSpec::Table(t) => t.get(n).cloned().ok_or_else(|| {
                Error::Domain(format!("index {n} outside rho table domain 0..{}", t.len()))
            }),
            RhoSpec::One => Ok(LogMagInterval::zero()),
        }
    }

    /// Checks positivity and monotonicity on `0..=n_max`.
    ///
    /// Closed forms are checked through their parameters. Tables are
    /// rejected when an entry is zero or is certainly smaller than its
    /// predecessor.
    pub fn validate(&self, n_max: usize) -> Result<()> {
        match self {
            RhoSpec::Geometric { r } if r < &Scalar::one() => Err(Error::Domain(format!(
                "geometric rho needs r >= 1 to be increasing, got {}",
                format_scalar(r)
            ))),
            RhoSpec::Table(t) => {
                if t.len() <= n_max {
                    return Err(Error::Domain(format!(
                        "rho table covers 0..{} but n up to {n_max} is needed",
                        t.len()
                    )));
                }
                for (n, pair) in t[..=n_max].windows(2).enumerate() {
                    match (&pair[0], &pair[1]) {
                        (LogMagInterval::Bounds { lo, .. }, LogMagInterval::Bounds { hi, .. }) => {
                            if hi < lo {
                                return Err(Error::Domain(format!(
                                    "rho table decreases between n = {n} and n = {}",
                                    n + 1
                                )));
                            }
                        }
                        _ => {
                            return Err(Error::Domain(
                                "rho must be strictly positive; table has a -inf entry".into(),
                            ))
                        }
                    }
                }
                if t[0].is_neg_infinity() {
                    return Err(Error::Domain("rho(0) must be positive".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Which growth condition a margin measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarginKind {
    /// `rho(n) (sum_{l <= n/2} |X_l|)^m` against `|X_(n-lambda)|`.
    C1,
    /// `rho(n) |X_(n-lambda-1)| (sum_{l < n/2} |X_l|)^m` against `|X_(n-lambda)|`.
    C2,
    /// `rho(n) |X_(n-lambda-1)| (sum_{l <= n/2} |X_l|)^m` against `|X_(n-lambda)|`.
    Combined,
    /// `rho(n) |X_floor(n/2)|^m` against `|X_(n-lambda)|`.
    Na1,
    /// `rho(n) |X_(n-lambda-1)| |X_floor((n-1)/2)|^m` against `|X_(n-lambda)|`.
    Na2,
    /// `rho(n) |X_(n-lambda-1)| |X_floor(n/2)|^m` against `|X_(n-lambda)|`.
    NaCombined,
}

impl MarginKind {
    pub const ALL: [MarginKind; 6] = [
        MarginKind::C1,
        MarginKind::C2,
        MarginKind::Combined,
        MarginKind::Na1,
        MarginKind::Na2,
        MarginKind::NaCombined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MarginKind::C1 => "C1",
            MarginKind::C2 => "C2",
            MarginKind::Combined => "COMBINED",
            MarginKind::Na1 => "NA1",
            MarginKind::Na2 => "NA2",
            MarginKind::NaCombined => "NA_COMBINED",
        }
    }

    pub fn is_nonarchimedean(self) -> bool {
        matches!(
            self,
            MarginKind::Na1 | MarginKind::Na2 | MarginKind::NaCombined
        )
    }
}

impl fmt::Display for MarginKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for MarginKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// `log2 LHS - log2 RHS` as an extended-real interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Margin {
    /// Left-hand side is exactly zero.
    NegInfinity,
    Bounds {
        lo: Scalar,
        hi: Scalar,
    },
    /// Right-hand side is exactly zero.
    PosInfinity,
}

impl Margin {
    fn between(lhs: &LogMagInterval, rhs: &LogMagInterval) -> Margin {
        match (lhs, rhs) {
            (_, LogMagInterval::NegInfinity) => Margin::PosInfinity,
            (LogMagInterval::NegInfinity, _) => Margin::NegInfinity,
            (LogMagInterval::Bounds { lo: a, hi: b }, LogMagInterval::Bounds { lo: c, hi: d }) => {
                Margin::Bounds {
                    lo: a - d,
                    hi: b - c,
                }
            }
        }
    }

    pub fn hi(&self) -> Option<&Scalar> {
        match self {
            Margin::Bounds { hi, .. } => Some(hi),
            _ => None,
        }
    }

    pub fn lo(&self) -> Option<&Scalar> {
        match self {
            Margin::Bounds { lo, .. } => Some(lo),
            _ => None,
        }
    }

    /// Upper bound is strictly below zero.
    pub fn certainly_negative(&self) -> bool {
        match self {
            Margin::NegInfinity => true,
            Margin::Bounds { hi, .. } => hi.is_negative(),
            Margin::PosInfinity => false,
        }
    }

    /// Lower bound is at least zero.
    pub fn certainly_nonnegative(&self) -> bool {
        match self {
            Margin::NegInfinity => false,
            Margin::Bounds { lo, .. } => !lo.is_negative(),
            Margin::PosInfinity => true,
        }
    }

    /// Orders upper bounds on the extended real line.
    fn upper_key(&self) -> (i8, Option<&Scalar>) {
        match self {
            Margin::NegInfinity => (-1, None),
            Margin::Bounds { hi, .. } => (0, Some(hi)),
            Margin::PosInfinity => (1, None),
        }
    }
}

impl Serialize for Margin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Margin::NegInfinity => ["-inf", "-inf"].serialize(s),
            Margin::PosInfinity => ["+inf", "+inf"].serialize(s),
            Margin::Bounds { lo, hi } => [format_scalar(lo), format_scalar(hi)].serialize(s),
        }
    }
}

/// Margin of one growth condition at `(n, lambda, m)`.
///
/// Requires `n > 2 lambda + 2`. Nonarchimedean kinds refuse a series-backed
/// spec measured with the archimedean absolute value.
pub fn margin(
    kind: MarginKind,
    spec: &GrowthSpec,
    rho: &RhoSpec,
    n: usize,
    lambda: usize,
    m: u32,
) -> Result<Margin> {
    if n <= 2 * lambda + 2 {
        return Err(Error::Precondition(format!(
            "margin needs n > 2 lambda + 2 (n = {n}, lambda = {lambda})"
        )));
    }
    if kind.is_nonarchimedean() && spec.abs_value() == Some(AbsValue::Archimedean) {
        return Err(Error::Usage(format!(
            "{kind} applies to nonarchimedean absolute values only"
        )));
    }
    let x = |i: usize| eval_log_abs(spec, i);
    let rho_n = rho.log2(n)?;
    let rhs = x(n - lambda)?;
    let lhs = match kind {
        MarginKind::C1 => rho_n.mul_mag(&sum_log_abs(spec, n, true)?.pow_mag(m)),
        MarginKind::C2 => rho_n
            .mul_mag(&x(n - lambda - 1)?)
            .mul_mag(&sum_log_abs(spec, n, false)?.pow_mag(m)),
        MarginKind::Combined => rho_n
            .mul_mag(&x(n - lambda - 1)?)
            .mul_mag(&sum_log_abs(spec, n, true)?.pow_mag(m)),
        MarginKind::Na1 => rho_n.mul_mag(&x(n / 2)?.pow_mag(m)),
        MarginKind::Na2 => rho_n
            .mul_mag(&x(n - lambda - 1)?)
            .mul_mag(&x((n - 1) / 2)?.pow_mag(m)),
        MarginKind::NaCombined => rho_n
            .mul_mag(&x(n - lambda - 1)?)
            .mul_mag(&x(n / 2)?.pow_mag(m)),
    };
    Ok(Margin::between(&lhs, &rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriteriaMode {
    Archimedean,
    Nonarchimedean,
}

impl CriteriaMode {
    /// Theorem-style conditions first, then the single combined condition.
    pub fn kinds(self) -> [MarginKind; 3] {
        match self {
            CriteriaMode::Archimedean => [MarginKind::C1, MarginKind::C2, MarginKind::Combined],
            CriteriaMode::Nonarchimedean => {
                [MarginKind::Na1, MarginKind::Na2, MarginKind::NaCombined]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    SatisfiedEmpirically,
    Inconclusive,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarginPoint {
    pub n: usize,
    pub margin: Margin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriteriaEntry {
    pub lambda: usize,
    pub m: u32,
    pub kind: MarginKind,
    pub verdict: Verdict,
    pub margins: Vec<MarginPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriteriaReport {
    pub mode: CriteriaMode,
    /// `|X_0| >= 1`; false when refuted or undecidable from the enclosure.
    pub precondition_x0: bool,
    pub precondition_x0_indeterminate: bool,
    pub n_range: [usize; 2],
    pub lambda_max: usize,
    pub m_max: u32,
    pub entries: Vec<CriteriaEntry>,
    pub all_satisfied: bool,
}

/// Assigns the verdict for one margin sequence ordered by increasing `n`.
///
/// Satisfied: every upper bound is negative and the upper bounds do not
/// increase over the second half of the range. Violated: the margin at the
/// largest `n` is certainly nonnegative, or the right-hand side vanishes
/// somewhere in the second half. Anything else is inconclusive.
pub fn verdict(points: &[MarginPoint]) -> Verdict {
    let Some(last) = points.last() else {
        return Verdict::Inconclusive;
    };
    let tail = &points[points.len() / 2..];
    let all_negative = points.iter().all(|p| p.margin.certainly_negative());
    let tail_nonincreasing = tail
        .windows(2)
        .all(|w| w[1].margin.upper_key() <= w[0].margin.upper_key());
    if all_negative && tail_nonincreasing {
        return Verdict::SatisfiedEmpirically;
    }
    let rhs_vanishes = tail.iter().any(|p| p.margin == Margin::PosInfinity);
    if last.margin.certainly_nonnegative() || rhs_vanishes {
        return Verdict::Violated;
    }
    Verdict::Inconclusive
}

/// Evaluates the mode's conditions for every `lambda <= lambda_max`,
/// `m <= m_max` and `n` in `n_range`.
pub fn check_criteria(
    spec: &GrowthSpec,
    rho: &RhoSpec,
    lambda_max: usize,
    m_max: u32,
    n_range: RangeInclusive<usize>,
    mode: CriteriaMode,
) -> Result<CriteriaReport> {
    let (start, end) = (*n_range.start(), *n_range.end());
    if start > end {
        return Err(Error::Usage(format!("empty n range {start}:{end}")));
    }
    if start <= 2 * lambda_max + 2 {
        return Err(Error::Precondition(format!(
            "n range must start above 2 lambda_max + 2 = {}",
            2 * lambda_max + 2
        )));
    }
    if let Some(len) = spec.domain_len() {
        if len <= end {
            return Err(Error::Domain(format!(
                "growth spec covers 0..{len} but the n range ends at {end}"
            )));
        }
    }
    if mode == CriteriaMode::Nonarchimedean && spec.abs_value() == Some(AbsValue::Archimedean) {
        return Err(Error::Usage(
            "nonarchimedean criteria need a p-adic absolute value on the series".into(),
        ));
    }
    rho.validate(end)?;

    let (precondition_x0, precondition_x0_indeterminate) = x0_at_least_one(spec)?;
    let mut entries = Vec::new();
    for lambda in 0..=lambda_max {
        for m in 0..=m_max {
            for kind in mode.kinds() {
                let margins = n_range
                    .clone()
                    .map(|n| {
                        Ok(MarginPoint {
                            n,
                            margin: margin(kind, spec, rho, n, lambda, m)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                entries.push(CriteriaEntry {
                    lambda,
                    m,
                    kind,
                    verdict: verdict(&margins),
                    margins,
                });
            }
        }
    }
    let all_satisfied = precondition_x0
        && entries
            .iter()
            .all(|e| e.verdict == Verdict::SatisfiedEmpirically);
    Ok(CriteriaReport {
        mode,
        precondition_x0,
        precondition_x0_indeterminate,
        n_range: [start, end],
        lambda_max,
        m_max,
        entries,
        all_satisfied,
    })
}

/// `(holds, indeterminate)` for `|X_0| >= 1`. Series-backed specs are
/// decided exactly; closed forms through their enclosure.
fn x0_at_least_one(spec: &GrowthSpec) -> Result<(bool, bool)> {
    if let GrowthSpec::FromSeries { series, abs } = spec {
        return Ok((abs.apply(series.coeff(0)) >= Scalar::one(), false));
    }
    Ok(match eval_log_abs(spec, 0)? {
        LogMagInterval::NegInfinity => (false, false),
        LogMagInterval::Bounds { lo, hi } => {
            if !lo.is_negative() {
                (true, false)
            } else if hi.is_negative() {
                (false, false)
            } else {
                (false, true)
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Prop1Status {
    Pass,
    BoundViolated,
    PremiseFail,
}

/// Outcome of checking `|X_n| <= d (1 + c)^n r^n` for `X = D / C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop1Report {
    pub status: Prop1Status,
    pub order: usize,
    #[serde(with = "scalar_serde")]
    pub c: Scalar,
    #[serde(with = "scalar_serde")]
    pub d: Scalar,
    #[serde(with = "scalar_serde")]
    pub r: Scalar,
    /// Indices with `|C_n| >= c r^n`.
    pub c_premise_violations: Vec<usize>,
    /// Indices with `|D_n| >= d r^n`.
    pub d_premise_violations: Vec<usize>,
    pub first_violation: Option<usize>,
}

/// Solves `C X = D` exactly and checks the growth bound on `X` at every
/// index through the common order.
///
/// Premises `C_0 = 1`, `|C_n| < c r^n` and `|D_n| < d r^n` are verified first;
/// a failing strict bound is reported as `PREMISE_FAIL` and the quotient is
/// not examined. A `BOUND_VIOLATED` outcome would mean a bug here, since the
/// bound is a theorem.
pub fn check_prop1_bound(
    c_series: &Series,
    d_series: &Series,
    c: &Scalar,
    d: &Scalar,
    r: &Scalar,
    abs: AbsValue,
) -> Result<Prop1Report> {
    for (name, v) in [("c", c), ("d", d), ("r", r)] {
        if !v.is_positive() {
            return Err(Error::Usage(format!(
                "{name} must be positive, got {}",
                format_scalar(v)
            )));
        }
    }
    let (cs, ds) = crate::series::align(c_series, d_series);
    if !cs.coeff(0).is_one() {
        return Err(Error::Precondition(format!(
            "C_0 must be 1 (got {}); divide C and D by C_0 first",
            format_scalar(cs.coeff(0))
        )));
    }
    let order = cs.order();
    let mut report = Prop1Report {
        status: Prop1Status::Pass,
        order,
        c: c.clone(),
        d: d.clone(),
        r: r.clone(),
        c_premise_violations: Vec::new(),
        d_premise_violations: Vec::new(),
        first_violation: None,
    };
    let mut r_pow = Scalar::one();
    for n in 0..=order {
        if abs.apply(cs.coeff(n)) >= c * &r_pow {
            report.c_premise_violations.push(n);
        }
        if abs.apply(ds.coeff(n)) >= d * &r_pow {
            report.d_premise_violations.push(n);
        }
        r_pow *= r;
    }
    if !report.c_premise_violations.is_empty() || !report.d_premise_violations.is_empty() {
        report.status = Prop1Status::PremiseFail;
        return Ok(report);
    }
    let x = ds.divide(&cs)?;
    let step = (Scalar::one() + c) * r;
    let mut bound = d.clone();
    for n in 0..=order {
        if abs.apply(x.coeff(n)) > bound {
            report.first_violation = Some(n);
            report.status = Prop1Status::BoundViolated;
            break;
        }
        bound *= &step;
    }
    Ok(report)
}

/// First `n <= n_max` with `|X_n| > d (1 + c)^n r^n`, if any.
///
/// A hit shows that `X` cannot be a quotient `D / C` of series satisfying
/// the premises of the division bound for these `(c, d, r)`.
pub fn first_bound_excess(
    x: &Series,
    abs: AbsValue,
    c: &Scalar,
    d: &Scalar,
    r: &Scalar,
    n_max: usize,
) -> Option<usize> {
    let step = (Scalar::one() + c) * r;
    let mut bound = d.clone();
    for n in 0..=n_max.min(x.order()) {
        if abs.apply(x.coeff(n)) > bound {
            return Some(n);
        }
        bound *= &step;
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthClass {
    Exponential { log2_r_estimate: Scalar },
    Superexponential,
    Inconclusive,
}

impl Serialize for GrowthClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self {
            GrowthClass::Exponential { log2_r_estimate } => {
                map.serialize_entry("class", "exponential")?;
                map.serialize_entry("log2_r_estimate", &format_scalar(log2_r_estimate))?;
            }
            GrowthClass::Superexponential => map.serialize_entry("class", "superexponential")?,
            GrowthClass::Inconclusive => map.serialize_entry("class", "inconclusive")?,
        }
        map.serialize_entry("heuristic", &true)?;
        map.end()
    }
}

pub fn default_tau() -> Scalar {
    Scalar::new(1.into(), 2.into())
}

/// Heuristic classification from `u_n = upper(log2 |X_n|) / n` on
/// `n in [n_max/2, n_max]`.
///
/// Exponential when the `u_n` spread is at most `tau` (estimate: their mean);
/// superexponential when `u_n` is nondecreasing and rises by more than `tau`
/// across the window. Indices with `X_n = 0` are skipped.
pub fn classify_growth(spec: &GrowthSpec, n_max: usize, tau: &Scalar) -> Result<GrowthClass> {
    if n_max < 16 {
        return Err(Error::Precondition(format!(
            "classification needs n_max >= 16, got {n_max}"
        )));
    }
    let mut u = Vec::new();
    for n in (n_max / 2).max(1)..=n_max {
        if let Some(hi) = eval_log_abs(spec, n)?.hi() {
            u.push(hi / int(n as i64));
        }
    }
    let (Some(first), Some(last)) = (u.first(), u.last()) else {
        return Ok(GrowthClass::Inconclusive);
    };
    let max = u.iter().max().expect("nonempty");
    let min = u.iter().min().expect("nonempty");
    if max - min <= *tau {
        let mean = u.iter().fold(Scalar::zero(), |acc, v| acc + v) / int(u.len() as i64);
        return Ok(GrowthClass::Exponential {
            log2_r_estimate: mean,
        });
    }
    let monotone = u.windows(2).all(|w| w[0] <= w[1]);
    if monotone && last - first > *tau {
        return Ok(GrowthClass::Superexponential);
    }
    Ok(GrowthClass::Inconclusive)
}

#[derive(Serialize, Deserialize)]
struct TypedRepr<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum GrowthBody {
    FactorialExponent {
        #[serde(with = "scalar_serde")]
        a: Scalar,
        #[serde(with = "scalar_serde")]
        b: Scalar,
        #[serde(with = "scalar_serde")]
        c: Scalar,
    },
    Geometric {
        #[serde(with = "scalar_serde")]
        log2r: Scalar,
    },
    Table {
        log2: Vec<LogMagInterval>,
    },
    FromSeries {
        series: Series,
        abs: AbsValue,
    },
}

impl Serialize for GrowthSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let body = match self.clone() {
            GrowthSpec::Table(log2) => GrowthBody::Table { log2 },
            GrowthSpec::FactorialExponent { a, b, c } => GrowthBody::FactorialExponent { a, b, c },
            GrowthSpec::Geometric { log2_r } => GrowthBody::Geometric { log2r: log2_r },
            GrowthSpec::FromSeries { series, abs } => GrowthBody::FromSeries { series, abs },
        };
        TypedRepr {
            kind: Some("growth".into()),
            body,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GrowthSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TypedRepr::<GrowthBody>::deserialize(d)?;
        check_kind::<D>(&repr.kind, "growth")?;
        Ok(match repr.body {
            GrowthBody::FactorialExponent { a, b, c } => GrowthSpec::FactorialExponent { a, b, c },
            GrowthBody::Geometric { log2r } => GrowthSpec::Geometric { log2_r: log2r },
            GrowthBody::Table { log2 } => GrowthSpec::Table(log2),
            GrowthBody::FromSeries { series, abs } => GrowthSpec::FromSeries { series, abs },
        })
    }
}

fn check_kind<'de, D: Deserializer<'de>>(
    kind: &Option<String>,
    want: &str,
) -> std::result::Result<(), D::Error> {
    match kind {
        Some(k) if k != want => Err(serde::de::Error::custom(format!(
            "expected kind {want:?}, got {k:?}"
        ))),
        _ => Ok(()),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RhoBody {
    Factorial,
    Geometric {
        #[serde(with = "scalar_serde")]
        r: Scalar,
    },
    Polynomial {
        degree: u32,
    },
    Table {
        log2: Vec<LogMagInterval>,
    },
    One,
}

impl Serialize for RhoSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let body = match self.clone() {
            RhoSpec::Factorial => RhoBody::Factorial,
            RhoSpec::Geometric { r } => RhoBody::Geometric { r },
            RhoSpec::Polynomial { degree } => RhoBody::Polynomial { degree },
            RhoSpec::Table(log2) => RhoBody::Table { log2 },
            RhoSpec::One => RhoBody::One,
        };
        TypedRepr {
            kind: Some("rho".into()),
            body,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RhoSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TypedRepr::<RhoBody>::deserialize(d)?;
        check_kind::<D>(&repr.kind, "rho")?;
        Ok(match repr.body {
            RhoBody::Factorial => RhoSpec::Factorial,
            RhoBody::Geometric { r } => RhoSpec::Geometric { r },
            RhoBody::Polynomial { degree } => RhoSpec::Polynomial { degree },
            RhoBody::Table { log2 } => RhoSpec::Table(log2),
            RhoBody::One => RhoSpec::One,
        })
    }
}
