//! Example series: the gap series `L = sum_k z^(2^k)`, `sum n! z^n`,
//! `sum 2^(n!) z^n` and its 2-adic counterpart, plus exact checks of the
//! gap-series coefficient claims.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{factorial, from_biguint, int, scalar_serde, AbsValue, Scalar};
use crate::growth::GrowthSpec;
use crate::series::{Series, SeriesPoly, SparseSeries};

pub const MAX_GAP_Q: u32 = 14;
pub const MAX_GAP_P: u32 = 4;
pub const MAX_SUPERFACTORIAL_ORDER: usize = 8;

/// `c(p, q) = 2^q - 2^(q-p)`: the `p` set bits at positions `q-p .. q-1`.
pub fn c_index(p: u32, q: u32) -> Result<u64> {
    if p == 0 || p >= q {
        return Err(Error::Usage(format!(
            "c(p, q) needs 1 <= p < q, got p = {p}, q = {q}"
        )));
    }
    if q > 62 {
        return Err(Error::LimitExceeded {
            what: "gap exponent q",
            limit: 62,
            got: q as usize,
            hint: "c(p, q) must fit in 64 bits",
        });
    }
    Ok((1u64 << q) - (1u64 << (q - p)))
}

/// `L` truncated at `order`, stored sparsely.
pub fn liouville_sparse(order: usize) -> Result<SparseSeries> {
    if order == 0 {
        return Err(Error::Usage("gap series needs order >= 1".into()));
    }
    let mut l = SparseSeries::new(order);
    let mut k = 1usize;
    while k <= order {
        l.set(k, Scalar::one());
        k <<= 1;
    }
    Ok(l)
}

pub fn liouville_series(order: usize) -> Result<Series> {
    Ok(liouville_sparse(order)?.to_dense())
}

/// `sum n! z^n` through `order`.
pub fn factorial_series(order: usize) -> Series {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut f = BigUint::one();
    for n in 0..=order {
        if n > 0 {
            f *= n;
        }
        coeffs.push(from_biguint(f.clone()));
    }
    Series::new(coeffs).expect("nonempty")
}

/// `log2 |X_n| = n!` for `X_n = 2^(n!)`.
pub fn superfactorial_growth() -> GrowthSpec {
    GrowthSpec::FactorialExponent {
        a: int(1),
        b: int(0),
        c: int(0),
    }
}

/// Magnitude law of `X_n = 2^(-n!)` under the 2-adic absolute value, where
/// `|X_n|_2 = 2^(n!)`. Exact coefficients: [`padic_superfactorial_series`].
pub fn padic_superfactorial_growth() -> GrowthSpec {
    superfactorial_growth()
}

fn check_superfactorial_order(order: usize) -> Result<()> {
    if order > MAX_SUPERFACTORIAL_ORDER {
        return Err(Error::LimitExceeded {
            what: "superfactorial series order",
            limit: MAX_SUPERFACTORIAL_ORDER,
            got: order,
            hint: "use the closed-form growth spec beyond this order",
        });
    }
    Ok(())
}

/// `sum 2^(n!) z^n` through `order <= 8`.
pub fn superfactorial_series(order: usize) -> Result<Series> {
    check_superfactorial_order(order)?;
    let coeffs = (0..=order)
        .map(|n| from_biguint(BigUint::one() << exponent(n)))
        .collect();
    Series::new(coeffs)
}

/// `sum 2^(-n!) z^n` through `order <= 8`.
pub fn padic_superfactorial_series(order: usize) -> Result<Series> {
    Ok(Series::new(
        superfactorial_series(order)?
            .into_coeffs()
            .into_iter()
            .map(|c| c.recip())
            .collect(),
    )
    .expect("nonempty"))
}

pub fn padic_superfactorial_abs() -> AbsValue {
    AbsValue::padic(2).expect("2 is prime")
}

fn exponent(n: usize) -> usize {
    factorial(n as u64)
        .try_into()
        .expect("n! fits for the orders allowed here")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapCoefficient {
    pub j: u32,
    pub n: u64,
    #[serde(with = "scalar_serde")]
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapClaimReport {
    pub p: u32,
    pub q: u32,
    pub c_index: u64,
    /// `(L^j)_c` for `j = 0..=p`.
    #[serde(serialize_with = "serialize_scalars")]
    pub coeff_at_c: Vec<Scalar>,
    /// `p!`, the number of orderings of the `p` set bits of `c`.
    #[serde(with = "scalar_serde")]
    pub expected_leading: Scalar,
    /// `q!`, the value printed in the original claim.
    #[serde(with = "scalar_serde")]
    pub printed_leading: Scalar,
    pub leading_matches_expected: bool,
    pub leading_matches_printed: bool,
    pub lower_powers_vanish: bool,
    /// Every `n` with `|c - n| <= window` was inspected.
    pub window: u64,
    /// Largest `w` with `(L^j)_n = 0` for all `1 <= j <= p` and
    /// `0 < |c - n| < w`; `window + 1` if no nonzero was found.
    pub zero_window_radius_verified: u64,
    /// `2^(q-p)`, the radius in the original claim.
    pub claimed_radius: u64,
    #[serde(rename = "paper_radius_holds")]
    pub claimed_radius_holds: bool,
    /// Nonzero `(L^j)_n` with `1 <= j <= p` and `0 < |c - n| < 2^(q-p)`.
    pub counterexamples: Vec<GapCoefficient>,
}

fn serialize_scalars<S: serde::Serializer>(
    v: &[Scalar],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::exactnum::format_scalar))
}

fn check_gap_limits(p: u32, q: u32) -> Result<()> {
    c_index(p, q)?;
    if p > MAX_GAP_P {
        return Err(Error::LimitExceeded {
            what: "gap power p",
            limit: MAX_GAP_P as usize,
            got: p as usize,
            hint: "p <= 4 keeps the sparse powers small",
        });
    }
    if q > MAX_GAP_Q {
        return Err(Error::LimitExceeded {
            what: "gap exponent q",
            limit: MAX_GAP_Q as usize,
            got: q as usize,
            hint: "q <= 14 bounds the truncation order",
        });
    }
    Ok(())
}

/// Computes `L^j` for `j <= p` around `c(p, q)` and reports the coefficient
/// at `c`, the vanishing of lower powers there, and the zero window.
pub fn verify_gap_claims(p: u32, q: u32, d_max: u64) -> Result<GapClaimReport> {
    check_gap_limits(p, q)?;
    let c = c_index(p, q)?;
    let claimed_radius = 1u64 << (q - p);
    let window = d_max.max(claimed_radius);
    let order = usize::try_from(c + window).expect("bounded by limits");
    let powers = liouville_sparse(order)?.powers(p);

    let coeff_at_c: Vec<Scalar> = powers.iter().map(|s| s.coeff(c as usize)).collect();
    let expected_leading = from_biguint(factorial(p as u64));
    let printed_leading = from_biguint(factorial(q as u64));
    let leading = &coeff_at_c[p as usize];

    let lo = c.saturating_sub(window);
    let mut nearest: Option<u64> = None;
    let mut counterexamples = Vec::new();
    for (j, power) in powers.iter().enumerate().skip(1) {
        for (n, value) in power.support() {
            let n = n as u64;
            if n < lo || n == c {
                continue;
            }
            let dist = n.abs_diff(c);
            nearest = Some(nearest.map_or(dist, |d| d.min(dist)));
            if dist < claimed_radius {
                counterexamples.push(GapCoefficient {
                    j: j as u32,
                    n,
                    value: value.clone(),
                });
            }
        }
    }
    counterexamples.sort_by_key(|g| (g.j, g.n));
    Ok(GapClaimReport {
        p,
        q,
        c_index: c,
        leading_matches_expected: *leading == expected_leading,
        leading_matches_printed: *leading == printed_leading,
        lower_powers_vanish: coeff_at_c[..p as usize].iter().all(Zero::is_zero),
        coeff_at_c,
        expected_leading,
        printed_leading,
        window,
        zero_window_radius_verified: nearest.unwrap_or(window + 1),
        claimed_radius,
        claimed_radius_holds: counterexamples.is_empty(),
        counterexamples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PunchlineStatus {
    Verified,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PunchlineReport {
    pub status: PunchlineStatus,
    pub p: u32,
    pub q: u32,
    pub c_index: u64,
    /// Least index with `(A_p)_n != 0`.
    pub n: usize,
    /// Largest degree among the `A_j`.
    pub d: usize,
    pub zero_window_radius_verified: u64,
    /// Smallest `q` whose verified window exceeds `d + n`, when `q` is too small.
    pub required_q: Option<u32>,
    /// `A(L)_(c + n)`
    #[serde(with = "scalar_serde::option")]
    pub lhs: Option<Scalar>,
    /// `(L^p)_c (A_p)_n`
    #[serde(with = "scalar_serde::option")]
    pub rhs: Option<Scalar>,
    pub equal: bool,
    pub nonzero: bool,
}

/// Checks `A(L)_(c + n) = (L^p)_c (A_p)_n != 0` for a degree-`p`
/// polynomial whose coefficient series are read as polynomials in `z`.
pub fn verify_gap_punchline(a: &SeriesPoly, p: u32, q: u32) -> Result<PunchlineReport> {
    check_gap_limits(p, q)?;
    if a.degree() != p as usize {
        return Err(Error::Usage(format!(
            "polynomial degree {} must equal p = {p}",
            a.degree()
        )));
    }
    let n = a.coeff(p as usize).valuation().ok_or_else(|| {
        Error::Usage("leading coefficient series A_p is zero; no index n with (A_p)_n != 0".into())
    })?;
    let d = a
        .coeffs()
        .iter()
        .filter_map(Series::degree)
        .max()
        .unwrap_or(0);
    let c = c_index(p, q)?;
    let needed = (d + n) as u64;
    let gap = verify_gap_claims(p, q, needed)?;
    let mut report = PunchlineReport {
        status: PunchlineStatus::Inconclusive,
        p,
        q,
        c_index: c,
        n,
        d,
        zero_window_radius_verified: gap.zero_window_radius_verified,
        required_q: None,
        lhs: None,
        rhs: None,
        equal: false,
        nonzero: false,
    };
    if gap.zero_window_radius_verified <= needed {
        report.required_q = required_q(p, needed);
        return Ok(report);
    }

    let target = c as usize + n;
    let powers = liouville_sparse(target)?.powers(p);
    let mut lhs = Scalar::zero();
    for (aj, lj) in a.coeffs().iter().zip(&powers) {
        for k in 0..=aj.order().min(target) {
            let coeff = aj.coeff(k);
            if !coeff.is_zero() {
                lhs += coeff * lj.coeff(target - k);
            }
        }
    }
    let rhs = &gap.coeff_at_c[p as usize] * a.coeff(p as usize).coeff(n);
    report.equal = lhs == rhs;
    report.nonzero = !lhs.is_zero();
    report.status = if report.equal && report.nonzero {
        PunchlineStatus::Verified
    } else {
        PunchlineStatus::Failed
    };
    report.lhs = Some(lhs);
    report.rhs = Some(rhs);
    Ok(report)
}

/// Smallest `q` in range whose observed window `2^(q-p-1)` exceeds `needed`.
fn required_q(p: u32, needed: u64) -> Option<u32> {
    (p + 1..=MAX_GAP_Q).find(|&q| (1u64 << (q - p - 1)) > needed)
}
