use serde::Serialize;
use serde_json::{json, Value};

use fps_core::constructions::{self, verify_gap_claims, verify_gap_punchline, PunchlineStatus};
use fps_core::decomp::{core_powers, tail_power, Decomposer};
use fps_core::growth::{
    check_criteria, check_prop1_bound, classify_growth, CriteriaMode, GrowthSpec, Prop1Status,
    RhoSpec, Verdict,
};
use fps_core::oracle::{naive_core_tail_coeff, naive_power_coeff, MAX_INDEX, MAX_POWER};
use fps_core::{AbsValue, Error, Scalar, Series, SeriesPoly};

use crate::{
    scalar_json, CliResult, GenKind, Limits, Outcome, MAX_DEGREE, MAX_ORDER, MAX_PARTITION_N,
};

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize infallibly")
}

pub(crate) fn lemma1(
    x: &Series,
    m_max: usize,
    order: usize,
    oracle: bool,
    limits: Limits,
) -> CliResult<Outcome> {
    limits.check("series order", MAX_ORDER, order)?;
    limits.check("power bound m_max", MAX_DEGREE, m_max)?;
    if order > x.order() {
        return Err(Error::Precondition(format!(
            "requested order {order} exceeds the series order {}",
            x.order()
        ))
        .into());
    }
    let x = x.truncated(order)?;
    let cores = core_powers(&x, m_max);
    let mut power = Series::one(order);
    let mut tails = vec![Series::zero(order)];
    let mut checks = 0u64;
    let mut failures = Vec::new();
    let mut powers = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if m > 0 {
            power = power.mul(&x)?;
            tails.push(tail_power(&x, m)?);
        }
        let weight = Scalar::from_integer((m as i64).into());
        for n in 0..=order {
            checks += 1;
            if *power.coeff(n) != cores[m].coeff(n) + &weight * tails[m].coeff(n) {
                failures.push(json!({ "m": m, "n": n }));
            }
        }
        powers.push(power.clone());
    }

    let oracle_report = oracle.then(|| {
        let mut oracle_checks = 0u64;
        let mut oracle_failures = Vec::new();
        for m in 0..=m_max.min(MAX_POWER) {
            for n in 0..=order.min(MAX_INDEX) {
                let mut compare = |what: &str, fast: &Scalar, slow: Scalar| {
                    oracle_checks += 1;
                    if *fast != slow {
                        oracle_failures.push(json!({ "m": m, "n": n, "quantity": what }));
                    }
                };
                let naive = naive_power_coeff(&x, m, n).expect("within oracle limits");
                compare("power", powers[m].coeff(n), naive);
                if m > 0 {
                    let split = naive_core_tail_coeff(&x, m, n).expect("within oracle limits");
                    compare("core", cores[m].coeff(n), split.core);
                    compare("tail", tails[m].coeff(n), split.tail);
                }
            }
        }
        json!({
            "max_power": MAX_POWER,
            "max_index": MAX_INDEX,
            "checks": oracle_checks,
            "failures": oracle_failures,
        })
    });
    let oracle_ok = oracle_report
        .as_ref()
        .is_none_or(|r| r["failures"].as_array().is_some_and(Vec::is_empty));
    let passed = failures.is_empty() && oracle_ok;
    Ok(Outcome {
        passed,
        summary: format!(
            "core/tail identity at {checks} (m, n) points, {} failures{}",
            failures.len(),
            if oracle {
                if oracle_ok {
                    "; oracle agrees"
                } else {
                    "; oracle disagrees"
                }
            } else {
                ""
            }
        ),
        result: json!({
            "order": order,
            "m_max": m_max,
            "identity_checks": checks,
            "identity_failures": failures,
            "oracle": oracle_report,
        }),
    })
}

pub(crate) fn theorem2(
    poly: &SeriesPoly,
    x: &Series,
    n: Option<usize>,
    lambda: Option<usize>,
    limits: Limits,
) -> CliResult<Outcome> {
    limits.check("polynomial degree", MAX_DEGREE, poly.degree())?;
    let dec = Decomposer::new(poly, x);
    let order = dec.order();
    limits.check("series order", MAX_ORDER, order)?;
    let points: Vec<(usize, usize)> = match (n, lambda) {
        (Some(n), Some(l)) => vec![(n, l)],
        (Some(n), None) => (0..n.div_ceil(2)).map(|l| (n, l)).collect(),
        (None, Some(l)) => (2 * l + 1..=order).map(|n| (n, l)).collect(),
        (None, None) => (1..=order)
            .flat_map(|n| (0..n.div_ceil(2)).map(move |l| (n, l)))
            .collect(),
    };
    if points.is_empty() {
        return Err(Error::Precondition(format!(
            "no (n, lambda) with 1 <= n <= {order} and 2 lambda < n to check"
        ))
        .into());
    }
    let mut failures = Vec::new();
    let mut components = Vec::new();
    for &(pn, pl) in &points {
        let c = dec.decompose(pn, pl)?;
        if !c.identity_ok {
            failures.push(json!({ "n": pn, "lambda": pl }));
        }
        // components are listed only when n was pinned
        if n.is_some() {
            components.push(c);
        }
    }
    let mut result = json!({
        "order": order,
        "degree": poly.degree(),
        "checks": points.len(),
        "failures": failures,
    });
    if n.is_some() {
        result["components"] = to_json(&components);
    }
    Ok(Outcome {
        passed: failures.is_empty(),
        summary: format!(
            "four-part decomposition at {} (n, lambda) points, {} failures",
            points.len(),
            failures.len()
        ),
        result,
    })
}

pub(crate) fn prop1(
    c: &Series,
    d: &Series,
    cbound: &Scalar,
    dbound: &Scalar,
    r: &Scalar,
    abs: AbsValue,
) -> CliResult<Outcome> {
    let report = check_prop1_bound(c, d, cbound, dbound, r, abs)?;
    let summary = match report.status {
        Prop1Status::Pass => format!("bound holds through order {}", report.order),
        Prop1Status::BoundViolated => format!(
            "bound violated first at n = {}",
            report.first_violation.expect("set on violation")
        ),
        Prop1Status::PremiseFail => format!(
            "premises fail at C indices {:?}, D indices {:?}",
            report.c_premise_violations, report.d_premise_violations
        ),
    };
    Ok(Outcome {
        passed: report.status == Prop1Status::Pass,
        summary,
        result: to_json(&report),
    })
}

pub(crate) fn criteria(
    growth: &GrowthSpec,
    rho: &RhoSpec,
    lambda_max: usize,
    m_max: u32,
    n_range: (usize, usize),
    mode: CriteriaMode,
) -> CliResult<Outcome> {
    let report = check_criteria(growth, rho, lambda_max, m_max, n_range.0..=n_range.1, mode)?;
    let count = |v: Verdict| report.entries.iter().filter(|e| e.verdict == v).count();
    let summary = format!(
        "{} satisfied, {} inconclusive, {} violated of {} conditions; |X_0| >= 1 {}",
        count(Verdict::SatisfiedEmpirically),
        count(Verdict::Inconclusive),
        count(Verdict::Violated),
        report.entries.len(),
        if report.precondition_x0 {
            "holds"
        } else if report.precondition_x0_indeterminate {
            "undecided"
        } else {
            "fails"
        }
    );
    Ok(Outcome {
        passed: report.all_satisfied,
        summary,
        result: to_json(&report),
    })
}

pub(crate) fn gap_claims(p: u32, q: u32, d_max: u64) -> CliResult<Outcome> {
    let report = verify_gap_claims(p, q, d_max)?;
    let passed = report.leading_matches_expected && report.lower_powers_vanish;
    let summary = format!(
        "c = {}, (L^p)_c = {}, verified zero radius {}, radius 2^(q-p) {}",
        report.c_index,
        fps_core::exactnum::format_scalar(&report.coeff_at_c[p as usize]),
        report.zero_window_radius_verified,
        if report.claimed_radius_holds {
            "holds"
        } else {
            "fails"
        }
    );
    Ok(Outcome {
        passed,
        summary,
        result: to_json(&report),
    })
}

pub(crate) fn punchline(poly: &SeriesPoly, p: u32, q: u32) -> CliResult<Outcome> {
    let report = verify_gap_punchline(poly, p, q)?;
    let summary = match report.status {
        PunchlineStatus::Verified => format!(
            "A(L) is nonzero at index {}",
            report.c_index as usize + report.n
        ),
        PunchlineStatus::Failed => "equality or nonvanishing failed".to_owned(),
        PunchlineStatus::Inconclusive => match report.required_q {
            Some(q) => format!("zero window too small; use q >= {q}"),
            None => "zero window too small for any supported q".to_owned(),
        },
    };
    Ok(Outcome {
        passed: report.status == PunchlineStatus::Verified,
        summary,
        result: to_json(&report),
    })
}

pub(crate) fn generate(kind: GenKind, order: Option<usize>, limits: Limits) -> CliResult<Outcome> {
    let series_order = || -> CliResult<usize> {
        let order = order.ok_or_else(|| Error::Usage("this kind needs --order".into()))?;
        limits.check("series order", MAX_ORDER, order)?;
        Ok(order)
    };
    let no_order = || -> CliResult<()> {
        match order {
            Some(_) => Err(Error::Usage("--order does not apply to this kind".into()).into()),
            None => Ok(()),
        }
    };
    let (result, what) = match kind {
        GenKind::Liouville => (
            to_json(&constructions::liouville_series(series_order()?)?),
            "gap series",
        ),
        GenKind::Factorial => (
            to_json(&constructions::factorial_series(series_order()?)),
            "factorial series",
        ),
        GenKind::Superfactorial => (
            to_json(&constructions::superfactorial_series(series_order()?)?),
            "superfactorial series",
        ),
        GenKind::PadicSuperfactorial => (
            to_json(&constructions::padic_superfactorial_series(series_order()?)?),
            "2-adic superfactorial series",
        ),
        GenKind::SuperfactorialGrowth => {
            no_order()?;
            (
                to_json(&constructions::superfactorial_growth()),
                "growth spec",
            )
        }
        GenKind::PadicSuperfactorialGrowth => {
            no_order()?;
            (
                to_json(&constructions::padic_superfactorial_growth()),
                "growth spec",
            )
        }
        GenKind::FactorialRho => {
            no_order()?;
            (to_json(&RhoSpec::Factorial), "rho spec")
        }
    };
    Ok(Outcome {
        passed: true,
        summary: format!("generated {what}"),
        result,
    })
}

pub(crate) fn partition(
    poly: &SeriesPoly,
    x: &Series,
    n: usize,
    lambda: usize,
    limits: Limits,
) -> CliResult<Outcome> {
    limits.check("partition index n", MAX_PARTITION_N, n)?;
    limits.check("polynomial degree", MAX_DEGREE, poly.degree())?;
    let dec = Decomposer::new(poly, x);
    let tally = dec.region_tally(n, lambda)?;
    let components = dec.decompose(n, lambda)?;
    let matches = tally.matches(&components);
    Ok(Outcome {
        passed: matches && components.identity_ok,
        summary: format!(
            "{} monomials: {} core, {} epsilon, {} gamma, {} head; regions {} the components",
            tally.count(),
            tally.core.count,
            tally.epsilon.count,
            tally.gamma.count,
            tally.head.count,
            if matches { "match" } else { "do not match" }
        ),
        result: json!({
            "tally": to_json(&tally),
            "components": to_json(&components),
            "total": scalar_json(&tally.total()),
            "matches": matches,
        }),
    })
}

pub(crate) fn classify(growth: &GrowthSpec, n_max: usize, tau: &Scalar) -> CliResult<Outcome> {
    let class = classify_growth(growth, n_max, tau)?;
    let result = to_json(&class);
    Ok(Outcome {
        passed: true,
        summary: format!(
            "heuristic class: {}",
            result["class"].as_str().unwrap_or("?")
        ),
        result,
    })
}
