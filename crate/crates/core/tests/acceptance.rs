//! Acceptance suite. Prints one PASS/FAIL line per criterion. Criteria
//! marked as known failures still print FAIL; the process exits nonzero on
//! any other failure, or if a known failure starts passing. Every comparison
//! is exact unless a tolerance is printed on the line.

mod common;

use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fps_core::constructions::{
    c_index, factorial_series, padic_superfactorial_abs, padic_superfactorial_growth,
    padic_superfactorial_series, superfactorial_growth, verify_gap_claims, verify_gap_punchline,
    PunchlineStatus,
};
use fps_core::decomp::{core_power, core_powers, tail_power, Decomposer};
use fps_core::exactnum::{int, ratio};
use fps_core::growth::{
    check_criteria, check_prop1_bound, classify_growth, default_tau, eval_log_abs,
    first_bound_excess, CriteriaEntry, CriteriaMode, GrowthClass, GrowthSpec, Margin, MarginKind,
    Prop1Status, RhoSpec, Verdict,
};
use fps_core::oracle::{naive_core_tail_coeff, naive_poly_coeff, naive_power_coeff};
use fps_core::{AbsValue, Scalar, Series, SeriesPoly};

use common::{count_power_of_two_tuples, factorial, random_poly, random_series, representable};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    known_failure: bool,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "core/tail power identity",
            budget: secs(60),
            known_failure: false,
            run: lemma1_identity,
        },
        Criterion {
            id: 2,
            name: "oracle equivalence",
            budget: secs(120),
            known_failure: false,
            run: oracle_equivalence,
        },
        Criterion {
            id: 3,
            name: "four-part coefficient identity",
            budget: secs(120),
            known_failure: false,
            run: four_part_identity,
        },
        Criterion {
            id: 4,
            name: "printed low-order vectors",
            budget: secs(5),
            known_failure: false,
            run: printed_vectors,
        },
        Criterion {
            id: 5,
            name: "division growth bound",
            budget: secs(60),
            known_failure: false,
            run: division_bound,
        },
        Criterion {
            id: 6,
            name: "gap series claims",
            budget: secs(120),
            known_failure: false,
            run: gap_claims,
        },
        Criterion {
            id: 7,
            name: "superfactorial criteria",
            budget: secs(30),
            known_failure: false,
            run: superfactorial_criteria,
        },
        Criterion {
            id: 8,
            name: "nonarchimedean criteria",
            budget: secs(30),
            known_failure: false,
            run: nonarchimedean_criteria,
        },
        Criterion {
            id: 9,
            name: "irrationality witness",
            budget: secs(10),
            known_failure: true,
            run: irrationality_witness,
        },
        Criterion {
            id: 10,
            name: "negative control",
            budget: secs(10),
            known_failure: false,
            run: negative_control,
        },
        Criterion {
            id: 11,
            name: "growth classifier",
            budget: secs(5),
            known_failure: false,
            run: classifier,
        },
    ];
    let (mut failed, mut known, mut unexpected) = (0, 0, 0);
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget")),
            Err(d) => (false, d),
        };
        match (ok, c.known_failure) {
            (false, true) => known += 1,
            (false, false) => failed += 1,
            (true, true) => unexpected += 1,
            (true, false) => {}
        }
        println!(
            "criterion {:>2} {} {:<32} [{:.2}s / {}s] {}{}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            detail,
            match (ok, c.known_failure) {
                (false, true) => " (known failure)",
                (true, true) => " (known failure now passes)",
                _ => "",
            }
        );
    }
    println!(
        "acceptance: {} passed, {} failed ({} known)",
        criteria.len() - failed - known,
        failed + known,
        known
    );
    if failed > 0 || unexpected > 0 {
        std::process::exit(1);
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lemma1_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (order, m_max) = (40, 6);
    let mut checks = 0;
    for trial in 0..100 {
        let x = random_series(&mut rng, order, 9, 9);
        let cores = core_powers(&x, m_max);
        let mut power = Series::one(order);
        for m in 0..=m_max {
            let tail = if m == 0 {
                Series::zero(order)
            } else {
                power = power.mul(&x).unwrap();
                tail_power(&x, m).unwrap()
            };
            for n in 0..=order {
                checks += 1;
                let rhs = cores[m].coeff(n) + int(m as i64) * tail.coeff(n);
                ensure(*power.coeff(n) == rhs, || {
                    format!("trial {trial}, m = {m}, n = {n}")
                })?;
            }
        }
    }
    Ok(format!(
        "{checks} (series, m, n) points, m <= {m_max}, n <= {order}, tolerance 0"
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let order = 12;
    let mut checks = 0;
    for trial in 0..25 {
        let x = random_series(&mut rng, order, 9, 9);
        let degree = rng.gen_range(0..=4);
        let a = random_poly(&mut rng, degree, order, order);
        let reference = common::naive_pow(x.coeffs(), 0, order);
        ensure(reference[0].is_one(), || "empty power".into())?;
        for m in 0..=4 {
            let power = x.pow(m as u32);
            let core = core_power(&x, m);
            let tail = (m > 0).then(|| tail_power(&x, m).unwrap());
            for n in 0..=order {
                checks += 1;
                let at = || format!("trial {trial}, m = {m}, n = {n}");
                ensure(*power.coeff(n) == naive_power_coeff(&x, m, n).unwrap(), at)?;
                if let Some(tail) = &tail {
                    let split = naive_core_tail_coeff(&x, m, n).unwrap();
                    ensure(*core.coeff(n) == split.core, at)?;
                    ensure(*tail.coeff(n) == split.tail, at)?;
                } else {
                    ensure(*core.coeff(n) == int(i64::from(n == 0)), at)?;
                }
            }
        }
        let value = a.eval(&x);
        for n in 0..=order {
            checks += 1;
            ensure(
                *value.coeff(n) == naive_poly_coeff(&a, &x, n).unwrap(),
                || format!("trial {trial}, eval at n = {n}"),
            )?;
        }
    }
    Ok(format!(
        "{checks} coefficients against tuple enumeration, m <= 4, n <= {order}, tolerance 0"
    ))
}

fn four_part_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let order = 30;
    let mut checks = 0;
    for trial in 0..100 {
        let x = random_series(&mut rng, order, 9, 9);
        let degree = rng.gen_range(0..=4);
        let a = random_poly(&mut rng, degree, order, 6);
        let dec = Decomposer::new(&a, &x);
        // A(X) by schoolbook convolution, independent of the library product
        let mut alpha = vec![Scalar::zero(); order + 1];
        for (j, aj) in a.coeffs().iter().enumerate() {
            let term =
                common::convolve(aj.coeffs(), &common::naive_pow(x.coeffs(), j, order), order);
            for (acc, t) in alpha.iter_mut().zip(term) {
                *acc += t;
            }
        }
        for n in 1..=order {
            let fixed = dec.delta(n).unwrap() + dec.epsilon(n).unwrap();
            for lambda in 0..n.div_ceil(2) {
                checks += 1;
                let sum = &fixed + dec.head(n, lambda).unwrap() + dec.gamma(n, lambda).unwrap();
                ensure(sum == alpha[n], || {
                    format!("trial {trial}, n = {n}, lambda = {lambda}")
                })?;
            }
            ensure(dec.decompose(n, 0).unwrap().identity_ok, || {
                format!("trial {trial}, n = {n}")
            })?;
        }
    }
    Ok(format!(
        "{checks} (A, X, n, lambda) points, degree <= 4, order {order}, tolerance 0"
    ))
}

fn printed_vectors() -> Outcome {
    let primes = [2i64, 3, 5, 7, 11];
    let [x0, x1, x2, x3, x4] = primes.map(int);
    let x = Series::from_ints(&primes, 4);
    let core3 = core_power(&x, 3);
    let tail3 = tail_power(&x, 3).unwrap();
    let core2 = core_power(&x, 2);
    let two = int(2);
    let three = int(3);

    // printed and definition agree
    let agreed = [
        (
            "(X^[3])_4",
            core3.coeff(4).clone(),
            &three * &x0 * &x2 * &x2 + &three * &x1 * &x1 * &x2,
        ),
        (
            "(X^[3])_2",
            core3.coeff(2).clone(),
            &three * &x0 * &x1 * &x1,
        ),
        ("(X^[3])_3", core3.coeff(3).clone(), &x1 * &x1 * &x1),
        ("(X^<3>)_2", tail3.coeff(2).clone(), &x0 * &x0 * &x2),
        (
            "(X^<3>)_3",
            tail3.coeff(3).clone(),
            &x0 * &x0 * &x3 + &two * &x0 * &x1 * &x2,
        ),
        (
            "(X^<3>)_4",
            tail3.coeff(4).clone(),
            &x0 * &x0 * &x4 + &two * &x0 * &x1 * &x3,
        ),
        ("(X^[2])_2", core2.coeff(2).clone(), &x1 * &x1),
    ];
    for (what, got, want) in agreed {
        ensure(got == want, || format!("{what} mismatch"))?;
    }
    ensure(core_power(&x, 0) == Series::one(4), || "X^[0] != 1".into())?;
    ensure(core_power(&x, 1) == Series::constant(x0.clone(), 4), || {
        "X^[1] != x0".into()
    })?;

    // 15 summands of (X^3)_4: 6 core, 9 in three triangles of the tail
    let split = naive_core_tail_coeff(&x, 3, 4).unwrap();
    ensure((split.core_count, split.tail_count) == (6, 9), || {
        "summand counts".into()
    })?;
    ensure(split.core == *core3.coeff(4), || "core triangle".into())?;
    for (pos, sum) in split.tail_by_position.iter().enumerate() {
        ensure(sum == tail3.coeff(4), || format!("triangle {pos}"))?;
    }

    // low-order terms where the printed expansions differ from the definition
    let by_definition = [
        (
            "(X^[3])_0",
            core3.coeff(0).clone(),
            &x0 * &x0 * &x0,
            x0.clone(),
        ),
        (
            "(X^[3])_1",
            core3.coeff(1).clone(),
            int(0),
            &three * &x0 * &x0 * &x1,
        ),
        ("(X^<3>)_1", tail3.coeff(1).clone(), &x0 * &x0 * &x1, int(0)),
        ("(X^[2])_0", core2.coeff(0).clone(), &x0 * &x0, int(1)),
    ];
    let mut differing = Vec::new();
    for (what, got, definition, printed) in by_definition {
        let split = naive_core_tail_coeff(
            &x,
            if what.contains('2') { 2 } else { 3 },
            what.ends_with('1') as usize,
        )
        .unwrap();
        let oracle = if what.contains('<') {
            split.tail
        } else {
            split.core
        };
        ensure(got == definition && got == oracle, || {
            format!("{what} does not follow the definition")
        })?;
        if got != printed {
            differing.push(what);
        }
    }
    ensure(core2.coeff(1).is_zero() && core2.coeff(3).is_zero(), || {
        "odd X^[2] terms".into()
    })?;
    Ok(format!(
        "x = (2,3,5,7,11): displays match; 6 + 9 summand split; definition differs from printed at {}",
        differing.join(", ")
    ))
}

fn division_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let order = 200;
    let rs = [ratio(1, 2), int(1), int(2)];
    for trial in 0..50 {
        let r = rs[trial % 3].clone();
        let c = ratio(rng.gen_range(5..=16), 4);
        let d = ratio(rng.gen_range(1..=16), 4);
        // coefficients (u/4) * bound * r^n with |u| <= 3 sit strictly inside the premises
        let mut build = |bound: &Scalar, lead_one: bool| {
            let mut rn = Scalar::one();
            let mut coeffs = Vec::with_capacity(order + 1);
            for n in 0..=order {
                coeffs.push(if n == 0 && lead_one {
                    Scalar::one()
                } else {
                    ratio(rng.gen_range(-3..=3), 4) * bound * &rn
                });
                rn *= &r;
            }
            Series::new(coeffs).unwrap()
        };
        let cs = build(&c, true);
        let ds = build(&d, false);
        let report = check_prop1_bound(&cs, &ds, &c, &d, &r, AbsValue::Archimedean).unwrap();
        ensure(report.status == Prop1Status::Pass, || {
            format!("trial {trial}: {:?}", report.status)
        })?;
    }
    Ok(format!(
        "50 instances, r in {{1/2, 1, 2}}, |X_n| <= d(1+c)^n r^n for n <= {order}, 0 violations"
    ))
}

fn gap_claims() -> Outcome {
    let mut pairs = 0;
    let mut radius_fails = 0;
    for q in 2..=10u32 {
        for p in 1..q.min(5) {
            pairs += 1;
            let r = verify_gap_claims(p, q, 0).unwrap();
            let c = c_index(p, q).unwrap();
            let at = |what: &str| format!("(p, q) = ({p}, {q}): {what}");
            let expected = factorial(p as u64);
            let tuples = int(count_power_of_two_tuples(p, c, q) as i64);
            ensure(r.coeff_at_c[p as usize] == expected, || {
                at("leading coefficient != p!")
            })?;
            ensure(tuples == expected, || at("tuple count != p!"))?;
            ensure(r.lower_powers_vanish, || at("lower power nonzero at c"))?;
            let half = 1u64 << (q - p - 1);
            ensure(r.zero_window_radius_verified >= half, || {
                at("window below 2^(q-p-1)")
            })?;
            for j in 1..=p as u64 {
                for n in c - half + 1..c + half {
                    ensure(n == c || !representable(j, n), || {
                        at("popcount oracle disagrees")
                    })?;
                }
            }
            if !r.claimed_radius_holds {
                radius_fails += 1;
            }
        }
    }
    let r = verify_gap_claims(2, 4, 0).unwrap();
    ensure(
        r.counterexamples
            .iter()
            .any(|g| g.j == 2 && g.n == 10 && g.value == int(2)),
        || "missing (L^2)_10 = 2 counterexample".into(),
    )?;

    // punchline for A(t) = (1+z) t^2 + z t + 3 at p = 2, q = 10
    let a = SeriesPoly::new(vec![
        Series::from_ints(&[3], 2),
        Series::from_ints(&[0, 1], 2),
        Series::from_ints(&[1, 1], 2),
    ])
    .unwrap();
    let pl = verify_gap_punchline(&a, 2, 10).unwrap();
    ensure(pl.status == PunchlineStatus::Verified, || {
        format!("punchline {:?}", pl.status)
    })?;
    let target = c_index(2, 10).unwrap();
    let oracle = [(2, 0), (2, 1), (1, 1)]
        .iter()
        .map(|&(j, k)| count_power_of_two_tuples(j, target - k, 10))
        .sum::<u64>();
    ensure(pl.lhs == Some(int(oracle as i64)), || {
        "punchline value disagrees with tuple count".into()
    })?;
    Ok(format!(
        "{pairs} (p, q) pairs: leading = p! (printed q!), window >= 2^(q-p-1); printed radius 2^(q-p) fails for {radius_fails}/{pairs}; punchline A(L)_768 = {oracle}"
    ))
}

fn strictly_decreasing_negative(e: &CriteriaEntry) -> bool {
    e.margins.iter().all(|p| p.margin.certainly_negative())
        && e.margins
            .windows(2)
            .all(|w| match (&w[0].margin, &w[1].margin) {
                (Margin::Bounds { hi: a, .. }, Margin::Bounds { hi: b, .. }) => b < a,
                _ => false,
            })
}

fn superfactorial_criteria() -> Outcome {
    let spec = superfactorial_growth();
    let report = check_criteria(
        &spec,
        &RhoSpec::Factorial,
        3,
        5,
        20..=60,
        CriteriaMode::Archimedean,
    )
    .unwrap();
    ensure(
        report.precondition_x0 && !report.precondition_x0_indeterminate,
        || "|X_0| >= 1".into(),
    )?;
    ensure(
        eval_log_abs(&spec, 0).unwrap().lo() == Some(&int(1)),
        || "|X_0| != 2".into(),
    )?;
    for e in &report.entries {
        ensure(strictly_decreasing_negative(e), || {
            format!("{} lambda = {} m = {}", e.kind, e.lambda, e.m)
        })?;
        ensure(e.verdict == Verdict::SatisfiedEmpirically, || {
            format!("{} verdict", e.kind)
        })?;
    }
    Ok(format!(
        "{} (lambda <= 3, m <= 5, kind) sequences over n in [20, 60]: negative, strictly decreasing; |X_0| = 2",
        report.entries.len()
    ))
}

fn nonarchimedean_criteria() -> Outcome {
    let spec = padic_superfactorial_growth();
    // the magnitude law agrees with exact 2-adic absolute values where those are computable
    let exact = GrowthSpec::FromSeries {
        series: padic_superfactorial_series(8).unwrap(),
        abs: padic_superfactorial_abs(),
    };
    for n in 0..=8 {
        ensure(
            eval_log_abs(&exact, n).unwrap() == eval_log_abs(&spec, n).unwrap(),
            || format!("exact 2-adic magnitude differs at n = {n}"),
        )?;
    }
    let report = check_criteria(
        &spec,
        &RhoSpec::One,
        3,
        5,
        10..=60,
        CriteriaMode::Nonarchimedean,
    )
    .unwrap();
    let mut checked = 0;
    for e in report
        .entries
        .iter()
        .filter(|e| matches!(e.kind, MarginKind::Na1 | MarginKind::Na2))
    {
        checked += 1;
        ensure(strictly_decreasing_negative(e), || {
            format!("{} lambda = {} m = {}", e.kind, e.lambda, e.m)
        })?;
    }
    ensure(report.precondition_x0, || "|X_0|_2 >= 1".into())?;
    Ok(format!(
        "{checked} NA1/NA2 sequences over n in [10, 60]: negative, strictly decreasing"
    ))
}

fn irrationality_witness() -> Outcome {
    let n_max = 50;
    let x = factorial_series(n_max);
    let longer = factorial_series(200);
    let mut missing = Vec::new();
    let mut worst = 0;
    let mut triples = 0;
    for r in [1i64, 2, 4] {
        for c in 1..=10 {
            for d in 1..=10 {
                triples += 1;
                let (c, d, r) = (int(c), int(d), int(r));
                if first_bound_excess(&x, AbsValue::Archimedean, &c, &d, &r, n_max).is_none() {
                    let n = first_bound_excess(&longer, AbsValue::Archimedean, &c, &d, &r, 200);
                    worst = worst.max(n.unwrap_or(usize::MAX));
                    missing.push((c, d, r));
                }
            }
        }
    }
    if missing.is_empty() {
        return Ok(format!(
            "{triples} (c, d, r) triples, each exceeded at some n <= {n_max}"
        ));
    }
    let (c, d, r) = &missing[0];
    Err(format!(
        "{}/{triples} triples have no n <= {n_max} with n! > d(1+c)^n r^n (first: c = {c}, d = {d}, r = {r}); \
         every triple is exceeded by n = {worst}",
        missing.len()
    ))
}

fn negative_control() -> Outcome {
    let spec = GrowthSpec::Geometric { log2_r: int(1) };
    let report = check_criteria(
        &spec,
        &RhoSpec::Factorial,
        3,
        5,
        20..=60,
        CriteriaMode::Archimedean,
    )
    .unwrap();
    for e in &report.entries {
        ensure(e.verdict == Verdict::Violated, || {
            format!("{} lambda = {} m = {}", e.kind, e.lambda, e.m)
        })?;
    }
    ensure(!report.all_satisfied, || "report claims success".into())?;
    Ok(format!(
        "X_n = 2^n against rho = n!: {} of {} conditions VIOLATED",
        report.entries.len(),
        report.entries.len()
    ))
}

fn classifier() -> Outcome {
    let tau = default_tau();
    let geometric = classify_growth(&GrowthSpec::Geometric { log2_r: int(1) }, 100, &tau).unwrap();
    let GrowthClass::Exponential { log2_r_estimate } = &geometric else {
        return Err(format!("2^n classified as {geometric:?}"));
    };
    ensure((log2_r_estimate - int(1)).abs() <= tau, || {
        "estimate for 2^n off by more than 1/2".into()
    })?;

    let facts = GrowthSpec::FromSeries {
        series: factorial_series(100),
        abs: AbsValue::Archimedean,
    };
    let fc = classify_growth(&facts, 100, &tau).unwrap();
    ensure(fc == GrowthClass::Superexponential, || {
        format!("n! classified as {fc:?}")
    })?;

    let ones = GrowthSpec::FromSeries {
        series: Series::from_ints(&[1; 101], 100),
        abs: AbsValue::Archimedean,
    };
    let oc = classify_growth(&ones, 100, &tau).unwrap();
    ensure(
        oc == GrowthClass::Exponential {
            log2_r_estimate: int(0),
        },
        || format!("1 classified as {oc:?}"),
    )?;
    Ok(format!(
        "n_max = 100, tau = 1/2: 2^n exponential (estimate {}), n! superexponential, 1 exponential (estimate 0)",
        fps_core::exactnum::format_scalar(log2_r_estimate)
    ))
}
