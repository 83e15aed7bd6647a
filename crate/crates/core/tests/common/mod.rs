//! Reference computations for integration tests. Nothing here calls the
//! library's arithmetic beyond constructing values.
#![allow(dead_code)]

use fps_core::exactnum::{int, ratio};
use fps_core::{Scalar, Series, SeriesPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// `num / den` with `|num| <= max_num` and `1 <= den <= max_den`.
pub fn rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Scalar {
    ratio(
        rng.gen_range(-max_num..=max_num),
        rng.gen_range(1..=max_den),
    )
}

pub fn random_series<R: Rng>(rng: &mut R, order: usize, max_num: i64, max_den: i64) -> Series {
    Series::new(
        (0..=order)
            .map(|_| rational(rng, max_num, max_den))
            .collect(),
    )
    .unwrap()
}

/// Degree-`degree` polynomial whose coefficient series have degree at most
/// `max_deg` in `z`.
pub fn random_poly<R: Rng>(rng: &mut R, degree: usize, order: usize, max_deg: usize) -> SeriesPoly {
    let coeffs = (0..=degree)
        .map(|_| {
            let c = (0..=order)
                .map(|k| {
                    if k <= max_deg {
                        rational(rng, 9, 9)
                    } else {
                        Scalar::zero()
                    }
                })
                .collect();
            Series::new(c).unwrap()
        })
        .collect();
    SeriesPoly::new(coeffs).unwrap()
}

/// Schoolbook Cauchy product through `order`.
pub fn convolve(a: &[Scalar], b: &[Scalar], order: usize) -> Vec<Scalar> {
    (0..=order)
        .map(|n| {
            (0..=n)
                .filter(|&k| k < a.len() && n - k < b.len())
                .fold(Scalar::zero(), |acc, k| acc + &a[k] * &b[n - k])
        })
        .collect()
}

pub fn naive_pow(x: &[Scalar], m: usize, order: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); order + 1];
    out[0] = Scalar::one();
    for _ in 0..m {
        out = convolve(&out, x, order);
    }
    out
}

/// Ordered `j`-tuples of exponents `e_i <= max_exp` with `sum 2^(e_i) = n`,
/// found by trying every tuple.
pub fn count_power_of_two_tuples(j: u32, n: u64, max_exp: u32) -> u64 {
    fn go(parts: u32, remaining: u64, max_exp: u32) -> u64 {
        if parts == 0 {
            return u64::from(remaining == 0);
        }
        (0..=max_exp)
            .map(|e| 1u64 << e)
            .filter(|&v| v <= remaining)
            .map(|v| go(parts - 1, remaining - v, max_exp))
            .sum()
    }
    go(j, n, max_exp)
}

/// `n` is a sum of exactly `j` powers of two (each `>= 1`): splitting
/// `2^k` into two copies of `2^(k-1)` raises the part count by one, so the
/// reachable counts are `popcount(n) ..= n`.
pub fn representable(j: u64, n: u64) -> bool {
    n > 0 && u64::from(n.count_ones()) <= j && j <= n
}

/// `2^e` for an integer `e`.
pub fn pow2(e: &BigInt) -> Scalar {
    let shift: usize = e.abs().try_into().expect("exponent fits");
    let p = Scalar::from_integer(BigInt::one() << shift);
    if e.is_negative() {
        p.recip()
    } else {
        p
    }
}

/// `2^lo <= x <= 2^hi` for integer bounds.
pub fn within_pow2(lo: &Scalar, hi: &Scalar, x: &Scalar) -> bool {
    assert!(
        lo.is_integer() && hi.is_integer(),
        "integer bounds expected"
    );
    pow2(lo.numer()) <= *x && *x <= pow2(hi.numer())
}

pub fn factorial(n: u64) -> Scalar {
    (1..=n).fold(int(1), |acc, k| acc * int(k as i64))
}
