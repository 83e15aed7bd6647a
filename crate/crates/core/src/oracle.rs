//! Brute-force reference implementations.
//!
//! Every function here enumerates ordered index tuples directly and shares
//! no code with the convolution-based paths in [`crate::series`] and
//! [`crate::decomp`]. The hard caps keep enumeration sizes bounded.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{int, Scalar};
use crate::series::{Series, SeriesPoly};

pub const MAX_POWER: usize = 4;
pub const MAX_INDEX: usize = 16;

fn check_limits(m: usize, n: usize, x: &Series) -> Result<()> {
    if m > MAX_POWER {
        return Err(Error::LimitExceeded {
            what: "oracle power",
            limit: MAX_POWER,
            got: m,
            hint: "use Series::pow for larger powers",
        });
    }
    if n > MAX_INDEX {
        return Err(Error::LimitExceeded {
            what: "oracle coefficient index",
            limit: MAX_INDEX,
            got: n,
            hint: "use Series::pow for larger indices",
        });
    }
    if n > x.order() {
        return Err(Error::Precondition(format!(
            "index {n} beyond series order {}",
            x.order()
        )));
    }
    Ok(())
}

/// Calls `visit` with every ordered `m`-tuple of nonnegative integers
/// summing to `n`.
fn for_each_composition(m: usize, n: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(slots: &mut Vec<usize>, m: usize, remaining: usize, visit: &mut dyn FnMut(&[usize])) {
        if slots.len() + 1 == m {
            slots.push(remaining);
            visit(slots);
            slots.pop();
            return;
        }
        for k in 0..=remaining {
            slots.push(k);
            go(slots, m, remaining - k, visit);
            slots.pop();
        }
    }
    if m == 0 {
        if n == 0 {
            visit(&[]);
        }
        return;
    }
    go(&mut Vec::with_capacity(m), m, n, visit);
}

fn tuple_product(x: &Series, tuple: &[usize]) -> Scalar {
    tuple.iter().fold(Scalar::one(), |acc, &k| acc * x.coeff(k))
}

/// `(X^m)_n` as the sum over all ordered `m`-tuples summing to `n`.
pub fn naive_power_coeff(x: &Series, m: usize, n: usize) -> Result<Scalar> {
    check_limits(m, n, x)?;
    let mut sum = Scalar::zero();
    for_each_composition(m, n, &mut |t| sum += tuple_product(x, t));
    Ok(sum)
}

/// Split of the tuples of `(X^m)_n` into the core (every index at most
/// `n/2`) and the tuples with one large index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreTailSplit {
    pub core: Scalar,
    /// Tail sum divided by `m`, so that `core + m * tail = (X^m)_n`.
    pub tail: Scalar,
    pub core_count: usize,
    pub tail_count: usize,
    /// Sum of the tail tuples whose large index sits at each position.
    pub tail_by_position: Vec<Scalar>,
}

/// Enumerates the tuples of `(X^m)_n` and classifies each one.
///
/// Panics if a tuple has two indices above `n/2`, which cannot happen for
/// nonnegative indices summing to `n`.
pub fn naive_core_tail_coeff(x: &Series, m: usize, n: usize) -> Result<CoreTailSplit> {
    if m == 0 {
        return Err(Error::Usage("core/tail split needs m >= 1".into()));
    }
    check_limits(m, n, x)?;
    let mut split = CoreTailSplit {
        core: Scalar::zero(),
        tail: Scalar::zero(),
        core_count: 0,
        tail_count: 0,
        tail_by_position: vec![Scalar::zero(); m],
    };
    let mut tail_total = Scalar::zero();
    for_each_composition(m, n, &mut |t| {
        let product = tuple_product(x, t);
        // k > n/2  <=>  2k > n
        let large: Vec<usize> = (0..t.len()).filter(|&i| 2 * t[i] > n).collect();
        match large.as_slice() {
            [] => {
                split.core += &product;
                split.core_count += 1;
            }
            [pos] => {
                split.tail_by_position[*pos] += &product;
                tail_total += product;
                split.tail_count += 1;
            }
            _ => panic!("tuple {t:?} has more than one index above {n}/2"),
        }
    });
    split.tail = tail_total / int(m as i64);
    Ok(split)
}

/// `A(X)_n = sum_j sum_k (A_j)_k (X^j)_(n-k)` by enumeration.
pub fn naive_poly_coeff(a: &SeriesPoly, x: &Series, n: usize) -> Result<Scalar> {
    if a.degree() > MAX_POWER {
        return Err(Error::LimitExceeded {
            what: "oracle polynomial degree",
            limit: MAX_POWER,
            got: a.degree(),
            hint: "use SeriesPoly::eval for larger degrees",
        });
    }
    if n > a.order() {
        return Err(Error::Precondition(format!(
            "index {n} beyond polynomial order {}",
            a.order()
        )));
    }
    let mut sum = Scalar::zero();
    for (j, aj) in a.coeffs().iter().enumerate() {
        for k in 0..=n {
            let c = aj.coeff(k);
            if !c.is_zero() {
                sum += c * naive_power_coeff(x, j, n - k)?;
            }
        }
    }
    Ok(sum)
}
