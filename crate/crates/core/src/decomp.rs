//! Core/tail splitting of series powers and the four-part decomposition of
//! the coefficients of `A(X)`.
//!
//! For a series `X` the core power `X^[m]` keeps, at index `n`, only the
//! tuples `k_1 + ... + k_m = n` with every `k_i <= n/2`; the tail power is
//! `(X^<m>)_n = sum_{l < n/2} (X^(m-1))_l X_(n-l)`, and
//! `X^m = X^[m] + m X^<m>`.
//!
//! Building on that, for `1 <= n` and `lambda < n/2`,
//!
//! ```text
//! A(X)_n = head + gamma + delta + epsilon
//! head    = sum_{l < lambda}        A'(X)_l X_(n-l)
//! gamma   = sum_{lambda <= l < n/2} A'(X)_l X_(n-l)
//! delta   = sum_j (A_j X^[j])_n
//! epsilon = sum_j sum_{k+p+q=n, q<p<=n/2} j (A_j)_k (X^(j-1))_q X_p
//! ```
//!
//! Real-valued bounds are read as integers: `k <= n/2` is `k <= floor(n/2)`
//! and `l < n/2` is `l <= ceil(n/2) - 1`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, scalar_serde, Scalar};
use crate::series::{Series, SeriesPoly};

/// `X^[0], X^[1], ..., X^[m_max]`, all at the order of `x`.
///
/// Index `n` only depends on `x_0..=x_(n/2)`, and indices `2b` and `2b + 1`
/// share the bound `b`, so for each `b` the powers of the prefix polynomial
/// `x_0 + ... + x_b z^b` are built once and read off at both indices.
pub fn core_powers(x: &Series, m_max: usize) -> Vec<Series> {
    let order = x.order();
    let mut out = vec![vec![Scalar::zero(); order + 1]; m_max + 1];
    for bound in 0..=order / 2 {
        let top = (2 * bound + 1).min(order);
        let prefix = &x.coeffs()[..=bound];
        // acc = prefix^m truncated at `top`
        let mut acc = vec![Scalar::zero(); top + 1];
        acc[0] = Scalar::from_integer(1.into());
        for (m, row) in out.iter_mut().enumerate() {
            if m > 0 {
                acc = mul_bounded(&acc, prefix, top);
            }
            row[2 * bound..=top].clone_from_slice(&acc[2 * bound..=top]);
        }
    }
    out.into_iter()
        .map(|c| Series::new(c).expect("nonempty"))
        .collect()
}

fn mul_bounded(acc: &[Scalar], prefix: &[Scalar], top: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); top + 1];
    for (i, a) in acc.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (k, b) in prefix.iter().enumerate().take(top + 1 - i) {
            if !b.is_zero() {
                out[i + k] += a * b;
            }
        }
    }
    out
}

/// `X^[m]`. `X^[0] = 1` and `X^[1]` is the constant `x_0`.
pub fn core_power(x: &Series, m: usize) -> Series {
    core_powers(x, m).pop().expect("m_max + 1 entries")
}

/// `X^<m>` for `m >= 1`, built from the full power `X^(m-1)`.
pub fn tail_power(x: &Series, m: usize) -> Result<Series> {
    if m == 0 {
        return Err(Error::Usage("tail power X^<m> needs m >= 1".into()));
    }
    Ok(tail_from_power(&x.pow((m - 1) as u32), x))
}

fn tail_from_power(prev_power: &Series, x: &Series) -> Series {
    let coeffs = (0..=x.order())
        .map(|n| {
            let mut acc = Scalar::zero();
            for l in 0..n.div_ceil(2) {
                let (a, b) = (prev_power.coeff(l), x.coeff(n - l));
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc
        })
        .collect();
    Series::new(coeffs).expect("nonempty")
}

/// The four parts of `A(X)_n` for one `(n, lambda)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompComponents {
    pub n: usize,
    pub lambda: usize,
    #[serde(with = "scalar_serde")]
    pub head: Scalar,
    #[serde(with = "scalar_serde")]
    pub gamma: Scalar,
    #[serde(with = "scalar_serde")]
    pub delta: Scalar,
    #[serde(with = "scalar_serde")]
    pub epsilon: Scalar,
    #[serde(with = "scalar_serde")]
    pub alpha_n: Scalar,
    pub identity_ok: bool,
}

impl DecompComponents {
    pub fn sum(&self) -> Scalar {
        &self.head + &self.gamma + &self.delta + &self.epsilon
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionSum {
    pub count: u64,
    #[serde(with = "scalar_serde")]
    pub sum: Scalar,
}

impl RegionSum {
    fn empty() -> Self {
        RegionSum {
            count: 0,
            sum: Scalar::zero(),
        }
    }

    fn add(&mut self, v: &Scalar) {
        self.count += 1;
        self.sum += v;
    }
}

/// Every monomial `(A_j)_k x_(l_1) ... x_(l_j)` of `A(X)_n`, sorted into the
/// region it contributes to. Only monomials with `(A_j)_k != 0` are counted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionTally {
    pub n: usize,
    pub lambda: usize,
    pub core: RegionSum,
    pub epsilon: RegionSum,
    pub gamma: RegionSum,
    pub head: RegionSum,
}

impl RegionTally {
    pub fn total(&self) -> Scalar {
        &self.core.sum + &self.epsilon.sum + &self.gamma.sum + &self.head.sum
    }

    pub fn count(&self) -> u64 {
        self.core.count + self.epsilon.count + self.gamma.count + self.head.count
    }

    /// Whether the region sums agree with the closed-form components.
    pub fn matches(&self, c: &DecompComponents) -> bool {
        self.core.sum == c.delta
            && self.epsilon.sum == c.epsilon
            && self.gamma.sum == c.gamma
            && self.head.sum == c.head
    }
}

/// Shared precomputation for decomposing many coefficients of one `A(X)`.
#[derive(Debug, Clone)]
pub struct Decomposer {
    poly: SeriesPoly,
    x: Series,
    /// `X^0 ..= X^(deg-1)`
    x_powers: Vec<Series>,
    /// `X^[0] ..= X^[deg]`
    cores: Vec<Series>,
    derivative_at_x: Series,
    value: Series,
}

impl Decomposer {
    /// Works at the smaller of the two truncation orders.
    pub fn new(poly: &SeriesPoly, x: &Series) -> Self {
        let order = poly.order().min(x.order());
        let poly = poly.truncated(order).expect("min order");
        let x = x.truncated(order).expect("min order");
        let deg = poly.degree();
        let mut x_powers = vec![Series::one(order)];
        for _ in 1..deg {
            let next = x_powers.last().unwrap().mul(&x).expect("same order");
            x_powers.push(next);
        }
        let cores = core_powers(&x, deg);
        let derivative_at_x = poly.derivative().eval(&x);
        let value = poly.eval(&x);
        Decomposer {
            poly,
            x,
            x_powers,
            cores,
            derivative_at_x,
            value,
        }
    }

    pub fn order(&self) -> usize {
        self.x.order()
    }

    /// `A(X)` through the working order.
    pub fn value(&self) -> &Series {
        &self.value
    }

    /// `A'(X)` through the working order.
    pub fn derivative_at_x(&self) -> &Series {
        &self.derivative_at_x
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.order() {
            return Err(Error::Precondition(format!(
                "index {n} beyond truncation order {}",
                self.order()
            )));
        }
        Ok(())
    }

    fn check_split(&self, n: usize, lambda: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Precondition(
                "decomposition needs n >= 1 (lambda < n/2 is unsatisfiable at n = 0)".into(),
            ));
        }
        self.check_index(n)?;
        if 2 * lambda >= n {
            return Err(Error::Precondition(format!(
                "lambda = {lambda} must satisfy lambda < n/2 = {n}/2"
            )));
        }
        Ok(())
    }

    pub fn delta(&self, n: usize) -> Result<Scalar> {
        self.check_index(n)?;
        let mut acc = Scalar::zero();
        for (a, core) in self.poly.coeffs().iter().zip(&self.cores) {
            for k in 0..=n {
                let (c, v) = (a.coeff(k), core.coeff(n - k));
                if !c.is_zero() && !v.is_zero() {
                    acc += c * v;
                }
            }
        }
        Ok(acc)
    }

    pub fn epsilon(&self, n: usize) -> Result<Scalar> {
        self.check_index(n)?;
        let mut acc = Scalar::zero();
        for (j, a) in self.poly.coeffs().iter().enumerate().skip(1) {
            let prev = &self.x_powers[j - 1];
            let mut inner = Scalar::zero();
            for p in 1..=n / 2 {
                let xp = self.x.coeff(p);
                if xp.is_zero() {
                    continue;
                }
                let mut s = Scalar::zero();
                for q in 0..p.min(n - p + 1) {
                    let (c, v) = (a.coeff(n - p - q), prev.coeff(q));
                    if !c.is_zero() && !v.is_zero() {
                        s += c * v;
                    }
                }
                inner += s * xp;
            }
            acc += inner * int(j as i64);
        }
        Ok(acc)
    }

    fn band(&self, n: usize, ls: std::ops::Range<usize>) -> Scalar {
        ls.map(|l| self.derivative_at_x.coeff(l) * self.x.coeff(n - l))
            .fold(Scalar::zero(), |acc, v| acc + v)
    }

    pub fn gamma(&self, n: usize, lambda: usize) -> Result<Scalar> {
        self.check_split(n, lambda)?;
        Ok(self.band(n, lambda..n.div_ceil(2)))
    }

    pub fn head(&self, n: usize, lambda: usize) -> Result<Scalar> {
        self.check_split(n, lambda)?;
        Ok(self.band(n, 0..lambda))
    }

    /// All four components of `A(X)_n`. `identity_ok` records whether they
    /// sum to `A(X)_n`; it is false only if the implementation is broken.
    pub fn decompose(&self, n: usize, lambda: usize) -> Result<DecompComponents> {
        self.check_split(n, lambda)?;
        let mut c = DecompComponents {
            n,
            lambda,
            head: self.head(n, lambda)?,
            gamma: self.gamma(n, lambda)?,
            delta: self.delta(n)?,
            epsilon: self.epsilon(n)?,
            alpha_n: self.value.coeff(n).clone(),
            identity_ok: true,
        };
        c.identity_ok = c.sum() == c.alpha_n;
        Ok(c)
    }

    /// Enumerates the monomials of `A(X)_n` and tallies them by region.
    /// Exponential in the degree; meant for small `n`.
    pub fn region_tally(&self, n: usize, lambda: usize) -> Result<RegionTally> {
        self.check_split(n, lambda)?;
        let mut tally = RegionTally {
            n,
            lambda,
            core: RegionSum::empty(),
            epsilon: RegionSum::empty(),
            gamma: RegionSum::empty(),
            head: RegionSum::empty(),
        };
        let mut indices = Vec::new();
        for (j, a) in self.poly.coeffs().iter().enumerate() {
            for k in 0..=n {
                let c = a.coeff(k);
                if c.is_zero() {
                    continue;
                }
                self.tally_tuples(&mut tally, c, j, n - k, &mut indices);
            }
        }
        Ok(tally)
    }

    /// Walks every ordered `parts`-tuple summing to `remaining`.
    fn tally_tuples(
        &self,
        tally: &mut RegionTally,
        coeff: &Scalar,
        parts: usize,
        remaining: usize,
        indices: &mut Vec<usize>,
    ) {
        if parts == 0 {
            if remaining == 0 {
                self.classify(tally, coeff, indices);
            }
            return;
        }
        if parts == 1 {
            indices.push(remaining);
            self.classify(tally, coeff, indices);
            indices.pop();
            return;
        }
        for l in 0..=remaining {
            indices.push(l);
            self.tally_tuples(tally, coeff, parts - 1, remaining - l, indices);
            indices.pop();
        }
    }

    fn classify(&self, tally: &mut RegionTally, coeff: &Scalar, indices: &[usize]) {
        let n = tally.n;
        let s: usize = indices.iter().sum();
        let value = indices
            .iter()
            .fold(coeff.clone(), |acc, &l| acc * self.x.coeff(l));
        match indices.iter().copied().find(|&l| 2 * l > s) {
            None => tally.core.add(&value),
            Some(p) if 2 * p <= n => tally.epsilon.add(&value),
            Some(p) if n - p >= tally.lambda => tally.gamma.add(&value),
            Some(_) => tally.head.add(&value),
        }
    }
}

pub fn delta(a: &SeriesPoly, x: &Series, n: usize) -> Result<Scalar> {
    Decomposer::new(a, x).delta(n)
}

pub fn epsilon(a: &SeriesPoly, x: &Series, n: usize) -> Result<Scalar> {
    Decomposer::new(a, x).epsilon(n)
}

pub fn gamma(a: &SeriesPoly, x: &Series, n: usize, lambda: usize) -> Result<Scalar> {
    Decomposer::new(a, x).gamma(n, lambda)
}

pub fn head(a: &SeriesPoly, x: &Series, n: usize, lambda: usize) -> Result<Scalar> {
    Decomposer::new(a, x).head(n, lambda)
}

pub fn decompose(a: &SeriesPoly, x: &Series, n: usize, lambda: usize) -> Result<DecompComponents> {
    Decomposer::new(a, x).decompose(n, lambda)
}

pub fn region_tally(a: &SeriesPoly, x: &Series, n: usize, lambda: usize) -> Result<RegionTally> {
    Decomposer::new(a, x).region_tally(n, lambda)
}
