//! Truncated formal power series in the deformation parameter `L`.
//!
//! A [`FormalSeries`] stores the exact rational coefficients of
//! `L^0 ..= L^N`; the truncation order `N` travels with every value and
//! binary operations insist that both operands agree on it.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, Q};
use crate::solver::{OperatorFamily, Vector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    /// The update map read input coefficient `order` while producing an output
    /// coefficient of the same or lower order.
    #[error("update map is not contracting: output depends on input coefficient {order}")]
    ValuationViolation { order: usize },
    #[error("update map has no fixed point through order {order}")]
    NotIdempotent { order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalSeries {
    coeffs: Vec<Q>,
}

impl FormalSeries {
    pub fn zero(order: usize) -> Self {
        FormalSeries { coeffs: vec![Q::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Q::one(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `L^k` (zero if `k` exceeds the order).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = Q::one();
        }
        s
    }

    /// Takes the given coefficients, padding with zeros or truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, Q::zero());
        FormalSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Q {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, c: Q) {
        self.coeffs[k] = c;
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, s: &Q) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Multiplies by `L^k`, dropping what falls past the truncation order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self(inner(L))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &FormalSeries) -> Self {
        assert_eq!(self.order(), inner.order(), "truncation orders differ");
        assert!(inner.coeffs[0].is_zero(), "inner series must have zero constant term");
        // Horner: c0 + inner*(c1 + inner*(c2 + ...))
        let n = self.order();
        let mut acc = Self::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            acc.coeffs[0] += c;
        }
        acc
    }
}

fn check_orders(a: &FormalSeries, b: &FormalSeries) {
    assert_eq!(
        a.order(),
        b.order(),
        "formal series with different truncation orders cannot be combined"
    );
}

impl Index<usize> for FormalSeries {
    type Output = Q;
    fn index(&self, k: usize) -> &Q {
        &self.coeffs[k]
    }
}

impl Add for &FormalSeries {
    type Output = FormalSeries;
    fn add(self, rhs: &FormalSeries) -> FormalSeries {
        check_orders(self, rhs);
        FormalSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &FormalSeries {
    type Output = FormalSeries;
    fn sub(self, rhs: &FormalSeries) -> FormalSeries {
        check_orders(self, rhs);
        FormalSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &FormalSeries {
    type Output = FormalSeries;
    fn neg(self) -> FormalSeries {
        FormalSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Truncated Cauchy product.
impl Mul for &FormalSeries {
    type Output = FormalSeries;
    fn mul(self, rhs: &FormalSeries) -> FormalSeries {
        series_mul(self, rhs)
    }
}

pub fn series_mul(a: &FormalSeries, b: &FormalSeries) -> FormalSeries {
    check_orders(a, b);
    let n = a.order();
    let mut out = FormalSeries::zero(n);
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs[..=n - i].iter().enumerate() {
            if !y.is_zero() {
                out.coeffs[i + j] += x * y;
            }
        }
    }
    out
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = fmt_q(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match k {
                0 => f.write_str(&mag)?,
                1 => write!(f, "{mag}*L")?,
                _ => write!(f, "{mag}*L^{k}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The unique `x` with `x = update(x)` through order `order`.
///
/// `update` must be contracting in the `L`-adic sense: coefficient `n` of its
/// output may only read input coefficients `< n`. This is verified by
/// perturbing each input coefficient in turn.
pub fn fixed_point<F>(update: F, order: usize) -> Result<FormalSeries, SeriesError>
where
    F: Fn(&FormalSeries) -> FormalSeries,
{
    let mut x = FormalSeries::zero(order);
    for _ in 0..=order {
        x = update(&x);
        assert_eq!(x.order(), order, "update changed the truncation order");
    }
    let again = update(&x);
    if again != x {
        let bad = (0..=order).find(|&k| again[k] != x[k]).unwrap_or(order);
        return Err(SeriesError::NotIdempotent { order: bad });
    }
    let bump = Q::new(7.into(), 3.into());
    for k in 0..=order {
        let mut probe = x.clone();
        probe.coeffs[k] += &bump;
        let y = update(&probe);
        if (0..=k).any(|j| y[j] != x[j]) {
            return Err(SeriesError::ValuationViolation { order: k });
        }
    }
    Ok(x)
}

/// A truncated series `sum_i v_i L^i` with coefficients in a vector space.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSeries<V> {
    coeffs: Vec<V>,
}

impl<V: Vector> VectorSeries<V> {
    pub fn new(coeffs: Vec<V>) -> Self {
        assert!(!coeffs.is_empty(), "a vector series needs at least the constant term");
        VectorSeries { coeffs }
    }

    pub fn zero_like(template: &V, order: usize) -> Self {
        VectorSeries { coeffs: vec![template.zero_like(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[V] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &V {
        &self.coeffs[k]
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut V {
        &mut self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<V> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        VectorSeries { coeffs: self.coeffs[..=order].to_vec() }
    }
}

/// Calls `visit` with every `k`-tuple of non-negative indices summing to `total`.
pub(crate) fn for_each_composition(total: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(rest: usize, slots: usize, buf: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if slots == 1 {
            buf.push(rest);
            visit(buf);
            buf.pop();
            return;
        }
        for first in 0..=rest {
            buf.push(first);
            go(rest - first, slots - 1, buf, visit);
            buf.pop();
        }
    }
    if k == 0 {
        if total == 0 {
            visit(&[]);
        }
        return;
    }
    go(total, k, &mut Vec::with_capacity(k), visit);
}

/// Plugs `phi` into the full operator `sum_{n,k} O_{n,k}(phi, ..., phi) L^{n+k-1}`
/// (linear term included) and returns the result through `order`.
pub fn substitute_series<F: OperatorFamily>(
    ops: &F,
    phi: &VectorSeries<F::Vector>,
    order: usize,
) -> VectorSeries<F::Vector> {
    assert!(phi.order() >= order, "phi is truncated below the requested order");
    let mut out = VectorSeries::zero_like(phi.coeff(0), order);
    for m in 0..=order {
        let mut acc = ops.linear(phi.coeff(m));
        for &(label, arity) in ops.support() {
            let shift = label + arity - 1;
            if shift > m {
                continue;
            }
            for_each_composition(m - shift, arity, &mut |idx| {
                let args: Vec<&F::Vector> = idx.iter().map(|&i| phi.coeff(i)).collect();
                acc.add_assign(&ops.apply(label, &args));
            });
        }
        out.coeffs[m] = acc;
    }
    out
}
