use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::linalg::QMatrix;
use crate::rational::{QVec, Q};

/// Vector-space operations over exact rational scalars.
pub trait Vector: Clone + PartialEq + Debug + Send + Sync {
    /// The zero vector of the same space as `self`.
    fn zero_like(&self) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn scale(&self, s: &Q) -> Self;
    fn is_zero_vector(&self) -> bool;

    fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    fn sum<'a, I>(template: &Self, items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        let mut acc = template.zero_like();
        for v in items {
            acc.add_assign(v);
        }
        acc
    }
}

impl Vector for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }

    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn scale(&self, s: &Q) -> Self {
        self * s
    }

    fn is_zero_vector(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Vector for QVec {
    fn zero_like(&self) -> Self {
        QVec::zeros(self.len())
    }

    fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    fn scale(&self, s: &Q) -> Self {
        QVec(self.0.iter().map(|x| x * s).collect())
    }

    fn is_zero_vector(&self) -> bool {
        QVec::is_zero(self)
    }
}

/// The operators `O_{n,k}` of an equation
/// `O_{0,1}(phi) + sum_{n>=0,k>=2} O_{n,k}(phi, ..., phi) L^{n+k-1} = psi`,
/// plus a right inverse of the linear part.
///
/// `O_{n,1}` vanishes for `n >= 1`; the linear part is [`linear`](Self::linear).
/// Implementations must be pure so that evaluation can run in parallel.
pub trait OperatorFamily: Sync {
    type Vector: Vector;

    /// The `(label, arity)` pairs, arity at least two, whose operator may be nonzero.
    fn support(&self) -> &[(usize, usize)];

    /// `O_{label, args.len()}(args)`; zero outside the support.
    fn apply(&self, label: usize, args: &[&Self::Vector]) -> Self::Vector;

    /// `O_{0,1}`.
    fn linear(&self, v: &Self::Vector) -> Self::Vector;

    /// A linear map `P` with `O_{0,1}(P(v)) = v` whenever `v` is in the image
    /// of `O_{0,1}`; the exact inverse when `O_{0,1}` is invertible.
    fn right_inverse(&self, v: &Self::Vector) -> Self::Vector;

    /// Image membership test used for the consistency conditions.
    fn in_image(&self, v: &Self::Vector) -> bool {
        self.linear(&self.right_inverse(v)) == *v
    }

    fn max_arity(&self) -> usize {
        self.support().iter().map(|&(_, k)| k).max().unwrap_or(1)
    }

    fn has(&self, label: usize, arity: usize) -> bool {
        self.support().contains(&(label, arity))
    }
}

/// A multilinear map `(Q^d)^k -> Q^m` stored as sparse coefficient terms
/// `out[o] += c * a_1[i_1] * ... * a_k[i_k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multilinear {
    arity: usize,
    dim_in: usize,
    dim_out: usize,
    terms: BTreeMap<(Vec<usize>, usize), Q>,
}

impl Multilinear {
    pub fn new(arity: usize, dim_in: usize, dim_out: usize) -> Self {
        Multilinear { arity, dim_in, dim_out, terms: BTreeMap::new() }
    }

    pub fn with_term(mut self, out: usize, inputs: &[usize], c: Q) -> Self {
        self.add_term(out, inputs, c);
        self
    }

    pub fn add_term(&mut self, out: usize, inputs: &[usize], c: Q) {
        assert_eq!(inputs.len(), self.arity, "term arity mismatch");
        assert!(out < self.dim_out && inputs.iter().all(|&i| i < self.dim_in), "term index out of range");
        if c.is_zero() {
            return;
        }
        let key = (inputs.to_vec(), out);
        let entry = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// Terms as `(output index, input indices, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &[usize], &Q)> {
        self.terms.iter().map(|((idx, o), c)| (*o, idx.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn apply(&self, args: &[&QVec]) -> QVec {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        let mut out = QVec::zeros(self.dim_out);
        'terms: for ((idx, o), c) in &self.terms {
            let mut prod = c.clone();
            for (a, &i) in args.iter().zip(idx) {
                let x = &a[i];
                if x.is_zero() {
                    continue 'terms;
                }
                prod *= x;
            }
            out[*o] += prod;
        }
        out
    }

    /// Composes with a linear map on the output side: `m * self`.
    pub fn then(&self, m: &QMatrix) -> Multilinear {
        assert_eq!(m.cols(), self.dim_out);
        let mut out = Multilinear::new(self.arity, self.dim_in, m.rows());
        for ((idx, o), c) in &self.terms {
            for r in 0..m.rows() {
                let f = &m[(r, *o)];
                if !f.is_zero() {
                    out.add_term(r, idx, c * f);
                }
            }
        }
        out
    }

    /// Dense bilinear or higher map with the given output vectors on basis tuples.
    pub fn from_fn(arity: usize, dim_in: usize, dim_out: usize, f: impl Fn(&[usize]) -> QVec) -> Self {
        let mut m = Multilinear::new(arity, dim_in, dim_out);
        let mut idx = vec![0usize; arity];
        loop {
            let v = f(&idx);
            for (o, c) in v.0.into_iter().enumerate() {
                m.add_term(o, &idx, c);
            }
            // odometer
            let mut p = arity;
            loop {
                if p == 0 {
                    return m;
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < dim_in {
                    break;
                }
                idx[p] = 0;
            }
        }
    }
}

/// Operator family on `Q^d` given by a linear matrix and sparse multilinear maps.
#[derive(Debug, Clone)]
pub struct TensorFamily {
    dim: usize,
    linear: QMatrix,
    right_inverse: QMatrix,
    invertible: bool,
    ops: BTreeMap<(usize, usize), Multilinear>,
    support: Vec<(usize, usize)>,
}

impl TensorFamily {
    /// Uses the exact inverse when `linear` is invertible and a generalized
    /// inverse otherwise.
    pub fn new(linear: QMatrix) -> Self {
        assert!(linear.is_square(), "O_{{0,1}} must be square");
        let (p, invertible) = match linear.inverse() {
            Some(inv) => (inv, true),
            None => (linear.generalized_inverse(), false),
        };
        Self::with_right_inverse(linear, p, invertible)
    }

    /// Uses a caller-supplied right inverse, e.g. a Green operator.
    pub fn with_right_inverse(linear: QMatrix, right_inverse: QMatrix, invertible: bool) -> Self {
        let dim = linear.rows();
        assert!(linear.is_square() && right_inverse.is_square() && right_inverse.rows() == dim);
        TensorFamily { dim, linear, right_inverse, invertible, ops: BTreeMap::new(), support: Vec::new() }
    }

    pub fn with_op(mut self, label: usize, op: Multilinear) -> Self {
        self.set_op(label, op);
        self
    }

    pub fn set_op(&mut self, label: usize, op: Multilinear) {
        let arity = op.arity();
        assert!(arity >= 2, "nonlinear operators need arity >= 2 (O_{{n,1}} = 0 for n >= 1)");
        assert!(op.dim_in() == self.dim && op.dim_out() == self.dim, "operator dimension mismatch");
        if op.is_zero() {
            self.ops.remove(&(label, arity));
        } else {
            self.ops.insert((label, arity), op);
        }
        self.support = self.ops.keys().copied().collect();
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn linear_matrix(&self) -> &QMatrix {
        &self.linear
    }

    pub fn right_inverse_matrix(&self) -> &QMatrix {
        &self.right_inverse
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn op(&self, label: usize, arity: usize) -> Option<&Multilinear> {
        self.ops.get(&(label, arity))
    }

    pub fn ops(&self) -> impl Iterator<Item = (&(usize, usize), &Multilinear)> {
        self.ops.iter()
    }
}

impl OperatorFamily for TensorFamily {
    type Vector = QVec;

    fn support(&self) -> &[(usize, usize)] {
        &self.support
    }

    fn apply(&self, label: usize, args: &[&QVec]) -> QVec {
        match self.ops.get(&(label, args.len())) {
            Some(op) => op.apply(args),
            None => QVec::zeros(self.dim),
        }
    }

    fn linear(&self, v: &QVec) -> QVec {
        self.linear.mul_vec(v)
    }

    fn right_inverse(&self, v: &QVec) -> QVec {
        self.right_inverse.mul_vec(v)
    }

    fn in_image(&self, v: &QVec) -> bool {
        self.invertible || self.linear(&self.right_inverse(v)) == *v
    }
}

/// The one-dimensional family of `a_d x^d L^{d-1} + ... + a_2 x^2 L + a_1 x = y`.
#[derive(Debug, Clone)]
pub struct ScalarPolynomial {
    coeffs: Vec<Q>,
    support: Vec<(usize, usize)>,
}

impl ScalarPolynomial {
    /// `coeffs[0]` is `a_1`; it must be nonzero.
    pub fn new(coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty() && !coeffs[0].is_zero(), "a_1 must be nonzero");
        let support = (2..=coeffs.len()).filter(|&k| !coeffs[k - 1].is_zero()).map(|k| (0, k)).collect();
        ScalarPolynomial { coeffs, support }
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k - 1).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }
}

impl OperatorFamily for ScalarPolynomial {
    type Vector = Q;

    fn support(&self) -> &[(usize, usize)] {
        &self.support
    }

    fn apply(&self, label: usize, args: &[&Q]) -> Q {
        if label != 0 {
            return Q::zero();
        }
        args.iter().fold(self.coeff(args.len()), |acc, x| acc * *x)
    }

    fn linear(&self, v: &Q) -> Q {
        &self.coeffs[0] * v
    }

    fn right_inverse(&self, v: &Q) -> Q {
        v / &self.coeffs[0]
    }

    fn in_image(&self, _: &Q) -> bool {
        true
    }
}
