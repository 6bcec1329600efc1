//! A BF-type theory on the configuration space of `n` points on the line.
//!
//! Fields are step functions `f_1..f_n`, the action is
//! `sum_{i<j} ∫ f_i f_j' - sum_i f_i(x_i)`, and the equation of motion reads
//! `A f = theta` with `A_ij = sg(j - i)` and `theta_i` the Heaviside step at `x_i`.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::linalg::QMatrix;
use crate::rational::{fmt_q, q, qf, QVec, Q};

/// A piecewise constant function on the line, evaluated with the midpoint
/// convention at its jump points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    jumps: Vec<Q>,
    /// `values[0]` on `(-inf, jumps[0])`, ..., `values[m]` on `(jumps[m-1], inf)`.
    values: Vec<Q>,
}

impl StepFunction {
    /// Drops jump points across which the value does not change.
    pub fn new(jumps: Vec<Q>, values: Vec<Q>) -> Self {
        assert_eq!(values.len(), jumps.len() + 1, "one value per open interval");
        assert!(jumps.windows(2).all(|w| w[0] < w[1]), "jump points must increase strictly");
        let mut js = Vec::with_capacity(jumps.len());
        let mut vs = vec![values[0].clone()];
        for (x, v) in jumps.into_iter().zip(values.into_iter().skip(1)) {
            if v != *vs.last().unwrap() {
                js.push(x);
                vs.push(v);
            }
        }
        StepFunction { jumps: js, values: vs }
    }

    pub fn constant(c: Q) -> Self {
        StepFunction { jumps: vec![], values: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(Q::zero())
    }

    /// Heaviside step: 0 left of `x`, 1 right of it.
    pub fn theta(x: Q) -> Self {
        StepFunction { jumps: vec![x], values: vec![Q::zero(), Q::one()] }
    }

    pub fn jumps(&self) -> &[Q] {
        &self.jumps
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.jumps.is_empty() && self.values[0].is_zero()
    }

    /// Value at `y`; at a jump point the average of the one-sided limits.
    pub fn eval(&self, y: &Q) -> Q {
        let i = self.jumps.partition_point(|x| x < y);
        if i < self.jumps.len() && self.jumps[i] == *y {
            (&self.values[i] + &self.values[i + 1]) * qf(1, 2)
        } else {
            self.values[i].clone()
        }
    }

    /// `(location, right limit - left limit)` for every jump.
    pub fn jump_sizes(&self) -> impl Iterator<Item = (&Q, Q)> {
        self.jumps.iter().enumerate().map(|(i, x)| (x, &self.values[i + 1] - &self.values[i]))
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.jumps.clone(), self.values.iter().map(|v| v * s).collect())
    }

    /// Value on the open interval just left of `x` (or at `x` if no jump there).
    fn left_limit(&self, x: &Q) -> Q {
        self.values[self.jumps.partition_point(|j| j < x)].clone()
    }

    pub fn add(&self, other: &StepFunction) -> StepFunction {
        let mut jumps: Vec<Q> = self.jumps.iter().chain(&other.jumps).cloned().collect();
        jumps.sort();
        jumps.dedup();
        let mut values: Vec<Q> = jumps.iter().map(|x| self.left_limit(x) + other.left_limit(x)).collect();
        values.push(self.values.last().unwrap() + other.values.last().unwrap());
        Self::new(jumps, values)
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", fmt_q(&self.values[0]))?;
        for (x, v) in self.jumps.iter().zip(&self.values[1..]) {
            write!(f, " |{}| {}", fmt_q(x), fmt_q(v))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("configuration points must be pairwise distinct; {0} repeats")]
pub struct CoincidentPoints(pub String);

/// Distinguishable, pairwise distinct points `x_1..x_n` on the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    points: Vec<Q>,
}

impl Configuration {
    pub fn new(points: Vec<Q>) -> Result<Self, CoincidentPoints> {
        let mut sorted = points.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(CoincidentPoints(fmt_q(&w[0])));
        }
        Ok(Configuration { points })
    }

    pub fn points(&self) -> &[Q] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn thetas(&self) -> Vec<StepFunction> {
        self.points.iter().cloned().map(StepFunction::theta).collect()
    }

    pub fn map(&self, m: &PiecewiseLinearMap) -> Configuration {
        Configuration { points: self.points.iter().map(|x| m.apply(x)).collect() }
    }
}

/// `A_ij = sg(j - i)`.
pub fn matrix_a(n: usize) -> QMatrix {
    let mut a = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = q((j as i64 - i as i64).signum());
        }
    }
    a
}

/// `B_ij = (-1)^{|i-j|}`.
pub fn matrix_b(n: usize) -> QMatrix {
    let mut b = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = q(if i.abs_diff(j) % 2 == 0 { 1 } else { -1 });
        }
    }
    b
}

/// Value of a step `theta_x` at its own jump point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaAtJump {
    Zero,
    One,
    #[default]
    Half,
}

impl ThetaAtJump {
    fn value(self) -> Q {
        match self {
            ThetaAtJump::Zero => Q::zero(),
            ThetaAtJump::One => Q::one(),
            ThetaAtJump::Half => qf(1, 2),
        }
    }
}

fn theta_at(x: &Q, y: &Q, conv: ThetaAtJump) -> Q {
    match y.cmp(x) {
        std::cmp::Ordering::Greater => Q::one(),
        std::cmp::Ordering::Less => Q::zero(),
        std::cmp::Ordering::Equal => conv.value(),
    }
}

/// `sum_{i<j} sum_{k,s} (-1)^{|i-k|+|j-s|} theta_{x_s}(x_k)`.
pub fn s_os_closed(c: &Configuration, conv: ThetaAtJump) -> Q {
    let n = c.len();
    let x = c.points();
    let mut total = Q::zero();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for s in 0..n {
                    let t = theta_at(&x[s], &x[k], conv);
                    if (i.abs_diff(k) + j.abs_diff(s)) % 2 == 0 {
                        total += t;
                    } else {
                        total -= t;
                    }
                }
            }
        }
    }
    total
}

/// `∫ f g'` for step functions: each jump of `g` weighted by the midpoint value of `f`.
pub fn integral_f_dg(f: &StepFunction, g: &StepFunction) -> Q {
    g.jump_sizes().map(|(x, h)| f.eval(x) * h).sum()
}

/// `sum_{i<j} ∫ f_i f_j' - sum_i f_i(x_i)`.
pub fn action_eval(fs: &[StepFunction], c: &Configuration) -> Q {
    assert_eq!(fs.len(), c.len(), "one field per point");
    let mut total = Q::zero();
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            total += integral_f_dg(&fs[i], &fs[j]);
        }
        total -= fs[i].eval(&c.points()[i]);
    }
    total
}

/// `sum_j m_ij theta_{x_j}` for each row `i`.
pub fn combine(m: &QMatrix, thetas: &[StepFunction]) -> Vec<StepFunction> {
    (0..m.rows())
        .map(|i| {
            thetas
                .iter()
                .enumerate()
                .fold(StepFunction::zero(), |acc, (j, t)| acc.add(&t.scale(&m[(i, j)])))
        })
        .collect()
}

/// Solution `f = C theta` of `A f = theta` and what remains unsolved.
#[derive(Debug, Clone)]
pub struct EomSolution {
    pub coefficients: QMatrix,
    pub fields: Vec<StepFunction>,
    /// `A C - I`; the equation holds iff this vanishes.
    pub residual: QMatrix,
    /// `A f - theta` as step functions.
    pub residual_fields: Vec<StepFunction>,
    /// Basis of `ker A`, the directions in which `theta` cannot be matched.
    pub kernel: Vec<QVec>,
}

impl EomSolution {
    pub fn solved(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Exact solve of `A C = I` when `A` is invertible; otherwise `C` solves
/// `A C = I - pi` with `pi` the orthogonal projection onto `ker A`
/// (`A` is antisymmetric, so `im A` is the orthogonal complement of `ker A`).
/// Integration constants are set to zero.
pub fn solve_eom(c: &Configuration) -> EomSolution {
    let n = c.len();
    let a = matrix_a(n);
    let kernel = a.kernel();
    let coefficients = match a.inverse() {
        Some(inv) => inv,
        None => {
            let k = QMatrix::from_columns(&kernel, n);
            let kt = k.transpose();
            let pi = &(&k * &(&kt * &k).inverse().expect("kernel basis is independent")) * &kt;
            let target = &QMatrix::identity(n) - &pi;
            let cols: Vec<QVec> = (0..n)
                .map(|j| a.solve(&target.column(j)).expect("orthogonal complement of ker A is im A"))
                .collect();
            QMatrix::from_columns(&cols, n)
        }
    };
    let residual = &(&a * &coefficients) - &QMatrix::identity(n);
    let thetas = c.thetas();
    EomSolution {
        fields: combine(&coefficients, &thetas),
        residual_fields: combine(&residual, &thetas),
        coefficients,
        residual,
        kernel,
    }
}

/// `A B - I`, the defect of the candidate `f = B theta`.
pub fn candidate_b_defect(n: usize) -> QMatrix {
    &(&matrix_a(n) * &matrix_b(n)) - &QMatrix::identity(n)
}

/// Strictly increasing continuous piecewise-linear map of the line, extended
/// linearly beyond its outer knots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearMap {
    xs: Vec<Q>,
    ys: Vec<Q>,
}

impl PiecewiseLinearMap {
    /// Knots `(xs[k], ys[k])`; both sequences must increase strictly, at least two knots.
    pub fn new(xs: Vec<Q>, ys: Vec<Q>) -> Option<Self> {
        let increasing = |v: &[Q]| v.windows(2).all(|w| w[0] < w[1]);
        (xs.len() == ys.len() && xs.len() >= 2 && increasing(&xs) && increasing(&ys))
            .then_some(PiecewiseLinearMap { xs, ys })
    }

    /// `x -> a x + b` with `a > 0`.
    pub fn affine(a: Q, b: Q) -> Option<Self> {
        let ys = vec![b.clone(), &a + &b];
        Self::new(vec![Q::zero(), Q::one()], ys)
    }

    pub fn identity() -> Self {
        Self::affine(Q::one(), Q::zero()).unwrap()
    }

    /// Random map with `segments` pieces and small-denominator rational knots.
    pub fn random<R: Rng>(rng: &mut R, segments: usize) -> Self {
        let mut xs = vec![q(rng.random_range(-20..0))];
        let mut ys = vec![q(rng.random_range(-20..20))];
        for _ in 0..segments {
            xs.push(xs.last().unwrap() + qf(rng.random_range(1..=12), rng.random_range(1..=4)));
            ys.push(ys.last().unwrap() + qf(rng.random_range(1..=12), rng.random_range(1..=4)));
        }
        PiecewiseLinearMap { xs, ys }
    }

    pub fn apply(&self, x: &Q) -> Q {
        let n = self.xs.len();
        let k = self.xs.partition_point(|k| k <= x).clamp(1, n - 1);
        let (x0, x1, y0, y1) = (&self.xs[k - 1], &self.xs[k], &self.ys[k - 1], &self.ys[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Result of comparing the on-shell values before and after each map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub value: Q,
    pub trials: usize,
    /// Indices of maps that changed the value, with the changed value.
    pub violations: Vec<(usize, Q)>,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.violations.is_empty()
    }
}

fn invariance_of(c: &Configuration, maps: &[PiecewiseLinearMap], f: impl Fn(&Configuration) -> Q) -> InvarianceReport {
    let value = f(c);
    let violations = maps
        .iter()
        .enumerate()
        .filter_map(|(i, m)| {
            let v = f(&c.map(m));
            (v != value).then_some((i, v))
        })
        .collect();
    InvarianceReport { value, trials: maps.len(), violations }
}

/// Compares `s_os_closed` on `c` and on every `m(c)`.
pub fn invariance_test(c: &Configuration, maps: &[PiecewiseLinearMap], conv: ThetaAtJump) -> InvarianceReport {
    invariance_of(c, maps, |c| s_os_closed(c, conv))
}

/// Compares the action evaluated on the solution of the equation of motion.
pub fn action_invariance_test(c: &Configuration, maps: &[PiecewiseLinearMap]) -> InvarianceReport {
    invariance_of(c, maps, |c| action_eval(&solve_eom(c).fields, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(xs: &[i64]) -> Configuration {
        Configuration::new(xs.iter().map(|&x| q(x)).collect()).unwrap()
    }

    #[test]
    fn small_matrices() {
        assert_eq!(matrix_a(2), QMatrix::from_int_rows(&[&[0, 1], &[-1, 0]]));
        assert_eq!(matrix_b(2), QMatrix::from_int_rows(&[&[1, -1], &[-1, 1]]));
        assert!(!candidate_b_defect(2).is_zero());
    }

    #[test]
    fn step_function_arithmetic() {
        let f = StepFunction::theta(q(0)).add(&StepFunction::theta(q(1)).scale(&q(-1)));
        assert_eq!(f.eval(&q(-1)), q(0));
        assert_eq!(f.eval(&q(0)), qf(1, 2));
        assert_eq!(f.eval(&qf(1, 2)), q(1));
        assert_eq!(f.eval(&q(1)), qf(1, 2));
        assert_eq!(f.eval(&q(2)), q(0));
        let g = f.add(&f.scale(&q(-1)));
        assert!(g.is_zero());
    }

    #[test]
    fn two_point_values() {
        let c = config(&[0, 1]);
        assert_eq!(s_os_closed(&c, ThetaAtJump::Half), q(0));
        assert_eq!(s_os_closed(&c, ThetaAtJump::Zero), q(1));
        assert_eq!(s_os_closed(&config(&[5]), ThetaAtJump::Half), q(0));
    }

    #[test]
    fn even_solve_is_exact() {
        let s = solve_eom(&config(&[0, 1]));
        assert_eq!(s.coefficients, QMatrix::from_int_rows(&[&[0, -1], &[1, 0]]));
        assert!(s.solved());
        assert!(s.residual_fields.iter().all(StepFunction::is_zero));
    }

    #[test]
    fn odd_solve_leaves_kernel_component() {
        let s = solve_eom(&config(&[0, 2, 1]));
        assert!(!s.solved());
        assert_eq!(s.kernel, vec![QVec::from_ints(&[1, -1, 1])]);
        // the residual lies in ker A
        let r = &matrix_a(3) * &s.residual;
        assert!(r.is_zero());
    }

    #[test]
    fn constant_fields() {
        let c = config(&[0, 3]);
        let fs = vec![StepFunction::constant(q(2)), StepFunction::constant(q(5))];
        assert_eq!(action_eval(&fs, &c), q(-7));
    }

    #[test]
    fn affine_map_is_invariant() {
        let c = config(&[3, -1, 4]);
        let m = PiecewiseLinearMap::affine(q(2), q(1)).unwrap();
        assert!(invariance_test(&c, &[m, PiecewiseLinearMap::identity()], ThetaAtJump::Half).invariant());
        assert!(PiecewiseLinearMap::affine(q(-1), q(0)).is_none());
    }
}
