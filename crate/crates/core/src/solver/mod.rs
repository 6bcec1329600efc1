//! Tree-indexed perturbative solutions and the on-shell invariant hierarchy.
//!
//! The equation
//! `O_{0,1}(phi) + sum_{n>=0,k>=2} O_{n,k}(phi, ..., phi) L^{n+k-1} = psi`
//! is solved order by order in `L`. Two independent strategies are provided:
//! a sum over labelled planar trees ([`solve_tree_sum`]) and the order-by-order
//! recursion ([`solve_recursive`]). Both use a linear right inverse `P` of
//! `O_{0,1}` and test the consistency condition (right-hand side in the image
//! of `O_{0,1}`) at every order.

mod family;
mod hierarchy;

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

pub use family::{Multilinear, OperatorFamily, ScalarPolynomial, TensorFamily, Vector};
pub use hierarchy::{
    onshell_hierarchy, onshell_hierarchy_with, symmetrize, toy_action, ActionSpec, ActionSpecError, HierarchyReport,
    WeightMode,
};

use crate::exec::Exec;
use crate::rational::Q;
use crate::series::{for_each_composition, FormalSeries, VectorSeries};
use crate::trees::{LabeledTree, TreePolicy, TreeTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    /// The right-hand side at `order` is not in the image of `O_{0,1}`.
    #[error("consistency condition fails at order {order}: right-hand side is outside the image of O_(0,1)")]
    Inconsistent { order: usize },
    #[error("solution strategies disagree at order {order}")]
    StrategyMismatch { order: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    TreeSum,
    Recursive,
}

/// Coefficients `phi_0 ..= phi_N` of a perturbative solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbativeSolution<V> {
    pub coeffs: Vec<V>,
    pub strategy: Strategy,
}

impl<V: Vector> PerturbativeSolution<V> {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn series(&self) -> VectorSeries<V> {
        VectorSeries::new(self.coeffs.clone())
    }
}

/// Values `O_T(psi, ..., psi)` for every tree of a [`TreeTable`], plus the
/// per-order right-hand sides `sum_T O_{l,k}(O_{T_1}, ..., O_{T_k})`.
pub(crate) struct TreeValues<V> {
    pub table: TreeTable,
    pub values: Vec<Vec<V>>,
    index: HashMap<usize, (usize, usize)>,
}

impl<V: Vector> TreeValues<V> {
    /// Value of a tree that belongs to `self.table`.
    pub fn value_of(&self, t: &Arc<LabeledTree>) -> &V {
        let (m, i) = self.index[&(Arc::as_ptr(t) as usize)];
        &self.values[m][i]
    }
}

/// Evaluates `O_T` on every tree through `order` by the recursive rule
/// `O_leaf = P`, `O_{(T_1..T_k)_l} = -P(O_{l,k}(O_{T_1}, ..., O_{T_k}))`.
/// Values are memoized per shared subtree; trees outside the support are never built.
pub(crate) fn evaluate_trees<F: OperatorFamily>(
    ops: &F,
    psi: &F::Vector,
    order: usize,
    exec: Exec,
) -> Result<TreeValues<F::Vector>, SolveError> {
    let table = TreeTable::build_with(order, &|l, k| ops.has(l, k));
    if !ops.in_image(psi) {
        return Err(SolveError::Inconsistent { order: 0 });
    }
    let mut values: Vec<Vec<F::Vector>> = vec![vec![ops.right_inverse(psi)]];
    let mut index = HashMap::new();
    index.insert(Arc::as_ptr(&table.order(0)[0]) as usize, (0, 0));
    for m in 1..=order {
        let trees = table.order(m);
        let lookup = |t: &Arc<LabeledTree>| -> &F::Vector {
            let (a, b) = index[&(Arc::as_ptr(t) as usize)];
            &values[a][b]
        };
        let rhs_terms: Vec<F::Vector> = exec.map(trees, |t| match &**t {
            LabeledTree::Internal { label, children } => {
                let args: Vec<&F::Vector> = children.iter().map(lookup).collect();
                ops.apply(*label, &args)
            }
            LabeledTree::Leaf => unreachable!("leaves only occur at order zero"),
        });
        let rhs = Vector::sum(psi, &rhs_terms);
        if !ops.in_image(&rhs) {
            return Err(SolveError::Inconsistent { order: m });
        }
        let level: Vec<F::Vector> = exec.map(&rhs_terms, |u| ops.right_inverse(u).neg());
        for (i, t) in trees.iter().enumerate() {
            index.insert(Arc::as_ptr(t) as usize, (m, i));
        }
        values.push(level);
    }
    Ok(TreeValues { table, values, index })
}

/// `phi_n = sum_{T in T_n} O_T(psi, ..., psi)`.
pub fn solve_tree_sum<F: OperatorFamily>(
    ops: &F,
    psi: &F::Vector,
    order: usize,
) -> Result<PerturbativeSolution<F::Vector>, SolveError> {
    solve_tree_sum_with(ops, psi, order, Exec::default())
}

pub fn solve_tree_sum_with<F: OperatorFamily>(
    ops: &F,
    psi: &F::Vector,
    order: usize,
    exec: Exec,
) -> Result<PerturbativeSolution<F::Vector>, SolveError> {
    let tv = evaluate_trees(ops, psi, order, exec)?;
    let coeffs = tv.values.iter().map(|level| Vector::sum(psi, level)).collect();
    Ok(PerturbativeSolution { coeffs, strategy: Strategy::TreeSum })
}

/// Right-hand side of the order-`n` equation
/// `O_{0,1}(phi_n) = -sum O_{m,k}(phi_{i_1}, ..., phi_{i_k})`, `n = m + sum i_s + k - 1`,
/// before the sign flip.
fn order_rhs<F: OperatorFamily>(ops: &F, phi: &[F::Vector], n: usize) -> F::Vector {
    let mut acc = phi[0].zero_like();
    for &(label, arity) in ops.support() {
        let shift = label + arity - 1;
        if shift > n {
            continue;
        }
        for_each_composition(n - shift, arity, &mut |idx| {
            let args: Vec<&F::Vector> = idx.iter().map(|&i| &phi[i]).collect();
            acc.add_assign(&ops.apply(label, &args));
        });
    }
    acc
}

/// Order-by-order recursion, memoizing the lower coefficients.
pub fn solve_recursive<F: OperatorFamily>(
    ops: &F,
    psi: &F::Vector,
    order: usize,
) -> Result<PerturbativeSolution<F::Vector>, SolveError> {
    if !ops.in_image(psi) {
        return Err(SolveError::Inconsistent { order: 0 });
    }
    let mut phi = vec![ops.right_inverse(psi)];
    for n in 1..=order {
        let rhs = order_rhs(ops, &phi, n);
        if !ops.in_image(&rhs) {
            return Err(SolveError::Inconsistent { order: n });
        }
        phi.push(ops.right_inverse(&rhs).neg());
    }
    Ok(PerturbativeSolution { coeffs: phi, strategy: Strategy::Recursive })
}

/// Per-order outcome of the consistency conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// `passed[n]` tells whether the order-`n` right-hand side lies in the image.
    pub passed: Vec<bool>,
}

impl ConsistencyReport {
    pub fn all_passed(&self) -> bool {
        self.passed.iter().all(|&p| p)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.passed.iter().position(|&p| !p)
    }
}

/// Runs the recursion through `order`, recording the image test at each
/// order instead of stopping at the first failure.
pub fn check_consistency<F: OperatorFamily>(ops: &F, psi: &F::Vector, order: usize) -> ConsistencyReport {
    let mut passed = vec![ops.in_image(psi)];
    let mut phi = vec![ops.right_inverse(psi)];
    for n in 1..=order {
        let rhs = order_rhs(ops, &phi, n);
        passed.push(ops.in_image(&rhs));
        phi.push(ops.right_inverse(&rhs).neg());
    }
    ConsistencyReport { passed }
}

/// Closed tree formula for `a_d x^d L^{d-1} + ... + a_2 x^2 L + a_1 x = y`:
/// `x_n = sum_{T in T_n^0} (-1)^{|V_i|} a_1^{-|V|} a_T y^{|V_l|}` with
/// `a_T = prod_{v internal} a_{arity(v)}`.
pub fn polynomial_tree_formula(a: &[Q], y: &Q, order: usize) -> FormalSeries {
    assert!(!a.is_empty() && !a[0].is_zero(), "a_1 must be nonzero");
    let policy = TreePolicy { label_min: 0, label_cap: Some(0), arity_cap: Some(a.len().max(2)) };
    let table = TreeTable::build(order, &policy);
    let inv_a1 = a[0].recip();
    let coeff = |k: usize| a.get(k - 1).cloned().unwrap_or_else(Q::zero);
    let mut out = FormalSeries::zero(order);
    for n in 0..=order {
        let mut sum = Q::zero();
        for t in table.order(n) {
            let mut a_t = Q::one();
            t.for_each_internal(&mut |_, arity| a_t *= coeff(arity));
            if a_t.is_zero() {
                continue;
            }
            let internal = t.internal_count();
            let sign = if internal % 2 == 0 { Q::one() } else { -Q::one() };
            let term = sign
                * a_t
                * num_traits::pow(inv_a1.clone(), t.vertex_count())
                * num_traits::pow(y.clone(), t.leaf_count());
            sum += term;
        }
        out.set_coeff(n, sum);
    }
    out
}

/// Perturbative inverse of a polynomial; the closed tree formula and the
/// recursion on the one-dimensional space are both evaluated and must agree.
pub fn solve_polynomial(a: &[Q], y: &Q, order: usize) -> Result<FormalSeries, SolveError> {
    if a.is_empty() || a[0].is_zero() {
        return Err(SolveError::InvalidInput("the linear coefficient a_1 must be nonzero".into()));
    }
    let closed = polynomial_tree_formula(a, y, order);
    let family = ScalarPolynomial::new(a.to_vec());
    let rec = solve_recursive(&family, y, order)?;
    let rec = FormalSeries::from_coeffs(rec.coeffs, order);
    if let Some(n) = (0..=order).find(|&n| closed[n] != rec[n]) {
        return Err(SolveError::StrategyMismatch { order: n });
    }
    Ok(rec)
}

/// Coefficients of `substitute(phi) - psi L^0` through `order`; all zero
/// exactly when `phi` solves the equation to that order.
pub fn residual<F>(ops: &F, psi: &F::Vector, phi: &VectorSeries<F::Vector>, order: usize) -> Vec<F::Vector>
where
    F: OperatorFamily,
{
    let lhs = crate::series::substitute_series(ops, phi, order);
    lhs.coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let mut r = c.clone();
            if m == 0 {
                r.add_assign(&psi.neg());
            }
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QMatrix;
    use crate::rational::{q, QVec};

    fn ints(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn signed_catalan_from_quadratic() {
        let expected = ints(&[1, -1, 2, -5, 14]);
        let fam = ScalarPolynomial::new(ints(&[1, 1]));
        let tree = solve_tree_sum(&fam, &q(1), 4).unwrap();
        let rec = solve_recursive(&fam, &q(1), 4).unwrap();
        assert_eq!(tree.coeffs, expected);
        assert_eq!(rec.coeffs, expected);
        assert_eq!(polynomial_tree_formula(&ints(&[1, 1]), &q(1), 4).coeffs(), expected.as_slice());
    }

    #[test]
    fn order_zero_is_linear_solve() {
        let fam = ScalarPolynomial::new(ints(&[3, 5, 7]));
        let sol = solve_tree_sum(&fam, &q(2), 0).unwrap();
        assert_eq!(sol.coeffs, vec![Q::new(2.into(), 3.into())]);
    }

    #[test]
    fn zero_source_gives_zero_solution() {
        let fam = ScalarPolynomial::new(ints(&[1, 2, 3]));
        let sol = solve_tree_sum(&fam, &q(0), 5).unwrap();
        assert!(sol.coeffs.iter().all(Zero::is_zero));
    }

    #[test]
    fn linear_polynomial_is_constant() {
        let s = solve_polynomial(&ints(&[4]), &q(3), 5).unwrap();
        assert_eq!(s, FormalSeries::constant(Q::new(3.into(), 4.into()), 5));
    }

    #[test]
    fn cubic_only_has_even_orders() {
        let s = solve_polynomial(&ints(&[1, 0, 1]), &q(1), 8).unwrap();
        for n in (1..=8).step_by(2) {
            assert!(s[n].is_zero());
        }
        assert!(!s[2].is_zero());
    }

    #[test]
    fn singular_linear_part_with_source_outside_image() {
        let fam = TensorFamily::new(QMatrix::from_int_rows(&[&[1, 0], &[0, 0]]));
        let psi = QVec::from_ints(&[0, 1]);
        assert_eq!(solve_recursive(&fam, &psi, 3).unwrap_err(), SolveError::Inconsistent { order: 0 });
        assert_eq!(solve_tree_sum(&fam, &psi, 3).unwrap_err(), SolveError::Inconsistent { order: 0 });
        let report = check_consistency(&fam, &psi, 3);
        assert_eq!(report.first_failure(), Some(0));
    }

    #[test]
    fn invertible_linear_part_passes_every_order() {
        let fam = TensorFamily::new(QMatrix::from_int_rows(&[&[2, 1], &[0, 1]])).with_op(
            0,
            Multilinear::new(2, 2, 2).with_term(0, &[1, 1], q(1)).with_term(1, &[0, 1], q(-2)),
        );
        let report = check_consistency(&fam, &QVec::from_ints(&[1, 3]), 6);
        assert!(report.all_passed());
        assert_eq!(report.passed.len(), 7);
    }
}
