//! The hierarchy `S_(0), S_(1), ...` of on-shell action coefficients.
//!
//! An action is given by a pairing `<,>`, a source `j` and multilinear forms
//! `Q_{n,k}`; its `L^n` part is `S_n(phi) = sum_k Q_{n,k}(phi, ..., phi) / k`
//! with `Q_{0,1}(psi) = -<j, psi>`. The field equation uses the operators
//! defined by `Q_{n,k}(a_1, ..., a_{k-1}, psi) = <O_{n,k-1}(a_1, ..., a_{k-1}), psi>`.
//!
//! All outputs are coefficients of the rescaled action: after
//! `phi -> L phi, j -> L j` the action is `L^2` times
//! `-<j, phi> + sum_{n,k>=2} Q_{n,k}(phi, ..., phi) L^{n+k-2} / k`,
//! and its critical point solves
//! `O_{0,1}(phi) + sum O_{n,k}(phi, ..., phi) L^{n+k-1} = j`.
//! `S_(m)` is the `L^m` coefficient of that bracket on shell. Do not compare
//! these numbers with an expansion of the unscaled action.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{evaluate_trees, solve_recursive, Multilinear, SolveError, TensorFamily};
use crate::exec::Exec;
use crate::linalg::QMatrix;
use crate::rational::{QVec, Q};
use crate::series::for_each_composition;
use crate::trees::enumerate_r_from;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionSpecError {
    #[error("pairing must be a symmetric non-degenerate square matrix")]
    BadPairing,
    #[error("source has dimension {got}, expected {expected}")]
    SourceDimension { got: usize, expected: usize },
    #[error("form Q_({label},{arity}) is not allowed: label 0 needs arity >= 2, higher labels arity >= 3")]
    BadFormIndex { label: usize, arity: usize },
    #[error("form Q_({label},{arity}) must be scalar valued on the field space")]
    BadFormShape { label: usize, arity: usize },
}

/// Root weight in the tree formula for `S_(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// `Q_T = Q_{l,k}(O_{T_1}, ..., O_{T_k}) / k`; agrees with direct substitution.
    #[default]
    WithInverseArity,
    /// `Q_T = Q_{l,k}(O_{T_1}, ..., O_{T_k})` without the `1/k`.
    Literal,
}

#[derive(Debug, Clone)]
pub struct ActionSpec {
    dim: usize,
    pairing: QMatrix,
    pairing_inv: QMatrix,
    source: QVec,
    forms: BTreeMap<(usize, usize), Multilinear>,
}

impl ActionSpec {
    pub fn new(pairing: QMatrix, source: QVec) -> Result<Self, ActionSpecError> {
        if !pairing.is_symmetric() {
            return Err(ActionSpecError::BadPairing);
        }
        let pairing_inv = pairing.inverse().ok_or(ActionSpecError::BadPairing)?;
        let dim = pairing.rows();
        if source.len() != dim {
            return Err(ActionSpecError::SourceDimension { got: source.len(), expected: dim });
        }
        Ok(ActionSpec { dim, pairing, pairing_inv, source, forms: BTreeMap::new() })
    }

    /// Adds `Q_{label,k}` where `k = form.arity()`.
    pub fn with_form(mut self, label: usize, form: Multilinear) -> Result<Self, ActionSpecError> {
        let arity = form.arity();
        let min_arity = if label == 0 { 2 } else { 3 };
        if arity < min_arity {
            return Err(ActionSpecError::BadFormIndex { label, arity });
        }
        if form.dim_in() != self.dim || form.dim_out() != 1 {
            return Err(ActionSpecError::BadFormShape { label, arity });
        }
        self.forms.insert((label, arity), form);
        Ok(self)
    }

    /// Same action with a different source.
    pub fn with_source(&self, source: QVec) -> Result<Self, ActionSpecError> {
        if source.len() != self.dim {
            return Err(ActionSpecError::SourceDimension { got: source.len(), expected: self.dim });
        }
        Ok(ActionSpec { source, ..self.clone() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &QVec {
        &self.source
    }

    pub fn pair(&self, a: &QVec, b: &QVec) -> Q {
        a.dot(&self.pairing.mul_vec(b))
    }

    pub fn form_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forms.keys().copied()
    }

    /// `Q_{label,k}(args)` with `k = args.len()`, including `Q_{0,1} = -<j, .>`.
    pub fn form(&self, label: usize, args: &[&QVec]) -> Q {
        if label == 0 && args.len() == 1 {
            return -self.pair(&self.source, args[0]);
        }
        match self.forms.get(&(label, args.len())) {
            Some(f) => f.apply(args)[0].clone(),
            None => Q::zero(),
        }
    }

    /// Operators `O_{n,k-1}` defined through the pairing from `Q_{n,k}`.
    pub fn derived_family(&self) -> TensorFamily {
        let lift = |form: &Multilinear| -> Multilinear {
            let k = form.arity();
            let mut op = Multilinear::new(k - 1, self.dim, self.dim);
            for (_, idx, c) in form.terms() {
                let (head, last) = idx.split_at(k - 1);
                for o in 0..self.dim {
                    let m = &self.pairing_inv[(o, last[0])];
                    if !m.is_zero() {
                        op.add_term(o, head, c * m);
                    }
                }
            }
            op
        };
        let linear = match self.forms.get(&(0, 2)) {
            Some(f) => {
                let op = lift(f);
                let mut m = QMatrix::zeros(self.dim, self.dim);
                for (o, idx, c) in op.terms() {
                    m[(o, idx[0])] += c;
                }
                m
            }
            None => QMatrix::zeros(self.dim, self.dim),
        };
        let mut family = TensorFamily::new(linear);
        for (&(label, arity), form) in &self.forms {
            if arity >= 3 {
                family.set_op(label, lift(form));
            }
        }
        family
    }
}

/// Symmetrizes a multilinear form over all orderings of its arguments.
pub fn symmetrize(form: &Multilinear) -> Multilinear {
    let k = form.arity();
    let perms = permutations(k);
    let weight = Q::one() / Q::from_integer(perms.len().into());
    let mut out = Multilinear::new(k, form.dim_in(), form.dim_out());
    for (o, idx, c) in form.terms() {
        for p in &perms {
            let permuted: Vec<usize> = p.iter().map(|&i| idx[i]).collect();
            out.add_term(o, &permuted, c * &weight);
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Both evaluations of `S_(0) ..= S_(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyReport {
    pub weight_mode: WeightMode,
    /// Sum over root trees of the weighted `Q_T`.
    pub tree_formula: Vec<Q>,
    /// Expansion of the action evaluated on the recursive solution.
    pub direct: Vec<Q>,
}

impl HierarchyReport {
    pub fn mismatches(&self) -> Vec<usize> {
        (0..self.direct.len()).filter(|&n| self.tree_formula[n] != self.direct[n]).collect()
    }

    pub fn agrees(&self) -> bool {
        self.mismatches().is_empty()
    }
}

pub fn onshell_hierarchy(action: &ActionSpec, order: usize, mode: WeightMode) -> Result<HierarchyReport, SolveError> {
    onshell_hierarchy_with(action, order, mode, Exec::default())
}

pub fn onshell_hierarchy_with(
    action: &ActionSpec,
    order: usize,
    mode: WeightMode,
    exec: Exec,
) -> Result<HierarchyReport, SolveError> {
    let family = action.derived_family();
    let j = action.source();

    // direct substitution
    let phi = solve_recursive(&family, j, order)?.coeffs;
    let mut direct = vec![Q::zero(); order + 1];
    for (m, slot) in direct.iter_mut().enumerate() {
        let mut acc = -action.pair(j, &phi[m]);
        for ((label, arity), form) in &action.forms {
            let shift = label + arity - 2;
            if shift > m {
                continue;
            }
            let weight = Q::one() / Q::from_integer((*arity).into());
            for_each_composition(m - shift, *arity, &mut |idx| {
                let args: Vec<&QVec> = idx.iter().map(|&i| &phi[i]).collect();
                acc += form.apply(&args)[0].clone() * &weight;
            });
        }
        *slot = acc;
    }

    // root-tree formula
    let tv = evaluate_trees(&family, j, order, exec)?;
    let max_arity = action.forms.keys().map(|&(_, k)| k).max().unwrap_or(1);
    let allow_root = |l: usize, k: usize| (l == 0 && k == 1) || action.forms.contains_key(&(l, k));
    let mut tree_formula = vec![Q::zero(); order + 1];
    for n in 0..=order {
        for root in enumerate_r_from(&tv.table, n, max_arity, 0, &allow_root) {
            let degree = root.scaled_degree();
            if degree > order {
                continue;
            }
            let args: Vec<&QVec> = root.children.iter().map(|c| tv.value_of(c)).collect();
            let mut value = action.form(root.label, &args);
            if mode == WeightMode::WithInverseArity {
                value /= Q::from_integer(root.arity().into());
            }
            tree_formula[degree] += value;
        }
    }

    Ok(HierarchyReport { weight_mode: mode, tree_formula, direct })
}

/// `S = -j phi + kappa phi^2 / 2 + g phi^3 L / 3` on a one-dimensional field.
pub fn toy_action(kappa: Q, g: Q, j: Q) -> ActionSpec {
    let spec = ActionSpec::new(QMatrix::identity(1), QVec(vec![j])).expect("identity pairing");
    let spec = spec.with_form(0, Multilinear::new(2, 1, 1).with_term(0, &[0, 0], kappa)).expect("valid form");
    spec.with_form(1, Multilinear::new(3, 1, 1).with_term(0, &[0, 0, 0], g)).expect("valid form")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn toy_order_zero_is_minus_half_j_squared_over_kappa() {
        let r = onshell_hierarchy(&toy_action(q(1), q(1), q(1)), 4, WeightMode::WithInverseArity).unwrap();
        assert_eq!(r.direct[0], qf(-1, 2));
        assert!(r.agrees(), "{r:?}");
    }

    #[test]
    fn toy_first_correction_sits_at_order_two() {
        // g j^3 / (3 kappa^3) with kappa = 2, g = 3, j = 5
        let r = onshell_hierarchy(&toy_action(q(2), q(3), q(5)), 3, WeightMode::WithInverseArity).unwrap();
        assert_eq!(r.direct[1], q(0));
        assert_eq!(r.direct[2], qf(3 * 125, 3 * 8));
        assert_eq!(r.direct[0], qf(-25, 4));
    }

    #[test]
    fn literal_weights_miss_order_zero() {
        let r = onshell_hierarchy(&toy_action(q(1), q(1), q(1)), 2, WeightMode::Literal).unwrap();
        assert_eq!(r.tree_formula[0], q(0));
        assert_eq!(r.mismatches().first(), Some(&0));
    }

    #[test]
    fn zero_source_gives_zero_hierarchy() {
        let r = onshell_hierarchy(&toy_action(q(3), q(2), q(0)), 5, WeightMode::WithInverseArity).unwrap();
        assert!(r.direct.iter().chain(&r.tree_formula).all(Zero::is_zero));
    }

    #[test]
    fn derived_operator_matches_pairing() {
        let pairing = QMatrix::from_int_rows(&[&[2, 1], &[1, 3]]);
        let form = symmetrize(
            &Multilinear::new(3, 2, 1).with_term(0, &[0, 1, 1], q(3)).with_term(0, &[0, 0, 0], q(-1)),
        );
        let spec = ActionSpec::new(pairing, QVec::from_ints(&[1, 0])).unwrap().with_form(0, form.clone()).unwrap();
        let fam = spec.derived_family();
        let a = QVec::from_ints(&[2, -1]);
        let b = QVec::from_ints(&[1, 4]);
        let psi = QVec::from_ints(&[-3, 5]);
        let op = fam.op(0, 2).unwrap().apply(&[&a, &b]);
        assert_eq!(spec.pair(&op, &psi), form.apply(&[&a, &b, &psi])[0]);
    }

    #[test]
    fn forms_with_bad_indices_are_rejected() {
        let spec = ActionSpec::new(QMatrix::identity(1), QVec::from_ints(&[1])).unwrap();
        let err = spec.clone().with_form(1, Multilinear::new(2, 1, 1)).unwrap_err();
        assert_eq!(err, ActionSpecError::BadFormIndex { label: 1, arity: 2 });
        assert!(ActionSpec::new(QMatrix::from_int_rows(&[&[1, 1], &[0, 1]]), QVec::zeros(2)).is_err());
    }
}
