//! Labelled planar rooted trees indexing the perturbative expansions.
//!
//! A tree of `T_n` has every internal vertex of arity at least two and
//! satisfies `order(T) = sum_v (arity(v) + label(v)) - #internal = n`.
//! Trees are built bottom-up by grafting lower-order trees onto a labelled
//! root, which is a bijection (`(T_1..T_k)_l` has order `sum i_s + k + l - 1`),
//! so enumeration never produces duplicates. Subtrees are shared through
//! `Arc`, which keeps the half-million trees of order ten affordable.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::exec::Exec;
use crate::series::{fixed_point, for_each_composition, FormalSeries, SeriesError};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LabeledTree {
    Leaf,
    Internal { label: usize, children: Vec<Arc<LabeledTree>> },
}

impl LabeledTree {
    pub fn leaf() -> Arc<Self> {
        Arc::new(LabeledTree::Leaf)
    }

    pub fn node(label: usize, children: Vec<Arc<LabeledTree>>) -> Arc<Self> {
        assert!(!children.is_empty(), "an internal vertex needs children");
        Arc::new(LabeledTree::Internal { label, children })
    }

    /// The corolla with `arity` leaves and root label `label`.
    pub fn corolla(arity: usize, label: usize) -> Arc<Self> {
        Self::node(label, vec![Self::leaf(); arity])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, LabeledTree::Leaf)
    }

    pub fn label(&self) -> Option<usize> {
        match self {
            LabeledTree::Leaf => None,
            LabeledTree::Internal { label, .. } => Some(*label),
        }
    }

    pub fn children(&self) -> &[Arc<LabeledTree>] {
        match self {
            LabeledTree::Leaf => &[],
            LabeledTree::Internal { children, .. } => children,
        }
    }

    /// `sum_{v internal} (arity(v) + label(v)) - #internal`.
    ///
    /// Defined for any tree; it is the index `n` of `T_n` when every internal
    /// vertex has arity at least two.
    pub fn order(&self) -> usize {
        match self {
            LabeledTree::Leaf => 0,
            LabeledTree::Internal { label, children } => {
                children.iter().map(|c| c.order()).sum::<usize>() + children.len() + label - 1
            }
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            LabeledTree::Leaf => 0,
            LabeledTree::Internal { children, .. } => {
                1 + children.iter().map(|c| c.internal_count()).sum::<usize>()
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            LabeledTree::Leaf => 1,
            LabeledTree::Internal { children, .. } => children.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.internal_count() + self.leaf_count()
    }

    /// Whether every internal vertex has at least two children.
    pub fn is_branching(&self) -> bool {
        match self {
            LabeledTree::Leaf => true,
            LabeledTree::Internal { children, .. } => {
                children.len() >= 2 && children.iter().all(|c| c.is_branching())
            }
        }
    }

    /// Visits every internal vertex as `(label, arity)` in preorder.
    pub fn for_each_internal(&self, f: &mut dyn FnMut(usize, usize)) {
        if let LabeledTree::Internal { label, children } = self {
            f(*label, children.len());
            for c in children {
                c.for_each_internal(f);
            }
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut Vec<u8>) {
        match self {
            LabeledTree::Leaf => out.push(LEAF_TOKEN),
            LabeledTree::Internal { label, children } => {
                out.push(NODE_TOKEN);
                push_varint(out, children.len());
                push_varint(out, *label);
                for c in children {
                    c.encode_into(out);
                }
            }
        }
    }
}

const LEAF_TOKEN: u8 = 0x00;
const NODE_TOKEN: u8 = 0x01;

fn push_varint(out: &mut Vec<u8>, mut v: usize) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

/// Preorder byte encoding: a leaf is `0x00`; an internal vertex is `0x01`,
/// its arity and label as LEB128 varints, then its children in order.
/// Injective on planar labelled trees; byte order defines the canonical sort.
pub fn canonical_encode(t: &LabeledTree) -> Vec<u8> {
    t.encode()
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabeledTree::Leaf => f.write_str("*"),
            LabeledTree::Internal { label, children } => {
                write!(f, "({label}:")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed tree text at byte {offset}: {message}")]
pub struct ParseTreeError {
    pub offset: usize,
    pub message: String,
}

impl FromStr for LabeledTree {
    type Err = ParseTreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let tree = parse_tree(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(ParseTreeError { offset: pos, message: "trailing input".into() });
        }
        Ok(Arc::try_unwrap(tree).unwrap_or_else(|a| (*a).clone()))
    }
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_tree(b: &[u8], pos: &mut usize) -> Result<Arc<LabeledTree>, ParseTreeError> {
    let err = |offset, message: &str| ParseTreeError { offset, message: message.into() };
    skip_ws(b, pos);
    match b.get(*pos) {
        Some(b'*') => {
            *pos += 1;
            Ok(LabeledTree::leaf())
        }
        Some(b'(') => {
            *pos += 1;
            skip_ws(b, pos);
            let start = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let label: usize = std::str::from_utf8(&b[start..*pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(start, "expected a label"))?;
            skip_ws(b, pos);
            if b.get(*pos) != Some(&b':') {
                return Err(err(*pos, "expected `:`"));
            }
            *pos += 1;
            let mut children = Vec::new();
            loop {
                skip_ws(b, pos);
                match b.get(*pos) {
                    Some(b')') => {
                        *pos += 1;
                        break;
                    }
                    None => return Err(err(*pos, "unclosed `(`")),
                    _ => children.push(parse_tree(b, pos)?),
                }
            }
            if children.is_empty() {
                return Err(err(*pos, "internal vertex without children"));
            }
            Ok(LabeledTree::node(label, children))
        }
        _ => Err(err(*pos, "expected `*` or `(`")),
    }
}

/// Which internal vertices are admitted during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TreePolicy {
    pub label_min: usize,
    pub label_cap: Option<usize>,
    pub arity_cap: Option<usize>,
}

impl TreePolicy {
    /// All internal labels zero: the trees `T_n^0`.
    pub fn zero_labels() -> Self {
        TreePolicy { label_min: 0, label_cap: Some(0), arity_cap: None }
    }

    pub fn labelled(label_min: usize) -> Self {
        TreePolicy { label_min, ..Self::default() }
    }

    pub fn allows(&self, label: usize, arity: usize) -> bool {
        arity >= 2
            && label >= self.label_min
            && self.label_cap.is_none_or(|c| label <= c)
            && self.arity_cap.is_none_or(|c| arity <= c)
    }
}

/// Trees of every order `0..=max_order`, each order sorted canonically.
#[derive(Debug, Clone)]
pub struct TreeTable {
    by_order: Vec<Vec<Arc<LabeledTree>>>,
}

impl TreeTable {
    pub fn build(max_order: usize, policy: &TreePolicy) -> Self {
        Self::build_with(max_order, &|l, k| policy.allows(l, k))
    }

    /// Builds with an arbitrary admissibility predicate on `(label, arity)`;
    /// arities below two are never admitted.
    pub fn build_with(max_order: usize, allow: &dyn Fn(usize, usize) -> bool) -> Self {
        let mut by_order: Vec<Vec<Arc<LabeledTree>>> = vec![vec![LabeledTree::leaf()]];
        for m in 1..=max_order {
            let mut level = Vec::new();
            // k + l - 1 <= m
            for arity in 2..=m + 1 {
                for label in 0..=(m + 1 - arity) {
                    if !allow(label, arity) {
                        continue;
                    }
                    let rest = m + 1 - arity - label;
                    graft_all(&by_order, label, arity, rest, &mut |t| level.push(t));
                }
            }
            by_order.push(sort_canonical(level));
        }
        TreeTable { by_order }
    }

    pub fn max_order(&self) -> usize {
        self.by_order.len() - 1
    }

    pub fn order(&self, n: usize) -> &[Arc<LabeledTree>] {
        &self.by_order[n]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_order.iter().map(Vec::len).collect()
    }
}

/// Every `(T_1..T_k)_label` with child orders summing to `rest`.
fn graft_all(
    tables: &[Vec<Arc<LabeledTree>>],
    label: usize,
    arity: usize,
    rest: usize,
    emit: &mut dyn FnMut(Arc<LabeledTree>),
) {
    for_each_composition(rest, arity, &mut |orders| {
        if orders.iter().any(|&i| i >= tables.len() || tables[i].is_empty()) {
            return;
        }
        let mut picks = Vec::with_capacity(arity);
        product(tables, orders, &mut picks, &mut |children| {
            emit(LabeledTree::node(label, children.to_vec()));
        });
    });
}

fn product(
    tables: &[Vec<Arc<LabeledTree>>],
    orders: &[usize],
    picks: &mut Vec<Arc<LabeledTree>>,
    emit: &mut dyn FnMut(&[Arc<LabeledTree>]),
) {
    let depth = picks.len();
    if depth == orders.len() {
        emit(picks);
        return;
    }
    for t in &tables[orders[depth]] {
        picks.push(Arc::clone(t));
        product(tables, orders, picks, emit);
        picks.pop();
    }
}

fn sort_canonical(trees: Vec<Arc<LabeledTree>>) -> Vec<Arc<LabeledTree>> {
    let mut keyed: Vec<(Vec<u8>, Arc<LabeledTree>)> = trees.into_iter().map(|t| (t.encode(), t)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, t)| t).collect()
}

/// The trees `T_n` admitted by `policy`, in canonical order.
pub fn enumerate_t(n: usize, policy: &TreePolicy) -> Vec<Arc<LabeledTree>> {
    TreeTable::build(n, policy).by_order.swap_remove(n)
}

/// Several orders at once, built independently (possibly in parallel).
pub fn enumerate_t_orders(orders: &[usize], policy: &TreePolicy, exec: Exec) -> Vec<Vec<Arc<LabeledTree>>> {
    exec.map(orders, |&n| enumerate_t(n, policy))
}

/// A tree of `R_n`: a labelled root carrying `T`-trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootTree {
    pub label: usize,
    pub children: Vec<Arc<LabeledTree>>,
}

impl RootTree {
    pub fn arity(&self) -> usize {
        self.children.len()
    }

    /// `sum_s order(T_s) + label`, the index `n` of `R_n`.
    pub fn order(&self) -> usize {
        self.children.iter().map(|c| c.order()).sum::<usize>() + self.label
    }

    /// Power of `L` carried by this tree's term in the action after the
    /// rescaling `phi -> L phi, j -> L j`: `sum_s order(T_s) + label + k - 2`,
    /// except the source term `(T)_0`, which sits at `order(T)`.
    pub fn scaled_degree(&self) -> usize {
        let child: usize = self.children.iter().map(|c| c.order()).sum();
        if self.label == 0 && self.arity() == 1 {
            child
        } else {
            child + self.label + self.arity() - 2
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        LabeledTree::Internal { label: self.label, children: self.children.clone() }.encode()
    }
}

impl fmt::Display for RootTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:", self.label)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        f.write_str(")")
    }
}

/// `R_n` with root arity at most `max_arity`; children follow `policy` and
/// the root obeys `label_min` (arity `>= 1` for label 0, `>= 2` otherwise).
pub fn enumerate_r(n: usize, max_arity: usize, policy: &TreePolicy) -> Vec<RootTree> {
    let table = TreeTable::build(n, policy);
    enumerate_r_from(&table, n, max_arity, policy.label_min, &|_, _| true)
}

/// `R_n` restricted by a root predicate, reusing an existing tree table that
/// reaches at least order `n`.
pub fn enumerate_r_from(
    table: &TreeTable,
    n: usize,
    max_arity: usize,
    label_min: usize,
    allow_root: &dyn Fn(usize, usize) -> bool,
) -> Vec<RootTree> {
    assert!(max_arity >= 1, "R_n needs a finite arity cap of at least one");
    assert!(table.max_order() >= n, "tree table too shallow");
    let mut out = Vec::new();
    for label in label_min..=n {
        let min_arity = if label == 0 { 1 } else { 2 };
        for arity in min_arity..=max_arity {
            if !allow_root(label, arity) {
                continue;
            }
            for_each_composition(n - label, arity, &mut |orders| {
                let mut picks = Vec::with_capacity(arity);
                product(&table.by_order, orders, &mut picks, &mut |children| {
                    out.push(RootTree { label, children: children.to_vec() });
                });
            });
        }
    }
    out.sort_by_cached_key(RootTree::encode);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Labels {
    /// Every internal label is zero.
    Zero,
    /// Labels range over `label_min..`.
    Labelled { label_min: usize },
}

impl Labels {
    pub fn policy(self) -> TreePolicy {
        match self {
            Labels::Zero => TreePolicy::zero_labels(),
            Labels::Labelled { label_min } => TreePolicy::labelled(label_min),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeCountError {
    #[error("enumeration gives {enumerated} trees of order {order} but the series coefficient is {series}")]
    Mismatch { order: usize, enumerated: usize, series: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Fixed point of the generating equation for the given label variant:
/// `x = 1 + sum_{k>=2, l} x^k L^{k+l-1}` with `l = 0` or `l >= label_min`.
pub fn generating_series(n_max: usize, variant: Labels) -> Result<FormalSeries, SeriesError> {
    let (lo, hi) = match variant {
        Labels::Zero => (0, 0),
        Labels::Labelled { label_min } => (label_min, n_max),
    };
    fixed_point(
        |x| {
            let mut acc = FormalSeries::one(n_max);
            let mut xk = x.clone();
            for k in 2..=n_max + 1 {
                xk = &xk * x;
                for l in lo..=hi {
                    if k + l - 1 > n_max {
                        break;
                    }
                    acc = &acc + &xk.shift(k + l - 1);
                }
            }
            acc
        },
        n_max,
    )
}

/// Tree counts `|T_0| ..= |T_{n_max}|` read off the generating equation and
/// checked against explicit enumeration.
pub fn count_via_series(n_max: usize, variant: Labels) -> Result<Vec<usize>, TreeCountError> {
    let series = generating_series(n_max, variant)?;
    let table = TreeTable::build(n_max, &variant.policy());
    let mut counts = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let enumerated = table.order(n).len();
        let coeff = &series[n];
        if coeff.to_usize() != Some(enumerated) || !coeff.is_integer() {
            return Err(TreeCountError::Mismatch {
                order: n,
                enumerated,
                series: crate::rational::fmt_q(coeff),
            });
        }
        counts.push(enumerated);
    }
    Ok(counts)
}

/// Fixed point of `sum_{n>=2, k>=2} x^n L^{n+k-1} - x = -1`, read literally
/// (`n` the arity, `k` an exponent offset starting at two).
pub fn literal_second_equation(n_max: usize) -> Result<FormalSeries, SeriesError> {
    fixed_point(
        |x| {
            let mut acc = FormalSeries::one(n_max);
            for n in 2..=n_max + 1 {
                let xn = x.pow(n);
                for k in 2..=n_max + 1 {
                    let e = n + k - 1;
                    if e > n_max {
                        break;
                    }
                    acc = &acc + &xn.shift(e);
                }
            }
            acc
        },
        n_max,
    )
}

/// One row of the label-convention audit against the literal equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfAuditRow {
    pub label_min: usize,
    pub enumerated: Vec<usize>,
    pub literal: Vec<Q>,
    pub matches: bool,
    /// First order where enumeration and the literal series disagree.
    pub first_mismatch: Option<usize>,
}

pub fn audit_second_equation(n_max: usize, label_mins: &[usize]) -> Result<Vec<GfAuditRow>, SeriesError> {
    let literal = literal_second_equation(n_max)?;
    Ok(label_mins
        .iter()
        .map(|&label_min| {
            let enumerated = TreeTable::build(n_max, &TreePolicy::labelled(label_min)).counts();
            let first_mismatch = (0..=n_max).find(|&n| Q::from_integer(enumerated[n].into()) != literal[n]);
            GfAuditRow {
                label_min,
                enumerated,
                literal: literal.coeffs().to_vec(),
                matches: first_mismatch.is_none(),
                first_mismatch,
            }
        })
        .collect())
}

impl PartialOrd for RootTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.encode().cmp(&other.encode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_is_the_leaf() {
        for policy in [TreePolicy::zero_labels(), TreePolicy::labelled(0), TreePolicy::labelled(3)] {
            let t = enumerate_t(0, &policy);
            assert_eq!(t.len(), 1);
            assert!(t[0].is_leaf());
        }
    }

    #[test]
    fn order_one_is_the_binary_corolla() {
        let t = enumerate_t(1, &TreePolicy::labelled(0));
        assert_eq!(t.len(), 1);
        assert_eq!(*t[0], *LabeledTree::corolla(2, 0));
        assert!(enumerate_t(1, &TreePolicy::labelled(1)).is_empty());
    }

    #[test]
    fn encoding_is_planar_and_deterministic() {
        let leaf = LabeledTree::leaf();
        assert_eq!(leaf.encode(), vec![0]);
        let c = LabeledTree::corolla(2, 0);
        assert_eq!(c.encode(), vec![1, 2, 0, 0, 0]);
        assert_eq!(c.encode(), canonical_encode(&LabeledTree::corolla(2, 0)));
        let a = LabeledTree::node(0, vec![c.clone(), leaf.clone()]);
        let b = LabeledTree::node(0, vec![leaf, c]);
        assert_ne!(a.encode(), b.encode());
        let big = LabeledTree::corolla(200, 300);
        assert_eq!(&big.encode()[..5], &[1, 200, 1, 172, 2]);
    }

    #[test]
    fn text_form_round_trips() {
        let t: LabeledTree = "(0: (1: * *) * *)".parse().unwrap();
        assert_eq!(t.to_string(), "(0: (1: * *) * *)");
        assert_eq!(t.order(), 2 + 3 - 1);
        assert!("(0: )".parse::<LabeledTree>().is_err());
        assert_eq!("(0 * *)".parse::<LabeledTree>().unwrap_err().offset, 3);
        assert!("* *".parse::<LabeledTree>().is_err());
    }

    #[test]
    fn zero_label_counts_small() {
        assert_eq!(TreeTable::build(4, &TreePolicy::zero_labels()).counts(), vec![1, 1, 3, 11, 45]);
    }

    #[test]
    fn labelled_counts_small() {
        assert_eq!(TreeTable::build(3, &TreePolicy::labelled(0)).counts(), vec![1, 1, 4, 17]);
    }

    #[test]
    fn r_zero() {
        let policy = TreePolicy::default();
        let r = enumerate_r(0, 3, &policy);
        let shown: Vec<String> = r.iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, vec!["(0: *)", "(0: * *)", "(0: * * *)"]);
        assert_eq!(enumerate_r(0, 1, &policy).len(), 1);
    }

    #[test]
    fn scaled_degree_of_source_and_cubic_terms() {
        let leaf = LabeledTree::leaf();
        let src = RootTree { label: 0, children: vec![leaf.clone()] };
        assert_eq!(src.scaled_degree(), 0);
        let cubic = RootTree { label: 1, children: vec![leaf.clone(), leaf.clone(), leaf] };
        assert_eq!(cubic.order(), 1);
        assert_eq!(cubic.scaled_degree(), 2);
    }

    #[test]
    fn count_via_series_zero_labels() {
        assert_eq!(count_via_series(5, Labels::Zero).unwrap(), vec![1, 1, 3, 11, 45, 197]);
        assert_eq!(count_via_series(0, Labels::Labelled { label_min: 1 }).unwrap(), vec![1]);
    }
}
