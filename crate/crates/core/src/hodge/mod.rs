//! Finite-dimensional Hodge theory over exact rationals and the two
//! perturbative solvers built on it.
//!
//! For a cochain complex `(A, d)` with inner products `M_i`, the adjoint is
//! `d* = M_i^{-1} d^T M_{i+1}`, `Delta = d d* + d* d`, harmonics are
//! `ker Delta`, `Q` inverts `Delta` off the harmonics (zero on them), and
//! `G = d* Q`. Then `I = Delta Q + pi_H = G d + d G + pi_H` degree by degree.
//!
//! Both solvers run the generic tree-sum solver on the total space
//! `A = ⊕ A^i`: the Laplace-type equation with `P = Q`, the `d`-type equation
//! with `P = G` and image test `d G x = x`.

pub mod simplicial;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_traits::Zero;

use crate::linalg::QMatrix;
use crate::rational::{q, QVec, Q};
use crate::series::VectorSeries;
use crate::solver::{residual, solve_tree_sum, Multilinear, SolveError, TensorFamily, Vector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HodgeError {
    #[error("complex shape: {0}")]
    Shape(String),
    #[error("d^{} d^{} is not zero", .degree + 1, .degree)]
    NotAComplex { degree: usize },
    #[error("inner product in degree {degree} is not symmetric positive definite")]
    NotPositiveDefinite { degree: usize },
    #[error("hypothesis violated: harmonic dimension h^{degree} = {dim}, expected 0")]
    HarmonicsPresent { degree: usize, dim: usize },
    #[error("right-hand side is not closed")]
    NotClosed,
    #[error("right-hand side has {got} coordinates, degree {degree} has dimension {expected}")]
    RhsDimension { degree: usize, got: usize, expected: usize },
    #[error("operator O_({label},{arity}) does not have degree {expected}")]
    OperatorDegree { label: usize, arity: usize, expected: i64 },
    #[error("operator checks failed: Leibnitz defect {leibnitz}, quadratic defect {quadratic}")]
    OperatorChecks { leibnitz: String, quadratic: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// A bounded cochain complex `A^0 -> A^1 -> ... -> A^top` with inner products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    dims: Vec<usize>,
    d: Vec<QMatrix>,
    inner: Vec<QMatrix>,
    offsets: Vec<usize>,
}

impl GradedComplex {
    /// `d[i]` maps degree `i` to `i + 1`; inner products default to the identity.
    pub fn new(dims: Vec<usize>, d: Vec<QMatrix>, inner: Option<Vec<QMatrix>>) -> Result<Self, HodgeError> {
        if dims.is_empty() {
            return Err(HodgeError::Shape("no degrees".into()));
        }
        if d.len() != dims.len() - 1 {
            return Err(HodgeError::Shape(format!("{} degrees need {} differentials, got {}", dims.len(), dims.len() - 1, d.len())));
        }
        for (i, m) in d.iter().enumerate() {
            if m.rows() != dims[i + 1] || m.cols() != dims[i] {
                return Err(HodgeError::Shape(format!(
                    "d^{i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 0..d.len().saturating_sub(1) {
            if !(&d[i + 1] * &d[i]).is_zero() {
                return Err(HodgeError::NotAComplex { degree: i });
            }
        }
        let inner = match inner {
            Some(inner) => {
                if inner.len() != dims.len() {
                    return Err(HodgeError::Shape("one inner product per degree is required".into()));
                }
                for (i, m) in inner.iter().enumerate() {
                    if m.rows() != dims[i] || m.cols() != dims[i] {
                        return Err(HodgeError::Shape(format!("inner product {i} has the wrong size")));
                    }
                    if !m.is_positive_definite() {
                        return Err(HodgeError::NotPositiveDefinite { degree: i });
                    }
                }
                inner
            }
            None => dims.iter().map(|&n| QMatrix::identity(n)).collect(),
        };
        let offsets = dims.iter().scan(0, |acc, &n| Some(std::mem::replace(acc, *acc + n))).collect();
        Ok(GradedComplex { dims, d, inner, offsets })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.dims.get(degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offset(&self, degree: usize) -> usize {
        self.offsets[degree]
    }

    /// Degree of a total-space basis index.
    pub fn degree_of(&self, index: usize) -> usize {
        (0..self.dims.len()).rev().find(|&i| self.offsets[i] <= index && self.dims[i] > 0).unwrap_or(0)
    }

    /// `d^i : A^i -> A^{i+1}`, the zero map out of the top degree.
    pub fn d(&self, degree: usize) -> QMatrix {
        match self.d.get(degree) {
            Some(m) => m.clone(),
            None => QMatrix::zeros(self.dim(degree + 1), self.dim(degree)),
        }
    }

    pub fn inner(&self, degree: usize) -> &QMatrix {
        &self.inner[degree]
    }

    pub fn embed(&self, degree: usize, v: &QVec) -> QVec {
        assert_eq!(v.len(), self.dim(degree));
        let mut out = QVec::zeros(self.total_dim());
        for (i, x) in v.iter().enumerate() {
            out[self.offsets[degree] + i] = x.clone();
        }
        out
    }

    pub fn component(&self, degree: usize, v: &QVec) -> QVec {
        let o = self.offsets[degree];
        QVec(v.0[o..o + self.dims[degree]].to_vec())
    }

    /// Whether a total-space vector is concentrated in `degree`.
    pub fn is_homogeneous(&self, degree: usize, v: &QVec) -> bool {
        (0..self.dims.len()).filter(|&i| i != degree).all(|i| self.component(i, v).is_zero())
    }

    /// Assembles per-degree maps of degree `shift` into one total-space matrix.
    fn assemble(&self, shift: i64, block: impl Fn(usize) -> Option<QMatrix>) -> QMatrix {
        let n = self.total_dim();
        let mut m = QMatrix::zeros(n, n);
        for i in 0..self.dims.len() {
            let target = i as i64 + shift;
            if target < 0 || target as usize >= self.dims.len() {
                continue;
            }
            let Some(b) = block(i) else { continue };
            let (ro, co) = (self.offsets[target as usize], self.offsets[i]);
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m[(ro + r, co + c)] = b[(r, c)].clone();
                }
            }
        }
        m
    }

    pub fn total_d(&self) -> QMatrix {
        self.assemble(1, |i| self.d.get(i).cloned())
    }

    /// `dim ker d^i - rank d^{i-1}`.
    pub fn betti(&self, degree: usize) -> usize {
        let ker = self.dim(degree) - self.d(degree).rank();
        let im = if degree == 0 { 0 } else { self.d(degree - 1).rank() };
        ker - im
    }
}

/// Derived Hodge operators, one matrix per degree.
#[derive(Debug, Clone)]
pub struct HodgeData {
    /// `d_star[i] : A^{i+1} -> A^i`.
    pub d_star: Vec<QMatrix>,
    pub laplacian: Vec<QMatrix>,
    pub harmonic_projector: Vec<QMatrix>,
    pub green_q: Vec<QMatrix>,
    /// `green_g[i] = d*_{i-1} Q_i : A^i -> A^{i-1}`; empty map in degree 0.
    pub green_g: Vec<QMatrix>,
    pub harmonic_dims: Vec<usize>,
}

pub fn build_hodge(c: &GradedComplex) -> HodgeData {
    let top = c.top_degree();
    let d_star: Vec<QMatrix> = (0..top)
        .map(|i| {
            let m_inv = c.inner(i).inverse().expect("positive definite");
            &(&m_inv * &c.d(i).transpose()) * c.inner(i + 1)
        })
        .collect();
    let mut laplacian = Vec::new();
    let mut harmonic_projector = Vec::new();
    let mut green_q = Vec::new();
    let mut harmonic_dims = Vec::new();
    for i in 0..=top {
        let n = c.dim(i);
        let mut lap = QMatrix::zeros(n, n);
        if i > 0 {
            lap = &lap + &(&c.d(i - 1) * &d_star[i - 1]);
        }
        if i < top {
            lap = &lap + &(&d_star[i] * &c.d(i));
        }
        let kernel = lap.kernel();
        let pi = if kernel.is_empty() {
            QMatrix::zeros(n, n)
        } else {
            let k = QMatrix::from_columns(&kernel, n);
            let kt_m = &k.transpose() * c.inner(i);
            let gram = &kt_m * &k;
            &(&k * &gram.inverse().expect("kernel basis is independent")) * &kt_m
        };
        let q = &(&lap + &pi).inverse().expect("Laplacian is invertible off the harmonics") - &pi;
        harmonic_dims.push(kernel.len());
        laplacian.push(lap);
        harmonic_projector.push(pi);
        green_q.push(q);
    }
    let green_g = (0..=top)
        .map(|i| if i == 0 { QMatrix::zeros(0, c.dim(0)) } else { &d_star[i - 1] * &green_q[i] })
        .collect();
    HodgeData { d_star, laplacian, harmonic_projector, green_q, green_g, harmonic_dims }
}

impl HodgeData {
    pub fn total_laplacian(&self, c: &GradedComplex) -> QMatrix {
        c.assemble(0, |i| Some(self.laplacian[i].clone()))
    }

    pub fn total_q(&self, c: &GradedComplex) -> QMatrix {
        c.assemble(0, |i| Some(self.green_q[i].clone()))
    }

    pub fn total_g(&self, c: &GradedComplex) -> QMatrix {
        c.assemble(-1, |i| if i == 0 { None } else { Some(self.green_g[i].clone()) })
    }

    pub fn total_projector(&self, c: &GradedComplex) -> QMatrix {
        c.assemble(0, |i| Some(self.harmonic_projector[i].clone()))
    }
}

/// Outcome of every Hodge identity, per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeCheck {
    pub adjoint: bool,
    pub delta_q: Vec<bool>,
    pub gd_dg: Vec<bool>,
    pub projector: Vec<bool>,
    pub orthogonal_decomposition: Vec<bool>,
    pub harmonic_dims: Vec<usize>,
    pub betti: Vec<usize>,
}

impl HodgeCheck {
    pub fn all_hold(&self) -> bool {
        self.adjoint
            && self.delta_q.iter().all(|&b| b)
            && self.gd_dg.iter().all(|&b| b)
            && self.projector.iter().all(|&b| b)
            && self.orthogonal_decomposition.iter().all(|&b| b)
            && self.harmonic_dims == self.betti
    }
}

pub fn check_hodge(c: &GradedComplex, h: &HodgeData) -> HodgeCheck {
    let top = c.top_degree();
    let adjoint = (0..top).all(|i| {
        // <d a, b>_{i+1} = <a, d* b>_i on basis pairs: d^T M_{i+1} = M_i d*
        &c.d(i).transpose() * c.inner(i + 1) == c.inner(i) * &h.d_star[i]
    });
    let mut delta_q = Vec::new();
    let mut gd_dg = Vec::new();
    let mut projector = Vec::new();
    let mut orthogonal = Vec::new();
    for i in 0..=top {
        let n = c.dim(i);
        let id = QMatrix::identity(n);
        let pi = &h.harmonic_projector[i];
        delta_q.push(&(&h.laplacian[i] * &h.green_q[i]) + pi == id);
        let mut sum = pi.clone();
        if i < top {
            sum = &sum + &(&h.green_g[i + 1] * &c.d(i));
        }
        if i > 0 {
            sum = &sum + &(&c.d(i - 1) * &h.green_g[i]);
        }
        gd_dg.push(sum == id);
        let m = c.inner(i);
        projector.push(&(pi * pi) == pi && (m * pi).is_symmetric());
        // Im d, Im d* and H are mutually orthogonal and span A^i.
        let mut blocks: Vec<QVec> = Vec::new();
        let im_d: Vec<QVec> = if i > 0 { column_basis(&c.d(i - 1)) } else { vec![] };
        let im_ds: Vec<QVec> = if i < top { column_basis(&h.d_star[i]) } else { vec![] };
        let harm = column_basis(pi);
        let orth = |a: &[QVec], b: &[QVec]| a.iter().all(|x| b.iter().all(|y| x.dot(&m.mul_vec(y)).is_zero()));
        let ok = orth(&im_d, &im_ds) && orth(&im_d, &harm) && orth(&im_ds, &harm);
        blocks.extend(im_d.iter().cloned());
        blocks.extend(im_ds.iter().cloned());
        blocks.extend(harm.iter().cloned());
        let spans = n == 0 || QMatrix::from_columns(&blocks, n).rank() == n;
        orthogonal.push(ok && spans);
    }
    HodgeCheck {
        adjoint,
        delta_q,
        gd_dg,
        projector,
        orthogonal_decomposition: orthogonal,
        harmonic_dims: h.harmonic_dims.clone(),
        betti: (0..=top).map(|i| c.betti(i)).collect(),
    }
}

fn column_basis(m: &QMatrix) -> Vec<QVec> {
    let pivots = m.rref().pivots;
    pivots.iter().map(|&j| m.column(j)).collect()
}

/// A graded operator `O_{label,k}` on the total space.
#[derive(Debug, Clone)]
pub struct GradedOp {
    pub label: usize,
    pub map: Multilinear,
}

impl GradedOp {
    pub fn new(label: usize, map: Multilinear) -> Self {
        GradedOp { label, map }
    }

    /// Whether every term maps degrees `(p_1..p_k)` to `sum p_s + degree`.
    pub fn has_degree(&self, c: &GradedComplex, degree: i64) -> bool {
        self.map.terms().all(|(o, idx, _)| {
            let input: i64 = idx.iter().map(|&i| c.degree_of(i) as i64).sum();
            c.degree_of(o) as i64 == input + degree
        })
    }
}

/// Which degrees random sample elements are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degrees {
    All,
    Only(usize),
}

/// Largest absolute coordinate of any defect seen, and how many tuples were tried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    pub max_defect: Q,
    pub evaluations: usize,
}

impl DefectReport {
    pub fn passed(&self) -> bool {
        self.max_defect.is_zero()
    }
}

fn random_homogeneous(c: &GradedComplex, degree: usize, rng: &mut ChaCha8Rng) -> QVec {
    let v = QVec((0..c.dim(degree)).map(|_| q(rng.random_range(-3..=3))).collect());
    c.embed(degree, &v)
}

fn pick_degree(c: &GradedComplex, which: Degrees, rng: &mut ChaCha8Rng) -> usize {
    match which {
        Degrees::Only(d) => d,
        Degrees::All => rng.random_range(0..=c.top_degree()),
    }
}

fn koszul_sign(degrees: &[usize]) -> Q {
    if degrees.iter().sum::<usize>() % 2 == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// `d O(a_1..a_k) - sum_i (-1)^{|a_1|+..+|a_{i-1}|} O(a_1, .., d a_i, .., a_k)`
/// on random homogeneous tuples.
pub fn check_leibnitz(c: &GradedComplex, ops: &[GradedOp], samples: usize, which: Degrees, seed: u64) -> DefectReport {
    let d = c.total_d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_defect = Q::zero();
    let mut evaluations = 0;
    for _ in 0..samples {
        for op in ops {
            let k = op.map.arity();
            let degs: Vec<usize> = (0..k).map(|_| pick_degree(c, which, &mut rng)).collect();
            let args: Vec<QVec> = degs.iter().map(|&g| random_homogeneous(c, g, &mut rng)).collect();
            let refs: Vec<&QVec> = args.iter().collect();
            let mut defect = d.mul_vec(&op.map.apply(&refs));
            for i in 0..k {
                let da = d.mul_vec(&args[i]);
                let mut r = refs.clone();
                r[i] = &da;
                let term = op.map.apply(&r).scale(&koszul_sign(&degs[..i]));
                defect.add_assign(&term.neg());
            }
            max_defect = max_defect.max(defect.max_abs());
            evaluations += 1;
        }
    }
    DefectReport { max_defect, evaluations }
}

/// For each pair of labels `(n, m)` and each `t >= 3`:
/// `sum_{k+l=t+1} sum_i (-1)^{|a_1|+..+|a_{i-1}|} O_{n,k}(a_1, .., O_{m,l}(a_i..a_{i+l-1}), .., a_t)`.
/// Operators absent from `ops` count as zero.
pub fn check_quadratic(c: &GradedComplex, ops: &[GradedOp], samples: usize, which: Degrees, seed: u64) -> DefectReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_defect = Q::zero();
    let mut evaluations = 0;
    let labels: Vec<usize> = {
        let mut l: Vec<usize> = ops.iter().map(|o| o.label).collect();
        l.sort_unstable();
        l.dedup();
        l
    };
    let max_arity = ops.iter().map(|o| o.map.arity()).max().unwrap_or(0);
    let find = |label: usize, arity: usize| ops.iter().find(|o| o.label == label && o.map.arity() == arity);
    for _ in 0..samples {
        for &n in &labels {
            for &m in &labels {
                for t in 3..=(2 * max_arity).saturating_sub(1) {
                    let degs: Vec<usize> = (0..t).map(|_| pick_degree(c, which, &mut rng)).collect();
                    let args: Vec<QVec> = degs.iter().map(|&g| random_homogeneous(c, g, &mut rng)).collect();
                    let mut total = QVec::zeros(c.total_dim());
                    for l in 2..t {
                        let k = t + 1 - l;
                        let (Some(outer), Some(inner)) = (find(n, k), find(m, l)) else { continue };
                        for i in 0..=t - l {
                            let inner_refs: Vec<&QVec> = args[i..i + l].iter().collect();
                            let nested = inner.map.apply(&inner_refs);
                            let mut outer_args: Vec<&QVec> = args[..i].iter().collect();
                            outer_args.push(&nested);
                            outer_args.extend(args[i + l..].iter());
                            let term = outer.map.apply(&outer_args).scale(&koszul_sign(&degs[..i]));
                            total.add_assign(&term);
                        }
                    }
                    max_defect = max_defect.max(total.max_abs());
                    evaluations += 1;
                }
            }
        }
    }
    DefectReport { max_defect, evaluations }
}

/// Coefficients `a_0 ..= a_N` (as elements of `A^1`) of a perturbative solution.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeSolution {
    pub coeffs: Vec<QVec>,
    /// Residual of the equation per order, in total-space coordinates.
    pub residual: Vec<QVec>,
}

impl HodgeSolution {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.iter().all(Vector::is_zero_vector)
    }
}

fn build_family(linear: QMatrix, right_inverse: QMatrix, ops: &[GradedOp]) -> TensorFamily {
    let mut family = TensorFamily::with_right_inverse(linear, right_inverse, false);
    for op in ops {
        family.set_op(op.label, op.map.clone());
    }
    family
}

fn solve_with(
    c: &GradedComplex,
    family: &TensorFamily,
    psi: &QVec,
    order: usize,
) -> Result<HodgeSolution, HodgeError> {
    let sol = solve_tree_sum(family, psi, order)?;
    let res = residual(family, psi, &VectorSeries::new(sol.coeffs.clone()), order);
    let coeffs = sol.coeffs.iter().map(|a| c.component(1, a)).collect();
    Ok(HodgeSolution { coeffs, residual: res })
}

fn check_rhs(c: &GradedComplex, degree: usize, b: &QVec) -> Result<(), HodgeError> {
    if b.len() != c.dim(degree) {
        return Err(HodgeError::RhsDimension { degree, got: b.len(), expected: c.dim(degree) });
    }
    Ok(())
}

/// Solves `Delta(a) + sum O_{n,k}(a, .., a) L^{n+k-1} = b` for `b` in `A^1`;
/// operators must have degree `1 - k` and `h^1` must vanish.
pub fn solve_laplace(
    c: &GradedComplex,
    h: &HodgeData,
    ops: &[GradedOp],
    b: &QVec,
    order: usize,
) -> Result<HodgeSolution, HodgeError> {
    check_rhs(c, 1, b)?;
    if h.harmonic_dims.get(1).copied().unwrap_or(0) != 0 {
        return Err(HodgeError::HarmonicsPresent { degree: 1, dim: h.harmonic_dims[1] });
    }
    for op in ops {
        let k = op.map.arity();
        if !op.has_degree(c, 1 - k as i64) {
            return Err(HodgeError::OperatorDegree { label: op.label, arity: k, expected: 1 - k as i64 });
        }
    }
    let family = build_family(h.total_laplacian(c), h.total_q(c), ops);
    solve_with(c, &family, &c.embed(1, b), order)
}

/// Whether `solve_d` runs the Leibnitz and quadratic-relation checks first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorChecks {
    Run { samples: usize, seed: u64 },
    Waive,
}

/// Solves `d a + sum O_{n,k}(a, .., a) L^{n+k-1} = b` for closed `b` in `A^2`;
/// operators must have degree `2 - k` and `h^2` must vanish.
pub fn solve_d(
    c: &GradedComplex,
    h: &HodgeData,
    ops: &[GradedOp],
    b: &QVec,
    order: usize,
    checks: OperatorChecks,
) -> Result<HodgeSolution, HodgeError> {
    check_rhs(c, 2, b)?;
    if h.harmonic_dims.get(2).copied().unwrap_or(0) != 0 {
        return Err(HodgeError::HarmonicsPresent { degree: 2, dim: h.harmonic_dims[2] });
    }
    if !c.d(2).mul_vec(b).is_zero() {
        return Err(HodgeError::NotClosed);
    }
    for op in ops {
        let k = op.map.arity();
        if !op.has_degree(c, 2 - k as i64) {
            return Err(HodgeError::OperatorDegree { label: op.label, arity: k, expected: 2 - k as i64 });
        }
    }
    if let OperatorChecks::Run { samples, seed } = checks {
        let leib = check_leibnitz(c, ops, samples, Degrees::All, seed);
        // The unknown lives in degree one; that is where the relations are used.
        let quad = check_quadratic(c, ops, samples, Degrees::Only(1), seed);
        if !leib.passed() || !quad.passed() {
            return Err(HodgeError::OperatorChecks {
                leibnitz: crate::rational::fmt_q(&leib.max_defect),
                quadratic: crate::rational::fmt_q(&quad.max_defect),
            });
        }
    }
    let family = build_family(c.total_d(), h.total_g(c), ops);
    solve_with(c, &family, &c.embed(2, b), order)
}

#[cfg(test)]
mod tests {
    use super::simplicial::{circle, filled_triangle, interval};
    use super::*;
    use crate::rational::qf;

    #[test]
    fn interval_hodge_data() {
        let c = interval().cochain_complex();
        let h = build_hodge(&c);
        assert_eq!(h.laplacian[1], QMatrix::from_int_rows(&[&[2]]));
        assert!(h.harmonic_projector[1].is_zero());
        assert_eq!(h.green_q[1], QMatrix::from_rows(vec![vec![qf(1, 2)]]));
        assert_eq!(h.harmonic_dims, vec![1, 0]);
        assert!(check_hodge(&c, &h).all_hold());
    }

    #[test]
    fn circle_has_one_harmonic_per_degree() {
        let c = circle(6).cochain_complex();
        let h = build_hodge(&c);
        assert_eq!(h.harmonic_dims, vec![1, 1]);
        assert!(check_hodge(&c, &h).all_hold());
    }

    #[test]
    fn zero_differential_is_all_harmonic() {
        let c = GradedComplex::new(vec![2, 3], vec![QMatrix::zeros(3, 2)], None).unwrap();
        let h = build_hodge(&c);
        assert!(h.laplacian.iter().all(QMatrix::is_zero));
        assert_eq!(h.harmonic_projector[0], QMatrix::identity(2));
        assert_eq!(h.harmonic_projector[1], QMatrix::identity(3));
        assert!(h.green_g[1].is_zero());
    }

    #[test]
    fn rejects_non_complex_and_bad_inner_product() {
        let d0 = QMatrix::from_int_rows(&[&[1]]);
        let d1 = QMatrix::from_int_rows(&[&[1]]);
        assert_eq!(
            GradedComplex::new(vec![1, 1, 1], vec![d0, d1], None).unwrap_err(),
            HodgeError::NotAComplex { degree: 0 }
        );
        let bad = vec![QMatrix::from_int_rows(&[&[-1]]), QMatrix::identity(1)];
        assert_eq!(
            GradedComplex::new(vec![1, 1], vec![QMatrix::from_int_rows(&[&[1]])], Some(bad)).unwrap_err(),
            HodgeError::NotPositiveDefinite { degree: 0 }
        );
    }

    #[test]
    fn weighted_inner_products_keep_identities() {
        let inner = vec![
            QMatrix::from_int_rows(&[&[2, 0], &[0, 3]]),
            QMatrix::from_rows(vec![vec![qf(1, 2)]]),
        ];
        let c = GradedComplex::new(vec![2, 1], vec![QMatrix::from_int_rows(&[&[-1, 1]])], Some(inner)).unwrap();
        let h = build_hodge(&c);
        assert!(check_hodge(&c, &h).all_hold());
    }

    #[test]
    fn solve_d_without_operators_is_green_operator() {
        let c = filled_triangle().cochain_complex();
        let h = build_hodge(&c);
        let b = QVec::from_ints(&[3]);
        let sol = solve_d(&c, &h, &[], &b, 3, OperatorChecks::Waive).unwrap();
        assert_eq!(sol.coeffs[0], h.green_g[2].mul_vec(&b));
        assert_eq!(c.d(1).mul_vec(&sol.coeffs[0]), b);
        assert!(sol.coeffs[1..].iter().all(Vector::is_zero_vector));
    }

    #[test]
    fn solve_laplace_requires_vanishing_h1() {
        let c = circle(4).cochain_complex();
        let h = build_hodge(&c);
        let err = solve_laplace(&c, &h, &[], &QVec::zeros(4), 2).unwrap_err();
        assert_eq!(err, HodgeError::HarmonicsPresent { degree: 1, dim: 1 });
    }
}
