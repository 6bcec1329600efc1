use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pertinv::bf_config::{
    action_eval, action_invariance_test, candidate_b_defect, invariance_test, s_os_closed, solve_eom, Configuration,
    PiecewiseLinearMap, ThetaAtJump,
};
use pertinv::formats::{parse_complex, ComplexInput};
use pertinv::hodge::simplicial::{circle, filled_triangle, interval, torus7};
use pertinv::hodge::{
    build_hodge, check_hodge, check_leibnitz, check_quadratic, solve_d, solve_laplace, Degrees, GradedOp,
    HodgeSolution, OperatorChecks,
};
use pertinv::rational::{fmt_q, parse_q, parse_q_list, QVec, Q};
use pertinv::solver::{
    onshell_hierarchy, solve_polynomial, solve_recursive, solve_tree_sum, toy_action, ScalarPolynomial, WeightMode,
};
use pertinv::trees::{audit_second_equation, count_via_series, Labels, TreeTable};

use crate::error::{read_file, CliError};
use crate::output::{join, Output};

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

/// A comma-separated list of rationals given as one argument.
#[derive(Debug, Clone)]
pub struct QList(pub Vec<Q>);

fn rational_list(s: &str) -> Result<QList, String> {
    parse_q_list(s).map(QList).map_err(|e| e.to_string())
}

fn vector(out: &Output, v: &QVec) -> String {
    if out.is_machine() {
        join(v.iter().map(fmt_q))
    } else {
        v.to_string()
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum LabelKind {
    Zero,
    Labelled,
}

#[derive(Subcommand)]
pub enum TreesCmd {
    /// Number of trees of order N.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "zero")]
        labels: LabelKind,
        /// Smallest nonzero label for labelled trees.
        #[arg(long, default_value_t = 0)]
        label_min: usize,
    },
    /// All trees of order N in canonical order.
    List {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "zero")]
        labels: LabelKind,
        #[arg(long, default_value_t = 0)]
        label_min: usize,
    },
    /// Checks enumeration against the generating equations through order N.
    VerifyGf {
        #[arg(long)]
        n: usize,
    },
}

fn labels(kind: LabelKind, label_min: usize) -> Labels {
    match kind {
        LabelKind::Zero => Labels::Zero,
        LabelKind::Labelled => Labels::Labelled { label_min },
    }
}

pub fn trees(cmd: TreesCmd, out: &mut Output) -> Result<(), CliError> {
    match cmd {
        TreesCmd::Count { n, labels: kind, label_min } => {
            let counts = count_via_series(n, labels(kind, label_min)).map_err(|e| CliError::Solvability(e.to_string()))?;
            out.primary("count", counts[n]);
        }
        TreesCmd::List { n, labels: kind, label_min } => {
            let table = TreeTable::build(n, &labels(kind, label_min).policy());
            out.field("count", table.order(n).len());
            for t in table.order(n) {
                out.primary("tree", t);
            }
        }
        TreesCmd::VerifyGf { n } => {
            let zero = count_via_series(n, Labels::Zero).map_err(|e| CliError::Solvability(e.to_string()))?;
            out.field("zero.counts", join(&zero));
            let rows = audit_second_equation(n, &[0, 1, 2]).map_err(|e| CliError::Solvability(e.to_string()))?;
            out.field("literal.series", join(rows[0].literal.iter().map(fmt_q)));
            for row in rows {
                let key = format!("label_min.{}", row.label_min);
                out.field(&format!("{key}.counts"), join(&row.enumerated));
                out.field(&format!("{key}.matches_literal"), row.matches);
                if let Some(m) = row.first_mismatch {
                    out.field(&format!("{key}.first_mismatch"), m);
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Tree,
    Recursive,
    Both,
}

#[derive(Subcommand)]
pub enum SolveCmd {
    /// Inverts a_1 x + a_2 x^2 L + ... + a_d x^d L^(d-1) = y as a series in L.
    Poly {
        /// a_1,a_2,...; a_1 must be nonzero.
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        coeffs: QList,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        y: Q,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "both")]
        strategy: StrategyArg,
    },
}

pub fn solve(cmd: SolveCmd, out: &mut Output) -> Result<(), CliError> {
    let SolveCmd::Poly { coeffs, y, order, strategy } = cmd;
    let a = coeffs.0;
    if a.is_empty() || num_traits::Zero::is_zero(&a[0]) {
        return Err(CliError::Input("the linear coefficient a_1 must be nonzero".into()));
    }
    let family = ScalarPolynomial::new(a.clone());
    let coeffs: Vec<Q> = match strategy {
        StrategyArg::Tree => solve_tree_sum(&family, &y, order)?.coeffs,
        StrategyArg::Recursive => solve_recursive(&family, &y, order)?.coeffs,
        StrategyArg::Both => {
            let closed = solve_polynomial(&a, &y, order)?;
            let tree = solve_tree_sum(&family, &y, order)?.coeffs;
            if let Some(n) = (0..=order).find(|&n| tree[n] != closed[n]) {
                return Err(CliError::Solvability(format!("tree sum and recursion disagree at order {n}")));
            }
            tree
        }
    };
    for (n, c) in coeffs.iter().enumerate() {
        out.field(&format!("x.{n}"), fmt_q(c));
    }
    Ok(())
}

#[derive(Clone, Copy, ValueEnum)]
pub enum WeightArg {
    /// Weight each root tree by 1/k.
    InverseArity,
    /// No 1/k weight.
    Literal,
}

#[derive(Subcommand)]
pub enum HierarchyCmd {
    /// S = -j phi + kappa phi^2 / 2 + g phi^3 L / 3.
    Toy {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        kappa: Q,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        g: Q,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        j: Q,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "inverse-arity")]
        weights: WeightArg,
    },
}

pub fn hierarchy(cmd: HierarchyCmd, out: &mut Output) -> Result<(), CliError> {
    let HierarchyCmd::Toy { kappa, g, j, order, weights } = cmd;
    if num_traits::Zero::is_zero(&kappa) {
        return Err(CliError::Input("kappa must be nonzero".into()));
    }
    let mode = match weights {
        WeightArg::InverseArity => WeightMode::WithInverseArity,
        WeightArg::Literal => WeightMode::Literal,
    };
    let report = onshell_hierarchy(&toy_action(kappa, g, j), order, mode)?;
    for n in 0..=order {
        out.field(&format!("S.{n}.trees"), fmt_q(&report.tree_formula[n]));
        out.field(&format!("S.{n}.direct"), fmt_q(&report.direct[n]));
    }
    out.field("agrees", report.agrees());
    let mismatches = report.mismatches();
    if !mismatches.is_empty() {
        out.field("mismatches", join(&mismatches));
        if mode == WeightMode::WithInverseArity {
            return Err(CliError::Solvability("tree formula and direct substitution disagree".into()));
        }
    }
    Ok(())
}

#[derive(clap::Args)]
pub struct ComplexSource {
    /// Complex document (JSON).
    #[arg(long, conflicts_with = "fixture")]
    complex: Option<PathBuf>,
    /// Built-in complex: interval, circle[:N], triangle or torus.
    #[arg(long)]
    fixture: Option<String>,
    /// Add the cup product as O_(0,2) on a built-in complex.
    #[arg(long, requires = "fixture")]
    cup: bool,
}

fn load_complex(src: &ComplexSource) -> Result<ComplexInput, CliError> {
    match (&src.complex, &src.fixture) {
        (Some(path), _) => Ok(parse_complex(&read_file(path)?)?),
        (None, Some(name)) => {
            let s = match name.split_once(':') {
                Some(("circle", n)) => {
                    let n: usize = n.parse().ok().filter(|&n| n >= 3).ok_or_else(|| {
                        CliError::Input(format!("circle needs at least 3 vertices, got {n:?}"))
                    })?;
                    circle(n)
                }
                None if name == "circle" => circle(4),
                None if name == "interval" => interval(),
                None if name == "triangle" => filled_triangle(),
                None if name == "torus" => torus7(),
                _ => return Err(CliError::Input(format!("unknown fixture {name:?}"))),
            };
            let ops = if src.cup { vec![GradedOp::new(0, s.cup_product())] } else { vec![] };
            Ok(ComplexInput { complex: s.cochain_complex(), ops, b: None })
        }
        (None, None) => Err(CliError::Input("give --complex FILE or --fixture NAME".into())),
    }
}

#[derive(Subcommand)]
pub enum HodgeCmd {
    /// Builds the Hodge data and checks every identity.
    Check {
        #[command(flatten)]
        source: ComplexSource,
        /// Random tuples per operator for the Leibnitz and quadratic checks.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solves Delta(a) + sum O(a,..,a) L^(n+k-1) = b for b in A^1.
    SolveLaplace {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long)]
        order: usize,
        /// Right-hand side in A^1 (overrides the document's b).
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        b: Option<QList>,
    },
    /// Solves d a + sum O(a,..,a) L^(n+k-1) = b for closed b in A^2.
    SolveD {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long)]
        order: usize,
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        b: Option<QList>,
        /// Skip the Leibnitz and quadratic-relation checks.
        #[arg(long)]
        waive_checks: bool,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn rhs(input: &ComplexInput, flag: Option<QList>) -> Result<QVec, CliError> {
    flag.map(|l| QVec(l.0))
        .or_else(|| input.b.clone())
        .ok_or_else(|| CliError::Input("no right-hand side: pass --b or put b in the document".into()))
}

fn report_solution(sol: &HodgeSolution, out: &mut Output) {
    for (n, a) in sol.coeffs.iter().enumerate() {
        out.field(&format!("a.{n}"), vector(out, a));
    }
    out.field("residual_zero", sol.residual_is_zero());
}

pub fn hodge(cmd: HodgeCmd, out: &mut Output) -> Result<(), CliError> {
    match cmd {
        HodgeCmd::Check { source, samples, seed } => {
            let input = load_complex(&source)?;
            let c = &input.complex;
            let h = build_hodge(c);
            let check = check_hodge(c, &h);
            out.field("dims", join(c.dims()));
            out.field("harmonic_dims", join(&check.harmonic_dims));
            out.field("betti", join(&check.betti));
            out.field("adjoint", check.adjoint);
            out.field("delta_q_plus_pi", join(&check.delta_q));
            out.field("gd_plus_dg_plus_pi", join(&check.gd_dg));
            out.field("projector", join(&check.projector));
            out.field("orthogonal_decomposition", join(&check.orthogonal_decomposition));
            if !input.ops.is_empty() {
                let s = samples as usize;
                let leib = check_leibnitz(c, &input.ops, s, Degrees::All, seed);
                let quad = check_quadratic(c, &input.ops, s, Degrees::All, seed);
                let quad1 = check_quadratic(c, &input.ops, s, Degrees::Only(1), seed);
                out.field("leibnitz_defect", fmt_q(&leib.max_defect));
                out.field("quadratic_defect", fmt_q(&quad.max_defect));
                out.field("quadratic_defect_degree1", fmt_q(&quad1.max_defect));
            }
            if !check.all_hold() {
                return Err(CliError::Solvability("a Hodge identity fails".into()));
            }
        }
        HodgeCmd::SolveLaplace { source, order, b } => {
            let input = load_complex(&source)?;
            let b = rhs(&input, b)?;
            let h = build_hodge(&input.complex);
            let sol = solve_laplace(&input.complex, &h, &input.ops, &b, order)?;
            report_solution(&sol, out);
        }
        HodgeCmd::SolveD { source, order, b, waive_checks, samples, seed } => {
            let input = load_complex(&source)?;
            let b = rhs(&input, b)?;
            let h = build_hodge(&input.complex);
            let checks =
                if waive_checks { OperatorChecks::Waive } else { OperatorChecks::Run { samples: samples as usize, seed } };
            let sol = solve_d(&input.complex, &h, &input.ops, &b, order, checks)?;
            report_solution(&sol, out);
        }
    }
    Ok(())
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ThetaArg {
    Half,
    Zero,
    One,
}

#[derive(Subcommand)]
pub enum BfCmd {
    /// On-shell action, equation-of-motion status and invariance report.
    Config {
        /// Distinct points x_1,...,x_n.
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        points: QList,
        #[arg(long, value_enum, default_value = "half")]
        theta_jump: ThetaArg,
        /// Random increasing piecewise-linear maps to test.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn bf(cmd: BfCmd, out: &mut Output) -> Result<(), CliError> {
    let BfCmd::Config { points, theta_jump, trials, seed } = cmd;
    let c = Configuration::new(points.0).map_err(|e| CliError::Input(e.to_string()))?;
    let conv = match theta_jump {
        ThetaArg::Half => ThetaAtJump::Half,
        ThetaArg::Zero => ThetaAtJump::Zero,
        ThetaArg::One => ThetaAtJump::One,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maps: Vec<PiecewiseLinearMap> = (0..trials).map(|_| PiecewiseLinearMap::random(&mut rng, 5)).collect();
    out.field("n", c.len());
    out.field("s_os", fmt_q(&s_os_closed(&c, conv)));
    let eom = solve_eom(&c);
    out.field("eom_solved", eom.solved());
    if !eom.solved() {
        out.field("eom_residual_max", fmt_q(&eom.residual.max_abs()));
        out.field("eom_kernel", eom.kernel.iter().map(|k| vector(out, k)).collect::<Vec<_>>().join(";"));
    }
    out.field("b_candidate_solves", candidate_b_defect(c.len()).is_zero());
    out.field("action_on_solution", fmt_q(&action_eval(&eom.fields, &c)));
    let inv = invariance_test(&c, &maps, conv);
    out.field("s_os_invariant", inv.invariant());
    out.field("s_os_trials", inv.trials);
    out.field("s_os_violations", inv.violations.len());
    let act = action_invariance_test(&c, &maps);
    out.field("action_invariant", act.invariant());
    out.field("action_violations", act.violations.len());
    Ok(())
}
