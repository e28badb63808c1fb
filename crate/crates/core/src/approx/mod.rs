//! First-order approximate symmetries of perturbed systems.
//!
//! A generator `X0 + eps X1` is sought for `E0 + eps E1 = 0`. `X0` must be
//! an exact symmetry of `E0`; `X1` then solves a copy of the exact
//! determining system with an inhomogeneous term.

pub mod ansatz;
pub mod linalg;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use ansatz::{
    in_span, solve_ansatz, solve_expressions, symbolic_combination, Ansatz, AnsatzBlock,
    AnsatzSolution, Order, Vocabulary,
};
pub use linalg::{LinearSystem, Reduced};

use crate::determine::{
    determining_system, generic_generator, invariance_residuals, split_residuals, verify_generator,
    DeterminingSystem,
};
use crate::jet::{reduce_on_shell, Coordinates, OdeSystem};
use crate::prolong::{apply, prolong2, Generator};
use crate::symexpr::{
    collect, diff, is_zero, normalize, substitute, Atom, AtomKind, Bindings, Expr, ExprJson, Func,
    MonomialKey, Rational,
};
use crate::{Error, Result};

/// How the perturbing terms of a system are built.
#[derive(Clone, Debug)]
pub enum PerturbationSpec {
    /// One unknown function per equation, e.g. `f(theta)`, `g(phi)`.
    Functions(Vec<Func>),
    /// Per equation `c1 + c2 x1 + c3 x2 + c4 x1' + c5 x2' + c6 x1'^2 + c7 x2'^2`
    /// with unknown constants.
    Quadratic(Vec<Vec<Atom>>),
    Explicit(Vec<Expr>),
}

impl PerturbationSpec {
    /// Constants named `{name}1..{name}7`, one name per equation.
    pub fn quadratic(coords: &Coordinates, names: &[&str]) -> Result<Self> {
        if coords.dim() != 2 || names.len() != 2 {
            return Err(Error::UnsupportedFunctionClass(
                "the quadratic perturbation needs two equations".into(),
            ));
        }
        Ok(PerturbationSpec::Quadratic(
            names
                .iter()
                .map(|n| {
                    (1..=7)
                        .map(|i| Atom::parameter(&format!("{n}{i}")))
                        .collect()
                })
                .collect(),
        ))
    }

    pub fn terms(&self, coords: &Coordinates) -> Vec<Expr> {
        match self {
            PerturbationSpec::Functions(fs) => fs.iter().map(Func::call).collect(),
            PerturbationSpec::Explicit(es) => es.clone(),
            PerturbationSpec::Quadratic(cs) => {
                let x: Vec<Expr> = coords.dependents.iter().map(Expr::atom).collect();
                let v: Vec<Expr> = coords.velocities().iter().map(Expr::atom).collect();
                let basis = [
                    Expr::one(),
                    x[0].clone(),
                    x[1].clone(),
                    v[0].clone(),
                    v[1].clone(),
                    v[0].pow(2),
                    v[1].pow(2),
                ];
                cs.iter()
                    .map(|row| {
                        Expr::sum(
                            row.iter()
                                .zip(&basis)
                                .map(|(c, b)| Expr::atom(c) * b.clone()),
                        )
                    })
                    .collect()
            }
        }
    }

    pub fn constants(&self) -> Vec<Atom> {
        match self {
            PerturbationSpec::Quadratic(cs) => cs.iter().flatten().cloned().collect(),
            _ => Vec::new(),
        }
    }

    pub fn apply(&self, sys: &OdeSystem) -> Result<OdeSystem> {
        sys.unperturbed()
            .with_perturbation(self.terms(sys.coords()))
    }
}

fn eps_orders(e: &Expr) -> Result<(Expr, Expr)> {
    let by_eps = collect(e, &[Atom::epsilon()])?;
    let at = |k: u32| {
        by_eps
            .get(&MonomialKey(vec![k]))
            .cloned()
            .unwrap_or_else(Expr::zero)
    };
    Ok((at(0), at(1)))
}

/// `(1/eps) pr X0 (E0 + eps E1)` on the perturbed shell, one entry per
/// equation, with `eps^2` terms dropped.
pub fn auxiliary_h(x0: &Generator, sys: &OdeSystem) -> Result<Vec<Expr>> {
    let dim = sys.coords().dim();
    if sys.perturbation().is_none() {
        return Ok(vec![Expr::zero(); dim]);
    }
    let pg = prolong2(x0, sys)?;
    (0..dim)
        .into_par_iter()
        .map(|i| {
            let raw = apply(&pg, &sys.equation(i, true))?;
            let (zeroth, first) = eps_orders(&reduce_on_shell(&raw, sys, true))?;
            if !is_zero(&zeroth) {
                return Err(Error::NotExactSymmetry(x0.to_string()));
            }
            Ok(first)
        })
        .collect()
}

/// Determining system for `X1`: the exact system of `sys` with `h_i` added to
/// equation `i` before splitting.
pub fn approx_determining_system(sys: &OdeSystem, h: &[Expr]) -> Result<DeterminingSystem> {
    let unperturbed = sys.unperturbed();
    let (g, unknowns) = generic_generator(sys.coords(), None);
    let residuals = invariance_residuals(&g, &unperturbed, false)?
        .into_iter()
        .zip(h)
        .map(|(r, h)| Ok(normalize(&(r + h.clone()))?.to_expr()))
        .collect::<Result<Vec<_>>>()?;
    let keys = sys.coords().velocities();
    Ok(DeterminingSystem {
        constraints: split_residuals(&residuals, &keys)?,
        unknowns,
        keys,
    })
}

fn order_names(coords: &Coordinates, order: u8) -> Vec<String> {
    std::iter::once(format!("xi{order}"))
        .chain((1..=coords.dim()).map(|i| format!("eta{order}_{i}")))
        .collect()
}

/// Apply `X0 + eps X1` with unknown components to the perturbed equations and
/// split the `eps^0` and `eps^1` parts. Unknowns are `xi0, eta0_i` and
/// `xi1, eta1_i`.
pub fn epsilon_separate(sys: &OdeSystem) -> Result<(DeterminingSystem, DeterminingSystem)> {
    let coords = sys.coords();
    let (g0, u0) = generic_generator(coords, Some(&order_names(coords, 0)));
    let (g1, u1) = generic_generator(coords, Some(&order_names(coords, 1)));
    let (p0, p1) = (prolong2(&g0, sys)?, prolong2(&g1, sys)?);
    let eps = Expr::atom(&Atom::epsilon());
    let parts = (0..coords.dim())
        .into_par_iter()
        .map(|i| {
            let e = sys.equation(i, true);
            let raw = apply(&p0, &e)? + eps.clone() * apply(&p1, &e)?;
            eps_orders(&reduce_on_shell(&raw, sys, true))
        })
        .collect::<Result<Vec<_>>>()?;
    let (zeroth, first): (Vec<Expr>, Vec<Expr>) = parts.into_iter().unzip();
    let keys = coords.velocities();
    let e0 = DeterminingSystem {
        constraints: split_residuals(&zeroth, &keys)?,
        unknowns: u0.clone(),
        keys: keys.clone(),
    };
    let e1 = DeterminingSystem {
        constraints: split_residuals(&first, &keys)?,
        unknowns: u0.into_iter().chain(u1).collect(),
        keys,
    };
    Ok((e0, e1))
}

/// Derivatives of an exact generator that the first-order system depends on,
/// for two dependent variables `(x1, x2)`.
#[derive(Clone, Debug)]
pub struct ZerothOrderSeed {
    /// d xi / d s
    pub dxi_ds: Expr,
    pub eta1: Expr,
    pub eta2: Expr,
    /// d eta1 / d x2
    pub deta1_dx2: Expr,
    /// d eta2 / d x2
    pub deta2_dx2: Expr,
    /// d eta2 / d x1
    pub deta2_dx1: Expr,
}

impl ZerothOrderSeed {
    pub fn from_generator(g: &Generator, sys: &OdeSystem) -> Result<Self> {
        let c = sys.coords();
        if c.dim() != 2 {
            return Err(Error::UnsupportedFunctionClass(
                "seed needs two dependent variables".into(),
            ));
        }
        if !verify_generator(g, sys)?.passed() {
            return Err(Error::NotExactSymmetry(g.to_string()));
        }
        let d = |e: &Expr, x: &Atom| -> Result<Expr> { Ok(normalize(&diff(e, x))?.to_expr()) };
        let (x1, x2) = (&c.dependents[0], &c.dependents[1]);
        let eta = g.eta();
        Ok(ZerothOrderSeed {
            dxi_ds: d(g.xi(), &c.independent)?,
            eta1: eta[0].clone(),
            eta2: eta[1].clone(),
            deta1_dx2: d(&eta[0], x2)?,
            deta2_dx2: d(&eta[1], x2)?,
            deta2_dx1: d(&eta[1], x1)?,
        })
    }
}

/// Basis of the exact symmetry algebra inside the vocabulary.
pub fn exact_algebra(sys: &OdeSystem, vocab: &Vocabulary) -> Result<Vec<Generator>> {
    let ds = determining_system(sys)?;
    let mut a = Ansatz::new();
    a.generator("", Order::Exact, sys.coords(), &ds.unknowns, vocab)?;
    solve_ansatz(&coefficients(&ds), &a)?.generators(0)
}

fn coefficients(ds: &DeterminingSystem) -> Vec<Expr> {
    ds.constraints
        .iter()
        .map(|c| c.coefficient.clone())
        .collect()
}

/// Category of one solution direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    /// An exact symmetry.
    #[serde(rename = "a")]
    Exact,
    /// `eps` times an exact symmetry: carries no new information.
    #[serde(rename = "b")]
    Trivial,
    /// Not in the exact algebra.
    #[serde(rename = "c")]
    New,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Exact => "(a) exact",
            Category::Trivial => "(b) trivial",
            Category::New => "(c) new",
        })
    }
}

/// One direction of a solution space, classified.
#[derive(Clone, Debug)]
pub struct Direction {
    /// `basis k` or `particular`.
    pub label: String,
    pub category: Category,
    /// Nonzero generators per ansatz block.
    pub generators: Vec<(String, Generator)>,
    /// Nonzero constants outside the generator blocks.
    pub constants: Vec<(Atom, Rational)>,
}

#[derive(Clone, Debug, Default)]
pub struct TrivialityReport {
    pub directions: Vec<Direction>,
}

impl TrivialityReport {
    pub fn count(&self, c: Category) -> usize {
        self.directions.iter().filter(|d| d.category == c).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.count(Category::New) == 0
    }

    pub fn extend(&mut self, other: TrivialityReport) {
        self.directions.extend(other.directions);
    }
}

/// Classify every basis vector (and the particular solution, if any) by
/// whether its generator blocks lie in the span of `algebra`.
pub fn triviality_report(sol: &AnsatzSolution, algebra: &[Generator]) -> Result<TrivialityReport> {
    let blocks = sol.ansatz().blocks();
    let mut in_blocks = BTreeSet::new();
    for b in blocks {
        for c in &b.components {
            c.for_each_atom(&mut |a| {
                in_blocks.insert(a.clone());
            });
        }
    }
    let vectors: Vec<(String, &Vec<Rational>)> = sol
        .basis
        .iter()
        .enumerate()
        .map(|(k, v)| (format!("basis {k}"), v))
        .chain(sol.particular.iter().map(|v| ("particular".to_string(), v)))
        .collect();
    let directions = vectors
        .into_par_iter()
        .map(|(label, v)| {
            let mut category = if blocks.iter().all(|b| b.order == Order::Exact) {
                Category::Exact
            } else {
                Category::Trivial
            };
            let mut generators = Vec::new();
            for b in blocks {
                let g = sol.block_generator(v, b)?;
                if g.is_zero() {
                    continue;
                }
                if !in_span(&g, algebra)? {
                    category = Category::New;
                }
                generators.push((b.label.clone(), g));
            }
            let constants = sol
                .unknowns
                .iter()
                .zip(v)
                .filter(|(a, q)| !in_blocks.contains(*a) && !num_traits::Zero::is_zero(*q))
                .map(|(a, q)| (a.clone(), q.clone()))
                .collect();
            Ok(Direction {
                label,
                category,
                generators,
                constants,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrivialityReport { directions })
}

/// Outcome of a pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Solved,
    /// The seed contributes nothing at first order, so there is nothing to solve.
    CannotProceed,
    /// The first-order system has no solution inside the ansatz.
    Inconsistent,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Solved => "solved",
            Status::CannotProceed => "cannot-proceed",
            Status::Inconsistent => "inconsistent",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ApproxReport {
    pub seed: String,
    pub status: Status,
    pub h: Vec<Expr>,
    /// The first-order determining system.
    pub system: DeterminingSystem,
    /// Unknown constants of the perturbation.
    pub perturbation_constants: Vec<Atom>,
    /// Exact-order solution, when the pipeline computes one.
    pub zeroth: Option<AnsatzSolution>,
    pub solution: Option<AnsatzSolution>,
    pub triviality: TrivialityReport,
}

impl ApproxReport {
    /// Perturbation constants not forced to zero.
    pub fn surviving_constants(&self) -> Vec<Atom> {
        let Some(sol) = &self.solution else {
            return Vec::new();
        };
        self.perturbation_constants
            .iter()
            .filter(|a| !sol.forced_zero.contains(a))
            .cloned()
            .collect()
    }

    /// Perturbation constants forced to zero, in declaration order.
    pub fn forced_constants(&self) -> Vec<Atom> {
        self.perturbation_constants
            .iter()
            .filter(|a| self.forced_zero(a.name()))
            .cloned()
            .collect()
    }

    pub fn forced_zero(&self, name: &str) -> bool {
        self.solution
            .as_ref()
            .is_some_and(|s| s.is_forced_zero(name))
    }

    pub fn new_symmetry(&self) -> bool {
        !self.triviality.is_trivial()
    }

    pub fn verdict(&self) -> &'static str {
        match self.status {
            Status::CannotProceed => "cannot proceed: the seed gives a zero auxiliary function",
            Status::Inconsistent => "no approximate symmetry extends this seed",
            Status::Solved if self.new_symmetry() => "non-trivial approximate symmetry found",
            Status::Solved => "no new symmetry",
        }
    }

    pub fn classification(&self) -> &'static str {
        match self.status {
            Status::CannotProceed => "undetermined",
            _ if self.new_symmetry() => "non-trivial",
            _ => "trivial",
        }
    }

    pub fn to_json(&self) -> ReportJson {
        let solution_basis = self
            .triviality
            .directions
            .iter()
            .map(|d| DirectionJson {
                label: d.label.clone(),
                category: d.category,
                generators: d
                    .generators
                    .iter()
                    .map(|(l, g)| (l.clone(), g.to_string()))
                    .collect(),
                constants: d
                    .constants
                    .iter()
                    .map(|(a, q)| (a.name().to_string(), q.to_string()))
                    .collect(),
            })
            .collect();
        ReportJson {
            seed: self.seed.clone(),
            status: self.status,
            h: self.h.iter().map(ExprJson::from_expr).collect(),
            constraints: self
                .system
                .constraints
                .iter()
                .map(|c| ConstraintJson {
                    equation: c.equation,
                    key: c.key.0.clone(),
                    coefficient: ExprJson::from_expr(&c.coefficient),
                    duplicate: c.duplicate_of.is_some(),
                })
                .collect(),
            forced_zero: self
                .forced_constants()
                .iter()
                .map(|a| a.name().to_string())
                .collect(),
            surviving: self
                .surviving_constants()
                .iter()
                .map(|a| a.name().to_string())
                .collect(),
            solution_basis,
            classification: self.classification().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub equation: usize,
    pub key: Vec<u32>,
    pub coefficient: ExprJson,
    pub duplicate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionJson {
    pub label: String,
    pub category: Category,
    pub generators: Vec<(String, String)>,
    pub constants: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub seed: String,
    pub status: Status,
    #[serde(rename = "H")]
    pub h: Vec<ExprJson>,
    pub constraints: Vec<ConstraintJson>,
    pub forced_zero: Vec<String>,
    pub surviving: Vec<String>,
    pub solution_basis: Vec<DirectionJson>,
    pub classification: String,
}

/// Unknown functions and parameters in the perturbing terms.
fn perturbation_unknowns(sys: &OdeSystem) -> (Vec<Func>, Vec<Atom>) {
    let mut funcs = BTreeSet::new();
    let mut params = BTreeSet::new();
    for p in sys.perturbation().unwrap_or(&[]) {
        funcs.extend(p.functions());
        p.for_each_atom(&mut |a| {
            if a.kind() == AtomKind::Parameter {
                params.insert(a.clone());
            }
        });
    }
    (funcs.into_iter().collect(), params.into_iter().collect())
}

/// `f(v1, ..) -> f0 + f1 v1 + ..`, returning the new constants.
fn linear_form(f: &Func, ansatz: &mut Ansatz) -> Vec<Atom> {
    let consts: Vec<Atom> = (0..=f.params().len())
        .map(|i| Atom::parameter(&format!("{}{i}", f.name())))
        .collect();
    let e = Expr::atom(&consts[0])
        + Expr::sum(
            f.params()
                .iter()
                .zip(&consts[1..])
                .map(|(v, c)| Expr::atom(c) * Expr::atom(v)),
        );
    ansatz.bind(f, e);
    for c in &consts {
        ansatz.add_unknown(c.clone());
    }
    consts
}

/// Single-seed pipeline: auxiliary function, first-order system, ansatz
/// solve, classification. Perturbing functions are taken linear in their
/// arguments; perturbation parameters become unknowns.
pub fn first_approach_pipeline(
    seed_name: &str,
    seed: &Generator,
    sys: &OdeSystem,
    vocab: &Vocabulary,
    algebra: &[Generator],
) -> Result<ApproxReport> {
    if !verify_generator(seed, sys)?.passed() {
        return Err(Error::NotExactSymmetry(format!("{seed_name} = {seed}")));
    }
    let h = auxiliary_h(seed, sys)?;
    let system = approx_determining_system(sys, &h)?;
    let (funcs, params) = perturbation_unknowns(sys);
    let mut ansatz = Ansatz::new();
    let mut perturbation_constants = params;
    for f in &funcs {
        perturbation_constants.extend(linear_form(f, &mut ansatz));
    }
    for p in &perturbation_constants {
        ansatz.add_unknown(p.clone());
    }
    let mut report = ApproxReport {
        seed: seed_name.to_string(),
        status: Status::CannotProceed,
        h,
        system,
        perturbation_constants,
        zeroth: None,
        solution: None,
        triviality: TrivialityReport::default(),
    };
    if report.h.iter().all(is_zero) {
        return Ok(report);
    }
    ansatz.generator(
        seed_name,
        Order::FirstOrder,
        sys.coords(),
        &report.system.unknowns,
        vocab,
    )?;
    let sol = solve_ansatz(&coefficients(&report.system), &ansatz)?;
    report.status = if sol.consistent {
        Status::Solved
    } else {
        Status::Inconsistent
    };
    report.triviality = triviality_report(&sol, algebra)?;
    report.solution = Some(sol);
    Ok(report)
}

/// Run the single-seed pipeline for every seed in parallel.
pub fn first_approach_all(
    seeds: &[(String, Generator)],
    sys: &OdeSystem,
    vocab: &Vocabulary,
    algebra: &[Generator],
) -> Result<Vec<ApproxReport>> {
    seeds
        .par_iter()
        .map(|(name, g)| first_approach_pipeline(name, g, sys, vocab, algebra))
        .collect()
}

/// Generic-order pipeline: separate `eps` orders, solve the exact order for
/// the algebra, then solve the first order for every seed at once. With no
/// named seed the seeds are the algebra basis, each with its own correction
/// and shared perturbation constants, which is the first-order system for a
/// symbolic combination of the basis.
pub fn second_approach_pipeline(
    sys: &OdeSystem,
    vocab: &Vocabulary,
    seed: Option<(&str, &Generator)>,
) -> Result<ApproxReport> {
    let (e0, e1) = epsilon_separate(sys)?;
    let coords = sys.coords();
    let dim1 = coords.dim() + 1;
    let (u0, u1) = e1.unknowns.split_at(dim1);

    let mut zeroth_ansatz = Ansatz::new();
    zeroth_ansatz.generator("", Order::Exact, coords, u0, vocab)?;
    let zeroth = solve_ansatz(&coefficients(&e0), &zeroth_ansatz)?;
    let algebra = zeroth.generators(0)?;

    let (seed_name, seeds): (String, Vec<(String, Generator)>) = match seed {
        Some((name, g)) => {
            if !verify_generator(g, sys)?.passed() {
                return Err(Error::NotExactSymmetry(format!("{name} = {g}")));
            }
            (name.to_string(), vec![(name.to_string(), g.clone())])
        }
        None => (
            "generic".to_string(),
            algebra
                .iter()
                .enumerate()
                .map(|(j, g)| (format!("s{j}"), g.clone()))
                .collect(),
        ),
    };
    let h = match seed {
        Some((_, g)) => auxiliary_h(g, sys)?,
        None => auxiliary_h(&symbolic_combination(&algebra, "c")?.0, sys)?,
    };

    let (_, params) = perturbation_unknowns(sys);
    let mut ansatz = Ansatz::new();
    for p in &params {
        ansatz.add_unknown(p.clone());
    }
    let mut block_bindings = Vec::new();
    for (label, g) in &seeds {
        let comps = ansatz.components(label, coords, u1, vocab)?;
        let mut b = Bindings::new();
        for (f, c) in u0.iter().zip(g.components()) {
            b = b.func(f, c);
        }
        for (f, c) in u1.iter().zip(&comps) {
            b = b.func(f, c.clone());
        }
        ansatz.add_block(label, Order::FirstOrder, coords, comps);
        block_bindings.push(b);
    }
    let first = coefficients(&e1);
    let exprs = block_bindings
        .par_iter()
        .flat_map(|b| first.par_iter().map(move |c| substitute(c, b)))
        .collect::<Result<Vec<_>>>()?;
    let sol = solve_expressions(&exprs, ansatz)?;

    let mut triviality = triviality_report(&zeroth, &algebra)?;
    triviality.extend(triviality_report(&sol, &algebra)?);
    Ok(ApproxReport {
        seed: seed_name,
        status: if sol.consistent {
            Status::Solved
        } else {
            Status::Inconsistent
        },
        h,
        system: e1,
        perturbation_constants: params,
        zeroth: Some(zeroth),
        solution: Some(sol),
        triviality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symexpr::{parse, Context};

    fn first_order_sphere() -> (Context, OdeSystem) {
        let (ctx, sys) = fixtures::sphere_with_context();
        let spec = PerturbationSpec::Functions(vec![
            ctx.func("f").unwrap().clone(),
            ctx.func("g").unwrap().clone(),
        ]);
        let sys = spec.apply(&sys).unwrap();
        (ctx, sys)
    }

    #[test]
    fn auxiliary_function_for_translation_and_scaling() {
        let (ctx, sys) = first_order_sphere();
        let x = fixtures::sphere_generators(&sys);
        let h0 = auxiliary_h(&x[0], &sys).unwrap();
        assert!(h0.iter().all(is_zero));
        let h1 = auxiliary_h(&x[1], &sys).unwrap();
        assert!(is_zero(&(&h1[0] - &parse("2*f", &ctx).unwrap())));
        assert!(is_zero(&(&h1[1] - &parse("2*g", &ctx).unwrap())));
    }

    #[test]
    fn unperturbed_auxiliary_function_vanishes() {
        let (_, sys) = fixtures::sphere_with_context();
        for g in fixtures::sphere_generators(&sys) {
            assert!(auxiliary_h(&g, &sys).unwrap().iter().all(is_zero));
        }
    }

    #[test]
    fn non_symmetry_seed_is_rejected() {
        let (ctx, sys) = first_order_sphere();
        let bad = fixtures::generator(&ctx, &sys, ["0", "theta", "0"]);
        assert!(matches!(
            auxiliary_h(&bad, &sys),
            Err(Error::NotExactSymmetry(_))
        ));
    }

    #[test]
    fn first_order_system_changes_only_the_constant_slots() {
        let (ctx, sys) = first_order_sphere();
        let x = fixtures::sphere_generators(&sys);
        let h = auxiliary_h(&x[1], &sys).unwrap();
        let ds = approx_determining_system(&sys, &h).unwrap();
        let exact = determining_system(&sys).unwrap();
        assert_eq!(ds.len(), exact.len());
        let mut c = ctx.clone();
        for f in &ds.unknowns {
            c.add_function(f).unwrap();
        }
        let p = |s: &str| crate::determine::normalize_constraint(&parse(s, &c).unwrap()).unwrap();
        assert_eq!(
            ds.get(1, &[0, 0]).unwrap().coefficient,
            p("eta1[s,s] + 2*f")
        );
        assert_eq!(
            ds.get(2, &[0, 0]).unwrap().coefficient,
            p("eta2[s,s] + 2*g")
        );
        for k in &exact.constraints {
            if k.key.0 != [0, 0] {
                assert_eq!(
                    ds.get(k.equation, &k.key.0).unwrap().coefficient,
                    k.coefficient
                );
            }
        }
    }

    #[test]
    fn translation_seed_cannot_proceed() {
        let (_, sys) = first_order_sphere();
        let x = fixtures::sphere_generators(&sys);
        let r = first_approach_pipeline("X0", &x[0], &sys, &Vocabulary::Standard, &x).unwrap();
        assert_eq!(r.status, Status::CannotProceed);
        assert!(r.solution.is_none());
    }

    #[test]
    fn scaling_seed_forces_zero_perturbation() {
        let (_, sys) = first_order_sphere();
        let x = fixtures::sphere_generators(&sys);
        let r = first_approach_pipeline("X1", &x[1], &sys, &Vocabulary::Standard, &x).unwrap();
        assert_eq!(r.status, Status::Solved);
        for name in ["f0", "f1", "g0", "g1"] {
            assert!(r.forced_zero(name), "{name}");
        }
        assert!(r.triviality.is_trivial());
    }

    #[test]
    fn flat_control_has_a_new_direction() {
        let (ctx, sys) = fixtures::flat_with_context();
        let sys = PerturbationSpec::Explicit(vec![Expr::one(), Expr::zero()])
            .apply(&sys)
            .unwrap();
        let seed = fixtures::generator(&ctx, &sys, ["s", "0", "0"]);
        let h = auxiliary_h(&seed, &sys).unwrap();
        assert!(is_zero(&(h[0].clone() - Expr::int(2))) && is_zero(&h[1]));
        let algebra = exact_algebra(&sys, &Vocabulary::Polynomial(2)).unwrap();
        assert_eq!(algebra.len(), 15);
        let r =
            first_approach_pipeline("s*D[s]", &seed, &sys, &Vocabulary::Polynomial(2), &algebra)
                .unwrap();
        assert_eq!(r.status, Status::Solved);
        assert!(r.new_symmetry());
        let particular = r
            .triviality
            .directions
            .iter()
            .find(|d| d.label == "particular")
            .unwrap();
        assert_eq!(particular.category, Category::New);
        // Every first-order correction differs from -s^2 D[x] by an exact symmetry.
        let target = fixtures::generator(&ctx, &sys, ["0", "-s^2", "0"]);
        let (_, g) = &particular.generators[0];
        assert!(in_span(&g.sub(&target).unwrap(), &algebra).unwrap());
    }

    #[test]
    fn zeroth_order_seed_derivatives() {
        let (_, sys) = fixtures::sphere_with_context();
        let x = fixtures::sphere_generators(&sys);
        let s = ZerothOrderSeed::from_generator(&x[1], &sys).unwrap();
        assert_eq!(s.dxi_ds, Expr::one());
        assert!(s.eta1.is_zero_literal() && s.deta2_dx1.is_zero_literal());
        let r = ZerothOrderSeed::from_generator(&x[3], &sys).unwrap();
        assert!(is_zero(
            &(r.deta1_dx2 + Expr::sin(&Expr::atom(&sys.coords().dependents[1])))
        ));
    }
}
