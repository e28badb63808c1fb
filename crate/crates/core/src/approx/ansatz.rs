//! Finite ansatz for unknown functions and exact solving of the resulting
//! linear system in the unknown constants.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;

use super::linalg::LinearSystem;
use crate::jet::Coordinates;
use crate::prolong::Generator;
use crate::symexpr::{
    normalize, substitute, Atom, Bindings, Expr, Func, Kernel, Monomial, Rational,
};
use crate::{Error, Result};

/// Which finite family the generator components are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vocabulary {
    /// Two dependent variables, the first a polar angle: xi is cubic in the
    /// independent variable with coefficients linear in the first dependent one;
    /// eta components span the trig/log family that closes under the equations.
    Standard,
    /// `Standard` plus mixed and higher terms, for robustness checks.
    Extended,
    /// All monomials in the coordinates up to the given total degree.
    Polynomial(u32),
}

impl FromStr for Vocabulary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["standard"] => Ok(Vocabulary::Standard),
            ["extended"] => Ok(Vocabulary::Extended),
            ["poly", n] | ["polynomial", n] => n
                .parse()
                .map(Vocabulary::Polynomial)
                .map_err(|_| Error::Declaration(format!("bad polynomial degree `{n}`"))),
            _ => Err(Error::Declaration(format!("unknown ansatz `{s}`"))),
        }
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vocabulary::Standard => f.write_str("standard"),
            Vocabulary::Extended => f.write_str("extended"),
            Vocabulary::Polynomial(d) => write!(f, "poly {d}"),
        }
    }
}

fn monomials(vars: &[Expr], degree: u32) -> Vec<Expr> {
    let mut out = vec![Expr::one()];
    let mut frontier: Vec<(usize, Expr)> = vec![(0, Expr::one())];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (start, m) in &frontier {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                let e = m * v;
                out.push(e.clone());
                next.push((i, e));
            }
        }
        frontier = next;
    }
    out
}

impl Vocabulary {
    /// Terms for `xi` and for every `eta`.
    pub fn terms(&self, coords: &Coordinates) -> Result<(Vec<Expr>, Vec<Expr>)> {
        let s = Expr::atom(&coords.independent);
        if let Vocabulary::Polynomial(d) = self {
            let vars: Vec<Expr> = std::iter::once(s)
                .chain(coords.dependents.iter().map(Expr::atom))
                .collect();
            let m = monomials(&vars, *d);
            return Ok((m.clone(), m));
        }
        if coords.dim() != 2 {
            return Err(Error::UnsupportedFunctionClass(format!(
                "ansatz `{self}` needs two dependent variables"
            )));
        }
        let t = Expr::atom(&coords.dependents[0]);
        let p = Expr::atom(&coords.dependents[1]);
        let one = Expr::one();
        let s2 = s.pow(2);
        let s3 = s.pow(3);
        let (sp, cp) = (Expr::sin(&p), Expr::cos(&p));
        let cot = Expr::cot(&t);
        let mut xi: Vec<Expr> = [&one, &t]
            .iter()
            .flat_map(|c| [&one, &s, &s2, &s3].map(|m| *c * m))
            .collect();
        let mut eta = vec![
            one.clone(),
            s.clone(),
            s2.clone(),
            t.clone(),
            &t * &s,
            &t * &s2,
            p.clone(),
            sp.clone(),
            cp.clone(),
            &cot * &sp,
            &cot * &cp,
            &t * &cot,
            Expr::ln_sin(&t),
        ];
        if *self == Vocabulary::Extended {
            xi.extend([p.clone(), &p * &s, sp.clone(), cp.clone(), t.pow(2)]);
            eta.extend([
                s3,
                &p * &s,
                &p * &t,
                p.pow(2),
                t.pow(2),
                &sp * &s,
                &cp * &s,
                &cot * &sp * s.clone(),
                &cot * &cp * s.clone(),
                Expr::sin(&t),
                Expr::cos(&t),
                cot.clone(),
                &cot * &s,
            ]);
        }
        Ok((xi, eta))
    }
}

/// Whether a generator group solves the exact system or is a first-order
/// correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Exact,
    FirstOrder,
}

/// Components of one generator written in the unknown constants.
#[derive(Clone, Debug)]
pub struct AnsatzBlock {
    pub label: String,
    pub order: Order,
    pub coords: Coordinates,
    pub components: Vec<Expr>,
}

/// Unknown functions replaced by finite combinations of unknown constants.
#[derive(Clone, Debug, Default)]
pub struct Ansatz {
    bindings: Vec<(Func, Expr)>,
    unknowns: Vec<Atom>,
    blocks: Vec<AnsatzBlock>,
}

impl Ansatz {
    pub fn new() -> Self {
        Ansatz::default()
    }

    /// A constant that appears directly in the constraints.
    pub fn add_unknown(&mut self, a: Atom) {
        if !self.unknowns.contains(&a) {
            self.unknowns.push(a);
        }
    }

    pub fn bind(&mut self, f: &Func, e: Expr) {
        self.bindings.push((f.clone(), e));
    }

    /// `sum_i name_i * terms_i` with fresh unknowns `name_0, name_1, ...`.
    pub fn combination(&mut self, name: &str, terms: &[Expr]) -> Expr {
        Expr::sum(terms.iter().enumerate().map(|(i, t)| {
            let c = Atom::parameter(&format!("{name}_{i}"));
            self.add_unknown(c.clone());
            Expr::atom(&c) * t.clone()
        }))
    }

    /// Bind the generator functions `funcs` (xi first) to the vocabulary.
    pub fn generator(
        &mut self,
        label: &str,
        order: Order,
        coords: &Coordinates,
        funcs: &[Func],
        vocab: &Vocabulary,
    ) -> Result<()> {
        let components = self.components(label, coords, funcs, vocab)?;
        for (f, c) in funcs.iter().zip(&components) {
            self.bind(f, c.clone());
        }
        self.add_block(label, order, coords, components);
        Ok(())
    }

    /// Vocabulary combinations for `funcs` without binding them.
    pub fn components(
        &mut self,
        label: &str,
        coords: &Coordinates,
        funcs: &[Func],
        vocab: &Vocabulary,
    ) -> Result<Vec<Expr>> {
        let (xi_terms, eta_terms) = vocab.terms(coords)?;
        Ok(funcs
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let terms = if i == 0 { &xi_terms } else { &eta_terms };
                let name = if label.is_empty() {
                    f.name().to_string()
                } else {
                    format!("{label}.{}", f.name())
                };
                self.combination(&name, terms)
            })
            .collect())
    }

    pub fn add_block(
        &mut self,
        label: &str,
        order: Order,
        coords: &Coordinates,
        components: Vec<Expr>,
    ) {
        self.blocks.push(AnsatzBlock {
            label: label.to_string(),
            order,
            coords: coords.clone(),
            components,
        });
    }

    pub fn unknowns(&self) -> &[Atom] {
        &self.unknowns
    }

    pub fn blocks(&self) -> &[AnsatzBlock] {
        &self.blocks
    }

    pub fn bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        for (f, e) in &self.bindings {
            b = b.func(f, e.clone());
        }
        b
    }
}

/// Solution set of the linear system produced by an ansatz.
#[derive(Clone, Debug)]
pub struct AnsatzSolution {
    pub unknowns: Vec<Atom>,
    /// Nullspace of the constraint matrix.
    pub basis: Vec<Vec<Rational>>,
    /// Present when the system is non-homogeneous and consistent.
    pub particular: Option<Vec<Rational>>,
    pub consistent: bool,
    /// Unknowns that vanish in every solution.
    pub forced_zero: Vec<Atom>,
    pub rank: usize,
    /// Distinct scalar equations after expansion.
    pub equations: usize,
    ansatz: Ansatz,
}

impl AnsatzSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn ansatz(&self) -> &Ansatz {
        &self.ansatz
    }

    pub fn is_forced_zero(&self, name: &str) -> bool {
        self.forced_zero.iter().any(|a| a.name() == name)
    }

    pub fn value(&self, v: &[Rational], name: &str) -> Option<Rational> {
        self.unknowns
            .iter()
            .position(|a| a.name() == name)
            .map(|i| v[i].clone())
    }

    /// Substitute the constants of one solution vector.
    pub fn instantiate(&self, v: &[Rational], e: &Expr) -> Result<Expr> {
        let mut b = Bindings::new();
        for (a, q) in self.unknowns.iter().zip(v) {
            b = b.atom(a, Expr::num(q.clone()));
        }
        Ok(normalize(&substitute(e, &b)?)?.to_expr())
    }

    pub fn block_generator(&self, v: &[Rational], block: &AnsatzBlock) -> Result<Generator> {
        let comps = block
            .components
            .iter()
            .map(|c| self.instantiate(v, c))
            .collect::<Result<Vec<_>>>()?;
        Generator::from_components(block.coords.clone(), comps)
    }

    /// Generators of one block across the basis vectors.
    pub fn generators(&self, block: usize) -> Result<Vec<Generator>> {
        let b = &self.ansatz.blocks[block];
        self.basis
            .iter()
            .map(|v| self.block_generator(v, b))
            .collect()
    }
}

/// Substitute the ansatz into every constraint and solve.
pub fn solve_ansatz(constraints: &[Expr], ansatz: &Ansatz) -> Result<AnsatzSolution> {
    let b = ansatz.bindings();
    let exprs = constraints
        .par_iter()
        .map(|c| substitute(c, &b))
        .collect::<Result<Vec<_>>>()?;
    solve_expressions(&exprs, ansatz.clone())
}

/// Solve expressions already written in the ansatz unknowns.
pub fn solve_expressions(exprs: &[Expr], ansatz: Ansatz) -> Result<AnsatzSolution> {
    let unknowns = ansatz.unknowns.clone();
    let system = linear_rows(exprs, &unknowns)?;
    let red = system.reduce();
    let inhomogeneous = !system.is_homogeneous();
    let particular = if inhomogeneous {
        red.particular.clone()
    } else {
        None
    };
    let forced_zero = if red.consistent {
        unknowns
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                red.nullspace.iter().all(|v| v[*i].is_zero())
                    && particular.as_ref().is_none_or(|p| p[*i].is_zero())
            })
            .map(|(_, a)| a.clone())
            .collect()
    } else {
        Vec::new()
    };
    Ok(AnsatzSolution {
        unknowns,
        basis: red.nullspace.clone(),
        particular,
        consistent: red.consistent,
        forced_zero,
        rank: red.rank(),
        equations: system.rows.len(),
        ansatz,
    })
}

/// Coefficient rows of `exprs = 0`, one per independent function monomial.
pub(crate) fn linear_rows(exprs: &[Expr], unknowns: &[Atom]) -> Result<LinearSystem> {
    let index: HashMap<&Atom, usize> = unknowns.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let is_unknown = |k: &Kernel| k.as_atom().is_some_and(|a| index.contains_key(a));
    let per_expr = exprs
        .par_iter()
        .map(|e| {
            let form = normalize(e)?;
            if form
                .denominator()
                .terms()
                .any(|(m, _)| m.factors().iter().any(|(k, _)| is_unknown(k)))
            {
                return Err(Error::Nonlinear(format!(
                    "unknown constant in a denominator of `{e}`"
                )));
            }
            let mut rows: BTreeMap<Monomial, (Vec<Rational>, Rational)> = BTreeMap::new();
            for (m, q) in form.numerator().terms() {
                let (u, rest) = m.split(is_unknown);
                if let Some((k, _)) = rest
                    .factors()
                    .iter()
                    .find(|(k, _)| matches!(k, Kernel::Apply { .. }))
                {
                    return Err(Error::UnsupportedFunctionClass(format!(
                        "`{}` is not covered by the ansatz",
                        k.to_expr()
                    )));
                }
                let entry = rows
                    .entry(rest)
                    .or_insert_with(|| (vec![Rational::zero(); unknowns.len()], Rational::zero()));
                match u.factors() {
                    [] => entry.1 -= q,
                    [(k, 1)] => entry.0[index[k.as_atom().expect("unknowns are atoms")]] += q,
                    _ => {
                        return Err(Error::Nonlinear(format!(
                            "`{}` is not linear in the unknown constants",
                            u.to_expr()
                        )))
                    }
                }
            }
            Ok(rows.into_values().collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut system = LinearSystem::new(unknowns.len());
    let mut seen = HashSet::new();
    for (row, rhs) in per_expr.into_iter().flatten() {
        let Some(lead) = row
            .iter()
            .chain(std::iter::once(&rhs))
            .find(|q| !q.is_zero())
            .cloned()
        else {
            continue;
        };
        let scale = lead.recip();
        let row: Vec<Rational> = row.iter().map(|q| q * &scale).collect();
        let rhs = rhs * &scale;
        if seen.insert((row.clone(), rhs.clone())) {
            system.push(row, rhs);
        }
    }
    Ok(system)
}

/// Whether `g` is a constant-coefficient combination of `algebra`.
pub fn in_span(g: &Generator, algebra: &[Generator]) -> Result<bool> {
    if g.is_zero() {
        return Ok(true);
    }
    let lambdas: Vec<Atom> = (0..algebra.len())
        .map(|j| Atom::parameter(&format!("__span_{j}")))
        .collect();
    let exprs: Vec<Expr> = g
        .components()
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            c - Expr::sum(
                algebra
                    .iter()
                    .zip(&lambdas)
                    .map(|(a, l)| Expr::atom(l) * a.components()[k].clone()),
            )
        })
        .collect();
    Ok(linear_rows(&exprs, &lambdas)?.reduce().consistent)
}

/// `sum_j c_j * algebra_j` with fresh symbolic constants named `{prefix}{j}`.
pub fn symbolic_combination(algebra: &[Generator], prefix: &str) -> Result<(Generator, Vec<Atom>)> {
    let Some(first) = algebra.first() else {
        return Err(Error::InvalidGenerator("empty algebra".into()));
    };
    let consts: Vec<Atom> = (0..algebra.len())
        .map(|j| Atom::parameter(&format!("{prefix}{j}")))
        .collect();
    let mut comps = vec![Expr::zero(); first.components().len()];
    for (g, c) in algebra.iter().zip(&consts) {
        for (slot, x) in comps.iter_mut().zip(g.components()) {
            *slot = slot.clone() + Expr::atom(c) * x;
        }
    }
    let comps = comps
        .into_iter()
        .map(|e| Ok(normalize(&e)?.to_expr()))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        Generator::from_components(first.coords().clone(), comps)?,
        consts,
    ))
}
