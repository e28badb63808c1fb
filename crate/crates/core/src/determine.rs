//! Determining systems: invariance residuals split by velocity monomials.

use std::cmp::Reverse;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::jet::{reduce_on_shell, Coordinates, OdeSystem};
use crate::prolong::{apply, prolong2, Generator};
use crate::symexpr::{
    collect, diff, eval, normalize, Atom, AtomKind, Expr, Func, Kernel, MonomialKey, Node, Point,
    Poly, Rational,
};
use crate::Result;

/// One coefficient that must vanish, keyed by equation and velocity monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub key: MonomialKey,
    /// 1-based equation index.
    pub equation: usize,
    pub coefficient: Expr,
    /// Index of an earlier constraint with the identical coefficient.
    pub duplicate_of: Option<usize>,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "eq{} {} : {} = 0",
            self.equation, self.key, self.coefficient
        )
    }
}

/// Constraints of a (possibly non-homogeneous) determining system.
#[derive(Clone, Debug)]
pub struct DeterminingSystem {
    pub constraints: Vec<Constraint>,
    /// Unknown functions the constraints are written in.
    pub unknowns: Vec<Func>,
    /// Atoms the residuals were split by.
    pub keys: Vec<Atom>,
}

impl DeterminingSystem {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn get(&self, equation: usize, key: &[u32]) -> Option<&Constraint> {
        self.constraints
            .iter()
            .find(|c| c.equation == equation && c.key.0 == key)
    }

    /// Constraints not flagged as repeats of an earlier one.
    pub fn distinct(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.duplicate_of.is_none())
    }

    /// One constraint per line in the golden-file format.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for c in &self.constraints {
            out.push_str(&c.to_string());
            if let Some(i) = c.duplicate_of {
                let o = &self.constraints[i];
                out.push_str(&format!("  # same as eq{} {}", o.equation, o.key));
            }
            out.push('\n');
        }
        out
    }
}

/// Generic generator whose components are unknown functions of all
/// coordinates, named `xi`, `eta1`, `eta2`, ... unless `names` is given.
pub fn generic_generator(coords: &Coordinates, names: Option<&[String]>) -> (Generator, Vec<Func>) {
    let params: Vec<Atom> = std::iter::once(coords.independent.clone())
        .chain(coords.dependents.iter().cloned())
        .collect();
    let default: Vec<String> = std::iter::once("xi".to_string())
        .chain((1..=coords.dim()).map(|i| format!("eta{i}")))
        .collect();
    let names = names.unwrap_or(&default);
    let funcs: Vec<Func> = names.iter().map(|n| Func::new(n, &params)).collect();
    let comps = funcs.iter().map(Func::call).collect();
    let g = Generator::from_components(coords.clone(), comps).expect("unknown functions are valid");
    (g, funcs)
}

/// `pr X (E_i)` on shell for every equation.
pub fn invariance_residuals(
    g: &Generator,
    sys: &OdeSystem,
    with_perturbation: bool,
) -> Result<Vec<Expr>> {
    let pg = prolong2(g, sys)?;
    (0..sys.coords().dim())
        .into_par_iter()
        .map(|i| {
            let raw = apply(&pg, &sys.equation(i, with_perturbation))?;
            Ok(normalize(&reduce_on_shell(&raw, sys, with_perturbation))?.to_expr())
        })
        .collect()
}

/// Canonical representative of `e = 0`: denominators cleared, common
/// coordinate and trig factors removed, integer coefficients with gcd one,
/// and the first printed term positive.
pub fn normalize_constraint(e: &Expr) -> Result<Expr> {
    let form = normalize(e)?;
    Ok(primitive_part(form.numerator()).to_expr())
}

fn is_unit_kernel(k: &Kernel) -> bool {
    match k {
        Kernel::Sin(_) | Kernel::Cos(_) | Kernel::LnSin(_) => true,
        Kernel::Atom(a) => matches!(a.kind(), AtomKind::Independent | AtomKind::Dependent),
        _ => false,
    }
}

fn primitive_part(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let (content, _) = p.monomial_content().split(is_unit_kernel);
    let p = p.div_monomial(&content);
    let mut num_gcd = num_bigint::BigInt::zero();
    let mut den_lcm = num_bigint::BigInt::one();
    for (_, q) in p.terms() {
        num_gcd = num_gcd.gcd(q.numer());
        den_lcm = den_lcm.lcm(q.denom());
    }
    let mut p = p.scale(&Rational::new(den_lcm, num_gcd));
    let leading_negative = match p.to_expr().node() {
        Node::Add(terms) => terms[0].split_coefficient().0.is_negative(),
        _ => p.terms().next().is_some_and(|(_, q)| q.is_negative()),
    };
    if leading_negative {
        p = p.scale(&-Rational::one());
    }
    p
}

/// Split residuals by monomials in `keys` into sorted, normalized constraints.
pub fn split_residuals(residuals: &[Expr], keys: &[Atom]) -> Result<Vec<Constraint>> {
    let per_equation: Vec<Vec<Constraint>> = residuals
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            collect(r, keys)?
                .into_iter()
                .map(|(key, coeff)| {
                    Ok(Constraint {
                        key,
                        equation: i + 1,
                        coefficient: normalize_constraint(&coeff)?,
                        duplicate_of: None,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<Constraint> = per_equation
        .into_iter()
        .flatten()
        .filter(|c| !c.coefficient.is_zero_literal())
        .collect();
    all.sort_by_key(|c| (c.key.degree(), Reverse(c.key.0.clone()), c.equation));
    for i in 0..all.len() {
        all[i].duplicate_of = (0..i)
            .find(|&j| all[j].duplicate_of.is_none() && all[j].coefficient == all[i].coefficient);
    }
    Ok(all)
}

/// Determining system of the unperturbed equations for a generic generator.
pub fn determining_system(sys: &OdeSystem) -> Result<DeterminingSystem> {
    let (g, unknowns) = generic_generator(sys.coords(), None);
    let residuals = invariance_residuals(&g, &sys.unperturbed(), false)?;
    let keys = sys.coords().velocities();
    Ok(DeterminingSystem {
        constraints: split_residuals(&residuals, &keys)?,
        unknowns,
        keys,
    })
}

/// Outcome of checking a concrete generator against a system.
#[derive(Clone, Debug)]
pub struct Verification {
    /// Nonzero residual slots; empty when the generator is a symmetry.
    pub residuals: Vec<Constraint>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Substitute a concrete generator into the invariance condition.
pub fn verify_generator(g: &Generator, sys: &OdeSystem) -> Result<Verification> {
    let sys = sys.unperturbed();
    let residuals = invariance_residuals(g, &sys, false)?;
    Ok(Verification {
        residuals: split_residuals(&residuals, &sys.coords().velocities())?,
    })
}

/// Largest absolute invariance residual of `g` over `points` random jet
/// points, built without the canonical simplifier. A floating-point
/// cross-check of [`verify_generator`].
pub fn sample_residuals(g: &Generator, sys: &OdeSystem, seed: u64, points: usize) -> Result<f64> {
    let sys = sys.unperturbed();
    let pg = prolong2(g, &sys)?;
    let c = sys.coords();
    let residuals: Vec<Expr> = sys
        .equations(false)
        .iter()
        .map(|e| {
            let mut terms = vec![pg.base.xi() * &diff(e, &c.independent)];
            for (i, x) in c.dependents.iter().enumerate() {
                terms.push(&pg.base.eta()[i] * &diff(e, x));
                terms.push(&pg.first[i] * &diff(e, &x.jet(1)));
                terms.push(&pg.second[i] * &diff(e, &x.jet(2)));
            }
            reduce_on_shell(&Expr::sum(terms), &sys, false)
        })
        .collect();
    let mut atoms = std::collections::BTreeSet::new();
    for r in &residuals {
        r.for_each_atom(&mut |a| {
            atoms.insert(a.clone());
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for k in 0..points {
        let mut p = Point::new(seed.wrapping_add(k as u64));
        for a in &atoms {
            let v = match a.kind() {
                AtomKind::Dependent if a.is_angular() => rng.gen_range(0.3..2.8),
                _ => rng.gen_range(-2.0..2.0),
            };
            p.set(a, v);
        }
        for r in &residuals {
            if let Some(v) = eval(r, &p) {
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}
