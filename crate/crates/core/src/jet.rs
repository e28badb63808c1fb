//! Jet-space coordinates, the total derivative, and on-shell reduction.

use crate::symexpr::{diff, normalize, substitute, Atom, AtomKind, Bindings, Expr};
use crate::{Error, Result};

/// Independent variable and dependent variables of a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    pub independent: Atom,
    pub dependents: Vec<Atom>,
}

impl Coordinates {
    pub fn new(independent: Atom, dependents: Vec<Atom>) -> Self {
        Coordinates {
            independent,
            dependents,
        }
    }

    /// First-order jet atoms, one per dependent variable.
    pub fn velocities(&self) -> Vec<Atom> {
        self.dependents.iter().map(|x| x.jet(1)).collect()
    }

    pub fn accelerations(&self) -> Vec<Atom> {
        self.dependents.iter().map(|x| x.jet(2)).collect()
    }

    pub fn dim(&self) -> usize {
        self.dependents.len()
    }
}

/// Second-order system solved for the highest derivatives,
/// `x_i'' = rhs_i - eps * perturbation_i`.
#[derive(Clone, Debug)]
pub struct OdeSystem {
    coords: Coordinates,
    rhs: Vec<Expr>,
    perturbation: Option<Vec<Expr>>,
}

fn has_second_order(e: &Expr) -> bool {
    e.contains_atom(|a| a.jet_order() == Some(2))
}

fn has_epsilon(e: &Expr) -> bool {
    e.contains_atom(|a| a.kind() == AtomKind::Epsilon)
}

impl OdeSystem {
    pub fn new(coords: Coordinates, rhs: Vec<Expr>) -> Result<Self> {
        if rhs.len() != coords.dim() {
            return Err(Error::InvalidGenerator(format!(
                "{} right-hand sides for {} dependent variables",
                rhs.len(),
                coords.dim()
            )));
        }
        for r in &rhs {
            if has_second_order(r) || has_epsilon(r) {
                return Err(Error::UnsupportedFunctionClass(format!(
                    "right-hand side `{r}` may not contain second derivatives or eps"
                )));
            }
        }
        Ok(OdeSystem {
            coords,
            rhs,
            perturbation: None,
        })
    }

    /// Attach the term multiplied by `eps` in each equation.
    pub fn with_perturbation(mut self, p: Vec<Expr>) -> Result<Self> {
        if p.len() != self.coords.dim() {
            return Err(Error::UnsupportedFunctionClass(format!(
                "{} perturbation terms for {} equations",
                p.len(),
                self.coords.dim()
            )));
        }
        for e in &p {
            if has_second_order(e) || has_epsilon(e) {
                return Err(Error::UnsupportedFunctionClass(format!(
                    "perturbation `{e}` may not contain second derivatives or eps"
                )));
            }
        }
        self.perturbation = Some(p);
        Ok(self)
    }

    pub fn unperturbed(&self) -> OdeSystem {
        OdeSystem {
            coords: self.coords.clone(),
            rhs: self.rhs.clone(),
            perturbation: None,
        }
    }

    pub fn coords(&self) -> &Coordinates {
        &self.coords
    }

    pub fn rhs(&self) -> &[Expr] {
        &self.rhs
    }

    pub fn perturbation(&self) -> Option<&[Expr]> {
        self.perturbation.as_deref()
    }

    /// Equation `i` in the form `x_i'' - rhs_i (+ eps * perturbation_i)`.
    pub fn equation(&self, i: usize, with_perturbation: bool) -> Expr {
        let acc = Expr::atom(&self.coords.dependents[i].jet(2));
        let mut e = acc - self.rhs[i].clone();
        if let (true, Some(p)) = (with_perturbation, &self.perturbation) {
            e = e + Expr::atom(&Atom::epsilon()) * p[i].clone();
        }
        e
    }

    pub fn equations(&self, with_perturbation: bool) -> Vec<Expr> {
        (0..self.coords.dim())
            .map(|i| self.equation(i, with_perturbation))
            .collect()
    }
}

/// `D e = e_s + sum x' e_x + sum x'' e_x'`, second derivatives kept formal.
pub fn total_derivative(e: &Expr, sys: &OdeSystem) -> Result<Expr> {
    if let Some(a) = first_second_order(e) {
        return Err(Error::ThirdOrderJet(a.to_string()));
    }
    let c = sys.coords();
    let mut terms = vec![diff(e, &c.independent)];
    for x in &c.dependents {
        terms.push(Expr::atom(&x.jet(1)) * diff(e, x));
        terms.push(Expr::atom(&x.jet(2)) * diff(e, &x.jet(1)));
    }
    Ok(normalize(&Expr::sum(terms))?.to_expr())
}

fn first_second_order(e: &Expr) -> Option<Atom> {
    let mut found = None;
    e.for_each_atom(&mut |a| {
        if found.is_none() && a.jet_order() == Some(2) {
            found = Some(a.clone());
        }
    });
    found
}

/// Replace `x_i''` by `rhs_i`, or by `rhs_i - eps * perturbation_i`.
pub fn reduce_on_shell(e: &Expr, sys: &OdeSystem, with_perturbation: bool) -> Expr {
    let eps = Expr::atom(&Atom::epsilon());
    let mut b = Bindings::new();
    for (i, x) in sys.coords().dependents.iter().enumerate() {
        let mut r = sys.rhs()[i].clone();
        if let (true, Some(p)) = (with_perturbation, sys.perturbation()) {
            r = r - eps.clone() * p[i].clone();
        }
        b = b.atom(&x.jet(2), r);
    }
    substitute(e, &b).expect("on-shell bindings never mention second derivatives")
}
