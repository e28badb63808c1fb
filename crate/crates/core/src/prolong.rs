//! Point-symmetry generators, second prolongation and Lie brackets.

use crate::jet::{total_derivative, Coordinates, OdeSystem};
use crate::symexpr::{diff, is_zero, normalize, AtomKind, Expr, Rational};
use crate::{Error, Result};

/// `xi d/ds + sum eta_i d/dx_i` on (independent, dependent) space.
#[derive(Clone, Debug)]
pub struct Generator {
    coords: Coordinates,
    xi: Expr,
    eta: Vec<Expr>,
}

fn simplified(e: Expr) -> Result<Expr> {
    Ok(normalize(&e)?.to_expr())
}

impl Generator {
    pub fn new(coords: Coordinates, xi: Expr, eta: Vec<Expr>) -> Result<Self> {
        if eta.len() != coords.dim() {
            return Err(Error::InvalidGenerator(format!(
                "{} eta components for {} dependent variables",
                eta.len(),
                coords.dim()
            )));
        }
        for c in std::iter::once(&xi).chain(&eta) {
            if c.contains_atom(|a| matches!(a.kind(), AtomKind::Jet { .. } | AtomKind::Epsilon)) {
                return Err(Error::InvalidGenerator(format!(
                    "component `{c}` depends on derivatives or eps"
                )));
            }
        }
        Ok(Generator { coords, xi, eta })
    }

    pub fn zero(coords: Coordinates) -> Self {
        let eta = vec![Expr::zero(); coords.dim()];
        Generator {
            coords,
            xi: Expr::zero(),
            eta,
        }
    }

    pub fn coords(&self) -> &Coordinates {
        &self.coords
    }

    pub fn xi(&self) -> &Expr {
        &self.xi
    }

    pub fn eta(&self) -> &[Expr] {
        &self.eta
    }

    /// All components, `xi` first.
    pub fn components(&self) -> Vec<Expr> {
        std::iter::once(self.xi.clone())
            .chain(self.eta.iter().cloned())
            .collect()
    }

    /// Rebuild from components listed as in [`Generator::components`].
    pub fn from_components(coords: Coordinates, mut comps: Vec<Expr>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::InvalidGenerator("no components".into()));
        }
        let xi = comps.remove(0);
        Generator::new(coords, xi, comps)
    }

    /// Action as a first-order derivation on functions of (s, x).
    pub fn act(&self, f: &Expr) -> Result<Expr> {
        let mut terms = vec![&self.xi * &diff(f, &self.coords.independent)];
        for (eta, x) in self.eta.iter().zip(&self.coords.dependents) {
            terms.push(eta * &diff(f, x));
        }
        simplified(Expr::sum(terms))
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Result<Expr>) -> Result<Generator> {
        Ok(Generator {
            coords: self.coords.clone(),
            xi: f(&self.xi)?,
            eta: self.eta.iter().map(&f).collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, q: &Rational) -> Generator {
        self.map(|c| simplified(c.scale(q)))
            .expect("scaling keeps expressions defined")
    }

    pub fn add(&self, other: &Generator) -> Result<Generator> {
        let comps = self
            .components()
            .into_iter()
            .zip(other.components())
            .map(|(a, b)| simplified(a + b))
            .collect::<Result<Vec<_>>>()?;
        Generator::from_components(self.coords.clone(), comps)
    }

    pub fn sub(&self, other: &Generator) -> Result<Generator> {
        self.add(&other.scale(&crate::symexpr::rat(-1)))
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(is_zero)
    }

    /// Whether two generators agree identically.
    pub fn same_as(&self, other: &Generator) -> bool {
        self.components()
            .iter()
            .zip(other.components())
            .all(|(a, b)| is_zero(&(a - &b)))
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vars = std::iter::once(&self.coords.independent).chain(&self.coords.dependents);
        let mut out = String::new();
        for (c, v) in self.components().iter().zip(vars) {
            if c.is_zero_literal() {
                continue;
            }
            let shown = match c.node() {
                crate::symexpr::Node::Add(_) => format!("({c})*"),
                _ if c.is_one_literal() => String::new(),
                _ if (-c).is_one_literal() => "-".into(),
                _ => format!("{c}*"),
            };
            let term = format!("{shown}D[{}]", v.name());
            match term.strip_prefix('-') {
                Some(rest) if !out.is_empty() => out.push_str(&format!(" - {rest}")),
                _ if !out.is_empty() => out.push_str(&format!(" + {term}")),
                _ => out.push_str(&term),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// `[g, h]^k = g(h^k) - h(g^k)`.
pub fn lie_bracket(g: &Generator, h: &Generator) -> Result<Generator> {
    let comps = g
        .components()
        .iter()
        .zip(h.components())
        .map(|(gk, hk)| simplified(g.act(&hk)? - h.act(gk)?))
        .collect::<Result<Vec<_>>>()?;
    Generator::from_components(g.coords.clone(), comps)
}

/// Pair `(X0, X1)` of the generator `X0 + eps X1`.
#[derive(Clone, Debug)]
pub struct ApproxGenerator {
    pub exact: Generator,
    pub first_order: Generator,
}

/// A generator with its first and second prolongation coefficients.
#[derive(Clone, Debug)]
pub struct ProlongedGenerator {
    pub base: Generator,
    /// `eta_i^(1)`, coefficient of d/dx_i'.
    pub first: Vec<Expr>,
    /// `eta_i^(2)`, coefficient of d/dx_i''; second derivatives kept formal.
    pub second: Vec<Expr>,
}

/// Recursive prolongation: `eta^(1) = D eta - x' D xi`, `eta^(2) = D eta^(1) - x'' D xi`.
pub fn prolong2(g: &Generator, sys: &OdeSystem) -> Result<ProlongedGenerator> {
    let dxi = total_derivative(&g.xi, sys)?;
    let c = g.coords();
    let mut first = Vec::with_capacity(c.dim());
    let mut second = Vec::with_capacity(c.dim());
    for (eta, x) in g.eta.iter().zip(&c.dependents) {
        let e1 = simplified(total_derivative(eta, sys)? - Expr::atom(&x.jet(1)) * dxi.clone())?;
        let e2 = simplified(total_derivative(&e1, sys)? - Expr::atom(&x.jet(2)) * dxi.clone())?;
        first.push(e1);
        second.push(e2);
    }
    Ok(ProlongedGenerator {
        base: g.clone(),
        first,
        second,
    })
}

/// Apply the prolonged generator to an expression on the second jet space.
pub fn apply(pg: &ProlongedGenerator, e: &Expr) -> Result<Expr> {
    let c = pg.base.coords();
    let mut terms = vec![pg.base.xi() * &diff(e, &c.independent)];
    for (i, x) in c.dependents.iter().enumerate() {
        terms.push(&pg.base.eta()[i] * &diff(e, x));
        terms.push(&pg.first[i] * &diff(e, &x.jet(1)));
        terms.push(&pg.second[i] * &diff(e, &x.jet(2)));
    }
    simplified(Expr::sum(terms))
}
