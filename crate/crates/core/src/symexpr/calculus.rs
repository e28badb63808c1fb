//! Partial differentiation and simultaneous substitution.

use std::collections::{BTreeMap, BTreeSet};

use super::{Atom, Expr, Func, Node};
use crate::{Error, Result};

/// Partial derivative treating every other atom, jets included, as independent.
pub fn diff(e: &Expr, x: &Atom) -> Expr {
    if !e.contains_atom(|a| a == x) {
        return Expr::zero();
    }
    match e.node() {
        Node::Num(_) | Node::Pi => Expr::zero(),
        Node::Atom(a) => {
            if a == x {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(cs) => Expr::sum(cs.iter().map(|c| diff(c, x))),
        Node::Mul(cs) => Expr::sum((0..cs.len()).map(|i| {
            let d = diff(&cs[i], x);
            if d.is_zero_literal() {
                return d;
            }
            Expr::product(
                cs.iter()
                    .enumerate()
                    .map(|(j, c)| if i == j { d.clone() } else { c.clone() }),
            )
        })),
        Node::Pow(b, k) => Expr::product([Expr::int(*k), b.pow(k - 1), diff(b, x)]),
        Node::Sin(u) => Expr::cos(u) * diff(u, x),
        Node::Cos(u) => -(Expr::sin(u) * diff(u, x)),
        Node::LnSin(u) => Expr::cos(u) / Expr::sin(u) * diff(u, x),
        Node::Apply { func, args, derivs } => Expr::sum(args.iter().enumerate().map(|(i, a)| {
            let da = diff(a, x);
            if da.is_zero_literal() {
                return da;
            }
            let mut d = derivs.clone();
            d[i] += 1;
            Expr::apply_with_derivs(func, args.clone(), d) * da
        })),
    }
}

/// Differentiate repeatedly by the multi-index `orders` over `vars`.
pub(crate) fn diff_multi(e: &Expr, vars: &[Atom], orders: &[u32]) -> Expr {
    let mut out = e.clone();
    for (v, &n) in vars.iter().zip(orders) {
        for _ in 0..n {
            out = diff(&out, v);
        }
    }
    out
}

/// What a binding replaces.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Atom(Atom),
    /// An unknown function; the replacement is an expression in its
    /// declared parameters, and formal derivatives become actual ones.
    Func(Func),
}

/// Simultaneous substitution map.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    map: BTreeMap<Target, Expr>,
}

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn atom(mut self, a: &Atom, e: Expr) -> Self {
        self.map.insert(Target::Atom(a.clone()), e);
        self
    }

    pub fn func(mut self, f: &Func, e: Expr) -> Self {
        self.map.insert(Target::Func(f.clone()), e);
        self
    }

    pub fn insert(&mut self, t: Target, e: Expr) {
        self.map.insert(t, e);
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn mentions(&self, e: &Expr) -> Vec<Target> {
        let mut out = BTreeSet::new();
        e.for_each_atom(&mut |a| {
            let t = Target::Atom(a.clone());
            if self.map.contains_key(&t) {
                out.insert(t);
            }
        });
        for f in e.functions() {
            let t = Target::Func(f);
            if self.map.contains_key(&t) {
                out.insert(t);
            }
        }
        out.into_iter().collect()
    }

    fn check_acyclic(&self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        fn visit(b: &Bindings, t: &Target, marks: &mut BTreeMap<Target, Mark>) -> Result<()> {
            match marks.get(t) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Open) => {
                    let name = match t {
                        Target::Atom(a) => a.to_string(),
                        Target::Func(f) => f.name().to_string(),
                    };
                    return Err(Error::CyclicBinding(name));
                }
                None => {}
            }
            marks.insert(t.clone(), Mark::Open);
            for next in b.mentions(&b.map[t]) {
                visit(b, &next, marks)?;
            }
            marks.insert(t.clone(), Mark::Done);
            Ok(())
        }
        let mut marks = BTreeMap::new();
        for t in self.map.keys() {
            visit(self, t, &mut marks)?;
        }
        Ok(())
    }
}

/// Replace every bound atom and function simultaneously.
pub fn substitute(e: &Expr, bindings: &Bindings) -> Result<Expr> {
    bindings.check_acyclic()?;
    Ok(subst(e, bindings))
}

fn subst(e: &Expr, b: &Bindings) -> Expr {
    match e.node() {
        Node::Num(_) | Node::Pi => e.clone(),
        Node::Atom(a) => b
            .map
            .get(&Target::Atom(a.clone()))
            .cloned()
            .unwrap_or_else(|| e.clone()),
        Node::Add(cs) => Expr::sum(cs.iter().map(|c| subst(c, b))),
        Node::Mul(cs) => Expr::product(cs.iter().map(|c| subst(c, b))),
        Node::Pow(base, k) => subst(base, b).pow(*k),
        Node::Sin(u) => Expr::sin(&subst(u, b)),
        Node::Cos(u) => Expr::cos(&subst(u, b)),
        Node::LnSin(u) => Expr::ln_sin(&subst(u, b)),
        Node::Apply { func, args, derivs } => {
            let new_args: Vec<Expr> = args.iter().map(|a| subst(a, b)).collect();
            match b.map.get(&Target::Func(func.clone())) {
                None => Expr::apply_with_derivs(func, new_args, derivs.clone()),
                Some(r) => {
                    let dr = diff_multi(r, func.params(), derivs);
                    let at_params = new_args
                        .iter()
                        .zip(func.params())
                        .all(|(a, p)| a.as_atom() == Some(p));
                    if at_params {
                        return dr;
                    }
                    let inner = func
                        .params()
                        .iter()
                        .zip(new_args)
                        .fold(Bindings::new(), |acc, (p, a)| acc.atom(p, a));
                    subst(&dr, &inner)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{is_zero, parse, Context};

    fn ctx() -> Context {
        let mut c = Context::new();
        c.independent("s").unwrap();
        c.dependent("theta", true).unwrap();
        c.dependent("phi", true).unwrap();
        c.function("u", &["s", "theta", "phi"]).unwrap();
        c.function("f", &["theta"]).unwrap();
        c
    }

    fn p(src: &str) -> Expr {
        parse(src, &ctx()).unwrap()
    }

    #[test]
    fn product_and_power_rules() {
        let c = ctx();
        let theta = c.atom("theta").unwrap();
        let d = diff(&p("sin(theta)*cos(theta)"), theta);
        assert!(is_zero(&(d - p("cos(theta)^2 - sin(theta)^2"))));
        let dot = theta.jet(1);
        assert!(is_zero(&(diff(&p("d(theta)^2"), &dot) - p("2*d(theta)"))));
        assert!(is_zero(
            &(diff(&p("ln(sin(theta))"), theta) - p("cot(theta)"))
        ));
    }

    #[test]
    fn formal_derivatives_commute() {
        let c = ctx();
        let (theta, phi) = (c.atom("theta").unwrap(), c.atom("phi").unwrap());
        let u = p("u");
        assert_eq!(diff(&diff(&u, theta), phi), diff(&diff(&u, phi), theta));
        assert_eq!(diff(&u, c.atom("s").unwrap()), p("u[s]"));
    }

    #[test]
    fn on_shell_substitution() {
        let c = ctx();
        let ddtheta = c.atom("theta").unwrap().jet(2);
        let rhs = p("sin(theta)*cos(theta)*d(phi)^2");
        let e = p("dd(theta) - sin(theta)*cos(theta)*d(phi)^2");
        let out = substitute(&e, &Bindings::new().atom(&ddtheta, rhs)).unwrap();
        assert!(is_zero(&out));
    }

    #[test]
    fn function_replacement_uses_chain_rule() {
        let c = ctx();
        let u = c.func("u").unwrap();
        let out = substitute(&p("u[phi]"), &Bindings::new().func(u, p("cos(phi)"))).unwrap();
        assert!(is_zero(&(out + p("sin(phi)"))));
        let f = c.func("f").unwrap();
        let out = substitute(
            &p("f[theta](2*theta)"),
            &Bindings::new().func(f, p("theta^3")),
        )
        .unwrap();
        assert!(is_zero(&(out - p("12*theta^2"))));
    }

    #[test]
    fn opaque_value_at_a_point() {
        let c = ctx();
        let theta = c.atom("theta").unwrap();
        let out = substitute(&p("f"), &Bindings::new().atom(theta, Expr::zero())).unwrap();
        assert_eq!(out, p("f(0)"));
    }

    #[test]
    fn cycles_are_rejected() {
        let c = ctx();
        let (s, theta) = (c.atom("s").unwrap(), c.atom("theta").unwrap());
        let b = Bindings::new().atom(s, p("theta")).atom(theta, p("s + 1"));
        assert!(matches!(
            substitute(&p("s"), &b),
            Err(Error::CyclicBinding(_))
        ));
        let b = Bindings::new().atom(s, p("theta")).atom(theta, p("phi"));
        assert_eq!(substitute(&p("s + theta"), &b).unwrap(), p("theta + phi"));
    }
}
