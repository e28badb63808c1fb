//! Plain, LaTeX and JSON renderings of expressions.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{Atom, AtomKind, Expr, Func, Node, Rational};
use crate::{Error, Result};

/// Output format selector shared by the printers and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrintMode {
    #[default]
    Plain,
    Latex,
    Json,
}

impl std::str::FromStr for PrintMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plain" => Ok(PrintMode::Plain),
            "latex" => Ok(PrintMode::Latex),
            "json" => Ok(PrintMode::Json),
            _ => Err(format!("unknown format `{s}` (plain, latex, json)")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Sum,
    Product,
    Power,
}

fn rational_plain(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Split a product into sign/coefficient, numerator factors and denominator
/// factors (the latter with positive exponents).
fn fraction_parts(e: &Expr) -> (Rational, Vec<Expr>, Vec<Expr>) {
    let (coeff, factors) = e.split_coefficient();
    let mut num = Vec::new();
    let mut den = Vec::new();
    for f in factors {
        match f.node() {
            Node::Pow(b, k) if *k < 0 => den.push(b.pow(-k)),
            _ => num.push(f),
        }
    }
    (coeff, num, den)
}

fn is_negative_term(e: &Expr) -> bool {
    e.split_coefficient().0.is_negative()
}

pub(super) fn plain(e: &Expr) -> String {
    plain_prec(e, Prec::Sum)
}

fn wrap(s: String, needs: bool) -> String {
    if needs {
        format!("({s})")
    } else {
        s
    }
}

fn plain_prec(e: &Expr, ctx: Prec) -> String {
    match e.node() {
        Node::Num(q) => {
            let s = rational_plain(q);
            wrap(s, ctx > Prec::Sum && (q.is_negative() || !q.is_integer()))
        }
        Node::Pi => "pi".into(),
        Node::Atom(a) => a.to_string(),
        Node::Add(terms) => {
            let mut out = String::new();
            for (i, t) in terms.iter().enumerate() {
                if i == 0 {
                    out.push_str(&plain_prec(t, Prec::Sum));
                } else if is_negative_term(t) {
                    out.push_str(" - ");
                    out.push_str(&plain_prec(&-t, Prec::Sum));
                } else {
                    out.push_str(" + ");
                    out.push_str(&plain_prec(t, Prec::Sum));
                }
            }
            wrap(out, ctx > Prec::Sum)
        }
        Node::Pow(b, k) if *k > 0 => pow_plain(b, *k),
        Node::Mul(_) | Node::Pow(_, _) => {
            let (coeff, num, mut den) = fraction_parts(e);
            let mut mag = coeff.abs();
            if !den.is_empty() && !mag.is_integer() {
                // Keep the rational's denominator with the other divisors.
                den.insert(0, Expr::num(Rational::from_integer(mag.denom().clone())));
                mag = Rational::from_integer(mag.numer().clone());
            }
            let mut numer: Vec<String> = num.iter().map(|f| plain_prec(f, Prec::Product)).collect();
            if !mag.is_one() || numer.is_empty() {
                numer.insert(0, rational_plain(&mag));
            }
            let mut out = String::new();
            if coeff.is_negative() {
                out.push('-');
            }
            out.push_str(&numer.join("*"));
            if !den.is_empty() {
                out.push('/');
                out.push_str(&plain_denominator(&den));
            }
            let needs = ctx == Prec::Power || (ctx == Prec::Product && coeff.is_negative());
            wrap(out, needs)
        }
        Node::Sin(u) => format!("sin({})", plain(u)),
        Node::Cos(u) => format!("cos({})", plain(u)),
        Node::LnSin(u) => format!("ln(sin({}))", plain(u)),
        Node::Apply { func, args, derivs } => apply_plain(func, args, derivs),
    }
}

fn plain_denominator(den: &[Expr]) -> String {
    if let [single] = den {
        if matches!(
            single.node(),
            Node::Atom(_) | Node::Add(_) | Node::Sin(_) | Node::Cos(_) | Node::Apply { .. }
        ) || matches!(single.node(), Node::Num(q) if q.is_integer())
        {
            return plain_prec(single, Prec::Power);
        }
    }
    let parts: Vec<String> = den.iter().map(|f| plain_prec(f, Prec::Product)).collect();
    format!("({})", parts.join("*"))
}

fn pow_plain(b: &Expr, k: i64) -> String {
    format!("{}^{}", plain_prec(b, Prec::Power), k)
}

fn apply_plain(func: &Func, args: &[Expr], derivs: &[u32]) -> String {
    let mut out = func.name().to_string();
    if derivs.iter().any(|&d| d > 0) {
        let vars: Vec<&str> = derivs
            .iter()
            .zip(func.params())
            .flat_map(|(&d, p)| std::iter::repeat_n(p.name(), d as usize))
            .collect();
        out.push('[');
        out.push_str(&vars.join(","));
        out.push(']');
    }
    let at_params = args.len() == func.params().len()
        && args
            .iter()
            .zip(func.params())
            .all(|(a, p)| a.as_atom() == Some(p));
    if !at_params {
        let parts: Vec<String> = args.iter().map(plain).collect();
        out.push('(');
        out.push_str(&parts.join(", "));
        out.push(')');
    }
    out
}

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
    "lambda", "mu", "nu", "xi", "omicron", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi",
    "omega",
];

fn latex_base(name: &str) -> String {
    if GREEK.contains(&name) {
        format!("\\{name}")
    } else if name.chars().count() == 1 {
        name.to_string()
    } else {
        format!("\\mathrm{{{name}}}")
    }
}

/// Split `eta1_2` into (`eta`, `1`, `2`) and `k3` into (`k`, `3`, ``).
fn split_name(name: &str) -> (&str, &str, &str) {
    let (head, suffix) = match name.rsplit_once('_') {
        Some((h, s)) if !s.is_empty() && s.chars().all(|c| c.is_ascii_digit()) => (h, s),
        _ => (name, ""),
    };
    let cut = head.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let cut = if cut == 0 { head.len() } else { cut };
    (&head[..cut], &head[cut..], suffix)
}

fn latex_atom(a: &Atom) -> String {
    let (base, digits, suffix) = split_name(a.name());
    let mut core = latex_base(base);
    match a.kind() {
        AtomKind::Epsilon => return "\\varepsilon".into(),
        AtomKind::Jet { order: 1 } => core = format!("\\dot{{{core}}}"),
        AtomKind::Jet { .. } => core = format!("\\ddot{{{core}}}"),
        _ => {}
    }
    let mut out = core;
    if !digits.is_empty() {
        out.push_str(&format!("_{{{digits}}}"));
    }
    if !suffix.is_empty() {
        out.push_str(&format!("^{{{suffix}}}"));
    }
    out
}

fn latex_apply(func: &Func, args: &[Expr], derivs: &[u32]) -> String {
    let (base, digits, suffix) = split_name(func.name());
    let mut out = latex_base(base);
    let (sup, mut sub) = if suffix.is_empty() {
        (digits.to_string(), String::new())
    } else {
        (suffix.to_string(), digits.to_string())
    };
    let vars: String = derivs
        .iter()
        .zip(func.params())
        .flat_map(|(&d, p)| std::iter::repeat_n(latex_atom(p), d as usize))
        .collect();
    if !vars.is_empty() {
        if !sub.is_empty() {
            sub.push(',');
        }
        sub.push_str(&vars);
    }
    if !sup.is_empty() {
        out.push_str(&format!("^{{{sup}}}"));
    }
    if !sub.is_empty() {
        out.push_str(&format!("_{{{sub}}}"));
    }
    let at_params = args
        .iter()
        .zip(func.params())
        .all(|(a, p)| a.as_atom() == Some(p));
    if !at_params {
        let parts: Vec<String> = args.iter().map(latex).collect();
        out.push_str(&format!("\\left({}\\right)", parts.join(", ")));
    }
    out
}

fn latex_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

fn trig_arg_latex(u: &Expr) -> String {
    match u.node() {
        Node::Atom(_) | Node::Pi => latex(u),
        _ => format!("\\left({}\\right)", latex(u)),
    }
}

pub(super) fn latex(e: &Expr) -> String {
    latex_prec(e, Prec::Sum)
}

fn latex_prec(e: &Expr, ctx: Prec) -> String {
    match e.node() {
        Node::Num(q) => {
            let s = latex_rational(q);
            wrap_latex(s, ctx > Prec::Sum && q.is_negative())
        }
        Node::Pi => "\\pi".into(),
        Node::Atom(a) => latex_atom(a),
        Node::Add(terms) => {
            let mut out = String::new();
            for (i, t) in terms.iter().enumerate() {
                if i == 0 {
                    out.push_str(&latex_prec(t, Prec::Sum));
                } else if is_negative_term(t) {
                    out.push_str(" - ");
                    out.push_str(&latex_prec(&-t, Prec::Sum));
                } else {
                    out.push_str(" + ");
                    out.push_str(&latex_prec(t, Prec::Sum));
                }
            }
            wrap_latex(out, ctx > Prec::Sum)
        }
        Node::Mul(_) | Node::Pow(_, _) => latex_product(e, ctx),
        Node::Sin(u) => format!("\\sin {}", trig_arg_latex(u)),
        Node::Cos(u) => format!("\\cos {}", trig_arg_latex(u)),
        Node::LnSin(u) => format!("\\ln \\sin {}", trig_arg_latex(u)),
        Node::Apply { func, args, derivs } => latex_apply(func, args, derivs),
    }
}

fn wrap_latex(s: String, needs: bool) -> String {
    if needs {
        format!("\\left({s}\\right)")
    } else {
        s
    }
}

/// Base and signed exponent of a product factor.
fn base_exp(f: &Expr) -> (Expr, i64) {
    match f.node() {
        Node::Pow(b, k) => (b.clone(), *k),
        _ => (f.clone(), 1),
    }
}

fn latex_power(base: &Expr, k: i64) -> String {
    let exp = if k == 1 {
        String::new()
    } else {
        format!("^{{{k}}}")
    };
    match base.node() {
        Node::Sin(u) => format!("\\sin{exp} {}", trig_arg_latex(u)),
        Node::Cos(u) => format!("\\cos{exp} {}", trig_arg_latex(u)),
        _ if k == 1 => latex_prec(base, Prec::Product),
        _ => format!("{}{exp}", latex_prec(base, Prec::Power)),
    }
}

fn latex_product(e: &Expr, ctx: Prec) -> String {
    let (coeff, factors) = e.split_coefficient();
    let mut items: Vec<(Expr, i64)> = factors.iter().map(base_exp).collect();
    // Re-sugar cos(u)^a sin(u)^-b as cot and leftover sin(u)^-k as csc.
    let mut sugared: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let (b, k) = items[i].clone();
        if let (Node::Sin(u), true) = (b.node(), k < 0) {
            let cos_at = items
                .iter()
                .position(|(c, j)| *j > 0 && matches!(c.node(), Node::Cos(v) if v == u));
            let mut left = -k;
            if let Some(ci) = cos_at {
                let m = left.min(items[ci].1);
                let exp = if m == 1 {
                    String::new()
                } else {
                    format!("^{{{m}}}")
                };
                sugared.push(format!("\\cot{exp} {}", trig_arg_latex(u)));
                left -= m;
                items[ci].1 -= m;
            }
            if left > 0 {
                let exp = if left == 1 {
                    String::new()
                } else {
                    format!("^{{{left}}}")
                };
                sugared.push(format!("\\csc{exp} {}", trig_arg_latex(u)));
            }
            items.remove(i);
            continue;
        }
        i += 1;
    }
    items.retain(|(_, k)| *k != 0);
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    for (b, k) in &items {
        if *k > 0 {
            num.push(latex_power(b, *k));
        } else {
            den.push(latex_power(b, -k));
        }
    }
    num.extend(sugared);
    let mag = coeff.abs();
    let sign = if coeff.is_negative() { "-" } else { "" };
    let body = if den.is_empty() && mag.denom().is_one() {
        let mut parts = Vec::new();
        if !mag.is_one() || num.is_empty() {
            parts.push(mag.numer().to_string());
        }
        parts.extend(num);
        parts.join(" ")
    } else {
        let mut top = Vec::new();
        if !mag.numer().is_one() || num.is_empty() {
            top.push(mag.numer().to_string());
        }
        top.extend(num);
        let mut bottom = Vec::new();
        if !mag.denom().is_one() {
            bottom.push(mag.denom().to_string());
        }
        bottom.extend(den);
        format!("\\frac{{{}}}{{{}}}", bare(top), bare(bottom))
    };
    let out = format!("{sign}{body}");
    wrap_latex(
        out,
        ctx == Prec::Power || (ctx == Prec::Product && !sign.is_empty()),
    )
}

/// A lone parenthesised sum needs no brackets inside `\\frac`.
fn bare(parts: Vec<String>) -> String {
    if let [one] = parts.as_slice() {
        if let Some(inner) = one
            .strip_prefix("\\left(")
            .and_then(|r| r.strip_suffix("\\right)"))
        {
            return inner.to_string();
        }
    }
    parts.join(" ")
}

/// JSON mirror of an atom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub name: String,
    pub role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u8>,
    #[serde(default)]
    pub angular: bool,
}

impl AtomJson {
    fn from_atom(a: &Atom) -> Self {
        let (role, order) = match a.kind() {
            AtomKind::Independent => ("independent", None),
            AtomKind::Dependent => ("dependent", None),
            AtomKind::Jet { order } => ("jet", Some(order)),
            AtomKind::Parameter => ("parameter", None),
            AtomKind::Epsilon => ("epsilon", None),
        };
        AtomJson {
            name: a.name().into(),
            role: role.into(),
            order,
            angular: a.angular,
        }
    }

    fn to_atom(&self) -> Result<Atom> {
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("invalid atom `{}` in JSON", self.name),
        };
        Ok(match (self.role.as_str(), self.order) {
            ("independent", None) => Atom::independent(&self.name).with_angular(self.angular),
            ("dependent", None) => Atom::dependent(&self.name, self.angular),
            ("jet", Some(o @ 1..=2)) => Atom::dependent(&self.name, self.angular).jet(o),
            ("parameter", None) => Atom::parameter(&self.name),
            ("epsilon", None) => Atom::epsilon(),
            _ => return Err(bad()),
        })
    }
}

/// JSON mirror of the expression tree, tagged by node kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExprJson {
    Num {
        value: String,
    },
    Pi,
    Atom(AtomJson),
    Add {
        terms: Vec<ExprJson>,
    },
    Mul {
        factors: Vec<ExprJson>,
    },
    Pow {
        base: Box<ExprJson>,
        exp: i64,
    },
    Sin {
        arg: Box<ExprJson>,
    },
    Cos {
        arg: Box<ExprJson>,
    },
    LnSin {
        arg: Box<ExprJson>,
    },
    Apply {
        func: String,
        params: Vec<AtomJson>,
        args: Vec<ExprJson>,
        derivs: Vec<u32>,
    },
}

impl ExprJson {
    pub fn from_expr(e: &Expr) -> Self {
        match e.node() {
            Node::Num(q) => ExprJson::Num {
                value: rational_plain(q),
            },
            Node::Pi => ExprJson::Pi,
            Node::Atom(a) => ExprJson::Atom(AtomJson::from_atom(a)),
            Node::Add(cs) => ExprJson::Add {
                terms: cs.iter().map(ExprJson::from_expr).collect(),
            },
            Node::Mul(cs) => ExprJson::Mul {
                factors: cs.iter().map(ExprJson::from_expr).collect(),
            },
            Node::Pow(b, k) => ExprJson::Pow {
                base: Box::new(ExprJson::from_expr(b)),
                exp: *k,
            },
            Node::Sin(u) => ExprJson::Sin {
                arg: Box::new(ExprJson::from_expr(u)),
            },
            Node::Cos(u) => ExprJson::Cos {
                arg: Box::new(ExprJson::from_expr(u)),
            },
            Node::LnSin(u) => ExprJson::LnSin {
                arg: Box::new(ExprJson::from_expr(u)),
            },
            Node::Apply { func, args, derivs } => ExprJson::Apply {
                func: func.name().into(),
                params: func.params().iter().map(AtomJson::from_atom).collect(),
                args: args.iter().map(ExprJson::from_expr).collect(),
                derivs: derivs.clone(),
            },
        }
    }

    /// Rebuild through the smart constructors.
    pub fn to_expr(&self) -> Result<Expr> {
        Ok(match self {
            ExprJson::Num { value } => {
                let q: Rational = value.parse().map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("invalid rational `{value}` in JSON"),
                })?;
                Expr::num(q)
            }
            ExprJson::Pi => Expr::pi(),
            ExprJson::Atom(a) => Expr::atom(&a.to_atom()?),
            ExprJson::Add { terms } => Expr::sum(
                terms
                    .iter()
                    .map(|t| t.to_expr())
                    .collect::<Result<Vec<_>>>()?,
            ),
            ExprJson::Mul { factors } => Expr::product(
                factors
                    .iter()
                    .map(|t| t.to_expr())
                    .collect::<Result<Vec<_>>>()?,
            ),
            ExprJson::Pow { base, exp } => {
                let b = base.to_expr()?;
                if b.is_zero_literal() && *exp < 0 {
                    return Err(Error::DivisionByZero);
                }
                b.pow(*exp)
            }
            ExprJson::Sin { arg } => Expr::sin(&arg.to_expr()?),
            ExprJson::Cos { arg } => Expr::cos(&arg.to_expr()?),
            ExprJson::LnSin { arg } => Expr::ln_sin(&arg.to_expr()?),
            ExprJson::Apply {
                func,
                params,
                args,
                derivs,
            } => {
                let params = params
                    .iter()
                    .map(AtomJson::to_atom)
                    .collect::<Result<Vec<_>>>()?;
                if args.len() != params.len() || derivs.len() != params.len() {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("arity mismatch for `{func}` in JSON"),
                    });
                }
                let f = Func::new(func, &params);
                let args = args
                    .iter()
                    .map(|a| a.to_expr())
                    .collect::<Result<Vec<_>>>()?;
                Expr::apply_with_derivs(&f, args, derivs.clone())
            }
        })
    }
}

impl Expr {
    pub fn from_json(j: &ExprJson) -> Result<Expr> {
        j.to_expr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, Context};

    fn ctx() -> Context {
        let mut c = Context::new();
        c.independent("s").unwrap();
        c.dependent("theta", true).unwrap();
        c.dependent("phi", true).unwrap();
        c.parameter("k1").unwrap();
        c.function("eta1", &["s", "theta", "phi"]).unwrap();
        c.function("f", &["theta"]).unwrap();
        c
    }

    #[test]
    fn plain_round_trips() {
        let c = ctx();
        for src in [
            "sin(theta)*cos(theta)*d(phi)^2",
            "-2*cot(theta)*d(theta)*d(phi)",
            "1/2*s^2 - k1/(s*theta^2) + 3/4",
            "eta1[s,theta] - sin(2*theta)*eta1[phi]",
            "f(0) + f[theta](phi) - ln(sin(theta))",
            "dd(theta) - (s + 1)^3/(theta - 1)",
            "-(s + theta)*phi + pi*eps",
        ] {
            let e = parse(src, &c).unwrap();
            let printed = e.to_plain();
            let again = parse(&printed, &c).unwrap_or_else(|err| panic!("{printed}: {err}"));
            assert_eq!(e, again, "{src} printed as {printed}");
        }
    }

    #[test]
    fn plain_shapes() {
        let c = ctx();
        assert_eq!(
            parse("cot(theta)", &c).unwrap().to_plain(),
            "cos(theta)/sin(theta)"
        );
        assert_eq!(parse("-d(theta)", &c).unwrap().to_plain(), "-d(theta)");
        assert_eq!(parse("s/2", &c).unwrap().to_plain(), "1/2*s");
    }

    #[test]
    fn latex_resugars_cot_and_csc() {
        let c = ctx();
        let e = parse("-2*cot(theta)*d(theta)*d(phi)", &c).unwrap();
        assert_eq!(e.to_latex(), "-2 \\dot{\\phi} \\dot{\\theta} \\cot \\theta");
        let e = parse("csc(theta)^2*eta1[theta]", &c).unwrap();
        assert_eq!(e.to_latex(), "\\eta^{1}_{\\theta} \\csc^{2} \\theta");
        assert_eq!(parse("k1", &c).unwrap().to_latex(), "k_{1}");
    }

    #[test]
    fn json_round_trips() {
        let c = ctx();
        let e = parse("eta1[s,theta]*sin(phi) - 1/3*dd(theta)^2 + f(0)", &c).unwrap();
        let text = serde_json::to_string(&e.to_json()).unwrap();
        let back: ExprJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Expr::from_json(&back).unwrap(), e);
        assert!(text.contains("\"kind\":\"apply\""));
    }
}
