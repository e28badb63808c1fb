//! Recursive-descent parser for the expression grammar.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{is_linear_trig_arg, normalize, Atom, AtomKind, Expr, Func, Node, Rational};
use crate::{Error, Result};

const RESERVED: &[&str] = &[
    "sin", "cos", "tan", "cot", "sec", "csc", "ln", "d", "dd", "eps", "pi", "D",
];

/// Symbol table for parsing: declared atoms and unknown functions.
#[derive(Clone, Debug, Default)]
pub struct Context {
    atoms: BTreeMap<String, Atom>,
    funcs: BTreeMap<String, Func>,
    independent: Option<Atom>,
    dependents: Vec<Atom>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::Declaration(format!("`{name}` is not an identifier")));
        }
        if RESERVED.contains(&name) {
            return Err(Error::Declaration(format!("`{name}` is reserved")));
        }
        if self.atoms.contains_key(name) || self.funcs.contains_key(name) {
            return Err(Error::Declaration(format!("`{name}` is declared twice")));
        }
        Ok(())
    }

    pub fn independent(&mut self, name: &str) -> Result<Atom> {
        if self.independent.is_some() {
            return Err(Error::Declaration(
                "only one independent variable is supported".into(),
            ));
        }
        self.check_fresh(name)?;
        let a = Atom::independent(name);
        self.atoms.insert(name.into(), a.clone());
        self.independent = Some(a.clone());
        Ok(a)
    }

    pub fn dependent(&mut self, name: &str, angular: bool) -> Result<Atom> {
        self.check_fresh(name)?;
        let a = Atom::dependent(name, angular);
        self.atoms.insert(name.into(), a.clone());
        self.dependents.push(a.clone());
        Ok(a)
    }

    pub fn parameter(&mut self, name: &str) -> Result<Atom> {
        self.check_fresh(name)?;
        let a = Atom::parameter(name);
        self.atoms.insert(name.into(), a.clone());
        Ok(a)
    }

    /// Declare an unknown function of previously declared atoms.
    pub fn function(&mut self, name: &str, params: &[&str]) -> Result<Func> {
        self.check_fresh(name)?;
        let params = params
            .iter()
            .map(|p| {
                self.atoms.get(*p).cloned().ok_or_else(|| {
                    Error::Declaration(format!("argument `{p}` of `{name}` is undeclared"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let f = Func::new(name, &params);
        self.funcs.insert(name.into(), f.clone());
        Ok(f)
    }

    /// Register an already constructed function, e.g. one built by a pipeline.
    pub fn add_function(&mut self, f: &Func) -> Result<()> {
        self.check_fresh(f.name())?;
        self.funcs.insert(f.name().into(), f.clone());
        Ok(())
    }

    pub fn atom(&self, name: &str) -> Option<&Atom> {
        self.atoms.get(name)
    }

    pub fn func(&self, name: &str) -> Option<&Func> {
        self.funcs.get(name)
    }

    pub fn independent_atom(&self) -> Option<&Atom> {
        self.independent.as_ref()
    }

    pub fn dependent_atoms(&self) -> &[Atom] {
        &self.dependents
    }

    pub fn parameters(&self) -> impl Iterator<Item = &Atom> {
        self.atoms
            .values()
            .filter(|a| a.kind() == AtomKind::Parameter)
    }

    pub fn functions(&self) -> impl Iterator<Item = &Func> {
        self.funcs.values()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(Error::Parse {
                    pos: i,
                    msg: "decimal literals are not exact; write p/q".into(),
                });
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((Tok::Int(n), start));
        } else if "+-*/^()[],".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    ctx: &'a Context,
}

/// Parse `text` against the declarations in `ctx`.
pub fn parse(text: &str, ctx: &Context) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        ctx,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.error(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: String) -> Error {
        Error::Parse {
            pos: self.pos(),
            msg,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(-self.term()?);
            } else {
                return Ok(Expr::sum(terms));
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat('*') {
                factors.push(self.unary()?);
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.unary()?;
                if d.is_zero_literal() {
                    return Err(Error::Parse {
                        pos,
                        msg: "division by zero".into(),
                    });
                }
                factors.push(d.recip());
            } else {
                return Ok(Expr::product(factors));
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let exp = self.unary()?;
        let k = normalize(&exp)
            .ok()
            .and_then(|f| f.as_constant())
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_i64())
            .ok_or(Error::Parse {
                pos,
                msg: "exponent must be an integer constant".into(),
            })?;
        if k < 0 && base.is_zero_literal() {
            return Err(Error::Parse {
                pos,
                msg: "division by zero".into(),
            });
        }
        Ok(base.pow(k))
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::num(Rational::from_integer(n))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(&name, pos),
            t => Err(Error::Parse {
                pos,
                msg: format!("unexpected {}", describe(&t)),
            }),
        }
    }

    fn call_args(&mut self) -> Result<Vec<Expr>> {
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(args)
    }

    fn single_arg(&mut self, name: &str) -> Result<Expr> {
        self.expect('(')?;
        let pos = self.pos();
        let args = self.call_args()?;
        if args.len() != 1 {
            return Err(Error::Parse {
                pos,
                msg: format!("`{name}` takes one argument"),
            });
        }
        Ok(args.into_iter().next().unwrap())
    }

    fn trig_arg(&mut self, name: &str) -> Result<Expr> {
        let pos = self.pos();
        let arg = self.single_arg(name)?;
        let arg = normalize(&arg)
            .map_err(|e| Error::Parse {
                pos,
                msg: e.to_string(),
            })?
            .to_expr();
        if !is_linear_trig_arg(&arg) {
            return Err(Error::Parse {
                pos,
                msg: format!(
                    "unsupported argument of `{name}`: expected an integer combination of \
                     variables plus a rational constant or multiple of pi"
                ),
            });
        }
        Ok(arg)
    }

    fn identifier(&mut self, name: &str, pos: usize) -> Result<Expr> {
        match name {
            "sin" => Ok(Expr::sin(&self.trig_arg(name)?)),
            "cos" => Ok(Expr::cos(&self.trig_arg(name)?)),
            "tan" => Ok(Expr::tan(&self.trig_arg(name)?)),
            "cot" => Ok(Expr::cot(&self.trig_arg(name)?)),
            "sec" => Ok(Expr::sec(&self.trig_arg(name)?)),
            "csc" => Ok(Expr::csc(&self.trig_arg(name)?)),
            "ln" => {
                let inner = self.single_arg(name)?;
                match inner.node() {
                    Node::Sin(u) => Ok(Expr::ln_sin(u)),
                    _ => Err(Error::Parse {
                        pos,
                        msg: "only ln(sin(x)) is supported".into(),
                    }),
                }
            }
            "d" | "dd" => self.jet(name, pos),
            "eps" => Ok(Expr::atom(&Atom::epsilon())),
            "pi" => Ok(Expr::pi()),
            "D" => Err(Error::Parse {
                pos,
                msg: "`D[...]` is only valid in a generator definition".into(),
            }),
            _ => {
                if let Some(f) = self.ctx.func(name).cloned() {
                    return self.function(&f);
                }
                match self.ctx.atom(name) {
                    Some(a) => {
                        if *self.peek() == Tok::Sym('(') {
                            return Err(self.error(format!("`{name}` is not a function")));
                        }
                        Ok(Expr::atom(a))
                    }
                    None => Err(Error::Undeclared {
                        name: name.into(),
                        pos,
                    }),
                }
            }
        }
    }

    fn jet(&mut self, name: &str, pos: usize) -> Result<Expr> {
        let step: u8 = if name == "d" { 1 } else { 2 };
        let inner = self.single_arg(name)?;
        let (base, order) = match inner.as_atom() {
            Some(a) if a.kind() == AtomKind::Dependent => (a.clone(), step),
            Some(a) if a.jet_order().is_some() => {
                (a.base().unwrap(), a.jet_order().unwrap() + step)
            }
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("`{name}(...)` needs a dependent variable"),
                })
            }
        };
        if order > 2 {
            return Err(Error::Parse {
                pos,
                msg: format!("derivative order {order} exceeds the supported maximum of 2"),
            });
        }
        Ok(Expr::atom(&base.jet(order)))
    }

    fn function(&mut self, f: &Func) -> Result<Expr> {
        let mut derivs = vec![0u32; f.params().len()];
        if self.eat('[') {
            loop {
                let pos = self.pos();
                let Tok::Ident(v) = self.bump() else {
                    return Err(Error::Parse {
                        pos,
                        msg: "expected a variable name".into(),
                    });
                };
                let slot = f
                    .params()
                    .iter()
                    .position(|p| p.name() == v)
                    .ok_or_else(|| Error::Parse {
                        pos,
                        msg: format!("`{v}` is not an argument of `{}`", f.name()),
                    })?;
                derivs[slot] += 1;
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']')?;
        }
        let args = if *self.peek() == Tok::Sym('(') {
            let pos = self.pos();
            self.bump();
            let args = self.call_args()?;
            if args.len() != f.params().len() {
                return Err(Error::Parse {
                    pos,
                    msg: format!("`{}` takes {} arguments", f.name(), f.params().len()),
                });
            }
            args
        } else {
            f.params().iter().map(Expr::atom).collect()
        };
        Ok(Expr::apply_with_derivs(f, args, derivs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        let mut c = Context::new();
        c.independent("s").unwrap();
        c.dependent("theta", true).unwrap();
        c.dependent("phi", true).unwrap();
        c.function("xi", &["s", "theta", "phi"]).unwrap();
        c.function("f", &["theta"]).unwrap();
        c
    }

    #[test]
    fn parses_jets_and_products() {
        let e = parse("sin(theta)*cos(theta)*d(phi)^2", &ctx()).unwrap();
        let Node::Mul(fs) = e.node() else {
            panic!("not a product: {e}")
        };
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().any(|f| matches!(f.node(), Node::Pow(b, 2)
            if b.as_atom().is_some_and(|a| a.jet_order() == Some(1)))));
    }

    #[test]
    fn zero_literal() {
        assert!(parse("0", &ctx()).unwrap().is_zero_literal());
    }

    #[test]
    fn cot_is_rewritten() {
        let c = ctx();
        let e = parse("cot(theta)", &c).unwrap();
        let theta = Expr::atom(c.atom("theta").unwrap());
        assert_eq!(e, Expr::cos(&theta) * Expr::sin(&theta).recip());
    }

    #[test]
    fn rejects_bad_input() {
        let c = ctx();
        assert!(matches!(
            parse("x + 1", &c),
            Err(Error::Undeclared { pos: 0, .. })
        ));
        assert!(matches!(
            parse("dd(d(theta))", &c),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("sin(theta", &c),
            Err(Error::Parse { pos: 9, .. })
        ));
        assert!(matches!(parse("s^theta", &c), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("sin(theta^2)", &c),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("ln(cos(theta))", &c),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse("1.5", &c), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse("xi[q]", &c), Err(Error::Parse { .. })));
    }

    #[test]
    fn function_derivatives() {
        let c = ctx();
        let a = parse("xi[theta,s]", &c).unwrap();
        let b = parse("xi[s,theta](s,theta,phi)", &c).unwrap();
        assert_eq!(a, b);
        let f0 = parse("f(0)", &c).unwrap();
        assert!(matches!(f0.node(), Node::Apply { args, .. } if args[0].is_zero_literal()));
    }

    #[test]
    fn reserved_names_cannot_be_declared() {
        let mut c = Context::new();
        assert!(c.parameter("eps").is_err());
        assert!(c.parameter("D").is_err());
        assert!(c.parameter("k1").is_ok());
        assert!(c.parameter("k1").is_err());
    }
}
