//! Exact-arithmetic expression kernel.
//!
//! [`Expr`] is an immutable, reference-counted tree over exact rationals,
//! coordinate and jet atoms, `sin`/`cos`, and applications of unknown
//! functions carrying a formal partial-derivative multi-index. Smart
//! constructors keep sums and products flat, fold numeric factors, and sort
//! children in a fixed total order, so structurally equal trees compare equal.
//!
//! Identities are decided by [`normalize`], which maps an expression into a
//! rational function over *kernels* (atoms, `sin`/`cos` of angular arguments,
//! formal derivatives) with `cos^2 x` rewritten as `1 - sin^2 x`.

mod calculus;
mod collect;
mod eval;
mod normal;
mod parse;
mod print;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use calculus::{diff, substitute, Bindings, Target};
pub use collect::{collect, MonomialKey};
pub use eval::{eval, Point};
pub use normal::{is_zero, normalize, CanonicalForm, Kernel, Monomial, Poly};
pub use parse::{parse, Context};
pub use print::{ExprJson, PrintMode};

/// Exact rational constant.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Role an atom plays in the jet space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    Independent,
    Dependent,
    /// Derivative of a dependent variable with respect to the independent one.
    Jet {
        order: u8,
    },
    Parameter,
    Epsilon,
}

/// A named symbol. Jet atoms share the name of their base variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    name: Arc<str>,
    kind: AtomKind,
    angular: bool,
}

impl Atom {
    pub fn independent(name: &str) -> Self {
        Atom {
            name: name.into(),
            kind: AtomKind::Independent,
            angular: false,
        }
    }

    pub fn dependent(name: &str, angular: bool) -> Self {
        Atom {
            name: name.into(),
            kind: AtomKind::Dependent,
            angular,
        }
    }

    pub fn parameter(name: &str) -> Self {
        Atom {
            name: name.into(),
            kind: AtomKind::Parameter,
            angular: false,
        }
    }

    pub fn epsilon() -> Self {
        Atom {
            name: "eps".into(),
            kind: AtomKind::Epsilon,
            angular: false,
        }
    }

    /// Jet coordinate of the given order over a dependent variable.
    ///
    /// Panics if `self` is not a dependent variable or `order` is not 1 or 2.
    pub fn jet(&self, order: u8) -> Self {
        assert!(
            self.kind == AtomKind::Dependent,
            "jet of non-dependent atom {}",
            self.name
        );
        assert!((1..=2).contains(&order), "jet order {order} out of range");
        Atom {
            name: self.name.clone(),
            kind: AtomKind::Jet { order },
            angular: self.angular,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> AtomKind {
        self.kind
    }

    /// Angular coordinates get Pythagorean reduction; jets never do.
    pub fn is_angular(&self) -> bool {
        self.angular && matches!(self.kind, AtomKind::Independent | AtomKind::Dependent)
    }

    pub fn jet_order(&self) -> Option<u8> {
        match self.kind {
            AtomKind::Jet { order } => Some(order),
            _ => None,
        }
    }

    /// The dependent variable underlying a jet atom.
    pub fn base(&self) -> Option<Atom> {
        match self.kind {
            AtomKind::Jet { .. } => Some(Atom {
                name: self.name.clone(),
                kind: AtomKind::Dependent,
                angular: self.angular,
            }),
            _ => None,
        }
    }

    pub(crate) fn with_angular(mut self, angular: bool) -> Self {
        self.angular = angular;
        self
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AtomKind::Jet { order: 1 } => write!(f, "d({})", self.name),
            AtomKind::Jet { .. } => write!(f, "dd({})", self.name),
            _ => f.write_str(&self.name),
        }
    }
}

/// An unknown function of an ordered list of argument atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Func {
    name: Arc<str>,
    params: Arc<[Atom]>,
}

impl Func {
    pub fn new(name: &str, params: &[Atom]) -> Self {
        Func {
            name: name.into(),
            params: params.into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[Atom] {
        &self.params
    }

    /// `name(params...)` with no derivatives.
    pub fn call(&self) -> Expr {
        Expr::apply(self, self.params.iter().map(Expr::atom).collect())
    }

    /// Formal partial derivative at the declared arguments, one slot index per
    /// differentiation.
    pub fn derivative(&self, slots: &[usize]) -> Expr {
        let mut derivs = vec![0u32; self.params.len()];
        for &i in slots {
            derivs[i] += 1;
        }
        Expr::from_node(Node::Apply {
            func: self.clone(),
            args: self.params.iter().map(Expr::atom).collect(),
            derivs,
        })
    }

    /// Formal derivative by parameter atoms, e.g. `xi.partial(&[&s, &theta])`.
    pub fn partial(&self, vars: &[&Atom]) -> Expr {
        let slots: Vec<usize> = vars
            .iter()
            .map(|v| {
                self.params
                    .iter()
                    .position(|p| p == *v)
                    .unwrap_or_else(|| panic!("{} is not an argument of {}", v, self.name))
            })
            .collect();
        self.derivative(&slots)
    }
}

/// Node of an expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Num(Rational),
    Pi,
    Atom(Atom),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, i64),
    Sin(Expr),
    Cos(Expr),
    /// `ln(sin(arg))`, kept opaque; its derivative is `cot(arg) * arg'`.
    LnSin(Expr),
    /// Unknown function evaluated at `args`, differentiated `derivs[i]` times
    /// in argument slot `i`.
    Apply {
        func: Func,
        args: Vec<Expr>,
        derivs: Vec<u32>,
    },
}

/// Immutable symbolic expression.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::plain(self))
    }
}

impl Expr {
    pub(crate) fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn num(q: Rational) -> Self {
        Expr::from_node(Node::Num(q))
    }

    pub fn int(n: i64) -> Self {
        Expr::num(rat(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Expr::num(rat_frac(n, d))
    }

    pub fn zero() -> Self {
        Expr::int(0)
    }

    pub fn one() -> Self {
        Expr::int(1)
    }

    pub fn pi() -> Self {
        Expr::from_node(Node::Pi)
    }

    pub fn atom(a: &Atom) -> Self {
        Expr::from_node(Node::Atom(a.clone()))
    }

    pub fn as_num(&self) -> Option<&Rational> {
        match self.node() {
            Node::Num(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self.node() {
            Node::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.as_num().is_some_and(|q| q.is_zero())
    }

    pub fn is_one_literal(&self) -> bool {
        self.as_num().is_some_and(|q| q.is_one())
    }

    /// Flattened, constant-folded, sorted sum.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Self {
        let mut constant = Rational::zero();
        let mut out = Vec::new();
        let mut stack: Vec<Expr> = terms.into_iter().collect();
        stack.reverse();
        while let Some(t) = stack.pop() {
            match t.node() {
                Node::Num(q) => constant += q,
                Node::Add(children) => stack.extend(children.iter().rev().cloned()),
                _ => out.push(t),
            }
        }
        if !constant.is_zero() {
            out.push(Expr::num(constant));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => {
                out.sort_by(term_order);
                Expr::from_node(Node::Add(out))
            }
        }
    }

    /// Flattened, constant-folded, sorted product.
    pub fn product<I: IntoIterator<Item = Expr>>(factors: I) -> Self {
        let mut coeff = Rational::one();
        let mut out = Vec::new();
        let mut stack: Vec<Expr> = factors.into_iter().collect();
        stack.reverse();
        while let Some(t) = stack.pop() {
            match t.node() {
                Node::Num(q) => coeff *= q,
                Node::Mul(children) => stack.extend(children.iter().rev().cloned()),
                _ => out.push(t),
            }
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        if out.is_empty() {
            return Expr::num(coeff);
        }
        if !coeff.is_one() {
            out.push(Expr::num(coeff));
        }
        if out.len() == 1 {
            return out.pop().unwrap();
        }
        out.sort();
        Expr::from_node(Node::Mul(out))
    }

    /// Integer power with folding of numeric bases and nested powers.
    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Expr::one();
        }
        if k == 1 {
            return self.clone();
        }
        match self.node() {
            Node::Num(q) => {
                if q.is_zero() {
                    if k > 0 {
                        return Expr::zero();
                    }
                    return Expr::from_node(Node::Pow(self.clone(), k));
                }
                let mag = k.unsigned_abs();
                let base = if k < 0 { q.recip() } else { q.clone() };
                let mut acc = Rational::one();
                for _ in 0..mag {
                    acc *= &base;
                }
                Expr::num(acc)
            }
            Node::Pow(b, j) => b.pow(j * k),
            _ => Expr::from_node(Node::Pow(self.clone(), k)),
        }
    }

    pub fn recip(&self) -> Self {
        self.pow(-1)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Expr::product([Expr::num(q.clone()), self.clone()])
    }

    /// `sin(arg)`, expanding integer combinations of atoms by the addition
    /// formulas and reducing multiples of pi/2 exactly.
    pub fn sin(arg: &Expr) -> Self {
        trig(Trig::Sin, arg)
    }

    pub fn cos(arg: &Expr) -> Self {
        trig(Trig::Cos, arg)
    }

    pub fn tan(arg: &Expr) -> Self {
        Expr::sin(arg) / Expr::cos(arg)
    }

    pub fn cot(arg: &Expr) -> Self {
        Expr::cos(arg) / Expr::sin(arg)
    }

    pub fn sec(arg: &Expr) -> Self {
        Expr::cos(arg).recip()
    }

    pub fn csc(arg: &Expr) -> Self {
        Expr::sin(arg).recip()
    }

    pub fn ln_sin(arg: &Expr) -> Self {
        Expr::from_node(Node::LnSin(arg.clone()))
    }

    /// Unknown function applied to `args` (no derivatives).
    ///
    /// Panics on arity mismatch.
    pub fn apply(func: &Func, args: Vec<Expr>) -> Self {
        assert_eq!(
            args.len(),
            func.params().len(),
            "arity mismatch applying {}",
            func.name()
        );
        let derivs = vec![0; args.len()];
        Expr::from_node(Node::Apply {
            func: func.clone(),
            args,
            derivs,
        })
    }

    pub(crate) fn apply_with_derivs(func: &Func, args: Vec<Expr>, derivs: Vec<u32>) -> Self {
        Expr::from_node(Node::Apply {
            func: func.clone(),
            args,
            derivs,
        })
    }

    /// Visit every atom occurring anywhere in the tree.
    pub fn for_each_atom(&self, f: &mut impl FnMut(&Atom)) {
        match self.node() {
            Node::Num(_) | Node::Pi => {}
            Node::Atom(a) => f(a),
            Node::Add(cs) | Node::Mul(cs) => cs.iter().for_each(|c| c.for_each_atom(f)),
            Node::Pow(b, _) => b.for_each_atom(f),
            Node::Sin(u) | Node::Cos(u) | Node::LnSin(u) => u.for_each_atom(f),
            Node::Apply { args, .. } => args.iter().for_each(|c| c.for_each_atom(f)),
        }
    }

    pub fn contains_atom(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= pred(a));
        found
    }

    /// Unknown functions referenced anywhere in the tree.
    pub fn functions(&self) -> Vec<Func> {
        let mut out = Vec::new();
        self.collect_functions(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_functions(&self, out: &mut Vec<Func>) {
        match self.node() {
            Node::Num(_) | Node::Pi | Node::Atom(_) => {}
            Node::Add(cs) | Node::Mul(cs) => cs.iter().for_each(|c| c.collect_functions(out)),
            Node::Pow(b, _) => b.collect_functions(out),
            Node::Sin(u) | Node::Cos(u) | Node::LnSin(u) => u.collect_functions(out),
            Node::Apply { func, args, .. } => {
                out.push(func.clone());
                args.iter().for_each(|c| c.collect_functions(out));
            }
        }
    }

    /// Canonical rational-function form re-expressed as a tree.
    pub fn simplify(&self) -> crate::Result<Expr> {
        Ok(normalize(self)?.to_expr())
    }

    pub fn to_plain(&self) -> String {
        print::plain(self)
    }

    pub fn to_latex(&self) -> String {
        print::latex(self)
    }

    pub fn to_json(&self) -> ExprJson {
        ExprJson::from_expr(self)
    }

    pub fn render(&self, mode: PrintMode) -> String {
        match mode {
            PrintMode::Plain => self.to_plain(),
            PrintMode::Latex => self.to_latex(),
            PrintMode::Json => serde_json::to_string(&self.to_json()).expect("serializable"),
        }
    }

    fn rank(&self) -> u8 {
        match self.node() {
            Node::Num(_) => 0,
            Node::Pi => 1,
            Node::Atom(_) => 2,
            Node::Sin(_) => 3,
            Node::Cos(_) => 4,
            Node::LnSin(_) => 5,
            Node::Pow(..) => 6,
            Node::Apply { .. } => 7,
            Node::Mul(_) => 8,
            Node::Add(_) => 9,
        }
    }

    /// Non-numeric factors and numeric coefficient of a product-like term.
    pub(crate) fn split_coefficient(&self) -> (Rational, Vec<Expr>) {
        match self.node() {
            Node::Num(q) => (q.clone(), Vec::new()),
            Node::Mul(cs) => {
                let mut coeff = Rational::one();
                let mut rest = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.node() {
                        Node::Num(q) => coeff *= q,
                        _ => rest.push(c.clone()),
                    }
                }
                (coeff, rest)
            }
            _ => (Rational::one(), vec![self.clone()]),
        }
    }
}

// Total order: constants < pi < atoms < sin < cos < ln sin < powers <
// unknown functions < products < sums. Products compare by their
// non-numeric factors first so that sums list terms by monomial.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (ra, rb) = (self.rank(), other.rank());
        if ra != rb {
            return ra.cmp(&rb);
        }
        match (self.node(), other.node()) {
            (Node::Num(a), Node::Num(b)) => a.cmp(b),
            (Node::Pi, Node::Pi) => Ordering::Equal,
            (Node::Atom(a), Node::Atom(b)) => a.cmp(b),
            (Node::Sin(a), Node::Sin(b))
            | (Node::Cos(a), Node::Cos(b))
            | (Node::LnSin(a), Node::LnSin(b)) => a.cmp(b),
            (Node::Pow(a, i), Node::Pow(b, j)) => a.cmp(b).then(i.cmp(j)),
            (
                Node::Apply {
                    func: fa,
                    args: aa,
                    derivs: da,
                },
                Node::Apply {
                    func: fb,
                    args: ab,
                    derivs: db,
                },
            ) => fa
                .cmp(fb)
                .then_with(|| {
                    let ta: u32 = da.iter().sum();
                    let tb: u32 = db.iter().sum();
                    ta.cmp(&tb)
                })
                .then_with(|| db.cmp(da))
                .then_with(|| aa.cmp(ab)),
            (Node::Mul(_), Node::Mul(_)) => {
                let (ca, fa) = self.split_coefficient();
                let (cb, fb) = other.split_coefficient();
                fa.cmp(&fb).then_with(|| ca.cmp(&cb))
            }
            (Node::Add(a), Node::Add(b)) => a.len().cmp(&b.len()).then_with(|| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| term_order(x, y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
            _ => unreachable!("rank mismatch"),
        }
    }
}

/// Order of terms inside a sum: by non-numeric factors, then coefficient, so
/// that a term's sign does not move it.
fn term_order(a: &Expr, b: &Expr) -> Ordering {
    let (ca, fa) = a.split_coefficient();
    let (cb, fb) = b.split_coefficient();
    fa.cmp(&fb).then_with(|| ca.cmp(&cb))
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum([self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum([self, -rhs])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs.recip()])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::int(-1), self])
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::sum([self.clone(), rhs.clone()])
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self.clone() - rhs.clone()
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::product([self.clone(), rhs.clone()])
    }
}

impl Div for &Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        self.clone() / rhs.clone()
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl From<&Atom> for Expr {
    fn from(a: &Atom) -> Self {
        Expr::atom(a)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Trig {
    Sin,
    Cos,
}

/// Decomposition of a trig argument as `sum n_i x_i + q*pi + c`.
struct LinearArg {
    atoms: Vec<(Atom, BigInt)>,
    pi: Rational,
    constant: Rational,
}

/// Whether `sin(arg)` lies in the supported class: an integer combination of
/// atoms plus a rational multiple of pi plus a rational constant.
pub(crate) fn is_linear_trig_arg(arg: &Expr) -> bool {
    linear_arg(arg).is_some()
}

fn linear_arg(arg: &Expr) -> Option<LinearArg> {
    let mut out = LinearArg {
        atoms: Vec::new(),
        pi: Rational::zero(),
        constant: Rational::zero(),
    };
    let terms: Vec<Expr> = match arg.node() {
        Node::Add(cs) => cs.clone(),
        _ => vec![arg.clone()],
    };
    for t in &terms {
        let (coeff, rest) = t.split_coefficient();
        match rest.as_slice() {
            [] => out.constant += coeff,
            [f] => match f.node() {
                Node::Pi => out.pi += coeff,
                Node::Atom(a) => {
                    if !coeff.is_integer() {
                        return None;
                    }
                    let n = coeff.to_integer();
                    match out.atoms.iter_mut().find(|(b, _)| b == a) {
                        Some((_, m)) => *m += n,
                        None => out.atoms.push((a.clone(), n)),
                    }
                }
                _ => return None,
            },
            _ => return None,
        }
    }
    out.atoms.retain(|(_, n)| !n.is_zero());
    out.atoms.sort();
    Some(out)
}

fn trig(kind: Trig, arg: &Expr) -> Expr {
    let Some(lin) = linear_arg(arg) else {
        return raw_trig(kind, arg.clone());
    };
    // Quarter turns are folded exactly; other multiples of pi stay in the
    // opaque constant part.
    let twice_pi = &lin.pi * rat(2);
    let (quarter, residual_pi) = if twice_pi.is_integer() {
        let q = twice_pi
            .to_integer()
            .mod_floor(&BigInt::from(4))
            .to_u8()
            .unwrap();
        (q, Rational::zero())
    } else {
        (0, lin.pi.clone())
    };
    let mut constant_part = Vec::new();
    if !lin.constant.is_zero() {
        constant_part.push(Expr::num(lin.constant.clone()));
    }
    if !residual_pi.is_zero() {
        constant_part.push(Expr::product([Expr::num(residual_pi), Expr::pi()]));
    }
    let mut pieces: Vec<(Expr, BigInt)> = lin
        .atoms
        .iter()
        .map(|(a, n)| (Expr::atom(a), n.clone()))
        .collect();
    if !constant_part.is_empty() {
        pieces.push((Expr::sum(constant_part), BigInt::one()));
    }
    // sin(u + k pi/2), cos(u + k pi/2) in terms of sin u, cos u.
    let (base_kind, sign) = match (kind, quarter) {
        (Trig::Sin, 0) => (Trig::Sin, 1),
        (Trig::Sin, 1) => (Trig::Cos, 1),
        (Trig::Sin, 2) => (Trig::Sin, -1),
        (Trig::Sin, _) => (Trig::Cos, -1),
        (Trig::Cos, 0) => (Trig::Cos, 1),
        (Trig::Cos, 1) => (Trig::Sin, -1),
        (Trig::Cos, 2) => (Trig::Cos, -1),
        (Trig::Cos, _) => (Trig::Sin, 1),
    };
    let (s, c) = expand_sum(&pieces);
    let v = if base_kind == Trig::Sin { s } else { c };
    if sign < 0 {
        -v
    } else {
        v
    }
}

fn raw_trig(kind: Trig, arg: Expr) -> Expr {
    match kind {
        Trig::Sin => Expr::from_node(Node::Sin(arg)),
        Trig::Cos => Expr::from_node(Node::Cos(arg)),
    }
}

/// (sin, cos) of `sum n_i u_i` by the addition formulas.
fn expand_sum(pieces: &[(Expr, BigInt)]) -> (Expr, Expr) {
    match pieces {
        [] => (Expr::zero(), Expr::one()),
        [(u, n)] => expand_multiple(u, n),
        [(u, n), rest @ ..] => {
            let (s1, c1) = expand_multiple(u, n);
            let (s2, c2) = expand_sum(rest);
            (&s1 * &c2 + &c1 * &s2, &c1 * &c2 - &s1 * &s2)
        }
    }
}

/// (sin(n u), cos(n u)) for integer n.
fn expand_multiple(u: &Expr, n: &BigInt) -> (Expr, Expr) {
    if n.is_negative() {
        let (s, c) = expand_multiple(u, &-n);
        return (-s, c);
    }
    let (s1, c1) = (
        raw_trig(Trig::Sin, u.clone()),
        raw_trig(Trig::Cos, u.clone()),
    );
    let count = n.to_u32().expect("angle multiple fits in u32");
    if count == 0 {
        return (Expr::zero(), Expr::one());
    }
    let (mut s, mut c) = (s1.clone(), c1.clone());
    for _ in 1..count {
        let ns = &s * &c1 + &c * &s1;
        let nc = &c * &c1 - &s * &s1;
        s = ns;
        c = nc;
    }
    (s, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> Atom {
        Atom::dependent("theta", true)
    }

    #[test]
    fn sums_flatten_and_fold() {
        let t = Expr::atom(&theta());
        let e = Expr::sum([
            Expr::int(2),
            t.clone(),
            Expr::sum([Expr::int(3), t.clone()]),
        ]);
        match e.node() {
            Node::Add(cs) => {
                assert_eq!(cs.len(), 3);
                assert_eq!(cs[0], Expr::int(5));
            }
            _ => panic!("expected sum"),
        }
    }

    #[test]
    fn products_fold_coefficients() {
        let t = Expr::atom(&theta());
        let e = Expr::product([Expr::int(2), t.clone(), Expr::frac(1, 2)]);
        assert_eq!(e, t);
        assert!(Expr::product([Expr::zero(), t]).is_zero_literal());
    }

    #[test]
    fn trig_of_special_angles() {
        assert!(Expr::sin(&Expr::zero()).is_zero_literal());
        assert!(Expr::cos(&Expr::zero()).is_one_literal());
        let half_pi = Expr::frac(1, 2) * Expr::pi();
        assert!(Expr::sin(&half_pi).is_one_literal());
        assert!(Expr::cos(&half_pi).is_zero_literal());
        let t = Expr::atom(&theta());
        assert_eq!(Expr::sin(&(t.clone() + Expr::pi())), -Expr::sin(&t));
    }

    #[test]
    fn sin_of_sum_expands() {
        let t = Expr::atom(&theta());
        let p = Expr::atom(&Atom::dependent("phi", true));
        let e = Expr::sin(&(t.clone() + p.clone()));
        let expected = Expr::sin(&t) * Expr::cos(&p) + Expr::cos(&t) * Expr::sin(&p);
        assert!(is_zero(&(e - expected)));
    }

    #[test]
    fn pow_folds() {
        let t = Expr::atom(&theta());
        assert_eq!(t.pow(2).pow(3), t.pow(6));
        assert_eq!(Expr::int(2).pow(-2), Expr::frac(1, 4));
        assert_eq!(t.pow(0), Expr::one());
    }
}
