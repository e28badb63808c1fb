//! Canonical rational-function form over trig/atom kernels.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Atom, Expr, Func, Node, Rational};
use crate::{Error, Result};

/// An indeterminate of the canonical polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kernel {
    Pi,
    Atom(Atom),
    Sin(Expr),
    Cos(Expr),
    LnSin(Expr),
    Apply {
        func: Func,
        args: Vec<Expr>,
        derivs: Vec<u32>,
    },
}

impl Kernel {
    pub fn to_expr(&self) -> Expr {
        match self {
            Kernel::Pi => Expr::pi(),
            Kernel::Atom(a) => Expr::atom(a),
            Kernel::Sin(u) => Expr::from_node(Node::Sin(u.clone())),
            Kernel::Cos(u) => Expr::from_node(Node::Cos(u.clone())),
            Kernel::LnSin(u) => Expr::from_node(Node::LnSin(u.clone())),
            Kernel::Apply { func, args, derivs } => {
                Expr::apply_with_derivs(func, args.clone(), derivs.clone())
            }
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Kernel::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Whether any atom satisfying `pred` occurs inside the kernel's arguments.
    pub fn argument_mentions(&self, pred: &impl Fn(&Atom) -> bool) -> bool {
        match self {
            Kernel::Pi | Kernel::Atom(_) => false,
            Kernel::Sin(u) | Kernel::Cos(u) | Kernel::LnSin(u) => u.contains_atom(pred),
            Kernel::Apply { args, .. } => args.iter().any(|a| a.contains_atom(pred)),
        }
    }

    /// Argument of a cosine that is subject to `cos^2 = 1 - sin^2`.
    fn reducible_cos(&self) -> Option<&Expr> {
        match self {
            Kernel::Cos(u) if is_angular_argument(u) => Some(u),
            _ => None,
        }
    }
}

fn is_angular_argument(u: &Expr) -> bool {
    if !u.functions().is_empty() {
        return false;
    }
    let mut ok = true;
    u.for_each_atom(&mut |a| ok &= a.is_angular());
    ok
}

/// Power product of kernels, sorted by kernel with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Kernel, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn of(k: Kernel, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(k, e)])
        }
    }

    pub fn factors(&self) -> &[(Kernel, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, k: &Kernel) -> u32 {
        self.0.iter().find(|(j, _)| j == k).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Exponent-wise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(k, e)| {
                    let f = other.degree_in(k);
                    (f > 0).then(|| (k.clone(), (*e).min(f)))
                })
                .collect(),
        )
    }

    /// Exponent-wise maximum.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let g = self.gcd(other);
        self.mul(other).div(&g)
    }

    /// Quotient by a divisor monomial. Panics if `d` does not divide `self`.
    pub fn div(&self, d: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len());
        for (k, e) in &self.0 {
            let f = d.degree_in(k);
            assert!(f <= *e, "monomial division is not exact");
            if *e > f {
                out.push((k.clone(), e - f));
            }
        }
        Monomial(out)
    }

    /// Split off the factors whose kernel satisfies `pred`.
    pub fn split(&self, pred: impl Fn(&Kernel) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(k, _)| pred(k));
        (Monomial(a), Monomial(b))
    }

    pub fn to_expr(&self) -> Expr {
        Expr::product(self.0.iter().map(|(k, e)| k.to_expr().pow(*e as i64)))
    }

    fn without(&self, k: &Kernel, e: u32) -> Monomial {
        self.div(&Monomial::of(k.clone(), e))
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(q: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), q);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn kernel(k: Kernel) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::of(k, 1), Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let mut out = Poly::zero();
        for (n, c) in &self.terms {
            out.add_reduced(n.mul(m), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_reduced(m.mul(n), a * b);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Add `q * m`, rewriting `cos^2 u` as `1 - sin^2 u` for angular `u`.
    fn add_reduced(&mut self, m: Monomial, q: Rational) {
        let hit = m.factors().iter().find_map(|(k, e)| {
            (*e >= 2).then(|| k.reducible_cos().map(|u| (k.clone(), u.clone())))?
        });
        match hit {
            None => self.add_term(m, q),
            Some((cos, u)) => {
                let rest = m.without(&cos, 2);
                let sin2 = Monomial::of(Kernel::Sin(u), 2);
                self.add_reduced(rest.mul(&sin2), -q.clone());
                self.add_reduced(rest, q);
            }
        }
    }

    /// Exponent-wise minimum over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, d: &Monomial) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.div(d), c.clone()))
                .collect(),
        }
    }

    fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next()
    }

    /// Whether `self == q * other` for some rational `q`.
    fn ratio_to(&self, other: &Poly) -> Option<Rational> {
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<Rational> = None;
        for ((m, a), (n, b)) in self.terms.iter().zip(other.terms.iter()) {
            if m != n {
                return None;
            }
            let r = a / b;
            match &ratio {
                None => ratio = Some(r),
                Some(q) if *q == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    pub fn to_expr(&self) -> Expr {
        Expr::sum(
            self.terms
                .iter()
                .map(|(m, c)| Expr::product([Expr::num(c.clone()), m.to_expr()])),
        )
    }
}

/// Numerator over denominator, with common monomial factors cancelled and
/// the denominator scaled to leading coefficient one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    num: Poly,
    den: Poly,
}

impl CanonicalForm {
    pub fn zero() -> Self {
        CanonicalForm {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn constant(q: Rational) -> Self {
        CanonicalForm {
            num: Poly::constant(q),
            den: Poly::one(),
        }
    }

    pub fn kernel(k: Kernel) -> Self {
        CanonicalForm {
            num: Poly::kernel(k),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        CanonicalForm {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let d = self.den.as_constant()?;
        Some(self.num.as_constant()? / d)
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return CanonicalForm::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = (num.div_monomial(&g), den.div_monomial(&g));
        let lc = den
            .leading_coefficient()
            .expect("nonzero denominator")
            .clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.as_monomial().is_none() {
            if let Some(q) = num.ratio_to(&den) {
                return CanonicalForm::constant(q);
            }
        }
        CanonicalForm { num, den }
    }

    pub fn add(&self, other: &CanonicalForm) -> CanonicalForm {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return CanonicalForm::canonical(self.num.add(&other.num), self.den.clone());
        }
        if let (Some((m, _)), Some((n, _))) = (self.den.as_monomial(), other.den.as_monomial()) {
            // Denominators are monic, so a monomial denominator has coefficient 1.
            let l = m.lcm(n);
            let a = self.num.mul_monomial(&l.div(m));
            let b = other.num.mul_monomial(&l.div(n));
            let mut den = Poly::zero();
            den.add_term(l, Rational::one());
            return CanonicalForm::canonical(a.add(&b), den);
        }
        let a = self.num.mul(&other.den);
        let b = other.num.mul(&self.den);
        CanonicalForm::canonical(a.add(&b), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> CanonicalForm {
        CanonicalForm {
            num: self.num.scale(&-Rational::one()),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &CanonicalForm) -> CanonicalForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> CanonicalForm {
        if q.is_zero() {
            return CanonicalForm::zero();
        }
        CanonicalForm {
            num: self.num.scale(q),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &CanonicalForm) -> CanonicalForm {
        if self.is_zero() || other.is_zero() {
            return CanonicalForm::zero();
        }
        if let Some(q) = other.as_constant() {
            return self.scale(&q);
        }
        if let Some(q) = self.as_constant() {
            return other.scale(&q);
        }
        CanonicalForm::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<CanonicalForm> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(CanonicalForm::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, k: i64) -> Result<CanonicalForm> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let k = u32::try_from(k)
            .map_err(|_| Error::UnsupportedFunctionClass("exponent too large".into()))?;
        Ok(CanonicalForm::canonical(self.num.pow(k), self.den.pow(k)))
    }

    /// Back to an expression tree.
    pub fn to_expr(&self) -> Expr {
        let num = self.num.to_expr();
        if self.den.as_constant().is_some() {
            return num;
        }
        match self.den.as_monomial() {
            Some((m, _)) => Expr::product(
                std::iter::once(num).chain(
                    m.factors()
                        .iter()
                        .map(|(k, e)| k.to_expr().pow(-(*e as i64))),
                ),
            ),
            None => Expr::product([num, self.den.to_expr().recip()]),
        }
    }
}

/// Map an expression to its canonical form.
pub fn normalize(e: &Expr) -> Result<CanonicalForm> {
    match e.node() {
        Node::Num(q) => Ok(CanonicalForm::constant(q.clone())),
        Node::Pi => Ok(CanonicalForm::kernel(Kernel::Pi)),
        Node::Atom(a) => Ok(CanonicalForm::kernel(Kernel::Atom(a.clone()))),
        Node::Add(cs) => {
            let mut acc = CanonicalForm::zero();
            for c in cs {
                acc = acc.add(&normalize(c)?);
            }
            Ok(acc)
        }
        Node::Mul(cs) => {
            let factors = cs.iter().map(normalize).collect::<Result<Vec<_>>>()?;
            let mut acc = CanonicalForm::constant(Rational::one());
            for f in &factors {
                acc = acc.mul(f);
            }
            Ok(acc)
        }
        Node::Pow(b, k) => normalize(b)?.pow(*k),
        Node::Sin(u) => trig_kernel(u, true),
        Node::Cos(u) => trig_kernel(u, false),
        Node::LnSin(u) => {
            let v = normalize(u)?.to_expr();
            Ok(CanonicalForm::kernel(Kernel::LnSin(v)))
        }
        Node::Apply { func, args, derivs } => {
            let args = args
                .iter()
                .map(|a| Ok(normalize(a)?.to_expr()))
                .collect::<Result<Vec<_>>>()?;
            Ok(CanonicalForm::kernel(Kernel::Apply {
                func: func.clone(),
                args,
                derivs: derivs.clone(),
            }))
        }
    }
}

fn trig_kernel(u: &Expr, sine: bool) -> Result<CanonicalForm> {
    let v = normalize(u)?.to_expr();
    let rebuilt = if sine { Expr::sin(&v) } else { Expr::cos(&v) };
    match rebuilt.node() {
        Node::Sin(w) if sine && *w == v => Ok(CanonicalForm::kernel(Kernel::Sin(v))),
        Node::Cos(w) if !sine && *w == v => Ok(CanonicalForm::kernel(Kernel::Cos(v))),
        _ => normalize(&rebuilt),
    }
}

/// Whether `e` vanishes identically. Expressions with a vanishing divisor are
/// undefined and reported as nonzero.
pub fn is_zero(e: &Expr) -> bool {
    normalize(e).map(|f| f.is_zero()).unwrap_or(false)
}
