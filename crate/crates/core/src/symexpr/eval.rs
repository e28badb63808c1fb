//! Floating-point evaluation, used only as a numeric cross-check.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_traits::ToPrimitive;

use super::{Atom, Expr, Node};

/// Values for atoms. Unknown functions evaluate to a deterministic
/// pseudo-random value per (function, derivative multi-index, argument
/// values, salt), which models arbitrary smooth functions at one point.
#[derive(Clone, Debug, Default)]
pub struct Point {
    values: HashMap<Atom, f64>,
    salt: u64,
}

impl Point {
    pub fn new(salt: u64) -> Self {
        Point {
            values: HashMap::new(),
            salt,
        }
    }

    pub fn set(&mut self, a: &Atom, v: f64) -> &mut Self {
        self.values.insert(a.clone(), v);
        self
    }

    pub fn with(mut self, a: &Atom, v: f64) -> Self {
        self.values.insert(a.clone(), v);
        self
    }

    pub fn get(&self, a: &Atom) -> Option<f64> {
        self.values.get(a).copied()
    }
}

/// Evaluate `e` at `p`; `None` if an atom has no value.
pub fn eval(e: &Expr, p: &Point) -> Option<f64> {
    Some(match e.node() {
        Node::Num(q) => q.to_f64()?,
        Node::Pi => std::f64::consts::PI,
        Node::Atom(a) => p.get(a)?,
        Node::Add(cs) => {
            let mut acc = 0.0;
            for c in cs {
                acc += eval(c, p)?;
            }
            acc
        }
        Node::Mul(cs) => {
            let mut acc = 1.0;
            for c in cs {
                acc *= eval(c, p)?;
            }
            acc
        }
        Node::Pow(b, k) => eval(b, p)?.powi(i32::try_from(*k).ok()?),
        Node::Sin(u) => eval(u, p)?.sin(),
        Node::Cos(u) => eval(u, p)?.cos(),
        Node::LnSin(u) => eval(u, p)?.sin().ln(),
        Node::Apply { func, args, derivs } => {
            let mut h = std::collections::hash_map::DefaultHasher::new();
            func.name().hash(&mut h);
            derivs.hash(&mut h);
            p.salt.hash(&mut h);
            for a in args {
                eval(a, p)?.to_bits().hash(&mut h);
            }
            (h.finish() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, Context};

    #[test]
    fn evaluates_trig_and_jets() {
        let mut c = Context::new();
        let theta = c.dependent("theta", true).unwrap();
        let e = parse("sin(theta)*cos(theta)*d(theta)^2 + pi", &c).unwrap();
        let p = Point::new(0).with(&theta, 0.5).with(&theta.jet(1), 2.0);
        let v = eval(&e, &p).unwrap();
        assert!((v - (0.5f64.sin() * 0.5f64.cos() * 4.0 + std::f64::consts::PI)).abs() < 1e-12);
        assert!(eval(&e, &Point::new(0)).is_none());
    }
}
