#![allow(dead_code)]

use std::path::PathBuf;

use liesym::cli::{load_problem, Problem};
use liesym::fixtures;
use liesym::symexpr::{eval, Atom, Context, Expr, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn problem_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(name)
}

pub fn problem(name: &str) -> Problem {
    load_problem(&problem_path(name)).expect("bundled problem parses")
}

/// Coordinates `s`, `theta`, `phi` with `theta` kept away from the poles.
pub struct Domain {
    pub ctx: Context,
    pub s: Atom,
    pub theta: Atom,
    pub phi: Atom,
}

impl Domain {
    pub fn sphere() -> Self {
        let ctx = fixtures::sphere_context();
        let at = |n: &str| ctx.atom(n).unwrap().clone();
        let (s, theta, phi) = (at("s"), at("theta"), at("phi"));
        Domain { ctx, s, theta, phi }
    }

    pub fn atoms(&self) -> [&Atom; 3] {
        [&self.s, &self.theta, &self.phi]
    }

    pub fn point(&self, rng: &mut ChaCha8Rng) -> Point {
        Point::new(rng.gen())
            .with(&self.s, rng.gen_range(-2.0..2.0))
            .with(&self.theta, rng.gen_range(0.3..2.8))
            .with(&self.phi, rng.gen_range(-3.0..3.0))
    }

    fn leaf(&self, rng: &mut ChaCha8Rng) -> Expr {
        match rng.gen_range(0..5) {
            0 => Expr::atom(&self.s),
            1 => Expr::atom(&self.theta),
            2 => Expr::atom(&self.phi),
            3 => Expr::frac(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
            _ => Expr::int(rng.gen_range(1..=3)),
        }
    }

    fn trig_arg(&self, rng: &mut ChaCha8Rng) -> Expr {
        let t = Expr::atom(&self.theta);
        let p = Expr::atom(&self.phi);
        match rng.gen_range(0..4) {
            0 => t,
            1 => p,
            2 => Expr::int(2) * t,
            _ => t + p,
        }
    }

    /// Random expression that is finite on the sampling domain.
    pub fn expr(&self, rng: &mut ChaCha8Rng, depth: u32) -> Expr {
        if depth == 0 {
            return self.leaf(rng);
        }
        let t = Expr::atom(&self.theta);
        match rng.gen_range(0..9) {
            0 | 1 => self.expr(rng, depth - 1) + self.expr(rng, depth - 1),
            2 | 3 => self.expr(rng, depth - 1) * self.expr(rng, depth - 1),
            // shallow bases keep magnitudes where f64 cancellation stays below 1e-9
            4 => self.expr(rng, 0).pow(rng.gen_range(2..=3)),
            5 => Expr::sin(&self.trig_arg(rng)) * self.expr(rng, depth - 1),
            6 => Expr::cos(&self.trig_arg(rng)) + self.expr(rng, depth - 1),
            7 => Expr::cot(&t) * self.expr(rng, depth - 1),
            _ => Expr::ln_sin(&t) + self.expr(rng, depth - 1),
        }
    }
}

/// Derivative by Richardson-extrapolated central differences.
pub fn finite_difference(e: &Expr, x: &Atom, p: &Point) -> Option<f64> {
    let x0 = p.get(x)?;
    let central = |h: f64| -> Option<f64> {
        let plus = eval(e, &p.clone().with(x, x0 + h))?;
        let minus = eval(e, &p.clone().with(x, x0 - h))?;
        Some((plus - minus) / (2.0 * h))
    };
    let h = 1e-3;
    let (d1, d2) = (central(h)?, central(h / 2.0)?);
    Some((4.0 * d2 - d1) / 3.0)
}
