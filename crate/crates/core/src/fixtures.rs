//! The sphere and free-particle problems used by tests, examples and the CLI.

use crate::approx::PerturbationSpec;
use crate::geom::Metric2;
use crate::jet::{Coordinates, OdeSystem};
use crate::prolong::Generator;
use crate::symexpr::{parse, Context, Expr};

/// `s`; angular `theta`, `phi`; perturbation functions `f(theta)`, `g(phi)`.
pub fn sphere_context() -> Context {
    let mut c = Context::new();
    c.independent("s").expect("fresh");
    c.dependent("theta", true).expect("fresh");
    c.dependent("phi", true).expect("fresh");
    c.function("f", &["theta"]).expect("fresh");
    c.function("g", &["phi"]).expect("fresh");
    c
}

fn coords_of(c: &Context) -> Coordinates {
    Coordinates::new(
        c.independent_atom().expect("declared").clone(),
        c.dependent_atoms().to_vec(),
    )
}

/// Round-sphere metric `d theta^2 + sin^2 theta d phi^2`.
pub fn sphere_metric(c: &Context) -> Metric2 {
    let coords = [
        c.atom("theta").unwrap().clone(),
        c.atom("phi").unwrap().clone(),
    ];
    Metric2::diagonal(coords, Expr::one(), parse("sin(theta)^2", c).unwrap())
        .expect("sphere metric is regular")
}

/// Sphere geodesics written out by hand:
/// `theta'' = sin cos phi'^2`, `phi'' = -2 cot theta' phi'`.
pub fn sphere_with_context() -> (Context, OdeSystem) {
    let c = sphere_context();
    let rhs = vec![
        parse("sin(theta)*cos(theta)*d(phi)^2", &c).unwrap(),
        parse("-2*cot(theta)*d(theta)*d(phi)", &c).unwrap(),
    ];
    let sys = OdeSystem::new(coords_of(&c), rhs).expect("valid system");
    (c, sys)
}

pub fn sphere_system() -> OdeSystem {
    sphere_with_context().1
}

/// Generator from component strings `xi, eta1, eta2`.
pub fn generator(c: &Context, sys: &OdeSystem, comps: [&str; 3]) -> Generator {
    let e: Vec<Expr> = comps.iter().map(|s| parse(s, c).unwrap()).collect();
    Generator::from_components(sys.coords().clone(), e).expect("point generator")
}

/// Translation, scaling and the three rotations, in that order.
pub fn sphere_generators(sys: &OdeSystem) -> Vec<Generator> {
    let c = sphere_context();
    [
        ["1", "0", "0"],
        ["s", "0", "0"],
        ["0", "0", "1"],
        ["0", "cos(phi)", "-cot(theta)*sin(phi)"],
        ["0", "sin(phi)", "cot(theta)*cos(phi)"],
    ]
    .iter()
    .map(|comps| generator(&c, sys, *comps))
    .collect()
}

/// Free particle in the plane: `s`, `x`, `y` (not angular), `x'' = y'' = 0`.
pub fn flat_with_context() -> (Context, OdeSystem) {
    let mut c = Context::new();
    c.independent("s").expect("fresh");
    c.dependent("x", false).expect("fresh");
    c.dependent("y", false).expect("fresh");
    let sys = OdeSystem::new(coords_of(&c), vec![Expr::zero(), Expr::zero()]).expect("valid");
    (c, sys)
}

/// Sphere geodesics perturbed by `eps f(theta)` and `eps g(phi)`.
pub fn sphere_first_order() -> (Context, OdeSystem) {
    let (c, sys) = sphere_with_context();
    let p = vec![c.func("f").unwrap().call(), c.func("g").unwrap().call()];
    let sys = sys.with_perturbation(p).expect("valid perturbation");
    (c, sys)
}

/// Sphere geodesics perturbed by the velocity-quadratic forms with constants
/// `k1..k7`, `h1..h7`.
pub fn sphere_second_order() -> OdeSystem {
    let sys = sphere_system();
    PerturbationSpec::quadratic(sys.coords(), &["k", "h"])
        .and_then(|p| p.apply(&sys))
        .expect("two equations")
}

/// Free particle with `x'' + eps = 0`.
pub fn flat_perturbed() -> (Context, OdeSystem) {
    let (c, sys) = flat_with_context();
    let sys = sys
        .with_perturbation(vec![Expr::one(), Expr::zero()])
        .expect("valid");
    (c, sys)
}
