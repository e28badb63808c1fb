//! Christoffel symbols and geodesic equations of a few 2D metrics.

use liesym::geom::{christoffel, conserves_line_element, geodesic_system, Metric2};
use liesym::symexpr::parse;

fn main() -> liesym::Result<()> {
    let ctx = liesym::fixtures::sphere_context();
    let coords = [
        ctx.atom("theta").unwrap().clone(),
        ctx.atom("phi").unwrap().clone(),
    ];
    let s = ctx.atom("s").unwrap();
    for (g11, g22) in [("1", "sin(theta)^2"), ("1", "theta^2"), ("1", "1")] {
        let m = Metric2::diagonal(coords.clone(), parse(g11, &ctx)?, parse(g22, &ctx)?)?;
        println!("ds^2 = {}", m.line_element().simplify()?);
        let gamma = christoffel(&m)?;
        for a in 0..2 {
            for b in 0..2 {
                for c in b..2 {
                    let g = gamma.get(a, b, c);
                    if !g.is_zero_literal() {
                        let n = |i: usize| coords[i].name();
                        println!("  Gamma^{}_{}{} = {g}", n(a), n(b), n(c));
                    }
                }
            }
        }
        let sys = geodesic_system(&m, s)?;
        for (x, r) in coords.iter().zip(sys.rhs()) {
            println!("  {}'' = {r}", x.name());
        }
        println!(
            "  line element conserved: {}",
            conserves_line_element(&m, &sys)?
        );
    }
    Ok(())
}
