//! Quadratic perturbation of the sphere geodesics, all seeds at once.

use std::time::Instant;

use liesym::approx::{second_approach_pipeline, Category, PerturbationSpec, Vocabulary};
use liesym::fixtures;

fn main() -> liesym::Result<()> {
    let sys = fixtures::sphere_second_order();
    let spec = PerturbationSpec::quadratic(sys.coords(), &["k", "h"])?;
    let t = Instant::now();
    let r = second_approach_pipeline(&sys, &Vocabulary::Standard, None)?;
    let zeroth = r.zeroth.as_ref().expect("computed");
    let sol = r.solution.as_ref().expect("computed");
    println!("exact order: {} directions", zeroth.dimension());
    println!(
        "first order: {} unknowns, {} equations, rank {}, {} directions",
        sol.unknowns.len(),
        sol.equations,
        sol.rank,
        sol.dimension()
    );
    let constants = spec.constants();
    let forced: Vec<&str> = constants
        .iter()
        .filter(|a| sol.forced_zero.contains(a))
        .map(|a| a.name())
        .collect();
    println!("forced to zero: {}", forced.join(" "));
    println!(
        "surviving: {:?}",
        r.surviving_constants()
            .iter()
            .map(|a| a.name())
            .collect::<Vec<_>>()
    );
    for c in [Category::Exact, Category::Trivial, Category::New] {
        println!("{c}: {}", r.triviality.count(c));
    }
    println!("{} ({:.1?})", r.verdict(), t.elapsed());
    Ok(())
}
