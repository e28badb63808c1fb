//! Perturb the sphere geodesics by f(theta), g(phi) and try each exact
//! symmetry as the zeroth-order part.

use std::time::Instant;

use liesym::approx::{first_approach_all, Vocabulary};
use liesym::fixtures;

fn main() -> liesym::Result<()> {
    let (_, sys) = fixtures::sphere_first_order();
    let algebra = fixtures::sphere_generators(&sys);
    let seeds: Vec<(String, _)> = algebra
        .iter()
        .enumerate()
        .map(|(i, g)| (format!("X{i}"), g.clone()))
        .collect();
    let t = Instant::now();
    for r in first_approach_all(&seeds, &sys, &Vocabulary::Standard, &algebra)? {
        let h: Vec<String> = r.h.iter().map(|e| e.to_string()).collect();
        let survivors = r.surviving_constants();
        let surviving: Vec<&str> = survivors.iter().map(|a| a.name()).collect();
        println!("{}: H = ({})", r.seed, h.join(", "));
        println!(
            "  status {}, surviving perturbation constants [{}]",
            r.status,
            surviving.join(" ")
        );
        println!("  {}", r.verdict());
    }
    println!("({:.1?})", t.elapsed());
    Ok(())
}
