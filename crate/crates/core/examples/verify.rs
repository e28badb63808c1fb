//! Check candidate generators symbolically and at random points.

use liesym::determine::{sample_residuals, verify_generator};
use liesym::fixtures;

fn main() -> liesym::Result<()> {
    let (ctx, sys) = fixtures::sphere_with_context();
    let mut candidates: Vec<(String, _)> = fixtures::sphere_generators(&sys)
        .into_iter()
        .enumerate()
        .map(|(i, g)| (format!("X{i}"), g))
        .collect();
    candidates.push((
        "T".into(),
        fixtures::generator(&ctx, &sys, ["0", "theta", "0"]),
    ));
    candidates.push((
        "Q".into(),
        fixtures::generator(&ctx, &sys, ["s^2", "0", "0"]),
    ));
    for (name, g) in &candidates {
        let v = verify_generator(g, &sys)?;
        let sampled = sample_residuals(g, &sys, 7, 25)?;
        let verdict = if v.passed() {
            "symmetry"
        } else {
            "not a symmetry"
        };
        println!("{name} = {g}: {verdict} (sampled max {sampled:.1e})");
        for c in &v.residuals {
            println!("  {c}");
        }
    }
    Ok(())
}
