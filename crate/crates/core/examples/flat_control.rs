//! Free particle pushed by a constant force: the approximate-symmetry
//! pipeline does find something new here, unlike on the sphere.

use liesym::approx::{exact_algebra, first_approach_pipeline, Category, Vocabulary};
use liesym::fixtures;

fn main() -> liesym::Result<()> {
    let (ctx, sys) = fixtures::flat_perturbed();
    let vocab = Vocabulary::Polynomial(2);
    let algebra = exact_algebra(&sys.unperturbed(), &vocab)?;
    println!(
        "exact algebra of x'' = y'' = 0: {} generators",
        algebra.len()
    );
    let seed = fixtures::generator(&ctx, &sys, ["s", "0", "0"]);
    let r = first_approach_pipeline("S", &seed, &sys, &vocab, &algebra)?;
    let h: Vec<String> = r.h.iter().map(|e| e.to_string()).collect();
    println!("seed {seed}, H = ({})", h.join(", "));
    for c in [Category::Exact, Category::Trivial, Category::New] {
        println!("{c}: {}", r.triviality.count(c));
    }
    for d in r
        .triviality
        .directions
        .iter()
        .filter(|d| d.category == Category::New)
    {
        for (_, g) in &d.generators {
            println!("new first-order correction: {g}");
        }
    }
    println!("{}", r.verdict());
    Ok(())
}
