//! Second prolongations of the five sphere symmetries.

use liesym::fixtures;
use liesym::prolong::prolong2;
use liesym::symexpr::Expr;

fn main() -> liesym::Result<()> {
    let sys = fixtures::sphere_system();
    let deps = &sys.coords().dependents;
    for (i, g) in fixtures::sphere_generators(&sys).iter().enumerate() {
        let pg = prolong2(g, &sys)?;
        println!("X{i} = {g}");
        for (x, e) in deps.iter().zip(&pg.first) {
            println!("  D[{}] : {e}", Expr::atom(&x.jet(1)));
        }
        for (x, e) in deps.iter().zip(&pg.second) {
            println!("  D[{}] : {e}", Expr::atom(&x.jet(2)));
        }
    }
    Ok(())
}
