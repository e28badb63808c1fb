//! Print the determining system of the sphere geodesic equations.

use liesym::determine::determining_system;
use liesym::fixtures;

fn main() -> liesym::Result<()> {
    let sys = fixtures::sphere_system();
    let ds = determining_system(&sys)?;
    print!("{}", ds.listing());
    println!("{} slots, {} distinct", ds.len(), ds.distinct().count());
    Ok(())
}
