//! Parse, simplify, differentiate and print expressions in every format.

use liesym::symexpr::{diff, is_zero, parse, Context, PrintMode};

fn main() -> liesym::Result<()> {
    let mut ctx = Context::new();
    ctx.independent("s")?;
    ctx.dependent("theta", true)?;
    ctx.dependent("phi", true)?;
    ctx.parameter("a")?;
    ctx.function("f", &["theta", "phi"])?;
    let theta = ctx.atom("theta").unwrap().clone();

    for text in [
        "sin(theta)^2 + cos(theta)^2",
        "cot(theta)*sin(theta) - cos(theta)",
        "sin(2*theta) - 2*sin(theta)*cos(theta)",
        "(a*s + 1)^2/(s + 1) - a^2*s^2/(s + 1)",
        "f[theta]*d(theta) + 1/2*dd(phi)*csc(theta)^2",
    ] {
        let e = parse(text, &ctx)?;
        let simple = e.simplify()?;
        println!("{text}");
        println!("  simplified: {simple}  (zero: {})", is_zero(&e));
        println!("  d/dtheta:   {}", diff(&e, &theta).simplify()?);
        println!("  latex:      {}", simple.render(PrintMode::Latex));
    }
    let e = parse("a*sin(theta)^2 - 1/3", &ctx)?;
    println!("json of {e}:\n{}", e.render(PrintMode::Json));
    match parse("sin(theta", &ctx) {
        Err(err) => println!("error: {err}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
