//! The `liesym` command line: `determine`, `verify`, `prolong`, `approx`.
//!
//! Exit codes: 0 on success (including a pipeline that cannot proceed),
//! 1 when a generator fails verification, 2 on bad input or usage.

pub mod dsl;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::approx::{
    exact_algebra, first_approach_all, second_approach_pipeline, ApproxReport, ConstraintJson,
    Direction,
};
use crate::determine::{
    determining_system, sample_residuals, verify_generator, Constraint, DeterminingSystem,
};
use crate::prolong::{prolong2, Generator};
use crate::symexpr::{Expr, ExprJson, PrintMode};
use crate::{Error, Result};

pub use dsl::{load_problem, parse_generator, parse_problem, Problem};

/// Seed used for the numeric cross-check unless `LIESYM_SEED` is set.
pub const DEFAULT_SEED: u64 = 20_240_117;
const SAMPLE_POINTS: usize = 25;
const SAMPLE_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "liesym",
    version,
    about = "Lie point and approximate symmetries of second-order ODE systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the determining system of the exact problem.
    Determine {
        file: PathBuf,
        #[arg(long, default_value = "plain", value_parser = parse_format)]
        format: PrintMode,
    },
    /// Check that generators are exact symmetries.
    Verify {
        file: PathBuf,
        /// Generator names or inline expressions such as `s*D[s]`.
        #[arg(long = "gen", required = true, num_args = 1.., value_delimiter = ',')]
        gens: Vec<String>,
        #[arg(long, default_value = "plain", value_parser = parse_format)]
        format: PrintMode,
    },
    /// Print the second prolongation of a generator.
    Prolong {
        file: PathBuf,
        #[arg(long = "gen")]
        gen: String,
        #[arg(long, default_value = "plain", value_parser = parse_format)]
        format: PrintMode,
    },
    /// Approximate symmetries of the perturbed problem.
    Approx {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "first")]
        mode: Mode,
        /// A generator name, an inline generator, or `generic`.
        #[arg(long, default_value = "generic")]
        seed: String,
        #[arg(long, default_value = "plain", value_parser = parse_format)]
        format: PrintMode,
        /// Also list the first-order determining system.
        #[arg(long)]
        show_system: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    First,
    Second,
}

fn parse_format(s: &str) -> std::result::Result<PrintMode, String> {
    s.parse()
}

/// Text to print and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

/// Seed for random sampling, from `LIESYM_SEED` when it parses.
pub fn sample_seed() -> u64 {
    std::env::var("LIESYM_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Determine { file, format } => cmd_determine(&load_problem(file)?, *format),
        Command::Verify { file, gens, format } => {
            cmd_verify(&load_problem(file)?, gens, *format, sample_seed())
        }
        Command::Prolong { file, gen, format } => cmd_prolong(&load_problem(file)?, gen, *format),
        Command::Approx {
            file,
            mode,
            seed,
            format,
            show_system,
        } => cmd_approx(&load_problem(file)?, *mode, seed, *format, *show_system),
    }
}

/// Parse `args` (program name first), run, print, and return the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn constraints_json(cs: &[Constraint]) -> Vec<ConstraintJson> {
    cs.iter()
        .map(|c| ConstraintJson {
            equation: c.equation,
            key: c.key.0.clone(),
            coefficient: c.coefficient.to_json(),
            duplicate: c.duplicate_of.is_some(),
        })
        .collect()
}

fn latex_key(key: &[u32]) -> String {
    let parts: Vec<String> = key.iter().map(u32::to_string).collect();
    format!("[{}]", parts.join("\\ "))
}

fn latex_constraints(ds: &DeterminingSystem) -> String {
    let mut out = String::from("\\begin{align*}\n");
    for c in &ds.constraints {
        let _ = writeln!(
            out,
            "  &E_{{{}}}\\,{}: && {} = 0 \\\\",
            c.equation,
            latex_key(&c.key.0),
            c.coefficient.to_latex()
        );
    }
    out.push_str("\\end{align*}\n");
    out
}

fn latex_generator(g: &Generator) -> String {
    let vars = std::iter::once(&g.coords().independent).chain(&g.coords().dependents);
    let parts: Vec<String> = g
        .components()
        .iter()
        .zip(vars)
        .filter(|(c, _)| !c.is_zero_literal())
        .map(|(c, v)| {
            let shown = match c.node() {
                crate::symexpr::Node::Add(_) => format!("\\left({}\\right)", c.to_latex()),
                _ => c.to_latex(),
            };
            format!("{shown}\\,\\partial_{{{}}}", Expr::atom(v).to_latex())
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn cmd_determine(p: &Problem, format: PrintMode) -> Result<Outcome> {
    let ds = determining_system(&p.system.unperturbed())?;
    let text = match format {
        PrintMode::Plain => ds.listing(),
        PrintMode::Latex => latex_constraints(&ds),
        PrintMode::Json => to_json(&constraints_json(&ds.constraints)),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct VerifyJson {
    name: String,
    generator: String,
    symmetry: bool,
    residuals: Vec<ConstraintJson>,
    sampled_max: f64,
    seed: u64,
}

/// Symbolic verification of each generator with a numeric cross-check at
/// random points. Exit code 1 when any generator fails or the two disagree.
pub fn cmd_verify(p: &Problem, gens: &[String], format: PrintMode, seed: u64) -> Result<Outcome> {
    if gens.is_empty() {
        return Err(Error::Declaration(
            "verify needs at least one generator".into(),
        ));
    }
    let sys = p.system.unperturbed();
    let mut text = String::new();
    let mut json = Vec::new();
    let mut code = 0;
    if format == PrintMode::Latex {
        text.push_str("\\begin{align*}\n");
    }
    for name in gens {
        let g = p.resolve_generator(name)?;
        let v = verify_generator(&g, &sys)?;
        let sampled = sample_residuals(&g, &sys, seed, SAMPLE_POINTS)?;
        let numeric_ok = sampled < SAMPLE_TOL;
        if !v.passed() || numeric_ok != v.passed() {
            code = 1;
        }
        match format {
            PrintMode::Plain => {
                let verdict = if v.passed() {
                    "symmetry"
                } else {
                    "not a symmetry"
                };
                let _ = writeln!(text, "{name} = {g}: {verdict}");
                for c in &v.residuals {
                    let _ = writeln!(text, "  {c}");
                }
                let _ = writeln!(
                    text,
                    "  sampled max |residual| = {sampled:.3e} at {SAMPLE_POINTS} points (seed {seed})"
                );
                if numeric_ok != v.passed() {
                    text.push_str("  numeric cross-check disagrees with the symbolic result\n");
                }
            }
            PrintMode::Latex => {
                let verdict = if v.passed() {
                    "symmetry"
                } else {
                    "not a symmetry"
                };
                let _ = writeln!(
                    text,
                    "  &{} && \\text{{{verdict}}} \\\\",
                    latex_generator(&g)
                );
                for c in &v.residuals {
                    let _ = writeln!(
                        text,
                        "  &\\quad E_{{{}}}\\,{}: && {} = 0 \\\\",
                        c.equation,
                        latex_key(&c.key.0),
                        c.coefficient.to_latex()
                    );
                }
            }
            PrintMode::Json => json.push(VerifyJson {
                name: name.clone(),
                generator: g.to_string(),
                symmetry: v.passed(),
                residuals: constraints_json(&v.residuals),
                sampled_max: sampled,
                seed,
            }),
        }
    }
    match format {
        PrintMode::Latex => text.push_str("\\end{align*}\n"),
        PrintMode::Json => text = to_json(&json),
        PrintMode::Plain => {}
    }
    Ok(Outcome { text, code })
}

#[derive(Serialize)]
struct ProlongJson {
    generator: String,
    components: Vec<ExprJson>,
    first: Vec<ExprJson>,
    second: Vec<ExprJson>,
}

pub fn cmd_prolong(p: &Problem, gen: &str, format: PrintMode) -> Result<Outcome> {
    let g = p.resolve_generator(gen)?;
    let sys = p.system.unperturbed();
    let pg = prolong2(&g, &sys)?;
    let deps = &sys.coords().dependents;
    let text = match format {
        PrintMode::Plain => {
            let mut out = format!("{gen} = {g}\n");
            for (x, e) in deps.iter().zip(&pg.first) {
                let _ = writeln!(out, "D[{}] : {e}", Expr::atom(&x.jet(1)));
            }
            for (x, e) in deps.iter().zip(&pg.second) {
                let _ = writeln!(out, "D[{}] : {e}", Expr::atom(&x.jet(2)));
            }
            out
        }
        PrintMode::Latex => {
            let mut out = format!("\\begin{{align*}}\n  X &= {} \\\\\n", latex_generator(&g));
            let slots = deps
                .iter()
                .map(|x| x.jet(1))
                .zip(&pg.first)
                .chain(deps.iter().map(|x| x.jet(2)).zip(&pg.second));
            for (v, e) in slots {
                let _ = writeln!(
                    out,
                    "  &\\partial_{{{}}}: && {} \\\\",
                    Expr::atom(&v).to_latex(),
                    e.to_latex()
                );
            }
            out.push_str("\\end{align*}\n");
            out
        }
        PrintMode::Json => to_json(&ProlongJson {
            generator: g.to_string(),
            components: g.components().iter().map(Expr::to_json).collect(),
            first: pg.first.iter().map(Expr::to_json).collect(),
            second: pg.second.iter().map(Expr::to_json).collect(),
        }),
    };
    Ok(Outcome::ok(text))
}

pub fn cmd_approx(
    p: &Problem,
    mode: Mode,
    seed: &str,
    format: PrintMode,
    show_system: bool,
) -> Result<Outcome> {
    if p.system.perturbation().is_none() {
        return Err(Error::Declaration(format!(
            "{}: no `perturb` statement",
            p.path
        )));
    }
    let generic = seed == "generic";
    let reports: Vec<ApproxReport> = match mode {
        Mode::First => {
            let algebra = exact_algebra(&p.system.unperturbed(), &p.vocabulary)?;
            let seeds: Vec<(String, Generator)> = if !generic {
                vec![(seed.to_string(), p.resolve_generator(seed)?)]
            } else if p.generators.is_empty() {
                algebra
                    .iter()
                    .enumerate()
                    .map(|(j, g)| (format!("b{j}"), g.clone()))
                    .collect()
            } else {
                p.generators.clone()
            };
            first_approach_all(&seeds, &p.system, &p.vocabulary, &algebra)?
        }
        Mode::Second => {
            let named = if generic {
                None
            } else {
                Some(p.resolve_generator(seed)?)
            };
            let r = second_approach_pipeline(
                &p.system,
                &p.vocabulary,
                named.as_ref().map(|g| (seed, g)),
            )?;
            vec![r]
        }
    };
    let text = match format {
        PrintMode::Plain => reports
            .iter()
            .map(|r| plain_report(r, show_system))
            .collect::<Vec<_>>()
            .join("\n"),
        PrintMode::Latex => reports
            .iter()
            .map(|r| latex_report(r, show_system))
            .collect::<Vec<_>>()
            .join("\n"),
        PrintMode::Json => {
            let js: Vec<_> = reports.iter().map(ApproxReport::to_json).collect();
            if js.len() == 1 {
                to_json(&js[0])
            } else {
                to_json(&js)
            }
        }
    };
    Ok(Outcome::ok(text))
}

fn names(atoms: &[crate::Atom]) -> String {
    if atoms.is_empty() {
        "none".into()
    } else {
        atoms.iter().map(|a| a.name()).collect::<Vec<_>>().join(" ")
    }
}

fn plain_direction(d: &Direction) -> String {
    let mut parts: Vec<String> = d
        .generators
        .iter()
        .map(|(l, g)| format!("{l}: {g}"))
        .collect();
    parts.extend(
        d.constants
            .iter()
            .map(|(a, q)| format!("{} = {q}", a.name())),
    );
    if parts.is_empty() {
        parts.push("0".into());
    }
    format!("  {} {}  {}\n", d.label, d.category, parts.join("; "))
}

fn plain_report(r: &ApproxReport, show_system: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed: {}", r.seed);
    let _ = writeln!(out, "status: {}", r.status);
    let h: Vec<String> = r.h.iter().map(Expr::to_string).collect();
    let _ = writeln!(out, "H: ({})", h.join(", "));
    let _ = writeln!(
        out,
        "first-order system: {} constraints ({} distinct)",
        r.system.len(),
        r.system.distinct().count()
    );
    if show_system {
        for line in r.system.listing().lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    if let Some(z) = &r.zeroth {
        let _ = writeln!(out, "exact order: {} directions", z.dimension());
    }
    if let Some(sol) = &r.solution {
        let _ = writeln!(
            out,
            "unknown constants: {}, equations: {}, rank: {}, directions: {}",
            sol.unknowns.len(),
            sol.equations,
            sol.rank,
            sol.dimension()
        );
        let _ = writeln!(out, "forced to zero: {}", names(&r.forced_constants()));
        let _ = writeln!(
            out,
            "surviving perturbation constants: {}",
            names(&r.surviving_constants())
        );
        out.push_str("directions:\n");
        for d in &r.triviality.directions {
            out.push_str(&plain_direction(d));
        }
    }
    let _ = writeln!(out, "verdict: {}", r.verdict());
    out
}

fn latex_names(atoms: &[crate::Atom]) -> String {
    if atoms.is_empty() {
        "\\varnothing".into()
    } else {
        atoms
            .iter()
            .map(|a| Expr::atom(a).to_latex())
            .collect::<Vec<_>>()
            .join(",\\ ")
    }
}

fn latex_report(r: &ApproxReport, show_system: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% seed {} ({})", r.seed, r.status);
    let h: Vec<String> = r.h.iter().map(Expr::to_latex).collect();
    let _ = writeln!(out, "H = \\left({}\\right)", h.join(",\\ "));
    if show_system {
        out.push_str(&latex_constraints(&r.system));
    }
    if r.solution.is_some() {
        let _ = writeln!(
            out,
            "\\text{{forced to zero: }} {}",
            latex_names(&r.forced_constants())
        );
        let _ = writeln!(
            out,
            "\\text{{surviving: }} {}",
            latex_names(&r.surviving_constants())
        );
        out.push_str("\\begin{align*}\n");
        for d in &r.triviality.directions {
            let gens: Vec<String> = d
                .generators
                .iter()
                .map(|(l, g)| format!("\\text{{{l}}}: {}", latex_generator(g)))
                .collect();
            let _ = writeln!(
                out,
                "  &\\text{{{} {}}} && {} \\\\",
                d.label,
                d.category,
                gens.join(";\\ ")
            );
        }
        out.push_str("\\end{align*}\n");
    }
    let _ = writeln!(out, "% {}", r.verdict());
    out
}
