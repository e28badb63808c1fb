//! `.lsym` problem files.
//!
//! ```text
//! # comments run to the end of the line; statements end with `;`
//! indep s;
//! dep theta, phi;
//! angular theta, phi;
//! param a;
//! func f(theta), g(phi);
//! metric 1, 0, sin(theta)^2;          # g11, g12, g22
//! ode theta = sin(theta)*cos(theta)*d(phi)^2;   # instead of a metric
//! perturb first f, g;                 # or: perturb second k, h;  or: perturb 1, 0;
//! gen X0 = D[s];
//! ansatz standard;                    # standard | extended | poly N
//! ```

use std::path::Path;

use crate::approx::{PerturbationSpec, Vocabulary};
use crate::geom::{geodesic_system, Metric2};
use crate::jet::{Coordinates, OdeSystem};
use crate::prolong::Generator;
use crate::symexpr::{collect, parse, Atom, Context, Expr, Func};
use crate::{Error, Result};

/// A parsed problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub path: String,
    pub context: Context,
    /// Carries the perturbation when one is declared.
    pub system: OdeSystem,
    pub metric: Option<Metric2>,
    pub perturbation: Option<PerturbationSpec>,
    pub generators: Vec<(String, Generator)>,
    pub vocabulary: Vocabulary,
}

impl Problem {
    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
    }

    /// A declared generator, or an inline `... D[x] ...` expression.
    pub fn resolve_generator(&self, spec: &str) -> Result<Generator> {
        if let Some(g) = self.generator(spec) {
            return Ok(g.clone());
        }
        if spec.contains("D[") {
            return parse_generator(spec, &self.context, self.system.coords());
        }
        Err(Error::Declaration(format!("no generator named `{spec}`")))
    }
}

struct Statement {
    line: usize,
    keyword: String,
    body: String,
}

/// Statements with their starting line; `Err(line)` for trailing text with
/// no closing `;`.
fn statements(src: &str) -> std::result::Result<Vec<Statement>, usize> {
    let mut out = Vec::new();
    let mut buf = String::new();
    let mut start: Option<usize> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for ch in line.chars() {
            if ch == ';' {
                let text = std::mem::take(&mut buf);
                let text = text.trim();
                if !text.is_empty() {
                    let (kw, body) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
                    out.push(Statement {
                        line: start.unwrap_or(i + 1),
                        keyword: kw.to_string(),
                        body: body.trim().to_string(),
                    });
                }
                start = None;
            } else {
                if start.is_none() && !ch.is_whitespace() {
                    start = Some(i + 1);
                }
                buf.push(ch);
            }
        }
        buf.push(' ');
    }
    match start {
        Some(line) => Err(line),
        None => Ok(out),
    }
}

/// Split on commas outside brackets.
fn split_top(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

fn placeholder(x: &Atom) -> String {
    format!("__D_{}", x.name())
}

/// Parse `sum c_i * D[x_i]` into a generator.
pub fn parse_generator(text: &str, ctx: &Context, coords: &Coordinates) -> Result<Generator> {
    let mut local = ctx.clone();
    let vars: Vec<Atom> = std::iter::once(coords.independent.clone())
        .chain(coords.dependents.iter().cloned())
        .collect();
    let mut keys = Vec::new();
    let mut src = text.to_string();
    for x in &vars {
        keys.push(local.parameter(&placeholder(x))?);
        src = src.replace(&format!("D[{}]", x.name()), &placeholder(x));
    }
    if let Some(i) = src.find("D[") {
        return Err(Error::InvalidGenerator(format!(
            "unknown direction `{}`",
            src[i..].split(']').next().unwrap_or("D[")
        )));
    }
    let e = parse(&src, &local)?;
    let by_key = collect(&e, &keys)
        .map_err(|_| Error::InvalidGenerator(format!("`{text}` is not linear in D[...]")))?;
    let mut comps = vec![Expr::zero(); vars.len()];
    for (key, coeff) in by_key {
        match key.0.iter().position(|&k| k == 1) {
            Some(i) if key.degree() == 1 => comps[i] = coeff,
            _ => {
                return Err(Error::InvalidGenerator(format!(
                    "`{text}` is not linear in D[...]"
                )))
            }
        }
    }
    Generator::from_components(coords.clone(), comps)
}

/// Read and parse a problem file.
pub fn load_problem(path: &Path) -> Result<Problem> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Dsl {
        file: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })?;
    parse_problem(&src, &path.display().to_string())
}

pub fn parse_problem(src: &str, file: &str) -> Result<Problem> {
    let at = |line: usize| {
        move |e: Error| Error::Dsl {
            file: file.to_string(),
            line,
            msg: e.to_string(),
        }
    };
    let fail = |line: usize, msg: String| Error::Dsl {
        file: file.to_string(),
        line,
        msg,
    };
    let stmts = statements(src).map_err(|l| fail(l, "missing `;` at end of statement".into()))?;

    let mut indep: Option<(usize, String)> = None;
    let mut deps: Vec<(usize, String)> = Vec::new();
    let mut angular: Vec<(usize, String)> = Vec::new();
    let mut params: Vec<(usize, String)> = Vec::new();
    for s in &stmts {
        match s.keyword.as_str() {
            "indep" => {
                if indep.is_some() {
                    return Err(fail(s.line, "more than one `indep` statement".into()));
                }
                indep = Some((s.line, s.body.clone()));
            }
            "dep" => deps.extend(split_top(&s.body).into_iter().map(|n| (s.line, n))),
            "angular" => angular.extend(split_top(&s.body).into_iter().map(|n| (s.line, n))),
            "param" => params.extend(split_top(&s.body).into_iter().map(|n| (s.line, n))),
            "func" | "metric" | "ode" | "perturb" | "gen" | "ansatz" => {}
            other => return Err(fail(s.line, format!("unknown statement `{other}`"))),
        }
    }
    let mut ctx = Context::new();
    let Some((line, name)) = indep else {
        return Err(fail(
            1,
            "no independent variable declared (`indep s;`)".into(),
        ));
    };
    ctx.independent(&name).map_err(at(line))?;
    if deps.is_empty() {
        return Err(fail(
            line,
            "no dependent variables declared (`dep x, y;`)".into(),
        ));
    }
    for (line, a) in &angular {
        if !deps.iter().any(|(_, d)| d == a) {
            return Err(fail(
                *line,
                format!("`{a}` is marked angular but is not a dependent variable"),
            ));
        }
    }
    for (line, d) in &deps {
        ctx.dependent(d, angular.iter().any(|(_, a)| a == d))
            .map_err(at(*line))?;
    }
    for (line, p) in &params {
        ctx.parameter(p).map_err(at(*line))?;
    }
    for s in stmts.iter().filter(|s| s.keyword == "func") {
        for decl in split_top(&s.body) {
            let (name, args) = decl
                .strip_suffix(')')
                .and_then(|d| d.split_once('('))
                .ok_or_else(|| fail(s.line, format!("expected `name(args)`, found `{decl}`")))?;
            let args: Vec<String> = split_top(args);
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            ctx.function(name.trim(), &refs).map_err(at(s.line))?;
        }
    }

    let coords = Coordinates::new(
        ctx.independent_atom().expect("declared").clone(),
        ctx.dependent_atoms().to_vec(),
    );
    let metric_stmts: Vec<&Statement> = stmts.iter().filter(|s| s.keyword == "metric").collect();
    let ode_stmts: Vec<&Statement> = stmts.iter().filter(|s| s.keyword == "ode").collect();
    let (system, metric) = match (metric_stmts.as_slice(), ode_stmts.is_empty()) {
        ([m], true) => {
            if coords.dim() != 2 {
                return Err(fail(
                    m.line,
                    "a metric needs exactly two dependent variables".into(),
                ));
            }
            let parts = split_top(&m.body);
            if parts.len() != 3 {
                return Err(fail(m.line, "expected `metric g11, g12, g22;`".into()));
            }
            let g: Vec<Expr> = parts
                .iter()
                .map(|p| parse(p, &ctx))
                .collect::<Result<_>>()
                .map_err(at(m.line))?;
            let c = [coords.dependents[0].clone(), coords.dependents[1].clone()];
            let metric = Metric2::new(
                c,
                [[g[0].clone(), g[1].clone()], [g[1].clone(), g[2].clone()]],
            )
            .map_err(at(m.line))?;
            let sys = geodesic_system(&metric, &coords.independent).map_err(at(m.line))?;
            (sys, Some(metric))
        }
        ([], false) => {
            let mut rhs: Vec<Option<Expr>> = vec![None; coords.dim()];
            for s in &ode_stmts {
                let (lhs, r) = s
                    .body
                    .split_once('=')
                    .ok_or_else(|| fail(s.line, "expected `ode x = rhs;`".into()))?;
                let lhs = lhs.trim();
                let i = coords
                    .dependents
                    .iter()
                    .position(|d| d.name() == lhs)
                    .ok_or_else(|| fail(s.line, format!("`{lhs}` is not a dependent variable")))?;
                if rhs[i].is_some() {
                    return Err(fail(s.line, format!("second equation for `{lhs}`")));
                }
                rhs[i] = Some(parse(r.trim(), &ctx).map_err(at(s.line))?);
            }
            let line = ode_stmts[0].line;
            let rhs = rhs
                .into_iter()
                .zip(&coords.dependents)
                .map(|(r, d)| {
                    r.ok_or_else(|| fail(line, format!("no equation for `{}`", d.name())))
                })
                .collect::<Result<Vec<_>>>()?;
            (OdeSystem::new(coords.clone(), rhs).map_err(at(line))?, None)
        }
        ([], true) => return Err(fail(line, "no `metric` or `ode` block".into())),
        _ => {
            let l = metric_stmts
                .first()
                .or(ode_stmts.first())
                .map_or(line, |s| s.line);
            return Err(fail(
                l,
                "give exactly one `metric` statement or `ode` equations, not both".into(),
            ));
        }
    };

    let mut perturbation = None;
    let mut perturb_line = 0;
    for s in stmts.iter().filter(|s| s.keyword == "perturb") {
        perturb_line = s.line;
        if perturbation.is_some() {
            return Err(fail(s.line, "more than one `perturb` statement".into()));
        }
        let (mode, rest) = s
            .body
            .split_once(char::is_whitespace)
            .unwrap_or((&s.body, ""));
        let spec = match mode {
            "first" => {
                let funcs = split_top(rest)
                    .iter()
                    .map(|n| {
                        let n = n.split('(').next().unwrap_or("").trim();
                        ctx.func(n).cloned().ok_or_else(|| {
                            fail(s.line, format!("`{n}` is not a declared function"))
                        })
                    })
                    .collect::<Result<Vec<Func>>>()?;
                PerturbationSpec::Functions(funcs)
            }
            "second" => {
                let given = split_top(rest);
                let n: Vec<&str> = if given.is_empty() {
                    vec!["k", "h"]
                } else {
                    given.iter().map(String::as_str).collect()
                };
                PerturbationSpec::quadratic(&coords, &n).map_err(at(s.line))?
            }
            _ => PerturbationSpec::Explicit(
                split_top(&s.body)
                    .iter()
                    .map(|p| parse(p, &ctx))
                    .collect::<Result<_>>()
                    .map_err(at(s.line))?,
            ),
        };
        if let PerturbationSpec::Quadratic(cs) = &spec {
            for c in cs.iter().flatten() {
                if ctx.atom(c.name()).is_some() {
                    return Err(fail(s.line, format!("`{}` is already declared", c.name())));
                }
            }
        }
        if spec.terms(&coords).len() != coords.dim() {
            return Err(fail(
                s.line,
                format!("expected {} perturbation terms", coords.dim()),
            ));
        }
        perturbation = Some(spec);
    }
    let system = match &perturbation {
        Some(p) => p.apply(&system).map_err(at(perturb_line))?,
        None => system,
    };

    let mut generators: Vec<(String, Generator)> = Vec::new();
    for s in stmts.iter().filter(|s| s.keyword == "gen") {
        let (name, body) = s
            .body
            .split_once('=')
            .ok_or_else(|| fail(s.line, "expected `gen NAME = ...;`".into()))?;
        let name = name.trim().to_string();
        if generators.iter().any(|(n, _)| *n == name) {
            return Err(fail(s.line, format!("generator `{name}` defined twice")));
        }
        let g = parse_generator(body.trim(), &ctx, &coords).map_err(at(s.line))?;
        generators.push((name, g));
    }

    let mut vocabulary = Vocabulary::Standard;
    for s in stmts.iter().filter(|s| s.keyword == "ansatz") {
        vocabulary = s.body.parse().map_err(at(s.line))?;
    }

    Ok(Problem {
        path: file.to_string(),
        context: ctx,
        system,
        metric,
        perturbation,
        generators,
        vocabulary,
    })
}
