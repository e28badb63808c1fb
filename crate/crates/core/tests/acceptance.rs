//! Acceptance suite. Runs as a plain program and prints one PASS/FAIL line
//! per criterion. Criterion 7 is expected to fail: see `second_approach`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use liesym::approx::{
    approx_determining_system, auxiliary_h, epsilon_separate, first_approach_pipeline, in_span,
    second_approach_pipeline, Category, Status,
};
use liesym::determine::{determining_system, normalize_constraint, verify_generator};
use liesym::geom::{conserves_line_element, geodesic_system, Metric2};
use liesym::prolong::{lie_bracket, prolong2, Generator};
use liesym::symexpr::{diff, eval, is_zero, parse, substitute, Atom, Bindings, Context, Expr};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{finite_difference, problem, Domain};

type Outcome = Result<String, String>;

struct Row {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: f64) -> Result<(), String> {
    let s = t.elapsed().as_secs_f64();
    check(s < limit, || format!("took {s:.2} s, limit {limit} s"))
}

fn err(e: liesym::Error) -> String {
    e.to_string()
}

/// Sphere context plus whatever extra parameters a check needs.
fn context(params: &[&str]) -> Context {
    let mut c = Domain::sphere().ctx;
    for p in params {
        c.parameter(p).unwrap();
    }
    c
}

fn p(text: &str, c: &Context) -> Expr {
    parse(text, c).unwrap_or_else(|e| panic!("`{text}`: {e}"))
}

fn geodesics() -> Outcome {
    let t = Instant::now();
    let c = context(&[]);
    let coords = [
        c.atom("theta").unwrap().clone(),
        c.atom("phi").unwrap().clone(),
    ];
    let m = Metric2::diagonal(coords, Expr::one(), p("sin(theta)^2", &c)).map_err(err)?;
    let sys = geodesic_system(&m, c.atom("s").unwrap()).map_err(err)?;
    let expected = [
        p("sin(theta)*cos(theta)*d(phi)^2", &c),
        p("-2*cot(theta)*d(theta)*d(phi)", &c),
    ];
    for (got, want) in sys.rhs().iter().zip(&expected) {
        check(is_zero(&(got - want)), || format!("{got} != {want}"))?;
    }
    within(t, 1.0)?;
    Ok(format!(
        "theta'' = {}, phi'' = {}",
        sys.rhs()[0],
        sys.rhs()[1]
    ))
}

struct GoldenLine {
    equation: usize,
    key: Vec<u32>,
    text: String,
}

fn golden_lines() -> Vec<GoldenLine> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/sphere_determining.txt"
    );
    std::fs::read_to_string(path)
        .expect("golden file")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (head, body) = l.split_once(" : ").expect("`head : body`");
            let (eq, key) = head.split_once(' ').unwrap();
            let key = key.trim_matches(|c| c == '[' || c == ']');
            GoldenLine {
                equation: eq.trim_start_matches("eq").parse().unwrap(),
                key: key.split_whitespace().map(|k| k.parse().unwrap()).collect(),
                text: body.trim_end_matches("= 0").trim().to_string(),
            }
        })
        .collect()
}

fn determining_regression() -> Outcome {
    let t = Instant::now();
    let pr = problem("sphere.lsym");
    let ds = determining_system(&pr.system).map_err(err)?;
    let mut c = pr.context.clone();
    for f in &ds.unknowns {
        c.add_function(f).map_err(err)?;
    }
    let golden = golden_lines();
    check(golden.len() == 16, || {
        format!("golden file has {} lines", golden.len())
    })?;
    let mut listed = Vec::new();
    for g in &golden {
        let want = normalize_constraint(&p(&g.text, &c)).map_err(err)?;
        let got = ds
            .get(g.equation, &g.key)
            .ok_or_else(|| format!("no slot eq{} {:?}", g.equation, g.key))?;
        check(is_zero(&(&got.coefficient - &want)), || {
            format!(
                "eq{} {:?}: {} vs {}",
                g.equation, g.key, got.coefficient, want
            )
        })?;
        listed.push(want);
    }
    let mut extra = 0;
    for con in &ds.constraints {
        if golden
            .iter()
            .any(|g| g.equation == con.equation && g.key == con.key.0)
        {
            continue;
        }
        extra += 1;
        check(
            listed.iter().any(|w| is_zero(&(&con.coefficient - w))),
            || format!("unlisted slot {con} is new"),
        )?;
    }
    let distinct: BTreeSet<String> = listed.iter().map(|e| e.to_string()).collect();
    check(distinct.len() == ds.distinct().count(), || {
        format!(
            "{} distinct golden vs {} computed",
            distinct.len(),
            ds.distinct().count()
        )
    })?;
    within(t, 5.0)?;
    Ok(format!(
        "16 golden constraints matched, {extra} further slots repeat them, {} distinct",
        distinct.len()
    ))
}

fn exact_verification() -> Outcome {
    let t = Instant::now();
    let pr = problem("sphere.lsym");
    for name in ["X0", "X1", "X2", "X3", "X4"] {
        let v = verify_generator(pr.generator(name).unwrap(), &pr.system).map_err(err)?;
        check(v.passed(), || {
            format!("{name} leaves {} residual slots", v.residuals.len())
        })?;
    }
    let v = verify_generator(pr.generator("T").unwrap(), &pr.system).map_err(err)?;
    check(!v.passed(), || "theta*D[theta] passed".into())?;
    within(t, 5.0)?;
    Ok(format!(
        "5 generators pass, theta*D[theta] fails in {} slots",
        v.residuals.len()
    ))
}

fn prolongation() -> Outcome {
    let pr = problem("sphere.lsym");
    let c = &pr.context;
    let cases: [(&str, [&str; 4]); 3] = [
        ("X1", ["-d(theta)", "-d(phi)", "-2*dd(theta)", "-2*dd(phi)"]),
        (
            "X3",
            [
                "-d(phi)*sin(phi)",
                "d(theta)*sin(phi)*csc(theta)^2 - d(phi)*cot(theta)*cos(phi)",
                "-(d(phi)^2*cos(phi) + dd(phi)*sin(phi))",
                "-2*d(theta)^2*sin(phi)*csc(theta)^2*cot(theta) + d(phi)^2*cot(theta)*sin(phi) \
                 + 2*d(theta)*d(phi)*cos(phi)*csc(theta)^2 + dd(theta)*csc(theta)^2*sin(phi) \
                 - dd(phi)*cot(theta)*cos(phi)",
            ],
        ),
        (
            "X4",
            [
                "d(phi)*cos(phi)",
                "-(d(theta)*csc(theta)^2*cos(phi) + d(phi)*cot(theta)*sin(phi))",
                "dd(phi)*cos(phi) - d(phi)^2*sin(phi)",
                "2*d(theta)^2*csc(theta)^2*cot(theta)*cos(phi) - d(phi)^2*cot(theta)*cos(phi) \
                 + 2*d(theta)*d(phi)*csc(theta)^2*sin(phi) - dd(theta)*csc(theta)^2*cos(phi) \
                 - dd(phi)*cot(theta)*sin(phi)",
            ],
        ),
    ];
    let mut slowest = 0.0f64;
    for (name, want) in cases {
        let t = Instant::now();
        let pg = prolong2(pr.generator(name).unwrap(), &pr.system).map_err(err)?;
        let got = pg.first.iter().chain(&pg.second);
        for (i, (g, w)) in got.zip(want).enumerate() {
            let w = p(w, c);
            check(is_zero(&(g - &w)), || {
                format!("{name} slot {i}: {g} vs {w}")
            })?;
        }
        within(t, 1.0)?;
        slowest = slowest.max(t.elapsed().as_secs_f64());
    }
    Ok(format!("X1, X3, X4 match, slowest {:.0} ms", slowest * 1e3))
}

fn auxiliary_functions() -> Outcome {
    let pr = problem("sphere-first.lsym");
    let c = &pr.context;
    let h0 = auxiliary_h(pr.generator("X0").unwrap(), &pr.system).map_err(err)?;
    check(h0.iter().all(is_zero), || format!("H(X0) = {h0:?}"))?;
    let h1 = auxiliary_h(pr.generator("X1").unwrap(), &pr.system).map_err(err)?;
    let want = [p("2*f", c), p("2*g", c)];
    for (g, w) in h1.iter().zip(&want) {
        check(is_zero(&(g - w)), || format!("H(X1): {g} vs {w}"))?;
    }
    Ok(format!("H(X0) = (0, 0), H(X1) = ({}, {})", h1[0], h1[1]))
}

fn first_approach() -> Outcome {
    let t = Instant::now();
    let pr = problem("sphere-first.lsym");
    let algebra: Vec<Generator> = pr.generators.iter().map(|(_, g)| g.clone()).collect();
    let run = |name: &str| {
        first_approach_pipeline(
            name,
            pr.generator(name).unwrap(),
            &pr.system,
            &pr.vocabulary,
            &algebra,
        )
        .map_err(err)
    };
    let x0 = run("X0")?;
    check(x0.status == Status::CannotProceed, || {
        format!("X0: {}", x0.status)
    })?;
    let x1 = run("X1")?;
    // f = f0 + f1 theta is the paper's c theta + d
    for k in ["f0", "f1", "g0", "g1"] {
        check(x1.forced_zero(k), || format!("X1 leaves {k} free"))?;
    }
    check(!x1.new_symmetry(), || "X1 gives a new symmetry".into())?;
    for name in ["X2", "X3", "X4"] {
        let r = run(name)?;
        check(r.status == Status::Solved && !r.new_symmetry(), || {
            format!("{name}: {}", r.verdict())
        })?;
    }
    within(t, 30.0)?;
    Ok("X0 cannot proceed; X1 forces f = g = 0; X2, X3, X4 give nothing new".into())
}

/// Paper's generic exact symmetry with constants `c0..c4`.
fn generic_seed(c: &Context, sys: &liesym::jet::OdeSystem) -> Generator {
    let comps = [
        "c1*s + c0",
        "c3*cos(phi) + c4*sin(phi)",
        "cot(theta)*(c4*cos(phi) - c3*sin(phi)) + c2",
    ];
    let e = comps.iter().map(|s| p(s, c)).collect();
    Generator::from_components(sys.coords().clone(), e).unwrap()
}

struct SecondFindings {
    forced: Vec<String>,
    surviving: Vec<String>,
    new_directions: usize,
}

/// Everything the criterion states, with the k/h outcome returned rather
/// than asserted so the caller can report it.
fn second_approach_checks() -> Result<SecondFindings, String> {
    let t = Instant::now();
    let pr = problem("sphere-second.lsym");
    let sys = &pr.system;

    // eps^0 part equals the exact system once the unknowns are renamed
    let (e0, e1) = epsilon_separate(sys).map_err(err)?;
    let exact = determining_system(&sys.unperturbed()).map_err(err)?;
    let mut rename = Bindings::new();
    for (f, g) in e0.unknowns.iter().zip(&exact.unknowns) {
        rename = rename.func(f, g.call());
    }
    check(e0.len() == exact.len(), || {
        format!("{} vs {} slots", e0.len(), exact.len())
    })?;
    for (a, b) in e0.constraints.iter().zip(&exact.constraints) {
        let a2 = normalize_constraint(&substitute(&a.coefficient, &rename).map_err(err)?)
            .map_err(err)?;
        check(
            a.key == b.key && a.equation == b.equation && is_zero(&(&a2 - &b.coefficient)),
            || format!("eps^0 {a} vs {b}"),
        )?;
    }

    // first-order slot [0 0] of equation 1 with the generic seed substituted
    let mut c = context(&["c0", "c1", "c2", "c3", "c4"]);
    for k in pr.perturbation.as_ref().unwrap().constants() {
        c.parameter(k.name()).unwrap();
    }
    for f in e1.unknowns.iter() {
        c.add_function(f).map_err(err)?;
    }
    let seed = generic_seed(&c, sys);
    let mut bind = Bindings::new();
    for (f, comp) in e1.unknowns.iter().zip(seed.components()) {
        bind = bind.func(f, comp);
    }
    // A = c1, B, C = zeroth-order eta, D = B_phi, E = C_phi, F = C_theta
    let slots = [
        (
            1,
            "eta1_1[s,s] + 2*(k1 + k2*theta + k3*phi)*c1 \
             - (h1 + h2*theta + h3*phi)*(-c3*sin(phi) + c4*cos(phi)) \
             + k2*(c3*cos(phi) + c4*sin(phi)) \
             + k3*(cot(theta)*(c4*cos(phi) - c3*sin(phi)) + c2)",
        ),
        (
            2,
            "eta1_2[s,s] + (k1 + k2*theta + k3*phi)*csc(theta)^2*(c4*cos(phi) - c3*sin(phi)) \
             - (h1 + h2*theta + h3*phi)*(-cot(theta)*(c4*sin(phi) + c3*cos(phi)) - 2*c1) \
             + h2*(c3*cos(phi) + c4*sin(phi)) \
             + h3*(cot(theta)*(c4*cos(phi) - c3*sin(phi)) + c2)",
        ),
    ];
    for (eq, text) in slots {
        let slot = e1.get(eq, &[0, 0]).ok_or("missing [0 0] slot")?;
        let got = normalize_constraint(&substitute(&slot.coefficient, &bind).map_err(err)?)
            .map_err(err)?;
        let want = normalize_constraint(&p(text, &c)).map_err(err)?;
        check(is_zero(&(&got - &want)), || {
            format!("eps^1 eq{eq} [0 0]: {got} vs {want}")
        })?;
    }

    let r = second_approach_pipeline(sys, &pr.vocabulary, None).map_err(err)?;
    let zeroth = r.zeroth.as_ref().ok_or("no zeroth-order solution")?;
    check(zeroth.dimension() == 5, || {
        format!("zeroth order dimension {}", zeroth.dimension())
    })?;
    let basis = zeroth.generators(0).map_err(err)?;
    let paper = problem("sphere.lsym");
    let named: Vec<Generator> = ["X0", "X1", "X2", "X3", "X4"]
        .iter()
        .map(|n| paper.generator(n).unwrap().clone())
        .collect();
    for g in &basis {
        check(in_span(g, &named).map_err(err)?, || {
            format!("{g} outside the exact algebra")
        })?;
    }
    for g in &named {
        check(in_span(g, &basis).map_err(err)?, || {
            format!("{g} missing from the solution")
        })?;
    }
    within(t, 60.0)?;
    let forced = r
        .forced_constants()
        .iter()
        .map(|a| a.name().to_string())
        .collect();
    let surviving = r
        .surviving_constants()
        .iter()
        .map(|a| a.name().to_string())
        .collect();
    Ok(SecondFindings {
        forced,
        surviving,
        new_directions: r.triviality.count(Category::New),
    })
}

/// Linear damping `theta'' + eps gamma theta' ...`, `phi'' + eps gamma phi' ...`
/// (k4 = h5 = gamma) with seed `s D[s]`: the correction `(gamma/2) s^2 D[s]`
/// makes every first-order slot vanish. Checked by substitution, not solving.
fn damping_oracle() -> Result<(), String> {
    let pr = problem("sphere-second.lsym");
    let spec = pr.perturbation.as_ref().unwrap();
    let gamma = Atom::parameter("gamma");
    let mut consts = Bindings::new();
    for k in spec.constants() {
        let v = if k.name() == "k4" || k.name() == "h5" {
            Expr::atom(&gamma)
        } else {
            Expr::zero()
        };
        consts = consts.atom(&k, v);
    }
    let p_damped = pr
        .system
        .perturbation()
        .unwrap()
        .iter()
        .map(|e| substitute(e, &consts))
        .collect::<liesym::Result<Vec<_>>>()
        .map_err(err)?;
    let sys = pr
        .system
        .unperturbed()
        .with_perturbation(p_damped)
        .map_err(err)?;
    let seed = pr.generator("X1").unwrap();
    let h = auxiliary_h(seed, &sys).map_err(err)?;
    let ds = approx_determining_system(&sys, &h).map_err(err)?;
    let s = Expr::atom(&sys.coords().independent);
    let x1 = [
        Expr::atom(&gamma) * Expr::frac(1, 2) * s.pow(2),
        Expr::zero(),
        Expr::zero(),
    ];
    let mut bind = Bindings::new();
    for (f, e) in ds.unknowns.iter().zip(x1) {
        bind = bind.func(f, e);
    }
    for con in &ds.constraints {
        let v = substitute(&con.coefficient, &bind).map_err(err)?;
        check(is_zero(&v), || {
            format!("damping correction leaves {con} as {v}")
        })?;
    }
    let correction = Generator::from_components(
        sys.coords().clone(),
        vec![s.pow(2), Expr::zero(), Expr::zero()],
    )
    .map_err(err)?;
    let algebra = liesym::fixtures::sphere_generators(&sys);
    check(!in_span(&correction, &algebra).map_err(err)?, || {
        "s^2 D[s] is exact".into()
    })
}

fn property_suite() -> Outcome {
    let d = Domain::sphere();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut fd_checks, mut zero_checks) = (0usize, 0usize);
    for _ in 0..30 {
        let e = d.expr(&mut rng, 3);
        let pts: Vec<_> = (0..25).map(|_| d.point(&mut rng)).collect();
        for x in d.atoms() {
            let de = diff(&e, x);
            for pt in &pts {
                let (Some(a), Some(b)) = (eval(&de, pt), finite_difference(&e, x, pt)) else {
                    return Err(format!("cannot evaluate {e}"));
                };
                // relative, with unit scale where the derivative vanishes
                check((a - b).abs() <= 1e-6 * a.abs().max(1.0), || {
                    format!("d/d{} of {e}: {a} vs {b}", x.name())
                })?;
                fd_checks += 1;
            }
        }
    }
    for _ in 0..30 {
        let a = d.expr(&mut rng, 2);
        let b = d.expr(&mut rng, 2);
        let t = Expr::atom(&d.theta);
        let candidates = [
            &a - &a.simplify().map_err(err)?,
            &a * &(Expr::sin(&t).pow(2) + Expr::cos(&t).pow(2)) - a.clone(),
            (&a + &b).pow(2) - a.pow(2) - Expr::int(2) * a.clone() * b.clone() - b.pow(2),
            diff(&diff(&a, &d.theta), &d.phi) - diff(&diff(&a, &d.phi), &d.theta),
            diff(&(&a * &b), &d.theta)
                - (diff(&a, &d.theta) * b.clone() + a.clone() * diff(&b, &d.theta)),
        ];
        let pts: Vec<_> = (0..25).map(|_| d.point(&mut rng)).collect();
        for (i, z) in candidates.iter().enumerate() {
            check(is_zero(z), || {
                format!("identity {i} not recognised for {a}, {b}")
            })?;
            for pt in &pts {
                let v = eval(z, pt).ok_or("cannot evaluate")?;
                check(v.abs() < 1e-9, || {
                    format!("is_zero but evaluates to {v}: {z}")
                })?;
                zero_checks += 1;
            }
        }
    }

    let (c, sys) = liesym::fixtures::sphere_with_context();
    let gens = liesym::fixtures::sphere_generators(&sys);
    let small = |rng: &mut ChaCha8Rng| {
        let comps = (0..3).map(|_| d.expr(rng, 1)).collect();
        Generator::from_components(sys.coords().clone(), comps).unwrap()
    };
    for _ in 0..6 {
        let (f, g, h) = (small(&mut rng), small(&mut rng), small(&mut rng));
        let fg = lie_bracket(&f, &g).map_err(err)?;
        let gf = lie_bracket(&g, &f).map_err(err)?;
        check(fg.add(&gf).map_err(err)?.is_zero(), || {
            format!("[f,g] + [g,f] != 0 for {f}, {g}")
        })?;
        let ghf = lie_bracket(&g, &lie_bracket(&h, &f).map_err(err)?).map_err(err)?;
        let fgh = lie_bracket(&f, &lie_bracket(&g, &h).map_err(err)?).map_err(err)?;
        let hfg = lie_bracket(&h, &fg).map_err(err)?;
        let jac = fgh.add(&ghf).map_err(err)?.add(&hfg).map_err(err)?;
        check(jac.is_zero(), || format!("Jacobi fails for {f}, {g}, {h}"))?;
    }
    let br = |a: usize, b: usize| lie_bracket(&gens[a], &gens[b]).map_err(err);
    check(
        br(2, 3)?.same_as(&gens[4].scale(&liesym::symexpr::rat(-1))),
        || "[X2, X3] != -X4".into(),
    )?;
    check(br(2, 4)?.same_as(&gens[3]), || "[X2, X4] != X3".into())?;
    check(
        br(3, 4)?.same_as(&gens[2].scale(&liesym::symexpr::rat(-1))),
        || format!("[X3, X4] = {}", br(3, 4).unwrap()),
    )?;

    let coords = [
        c.atom("theta").unwrap().clone(),
        c.atom("phi").unwrap().clone(),
    ];
    for (g11, g22) in [
        ("1", "sin(theta)^2"),
        ("1", "theta^2"),
        ("theta^2 + 1", "sin(theta)^2"),
    ] {
        let m = Metric2::diagonal(coords.clone(), p(g11, &c), p(g22, &c)).map_err(err)?;
        let geo = geodesic_system(&m, c.atom("s").unwrap()).map_err(err)?;
        check(conserves_line_element(&m, &geo).map_err(err)?, || {
            format!("line element not conserved for diag({g11}, {g22})")
        })?;
    }
    Ok(format!(
        "{fd_checks} derivative samples, {zero_checks} zero samples, brackets, so(3), energy"
    ))
}

fn negative_control() -> Outcome {
    let pr = problem("flat.lsym");
    let algebra =
        liesym::approx::exact_algebra(&pr.system.unperturbed(), &pr.vocabulary).map_err(err)?;
    check(algebra.len() == 15, || {
        format!("flat algebra has {} generators", algebra.len())
    })?;
    let r = first_approach_pipeline(
        "S",
        pr.generator("S").unwrap(),
        &pr.system,
        &pr.vocabulary,
        &algebra,
    )
    .map_err(err)?;
    let n = r.triviality.count(Category::New);
    check(n > 0, || "flat control came out trivial".into())?;
    let newdir = r
        .triviality
        .directions
        .iter()
        .find(|d| d.category == Category::New)
        .unwrap();
    Ok(format!(
        "{n} non-trivial direction: {}",
        newdir
            .generators
            .iter()
            .map(|(_, g)| g.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    ))
}

fn run(id: u32, name: &'static str, f: impl FnOnce() -> Outcome) -> Row {
    let t = Instant::now();
    let r = f();
    let elapsed = t.elapsed();
    match r {
        Ok(detail) => Row {
            id,
            name,
            pass: true,
            detail,
            elapsed,
        },
        Err(detail) => Row {
            id,
            name,
            pass: false,
            detail,
            elapsed,
        },
    }
}

fn main() {
    let mut rows = vec![
        run(1, "geodesic generation", geodesics),
        run(2, "determining-system regression", determining_regression),
        run(3, "exact symmetry verification", exact_verification),
        run(4, "prolongation fidelity", prolongation),
        run(5, "auxiliary functions", auxiliary_functions),
        run(6, "first approach", first_approach),
    ];

    // The criterion asks for all fourteen k, h to vanish. They do not: with
    // k4 = h5 = gamma the perturbation is linear damping, which carries the
    // approximate symmetry s D[s] + eps (gamma/2) s^2 D[s]. Everything else
    // in the criterion holds; the damping direction is confirmed independently.
    let t = Instant::now();
    let second = second_approach_checks();
    let oracle = damping_oracle();
    let elapsed = t.elapsed();
    let mut deviation_as_documented = false;
    let row7 = match (&second, &oracle) {
        (Ok(f), Ok(())) => {
            let all_forced = f.forced.len() == 14 && f.new_directions == 0;
            deviation_as_documented =
                f.forced.len() == 12 && f.surviving == ["h5", "k4"] && f.new_directions == 1;
            let detail = format!(
                "eps^0 system = exact system, eps^1 [0 0] slots match, zeroth order dim 5 = span(X0..X4); \
                 forced zero: {} of 14 ({}); surviving: {}; non-trivial directions: {}{}",
                f.forced.len(),
                f.forced.join(" "),
                f.surviving.join(" "),
                f.new_directions,
                if all_forced {
                    ""
                } else {
                    "; k4 = h5 (linear damping) admits s^2 D[s] at first order"
                }
            );
            Row {
                id: 7,
                name: "second approach",
                pass: all_forced,
                detail,
                elapsed,
            }
        }
        (Err(e), _) | (_, Err(e)) => Row {
            id: 7,
            name: "second approach",
            pass: false,
            detail: e.clone(),
            elapsed,
        },
    };
    rows.push(row7);
    rows.push(run(8, "property suite", property_suite));
    rows.push(run(9, "negative control", negative_control));

    for r in &rows {
        println!(
            "{} [{}] {} ({:.0} ms): {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.elapsed.as_secs_f64() * 1e3,
            r.detail
        );
    }
    let unexpected: Vec<u32> = rows
        .iter()
        .filter(|r| !r.pass && !(r.id == 7 && deviation_as_documented))
        .map(|r| r.id)
        .collect();
    let passed = rows.iter().filter(|r| r.pass).count();
    println!("{passed}/{} criteria pass", rows.len());
    if deviation_as_documented {
        println!("criterion 7 fails exactly as documented: k4 = h5 survives with one non-trivial direction");
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
