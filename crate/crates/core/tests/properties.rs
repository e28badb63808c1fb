mod common;

use liesym::geom::{conserves_line_element, geodesic_system, Metric2};
use liesym::prolong::{lie_bracket, Generator};
use liesym::symexpr::{diff, eval, is_zero, parse, Expr};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{finite_difference, Domain};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn generator(d: &Domain, r: &mut ChaCha8Rng) -> Generator {
    let (_, sys) = liesym::fixtures::sphere_with_context();
    let comps = (0..3).map(|_| d.expr(r, 1)).collect();
    Generator::from_components(sys.coords().clone(), comps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derivative_matches_finite_difference(seed in any::<u64>()) {
        let d = Domain::sphere();
        let mut r = rng(seed);
        let e = d.expr(&mut r, 3);
        for x in d.atoms() {
            let de = diff(&e, x);
            for _ in 0..25 {
                let pt = d.point(&mut r);
                let exact = eval(&de, &pt).unwrap();
                let approx = finite_difference(&e, x, &pt).unwrap();
                prop_assert!((exact - approx).abs() <= 1e-6 * exact.abs().max(1.0),
                    "d/d{} {e}: {exact} vs {approx}", x.name());
            }
        }
    }

    #[test]
    fn zero_means_numerically_zero(seed in any::<u64>()) {
        let d = Domain::sphere();
        let mut r = rng(seed);
        let (a, b) = (d.expr(&mut r, 2), d.expr(&mut r, 2));
        let t = Expr::atom(&d.theta);
        let candidates = [
            &a - &a.simplify().unwrap(),
            &(&a + &b) * &(&a - &b) - (a.pow(2) - b.pow(2)),
            Expr::sin(&(Expr::int(2) * t.clone())) - Expr::int(2) * Expr::sin(&t) * Expr::cos(&t),
            &a - &b,
        ];
        for z in &candidates {
            if !is_zero(z) {
                continue;
            }
            for _ in 0..25 {
                let v = eval(z, &d.point(&mut r)).unwrap();
                prop_assert!(v.abs() < 1e-9, "{z} = {v}");
            }
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let d = Domain::sphere();
        let e = d.expr(&mut rng(seed), 3);
        let back = parse(&e.to_string(), &d.ctx).unwrap();
        prop_assert!(is_zero(&(&back - &e)), "{e} reparsed as {back}");
        let once = e.simplify().unwrap();
        prop_assert_eq!(once.simplify().unwrap(), once.clone());
        let again = parse(&once.to_string(), &d.ctx).unwrap().simplify().unwrap();
        prop_assert_eq!(again, once);
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let d = Domain::sphere();
        let mut r = rng(seed);
        let (a, b) = (d.expr(&mut r, 2), d.expr(&mut r, 2));
        for x in d.atoms() {
            let lhs = diff(&(&a * &b), x);
            let rhs = diff(&a, x) * b.clone() + a.clone() * diff(&b, x);
            prop_assert!(is_zero(&(lhs - rhs)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(seed in any::<u64>()) {
        let d = Domain::sphere();
        let mut r = rng(seed);
        let (f, g, h) = (generator(&d, &mut r), generator(&d, &mut r), generator(&d, &mut r));
        let fg = lie_bracket(&f, &g).unwrap();
        prop_assert!(fg.add(&lie_bracket(&g, &f).unwrap()).unwrap().is_zero());
        let jac = lie_bracket(&f, &lie_bracket(&g, &h).unwrap()).unwrap()
            .add(&lie_bracket(&g, &lie_bracket(&h, &f).unwrap()).unwrap()).unwrap()
            .add(&lie_bracket(&h, &fg).unwrap()).unwrap();
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn geodesic_flow_conserves_the_line_element(
        a in 1i64..5, b in 1i64..5, c in 0i64..3, n in 1i64..3,
    ) {
        let d = Domain::sphere();
        let coords = [d.theta.clone(), d.phi.clone()];
        let g11 = parse(&format!("{a} + {c}*theta^2"), &d.ctx).unwrap();
        let g22 = parse(&format!("{b}*sin(theta)^{} + {c}", 2 * n), &d.ctx).unwrap();
        let m = Metric2::diagonal(coords, g11, g22).unwrap();
        let sys = geodesic_system(&m, &d.s).unwrap();
        prop_assert!(conserves_line_element(&m, &sys).unwrap());
    }
}

#[test]
fn rotations_close_into_so3() {
    let (_, sys) = liesym::fixtures::sphere_with_context();
    let x = liesym::fixtures::sphere_generators(&sys);
    let minus = |g: &Generator| g.scale(&liesym::symexpr::rat(-1));
    let br = |a: usize, b: usize| lie_bracket(&x[a], &x[b]).unwrap();
    assert!(br(2, 3).same_as(&minus(&x[4])));
    assert!(br(2, 4).same_as(&x[3]));
    assert!(br(3, 4).same_as(&minus(&x[2])));
    // translation and scaling commute with the rotations
    for k in 2..5 {
        assert!(br(0, k).is_zero() && br(1, k).is_zero());
    }
    assert!(br(0, 1).same_as(&x[0]));
}
