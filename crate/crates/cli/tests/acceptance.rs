//! Acceptance checks, one line per criterion.
//!
//! Every comparison here is between exact rationals, so the tolerance is a
//! count of mismatching coefficients and it is pinned at zero. Run with
//! `cargo test -p qtheta-cli --test acceptance`.

// The tolerance constants are compared even though they are zero, so that
// loosening one is a one-line change.
#![allow(clippy::absurd_extreme_comparisons)]

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use qtheta::bailey::{beta_from_alpha, BaileyPair};
use qtheta::identities::{
    context_for, expand_series, find, sample_points, verify, Params, Point, Var, Verdict, VerifyOptions,
};
use qtheta::kernels::{big_l, u_m, u_m_sum, v_closed, v_mn};
use qtheta::qfun::{partial_theta, poch_finite, poch_inf, BaseExp};
use qtheta::{Binding, EvalContext, Exp, Monomial, Rat, Series, Window};

/// Mismatching coefficients tolerated by every criterion.
const MAX_MISMATCHES: usize = 0;
/// Minimum registry size for the full suite.
const MIN_IDENTITIES: usize = 27;
/// Randomized case counts for the property suites.
const RING_CASES: u32 = 200;
const POCHHAMMER_CASES: u32 = 100;
const INVERT_CASES: u32 = 100;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qtheta"))
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Coefficients at which `x` and `y` disagree inside both windows, capped at `hi`.
fn mismatches(x: &Series, y: &Series, hi: Exp) -> usize {
    let limit = x.window().hi.meet(&y.window().hi).meet(&hi);
    let mut keys: Vec<Exp> = x.iter().chain(y.iter()).map(|(e, _)| *e).filter(|e| e.le_all(&limit)).collect();
    keys.sort_by(|p, q| p.report_cmp(q));
    keys.dedup();
    keys.iter().filter(|e| x.coeff(e) != y.coeff(e)).count()
}

fn same(x: &Series, y: &Series, hi: Exp, what: &str) -> Result<(), String> {
    let bad = mismatches(x, y, hi);
    ensure(bad <= MAX_MISMATCHES, format!("{what}: {bad} coefficients differ"))
}

// ---------------------------------------------------------------------------

fn full_suite() -> Check {
    let out = bin()
        .args(["verify", "all", "--order", "30", "--points", "3", "--seed", "0", "--output", "json", "--no-timing"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), format!("exit status {:?}", out.status.code()))?;
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let mut names: Vec<&str> = reports.iter().filter_map(|r| r["identity"].as_str()).collect();
    names.dedup();
    ensure(names.len() >= MIN_IDENTITIES, format!("only {} identities", names.len()))?;
    let bad: Vec<_> = reports.iter().filter(|r| r["verdict"] != "pass").collect();
    ensure(bad.is_empty(), format!("{} checks did not pass", bad.len()))?;
    ensure(reports.iter().all(|r| r["window"]["q_hi"] == 30), "a window stops short of q^30")?;

    // same seed and configuration, same bytes
    let again = |seed: &str| {
        bin()
            .args(["verify", "warnaar_sum", "jacobi_triple", "corollary_b5", "--order", "12", "--seed", seed])
            .args(["--output", "json", "--no-timing"])
            .output()
            .map(|o| o.stdout)
            .map_err(|e| e.to_string())
    };
    ensure(again("5")? == again("5")?, "two runs with one seed differ")?;
    Ok(format!("{} identities, {} checks, all pass; reruns are byte-identical", names.len(), reports.len()))
}

fn coefficient_theorem() -> Check {
    let (order, cap) = (50, 10);
    let ctx = EvalContext::symbolic(order, cap);
    let l = big_l(&Monomial::a(), &Monomial::b(), &ctx).map_err(|e| e.to_string())?;
    ensure(l.window().hi.q >= order, format!("L only known through q^{}", l.window().hi.q))?;
    let mut bad = 0;
    let mut checked = 0;
    for i in 0..=cap {
        for j in 0..=cap - i {
            // tau(k) = (-1)^k q^{k(k-1)/2}, written out independently of the library
            let k = i + j;
            let (e, sign) = (k * (k - 1) / 2, if k % 2 == 0 { 1 } else { -1 });
            for q in 0..=order {
                let want = if q == e { Rat::from_int(sign) } else { Rat::zero() };
                checked += 1;
                if l.coeff_at(q, i, j).map_err(|e| e.to_string())? != want {
                    bad += 1;
                }
            }
        }
    }
    ensure(bad <= MAX_MISMATCHES, format!("{bad} of {checked} coefficients differ from tau(i+j)"))?;
    Ok(format!("{checked} coefficients of L(a,b) through q^{order}, i+j <= {cap}"))
}

fn special_values() -> Check {
    let ctx = EvalContext::symbolic(30, 10);
    let b = Monomial::b();
    let e = |x: qtheta::Error| x.to_string();
    let hi = ctx.report_hi();
    same(&u_m_sum(1, &b, &ctx).map_err(e)?.value, &ctx.one(), hi, "U_1 = 1")?;
    let one_plus_bq =
        Series::from_terms([(Exp::ZERO, Rat::one()), (Exp::new(1, 0, 1), Rat::one())], Window::new(Exp::ZERO, hi))
            .map_err(e)?;
    same(&u_m_sum(2, &b, &ctx).map_err(e)?.value, &one_plus_bq, hi, "U_2 = 1 + bq")?;
    let theta = partial_theta(&b, &ctx).map_err(e)?;
    let u0 = u_m_sum(0, &b, &ctx).map_err(e)?.value;
    ensure(u0.window().hi.q >= 30, "U_0 window")?;
    same(&u0, &theta, hi, "U_0 = theta(q,b)")?;
    same(&u_m(0, &b, &ctx).map_err(e)?, &theta, hi, "U_0 dispatch")?;

    let small = EvalContext::symbolic(16, 5);
    let a = Monomial::a();
    for n in 0..=5 {
        same(&v_mn(0, n, &a, &b, &small).map_err(e)?.value, &small.one(), small.report_hi(), &format!("V_0,{n} = 1"))?;
        for m in 1..=2 {
            let generic = v_mn(m, n, &a, &b, &small).map_err(e)?.value;
            let closed = v_closed(m, n, &a, &b, &small).map_err(e)?;
            same(&generic, &closed, small.report_hi(), &format!("V_{m},{n}"))?;
        }
    }
    Ok("U_0, U_1, U_2 through q^30; V_0,n, V_1,n, V_2,n for n <= 5".into())
}

fn bailey() -> Check {
    let e = |x: qtheta::Error| x.to_string();
    let mut relations = 0;
    // unit pair relative to ab/q at three points
    for (a, b) in [(r(2, 3), r(3, 7)), (r(5, 4), r(2, 9)), (r(7, 11), r(13, 5))] {
        let ctx = EvalContext::specialized(a.clone(), b.clone(), 20);
        let t = Monomial::new(&a * &b, -1, 0, 0);
        let mut derived = beta_from_alpha(BaileyPair::unit(&t, &ctx).map_err(e)?, 6).map_err(e)?;
        for n in 0..=6 {
            let want = if n == 0 { ctx.one() } else { ctx.zero() };
            same(derived.beta(n).map_err(e)?, &want, ctx.report_hi(), &format!("unit beta_{n} at a={a}, b={b}"))?;
            relations += 1;
        }
    }
    // the two pairs relative to 0
    let xs = [
        (EvalContext::univariate(20), Monomial::constant(r(3, 5))),
        (EvalContext::univariate(20), Monomial::constant(r(-7, 2))),
        (EvalContext::symbolic(14, 5), Monomial::a()),
    ];
    for (ctx, x) in xs {
        for square in [false, true] {
            let make =
                |x: &Monomial| if square { BaileyPair::square(x, &ctx) } else { BaileyPair::alternating(x, &ctx) };
            let mut derived = beta_from_alpha(make(&x).map_err(e)?, 6).map_err(e)?;
            let mut stated = make(&x).map_err(e)?;
            for n in 0..=6 {
                let d = derived.beta(n).map_err(e)?.clone();
                ensure(d.window().hi.q >= ctx.q_order, "derived beta window")?;
                same(&d, stated.beta(n).map_err(e)?, ctx.report_hi(), &format!("beta_{n} at x = {x}"))?;
                relations += 1;
            }
        }
    }
    // the transform and its displayed special cases at order 20
    let opts = VerifyOptions { order: 20, ..Default::default() };
    let mut checks = 0;
    for name in [
        "bailey_transform_unit",
        "bailey_transform_t0_1",
        "bailey_transform_t0_2",
        "bailey_unit_theta",
        "bailey_t0_1_theta",
        "bailey_t0_2_theta",
    ] {
        let desc = find(name).map_err(e)?;
        let pts = sample_points(desc, 3, 0, false);
        ensure(pts.len() == 3, format!("{name}: {} points", pts.len()))?;
        for pt in pts {
            let rep = verify(desc, &Params::none(), &pt, &opts).map_err(e)?;
            ensure(rep.verdict == Verdict::Pass, format!("{name} at {pt}: {:?}", rep.verdict))?;
            checks += 1;
        }
    }
    Ok(format!("{relations} defining relations for n <= 6; {checks} transform checks at order 20"))
}

fn psi() -> Check {
    let order = 100;
    let ctx = EvalContext::univariate(order);
    let e = |x: qtheta::Error| x.to_string();
    let lhs = partial_theta(&-Monomial::q_pow(1), &ctx).map_err(e)?;
    let rhs = poch_inf(&Monomial::q_pow(4), BaseExp::new(4).map_err(e)?, &ctx)
        .map_err(e)?
        .mul(&poch_inf(&-Monomial::q_pow(1), BaseExp::new(2).map_err(e)?, &ctx).map_err(e)?);
    ensure(lhs.window().hi.q >= order && rhs.window().hi.q >= order, "window stops short of q^100")?;
    same(&lhs, &rhs, ctx.report_hi(), "psi product")?;
    let mut bad = 0;
    for n in 0..=order {
        let triangular = (0..=n).any(|k| k * (k + 1) / 2 == n);
        if lhs.coeff_at(n, 0, 0).map_err(e)? != Rat::from_int(triangular as i64) {
            bad += 1;
        }
    }
    ensure(bad <= MAX_MISMATCHES, format!("{bad} coefficients off the triangular pattern"))?;
    Ok(format!("{} coefficients, 1 exactly at triangular exponents", order + 1))
}

fn reductions() -> Check {
    let e = |x: qtheta::Error| x.to_string();
    let gw = find("generalized_warnaar").map_err(e)?;
    let formal = Point(vec![(Var::A, Binding::Formal), (Var::B, Binding::Formal)]);
    let mut points = vec![formal];
    points.extend(sample_points(find("warnaar_sum").map_err(e)?, 3, 0, false));
    let opts = VerifyOptions { order: 20, degree_cap: 8, ..Default::default() };
    let mut compared = 0;
    for pt in &points {
        let ctx = context_for(gw, pt, &opts).map_err(e)?;
        for ((r_, s), other) in [((1, 1), "warnaar_sum"), ((0, 1), "bivariate_rep")] {
            let p = Params(vec![("r", r_), ("s", s)]);
            for side in ["lhs", "rhs"] {
                let x = expand_series(&format!("generalized_warnaar:{side}"), &ctx, Some(pt), Some(&p)).map_err(e)?;
                let y = expand_series(&format!("{other}:{side}"), &ctx, Some(pt), None).map_err(e)?;
                ensure(x.window().hi.q >= 20 && y.window().hi.q >= 20, "window stops short")?;
                same(&x, &y, ctx.report_hi(), &format!("(r,s) = ({r_},{s}) {side} against {other} at {pt}"))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} side comparisons at {} points (one symbolic)", points.len()))
}

// ---------------------------------------------------------------------------
// Property suites
// ---------------------------------------------------------------------------

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn arb_series(top: Exp) -> impl Strategy<Value = Series> {
    let term = (0..=top.q, 0..=top.a, 0..=top.b, -5i64..=5, 1i64..=4);
    prop::collection::vec(term, 0..8).prop_map(move |ts| {
        Series::from_terms(
            ts.into_iter().map(|(q, a, b, n, d)| (Exp::new(q, a, b), Rat::new(n, d).unwrap())),
            Window::new(Exp::ZERO, top),
        )
        .unwrap()
    })
}

/// Schoolbook product on plain maps, kept away from the library's multiplication.
fn naive_product(x: &Series, y: &Series, top: Exp) -> BTreeMap<(i64, i64, i64), Rat> {
    let mut out: BTreeMap<(i64, i64, i64), Rat> = BTreeMap::new();
    for (e, c) in x.iter() {
        for (f, d) in y.iter() {
            let g = Exp::new(e.q + f.q, e.a + f.a, e.b + f.b);
            if g.le_all(&top) {
                let mut p = c.clone();
                p *= d;
                *out.entry((g.q, g.a, g.b)).or_insert_with(Rat::zero) += p;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn ring_axioms() -> Result<(), String> {
    let top = Exp::new(6, 2, 2);
    let s = || arb_series(top);
    runner(RING_CASES)
        .run(&(s(), s(), s()), |(x, y, z)| {
            prop_assert!((&x + &y).eq_on_window(&(&y + &x)));
            prop_assert!((&(&x + &y) + &z).eq_on_window(&(&x + &(&y + &z))));
            prop_assert!((&x * &y).eq_on_window(&(&y * &x)));
            prop_assert!((&(&x * &y) * &z).eq_on_window(&(&x * &(&y * &z))));
            prop_assert!((&x * &(&y + &z)).eq_on_window(&(&(&x * &y) + &(&x * &z))));
            #[allow(clippy::eq_op)]
            let zero = &x - &x;
            prop_assert!(zero.is_zero());
            let p = &x * &y;
            let oracle = naive_product(&x, &y, p.window().hi);
            let got: BTreeMap<_, _> = p.iter().map(|(e, c)| ((e.q, e.a, e.b), c.clone())).collect();
            prop_assert_eq!(got, oracle);
            Ok(())
        })
        .map_err(|e| format!("ring axioms: {e}"))
}

fn arb_arg() -> impl Strategy<Value = Monomial> {
    let rat = (-9i64..=9, 1i64..=9)
        .prop_filter("away from 0 and 1", |(n, d)| *n != 0 && n != d)
        .prop_map(|(n, d)| Rat::new(n, d).unwrap());
    (rat, 0i64..=3, 0i64..=1).prop_map(|(c, e, uses_a)| Monomial::new(c, e, uses_a, 0))
}

fn pochhammer() -> Result<(), String> {
    let ctx = EvalContext::symbolic(12, 3).with_b(Binding::Rational(Rat::zero()));
    runner(POCHHAMMER_CASES)
        .run(&(arb_arg(), 0i64..7, 1i64..=3), |(x, n, step)| {
            let base = BaseExp::new(step).unwrap();
            // (x)_{n+1} = (x)_n (1 - x q^{step n})
            let next = poch_finite(&x, n + 1, base, &ctx).unwrap();
            let head = poch_finite(&x, n, base, &ctx).unwrap();
            let t = ctx.bind(&x.shift_q(step * n)).unwrap();
            prop_assert!(next.eq_on_window(&head.mul_binomial(&t.coef, t.exp)));
            // (x)_inf = (x)_n (x q^{step n})_inf
            let whole = poch_inf(&x, base, &ctx).unwrap();
            let split = head.mul(&poch_inf(&x.shift_q(step * n), base, &ctx).unwrap());
            prop_assert!(split.window().hi.q >= 12);
            prop_assert!(whole.eq_on_window(&split));
            Ok(())
        })
        .map_err(|e| format!("Pochhammer: {e}"))
}

fn invert_round_trip() -> Result<(), String> {
    let top = Exp::new(8, 2, 1);
    let unit = (arb_series(top), 1i64..=6, 0i64..=3).prop_map(move |(s, c, d)| {
        let tail = s.mul_term(&Rat::one(), Exp::q(1)).truncate(top);
        let lead = Series::term(Rat::from_int(c), Exp::q(-d), top);
        (&lead + &tail.mul_term(&Rat::one(), Exp::q(-d))).with_floor(Exp::q(-d))
    });
    runner(INVERT_CASES)
        .run(&unit, |u| {
            let inv = u.invert().unwrap();
            let one = Series::one(Exp::new(i64::MAX / 4, i64::MAX / 4, i64::MAX / 4));
            prop_assert!((&u * &inv).eq_on_window(&one));
            Ok(())
        })
        .map_err(|e| format!("invert: {e}"))
}

/// Pass at every order, and each side at a lower order is the truncation
/// of the same side at a higher one.
fn order_refinement() -> Result<usize, String> {
    let e = |x: qtheta::Error| x.to_string();
    let picks: [(&str, Params); 5] = [
        ("warnaar_sum", Params::none()),
        ("bivariate_rep", Params::none()),
        ("jacobi_triple", Params::none()),
        ("main_theorem", Params(vec![("m", 1)])),
        ("bailey_transform_t0_1", Params::none()),
    ];
    let mut n = 0;
    for (name, params) in picks {
        let desc = find(name).map_err(e)?;
        let pt = sample_points(desc, 1, 0, false).remove(0);
        let mut previous: Option<(i64, Series, Series)> = None;
        for order in [10, 20, 30] {
            let opts = VerifyOptions { order, ..Default::default() };
            let rep = verify(desc, &params, &pt, &opts).map_err(e)?;
            ensure(rep.verdict == Verdict::Pass, format!("{name} at order {order}: {:?}", rep.verdict))?;
            let ctx = context_for(desc, &pt, &opts).map_err(e)?;
            let lhs = expand_series(&format!("{name}:lhs"), &ctx, Some(&pt), Some(&params)).map_err(e)?;
            let rhs = expand_series(&format!("{name}:rhs"), &ctx, Some(&pt), Some(&params)).map_err(e)?;
            if let Some((lo, l, r_)) = &previous {
                let hi = Exp::new(*lo, ctx.report_hi().a, ctx.report_hi().b);
                same(l, &lhs, hi, &format!("{name} lhs, order {lo} against {order}"))?;
                same(r_, &rhs, hi, &format!("{name} rhs, order {lo} against {order}"))?;
            }
            previous = Some((order, lhs, rhs));
            n += 1;
        }
    }
    Ok(n)
}

fn properties() -> Check {
    ring_axioms()?;
    pochhammer()?;
    invert_round_trip()?;
    let refinements = order_refinement()?;
    Ok(format!(
        "ring {RING_CASES} cases, Pochhammer {POCHHAMMER_CASES}, invert {INVERT_CASES}, \
         {refinements} order-refinement checks over 5 identities"
    ))
}

fn negative_path() -> Check {
    let out = bin()
        .args(["verify", "warnaar_sum", "--order", "5", "--points", "1", "--perturb-rhs", "warnaar_sum:3"])
        .args(["--output", "json", "--no-timing"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(1), format!("exit status {:?}", out.status.code()))?;
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(reports.len() == 1 && reports[0]["verdict"] == "fail", "expected a single failing report")?;
    let d = &reports[0]["first_diff"];
    let triple = (d["e_q"].as_i64(), d["e_a"].as_i64(), d["e_b"].as_i64());
    ensure(triple == (Some(3), Some(0), Some(0)), format!("first difference reported at {triple:?}"))?;
    let parse = |k: &str| d[k].as_str().unwrap_or_default().parse::<Rat>().map_err(|e| e.to_string());
    let gap = parse("rhs")? - parse("lhs")?;
    ensure(gap == Rat::one(), format!("rhs - lhs = {gap}, expected the injected 1"))?;

    // and an unperturbed run of the same check is clean
    let clean =
        bin().args(["verify", "warnaar_sum", "--order", "5", "--points", "1"]).output().map_err(|e| e.to_string())?;
    ensure(clean.status.code() == Some(0), "unperturbed run does not pass")?;
    Ok("exit 1 with first difference at (q^3, a^0, b^0), rhs - lhs = 1".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("full-suite pass", full_suite),
        ("coefficient theorem", coefficient_theorem),
        ("special values", special_values),
        ("Bailey pairs and transform", bailey),
        ("psi product", psi),
        ("reduction coherence", reductions),
        ("property suites", properties),
        ("negative path", negative_path),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {}. {title}: {detail} [{secs:.1} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {title}: {why} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
