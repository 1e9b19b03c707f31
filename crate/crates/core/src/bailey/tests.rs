use super::*;
use crate::qfun::{partial_theta, poch_inf_many};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

fn c(v: Rat) -> Monomial {
    Monomial::constant(v)
}

const POINTS: [(i64, i64, i64, i64); 3] = [(2, 3, 3, 7), (5, 4, 2, 9), (7, 11, 13, 5)];

#[test]
fn unit_alpha_matches_literal_form() {
    // tau(n) (1 - ab q^{2n-1}) / (1 - ab/q) (ab/q;q)_n / (q;q)_n, divided out literally
    let (a, b) = (r(2, 3), r(3, 7));
    let ctx = EvalContext::specialized(a.clone(), b.clone(), 16);
    let ab = &a * &b;
    let t = Monomial::new(ab.clone(), -1, 0, 0);
    let mut pair = BaileyPair::unit(&t, &ctx).unwrap();
    for n in 0..=6 {
        let tau = crate::qfun::tau_monomial(n);
        let mut lit = ctx.one().mul_term(tau.coef(), tau.exp());
        lit = lit.mul_binomial(&ab, Exp::q(2 * n - 1));
        lit = lit.div_binomial(&ab, Exp::q(-1)).unwrap();
        lit = mul_poch(&lit, &t, n, Q, &ctx).unwrap();
        lit = div_poch(&lit, &Monomial::q_pow(1), n, Q, &ctx).unwrap();
        let got = pair.alpha(n).unwrap();
        assert!(got.eq_on_window(&lit), "alpha_{n}");
        assert!(got.window().hi.q >= 16);
    }
}

#[test]
fn unit_pair_beta_is_delta() {
    for (p, pp, s, ss) in POINTS {
        let (a, b) = (r(p, pp), r(s, ss));
        let ctx = EvalContext::specialized(a.clone(), b.clone(), 20);
        let t = Monomial::new(&a * &b, -1, 0, 0);
        let mut pair = beta_from_alpha(BaileyPair::unit(&t, &ctx).unwrap(), 6).unwrap();
        assert_eq!(pair.beta_source(), BetaSource::Derived);
        for n in 0..=6 {
            let want = if n == 0 { ctx.one() } else { ctx.zero() };
            let got = pair.beta(n).unwrap();
            assert!(got.window().hi.q >= 20);
            assert!(got.eq_on_window(&want), "beta_{n} at a = {a}, b = {b}");
        }
    }
}

#[test]
fn t0_pairs_satisfy_the_defining_relation() {
    let contexts = [
        (EvalContext::univariate(20), c(r(3, 5))),
        (EvalContext::univariate(20), c(r(-7, 2))),
        (EvalContext::symbolic(14, 5), Monomial::a()),
    ];
    for (ctx, x) in contexts {
        let mut derived = beta_from_alpha(BaileyPair::alternating(&x, &ctx).unwrap(), 6).unwrap();
        let mut stated = BaileyPair::alternating(&x, &ctx).unwrap();
        let mut derived2 = beta_from_alpha(BaileyPair::square(&x, &ctx).unwrap(), 6).unwrap();
        let mut stated2 = BaileyPair::square(&x, &ctx).unwrap();
        for n in 0..=6 {
            let d = derived.beta(n).unwrap().clone();
            let s = stated.beta(n).unwrap();
            assert!(d.window().hi.q >= ctx.q_order);
            assert!(d.eq_on_window(s), "alternating beta_{n} at x = {x}");
            let d2 = derived2.beta(n).unwrap().clone();
            assert!(d2.eq_on_window(stated2.beta(n).unwrap()), "square beta_{n} at x = {x}");
        }
    }
}

#[test]
fn stated_betas_by_hand() {
    // alternating: beta_1 = (1 - x) / (1 - q); square: beta_1 = 1 / ((1 - q)(1 - xq))
    let ctx = EvalContext::univariate(12);
    let x = r(3, 5);
    let mut alt = BaileyPair::alternating(&c(x.clone()), &ctx).unwrap();
    let want = ctx.constant(Rat::one() - x.clone()).div_binomial(&Rat::one(), Exp::q(1)).unwrap();
    assert!(alt.beta(1).unwrap().eq_on_window(&want));
    let mut sq = BaileyPair::square(&c(x.clone()), &ctx).unwrap();
    let want = ctx.one().div_binomial(&Rat::one(), Exp::q(1)).unwrap().div_binomial(&x, Exp::q(1)).unwrap();
    assert!(sq.beta(1).unwrap().eq_on_window(&want));
}

#[test]
fn unit_transform_gives_the_plain_product() {
    for (p, pp, s, ss) in POINTS {
        let (av, bv) = (r(p, pp), r(s, ss));
        let ctx = EvalContext::specialized(av.clone(), bv.clone(), 20);
        let (a, b) = (Monomial::a(), Monomial::b());
        let mut pair = BaileyPair::unit(&(&a * &b).shift_q(-1), &ctx).unwrap();
        let (lhs, rhs) = warnaar_l_transform_sides(&mut pair, &a, &b).unwrap();
        let product = poch_inf_many(&[Monomial::q_pow(1), a.shift_q(1), b.shift_q(1)], &ctx).unwrap();
        assert!(rhs.eq_on_window(&product));
        assert!(lhs.window().hi.q >= 20 && rhs.window().hi.q >= 20);
        assert_eq!(lhs.first_difference(&rhs, ctx.report_hi()), None, "a = {av}, b = {bv}");
    }
}

/// sum_n theta(q, a q^{n+1}) w_n, the left side once `b = 0`.
fn theta_side(weights: impl Fn(i64, &EvalContext) -> Series, ctx: &EvalContext) -> Series {
    let mut acc = ctx.zero();
    // the n-th weight starts at q^{n(n+1)/2} or later
    for n in (0..).take_while(|n| n * (n + 1) / 2 <= ctx.working_hi().q) {
        let th = partial_theta(&Monomial::a().shift_q(n + 1), ctx).unwrap();
        acc = &acc + &th.mul(&weights(n, ctx));
    }
    acc
}

#[test]
fn t0_transforms_match_the_theta_displays() {
    for (p, pp, s, ss) in POINTS {
        let (av, xv) = (r(p, pp), r(s, ss));
        let ctx = EvalContext::specialized(av.clone(), Rat::zero(), 20);
        let (a, b, x) = (Monomial::a(), Monomial::b(), c(xv.clone()));
        let pref = poch_inf_many(&[Monomial::q_pow(1), a.shift_q(1)], &ctx).unwrap();

        // (-1)^n x^n q^{(n^2+n)/2} / (q)_n  against  (q, aq)_inf sum (x)_n q^n / (q, aq)_n
        let mut pair = BaileyPair::alternating(&x, &ctx).unwrap();
        let (lhs, rhs) = warnaar_l_transform_sides(&mut pair, &a, &b).unwrap();
        let display_lhs = theta_side(
            |n, ctx| {
                let w = ctx.one().mul_term(&(Rat::sign_pow(n) * xv.pow(n).unwrap()), Exp::q((n * n + n) / 2));
                div_poch(&w, &Monomial::q_pow(1), n, Q, ctx).unwrap()
            },
            &ctx,
        );
        let mut sum = ctx.zero();
        for n in 0..=ctx.working_hi().q {
            let mut w = ctx.one().mul_term(&Rat::one(), Exp::q(n));
            w = mul_poch(&w, &x, n, Q, &ctx).unwrap();
            w = div_poch(&w, &Monomial::q_pow(1), n, Q, &ctx).unwrap();
            w = div_poch(&w, &a.shift_q(1), n, Q, &ctx).unwrap();
            sum = &sum + &w;
        }
        let display_rhs = pref.mul(&sum);
        assert!(lhs.eq_on_window(&display_lhs));
        assert!(rhs.eq_on_window(&display_rhs));
        assert_eq!(lhs.first_difference(&rhs, ctx.report_hi()), None);

        // x^n q^{n^2+n} / (q, xq)_n  against  (q, aq)_inf sum q^n / (q, aq, xq)_n
        let mut pair = BaileyPair::square(&x, &ctx).unwrap();
        let (lhs, rhs) = warnaar_l_transform_sides(&mut pair, &a, &b).unwrap();
        let display_lhs = theta_side(
            |n, ctx| {
                let w = ctx.one().mul_term(&xv.pow(n).unwrap(), Exp::q(n * n + n));
                let w = div_poch(&w, &Monomial::q_pow(1), n, Q, ctx).unwrap();
                div_poch(&w, &x.shift_q(1), n, Q, ctx).unwrap()
            },
            &ctx,
        );
        let mut sum = ctx.zero();
        for n in 0..=ctx.working_hi().q {
            let mut w = ctx.one().mul_term(&Rat::one(), Exp::q(n));
            for d in [Monomial::q_pow(1), a.shift_q(1), x.shift_q(1)] {
                w = div_poch(&w, &d, n, Q, &ctx).unwrap();
            }
            sum = &sum + &w;
        }
        assert!(lhs.eq_on_window(&display_lhs));
        assert!(rhs.eq_on_window(&pref.mul(&sum)));
        assert_eq!(lhs.first_difference(&rhs, ctx.report_hi()), None);
    }
}

#[test]
fn transform_rejects_a_mismatched_pair() {
    let ctx = EvalContext::specialized(r(2, 3), r(3, 7), 10);
    let mut pair = BaileyPair::alternating(&c(r(1, 2)), &ctx).unwrap();
    let err = warnaar_l_transform_sides(&mut pair, &Monomial::a(), &Monomial::b()).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter(_)));
    let mut derived = beta_from_alpha(BaileyPair::unit(&Monomial::new(r(2, 7), -1, 0, 0), &ctx).unwrap(), 2).unwrap();
    assert!(warnaar_l_transform_sides(&mut derived, &Monomial::a(), &Monomial::b()).is_err());
}
