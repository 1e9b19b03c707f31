use super::*;
use crate::qfun::{partial_theta, poch_inf, poch_inf_many, psi, tau_monomial};
use crate::series::Binding;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

fn a() -> Monomial {
    Monomial::a()
}

fn b() -> Monomial {
    Monomial::b()
}

#[test]
fn u_one_and_u_two() {
    let ctx = EvalContext::symbolic(20, 6);
    let u1 = u_m_sum(1, &b(), &ctx).unwrap();
    assert_eq!(u1.terms, 1);
    assert!(u1.value.eq_on_window(&ctx.one()));
    let u2 = u_m_sum(2, &b(), &ctx).unwrap();
    assert_eq!(u2.terms, 2);
    assert_eq!(u2.value.sorted_terms(), vec![(Exp::ZERO, Rat::one()), (Exp::new(1, 0, 1), Rat::one())]);
    assert!(u2.value.window().hi.q >= 20);
    for m in 1..=4 {
        assert_eq!(u_m_sum(m, &b(), &ctx).unwrap().terms, m as usize);
    }
}

#[test]
fn u_zero_is_theta() {
    let ctx = EvalContext::symbolic(30, 6);
    let generic = u_m_sum(0, &b(), &ctx).unwrap();
    assert!(generic.tail_floor.is_some());
    let theta = partial_theta(&b(), &ctx).unwrap();
    assert!(generic.value.window().hi.q >= 30);
    assert!(generic.value.eq_on_window(&theta));
    assert!(u_m(0, &b(), &ctx).unwrap().eq_on_window(&theta));
}

#[test]
fn v_special_values() {
    let ctx = EvalContext::symbolic(16, 5);
    for n in 0..=5 {
        let v0 = v_mn(0, n, &a(), &b(), &ctx).unwrap();
        assert_eq!(v0.terms, 1);
        assert!(v0.value.eq_on_window(&ctx.one()));
        for m in 1..=2 {
            let generic = v_mn(m, n, &a(), &b(), &ctx).unwrap();
            assert_eq!(generic.terms, (m.min(n) + 1) as usize);
            let closed = v_closed(m, n, &a(), &b(), &ctx).unwrap();
            assert!(closed.window().hi.q >= 10, "V_({m},{n}) window {:?}", closed.window());
            assert!(generic.value.eq_on_window(&closed), "V_({m},{n})");
        }
    }
    assert!(v_closed(3, 1, &a(), &b(), &ctx).is_err());
}

#[test]
fn v_one_three_by_series_division() {
    // (1 - ab q^2 + b (1 - q^3)) / (1 - ab q^2), divided out by hand
    let ctx = EvalContext::symbolic(12, 4);
    let v = v_mn(1, 3, &a(), &b(), &ctx).unwrap().value;
    let num = Series::from_terms(
        [
            (Exp::ZERO, Rat::one()),
            (Exp::new(2, 1, 1), -Rat::one()),
            (Exp::new(0, 0, 1), Rat::one()),
            (Exp::new(3, 0, 1), -Rat::one()),
        ],
        crate::series::Window::new(Exp::ZERO, ctx.working_hi()),
    )
    .unwrap();
    let back = v.mul_binomial(&Rat::one(), Exp::new(2, 1, 1));
    assert!(back.eq_on_window(&num));
}

#[test]
fn f_special_cases() {
    let ctx = EvalContext::symbolic(24, 6);
    let fbb = f_kernel(&b(), &b(), &ctx).unwrap().value;
    assert!(fbb.eq_on_window(&partial_theta(&b(), &ctx).unwrap()));

    let u = EvalContext::univariate(12);
    let f0 = f_kernel(&Monomial::zero(), &Monomial::constant(r(3, 7)), &u).unwrap();
    assert!(f0.value.eq_on_window(&u.one()));
}

#[test]
fn f_product_form_at_a_point() {
    // f(b, c) = (b; q)_inf sum q^{n^2} b^n / (q, c; q)_n at b = 2/3, c = 3/7
    let ctx = EvalContext::specialized(Rat::zero(), r(2, 3), 20);
    let c = Monomial::constant(r(3, 7));
    let f = f_kernel(&b(), &c, &ctx).unwrap().value;
    let mut sum = Series::zero(ctx.working_hi());
    for n in 0..=6 {
        let lead = ctx.bind(&(&b().pow(n).unwrap() * &Monomial::q_pow(n * n))).unwrap();
        let mut t = ctx.one().mul_term(&lead.coef, lead.exp);
        t = div_poch(&t, &Monomial::q_pow(1), n, Q, &ctx).unwrap();
        t = div_poch(&t, &c, n, Q, &ctx).unwrap();
        sum = &sum + &t;
    }
    let rhs = poch_inf(&b(), Q, &ctx).unwrap().mul(&sum);
    assert!(rhs.window().hi.q >= 20);
    assert!(f.eq_on_window(&rhs));
}

#[test]
fn g_special_values() {
    let u = EvalContext::specialized(r(2, 1), r(3, 1), 10);
    let g0 = g_n(0, &a(), &b(), &Monomial::constant(r(5, 1)), &u).unwrap();
    assert!(g0.value.eq_on_window(&u.one()));
    // i = 0 gives 1; i = 1 gives (1 - 1/q)(1 - 1/2) / ((1 - q)(1 - 5)) * 6q = 3/4
    let g1 = g_n(1, &a(), &b(), &Monomial::constant(r(5, 1)), &u).unwrap();
    assert_eq!(g1.terms, 2);
    assert_eq!(g1.value.sorted_terms(), vec![(Exp::ZERO, r(7, 4))]);
}

#[test]
fn g_reduces_to_v_by_heine() {
    // g_n(a, b, b q^m) = (ab q^{n-1}; q)_n / (b q^m; q)_n V_{m,n}(a, b), m = 1, n = 2
    let (m, n) = (1, 2);
    let ctx = EvalContext::symbolic(14, 5).with_laurent_floor(-n);
    let g = g_n(n, &a(), &b(), &b().shift_q(m), &ctx).unwrap().value;
    let v = v_mn(m, n, &a(), &b(), &ctx).unwrap().value;
    let ab = &a() * &b();
    let rhs = div_poch(&mul_poch(&v, &ab.shift_q(n - 1), n, Q, &ctx).unwrap(), &b().shift_q(m), n, Q, &ctx).unwrap();
    assert!(g.window().hi.q >= 10 && rhs.window().hi.q >= 10);
    assert!(g.eq_on_window(&rhs));
}

#[test]
fn l_at_b_zero_is_theta() {
    let ctx = EvalContext::symbolic(20, 8).with_b(Binding::Rational(Rat::zero()));
    let l = big_l(&a(), &b(), &ctx).unwrap();
    assert!(l.window().hi.q >= 20);
    assert!(l.eq_on_window(&partial_theta(&a(), &ctx).unwrap()));
    let p = big_p(&a(), &b(), &ctx).unwrap();
    assert!(p.window().hi.q >= 20);
    assert!(p.eq_on_window(&partial_theta(&a(), &ctx).unwrap()));
}

#[test]
fn l_coefficients_are_tau() {
    let cap = 8;
    let ctx = EvalContext::symbolic(30, cap);
    let l = big_l(&a(), &b(), &ctx).unwrap();
    assert!(l.window().hi.q >= 30);
    for i in 0..=cap {
        for j in 0..=cap - i {
            let t = tau_monomial(i + j);
            for e in 0..=30 {
                let want = if e == t.e_q() { t.coef().clone() } else { Rat::zero() };
                assert_eq!(l.coeff_at(e, i, j).unwrap(), want, "q^{e} a^{i} b^{j}");
            }
        }
    }
}

#[test]
fn l_and_p_are_symmetric() {
    let ctx = EvalContext::symbolic(16, 5);
    let swapped = ctx.swapped();
    for s in [2, 3] {
        let x = lp_kernel(&a(), &b(), s, &ctx).unwrap().value;
        let y = lp_kernel(&b(), &a(), s, &ctx).unwrap().value;
        assert!(x.eq_on_window(&y));
        // same thing by exchanging the bindings at a point
        let pt = EvalContext::specialized(r(2, 3), r(3, 7), 16);
        let u = lp_kernel(&a(), &b(), s, &pt).unwrap().value;
        let v = lp_kernel(&a(), &b(), s, &pt.swapped()).unwrap().value;
        assert!(u.eq_on_window(&v));
        assert!(swapped.is_symbolic());
    }
}

#[test]
fn p_at_the_psi_point() {
    // P(q^2, -q^2) (1 + q) = (q^4; q^4)_inf (-q; q^2)_inf = psi(q)
    let ctx = EvalContext::univariate(30);
    let p = big_p(&Monomial::q_pow(2), &-Monomial::q_pow(2), &ctx).unwrap();
    let lhs = &p + &p.mul_term(&Rat::one(), Exp::q(1));
    assert!(lhs.window().hi.q >= 30);
    assert!(lhs.eq_on_window(&psi(&ctx).unwrap()));

    // and P(q^2, -q^2) / (q, q^2, -q^2; q)_inf is a Gauss sum in base q^2
    let pref = poch_inf_many(&[Monomial::q_pow(1), Monomial::q_pow(2), -Monomial::q_pow(2)], &ctx).unwrap();
    let gauss = crate::qfun::phi21(
        &-Monomial::q_pow(1),
        &-Monomial::q_pow(2),
        &Monomial::q_pow(4),
        &Monomial::q_pow(1),
        BaseExp::new(2).unwrap(),
        &ctx,
    )
    .unwrap();
    assert!(p.eq_on_window(&pref.mul(&gauss.value)));
}

#[test]
fn summand_sum_rebuilds_l() {
    let ctx = EvalContext::specialized(r(2, 3), r(3, 5), 18);
    assert!(t_summand(0, &a(), &b(), &ctx).unwrap().eq_on_window(&ctx.one()));
    let mut sum = Series::zero(ctx.working_hi());
    for n in 0..=ctx.working_hi().q + 1 {
        sum = &sum + &t_summand(n, &a(), &b(), &ctx).unwrap();
    }
    let rebuilt = poch_inf_many(&[Monomial::q_pow(1), a(), b()], &ctx).unwrap().mul(&sum);
    let l = big_l(&a(), &b(), &ctx).unwrap();
    assert!(rebuilt.window().hi.q >= 18);
    assert!(l.eq_on_window(&rebuilt));
}

#[test]
fn contiguous_relation() {
    // t(a,b;n+2) = abq / ((1-a)(1-aq)(1-b)(1-bq)) t(aq^2,bq^2;n)
    //   + q(q-ab)(1-ab q^{2n+2}) / ((1-a)(1-aq)(1-b)(1-bq)(1-q^{n+1})(1-q^{n+2})) t(aq^2,bq^2;n)
    let (av, bv) = (r(2, 3), r(3, 5));
    let ctx = EvalContext::specialized(av.clone(), bv.clone(), 20);
    let ab = &av * &bv;
    let one = Rat::one();
    for n in 0..=2 {
        let lhs = t_summand(n + 2, &a(), &b(), &ctx).unwrap();
        let inner = t_summand(n, &a().shift_q(2), &b().shift_q(2), &ctx).unwrap();
        let denom = |s: Series| -> Series {
            s.div_binomial(&av, Exp::ZERO)
                .and_then(|s| s.div_binomial(&av, Exp::q(1)))
                .and_then(|s| s.div_binomial(&bv, Exp::ZERO))
                .and_then(|s| s.div_binomial(&bv, Exp::q(1)))
                .unwrap()
        };
        let first = denom(inner.mul_term(&ab, Exp::q(1)));
        // q (q - ab) = q^2 - ab q
        let qq = inner.mul_term(&one, Exp::q(2)) - inner.mul_term(&ab, Exp::q(1));
        let second = denom(qq.mul_binomial(&ab, Exp::q(2 * n + 2)))
            .div_binomial(&one, Exp::q(n + 1))
            .unwrap()
            .div_binomial(&one, Exp::q(n + 2))
            .unwrap();
        let rhs = &first + &second;
        assert!(rhs.window().hi.q >= 20);
        assert!(lhs.eq_on_window(&rhs), "n = {n}");
    }
}
