//! The registered identities.
//!
//! Sides are written out literally from the identity they encode; the only
//! rewriting applied is cancelling a common factorial in a ratio such as
//! `(x;q)_{2n} / (x;q)_n = (x q^n;q)_n`.

use std::sync::OnceLock;

use super::{Engine, IdentityDescriptor, Inputs, Params, Pole, Var};
use crate::bailey::{warnaar_l_transform_sides, BaileyPair};
use crate::error::Result;
use crate::kernels::{big_l, big_p, f_kernel, g_n, t_summand, u_m, v_mn};
use crate::qfun::{
    complete_theta, div_poch, div_poch_inf, exact_monomial, mul_poch, partial_theta, poch_inf, poch_inf_many,
    sum_series, tau_monomial, triple_product_rhs, BaseExp, Tail,
};
use crate::series::{EvalContext, Monomial, Rat, Series};

const Q: BaseExp = BaseExp::Q;

fn q(k: i64) -> Monomial {
    Monomial::q_pow(k)
}

fn base(r: i64) -> BaseExp {
    BaseExp::new(r).expect("positive base")
}

fn sign(n: i64) -> Rat {
    Rat::sign_pow(n)
}

/// A product built one factor at a time, starting from an exact monomial.
struct Tm<'c> {
    ctx: &'c EvalContext,
    s: Series,
}

fn tm<'c>(ctx: &'c EvalContext, m: &Monomial) -> Result<Tm<'c>> {
    Ok(Tm { ctx, s: exact_monomial(m, ctx)? })
}

impl Tm<'_> {
    /// `* (x; q)_n`
    fn up(self, x: &Monomial, n: i64) -> Result<Self> {
        self.up_r(x, n, 1)
    }

    /// `/ (x; q)_n`
    fn down(self, x: &Monomial, n: i64) -> Result<Self> {
        self.down_r(x, n, 1)
    }

    fn up_r(mut self, x: &Monomial, n: i64, r: i64) -> Result<Self> {
        self.s = mul_poch(&self.s, x, n, base(r), self.ctx)?;
        Ok(self)
    }

    fn down_r(mut self, x: &Monomial, n: i64, r: i64) -> Result<Self> {
        self.s = div_poch(&self.s, x, n, base(r), self.ctx)?;
        Ok(self)
    }

    fn times(mut self, other: &Series) -> Self {
        self.s = self.s.mul(other);
        self
    }

    fn done(self) -> Series {
        self.s
    }
}

fn sum<F>(ctx: &EvalContext, tail: Tail, term: F) -> Result<Series>
where
    F: FnMut(i64) -> Result<Series>,
{
    Ok(sum_series(ctx.working_hi(), &tail, term)?.value)
}

/// `m * s` for a monomial `m`.
fn times(s: &Series, m: &Monomial, ctx: &EvalContext) -> Result<Series> {
    let t = ctx.bind(m)?;
    Ok(s.mul_term(&t.coef, t.exp))
}

/// A sum of monomials as a series.
fn poly(ms: &[Monomial], ctx: &EvalContext) -> Result<Series> {
    let mut acc = ctx.zero();
    for m in ms {
        acc = &acc + &exact_monomial(m, ctx)?;
    }
    Ok(acc)
}

fn theta(x: &Monomial, ctx: &EvalContext) -> Result<Series> {
    partial_theta(x, ctx)
}

fn inv(r: Rat) -> Rat {
    r.recip().expect("pole sets exclude vanishing denominators")
}

fn single() -> Vec<Params> {
    vec![Params::none()]
}

fn m_grid() -> Vec<Params> {
    (0..=4).map(|m| Params(vec![("m", m)])).collect()
}

fn rs_grid() -> Vec<Params> {
    (0..=3).flat_map(|r| (0..=3).map(move |s| Params(vec![("r", r), ("s", s)]))).collect()
}

// ---------------------------------------------------------------------------
// Classical identities
// ---------------------------------------------------------------------------

fn jacobi_triple(i: &Inputs) -> Result<(Series, Series)> {
    let x = i.mono(Var::X)?;
    Ok((complete_theta(&x, i.ctx)?, triple_product_rhs(&x, i.ctx)?))
}

fn ramanujan_661(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a) = (i.ctx, i.mono(Var::A)?);
    let q_a = &q(1) * &a.recip()?;
    let lhs = sum(ctx, Tail::quadratic(2, 2), |n| exact_monomial(&(&a.pow(n)? * &q(n * n + n)), ctx))?;
    let first =
        sum(ctx, Tail::linear(0), |n| Ok(tm(ctx, &q(n))?.up(&q(n + 1), n)?.down(&a, n + 1)?.down(&q_a, n)?.done()))?;
    let second = sum(ctx, Tail::quadratic(6, 4), |n| {
        Ok(tm(ctx, &(&a.pow(3 * n + 1)? * &q(3 * n * n + 2 * n)))?.up(&a.shift_q(2 * n + 1), 1)?.done())
    })?;
    let second = div_poch_inf(&div_poch_inf(&second, &a, Q, ctx)?, &q_a, Q, ctx)?;
    Ok((lhs, &first - &second))
}

/// `sum q^{n(n+1)/2} a^n`, the common left side of the next two entries.
fn triangular_a(ctx: &EvalContext, a: &Monomial) -> Result<Series> {
    sum(ctx, Tail::quadratic(1, 1), |n| exact_monomial(&(&a.pow(n)? * &q(n * (n + 1) / 2)), ctx))
}

fn ramanujan_639(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a) = (i.ctx, i.mono(Var::A)?);
    let q_a = &q(1) * &a.recip()?;
    let first =
        sum(ctx, Tail::linear(0), |n| Ok(tm(ctx, &q(n))?.up_r(&q(1), n, 2)?.down(&a, n + 1)?.down(&q_a, n)?.done()))?;
    let second = sum(ctx, Tail::quadratic(2, 2), |n| {
        exact_monomial(&(&a.pow(2 * n + 1)? * &q(n * n + n)).scale(&sign(n + 1)), ctx)
    })?;
    let second = div_poch_inf(&second, &-q(1), Q, ctx)?;
    let second = div_poch_inf(&div_poch_inf(&second, &a, Q, ctx)?, &q_a, Q, ctx)?;
    Ok((triangular_a(ctx, &a)?, &first + &second))
}

fn ramanujan_6311(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a) = (i.ctx, i.mono(Var::A)?);
    let q2_a = &q(2) * &a.recip()?;
    let first = sum(ctx, Tail::linear(0), |n| {
        Ok(tm(ctx, &q(2 * n))?.up_r(&q(1), n, 2)?.down_r(&a, n + 1, 2)?.down_r(&q2_a, n, 2)?.done())
    })?;
    let second = sum(ctx, Tail::quadratic(6, 4), |n| {
        let lead = (&a.pow(3 * n + 1)? * &q(3 * n * n + 2 * n)).scale(&sign(n + 1));
        Ok(tm(ctx, &lead)?.up(&-a.shift_q(2 * n + 1), 1)?.done())
    })?;
    let second = div_poch_inf(&second, &-q(1), Q, ctx)?;
    let second = div_poch_inf(&div_poch_inf(&second, &a, base(2), ctx)?, &q2_a, base(2), ctx)?;
    Ok((triangular_a(ctx, &a)?, &first + &second))
}

fn andrews_yee(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a) = (i.ctx, i.mono(Var::A)?);
    let lhs = sum(ctx, Tail::quadratic(2, 0), |n| exact_monomial(&(&a.pow(n)? * &q(n * n)), ctx))?;
    let rhs = sum(ctx, Tail::quadratic(1, 1), |n| {
        if n == 0 {
            return Ok(ctx.one());
        }
        Ok(tm(ctx, &(&a.pow(n)? * &q(n * (n + 1) / 2)))?.up(&-q(1), n - 1)?.down_r(&-a.shift_q(2), n, 2)?.done())
    })?;
    Ok((lhs, rhs))
}

/// `(q, x, y; q)_inf sum_n (xy/q;q)_{2n} q^n / (q, x, y, xy; q)_n`.
fn warnaar_rhs(ctx: &EvalContext, x: &Monomial, y: &Monomial) -> Result<Series> {
    let xy = x * y;
    let s = sum(ctx, Tail::linear(-1), |n| {
        if n == 0 {
            return Ok(ctx.one());
        }
        // (xy/q;q)_{2n} / (xy;q)_n = (1 - xy/q) (xy q^n;q)_{n-1}
        Ok(tm(ctx, &q(n))?
            .up(&xy.shift_q(-1), 1)?
            .up(&xy.shift_q(n), n - 1)?
            .down(&q(1), n)?
            .down(x, n)?
            .down(y, n)?
            .done())
    })?;
    Ok(poch_inf_many(&[q(1), x.clone(), y.clone()], ctx)?.mul(&s))
}

fn warnaar_sum(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let lhs = &(&theta(&a, ctx)? + &theta(&b, ctx)?) - &ctx.one();
    Ok((lhs, warnaar_rhs(ctx, &a, &b)?))
}

/// `(q, a, b; q)_inf sum_n (ab q^{n-1};q)_n q^n V_n / ((q, a;q)_n (b;q)_{m+n})`,
/// with `V_n = 1` when `m` is `None`.
fn product_rhs(ctx: &EvalContext, a: &Monomial, b: &Monomial, m: Option<i64>) -> Result<Series> {
    let ab = a * b;
    let s = sum(ctx, Tail::linear(0), |n| {
        let mut t = tm(ctx, &q(n))?.up(&ab.shift_q(n - 1), n)?;
        if let Some(m) = m {
            t = t.times(&v_mn(m, n, a, b, ctx)?.value);
        }
        Ok(t.down(&q(1), n)?.down(a, n)?.down(b, m.unwrap_or(0) + n)?.done())
    })?;
    Ok(poch_inf_many(&[q(1), a.clone(), b.clone()], ctx)?.mul(&s))
}

fn andrews_warnaar_product(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let lhs = theta(&a, ctx)?.mul(&theta(&b, ctx)?);
    Ok((lhs, product_rhs(ctx, &a, &b, None)?))
}

fn schilling_warnaar(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let scale = inv(i.value(Var::A)? - i.value(Var::B)?);
    let lhs = (&theta(&a, ctx)? - &theta(&b, ctx)?).scale(&scale);
    let (aq, bq, ab) = (a.shift_q(1), b.shift_q(1), &a * &b);
    let s = sum(ctx, Tail::linear(0), |n| {
        Ok(tm(ctx, &q(n))?.up(&ab.shift_q(n), n)?.down(&q(1), n)?.down(&aq, n)?.down(&bq, n)?.done())
    })?;
    let rhs = poch_inf_many(&[q(1), aq.clone(), bq.clone()], ctx)?.mul(&s).neg();
    Ok((lhs, rhs))
}

fn alladi_berkovich(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let ab = &a * &b;
    // x / (x - 1) = -x / (1 - x)
    let frac = |x: &Monomial| -> Result<Series> { Ok(tm(ctx, &-x.clone())?.down(x, 1)?.done()) };
    let (fa, fb) = (frac(&a)?, frac(&b)?);
    let weight = |n: i64| -> Result<Tm> {
        let tau = tau_monomial(n);
        tm(ctx, &(&tau * &q(2 * n)))?.up(&ab, n)?.down(&q(1), n)
    };
    let first = sum(ctx, Tail::quadratic(1, 3), |n| {
        let inner = &fa.mul(&theta(&a.shift_q(1 + n), ctx)?) + &fb.mul(&theta(&b.shift_q(1 + n), ctx)?);
        Ok(weight(n)?.times(&inner).done())
    })?;
    let second = sum(ctx, Tail::quadratic(1, 3), |n| Ok(weight(n)?.times(&theta(&q(1 + n), ctx)?).done()))?;
    // (1 - ab) / ((1 - a)(1 - b))
    let coef = tm(ctx, &Monomial::one())?.up(&ab, 1)?.down(&a, 1)?.down(&b, 1)?.done();
    let lhs = &first + &coef.mul(&second);
    let rhs = poch_inf_many(&[a.shift_q(1), b.shift_q(1), q(1)], ctx)?;
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// U, V and the L / P representations
// ---------------------------------------------------------------------------

fn main_theorem(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let m = i.int("m")?;
    let lhs = u_m(m, &b, ctx)?.mul(&theta(&a, ctx)?);
    Ok((lhs, product_rhs(ctx, &a, &b, Some(m))?))
}

fn bivariate_rep(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let rhs = &big_l(&a, &b, ctx)? + &times(&big_l(&a.shift_q(1), &b.shift_q(1), ctx)?, &b, ctx)?;
    Ok((theta(&a, ctx)?, rhs))
}

fn swapped_rep(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let rhs = &big_l(&a, &b, ctx)? + &times(&big_l(&a.shift_q(1), &b.shift_q(1), ctx)?, &a, ctx)?;
    Ok((theta(&b, ctx)?, rhs))
}

fn trivariate_rep(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let lhs = poly(&[q(1), b.clone()], ctx)?.mul(&theta(&a, ctx)?);
    let p0 = times(&big_p(&a, &b, ctx)?, &q(1), ctx)?;
    let p1 = poly(&[b.clone(), b.shift_q(1)], ctx)?.mul(&big_p(&a.shift_q(1), &b.shift_q(1), ctx)?);
    let p2 = times(&big_p(&a.shift_q(2), &b.shift_q(2), ctx)?, &(&b.pow(2)? * &q(1)), ctx)?;
    Ok((lhs, &(&p0 + &p1) + &p2))
}

fn transform_known(i: &Inputs) -> Result<(Series, Series)> {
    let ctx = i.ctx;
    let (t, ua, ub, c) = (i.mono(Var::T)?, i.mono(Var::UpperA)?, i.mono(Var::UpperB)?, i.mono(Var::C)?);
    let ab_inv = (&ua * &ub).recip()?;
    let z = &(&t * &q(1)) * &ab_inv;
    let tq_a = &t.shift_q(1) * &ua.recip()?;
    let tq_b = &t.shift_q(1) * &ub.recip()?;
    let tq_c = &t.shift_q(1) * &c.recip()?;
    let s = sum(ctx, Tail::linear(0), |n| {
        Ok(tm(ctx, &z.pow(n)?)?.up(&ua, n)?.up(&ub, n)?.down(&q(1), n)?.down(&c, n)?.done())
    })?;
    let mut lhs = poch_inf_many(&[t.clone(), z.clone()], ctx)?.mul(&s);
    lhs = div_poch_inf(&div_poch_inf(&lhs, &tq_a, Q, ctx)?, &tq_b, Q, ctx)?;
    let w = &(&c * &t) * &ab_inv;
    let rhs = sum(ctx, Tail::quadratic(2, 0), |n| {
        Ok(tm(ctx, &(&w.pow(n)? * &q(n * n)))?
            .up(&t.shift_q(2 * n), 1)?
            .up(&t, n)?
            .up(&ua, n)?
            .up(&ub, n)?
            .up(&tq_c, n)?
            .down(&q(1), n)?
            .down(&tq_a, n)?
            .down(&tq_b, n)?
            .down(&c, n)?
            .done())
    })?;
    Ok((lhs, rhs))
}

/// `(t;q)_inf sum_n q^{n^2} t^n / (q, c;q)_n`.
fn t_product_sum(ctx: &EvalContext, t: &Monomial, c: &Monomial) -> Result<Series> {
    let s = sum(ctx, Tail::quadratic(2, 0), |n| {
        Ok(tm(ctx, &(&t.pow(n)? * &q(n * n)))?.down(&q(1), n)?.down(c, n)?.done())
    })?;
    Ok(poch_inf(t, Q, ctx)?.mul(&s))
}

fn corollary_main(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, t, c) = (i.ctx, i.mono(Var::A)?, i.mono(Var::C)?);
    let tq_c = &t.shift_q(1) * &c.recip()?;
    let ct = &c * &t;
    let rhs = sum(ctx, Tail::quadratic(4, -2), |n| {
        Ok(tm(ctx, &(&ct.pow(n)? * &q(2 * n * n - n)))?
            .up(&t.shift_q(2 * n), 1)?
            .up(&t, n)?
            .up(&tq_c, n)?
            .down(&q(1), n)?
            .down(&c, n)?
            .done())
    })?;
    Ok((t_product_sum(ctx, &t, &c)?, rhs))
}

fn corollary_main_added(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, t) = (i.ctx, i.mono(Var::A)?);
    Ok((t_product_sum(ctx, &t, &t)?, theta(&t, ctx)?))
}

fn f_product_form(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, b, c) = (i.ctx, i.mono(Var::B)?, i.mono(Var::C)?);
    Ok((f_kernel(&b, &c, ctx)?.value, t_product_sum(ctx, &b, &c)?))
}

fn theta_expansion(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a) = (i.ctx, i.mono(Var::A)?);
    let s = sum(ctx, Tail::linear(0), |n| Ok(tm(ctx, &q(n))?.down(&q(1), n)?.down(&a, n)?.done()))?;
    Ok((theta(&a, ctx)?, poch_inf_many(&[q(1), a.clone()], ctx)?.mul(&s)))
}

fn f_theta_product(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b, c) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?, i.mono(Var::C)?);
    let lhs = f_kernel(&b, &c, ctx)?.value.mul(&theta(&a, ctx)?);
    let s = sum(ctx, Tail::linear(0), |n| {
        Ok(tm(ctx, &q(n))?.times(&g_n(n, &a, &b, &c, ctx)?.value).down(&q(1), n)?.down(&a, n)?.done())
    })?;
    Ok((lhs, poch_inf_many(&[q(1), a.clone(), b.clone()], ctx)?.mul(&s)))
}

// ---------------------------------------------------------------------------
// Corollaries of the representations
// ---------------------------------------------------------------------------

fn corollary_b5(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let (av, bv) = (i.value(Var::A)?, i.value(Var::B)?);
    let d = inv(&av - &bv);
    let lhs = &theta(&a, ctx)?.scale(&(&av * &d)) - &theta(&b, ctx)?.scale(&(&bv * &d));
    Ok((lhs, big_l(&a, &b, ctx)?))
}

fn corollary_b6(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let d = inv(i.value(Var::A)? - i.value(Var::B)?);
    let (a2, b2) = (a.pow(2)?, b.pow(2)?);
    let left = poly(&[&a2 * &b, &a2 * &q(1)], ctx)?.mul(&theta(&a, ctx)?);
    let right = poly(&[&b2 * &a, &b2 * &q(1)], ctx)?.mul(&theta(&b, ctx)?);
    let lhs = (&left - &right).scale(&d);
    let p0 = poly(&[a.shift_q(1), b.shift_q(1)], ctx)?.mul(&big_p(&a, &b, ctx)?);
    let ab = &a * &b;
    let p1 = poly(&[ab.clone(), ab.shift_q(1)], ctx)?.mul(&big_p(&a.shift_q(1), &b.shift_q(1), ctx)?);
    Ok((lhs, &p0 + &p1))
}

fn corollary_b7(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a) = (i.ctx, i.mono(Var::A)?);
    let plus = poly(&[q(1), a.clone()], ctx)?.mul(&theta(&-a.clone(), ctx)?);
    let minus = poly(&[q(1), -a.clone()], ctx)?.mul(&theta(&a, ctx)?);
    let two_a = a.scale(&Rat::from_int(2));
    let rhs = poly(&[two_a.clone(), two_a.shift_q(1)], ctx)?.mul(&big_p(&a.shift_q(1), &-a.shift_q(1), ctx)?);
    Ok((&plus - &minus, rhs))
}

fn psi_product(i: &Inputs) -> Result<(Series, Series)> {
    let ctx = i.ctx;
    let lhs = theta(&-q(1), ctx)?;
    let rhs = poch_inf(&q(4), base(4), ctx)?.mul(&poch_inf(&-q(1), base(2), ctx)?);
    Ok((lhs, rhs))
}

fn coeff_theorem(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let rhs = sum(ctx, Tail::quadratic(1, -1), |k| {
        let tau = tau_monomial(k);
        let mut ms = Vec::new();
        for j in 0..=k {
            ms.push(&(&tau * &a.pow(k - j)?) * &b.pow(j)?);
        }
        poly(&ms, ctx)
    })?;
    Ok((big_l(&a, &b, ctx)?, rhs))
}

fn generalized_warnaar(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let (r, s) = (i.int("r")?, i.int("s")?);
    let mut lhs = ctx.zero();
    for k in 0..r {
        lhs = &lhs + &times(&theta(&b.shift_q(k), ctx)?, &(&tau_monomial(k) * &a.pow(k)?), ctx)?;
    }
    for k in 0..s {
        lhs = &lhs + &times(&theta(&a.shift_q(k), ctx)?, &(&tau_monomial(k) * &b.pow(k)?), ctx)?;
    }
    let mut corner = Vec::new();
    for x in 0..r {
        for y in 0..s {
            corner.push(&(&tau_monomial(x + y) * &a.pow(x)?) * &b.pow(y)?);
        }
    }
    lhs = &lhs - &poly(&corner, ctx)?;
    let shifted = big_l(&a.shift_q(r + s), &b.shift_q(r + s), ctx)?;
    let coef = &(&a.pow(r)? * &b.pow(s)?) * &tau_monomial(r + s);
    let rhs = &big_l(&a, &b, ctx)? - &times(&shifted, &coef, ctx)?;
    Ok((lhs, rhs))
}

fn mamade_contiguous(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let (a2, b2) = (a.shift_q(2), b.shift_q(2));
    let plain = sum(ctx, Tail::linear(-1), |n| t_summand(n, &a, &b, ctx))?;
    let lifted = sum(ctx, Tail::linear(0), |n| t_summand(n, &a2, &b2, ctx))?;
    let ab = &a * &b;
    let coef = tm(ctx, &ab.shift_q(1))?.down(&a, 2)?.down(&b, 2)?.done();
    let lhs = &plain - &coef.mul(&lifted);
    let rhs = sum(ctx, Tail::linear(-1), |n| {
        if n == 0 {
            return Ok(ctx.one());
        }
        // (ab/q;q)_{2n} / (ab;q)_n = (1 - ab/q) (ab q^n;q)_{n-1}
        Ok(tm(ctx, &q(n))?
            .up(&ab.shift_q(-1), 1)?
            .up(&ab.shift_q(n), n - 1)?
            .down(&q(1), n)?
            .down(&a, n)?
            .down(&b, n)?
            .done())
    })?;
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Bailey pairs
// ---------------------------------------------------------------------------

fn bailey_transform_unit(i: &Inputs) -> Result<(Series, Series)> {
    let (a, b) = (i.mono(Var::A)?, i.mono(Var::B)?);
    let mut pair = BaileyPair::unit(&(&a * &b).shift_q(-1), i.ctx)?;
    warnaar_l_transform_sides(&mut pair, &a, &b)
}

fn bailey_transform_t0_1(i: &Inputs) -> Result<(Series, Series)> {
    let mut pair = BaileyPair::alternating(&i.mono(Var::X)?, i.ctx)?;
    warnaar_l_transform_sides(&mut pair, &i.mono(Var::A)?, &Monomial::b())
}

fn bailey_transform_t0_2(i: &Inputs) -> Result<(Series, Series)> {
    let mut pair = BaileyPair::square(&i.mono(Var::X)?, i.ctx)?;
    warnaar_l_transform_sides(&mut pair, &i.mono(Var::A)?, &Monomial::b())
}

fn bailey_unit_theta(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, b) = (i.ctx, i.mono(Var::A)?, i.mono(Var::B)?);
    let (av, bv) = (i.value(Var::A)?, i.value(Var::B)?);
    let d = inv(&av - &bv);
    let (ca, cb) = (&av * &d, -(&bv * &d));
    let ab = &a * &b;
    let lhs = sum(ctx, Tail::quadratic(1, 1), |n| {
        let inner = &theta(&a.shift_q(1 + n), ctx)?.scale(&ca) + &theta(&b.shift_q(1 + n), ctx)?.scale(&cb);
        let t = tm(ctx, &(&tau_monomial(n) * &q(n)))?
            .up(&ab.shift_q(-1), n)?
            .down(&q(1), n)?
            .up(&ab.shift_q(2 * n - 1), 1)?
            .down(&ab.shift_q(-1), 1)?;
        Ok(t.times(&inner).done())
    })?;
    let rhs = poch_inf_many(&[a.shift_q(1), b.shift_q(1), q(1)], ctx)?;
    Ok((lhs, rhs))
}

fn bailey_t0_1_theta(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, x) = (i.ctx, i.mono(Var::A)?, i.mono(Var::X)?);
    let lhs = sum(ctx, Tail::quadratic(1, 1), |n| {
        let lead = (&x.pow(n)? * &q((n * n + n) / 2)).scale(&sign(n));
        Ok(tm(ctx, &lead)?.down(&q(1), n)?.times(&theta(&a.shift_q(n + 1), ctx)?).done())
    })?;
    let s =
        sum(ctx, Tail::linear(0), |n| Ok(tm(ctx, &q(n))?.up(&x, n)?.down(&q(1), n)?.down(&a.shift_q(1), n)?.done()))?;
    Ok((lhs, poch_inf_many(&[q(1), a.shift_q(1)], ctx)?.mul(&s)))
}

fn bailey_t0_2_theta(i: &Inputs) -> Result<(Series, Series)> {
    let (ctx, a, x) = (i.ctx, i.mono(Var::A)?, i.mono(Var::X)?);
    let lhs = sum(ctx, Tail::quadratic(2, 2), |n| {
        Ok(tm(ctx, &(&x.pow(n)? * &q(n * n + n)))?
            .down(&q(1), n)?
            .down(&x.shift_q(1), n)?
            .times(&theta(&a.shift_q(n + 1), ctx)?)
            .done())
    })?;
    let s = sum(ctx, Tail::linear(0), |n| {
        Ok(tm(ctx, &q(n))?.down(&q(1), n)?.down(&a.shift_q(1), n)?.down(&x.shift_q(1), n)?.done())
    })?;
    Ok((lhs, poch_inf_many(&[q(1), a.shift_q(1)], ctx)?.mul(&s)))
}

// ---------------------------------------------------------------------------
// The table
// ---------------------------------------------------------------------------

use Engine::{SpecializeOnly, SymbolicOk};
use Var::{UpperA, UpperB, A, B, C, T, X};

const AB_ONE: &[Pole] = &[Pole::One(A), Pole::One(B)];
/// The series for `L` and `P` divide by `(a, b;q)_n` and by a factor `1 - ab`.
const LP_POLES: &[Pole] = &[Pole::One(A), Pole::One(B), Pole::ProductOne(A, B)];
const LP_POLES_SPLIT: &[Pole] = &[Pole::One(A), Pole::One(B), Pole::ProductOne(A, B), Pole::Equal(A, B)];

#[rustfmt::skip]
fn build() -> Vec<IdentityDescriptor> {
    let d = |name, formula, engine, vars, poles, grid, sides, notes| IdentityDescriptor {
        name,
        formula,
        engine,
        vars,
        poles,
        grid,
        sides,
        notes,
    };
    vec![
        d("jacobi_triple", "sum_{n in Z} (-1)^n q^{n(n-1)/2} x^n = (q, x, q/x;q)_inf",
          SpecializeOnly, &[X], &[Pole::Zero(X)], single, jacobi_triple, ""),
        d("ramanujan_661",
          "sum q^{n(n+1)} a^n = sum (q^{n+1};q)_n q^n / ((a;q)_{n+1} (q/a;q)_n) - sum a^{3n+1} q^{n(3n+2)} (1 - a q^{2n+1}) / (a, q/a;q)_inf",
          SpecializeOnly, &[A], &[Pole::Zero(A), Pole::One(A)], single, ramanujan_661, ""),
        d("ramanujan_639",
          "sum q^{n(n+1)/2} a^n = sum (q;q^2)_n q^n / ((a;q)_{n+1} (q/a;q)_n) + sum (-1)^{n+1} a^{2n+1} q^{n(n+1)} / (-q, a, q/a;q)_inf",
          SpecializeOnly, &[A], &[Pole::Zero(A), Pole::One(A)], single, ramanujan_639, ""),
        d("ramanujan_6311",
          "sum q^{n(n+1)/2} a^n = sum (q;q^2)_n q^{2n} / ((a;q^2)_{n+1} (q^2/a;q^2)_n) + sum (-1)^{n+1} a^{3n+1} q^{n(3n+2)} (1 + a q^{2n+1}) / ((-q;q)_inf (a, q^2/a;q^2)_inf)",
          SpecializeOnly, &[A], &[Pole::Zero(A), Pole::One(A)], single, ramanujan_6311, ""),
        d("andrews_yee", "sum q^{n^2} a^n = 1 + sum_{n>=1} (-q;q)_{n-1} / (-a q^2;q^2)_n a^n q^{n(n+1)/2}",
          SymbolicOk, &[A], &[], single, andrews_yee, ""),
        d("warnaar_sum", "theta(q,a) + theta(q,b) - 1 = (q, a, b;q)_inf sum (ab/q;q)_{2n} q^n / (q, a, b, ab;q)_n",
          SymbolicOk, &[A, B], &[Pole::One(A), Pole::One(B), Pole::ProductOne(A, B)], single, warnaar_sum, ""),
        d("andrews_warnaar_product", "theta(q,a) theta(q,b) = (q, a, b;q)_inf sum (ab/q;q)_{2n} q^n / (q, a, b, ab/q;q)_n",
          SymbolicOk, &[A, B], AB_ONE, single, andrews_warnaar_product, ""),
        d("schilling_warnaar", "(theta(q,a) - theta(q,b)) / (a - b) = -(q, aq, bq;q)_inf sum (ab;q)_{2n} q^n / (q, aq, bq, ab;q)_n",
          SpecializeOnly, &[A, B], &[Pole::Equal(A, B)], single, schilling_warnaar, ""),
        d("alladi_berkovich",
          "sum tau(n) q^{2n} {a/(a-1) theta(q,aq^{1+n}) + b/(b-1) theta(q,bq^{1+n})} (ab;q)_n/(q;q)_n + (1-ab)/((1-a)(1-b)) sum tau(n) q^{2n} theta(q,q^{1+n}) (ab;q)_n/(q;q)_n = (aq, bq, q;q)_inf",
          SymbolicOk, &[A, B], &[Pole::One(A), Pole::One(B), Pole::ProductOne(A, B)], single, alladi_berkovich,
          "a/(a-1) is expanded as -a/(1-a), a power series in a"),
        d("main_theorem", "U_m(b) theta(q,a) = (q, a, b;q)_inf sum (ab q^{n-1};q)_n q^n V_{m,n}(a,b) / ((q, a;q)_n (b;q)_{m+n})",
          SymbolicOk, &[A, B], AB_ONE, m_grid, main_theorem, "m = 0 uses U_0(b) = theta(q,b)"),
        d("bivariate_rep", "theta(q,a) = L(a,b) + b L(aq,bq)",
          SymbolicOk, &[A, B], LP_POLES, single, bivariate_rep, ""),
        d("swapped_rep", "theta(q,b) = L(a,b) + a L(aq,bq)",
          SymbolicOk, &[A, B], LP_POLES, single, swapped_rep, ""),
        d("trivariate_rep", "(q + b) theta(q,a) = q P(a,b) + b(1+q) P(aq,bq) + b^2 q P(aq^2,bq^2)",
          SymbolicOk, &[A, B], LP_POLES, single, trivariate_rep, "checked with the denominator q + b cleared"),
        d("transform_known",
          "(t, tq/(AB);q)_inf / (tq/A, tq/B;q)_inf sum (A, B;q)_n / (q, c;q)_n (tq/(AB))^n = sum (t, A, B, tq/c;q)_n / (q, tq/A, tq/B, c;q)_n (1 - t q^{2n}) (ct/(AB))^n q^{n^2}",
          SymbolicOk, &[T, UpperA, UpperB, C], &[Pole::One(C)], single, transform_known, ""),
        d("corollary_main", "(t;q)_inf sum q^{n^2} t^n / (q, c;q)_n = sum (t, tq/c;q)_n / (q, c;q)_n (1 - t q^{2n}) (ct)^n q^{2n^2-n}",
          SymbolicOk, &[A, C], &[Pole::One(C)], single, corollary_main, "t is carried by the variable a"),
        d("corollary_main_added", "(t;q)_inf sum q^{n^2} t^n / (q, t;q)_n = sum tau(n) t^n",
          SymbolicOk, &[A], &[Pole::One(A)], single, corollary_main_added, "t is carried by the variable a"),
        d("f_product_form", "f(b,c) = (b;q)_inf sum q^{n^2} b^n / (q, c;q)_n",
          SymbolicOk, &[B, C], &[Pole::One(C)], single, f_product_form, ""),
        d("theta_expansion", "theta(q,a) = (q, a;q)_inf sum q^n / (q, a;q)_n",
          SymbolicOk, &[A], &[Pole::One(A)], single, theta_expansion, ""),
        d("corollary_b5", "a theta(q,a)/(a-b) - b theta(q,b)/(a-b) = L(a,b)",
          SpecializeOnly, &[A, B], LP_POLES_SPLIT, single, corollary_b5, ""),
        d("corollary_b6", "[a^2 (b+q) theta(q,a) - b^2 (a+q) theta(q,b)] / (a-b) = q(a+b) P(a,b) + ab(q+1) P(aq,bq)",
          SpecializeOnly, &[A, B], LP_POLES_SPLIT, single, corollary_b6,
          "the two displayed lines are read as one equation, left side = right side"),
        d("corollary_b7", "(q+a) theta(q,-a) - (q-a) theta(q,a) = 2a(1+q) P(aq,-aq)",
          SymbolicOk, &[A], &[], single, corollary_b7, ""),
        d("psi_product", "sum q^{n(n+1)/2} = (q^4;q^4)_inf (-q;q^2)_inf",
          SymbolicOk, &[], &[], single, psi_product, ""),
        d("coeff_theorem", "L(a,b) = sum_{i,j>=0} tau(i+j) a^i b^j",
          SymbolicOk, &[A, B], LP_POLES, single, coeff_theorem, ""),
        d("generalized_warnaar",
          "sum_{i<r} tau(i) a^i theta(q,bq^i) + sum_{i<s} tau(i) b^i theta(q,aq^i) - sum_{i<r,j<s} tau(i+j) a^i b^j = L(a,b) - a^r b^s tau(r+s) L(aq^{r+s},bq^{r+s})",
          SymbolicOk, &[A, B], LP_POLES, rs_grid, generalized_warnaar, ""),
        d("mamade_contiguous",
          "sum t(a,b;n) - abq/((1-a)(1-aq)(1-b)(1-bq)) sum t(aq^2,bq^2;n) = sum (ab/q;q)_{2n} q^n / (q, a, b, ab;q)_n",
          SymbolicOk, &[A, B], &[Pole::One(A), Pole::One(B), Pole::ProductOne(A, B)], single, mamade_contiguous,
          "t(a,b;n) = (ab/q^2;q)_{2n} q^n / (q, a, b, ab/q^2;q)_n"),
        d("bailey_transform_unit",
          "sum L(aq^{n+1},bq^{n+1}) q^n alpha_n = (q, aq, bq;q)_inf sum (ab;q)_{2n} q^n beta_n / (aq, bq;q)_n, unit pair relative to ab/q",
          SpecializeOnly, &[A, B], &[], single, bailey_transform_unit,
          "beta_n = delta_{n,0}; specialized only to keep the nested L sums cheap"),
        d("bailey_transform_t0_1",
          "the same transform with b = 0 and alpha_n = (-1)^n x^n q^{(n^2-n)/2}/(q;q)_n, beta_n = (x;q)_n/(q;q)_n",
          SpecializeOnly, &[A, X], &[], single, bailey_transform_t0_1, "b is fixed to 0 so that the pair is relative to ab/q = 0"),
        d("bailey_transform_t0_2",
          "the same transform with b = 0 and alpha_n = x^n q^{n^2}/(q, xq;q)_n, beta_n = 1/(q, xq;q)_n",
          SpecializeOnly, &[A, X], &[], single, bailey_transform_t0_2, "b is fixed to 0 so that the pair is relative to ab/q = 0"),
        d("f_theta_product", "f(b,c) theta(q,a) = (q, a, b;q)_inf sum q^n g_n(a,b,c) / (q, a;q)_n",
          SpecializeOnly, &[A, B, C], &[Pole::One(A), Pole::One(C)], single, f_theta_product, ""),
        d("bailey_unit_theta",
          "sum q^n tau(n) {a/(a-b) theta(q,aq^{1+n}) + b/(b-a) theta(q,bq^{1+n})} (ab/q;q)_n/(q;q)_n (1 - ab q^{2n-1})/(1 - ab/q) = (aq, bq, q;q)_inf",
          SpecializeOnly, &[A, B], &[Pole::Equal(A, B)], single, bailey_unit_theta, ""),
        d("bailey_t0_1_theta",
          "sum theta(q,aq^{n+1}) (-1)^n x^n q^{(n^2+n)/2} / (q;q)_n = (q, aq;q)_inf sum (x;q)_n q^n / (q, aq;q)_n",
          SymbolicOk, &[A, X], &[], single, bailey_t0_1_theta, ""),
        d("bailey_t0_2_theta",
          "sum theta(q,aq^{n+1}) x^n q^{n^2+n} / (q, xq;q)_n = (q, aq;q)_inf sum q^n / (q, aq, xq;q)_n",
          SymbolicOk, &[A, X], &[], single, bailey_t0_2_theta, ""),
    ]
}

/// The full registry, in listing order.
pub fn registry() -> &'static [IdentityDescriptor] {
    static REGISTRY: OnceLock<Vec<IdentityDescriptor>> = OnceLock::new();
    REGISTRY.get_or_init(build)
}
