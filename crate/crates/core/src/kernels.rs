//! Named kernels and summands: `U_m`, `V_{m,n}`, `f(b, c)`, `g_n(a, b, c)`,
//! `L(x, y)`, `P(x, y)` and the summand `t(x, y; n)`.
//!
//! Every kernel takes its variables as monomials, so shifted and swapped
//! forms such as `L(a q^i, b q^i)`, `L(b, a)` or `P(a q, -a q)` are ordinary
//! calls. The `L`/`P` sums never divide by `(xy/q^s; q)_n`: the ratio
//! `(x;q)_{2n} / (x;q)_n` is rewritten as `(x q^n; q)_n` first.

use crate::error::{Error, Result};
use crate::qfun::{
    self, div_poch, exact_term, mul_poch, negative_part_sum, phi21, settle_index, sum_finite, sum_series, BaseExp,
    Summation, Tail,
};
use crate::series::{EvalContext, Exp, Monomial, Rat, Series, Term};

const Q: BaseExp = BaseExp::Q;

fn q(k: i64) -> Monomial {
    Monomial::q_pow(k)
}

fn require_nonnegative_q(t: &Term, what: &str) -> Result<()> {
    if t.is_zero() {
        return Ok(());
    }
    if t.exp.a < 0 || t.exp.b < 0 {
        return Err(Error::NonTruncatable(format!("{what} has a negative a/b exponent")));
    }
    if t.exp.q < 0 && (t.exp.a > 0 || t.exp.b > 0) {
        return Err(Error::NonTruncatable(format!("{what} mixes a formal variable with a negative q power")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// U_m and V_{m,n}
// ---------------------------------------------------------------------------

/// `U_m(b)` from its defining sum. For `m >= 1` the factor `(q^{1-m}; q)_k`
/// stops the sum after exactly `m` terms.
pub fn u_m_sum(m: i64, b: &Monomial, ctx: &EvalContext) -> Result<Summation> {
    if m < 0 {
        return Err(Error::InvalidParameter(format!("U_m needs m >= 0, got {m}")));
    }
    let tb = ctx.bind(b)?;
    require_nonnegative_q(&tb, "U_m argument")?;
    let term = |k: i64| -> Result<Series> {
        let lead = ctx.bind(&(&b.pow(2 * k)? * &q(2 * k * k - k + m * k)))?;
        let mut s = exact_term(&lead, ctx);
        s = mul_poch(&s, &b.shift_q(2 * k), 1, Q, ctx)?;
        s = mul_poch(&s, &q(1 - m), k, Q, ctx)?;
        s = div_poch(&s, &q(1), k, Q, ctx)?;
        div_poch(&s, &b.shift_q(k), m, Q, ctx)
    };
    let hi = ctx.working_hi();
    if m >= 1 {
        return sum_finite(hi, m, term);
    }
    // m = 0: q-order 2k^2 - k + 2k e_b
    let tail = Tail::quadratic(4, 4 * tb.exp.q - 2).with_growth(2 * tb.exp.a, 2 * tb.exp.b);
    sum_series(hi, &tail, term)
}

/// `U_m(b)`; the case `m = 0` is `theta(q, b)` and goes through the partial
/// theta function directly.
pub fn u_m(m: i64, b: &Monomial, ctx: &EvalContext) -> Result<Series> {
    if m == 0 {
        return qfun::partial_theta(b, ctx);
    }
    Ok(u_m_sum(m, b, ctx)?.value)
}

/// `V_{m,n}(a, b) = 2phi1(q^{-m}, q^{-n}; a b q^{n-1}; q, b q^{m+n})`, summed
/// exactly over its `min(m, n) + 1` terms.
pub fn v_mn(m: i64, n: i64, a: &Monomial, b: &Monomial, ctx: &EvalContext) -> Result<Summation> {
    if m < 0 || n < 0 {
        return Err(Error::InvalidParameter(format!("V_(m,n) needs m, n >= 0, got ({m}, {n})")));
    }
    let ab = a * b;
    phi21(&q(-m), &q(-n), &ab.shift_q(n - 1), &b.shift_q(m + n), Q, ctx)
}

/// The closed forms of `V_{m,n}` for `m <= 2`.
pub fn v_closed(m: i64, n: i64, a: &Monomial, b: &Monomial, ctx: &EvalContext) -> Result<Series> {
    let ab = a * b;
    let one = ctx.one();
    let lift = |s: Series, x: &Monomial| -> Result<Series> {
        let t = ctx.bind(x)?;
        Ok(s.mul_term(&t.coef, t.exp))
    };
    // d1 = 1 - ab q^{n-1}, d2 = 1 - ab q^n
    let d1 = ctx.bind(&ab.shift_q(n - 1))?;
    let d2 = ctx.bind(&ab.shift_q(n))?;
    match m {
        0 => Ok(one),
        1 => {
            // (1 - ab q^{n-1} + b (1 - q^n)) / (1 - ab q^{n-1})
            let b_part = lift(one.mul_binomial(&Rat::one(), Exp::q(n)), b)?;
            let num = &one.mul_binomial(&d1.coef, d1.exp) + &b_part;
            num.div_binomial(&d1.coef, d1.exp)
        }
        2 => {
            let t1 = lift(one.mul_binomial(&Rat::one(), Exp::q(n)), &b.shift_q(0))?;
            let t1 = (&t1 + &t1.mul_term(&Rat::one(), Exp::q(1))).div_binomial(&d1.coef, d1.exp)?;
            let t2 = lift(one.clone(), &(&b.pow(2)? * &q(2)))?
                .mul_binomial(&Rat::one(), Exp::q(n - 1))
                .mul_binomial(&Rat::one(), Exp::q(n))
                .div_binomial(&d1.coef, d1.exp)?
                .div_binomial(&d2.coef, d2.exp)?;
            Ok(&(&one + &t1) + &t2)
        }
        _ => Err(Error::InvalidParameter(format!("closed forms of V_(m,n) are only known for m <= 2, got m = {m}"))),
    }
}

// ---------------------------------------------------------------------------
// f and g
// ---------------------------------------------------------------------------

/// `f(b, c) = sum_n (b, bq/c; q)_n / (q, c; q)_n (1 - b q^{2n}) (bc)^n q^{2n^2 - n}`.
pub fn f_kernel(b: &Monomial, c: &Monomial, ctx: &EvalContext) -> Result<Summation> {
    let tb = ctx.bind(b)?;
    let tc = ctx.bind(c)?;
    require_nonnegative_q(&tb, "f argument b")?;
    require_nonnegative_q(&tc, "f argument c")?;
    if tc.is_zero() {
        return Err(Error::PoleAtZero("f(b, c) at c = 0".into()));
    }
    let bq_c = &(b * &q(1)) * &c.recip()?;
    let bc = b * c;
    let t_bqc = ctx.bind(&bq_c)?;
    let t_bc = ctx.bind(&bc)?;

    let term = |n: i64| -> Result<Series> {
        let lead = ctx.bind(&(&bc.pow(n)? * &q(2 * n * n - n)))?;
        let mut s = exact_term(&lead, ctx);
        s = mul_poch(&s, &b.shift_q(2 * n), 1, Q, ctx)?;
        s = mul_poch(&s, b, n, Q, ctx)?;
        s = mul_poch(&s, &bq_c, n, Q, ctx)?;
        s = div_poch(&s, &q(1), n, Q, ctx)?;
        div_poch(&s, c, n, Q, ctx)
    };
    let (settle, offset) = if t_bqc.is_zero() {
        (0, 0)
    } else {
        let s = settle_index(t_bqc.exp.q, 1);
        (s, negative_part_sum(t_bqc.exp.q, 1, s))
    };
    let tail = Tail::quadratic(4, 2 * (t_bc.exp.q - 1))
        .with_offset(offset)
        .settled_at(settle)
        .with_growth(t_bc.exp.a, t_bc.exp.b);
    sum_series(ctx.working_hi(), &tail, term)
}

/// `g_n(a, b, c) = 2phi1(q^{-n}, q^{1-n}/a; c; q, a b q^{2n-1})`.
pub fn g_n(n: i64, a: &Monomial, b: &Monomial, c: &Monomial, ctx: &EvalContext) -> Result<Summation> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("g_n needs n >= 0, got {n}")));
    }
    let upper = &q(1 - n) * &a.recip()?;
    phi21(&q(-n), &upper, c, &(a * b).shift_q(2 * n - 1), Q, ctx)
}

// ---------------------------------------------------------------------------
// L, P and the summand t
// ---------------------------------------------------------------------------

/// `q^n (xy q^{n-s}; q)_n / (q, x, y; q)_n`; with `s = 2` this is `t(x, y; n)`.
pub fn shifted_summand(n: i64, x: &Monomial, y: &Monomial, s: i64, ctx: &EvalContext) -> Result<Series> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("summand index must be >= 0, got {n}")));
    }
    let xy = x * y;
    let lead = ctx.bind(&q(n))?;
    let mut out = mul_poch(&exact_term(&lead, ctx), &xy.shift_q(n - s), n, Q, ctx)?;
    for d in [q(1), x.clone(), y.clone()] {
        out = div_poch(&out, &d, n, Q, ctx)?;
    }
    Ok(out)
}

/// `t(x, y; n) = (xy/q^2; q)_{2n} q^n / (q, x, y, xy/q^2; q)_n`.
pub fn t_summand(n: i64, x: &Monomial, y: &Monomial, ctx: &EvalContext) -> Result<Series> {
    shifted_summand(n, x, y, 2, ctx)
}

/// `(q, x, y; q)_inf sum_n (xy/q^s; q)_{2n} q^n / (q, x, y, xy/q^s; q)_n`,
/// which is `L` for `s = 2` and `P` for `s = 3`.
///
/// The prefactor is folded into the running quotient
/// `E_n = (q^{n+1}, x q^n, y q^n; q)_inf`, so no general product is needed.
/// Past the first few indices each term follows from the previous one by
/// six binomial factors.
pub fn lp_kernel(x: &Monomial, y: &Monomial, s: i64, ctx: &EvalContext) -> Result<Summation> {
    let tx = ctx.bind(x)?;
    let ty = ctx.bind(y)?;
    let xy = x * y;
    let txy = ctx.bind(&xy)?;
    for (t, what) in [(&tx, "first argument"), (&ty, "second argument"), (&txy, "product of arguments")] {
        require_nonnegative_q(t, what)?;
    }

    let mut e = qfun::poch_inf_many(&[q(1), x.clone(), y.clone()], ctx)?;
    let mut prev: Option<Series> = None;
    let term = |n: i64| -> Result<Series> {
        if n > 0 {
            e = div_poch(&e, &q(n), 1, Q, ctx)?;
            e = div_poch(&e, &x.shift_q(n - 1), 1, Q, ctx)?;
            e = div_poch(&e, &y.shift_q(n - 1), 1, Q, ctx)?;
        }
        let ratio_ok = n >= 2 && (txy.is_zero() || txy.exp.q + n - 1 - s >= 0);
        let cur = match (&prev, ratio_ok) {
            (Some(p), true) => {
                // t_n / t_{n-1} = q (1 - xy q^{2n-2-s})(1 - xy q^{2n-1-s})
                //               / ((1 - xy q^{n-1-s})(1 - q^n)(1 - x q^{n-1})(1 - y q^{n-1}))
                let mut c = p.mul_term(&Rat::one(), Exp::q(1));
                c = mul_poch(&c, &xy.shift_q(2 * n - 2 - s), 2, Q, ctx)?;
                c = div_poch(&c, &xy.shift_q(n - 1 - s), 1, Q, ctx)?;
                c = div_poch(&c, &q(n), 1, Q, ctx)?;
                c = div_poch(&c, &x.shift_q(n - 1), 1, Q, ctx)?;
                div_poch(&c, &y.shift_q(n - 1), 1, Q, ctx)?
            }
            _ => {
                let lead = ctx.bind(&q(n))?;
                let c = e.mul_term(&lead.coef, lead.exp);
                mul_poch(&c, &xy.shift_q(n - s), n, Q, ctx)?
            }
        };
        prev = Some(cur.clone());
        Ok(cur)
    };
    // From the settle index on, every factor has nonnegative q-order and the
    // n-th term starts at q^n.
    let mut settle = 0;
    for (t, lag) in [(&txy, s), (&tx, 0), (&ty, 0)] {
        if !t.is_zero() {
            settle = settle.max(lag - t.exp.q);
        }
    }
    sum_series(ctx.working_hi(), &Tail::linear(0).settled_at(settle), term)
}

/// `L(x, y) = (q, x, y; q)_inf sum_n (xy/q^2; q)_{2n} q^n / (q, x, y, xy/q^2; q)_n`.
pub fn big_l(x: &Monomial, y: &Monomial, ctx: &EvalContext) -> Result<Series> {
    Ok(lp_kernel(x, y, 2, ctx)?.value)
}

/// `P(x, y) = (q, x, y; q)_inf sum_n (xy/q^3; q)_{2n} q^n / (q, x, y, xy/q^3; q)_n`.
pub fn big_p(x: &Monomial, y: &Monomial, ctx: &EvalContext) -> Result<Series> {
    Ok(lp_kernel(x, y, 3, ctx)?.value)
}

#[cfg(test)]
mod tests;
