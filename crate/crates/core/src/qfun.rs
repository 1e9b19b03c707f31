//! q-special functions on truncated series.
//!
//! Everything here takes its arguments as [`Monomial`]s and evaluates them
//! through an [`EvalContext`], so the same code serves the symbolic engine
//! (formal `a`, `b`) and the specialization engine (rational `a`, `b`).
//! Products by q-shifted factorials are applied one binomial factor at a time
//! instead of through a general truncated product.

use crate::error::{Error, Result};
use crate::series::{EvalContext, Exp, Monomial, Rat, Series, Term, INF};

/// Base `q^r` of a q-shifted factorial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BaseExp(i64);

impl BaseExp {
    pub const Q: BaseExp = BaseExp(1);

    pub fn new(r: i64) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidParameter(format!("base exponent must be positive, got {r}")));
        }
        Ok(BaseExp(r))
    }

    pub fn r(self) -> i64 {
        self.0
    }
}

impl Default for BaseExp {
    fn default() -> Self {
        BaseExp::Q
    }
}

// ---------------------------------------------------------------------------
// Summation with certified cutoffs
// ---------------------------------------------------------------------------

/// Lower bound on the support of the terms of an infinite sum.
///
/// From index `settle` on, the `n`-th term has no monomial of `q`-order below
/// `(quad2 * n^2 + lin2 * n) / 2 + offset`, and no monomial of `a`/`b` degree
/// below `n` times `growth`. The bound must be nondecreasing from `settle`
/// on; [`Tail::floor`] refuses indices where it is not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tail {
    pub quad2: i64,
    pub lin2: i64,
    pub offset: i64,
    pub settle: i64,
    pub growth: (i64, i64),
}

impl Tail {
    /// Terms of `q`-order at least `n + offset`.
    pub fn linear(offset: i64) -> Self {
        Tail { quad2: 0, lin2: 2, offset, settle: 0, growth: (0, 0) }
    }

    /// Terms of `q`-order at least `(quad2 n^2 + lin2 n) / 2`.
    pub fn quadratic(quad2: i64, lin2: i64) -> Self {
        Tail { quad2, lin2, offset: 0, settle: 0, growth: (0, 0) }
    }

    pub fn settled_at(mut self, n: i64) -> Self {
        self.settle = self.settle.max(n);
        self
    }

    pub fn with_offset(mut self, offset: i64) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_growth(mut self, a: i64, b: i64) -> Self {
        self.growth = (a.max(0), b.max(0));
        self
    }

    fn grows(&self) -> bool {
        self.quad2 > 0 || self.lin2 > 0 || self.growth.0 > 0 || self.growth.1 > 0
    }

    /// Support floor shared by every term with index `>= n`, when certified.
    pub fn floor(&self, n: i64) -> Option<Exp> {
        if n < self.settle {
            return None;
        }
        // doubled increment from n to n + 1
        if self.quad2 * (2 * n + 1) + self.lin2 < 0 {
            return None;
        }
        let q = (self.quad2 * n * n + self.lin2 * n).div_euclid(2) + self.offset;
        Some(Exp::new(q, self.growth.0 * n, self.growth.1 * n))
    }
}

/// An evaluated sum together with its termination certificate.
#[derive(Clone, Debug)]
pub struct Summation {
    pub value: Series,
    /// Number of terms actually added.
    pub terms: usize,
    /// Support floor of everything omitted; `None` for a terminating sum.
    pub tail_floor: Option<Exp>,
}

const MAX_TERMS: i64 = 1 << 20;

/// Add `term(0) + term(1) + ...` until the tail certificate clears `hi`.
pub fn sum_series<F>(hi: Exp, tail: &Tail, mut term: F) -> Result<Summation>
where
    F: FnMut(i64) -> Result<Series>,
{
    if !tail.grows() {
        return Err(Error::NonTruncatable("terms do not grow in q-order or in a/b degree".into()));
    }
    let mut acc = Series::zero(hi);
    for n in 0..MAX_TERMS {
        if let Some(f) = tail.floor(n) {
            if f.exceeds_any(&hi) {
                return Ok(Summation { value: acc.with_floor(f), terms: n as usize, tail_floor: Some(f) });
            }
        }
        acc = &acc + &term(n)?;
    }
    Err(Error::NonTruncatable(format!("no cutoff within {MAX_TERMS} terms")))
}

/// `term(0) + ... + term(count - 1)`.
pub fn sum_finite<F>(hi: Exp, count: i64, mut term: F) -> Result<Summation>
where
    F: FnMut(i64) -> Result<Series>,
{
    let mut acc = Series::zero(hi);
    for n in 0..count {
        acc = &acc + &term(n)?;
    }
    Ok(Summation { value: acc, terms: count.max(0) as usize, tail_floor: None })
}

/// Sum of the negative parts of `e, e + r, e + 2r, ...` over `count` steps,
/// the lowest `q`-order a numerator factorial `(x; q^r)_count` can reach.
pub(crate) fn negative_part_sum(e: i64, r: i64, count: i64) -> i64 {
    (0..count).map(|k| (e + r * k).min(0)).sum()
}

/// Smallest `n >= 0` with `e + r * n >= 0`.
pub(crate) fn settle_index(e: i64, r: i64) -> i64 {
    if e >= 0 {
        0
    } else {
        (-e + r - 1) / r
    }
}

/// `t` as an exact one-term series. The window starts from the exact unit
/// and moves up with the term, so factors applied afterwards keep the full
/// working order.
pub fn exact_term(t: &Term, ctx: &EvalContext) -> Series {
    let hi = ctx.working_hi();
    ctx.one().mul_term(&t.coef, t.exp).truncate(Exp::new(INF, hi.a, hi.b))
}

pub fn exact_monomial(m: &Monomial, ctx: &EvalContext) -> Result<Series> {
    Ok(exact_term(&ctx.bind(m)?, ctx))
}

// ---------------------------------------------------------------------------
// tau
// ---------------------------------------------------------------------------

/// `tau(n) = (-1)^n q^{n(n-1)/2}` as a monomial.
pub fn tau_monomial(n: i64) -> Monomial {
    let sign = if n.rem_euclid(2) == 0 { Rat::one() } else { -Rat::one() };
    Monomial::new(sign, n * (n - 1) / 2, 0, 0)
}

pub fn tau(n: i64, ctx: &EvalContext) -> Series {
    let m = tau_monomial(n);
    Series::term(m.coef().clone(), m.exp(), ctx.working_hi())
}

// ---------------------------------------------------------------------------
// q-shifted factorials
// ---------------------------------------------------------------------------

/// True when multiplying `s` by `1 - t` cannot change anything on its window.
fn trivial_on(s: &Series, t: &Term) -> bool {
    t.is_zero() || (s.window().lo + t.exp).exceeds_any(&s.window().hi)
}

/// `s * (x; q^r)_n` for `n >= 0`.
pub fn mul_poch(s: &Series, x: &Monomial, n: i64, base: BaseExp, ctx: &EvalContext) -> Result<Series> {
    let mut out = s.clone();
    for k in 0..n {
        let t = ctx.bind(&x.shift_q(base.r() * k))?;
        if !trivial_on(&out, &t) || t.exp.is_zero() {
            out = out.mul_binomial(&t.coef, t.exp);
        }
    }
    Ok(out)
}

/// `s / (x; q^r)_n` for `n >= 0`.
pub fn div_poch(s: &Series, x: &Monomial, n: i64, base: BaseExp, ctx: &EvalContext) -> Result<Series> {
    let mut out = s.clone();
    for k in 0..n {
        let t = ctx.bind(&x.shift_q(base.r() * k))?;
        if !trivial_on(&out, &t) || t.exp.is_zero() {
            out = out.div_binomial(&t.coef, t.exp)?;
        }
    }
    Ok(out)
}

/// Runs `step` on the factors `1 - x q^{rk}`, `k = 0, 1, ...`, until they can
/// no longer reach the window of the running value.
fn over_infinite_factors<F>(s: &Series, x: &Monomial, base: BaseExp, ctx: &EvalContext, mut step: F) -> Result<Series>
where
    F: FnMut(&Series, &Term) -> Result<Series>,
{
    let mut out = s.clone();
    if x.is_zero() {
        return Ok(out);
    }
    for k in 0.. {
        let t = ctx.bind(&x.shift_q(base.r() * k))?;
        if t.exp.a < 0 || t.exp.b < 0 {
            return Err(Error::NonTruncatable(format!("infinite product over {x} has negative a/b exponents")));
        }
        if out.window().lo.q <= -INF / 2 {
            return Err(Error::NonTruncatable(format!("product over {x} has no q floor")));
        }
        if t.is_zero() || trivial_on(&out, &t) && !t.exp.is_zero() {
            break;
        }
        out = step(&out, &t)?;
    }
    Ok(out)
}

/// `s * (x; q^r)_inf`.
pub fn mul_poch_inf(s: &Series, x: &Monomial, base: BaseExp, ctx: &EvalContext) -> Result<Series> {
    over_infinite_factors(s, x, base, ctx, |acc, t| Ok(acc.mul_binomial(&t.coef, t.exp)))
}

/// `s / (x; q^r)_inf`.
pub fn div_poch_inf(s: &Series, x: &Monomial, base: BaseExp, ctx: &EvalContext) -> Result<Series> {
    over_infinite_factors(s, x, base, ctx, |acc, t| acc.div_binomial(&t.coef, t.exp))
}

/// `(x; q^r)_n` for every integer `n`, with `(x; q^r)_{-k}` read as
/// `1 / prod_{j=1..k} (1 - x q^{-rj})`.
pub fn poch_finite(x: &Monomial, n: i64, base: BaseExp, ctx: &EvalContext) -> Result<Series> {
    if n >= 0 {
        return mul_poch(&ctx.one(), x, n, base, ctx);
    }
    let shifted = x.shift_q(base.r() * n);
    div_poch(&ctx.one(), &shifted, -n, base, ctx)
}

/// `(x; q^r)_inf`.
pub fn poch_inf(x: &Monomial, base: BaseExp, ctx: &EvalContext) -> Result<Series> {
    mul_poch_inf(&ctx.one(), x, base, ctx)
}

/// `(x_1, ..., x_k; q)_inf`.
pub fn poch_inf_many(xs: &[Monomial], ctx: &EvalContext) -> Result<Series> {
    let mut out = ctx.one();
    for x in xs {
        out = mul_poch_inf(&out, x, BaseExp::Q, ctx)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Theta functions
// ---------------------------------------------------------------------------

fn bound_nonnegative(t: &Term, what: &str) -> Result<()> {
    if t.exp.a < 0 || t.exp.b < 0 {
        return Err(Error::NonTruncatable(format!("{what} has negative exponents in a formal variable")));
    }
    Ok(())
}

/// `sum_{n>=0} (-1)^n q^{r n(n-1)/2} x^n`, the partial theta function in base `q^r`.
pub fn partial_theta_base(x: &Monomial, base: BaseExp, ctx: &EvalContext) -> Result<Series> {
    let hi = ctx.working_hi();
    let t = ctx.bind(x)?;
    if t.is_zero() {
        return Ok(ctx.one());
    }
    bound_nonnegative(&t, "partial theta argument")?;
    let r = base.r();
    let e = t.exp;
    let mut terms = Vec::new();
    let mut coef = Rat::one();
    let neg_c = -&t.coef;
    let mut lo_q = 0;
    for n in 0i64.. {
        let ex = Exp::new(r * n * (n - 1) / 2 + e.q * n, e.a * n, e.b * n);
        let increasing = r * n + e.q >= 0;
        let past_a = e.a > 0 && ex.a > hi.a;
        let past_b = e.b > 0 && ex.b > hi.b;
        if increasing && (ex.q > hi.q || past_a || past_b) {
            break;
        }
        lo_q = lo_q.min(ex.q);
        terms.push((ex, coef.clone()));
        coef = &coef * &neg_c;
    }
    Series::from_terms(terms, crate::series::Window::new(Exp::q(lo_q), hi))
}

/// `theta(q, x) = sum_{n>=0} tau(n) x^n`.
pub fn partial_theta(x: &Monomial, ctx: &EvalContext) -> Result<Series> {
    partial_theta_base(x, BaseExp::Q, ctx)
}

/// `psi(q) = theta(q, -q)`.
pub fn psi(ctx: &EvalContext) -> Result<Series> {
    partial_theta(&-Monomial::q_pow(1), ctx)
}

/// The bilateral sum `sum_{n in Z} tau(n) x^n`. The argument must reduce to
/// `c q^e` under the bindings; formal `a`/`b` would need both directions.
pub fn complete_theta(x: &Monomial, ctx: &EvalContext) -> Result<Series> {
    let hi = ctx.working_hi();
    let t = ctx.bind(x)?;
    if t.is_zero() {
        return Err(Error::PoleAtZero("complete theta at x = 0".into()));
    }
    if t.exp.a != 0 || t.exp.b != 0 {
        return Err(Error::NonTruncatable("complete theta needs an argument free of formal a/b".into()));
    }
    let e = t.exp.q;
    let c_inv = t.coef.recip().expect("nonzero");
    let mut terms = Vec::new();
    let mut lo_q = 0;
    // n >= 0: q^{n(n-1)/2 + e n}; n = -m < 0: q^{m(m+1)/2 - e m}
    for (sign_c, dir) in [(-&t.coef, 1i64), (-&c_inv, -1i64)] {
        let mut coef = if dir > 0 { Rat::one() } else { sign_c.clone() };
        let start = if dir > 0 { 0 } else { 1 };
        for m in start.. {
            let q = if dir > 0 { m * (m - 1) / 2 + e * m } else { m * (m + 1) / 2 - e * m };
            let increasing = if dir > 0 { m + e >= 0 } else { m + 1 - e >= 0 };
            if increasing && q > hi.q {
                break;
            }
            lo_q = lo_q.min(q);
            terms.push((Exp::q(q), coef.clone()));
            coef = &coef * &sign_c;
        }
    }
    Series::from_terms(terms, crate::series::Window::new(Exp::q(lo_q), hi))
}

/// `(q, x, q/x; q)_inf`, the product side of the triple product identity.
pub fn triple_product_rhs(x: &Monomial, ctx: &EvalContext) -> Result<Series> {
    let q_over_x = &Monomial::q_pow(1) * &x.recip()?;
    poch_inf_many(&[Monomial::q_pow(1), x.clone(), q_over_x], ctx)
}

// ---------------------------------------------------------------------------
// 2phi1
// ---------------------------------------------------------------------------

/// The q-Heine series `sum_n (A, B; q^r)_n / (C, q^r; q^r)_n z^n`.
///
/// Summed exactly when `A` or `B` is `q^{-rm}`; otherwise the bound `z` must
/// carry a positive power of `q` so that the terms climb out of the window.
pub fn phi21(
    a_up: &Monomial,
    b_up: &Monomial,
    c_low: &Monomial,
    z: &Monomial,
    base: BaseExp,
    ctx: &EvalContext,
) -> Result<Summation> {
    let hi = ctx.working_hi();
    let r = base.r();
    let tz = ctx.bind(z)?;
    let ta = ctx.bind(a_up)?;
    let tb = ctx.bind(b_up)?;
    let tc = ctx.bind(c_low)?;

    let mut term = ctx.one();
    let mut step = |n: i64| -> Result<Series> {
        if n > 0 {
            let k = n - 1;
            let mut next = mul_poch(&term, &a_up.shift_q(r * k), 1, base, ctx)?;
            next = mul_poch(&next, &b_up.shift_q(r * k), 1, base, ctx)?;
            next = div_poch(&next, &c_low.shift_q(r * k), 1, base, ctx)?;
            next = next.div_binomial(&Rat::one(), Exp::q(r * n))?;
            term = next.mul_term(&tz.coef, tz.exp);
        }
        Ok(term.clone())
    };

    let terminating = [a_up, b_up].iter().filter_map(|m| m.terminating_index(r)).min();
    if let Some(m) = terminating {
        return sum_finite(hi, m + 1, &mut step);
    }

    for (t, what) in [(&ta, "upper parameter"), (&tb, "upper parameter"), (&tz, "argument")] {
        bound_nonnegative(t, what)?;
    }
    if tc.exp.q < 0 && (tc.exp.a > 0 || tc.exp.b > 0) {
        return Err(Error::NonTruncatable("lower parameter mixes negative q powers with formal a/b".into()));
    }
    if tz.is_zero() {
        return sum_finite(hi, 1, &mut step);
    }
    if tz.exp.q < 1 {
        return Err(Error::NonTruncatable(format!("2phi1 argument {z} does not raise the q-order")));
    }
    // Upper factorials lose at most their negative parts; once their
    // arguments are past q^0 the order grows by z's q exponent per term.
    let mut settle = 0;
    let mut offset = 0;
    for t in [&ta, &tb] {
        if !t.is_zero() {
            let s = settle_index(t.exp.q, r);
            settle = settle.max(s);
            offset += negative_part_sum(t.exp.q, r, s);
        }
    }
    let tail = Tail::quadratic(0, 2 * tz.exp.q).with_offset(offset).settled_at(settle).with_growth(tz.exp.a, tz.exp.b);
    sum_series(hi, &tail, &mut step)
}
