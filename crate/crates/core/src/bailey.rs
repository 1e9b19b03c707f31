//! Bailey pairs and the `L`-kernel transform.
//!
//! A pair relative to `t` is a pair of sequences with
//! `beta_n = sum_{k<=n} alpha_k / ((q;q)_{n-k} (tq;q)_{n+k})`.
//! Sequences are generated lazily and memoized per pair, and a pair is
//! always tied to the [`EvalContext`] its terms were computed in.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernels::big_l;
use crate::qfun::{
    div_poch, exact_term, mul_poch, negative_part_sum, poch_inf_many, settle_index, sum_finite, sum_series, BaseExp,
    Tail,
};
use crate::series::{EvalContext, Exp, Monomial, Rat, Series, Term};

const Q: BaseExp = BaseExp::Q;

/// The example pairs that come with closed forms for both sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// `alpha_n = tau(n) (1 - t q^{2n}) (tq;q)_{n-1} / (q;q)_n`, `beta_n = delta_{n,0}`.
    Unit,
    /// Relative to `t = 0`: `alpha_n = (-1)^n x^n q^{(n^2-n)/2} / (q;q)_n`,
    /// `beta_n = (x;q)_n / (q;q)_n`.
    Alternating { x: Monomial },
    /// Relative to `t = 0`: `alpha_n = x^n q^{n^2} / (q, xq;q)_n`,
    /// `beta_n = 1 / (q, xq;q)_n`.
    Square { x: Monomial },
}

/// Where the `beta` sequence of a pair comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaSource {
    Stated,
    Derived,
}

pub struct BaileyPair {
    pub kind: PairKind,
    pub t: Monomial,
    ctx: EvalContext,
    source: BetaSource,
    alpha: Vec<Series>,
    beta: Vec<Series>,
}

impl fmt::Debug for BaileyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaileyPair")
            .field("kind", &self.kind)
            .field("t", &self.t)
            .field("source", &self.source)
            .field("alpha_len", &self.alpha.len())
            .field("beta_len", &self.beta.len())
            .finish()
    }
}

fn nonnegative(t: &Term, what: &str) -> Result<()> {
    if !t.is_zero() && (t.exp.q < 0 || t.exp.a < 0 || t.exp.b < 0) {
        return Err(Error::NonTruncatable(format!("{what} must have nonnegative q, a and b exponents")));
    }
    Ok(())
}

impl BaileyPair {
    fn with_kind(kind: PairKind, t: Monomial, ctx: &EvalContext) -> Result<Self> {
        if let PairKind::Alternating { x } | PairKind::Square { x } = &kind {
            nonnegative(&ctx.bind(x)?, "pair parameter x")?;
        }
        Ok(BaileyPair { kind, t, ctx: ctx.clone(), source: BetaSource::Stated, alpha: Vec::new(), beta: Vec::new() })
    }

    /// The unit pair relative to `t`.
    pub fn unit(t: &Monomial, ctx: &EvalContext) -> Result<Self> {
        let tt = ctx.bind(t)?;
        if !tt.is_zero() && (tt.exp.q < -1 || tt.exp.a < 0 || tt.exp.b < 0) {
            return Err(Error::NonTruncatable("unit pair needs t q with nonnegative exponents".into()));
        }
        BaileyPair::with_kind(PairKind::Unit, t.clone(), ctx)
    }

    pub fn alternating(x: &Monomial, ctx: &EvalContext) -> Result<Self> {
        BaileyPair::with_kind(PairKind::Alternating { x: x.clone() }, Monomial::zero(), ctx)
    }

    pub fn square(x: &Monomial, ctx: &EvalContext) -> Result<Self> {
        BaileyPair::with_kind(PairKind::Square { x: x.clone() }, Monomial::zero(), ctx)
    }

    pub fn ctx(&self) -> &EvalContext {
        &self.ctx
    }

    pub fn beta_source(&self) -> BetaSource {
        self.source
    }

    fn alpha_term(&self, n: i64) -> Result<Series> {
        let ctx = &self.ctx;
        let tau = crate::qfun::tau_monomial(n);
        match &self.kind {
            PairKind::Unit => {
                if n == 0 {
                    return Ok(ctx.one());
                }
                let mut s = exact_term(&ctx.bind(&tau)?, ctx);
                s = mul_poch(&s, &self.t.shift_q(2 * n), 1, Q, ctx)?;
                s = mul_poch(&s, &self.t.shift_q(1), n - 1, Q, ctx)?;
                div_poch(&s, &Monomial::q_pow(1), n, Q, ctx)
            }
            PairKind::Alternating { x } => {
                let s = exact_term(&ctx.bind(&(&tau * &x.pow(n)?))?, ctx);
                div_poch(&s, &Monomial::q_pow(1), n, Q, ctx)
            }
            PairKind::Square { x } => {
                let s = exact_term(&ctx.bind(&(&x.pow(n)? * &Monomial::q_pow(n * n)))?, ctx);
                let s = div_poch(&s, &Monomial::q_pow(1), n, Q, ctx)?;
                div_poch(&s, &x.shift_q(1), n, Q, ctx)
            }
        }
    }

    fn stated_beta(&self, n: i64) -> Result<Series> {
        let ctx = &self.ctx;
        match &self.kind {
            PairKind::Unit => Ok(if n == 0 { ctx.one() } else { ctx.zero() }),
            PairKind::Alternating { x } => {
                let s = mul_poch(&ctx.one(), x, n, Q, ctx)?;
                div_poch(&s, &Monomial::q_pow(1), n, Q, ctx)
            }
            PairKind::Square { x } => {
                let s = div_poch(&ctx.one(), &Monomial::q_pow(1), n, Q, ctx)?;
                div_poch(&s, &x.shift_q(1), n, Q, ctx)
            }
        }
    }

    /// `alpha_n`, memoized.
    pub fn alpha(&mut self, n: i64) -> Result<&Series> {
        if n < 0 {
            return Err(Error::InvalidParameter(format!("pair index must be >= 0, got {n}")));
        }
        while self.alpha.len() as i64 <= n {
            let next = self.alpha_term(self.alpha.len() as i64)?;
            self.alpha.push(next);
        }
        Ok(&self.alpha[n as usize])
    }

    /// `beta_n`, memoized; stated or derived from `alpha` depending on the source.
    pub fn beta(&mut self, n: i64) -> Result<&Series> {
        if n < 0 {
            return Err(Error::InvalidParameter(format!("pair index must be >= 0, got {n}")));
        }
        while self.beta.len() as i64 <= n {
            let k = self.beta.len() as i64;
            let next = match self.source {
                BetaSource::Stated => self.stated_beta(k)?,
                BetaSource::Derived => self.defining_sum(k)?,
            };
            self.beta.push(next);
        }
        Ok(&self.beta[n as usize])
    }

    /// `sum_{k<=n} alpha_k / ((q;q)_{n-k} (tq;q)_{n+k})`.
    pub fn defining_sum(&mut self, n: i64) -> Result<Series> {
        let ctx = self.ctx.clone();
        let tq = self.t.shift_q(1);
        let mut acc = ctx.zero();
        for k in 0..=n {
            let mut s = self.alpha(k)?.clone();
            s = div_poch(&s, &Monomial::q_pow(1), n - k, Q, &ctx)?;
            s = div_poch(&s, &tq, n + k, Q, &ctx)?;
            acc = &acc + &s;
        }
        Ok(acc)
    }

    /// Support bound for `alpha_n` as `n` grows.
    pub fn alpha_tail(&self) -> Result<Tail> {
        let ctx = &self.ctx;
        match &self.kind {
            PairKind::Unit => {
                let tt = ctx.bind(&self.t)?;
                if tt.is_zero() {
                    return Ok(Tail::quadratic(1, -1));
                }
                // (1 - t q^{2n}) (tq;q)_{n-1} can only lose their negative parts
                let s = settle_index(tt.exp.q + 1, 1);
                let offset = negative_part_sum(tt.exp.q + 1, 1, s) + (tt.exp.q + 2).min(0);
                Ok(Tail::quadratic(1, -1).with_offset(offset).settled_at(s))
            }
            PairKind::Alternating { x } => {
                let tx = ctx.bind(x)?;
                let e = if tx.is_zero() { Exp::ZERO } else { tx.exp };
                Ok(Tail::quadratic(1, 2 * e.q - 1).with_growth(e.a, e.b))
            }
            PairKind::Square { x } => {
                let tx = ctx.bind(x)?;
                let e = if tx.is_zero() { Exp::ZERO } else { tx.exp };
                Ok(Tail::quadratic(2, 2 * e.q).with_growth(e.a, e.b))
            }
        }
    }
}

/// Replace the `beta` sequence of `pair` by the one generated from its
/// `alpha` sequence, materializing `beta_0 ..= beta_{n_max}`.
pub fn beta_from_alpha(mut pair: BaileyPair, n_max: i64) -> Result<BaileyPair> {
    pair.source = BetaSource::Derived;
    pair.beta.clear();
    pair.beta(n_max)?;
    Ok(pair)
}

/// Both sides of the transform
///
/// `sum_n L(a q^{n+1}, b q^{n+1}) q^n alpha_n = (q, aq, bq;q)_inf sum_n (ab;q)_{2n} q^n beta_n / (aq, bq;q)_n`
///
/// for a pair relative to `ab/q` with its stated `beta`. Each `L` factor is
/// only computed to the order its partner `q^n alpha_n` leaves room for.
pub fn warnaar_l_transform_sides(pair: &mut BaileyPair, a: &Monomial, b: &Monomial) -> Result<(Series, Series)> {
    let ctx = pair.ctx.clone();
    let ab = a * b;
    let ab_q = ab.shift_q(-1);
    if ctx.bind(&pair.t)? != ctx.bind(&ab_q)? {
        return Err(Error::InvalidParameter(format!("pair is relative to {}, not to ab/q", pair.t)));
    }
    if pair.source != BetaSource::Stated {
        return Err(Error::InvalidParameter("the transform needs the stated beta sequence".into()));
    }
    let (aq, bq) = (a.shift_q(1), b.shift_q(1));
    nonnegative(&ctx.bind(&aq)?, "aq")?;
    nonnegative(&ctx.bind(&bq)?, "bq")?;
    let hi = ctx.working_hi();

    // left side; q^n alpha_n carries the whole support bound
    let mut alpha_tail = pair.alpha_tail()?;
    alpha_tail.lin2 += 2;
    let lhs = sum_series(hi, &alpha_tail, |n| {
        let w = pair.alpha(n)?.mul_term(&Rat::one(), Exp::q(n));
        let lo = w.window().lo.q;
        if w.is_zero() || lo > hi.q {
            return Ok(ctx.zero());
        }
        let inner = ctx.with_working_q(hi.q - lo);
        let l = big_l(&a.shift_q(n + 1), &b.shift_q(n + 1), &inner)?;
        Ok(l.mul(&w).truncate(hi))
    })?
    .value;

    // right side
    let term = |n: i64, beta: &Series| -> Result<Series> {
        let mut s = beta.mul_term(&Rat::one(), Exp::q(n));
        s = mul_poch(&s, &ab, 2 * n, Q, &ctx)?;
        s = div_poch(&s, &aq, n, Q, &ctx)?;
        div_poch(&s, &bq, n, Q, &ctx)
    };
    nonnegative(&ctx.bind(&ab)?, "ab")?;
    let sum = match pair.kind {
        PairKind::Unit => sum_finite(hi, 1, |n| term(n, &pair.stated_beta(n)?))?,
        _ => sum_series(hi, &Tail::linear(0), |n| {
            let beta = pair.beta(n)?.clone();
            term(n, &beta)
        })?,
    };
    let rhs = poch_inf_many(&[Monomial::q_pow(1), aq.clone(), bq.clone()], &ctx)?.mul(&sum.value);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests;
