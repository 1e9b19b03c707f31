use std::fmt;

use super::{Exp, Monomial, Rat, Series};
use crate::error::{Error, Result};

/// How a variable is treated during evaluation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Binding {
    /// Kept as a power-series variable, truncated at the degree cap.
    Formal,
    /// Replaced by an exact rational value.
    Rational(Rat),
}

impl Binding {
    pub fn is_formal(&self) -> bool {
        matches!(self, Binding::Formal)
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            Binding::Formal => None,
            Binding::Rational(r) => Some(r),
        }
    }
}

impl fmt::Debug for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Formal => write!(f, "formal"),
            Binding::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// A monomial after the bindings of `a` and `b` have been applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: Rat,
    pub exp: Exp,
}

impl Term {
    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }
}

pub const DEFAULT_SLACK: i64 = 8;
pub const DEFAULT_DEGREE_CAP: i64 = 10;

/// Engine selection plus truncation orders.
///
/// Everything is computed on the working box `q <= q_order + q_slack`,
/// `a, b <= degree_cap` (for formal variables; specialized variables only
/// carry exponent zero). Results are meant to be read on `q <= q_order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EvalContext {
    pub a: Binding,
    pub b: Binding,
    pub q_order: i64,
    pub q_slack: i64,
    pub degree_cap: i64,
    /// Lowest `a`/`b` exponent a formal monomial argument may carry.
    pub laurent_floor: i64,
}

impl EvalContext {
    /// Both `a` and `b` formal.
    pub fn symbolic(q_order: i64, degree_cap: i64) -> Self {
        EvalContext {
            a: Binding::Formal,
            b: Binding::Formal,
            q_order,
            q_slack: DEFAULT_SLACK,
            degree_cap,
            laurent_floor: 0,
        }
    }

    /// Both `a` and `b` bound to rationals.
    pub fn specialized(a: Rat, b: Rat, q_order: i64) -> Self {
        EvalContext {
            a: Binding::Rational(a),
            b: Binding::Rational(b),
            ..EvalContext::symbolic(q_order, DEFAULT_DEGREE_CAP)
        }
    }

    /// A context for series in `q` alone; `a` and `b` are bound to zero.
    pub fn univariate(q_order: i64) -> Self {
        EvalContext::specialized(Rat::zero(), Rat::zero(), q_order)
    }

    pub fn with_a(mut self, a: Binding) -> Self {
        self.a = a;
        self
    }

    pub fn with_b(mut self, b: Binding) -> Self {
        self.b = b;
        self
    }

    pub fn with_order(mut self, q_order: i64) -> Self {
        self.q_order = q_order;
        self
    }

    pub fn with_slack(mut self, q_slack: i64) -> Self {
        self.q_slack = q_slack;
        self
    }

    pub fn with_degree_cap(mut self, cap: i64) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn with_laurent_floor(mut self, floor: i64) -> Self {
        self.laurent_floor = floor;
        self
    }

    /// The same bindings on a working box whose `q` corner is exactly `hi_q`.
    /// Used for inner factors whose products are shifted up by a known order.
    pub fn with_working_q(&self, hi_q: i64) -> Self {
        EvalContext { q_order: hi_q, q_slack: 0, ..self.clone() }
    }

    /// Exchange the roles of `a` and `b`.
    pub fn swapped(&self) -> Self {
        EvalContext { a: self.b.clone(), b: self.a.clone(), ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q_order < 1 {
            return Err(Error::InvalidParameter(format!("q order must be at least 1, got {}", self.q_order)));
        }
        if self.q_slack < 0 {
            return Err(Error::InvalidParameter("q slack must be nonnegative".into()));
        }
        if self.degree_cap < 1 {
            return Err(Error::InvalidParameter("degree cap must be at least 1".into()));
        }
        if self.laurent_floor > 0 {
            return Err(Error::InvalidParameter("Laurent floor must be nonpositive".into()));
        }
        Ok(())
    }

    pub fn is_symbolic(&self) -> bool {
        self.a.is_formal() || self.b.is_formal()
    }

    /// Top corner of the working box.
    pub fn working_hi(&self) -> Exp {
        let cap = |b: &Binding| if b.is_formal() { self.degree_cap } else { 0 };
        Exp::new(self.q_order + self.q_slack, cap(&self.a), cap(&self.b))
    }

    /// The corner results are reported up to.
    pub fn report_hi(&self) -> Exp {
        let hi = self.working_hi();
        Exp::new(self.q_order, hi.a, hi.b)
    }

    pub fn one(&self) -> Series {
        Series::one(self.working_hi())
    }

    pub fn zero(&self) -> Series {
        Series::zero(self.working_hi())
    }

    pub fn constant(&self, c: Rat) -> Series {
        Series::term(c, Exp::ZERO, self.working_hi())
    }

    /// Apply the `a`/`b` bindings to a monomial.
    pub fn bind(&self, m: &Monomial) -> Result<Term> {
        let mut coef = m.coef().clone();
        let mut exp = Exp::q(m.e_q());
        if coef.is_zero() {
            return Ok(Term { coef, exp: Exp::ZERO });
        }
        for (name, binding, e, slot) in [("a", &self.a, m.e_a(), &mut exp.a), ("b", &self.b, m.e_b(), &mut exp.b)] {
            match binding {
                Binding::Formal => {
                    if e < self.laurent_floor {
                        return Err(Error::NonTruncatable(format!(
                            "{name}^{e} is below the Laurent floor {}",
                            self.laurent_floor
                        )));
                    }
                    *slot = e;
                }
                Binding::Rational(v) => {
                    if v.is_zero() && e < 0 {
                        return Err(Error::PoleAtZero(format!("{name}^{e} with {name} = 0")));
                    }
                    coef = coef * v.pow(e)?;
                }
            }
        }
        if coef.is_zero() {
            exp = Exp::ZERO;
        }
        Ok(Term { coef, exp })
    }

    /// The monomial as a one-term series on the working box.
    pub fn eval_monomial(&self, m: &Monomial) -> Result<Series> {
        let t = self.bind(m)?;
        Ok(Series::term(t.coef, t.exp, self.working_hi()))
    }
}

impl fmt::Debug for EvalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EvalContext(a={:?}, b={:?}, N={}, slack={}, cap={})",
            self.a, self.b, self.q_order, self.q_slack, self.degree_cap
        )
    }
}
