//! Box-truncated formal Laurent series in `q`, `a`, `b` over exact rationals.
//!
//! A [`Series`] is a sparse map from exponent triples to nonzero coefficients
//! together with the [`Window`] on which those coefficients are exact. Every
//! operation propagates the window, so a coefficient read inside it is never
//! an artifact of truncation.

mod context;
mod monomial;
mod rat;
mod window;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use context::{Binding, EvalContext, Term, DEFAULT_DEGREE_CAP, DEFAULT_SLACK};
pub use monomial::Monomial;
pub use rat::Rat;
pub use window::{Exp, Window, INF};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<Exp, Rat>,
    window: Window,
}

/// First coefficient at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Difference {
    pub exp: Exp,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl Series {
    /// The zero series, known through `hi`.
    pub fn zero(hi: Exp) -> Self {
        Series { terms: BTreeMap::new(), window: Window::vanishing(hi) }
    }

    pub fn one(hi: Exp) -> Self {
        Series::term(Rat::one(), Exp::ZERO, hi)
    }

    /// `c * e` as an exact single-term series known through `hi`.
    pub fn term(c: Rat, e: Exp, hi: Exp) -> Self {
        if c.is_zero() {
            return Series::zero(hi);
        }
        let mut terms = BTreeMap::new();
        if e.le_all(&hi) {
            terms.insert(e, c);
        }
        Series { terms, window: Window::new(e, hi) }
    }

    /// Build from explicit terms. Terms above `window.hi` are truncated away;
    /// a nonzero term below `window.lo` contradicts the support floor.
    pub fn from_terms<I>(terms: I, window: Window) -> Result<Self>
    where
        I: IntoIterator<Item = (Exp, Rat)>,
    {
        let mut map: BTreeMap<Exp, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if !window.knows(&e) {
                continue;
            }
            *map.entry(e).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if let Some(e) = map.keys().find(|e| !window.lo.le_all(e)) {
            return Err(Error::OutOfWindow(*e));
        }
        Ok(Series { terms: map, window })
    }

    fn from_map(mut terms: BTreeMap<Exp, Rat>, window: Window) -> Self {
        terms.retain(|e, c| !c.is_zero() && window.knows(e));
        Series { terms, window }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    /// Coefficient at `e`, zero when absent. Does not check the window.
    pub fn coeff(&self, e: &Exp) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Exact coefficient at `e`; fails above the truncation.
    pub fn coeff_at(&self, e_q: i64, e_a: i64, e_b: i64) -> Result<Rat> {
        let e = Exp::new(e_q, e_a, e_b);
        if !self.window.knows(&e) {
            return Err(Error::OutOfWindow(e));
        }
        Ok(self.coeff(&e))
    }

    /// Lower the truncation to `hi` (componentwise minimum with the current one).
    pub fn truncate(&self, hi: Exp) -> Series {
        let window = Window::new(self.window.lo, self.window.hi.meet(&hi));
        Series::from_map(self.terms.clone(), window)
    }

    /// Replace the support floor by a looser one.
    pub fn with_floor(mut self, lo: Exp) -> Series {
        self.window.lo = self.window.lo.meet(&lo);
        self
    }

    pub fn scale(&self, c: &Rat) -> Series {
        if c.is_zero() {
            return Series::zero(self.window.hi);
        }
        let terms = self.terms.iter().map(|(e, v)| (*e, v * c)).collect();
        Series { terms, window: self.window }
    }

    pub fn add(&self, other: &Series) -> Series {
        let window = self.window.for_sum(&other.window);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(*e).or_insert_with(Rat::zero) += c;
        }
        Series::from_map(terms, window)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c)).collect();
        Series { terms, window: self.window }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Series) -> Series {
        let window = self.window.for_product(&other.window);
        let hi = window.hi;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc: HashMap<Exp, Rat> = HashMap::new();
        for (u, fu) in &small.terms {
            if u.a + large.window.lo.a > hi.a {
                break;
            }
            for (v, gv) in &large.terms {
                let e = *u + *v;
                if e.a > hi.a {
                    break;
                }
                if e.le_all(&hi) {
                    let p = fu * gv;
                    match acc.get_mut(&e) {
                        Some(slot) => *slot += p,
                        None => {
                            acc.insert(e, p);
                        }
                    }
                }
            }
        }
        Series::from_map(acc.into_iter().collect(), window)
    }

    /// Multiply by the exact monomial `c * e`.
    pub fn mul_term(&self, c: &Rat, e: Exp) -> Series {
        if c.is_zero() {
            return Series::zero(self.window.hi + e);
        }
        let terms = self.terms.iter().map(|(k, v)| (*k + e, v * c)).collect();
        Series { terms, window: self.window.shifted(e) }
    }

    /// Multiply by the exact binomial `1 - c * x`.
    pub fn mul_binomial(&self, c: &Rat, x: Exp) -> Series {
        if c.is_zero() {
            return self.clone();
        }
        if x.is_zero() {
            return self.scale(&(Rat::one() - c));
        }
        let window = Window::new(self.window.lo.meet(&(self.window.lo + x)), self.window.hi + x.neg_part());
        let mut terms = self.terms.clone();
        for (e, v) in &self.terms {
            let p = v * c;
            *terms.entry(*e + x).or_insert_with(Rat::zero) -= &p;
        }
        Series::from_map(terms, window)
    }

    /// Divide by the binomial `1 - c * x`.
    ///
    /// When `x` has nonnegative exponents this is the in-place geometric
    /// recurrence `y[e] = s[e] + c * y[e - x]`, which keeps the window intact.
    /// Other shapes go through [`Series::invert`].
    pub fn div_binomial(&self, c: &Rat, x: Exp) -> Result<Series> {
        if c.is_zero() {
            return Ok(self.clone());
        }
        if x.is_zero() {
            let unit = Rat::one() - c;
            let inv = unit.recip().ok_or_else(|| Error::NotInvertible(format!("factor 1 - {c} vanishes")))?;
            return Ok(self.scale(&inv));
        }
        if x.all_nonnegative() {
            let hi = self.window.hi;
            let mut pending = self.terms.clone();
            let mut out = BTreeMap::new();
            while let Some((e, v)) = pending.pop_first() {
                if v.is_zero() {
                    continue;
                }
                let next = e + x;
                if next.le_all(&hi) {
                    let p = &v * c;
                    *pending.entry(next).or_insert_with(Rat::zero) += p;
                }
                out.insert(e, v);
            }
            return Ok(Series { terms: out, window: self.window });
        }
        let hi = self.window.hi.join(&x);
        let binom = Series::from_terms([(Exp::ZERO, Rat::one()), (x, -c)], Window::new(x.neg_part(), hi))?;
        Ok(self.mul(&binom.invert()?))
    }

    /// Multiplicative inverse.
    ///
    /// Writes the series as `c * m * (1 + r)` where `m` is the lowest `q` power
    /// in the lowest `(a, b)` slice of the window, and expands `1/(1 + r)`
    /// geometrically. Terms of `r` with positive `a`/`b` degree may carry
    /// negative `q` exponents; each such factor can lower the `q` exponent by
    /// at most `|lambda|`, so the `q` truncation of the inverse drops by
    /// `|lambda|` times the total `a`/`b` degree span.
    pub fn invert(&self) -> Result<Series> {
        let w = self.window;
        if w.is_vacuous() {
            return Err(Error::NotInvertible("series has no known terms".into()));
        }
        let (alpha, beta) = (w.lo.a, w.lo.b);
        let lead = self
            .terms
            .range(Exp { a: alpha, b: beta, q: i64::MIN }..=Exp { a: alpha, b: beta, q: i64::MAX })
            .next()
            .ok_or_else(|| Error::NotInvertible(format!("no term in the lowest slice a^{alpha} b^{beta}")))?;
        let m = Exp::new(lead.0.q, alpha, beta);
        let c_inv = lead.1.recip().expect("stored coefficients are nonzero");

        let hi_u = w.hi - m;
        let lambda = (w.lo.q - m.q).min(0);
        let span = if lambda < 0 { hi_u.a + hi_u.b } else { 0 };
        if span >= INF / 2 {
            return Err(Error::NonTruncatable("negative q exponents with an unbounded a/b range".into()));
        }
        let r: Vec<(Exp, Rat)> =
            self.terms.iter().filter(|(e, _)| **e != m).map(|(e, v)| (*e - m, v * &c_inv)).collect();

        let hi_q = hi_u.q + span * lambda;
        if hi_q < span * lambda {
            return Err(Error::EmptyWindow);
        }
        // Slice of relative degree d is exact for q <= hi_u.q + d * lambda,
        // and later slices read earlier ones up to that bound.
        let mut y: BTreeMap<Exp, Rat> = BTreeMap::new();
        for a in 0..=hi_u.a {
            for b in 0..=hi_u.b {
                let d = a + b;
                let q_lo = d * lambda;
                let q_hi = hi_u.q + d * lambda;
                for q in q_lo..=q_hi {
                    let e = Exp { a, b, q };
                    let mut acc = if e.is_zero() { Rat::one() } else { Rat::zero() };
                    for (v, rv) in &r {
                        if v.a > a {
                            break;
                        }
                        if v.b > b {
                            continue;
                        }
                        if let Some(ys) = y.get(&(e - *v)) {
                            acc -= &(rv * ys);
                        }
                    }
                    if !acc.is_zero() {
                        y.insert(e, acc);
                    }
                }
            }
        }
        let y_window = Window::new(Exp::new(span * lambda, 0, 0), Exp::new(hi_q, hi_u.a, hi_u.b));
        let y = Series::from_map(y, y_window);
        Ok(y.mul_term(&c_inv, -m))
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        Ok(self.mul(&other.invert()?))
    }

    /// First disagreement on the common known region, ordered by `(q, a, b)`,
    /// restricted to triples `<= limit`.
    pub fn first_difference(&self, other: &Series, limit: Exp) -> Option<Difference> {
        let hi = self.window.hi.meet(&other.window.hi).meet(&limit);
        let mut best: Option<Difference> = None;
        let mut consider = |e: &Exp| {
            if !e.le_all(&hi) {
                return;
            }
            let l = self.coeff(e);
            let r = other.coeff(e);
            if l != r && best.as_ref().is_none_or(|d| e.report_cmp(&d.exp).is_lt()) {
                best = Some(Difference { exp: *e, lhs: l, rhs: r });
            }
        };
        self.terms.keys().for_each(&mut consider);
        other.terms.keys().for_each(&mut consider);
        best
    }

    /// Coefficients agree everywhere both series are known.
    pub fn eq_on_window(&self, other: &Series) -> bool {
        self.first_difference(other, Exp::new(INF, INF, INF)).is_none()
    }

    /// Terms sorted by `(q, a, b)`.
    pub fn sorted_terms(&self) -> Vec<(Exp, Rat)> {
        let mut v: Vec<(Exp, Rat)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|x, y| x.0.report_cmp(&y.0));
        v
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{:?}] {{", self.window)?;
        for (i, (e, c)) in self.sorted_terms().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {c}{e:?}")?;
        }
        write!(f, " }}")
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series::add(self, rhs)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series::sub(self, rhs)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        Series::mul(self, rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        Series::add(&self, &rhs)
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        Series::sub(&self, &rhs)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        Series::mul(&self, &rhs)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(&self)
    }
}
