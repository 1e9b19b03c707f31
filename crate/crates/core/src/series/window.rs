//! Exponent triples and truncation boxes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Saturation bound for exponent arithmetic. The empty support of an exact
/// zero series has its floor at `+INF`, so window bookkeeping never overflows.
pub const INF: i64 = i64::MAX / 4;

fn sat(x: i64) -> i64 {
    x.clamp(-INF, INF)
}

fn sat_add(x: i64, y: i64) -> i64 {
    sat(x.saturating_add(y))
}

/// An exponent triple `q^q a^a b^b`.
///
/// The derived order is lexicographic in `(a, b, q)`. Every monomial with
/// nonnegative `a`, `b` exponents that is not a constant is strictly positive
/// in it (as is `q^k` for `k > 0`), which is what the in-place geometric
/// recurrences rely on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Exp {
    pub a: i64,
    pub b: i64,
    pub q: i64,
}

impl Exp {
    pub const ZERO: Exp = Exp { a: 0, b: 0, q: 0 };

    pub const fn new(q: i64, a: i64, b: i64) -> Self {
        Exp { a, b, q }
    }

    pub const fn q(q: i64) -> Self {
        Exp { a: 0, b: 0, q }
    }

    pub fn is_zero(&self) -> bool {
        *self == Exp::ZERO
    }

    /// Componentwise `self <= other`.
    pub fn le_all(&self, other: &Exp) -> bool {
        self.q <= other.q && self.a <= other.a && self.b <= other.b
    }

    /// True when some component of `self` is strictly above `other`.
    pub fn exceeds_any(&self, other: &Exp) -> bool {
        !self.le_all(other)
    }

    pub fn meet(&self, other: &Exp) -> Exp {
        Exp { a: self.a.min(other.a), b: self.b.min(other.b), q: self.q.min(other.q) }
    }

    pub fn join(&self, other: &Exp) -> Exp {
        Exp { a: self.a.max(other.a), b: self.b.max(other.b), q: self.q.max(other.q) }
    }

    /// Componentwise `min(self, 0)`.
    pub fn neg_part(&self) -> Exp {
        self.meet(&Exp::ZERO)
    }

    pub fn scale(&self, k: i64) -> Exp {
        Exp { a: sat(self.a.saturating_mul(k)), b: sat(self.b.saturating_mul(k)), q: sat(self.q.saturating_mul(k)) }
    }

    /// Ordering used for reports: by `q`, then `a`, then `b`.
    pub fn report_cmp(&self, other: &Exp) -> Ordering {
        (self.q, self.a, self.b).cmp(&(other.q, other.a, other.b))
    }

    pub fn all_nonnegative(&self) -> bool {
        self.q >= 0 && self.a >= 0 && self.b >= 0
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a, self.b, self.q).cmp(&(other.a, other.b, other.q))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Exp {
    type Output = Exp;
    fn add(self, rhs: Exp) -> Exp {
        Exp { a: sat_add(self.a, rhs.a), b: sat_add(self.b, rhs.b), q: sat_add(self.q, rhs.q) }
    }
}

impl Sub for Exp {
    type Output = Exp;
    fn sub(self, rhs: Exp) -> Exp {
        self + (-rhs)
    }
}

impl Neg for Exp {
    type Output = Exp;
    fn neg(self) -> Exp {
        Exp { a: -self.a, b: -self.b, q: -self.q }
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q^{}, a^{}, b^{})", self.q, self.a, self.b)
    }
}

impl fmt::Debug for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.q, self.a, self.b)
    }
}

/// The box on which a series is known.
///
/// `hi` is the truncation: every coefficient at a triple `e <= hi` is exact,
/// and nothing is known above it. `lo` is a support floor: the underlying
/// series has no term with any component below `lo`, including terms above
/// `hi`. Truncated products need that floor, so it is tracked through every
/// operation. `lo` may exceed `hi` in some component, in which case the series
/// is known to vanish wherever it is known.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: Exp,
    pub hi: Exp,
}

impl Window {
    pub fn new(lo: Exp, hi: Exp) -> Self {
        Window { lo, hi }
    }

    /// Window for a series with empty support that is known through `hi`.
    pub fn vanishing(hi: Exp) -> Self {
        Window { lo: Exp::new(INF, INF, INF), hi }
    }

    /// True when `e` is a position with a known coefficient.
    pub fn knows(&self, e: &Exp) -> bool {
        e.le_all(&self.hi)
    }

    /// True when `e` lies inside the `[lo, hi]` box.
    pub fn contains(&self, e: &Exp) -> bool {
        self.lo.le_all(e) && e.le_all(&self.hi)
    }

    /// No stored term can exist: the floor is above the truncation in some variable.
    pub fn is_vacuous(&self) -> bool {
        self.lo.exceeds_any(&self.hi)
    }

    /// Window of a sum: known where both are known.
    pub fn for_sum(&self, other: &Window) -> Window {
        Window { lo: self.lo.meet(&other.lo), hi: self.hi.meet(&other.hi) }
    }

    /// Window of a truncated product. The coefficient at `e` is a finite sum
    /// over `u + v = e` with `u >= lo1`, `v >= lo2`; all those `u`, `v` are
    /// known when `e <= hi1 + lo2` and `e <= hi2 + lo1`.
    pub fn for_product(&self, other: &Window) -> Window {
        let hi = (self.hi + other.lo).meet(&(other.hi + self.lo));
        Window { lo: self.lo + other.lo, hi }
    }

    pub fn shifted(&self, by: Exp) -> Window {
        Window { lo: self.lo + by, hi: self.hi + by }
    }
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Window({:?}..={:?})", self.lo, self.hi)
    }
}
