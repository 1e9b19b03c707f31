//! Shared fixtures for the benchmarks.

use qtheta::{EvalContext, Rat};

/// A generic rational point away from every registered pole.
pub fn point() -> (Rat, Rat) {
    (Rat::new(2, 3).expect("nonzero"), Rat::new(3, 7).expect("nonzero"))
}

/// The context the full suite runs at, with `a` and `b` specialized.
pub fn specialized(order: i64) -> EvalContext {
    let (a, b) = point();
    EvalContext::specialized(a, b, order)
}
