pub mod bailey;
pub mod error;
pub mod identities;
pub mod kernels;
pub mod qfun;
pub mod series;

pub use error::{Error, Result};
pub use series::{Binding, Difference, EvalContext, Exp, Monomial, Rat, Series, Term, Window};
