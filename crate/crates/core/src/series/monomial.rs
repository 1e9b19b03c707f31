use std::fmt;
use std::ops::{Mul, Neg};

use super::{Exp, Rat};
use crate::error::{Error, Result};

/// `coef * q^e_q * a^e_a * b^e_b`, the argument of every q-shifted factorial
/// and theta function. A zero coefficient is always stored with zero exponents.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    coef: Rat,
    e_q: i64,
    e_a: i64,
    e_b: i64,
}

impl Monomial {
    pub fn new(coef: Rat, e_q: i64, e_a: i64, e_b: i64) -> Self {
        if coef.is_zero() {
            return Monomial::zero();
        }
        Monomial { coef, e_q, e_a, e_b }
    }

    pub fn zero() -> Self {
        Monomial { coef: Rat::zero(), e_q: 0, e_a: 0, e_b: 0 }
    }

    pub fn one() -> Self {
        Monomial::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Monomial::new(c, 0, 0, 0)
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Monomial::new(Rat::one(), k, 0, 0)
    }

    /// The variable `a`.
    pub fn a() -> Self {
        Monomial::new(Rat::one(), 0, 1, 0)
    }

    /// The variable `b`.
    pub fn b() -> Self {
        Monomial::new(Rat::one(), 0, 0, 1)
    }

    pub fn coef(&self) -> &Rat {
        &self.coef
    }

    pub fn e_q(&self) -> i64 {
        self.e_q
    }

    pub fn e_a(&self) -> i64 {
        self.e_a
    }

    pub fn e_b(&self) -> i64 {
        self.e_b
    }

    pub fn exp(&self) -> Exp {
        Exp::new(self.e_q, self.e_a, self.e_b)
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    /// Multiply by `q^k`.
    pub fn shift_q(&self, k: i64) -> Self {
        Monomial::new(self.coef.clone(), self.e_q + k, self.e_a, self.e_b)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Monomial::new(&self.coef * c, self.e_q, self.e_a, self.e_b)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if self.is_zero() {
            return match k {
                0 => Ok(Monomial::one()),
                k if k > 0 => Ok(Monomial::zero()),
                _ => Err(Error::PoleAtZero(format!("0^{k}"))),
            };
        }
        Ok(Monomial::new(self.coef.pow(k)?, self.e_q * k, self.e_a * k, self.e_b * k))
    }

    pub fn recip(&self) -> Result<Self> {
        self.pow(-1)
    }

    /// Pure `c * q^k` with `c` exactly one and `k <= 0`: returns `-k`. These are
    /// the arguments that terminate a basic hypergeometric sum.
    pub fn terminating_index(&self, base: i64) -> Option<i64> {
        if self.coef.is_one() && self.e_a == 0 && self.e_b == 0 && self.e_q <= 0 {
            let m = -self.e_q;
            if m % base == 0 {
                return Some(m / base);
            }
        }
        None
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        Monomial::new(&self.coef * &rhs.coef, self.e_q + rhs.e_q, self.e_a + rhs.e_a, self.e_b + rhs.e_b)
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        &self * &rhs
    }
}

impl Neg for &Monomial {
    type Output = Monomial;
    fn neg(self) -> Monomial {
        Monomial::new(-&self.coef, self.e_q, self.e_a, self.e_b)
    }
}

impl Neg for Monomial {
    type Output = Monomial;
    fn neg(self) -> Monomial {
        -&self
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coef)?;
        for (name, e) in [("q", self.e_q), ("a", self.e_a), ("b", self.e_b)] {
            match e {
                0 => {}
                1 => write!(f, "*{name}")?,
                e => write!(f, "*{name}^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_canonical() {
        let z = Monomial::new(Rat::zero(), 3, 1, 2);
        assert_eq!(z, Monomial::zero());
        assert_eq!(z.exp(), Exp::ZERO);
    }

    #[test]
    fn arithmetic() {
        let ab_over_q = &(&Monomial::a() * &Monomial::b()) * &Monomial::q_pow(-1);
        assert_eq!(ab_over_q.exp(), Exp::new(-1, 1, 1));
        let inv = ab_over_q.recip().unwrap();
        assert_eq!(inv.exp(), Exp::new(1, -1, -1));
        assert!(Monomial::zero().recip().is_err());
        assert_eq!(Monomial::q_pow(-3).terminating_index(1), Some(3));
        assert_eq!(Monomial::q_pow(-3).terminating_index(2), None);
        assert_eq!(Monomial::q_pow(2).terminating_index(1), None);
    }
}
