//! The coefficient field abstraction shared by the polynomial engine.
//!
//! Engine routines are generic over [`Field`], so the same code runs
//! symbolically (`RationalFunction`, with the parameter set to `t`) and
//! numerically (`BigRational`, with the parameter set to a rational value).

use super::ratfun::RationalFunction;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt::{Debug, Display};

pub trait Field: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(c: i64) -> Self;
    fn from_bigint(c: &BigInt) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn recip(&self) -> Result<Self>;
    /// Sign when it is meaningful (rationals); `None` for symbolic values.
    fn sign_hint(&self) -> Option<Ordering>;

    fn over(&self, o: &Self) -> Result<Self> {
        Ok(self.times(&o.recip()?))
    }

    fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.times(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.times(&b);
            }
        }
        Ok(acc)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(c: i64) -> Self {
        BigRational::from_integer(c.into())
    }
    fn from_bigint(c: &BigInt) -> Self {
        BigRational::from_integer(c.clone())
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn recip(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(BigRational::recip(self))
        }
    }
    fn sign_hint(&self) -> Option<Ordering> {
        Some(if self.is_negative() {
            Ordering::Less
        } else if Zero::is_zero(self) {
            Ordering::Equal
        } else {
            Ordering::Greater
        })
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn from_int(c: i64) -> Self {
        RationalFunction::from_int(c)
    }
    fn from_bigint(c: &BigInt) -> Self {
        RationalFunction::from_poly(super::IntPoly::constant(c.clone()))
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn recip(&self) -> Result<Self> {
        RationalFunction::recip(self)
    }
    fn over(&self, o: &Self) -> Result<Self> {
        self.div(o)
    }
    fn sign_hint(&self) -> Option<Ordering> {
        self.as_constant().and_then(|c| c.sign_hint())
    }
}

/// Evaluate a rational function of `t` at a value of any field.
pub fn eval_in<F: Field>(f: &RationalFunction, t: &F) -> Result<F> {
    let horner = |p: &super::IntPoly| {
        let mut acc = F::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.times(t).plus(&F::from_bigint(c));
        }
        acc
    };
    let d = horner(f.denom());
    if d.is_zero() {
        return Err(Error::Pole(format!("{f} at t = {t}")));
    }
    horner(f.numer()).over(&d)
}

/// `(a; a)_m = (1 - a)(1 - a^2)...(1 - a^m)`.
pub fn q_pochhammer<F: Field>(a: &F, m: usize) -> F {
    let mut acc = F::one();
    let mut pw = F::one();
    for _ in 0..m {
        pw = pw.times(a);
        acc = acc.times(&F::one().minus(&pw));
    }
    acc
}

/// `(x; a)_m = (1 - x)(1 - x a)...(1 - x a^{m-1})`.
pub fn q_pochhammer_at<F: Field>(x: &F, a: &F, m: usize) -> F {
    let mut acc = F::one();
    let mut pw = x.clone();
    for _ in 0..m {
        acc = acc.times(&F::one().minus(&pw));
        pw = pw.times(a);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn pochhammer_matches_symbolic() {
        let t = RationalFunction::t();
        let sym = q_pochhammer(&t, 3);
        let num = q_pochhammer(&q(1, 3), 3);
        assert_eq!(eval_in(&sym, &q(1, 3)).unwrap(), num);
        assert_eq!(num, q(2, 3) * q(8, 9) * q(26, 27));
    }

    #[test]
    fn eval_in_symbolic_field_is_substitution() {
        let t = RationalFunction::t();
        let f = RationalFunction::one().over(&RationalFunction::one().minus(&t)).unwrap();
        let g = eval_in(&f, &t.times(&t)).unwrap();
        assert_eq!(g, f.power_var(2));
    }

    #[test]
    fn negative_powers() {
        assert_eq!(q(2, 1).powi(-3).unwrap(), q(1, 8));
        assert!(q(0, 1).powi(-1).is_err());
    }
}
