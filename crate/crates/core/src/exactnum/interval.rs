//! Certified rational enclosures for values computed from truncated series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn around(x: &BigRational, err: &BigRational) -> Self {
        let e = err.abs();
        Interval::new(x - &e, x + &e)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersects(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// Reciprocal; `None` if the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains(&BigRational::zero()) {
            return None;
        }
        Some(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    /// Widen outward so both endpoints have denominator `10^digits`.
    pub fn rounded(&self, digits: u32) -> Interval {
        let den = BigInt::from(10).pow(digits);
        let scale = |x: &BigRational, up: bool| {
            let n = x.numer() * &den;
            let (q, r) = n.div_mod_floor(x.denom());
            let q = if up && !r.is_zero() { q + 1 } else { q };
            BigRational::new(q, den.clone())
        };
        Interval::new(scale(&self.lo, false), scale(&self.hi, true))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn outward_rounding() {
        let i = Interval::new(q(1, 3), q(2, 3)).rounded(2);
        assert_eq!(i.lo, q(33, 100));
        assert_eq!(i.hi, q(67, 100));
        let n = Interval::new(q(-1, 3), q(-1, 3)).rounded(1);
        assert_eq!(n.lo, q(-4, 10));
        assert_eq!(n.hi, q(-3, 10));
    }

    #[test]
    fn products_enclose() {
        let a = Interval::new(q(-1, 1), q(2, 1));
        let b = Interval::new(q(3, 1), q(4, 1));
        assert_eq!(a.mul(&b), Interval::new(q(-4, 1), q(8, 1)));
        assert!(a.recip().is_none());
        assert_eq!(b.recip().unwrap(), Interval::new(q(1, 4), q(1, 3)));
    }
}
