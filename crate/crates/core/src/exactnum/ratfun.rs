//! Rational functions in the single parameter `t` with integer coefficients.

use super::intpoly::IntPoly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// `num / den`, kept reduced: coprime over Q, the pair jointly primitive,
/// and `den` with positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: IntPoly,
    den: IntPoly,
}

/// Substitutions accepted by [`RationalFunction::substitute`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    Neg,
    Square,
    Invert,
}

/// Outcome of [`RationalFunction::to_int_poly`] when the denominator does not divide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityFailure {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
    /// Pseudo-remainder of the numerator by the denominator.
    pub remainder: IntPoly,
}

impl fmt::Display for IntegralityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) / ({}) is not in Z[t]; remainder {}",
            self.numerator, self.denominator, self.remainder
        )
    }
}

impl RationalFunction {
    /// Build and reduce. Fails on a zero denominator.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.degree().unwrap_or(0) > 0 {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            } else {
                (num, den)
            }
        };
        let mut c = num.content().gcd(&den.content());
        if den.leading_coeff().unwrap().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn t() -> Self {
        Self::from_poly(IntPoly::t())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(IntPoly::constant(BigInt::from(c)))
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RationalFunction {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::reduce(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
    }

    /// `t^e` for any integer `e`; negative powers land in the denominator.
    pub fn t_pow(e: i64) -> Self {
        let m = IntPoly::monomial(BigInt::one(), e.unsigned_abs() as usize);
        if e >= 0 {
            Self::from_poly(m)
        } else {
            RationalFunction {
                num: IntPoly::one(),
                den: m,
            }
        }
    }

    pub fn numer(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a rational constant, if it does not depend on `t`.
    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.den.is_one() && o.den.is_one() {
            if let Some(q) = self.num.div_exact(&o.num) {
                return Ok(Self::from_poly(q));
            }
        }
        Ok(Self::reduce(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
        .map(|r| Self::reduce(r.num, r.den))
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        Self::reduce(self.num.scale(c), self.den.clone())
    }

    /// Exact value at a rational point.
    pub fn eval_at(&self, t0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(t0);
        if d.is_zero() {
            return Err(Error::Pole(format!("{self} at t = {t0}")));
        }
        Ok(self.num.eval(t0) / d)
    }

    pub fn substitute(&self, s: Substitution) -> Self {
        match s {
            Substitution::Neg => Self::reduce(self.num.negate_var(), self.den.negate_var()),
            Substitution::Square => Self::reduce(self.num.power_var(2), self.den.power_var(2)),
            Substitution::Invert => {
                // f(1/t) = t^{dd-dn} rev(num) / rev(den), with rev taken at full degree.
                let dn = self.num.degree().unwrap_or(0);
                let dd = self.den.degree().unwrap_or(0);
                let rn = IntPoly::from_coeffs(
                    (0..=dn).rev().map(|i| self.num.coeff(i)).collect(),
                );
                let rd = IntPoly::from_coeffs(
                    (0..=dd).rev().map(|i| self.den.coeff(i)).collect(),
                );
                if dd >= dn {
                    Self::reduce(rn.shift(dd - dn), rd)
                } else {
                    Self::reduce(rn, rd.shift(dn - dd))
                }
            }
        }
    }

    /// `f(t^k)` for `k >= 1`.
    pub fn power_var(&self, k: usize) -> Self {
        Self::reduce(self.num.power_var(k), self.den.power_var(k))
    }

    /// Integer polynomial if the denominator divides the numerator in Z[t].
    pub fn to_int_poly(&self) -> std::result::Result<IntPoly, IntegralityFailure> {
        if self.den.is_one() {
            return Ok(self.num.clone());
        }
        match self.num.div_exact(&self.den) {
            Some(q) => Ok(q),
            None => Err(IntegralityFailure {
                numerator: self.num.clone(),
                denominator: self.den.clone(),
                remainder: self.num.pseudo_rem(&self.den),
            }),
        }
    }

    /// Render with a chosen variable name.
    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.render(var);
        }
        let wrap = |p: &IntPoly| {
            let s = p.render(var);
            if p.terms().count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl From<IntPoly> for RationalFunction {
    fn from(p: IntPoly) -> Self {
        Self::from_poly(p)
    }
}

type TermList = Vec<(usize, String)>;

#[derive(Serialize, Deserialize)]
struct RatFunRepr {
    num: TermList,
    den: TermList,
}

fn to_terms(p: &IntPoly) -> TermList {
    p.terms().map(|(e, c)| (e, c.to_string())).collect()
}

fn from_terms(t: &TermList) -> std::result::Result<IntPoly, String> {
    let mut out = Vec::with_capacity(t.len());
    for (e, c) in t {
        let c: BigInt = c.parse().map_err(|_| format!("bad integer {c:?}"))?;
        out.push((*e, c));
    }
    Ok(IntPoly::from_terms(out))
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFunRepr {
            num: to_terms(&self.num),
            den: to_terms(&self.den),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = RatFunRepr::deserialize(d)?;
        let num = from_terms(&r.num).map_err(D::Error::custom)?;
        let den = from_terms(&r.den).map_err(D::Error::custom)?;
        RationalFunction::new(num, den).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d)).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn arith_examples() {
        let t = RationalFunction::t();
        assert!(rf(&[1, -1], &[1]).add(&t).is_one());
        assert_eq!(rf(&[1, 0, -1], &[1, -1]), rf(&[1, 1], &[1]));
        let lhs = rf(&[1, 1], &[1])
            .mul(&rf(&[1, 0, 0, -1], &[1]))
            .div(&rf(&[1, -1], &[1]))
            .unwrap();
        assert_eq!(lhs, rf(&[1, 1], &[1]).mul(&rf(&[1, 1, 1], &[1])));
        assert!(t.div(&RationalFunction::zero()).is_err());
    }

    #[test]
    fn canonical_form() {
        let a = rf(&[2], &[-4, 0, 2]);
        assert_eq!(a.denom(), &poly(&[-2, 0, 1]));
        assert_eq!(a.numer(), &poly(&[1]));
        assert_eq!(rf(&[3], &[6]), RationalFunction::from_rational(&q(1, 2)));
    }

    #[test]
    fn evaluation() {
        assert_eq!(rf(&[1, 0, -1], &[1, 1]).eval_at(&q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(rf(&[1], &[1, 1, 1]).eval_at(&q(1, 2)).unwrap(), q(4, 7));
        assert!(matches!(
            rf(&[1], &[1, -1]).eval_at(&q(1, 1)),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn substitutions() {
        assert_eq!(rf(&[1, 1], &[1]).substitute(Substitution::Neg), rf(&[1, -1], &[1]));
        assert_eq!(rf(&[1, -1], &[1]).substitute(Substitution::Square), rf(&[1, 0, -1], &[1]));
        assert_eq!(rf(&[0, 0, 1], &[1]).substitute(Substitution::Invert), rf(&[1], &[0, 0, 1]));
        assert_eq!(
            rf(&[1, 1], &[0, 0, 0, 1]).substitute(Substitution::Invert),
            rf(&[0, 0, 1, 1], &[1])
        );
    }

    #[test]
    fn integrality() {
        assert_eq!(rf(&[1, 0, 0, -1], &[1, -1]).to_int_poly().unwrap(), poly(&[1, 1, 1]));
        let fail = rf(&[1, 0, -1], &[1, 0, 0, -1]).to_int_poly().unwrap_err();
        assert!(!fail.remainder.is_zero());
        // q^2 (1 + 1/q) written in t = 1/q, then inverted back to q.
        let in_t = RationalFunction::t_pow(-2).mul(&rf(&[1, 1], &[1]));
        assert_eq!(in_t.to_int_poly().ok(), None);
        let in_q = RationalFunction::t_pow(2).mul(&rf(&[1, 1], &[1]).substitute(Substitution::Invert));
        assert_eq!(in_q.to_int_poly().unwrap(), poly(&[0, 1, 1]));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(rf(&[1, 1], &[1, 0, -3])).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"num": [[0, "-1"], [1, "-1"]], "den": [[0, "-1"], [2, "3"]]})
        );
        let back: RationalFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back, rf(&[1, 1], &[1, 0, -3]));
    }

    #[test]
    fn display() {
        assert_eq!(rf(&[1, 1], &[1]).to_string(), "1+t");
        assert_eq!(rf(&[1], &[1, 1, 1]).to_string(), "1/(1+t+t^2)");
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-3i64..=3, 0..4).prop_map(|c| IntPoly::from_i64s(&c))
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        (small_poly(), small_poly().prop_filter("nonzero", |p| !p.is_zero()))
            .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn distributive(a in small_rf(), b in small_rf(), c in small_rf()) {
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        }

        #[test]
        fn neg_substitution_involutive(a in small_rf()) {
            prop_assert_eq!(a.substitute(Substitution::Neg).substitute(Substitution::Neg), a);
        }

        #[test]
        fn eval_is_homomorphism(a in small_rf(), b in small_rf(), n in -5i64..=5, d in 1i64..=5) {
            let t0 = q(n, d);
            if let (Ok(x), Ok(y)) = (a.eval_at(&t0), b.eval_at(&t0)) {
                prop_assert_eq!(a.add(&b).eval_at(&t0).unwrap(), &x + &y);
                prop_assert_eq!(a.mul(&b).eval_at(&t0).unwrap(), &x * &y);
                if !y.is_zero() {
                    prop_assert_eq!(a.div(&b).unwrap().eval_at(&t0).unwrap(), x / y);
                }
            }
        }
    }
}
