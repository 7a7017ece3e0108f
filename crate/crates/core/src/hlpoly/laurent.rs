//! Sparse Laurent polynomials in `n` variables over a coefficient field.

use crate::exactnum::{Field, RationalFunction};
use crate::{Error, Result};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPoly<F> {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, F>,
}

/// Symmetric Laurent polynomials with symbolic coefficients.
pub type LaurentSymPoly = LaurentPoly<RationalFunction>;

impl<F: Field> LaurentPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], F::one())
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<i64>, c: F) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable `x_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, F::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// Add `c x^e` in place.
    pub fn add_term(&mut self, e: Vec<i64>, c: F) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Lexicographically largest monomial and its coefficient.
    pub fn leading_term(&self) -> Option<(&Vec<i64>, &F)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.negate())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        self.map_coeffs(|x| x.times(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = Self::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.times(cb));
            }
        }
        out
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> LaurentPoly<G> {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Apply a monomial map to exponent vectors, e.g. `x_i -> x_i^2`.
    pub fn map_exponents(&self, f: impl Fn(&[i64]) -> Vec<i64>) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    /// Multiply by `(x_1 ... x_n)^d`.
    pub fn shift_all(&self, d: i64) -> Self {
        self.map_exponents(|e| e.iter().map(|x| x + d).collect())
    }

    /// Invariance under all adjacent transpositions, hence under `S_n`.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            (0..self.nvars.saturating_sub(1)).all(|i| {
                let mut s = e.clone();
                s.swap(i, i + 1);
                self.terms.get(&s) == Some(c)
            })
        })
    }

    pub fn eval(&self, point: &[F]) -> Result<F> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "evaluating {} variables at {} points",
                self.nvars,
                point.len()
            )));
        }
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                term = term.times(&x.powi(k)?);
            }
            acc = acc.plus(&term);
        }
        Ok(acc)
    }

    /// Exact quotient by `x_i - x_j`; errors if there is a remainder.
    pub fn div_by_difference(&self, i: usize, j: usize) -> Result<Self> {
        // Synthetic division in x_i with coefficients in the other variables.
        let mut by_deg: BTreeMap<i64, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[i];
            rest[i] = 0;
            by_deg
                .entry(k)
                .or_insert_with(|| Self::zero(self.nvars))
                .add_term(rest, c.clone());
        }
        let mut xj = vec![0; self.nvars];
        xj[j] = 1;
        let xj = Self::monomial(xj, F::one());
        let (lo, hi) = match (by_deg.keys().next(), by_deg.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Ok(Self::zero(self.nvars)),
        };
        let mut out = Self::zero(self.nvars);
        let mut carry = Self::zero(self.nvars);
        for k in (lo + 1..=hi).rev() {
            let ck = by_deg.remove(&k).unwrap_or_else(|| Self::zero(self.nvars));
            let dk = ck.add(&carry);
            for (e, c) in &dk.terms {
                let mut e = e.clone();
                e[i] = k - 1;
                out.add_term(e, c.clone());
            }
            carry = xj.mul(&dk);
        }
        let rem = by_deg
            .remove(&lo)
            .unwrap_or_else(|| Self::zero(self.nvars))
            .add(&carry);
        if !rem.is_zero() {
            return Err(Error::Domain(format!(
                "x{} - x{} does not divide the polynomial",
                i + 1,
                j + 1
            )));
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Display for LaurentPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    write!(f, "*x{}^{}", i + 1, x)?;
                }
            }
        }
        Ok(())
    }
}

impl<F: Field + Serialize> Serialize for LaurentPoly<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(&Vec<i64>, &F)> = self.terms.iter().collect();
        let mut st = s.serialize_struct("LaurentPoly", 2)?;
        st.serialize_field("nvars", &self.nvars)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(a: i64) -> Q {
        Q::from_integer(a.into())
    }

    #[test]
    fn products_and_symmetry() {
        let x = LaurentPoly::<Q>::var(2, 0);
        let y = LaurentPoly::<Q>::var(2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(&[1, 1]), q(2));
        assert!(sq.is_symmetric());
        assert!(!x.is_symmetric());
        assert!(sq.sub(&sq).is_zero());
    }

    #[test]
    fn division_by_difference() {
        let x = LaurentPoly::<Q>::var(2, 0);
        let y = LaurentPoly::<Q>::var(2, 1);
        let d = x.sub(&y);
        let f = d.mul(&x.mul(&x).add(&y).shift_all(-1));
        assert_eq!(f.div_by_difference(0, 1).unwrap(), x.mul(&x).add(&y).shift_all(-1));
        assert!(x.div_by_difference(0, 1).is_err());
    }

    #[test]
    fn evaluation_with_negative_exponents() {
        let p = LaurentPoly::<Q>::monomial(vec![-1, 2], q(3));
        assert_eq!(p.eval(&[q(2), q(3)]).unwrap(), Q::new(27.into(), 2.into()));
    }
}
