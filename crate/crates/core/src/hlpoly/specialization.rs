//! Argument lists for P, Q and the Cauchy kernel.

use crate::exactnum::{eval_in, Field, RationalFunction};
use crate::Result;
use num_rational::BigRational;
use serde::Serialize;

/// The infinite list `first, first*ratio, first*ratio^2, ...`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeomTail<F> {
    pub first: F,
    pub ratio: F,
}

/// A finite list of values optionally followed by any number of geometric tails.
///
/// Several tails denote the union of the corresponding infinite lists, which is
/// how interleaved lists such as `t, -t, t^2, -t^2, ...` are represented.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Specialization<F> {
    pub finite: Vec<F>,
    pub tails: Vec<GeomTail<F>>,
}

impl<F: Field> Specialization<F> {
    pub fn finite(values: Vec<F>) -> Self {
        Specialization {
            finite: values,
            tails: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        Self::finite(Vec::new())
    }

    /// `x, x r, ..., x r^{count-1}`.
    pub fn geometric(x: &F, r: &F, count: usize) -> Self {
        let mut v = Vec::with_capacity(count);
        let mut cur = x.clone();
        for _ in 0..count {
            v.push(cur.clone());
            cur = cur.times(r);
        }
        Self::finite(v)
    }

    /// `x, x r, x r^2, ...` without end.
    pub fn geometric_tail(x: &F, r: &F) -> Self {
        Specialization {
            finite: Vec::new(),
            tails: vec![GeomTail {
                first: x.clone(),
                ratio: r.clone(),
            }],
        }
    }

    pub fn with_tail(mut self, first: F, ratio: F) -> Self {
        self.tails.push(GeomTail { first, ratio });
        self
    }

    /// Union of two specializations.
    pub fn concat(&self, o: &Self) -> Self {
        let mut finite = self.finite.clone();
        finite.extend(o.finite.iter().cloned());
        let mut tails = self.tails.clone();
        tails.extend(o.tails.iter().cloned());
        Specialization { finite, tails }
    }

    pub fn is_finite(&self) -> bool {
        self.tails.is_empty()
    }

    /// Finite values plus the first `k` entries of every tail.
    pub fn truncate(&self, k: usize) -> Vec<F> {
        let mut v = self.finite.clone();
        for tl in &self.tails {
            v.extend(Self::geometric(&tl.first, &tl.ratio, k).finite);
        }
        v
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<Specialization<G>> {
        Ok(Specialization {
            finite: self.finite.iter().map(&f).collect::<Result<_>>()?,
            tails: self
                .tails
                .iter()
                .map(|tl| {
                    Ok(GeomTail {
                        first: f(&tl.first)?,
                        ratio: f(&tl.ratio)?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

impl Specialization<RationalFunction> {
    /// Evaluate every entry at a rational parameter value.
    pub fn at(&self, t0: &BigRational) -> Result<Specialization<BigRational>> {
        self.map(|f| eval_in(f, t0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_interleaves_tails() {
        let t = BigRational::new(1.into(), 3.into());
        let s = Specialization::geometric_tail(&t, &t).concat(&Specialization::geometric_tail(&-t.clone(), &t));
        let v = s.truncate(2);
        assert_eq!(v.len(), 4);
        assert_eq!(v[1], &t * &t);
        assert_eq!(v[2], -t.clone());
    }
}
