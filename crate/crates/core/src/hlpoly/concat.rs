//! Skew Q over unions of specializations, exact for finite lists and as
//! certified enclosures when geometric tails are present.

use super::gt::{skew_eval, skew_eval_abs, Kind};
use super::specialization::Specialization;
use crate::exactnum::{rat, Field, Interval};
use crate::sigcore::{between, Signature};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Signed;

/// `Q_{outer/inner}(ψ1 ∪ ψ2) = Σ_κ Q_{outer/κ}(ψ2) Q_{κ/inner}(ψ1)` for finite lists.
pub fn spec_concat_q<F: Field>(
    outer: &Signature,
    inner: &Signature,
    psi1: &Specialization<F>,
    psi2: &Specialization<F>,
    t: &F,
) -> Result<F> {
    if !psi1.is_finite() || !psi2.is_finite() {
        return Err(Error::TailNotAllowed);
    }
    if outer.len() != inner.len() {
        return Err(Error::Dimension(format!("{outer} and {inner} differ in length")));
    }
    let mut acc = F::zero();
    for kappa in between(inner, outer)? {
        let a = skew_eval(Kind::Q, &kappa, inner, &psi1.finite, t)?;
        if a.is_zero() {
            continue;
        }
        let b = skew_eval(Kind::Q, outer, &kappa, &psi2.finite, t)?;
        acc = acc.plus(&a.times(&b));
    }
    Ok(acc)
}

/// `Σ_{k≥J} (f(|a r^k|) - 1)` bound with `f(z) = 1 + B((1 - z)^{-n} - 1)`.
fn tail_majorant(first: &BigRational, ratio: &BigRational, j: usize, n: usize, b: &BigRational) -> Option<BigRational> {
    let r = ratio.abs();
    let zj = first.abs() * r.pow(j as i32);
    let one = rat(1, 1);
    if zj >= one || r >= one {
        return None;
    }
    let denom = (&one - &zj).pow(n as i32 + 1) * (&one - &r);
    Some(b * BigRational::from_integer((n as i64).into()) * zj / denom)
}

/// Certified enclosure of `Q_{outer/inner}(spec; t)` where `spec` may carry tails.
///
/// Tails are truncated at `J` terms. The omitted entries `Y` contribute
/// `Σ_{κ≠outer} Q_{outer/κ}(Y) Q_{κ/inner}(X)`, bounded by
/// `max_κ A(κ) · (e^S - 1)` with `A` the absolute-value branching sum and
/// `S` the tail majorant; `e^S - 1 ≤ 2S` for `S ≤ 1`.
pub fn skew_q_numeric(
    outer: &Signature,
    inner: &Signature,
    spec: &Specialization<BigRational>,
    t: &BigRational,
    tol: &BigRational,
) -> Result<Interval> {
    if outer.len() != inner.len() {
        return Err(Error::Dimension(format!("{outer} and {inner} differ in length")));
    }
    if spec.is_finite() {
        return Ok(Interval::point(skew_eval(Kind::Q, outer, inner, &spec.finite, t)?));
    }
    let n = outer.len();
    let b = (rat(1, 1) + t.abs()).pow(n as i32);
    let kappas = between(inner, outer)?;
    let mut j = 16usize;
    loop {
        let mut s = rat(0, 1);
        let mut ok = true;
        for tl in &spec.tails {
            match tail_majorant(&tl.first, &tl.ratio, j, n, &b) {
                Some(v) => s += v,
                None => ok = false,
            }
        }
        if ok && s <= rat(1, 1) {
            let vars = spec.truncate(j);
            let mut amax = rat(0, 1);
            for kappa in kappas.iter().filter(|k| *k != outer) {
                let a = skew_eval_abs(Kind::Q, kappa, inner, &vars, t)?;
                if a > amax {
                    amax = a;
                }
            }
            let err = amax * s * BigRational::from_integer(2.into());
            if err.clone() * BigRational::from_integer(2.into()) <= *tol {
                let val = skew_eval(Kind::Q, outer, inner, &vars, t)?;
                return Ok(Interval::around(&val, &err));
            }
        }
        if j >= 1 << 12 {
            return Err(Error::Divergence(format!("skew Q did not reach tolerance {tol}")));
        }
        j *= 2;
    }
}

/// Enclosure of `Q_{outer/inner}(ψ1 ∪ ψ2)` through the intermediate-κ sum.
pub fn spec_concat_q_numeric(
    outer: &Signature,
    inner: &Signature,
    psi1: &Specialization<BigRational>,
    psi2: &Specialization<BigRational>,
    t: &BigRational,
    tol: &BigRational,
) -> Result<Interval> {
    let kappas = between(inner, outer)?;
    let mut part_tol = tol / BigRational::from_integer((4 * kappas.len().max(1) as i64).into());
    for _ in 0..8 {
        let mut acc = Interval::point(rat(0, 1));
        for kappa in &kappas {
            let a = skew_q_numeric(kappa, inner, psi1, t, &part_tol)?;
            let b = skew_q_numeric(outer, kappa, psi2, t, &part_tol)?;
            acc = acc.add(&a.mul(&b));
        }
        if &acc.width() <= tol {
            return Ok(acc);
        }
        part_tol = part_tol / BigRational::from_integer(16.into());
    }
    Err(Error::Divergence(format!("concatenated skew Q did not reach tolerance {tol}")))
}
