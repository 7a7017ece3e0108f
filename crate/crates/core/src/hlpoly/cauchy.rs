//! The Cauchy kernel `Π_τ(X; Y) = Π (1 - τ x y) / (1 - x y)`.

use super::specialization::{GeomTail, Specialization};
use crate::exactnum::{rat, Field, Interval, RationalFunction};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Signed;

fn pair_factor<F: Field>(x: &F, y: &F, tau: &F) -> Result<F> {
    let w = x.times(y);
    let den = F::one().minus(&w);
    if den.is_zero() {
        return Err(Error::Divergence(format!("x y = 1 for x = {x}, y = {y}")));
    }
    F::one().minus(&tau.times(&w)).over(&den)
}

const MAX_SHIFT: usize = 8;

/// Smallest `k ≤ MAX_SHIFT` with `r^k = τ`.
fn shift_of<F: Field>(r: &F, tau: &F) -> Option<usize> {
    let mut p = r.clone();
    for k in 1..=MAX_SHIFT {
        if p == *tau {
            return Some(k);
        }
        p = p.times(r);
    }
    None
}

fn inv_one_minus<F: Field>(w: &F) -> Result<F> {
    let den = F::one().minus(w);
    if den.is_zero() {
        return Err(Error::Divergence(format!("1 - {w} vanishes")));
    }
    den.recip()
}

/// Product of the factors of a finite value `x` against a list of tails.
///
/// A tail `a, ar, ar^2, ...` with `τ = r^k` telescopes to
/// `Π_{j<k} 1/(1 - x a r^j)`. Tails `a r^j` and `-a r^j` taken together give
/// factors `(1 - τ² x² a² r^{2j})/(1 - x² a² r^{2j})`, which telescope when
/// `τ² = r^{2k}`.
fn telescoped<F: Field>(x: &F, tails: &[GeomTail<F>], tau: &F) -> Result<F> {
    let mut acc = F::one();
    let mut used = vec![false; tails.len()];
    for (i, tl) in tails.iter().enumerate() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if let Some(k) = shift_of(&tl.ratio, tau) {
            let mut w = x.times(&tl.first);
            for _ in 0..k {
                acc = acc.times(&inv_one_minus(&w)?);
                w = w.times(&tl.ratio);
            }
            continue;
        }
        let partner = (i + 1..tails.len())
            .find(|&j| !used[j] && tails[j].ratio == tl.ratio && tails[j].first == tl.first.negate());
        let r2 = tl.ratio.times(&tl.ratio);
        match (partner, shift_of(&r2, &tau.times(tau))) {
            (Some(j), Some(k)) => {
                used[j] = true;
                let xa = x.times(&tl.first);
                let mut w = xa.times(&xa);
                for _ in 0..k {
                    acc = acc.times(&inv_one_minus(&w)?);
                    w = w.times(&r2);
                }
            }
            _ => return Err(Error::TailNotAllowed),
        }
    }
    Ok(acc)
}

/// Exact kernel. Tails are accepted only where the product telescopes: one
/// side finite, and each tail either has ratio `r` with `τ` a small power of
/// `r`, or pairs with its negative and `τ²` is a small power of `r²`.
pub fn cauchy_exact<F: Field>(a: &Specialization<F>, b: &Specialization<F>, tau: &F) -> Result<F> {
    if !a.tails.is_empty() && !b.tails.is_empty() {
        return Err(Error::TailNotAllowed);
    }
    let mut acc = F::one();
    for x in &a.finite {
        for y in &b.finite {
            acc = acc.times(&pair_factor(x, y, tau)?);
        }
        if !b.tails.is_empty() {
            acc = acc.times(&telescoped(x, &b.tails, tau)?);
        }
    }
    if !a.tails.is_empty() {
        for y in &b.finite {
            acc = acc.times(&telescoped(y, &a.tails, tau)?);
        }
    }
    Ok(acc)
}

fn abs_sum(s: &Specialization<BigRational>) -> Result<BigRational> {
    let mut acc: BigRational = s.finite.iter().map(|x| x.abs()).sum();
    for tl in &s.tails {
        let r = tl.ratio.abs();
        if r >= rat(1, 1) {
            return Err(Error::Divergence(format!("tail ratio {} has |r| >= 1", tl.ratio)));
        }
        acc += tl.first.abs() / (rat(1, 1) - r);
    }
    Ok(acc)
}

fn max_abs(s: &Specialization<BigRational>) -> BigRational {
    s.finite
        .iter()
        .chain(s.tails.iter().map(|tl| &tl.first))
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(|| rat(0, 1))
}

/// Certified enclosure of the kernel at rational values, with tails truncated
/// until the enclosure is narrower than `tol`.
///
/// With `|w| ≤ 1/2`, `|log(1 - w)| ≤ 2|w|`, so the omitted factors change the
/// logarithm by at most `ε = 2(1 + |τ|) Σ |x_i y_j|` over omitted pairs, and the
/// value lies in `Π_N [1 - ε, 1 + 2ε]` once `ε ≤ 1`.
pub fn cauchy_numeric(
    a: &Specialization<BigRational>,
    b: &Specialization<BigRational>,
    tau: &BigRational,
    tol: &BigRational,
) -> Result<Interval> {
    if a.is_finite() && b.is_finite() {
        return Ok(Interval::point(cauchy_exact(a, b, tau)?));
    }
    let half = BigRational::new(1.into(), 2.into());
    let sa = abs_sum(a)?;
    let sb = abs_sum(b)?;
    let mut n = 8usize;
    loop {
        let ta = Specialization::finite(a.truncate(n));
        let tb = Specialization::finite(b.truncate(n));
        let pa = abs_sum(&ta)?;
        let pb = abs_sum(&tb)?;
        let omitted = &sa * &sb - &pa * &pb;
        let eps = BigRational::from_integer(2.into()) * (rat(1, 1) + tau.abs()) * omitted;
        // Omitted pairs involve at least one tail entry past index n.
        let tail_a = a.tails.iter().map(|tl| tl.first.abs() * tl.ratio.abs().pow(n as i32)).max();
        let tail_b = b.tails.iter().map(|tl| tl.first.abs() * tl.ratio.abs().pow(n as i32)).max();
        let w_max = [tail_a.map(|v| v * max_abs(b)), tail_b.map(|v| v * max_abs(a))]
            .into_iter()
            .flatten()
            .max()
            .unwrap_or_else(|| rat(0, 1));
        let w_ok = &w_max <= &half && &w_max * tau.abs() <= half;
        if w_ok && eps <= rat(1, 1) {
            let base = cauchy_exact(&ta, &tb, tau)?;
            let lo = &base * (rat(1, 1) - &eps);
            let hi = &base * (rat(1, 1) + &eps * BigRational::from_integer(2.into()));
            let iv = if lo <= hi { Interval::new(lo, hi) } else { Interval::new(hi, lo) };
            if &iv.width() <= tol {
                return Ok(iv);
            }
        }
        if n >= 1 << 14 {
            return Err(Error::Divergence(format!("kernel did not reach tolerance {tol}")));
        }
        n *= 2;
    }
}

/// How [`cauchy`] should evaluate.
#[derive(Clone, Debug)]
pub enum CauchyMode {
    Exact,
    Numeric { t0: BigRational, tol: BigRational },
}

#[derive(Clone, Debug, PartialEq)]
pub enum CauchyValue {
    Exact(RationalFunction),
    Approx(Interval),
}

/// Kernel with symbolic specializations, exact or as a certified enclosure.
pub fn cauchy(
    a: &Specialization<RationalFunction>,
    b: &Specialization<RationalFunction>,
    tau: &RationalFunction,
    mode: &CauchyMode,
) -> Result<CauchyValue> {
    match mode {
        CauchyMode::Exact => cauchy_exact(a, b, tau).map(CauchyValue::Exact),
        CauchyMode::Numeric { t0, tol } => {
            let tau0 = crate::exactnum::eval_in(tau, t0)?;
            cauchy_numeric(&a.at(t0)?, &b.at(t0)?, &tau0, tol).map(CauchyValue::Approx)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn alt_three_corner_constant() {
        let t = RationalFunction::t();
        let t2 = t.times(&t);
        let v = cauchy_exact(
            &Specialization::finite(vec![t.clone()]),
            &Specialization::finite(vec![RationalFunction::one()]),
            &t2,
        )
        .unwrap();
        assert_eq!(v, RationalFunction::from_poly(crate::IntPoly::from_i64s(&[1, 1, 1])));
    }

    #[test]
    fn single_pair() {
        let x = q(1, 2);
        let y = q(1, 3);
        let tau = q(1, 5);
        let v = cauchy_exact(&Specialization::finite(vec![x.clone()]), &Specialization::finite(vec![y.clone()]), &tau)
            .unwrap();
        assert_eq!(v, (q(1, 1) - &tau * &x * &y) / (q(1, 1) - &x * &y));
        assert!(cauchy_exact(&Specialization::finite(vec![q(2, 1)]), &Specialization::finite(vec![q(1, 2)]), &tau).is_err());
    }

    #[test]
    fn numeric_matches_long_truncation() {
        // Π_{-t}(1; t, -t, t^2, -t^2, ...) at t = 1/3.
        let t = q(1, 3);
        let a = Specialization::finite(vec![q(1, 1)]);
        let b = Specialization::geometric_tail(&t, &t).concat(&Specialization::geometric_tail(&-t.clone(), &t));
        let tol = q(1, 1_000_000_000_000);
        let iv = cauchy_numeric(&a, &b, &-t.clone(), &tol).unwrap();
        let trunc = cauchy_exact(&a, &Specialization::finite(b.truncate(80)), &-t.clone()).unwrap();
        assert!(iv.contains(&trunc) || (iv.mid() - trunc).abs() < tol);
        assert!(iv.width() <= tol);
    }

    #[test]
    fn telescoping_agrees_with_numeric() {
        let t = q(1, 3);
        let a = Specialization::geometric(&q(1, 1), &(&t * &t), 2);
        let b = Specialization::geometric_tail(&t, &(&t * &t));
        let exact = cauchy_exact(&a, &b, &(&t * &t)).unwrap();
        let iv = cauchy_numeric(&a, &b, &(&t * &t), &q(1, 1_000_000_000)).unwrap();
        assert!(iv.contains(&exact));
    }

    #[test]
    fn shifted_and_paired_tails_telescope() {
        let t = q(1, 3);
        let tol = q(1, 1_000_000_000);
        let a = Specialization::geometric(&q(1, 1), &(&t * &t), 2);
        // Π_{t²}(θ; t, t², ...): the ratio squared is τ.
        let b = Specialization::geometric_tail(&t, &t);
        let exact = cauchy_exact(&a, &b, &(&t * &t)).unwrap();
        assert!(cauchy_numeric(&a, &b, &(&t * &t), &tol).unwrap().contains(&exact));
        // Π_{-t}(1, -t; t, -t, t², -t², ...) = 1/((1 - t²)(1 - t⁴)).
        let a = Specialization::geometric(&q(1, 1), &-t.clone(), 2);
        let b = Specialization::geometric_tail(&t, &t).concat(&Specialization::geometric_tail(&-t.clone(), &t));
        let exact = cauchy_exact(&a, &b, &-t.clone()).unwrap();
        let t2 = &t * &t;
        assert_eq!(exact, q(1, 1) / ((q(1, 1) - &t2) * (q(1, 1) - &t2 * &t2)));
        assert!(cauchy_numeric(&a, &b, &-t.clone(), &tol).unwrap().contains(&exact));
    }
}
