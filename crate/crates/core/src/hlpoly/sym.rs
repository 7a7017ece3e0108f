//! `P_λ` by explicit symmetrization over the symmetric group.

use super::laurent::LaurentPoly;
use crate::exactnum::Field;
use crate::sigcore::Signature;
use crate::{Error, Result};

/// Largest variable count accepted by [`hl_p_sym`]; the sum has `n!` terms.
pub const MAX_SYM_VARS: usize = 7;

/// All permutations of `0..n` with their signs.
pub(crate) fn signed_permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, even: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        if k + 1 >= p.len() {
            out.push((p.clone(), even));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, if i == k { even } else { !even }, out);
            p.swap(k, i);
        }
    }
    if n == 0 {
        out.push((Vec::new(), true));
    } else {
        rec(0, &mut p, true, &mut out);
    }
    out
}

/// `V_m(t) = Π_{k=1}^{m} (1 + t + ... + t^{k-1})`.
pub fn v_m<F: Field>(m: usize, t: &F) -> F {
    let mut acc = F::one();
    let mut bracket = F::zero();
    let mut pw = F::one();
    for _ in 0..m {
        bracket = bracket.plus(&pw);
        pw = pw.times(t);
        acc = acc.times(&bracket);
    }
    acc
}

/// `V_λ(t) = Π_i V_{m_i(λ)}(t)` over all part values.
pub fn v_lambda<F: Field>(lambda: &Signature, t: &F) -> F {
    lambda
        .mults()
        .values()
        .fold(F::one(), |acc, &m| acc.times(&v_m(m, t)))
}

/// `P_λ(x_1, ..., x_n; t)` as `V_λ(t)^{-1} Σ_w w(x^λ Π_{i<j} (x_i - t x_j)/(x_i - x_j))`.
pub fn hl_p_sym<F: Field>(lambda: &Signature, n: usize, t: &F) -> Result<LaurentPoly<F>> {
    if lambda.len() != n {
        return Err(Error::Dimension(format!("{lambda} has length {}, expected {n}", lambda.len())));
    }
    if n == 0 {
        return Ok(LaurentPoly::one(0));
    }
    if n > MAX_SYM_VARS {
        return Err(Error::Guard(format!("symmetrization over S_{n} is too large")));
    }
    let low = lambda.last().unwrap();
    let base: Vec<i64> = lambda.parts().iter().map(|x| x - low).collect();
    let mut f = LaurentPoly::monomial(base, F::one());
    for i in 0..n {
        for j in i + 1..n {
            let xi = LaurentPoly::var(n, i);
            let txj = LaurentPoly::var(n, j).scale(t);
            f = f.mul(&xi.sub(&txj));
        }
    }
    let mut anti = LaurentPoly::zero(n);
    for (w, even) in signed_permutations(n) {
        for (e, c) in f.terms() {
            let mut we = vec![0; n];
            for i in 0..n {
                we[w[i]] = e[i];
            }
            anti.add_term(we, if even { c.clone() } else { c.negate() });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            anti = anti.div_by_difference(i, j)?;
        }
    }
    let v = v_lambda(lambda, t);
    let vi = v.recip()?;
    Ok(anti.scale(&vi).shift_all(low))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RationalFunction;

    fn sig(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        let t = RationalFunction::t();
        let one = RationalFunction::one();
        let p = hl_p_sym(&sig(&[1, 0]), 2, &t).unwrap();
        assert_eq!(p, LaurentPoly::var(2, 0).add(&LaurentPoly::var(2, 1)));
        let p = hl_p_sym(&sig(&[1, 1]), 2, &t).unwrap();
        assert_eq!(p, LaurentPoly::monomial(vec![1, 1], one.clone()));
        let p = hl_p_sym(&sig(&[2, 0]), 2, &t).unwrap();
        assert_eq!(p.coeff(&[1, 1]), one.minus(&t));
        assert_eq!(p.coeff(&[2, 0]), one);
        assert_eq!(p.len(), 3);
        assert!(hl_p_sym(&sig(&[1]), 2, &t).is_err());
    }

    #[test]
    fn signs_of_permutations() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().filter(|(_, e)| *e).count(), 3);
    }

    #[test]
    fn negative_parts_shift() {
        let t = RationalFunction::t();
        let p = hl_p_sym(&sig(&[1, -1]), 2, &t).unwrap();
        let q = hl_p_sym(&sig(&[2, 0]), 2, &t).unwrap().shift_all(-1);
        assert_eq!(p, q);
    }
}
