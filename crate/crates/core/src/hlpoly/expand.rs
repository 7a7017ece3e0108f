//! Expansion of symmetric Laurent polynomials in the `P_λ` basis.

use super::gt::p_poly;
use super::laurent::LaurentPoly;
use crate::exactnum::Field;
use crate::sigcore::Signature;
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// Coefficients `c_λ` with `f = Σ c_λ P_λ(x; t)`.
///
/// Repeatedly removes the lexicographically leading monomial `c x^λ` by
/// subtracting `c P_λ`, which is monic with leading monomial `x^λ`.
pub fn expand_in_hl<F: Field>(f: &LaurentPoly<F>, t: &F) -> Result<BTreeMap<Signature, F>> {
    if !f.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    let mut cache: HashMap<Signature, LaurentPoly<F>> = HashMap::new();
    let guard = 1_000_000usize;
    let mut steps = 0usize;
    while let Some((e, c)) = rest.leading_term() {
        steps += 1;
        if steps > guard {
            return Err(Error::Guard("basis expansion did not terminate".into()));
        }
        let lam = Signature::new(e.clone())?;
        let c = c.clone();
        if !cache.contains_key(&lam) {
            cache.insert(lam.clone(), p_poly(&lam, t)?);
        }
        rest = rest.sub(&cache[&lam].scale(&c));
        out.insert(lam, c);
    }
    Ok(out)
}

/// `Σ c_λ P_λ(x; t)` in `n` variables.
pub fn recombine<F: Field>(coeffs: &BTreeMap<Signature, F>, n: usize, t: &F) -> Result<LaurentPoly<F>> {
    let mut acc = LaurentPoly::zero(n);
    for (lam, c) in coeffs {
        acc = acc.add(&p_poly(lam, t)?.scale(c));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RationalFunction;

    fn sig(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        let t = RationalFunction::t();
        let one = RationalFunction::one();
        let p20 = p_poly(&sig(&[2, 0]), &t).unwrap();
        assert_eq!(expand_in_hl(&p20, &t).unwrap(), BTreeMap::from([(sig(&[2, 0]), one.clone())]));

        let e1 = LaurentPoly::var(2, 0).add(&LaurentPoly::var(2, 1));
        let got = expand_in_hl(&e1.mul(&e1), &t).unwrap();
        assert_eq!(got[&sig(&[2, 0])], one);
        assert_eq!(got[&sig(&[1, 1])], one.plus(&t));
        assert_eq!(got.len(), 2);

        let x1x2 = LaurentPoly::monomial(vec![1, 1], one.clone());
        let got = expand_in_hl(&x1x2.mul(&p_poly(&sig(&[1, 0]), &t).unwrap()), &t).unwrap();
        assert_eq!(got, BTreeMap::from([(sig(&[2, 1]), one)]));
    }

    #[test]
    fn rejects_asymmetric() {
        let t = RationalFunction::t();
        let x = LaurentPoly::<RationalFunction>::var(2, 0);
        assert_eq!(expand_in_hl(&x, &t), Err(Error::NonSymmetric));
    }
}
