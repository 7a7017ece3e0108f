//! Littlewood-Richardson type coefficients for the standard, alternating and
//! Hermitian products, the Hecke structure polynomials built from them, coset
//! counts `N_μ` and orbit volumes.

use crate::exactnum::{Field, IntPoly, RationalFunction, Substitution};
use crate::hlpoly::{expand_in_hl, p_poly, recombine, skew_poly, Kind, LaurentPoly, MonoVar};
use crate::hlpoly::v_lambda;
use crate::hlpoly::v_m;
use crate::sigcore::Signature;
use crate::{Error, Result};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

/// Which product a coefficient table expands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LrCase {
    Std,
    Alt,
    Her,
}

/// The two symmetric matrix classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Alt,
    Her,
}

impl From<Case> for LrCase {
    fn from(c: Case) -> Self {
        match c {
            Case::Alt => LrCase::Alt,
            Case::Her => LrCase::Her,
        }
    }
}

impl FromStr for LrCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "std" => Ok(LrCase::Std),
            "alt" => Ok(LrCase::Alt),
            "her" => Ok(LrCase::Her),
            _ => Err(Error::Parse(format!("unknown case {s:?}"))),
        }
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alt" => Ok(Case::Alt),
            "her" => Ok(Case::Her),
            _ => Err(Error::Parse(format!("unknown case {s:?}"))),
        }
    }
}

impl fmt::Display for LrCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LrCase::Std => "std",
            LrCase::Alt => "alt",
            LrCase::Her => "her",
        })
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        LrCase::from(*self).fmt(f)
    }
}

/// Expansion coefficients `c^λ_{μ,ν}(t)` of one product, nonzero entries only.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    pub case: LrCase,
    pub mu: Signature,
    pub nu: Signature,
    pub entries: BTreeMap<Signature, RationalFunction>,
}

impl CoeffTable {
    pub fn get(&self, lambda: &Signature) -> RationalFunction {
        self.entries.get(lambda).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// The Hall-Littlewood parameter the table expands in: `t`, `t^2` or `-t`.
    pub fn param(&self) -> RationalFunction {
        param_of(self.case)
    }
}

impl Serialize for CoeffTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            case: LrCase,
            mu: &'a Signature,
            nu: &'a Signature,
            entries: Vec<(&'a Signature, &'a RationalFunction)>,
        }
        Repr { case: self.case, mu: &self.mu, nu: &self.nu, entries: self.entries.iter().collect() }.serialize(s)
    }
}

fn param_of(case: LrCase) -> RationalFunction {
    let t = RationalFunction::t();
    match case {
        LrCase::Std => t,
        LrCase::Alt => t.mul(&t),
        LrCase::Her => t.neg(),
    }
}

fn check_lengths(case: LrCase, mu: &Signature, nu: &Signature) -> Result<usize> {
    let n = nu.len();
    let ok = match case {
        LrCase::Std | LrCase::Her => mu.len() == n,
        LrCase::Alt => mu.len() == 2 * n,
    };
    if !ok || n == 0 {
        return Err(Error::Dimension(format!("{case} table needs matching lengths, got mu={mu}, nu={nu}")));
    }
    Ok(n)
}

/// The left side of the defining identity, as a polynomial in `n` variables.
pub fn defining_product(case: LrCase, mu: &Signature, nu: &Signature) -> Result<LaurentPoly<RationalFunction>> {
    let n = check_lengths(case, mu, nu)?;
    let t = RationalFunction::t();
    let param = param_of(case);
    let left = match case {
        LrCase::Std => p_poly(mu, &t)?,
        LrCase::Alt => {
            // Branching steps 2i and 2i+1 carry x_i and x_i t.
            let vars: Vec<MonoVar<RationalFunction>> = (0..n)
                .flat_map(|i| [MonoVar::plain(i), MonoVar { var: i, coeff: t.clone() }])
                .collect();
            skew_poly(Kind::P, mu, &Signature::empty(), &vars, n, &t)?
        }
        LrCase::Her => {
            let t2 = t.mul(&t);
            p_poly(mu, &t2)?.map_exponents(|e| e.iter().map(|x| 2 * x).collect())
        }
    };
    Ok(left.mul(&p_poly(nu, &param)?))
}

type CacheKey = (LrCase, Signature, Signature);

fn cache() -> &'static Mutex<HashMap<CacheKey, CoeffTable>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, CoeffTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `std`: `P_μ P_ν = Σ c P_λ` at `t`.
/// `alt`: `P_μ(x_1, x_1 t, ..., x_n, x_n t; t) P_ν(x; t^2) = Σ c^{alt} P_λ(x; t^2)`.
/// `her`: `P_μ(x^2; t^2) P_ν(x; -t) = Σ c^{her} P_λ(x; -t)`.
pub fn lr_table(case: LrCase, mu: &Signature, nu: &Signature) -> Result<CoeffTable> {
    let key = (case, mu.clone(), nu.clone());
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let prod = defining_product(case, mu, nu)?;
    let entries = expand_in_hl(&prod, &param_of(case))?;
    let table = CoeffTable { case, mu: mu.clone(), nu: nu.clone(), entries };
    cache().lock().unwrap().insert(key, table.clone());
    Ok(table)
}

/// Re-multiplies the table and compares with the defining product.
pub fn verify_table(table: &CoeffTable) -> Result<bool> {
    let prod = defining_product(table.case, &table.mu, &table.nu)?;
    Ok(recombine(&table.entries, table.nu.len(), &table.param())? == prod)
}

/// `2⟨μ, ρ_N⟩ = Σ_i μ_i (N + 1 - 2i)`, an integer.
pub fn rho2(mu: &Signature, n: usize) -> i64 {
    mu.parts()
        .iter()
        .enumerate()
        .map(|(i, &m)| m * (n as i64 - 1 - 2 * i as i64))
        .sum()
}

/// Hecke structure polynomial `g^λ_{μ,ν}(q)`.
///
/// `poly` is the full value including the sign `(-1)^{sign_exponent}` of the
/// Hermitian case; `sign_exponent` is `n(λ) - n(ν)` there and 0 for alt.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeckeCoeff {
    pub case: Case,
    pub poly: IntPoly,
    pub sign_exponent: i64,
}

impl HeckeCoeff {
    pub fn eval(&self, q: i64) -> num_bigint::BigInt {
        self.poly.eval_int(&q.into())
    }
}

/// The same polynomial as a rational function in `q`, before the integrality check.
pub fn hecke_g_rational(case: Case, mu: &Signature, nu: &Signature, lambda: &Signature) -> Result<(RationalFunction, i64)> {
    let table = lr_table(case.into(), mu, nu)?;
    if lambda.len() != nu.len() {
        return Err(Error::Dimension(format!("lambda={lambda} must have length {}", nu.len())));
    }
    let c = table.get(lambda);
    if c.is_zero() {
        return Ok((RationalFunction::zero(), 0));
    }
    let c_inv = c.substitute(Substitution::Invert);
    let (exp, sign) = match case {
        Case::Alt => (2 * lambda.weighted() - 2 * nu.weighted() - mu.weighted() + mu.size(), 0),
        Case::Her => {
            let s = lambda.weighted() - nu.weighted();
            (s - 2 * mu.weighted(), s)
        }
    };
    let mut g = RationalFunction::t_pow(exp).mul(&c_inv);
    if sign.rem_euclid(2) == 1 {
        g = g.neg();
    }
    Ok((g, sign))
}

/// `g^λ_{μ,ν}(q)` as an integer polynomial; fails with the division remainder
/// if the expression is not in `Z[q]`.
pub fn hecke_g(case: Case, mu: &Signature, nu: &Signature, lambda: &Signature) -> Result<HeckeCoeff> {
    let (g, sign_exponent) = hecke_g_rational(case, mu, nu, lambda)?;
    let poly = g.to_int_poly().map_err(|f| {
        Error::Integrality(format!(
            "g for mu={mu}, nu={nu}, lambda={lambda} is {}; remainder {}",
            g.render("q"),
            f.remainder.render("q")
        ))
    })?;
    Ok(HeckeCoeff { case, poly, sign_exponent })
}

fn q_inv() -> RationalFunction {
    RationalFunction::t_pow(-1)
}

/// Number of left `K`-cosets in `K π_μ K`; `μ` has length `2n` (alt) or `n` (her).
pub fn coset_count(case: Case, mu: &Signature) -> RationalFunction {
    let m = mu.len();
    match case {
        Case::Alt => {
            let x = q_inv();
            RationalFunction::t_pow(rho2(mu, m)).mul(&v_m(m, &x)).over(&v_lambda(mu, &x)).unwrap()
        }
        Case::Her => {
            let x = q_inv().mul(&q_inv());
            RationalFunction::t_pow(2 * rho2(mu, m)).mul(&v_m(m, &x)).over(&v_lambda(mu, &x)).unwrap()
        }
    }
}

/// Volume of the congruence orbit of `π_λ` with `K`-orbit of the identity normalized to 1.
pub fn orbit_volume(case: Case, lambda: &Signature) -> RationalFunction {
    let n = lambda.len();
    let (e, x) = match case {
        Case::Alt => (2 * rho2(lambda, n), q_inv().mul(&q_inv())),
        Case::Her => (rho2(lambda, n), q_inv().neg()),
    };
    RationalFunction::t_pow(e).mul(&v_m(n, &x)).over(&v_lambda(lambda, &x)).unwrap()
}

/// Product law through the Hecke route, `g Vol(λ) / (N_μ Vol(ν))`, as a function of `q`.
pub fn product_prob_hecke(case: Case, mu: &Signature, nu: &Signature, lambda: &Signature) -> Result<RationalFunction> {
    let (g, _) = hecke_g_rational(case, mu, nu, lambda)?;
    g.mul(&orbit_volume(case, lambda))
        .over(&coset_count(case, mu).mul(&orbit_volume(case, nu)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    fn poly(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(IntPoly::from_i64s(c))
    }

    #[test]
    fn pieri_examples() {
        for nu in [sig(&[1, 0]), sig(&[2, 0]), sig(&[3, 1])] {
            let lam = sig(&[nu.part(0) + 1, nu.part(1)]);
            let tab = lr_table(LrCase::Alt, &sig(&[1, 0, 0, 0]), &nu).unwrap();
            assert_eq!(tab.get(&lam), poly(&[1, 1]));
            let lam = sig(&[nu.part(0) + 2, nu.part(1)]);
            assert_eq!(lr_table(LrCase::Her, &sig(&[1, 0]), &nu).unwrap().get(&lam), RationalFunction::one());
        }
    }

    #[test]
    fn constant_mu_is_a_shift() {
        let nu = sig(&[2, 0]);
        let tab = lr_table(LrCase::Alt, &sig(&[1, 1, 1, 1]), &nu).unwrap();
        assert_eq!(tab.entries.len(), 1);
        // P_{1[4]}(x1, x1 t, x2, x2 t; t) = x1^2 x2^2 t^2.
        assert_eq!(tab.get(&sig(&[4, 2])), RationalFunction::t_pow(2));
        let tab = lr_table(LrCase::Alt, &sig(&[1, 1]), &sig(&[0])).unwrap();
        assert_eq!(tab.get(&sig(&[2])), RationalFunction::t());
    }

    #[test]
    fn tables_recombine() {
        for (case, mu, nu) in [
            (LrCase::Std, sig(&[1, 0]), sig(&[2, 1])),
            (LrCase::Alt, sig(&[2, 1, 0, 0]), sig(&[1, 0])),
            (LrCase::Her, sig(&[1, 1]), sig(&[2, 0])),
        ] {
            let tab = lr_table(case, &mu, &nu).unwrap();
            assert!(verify_table(&tab).unwrap());
            let target = if case == LrCase::Her { 2 * mu.size() + nu.size() } else { mu.size() + nu.size() };
            assert!(tab.entries.keys().all(|l| l.size() == target));
        }
    }

    #[test]
    fn coset_counts_and_volumes() {
        assert_eq!(coset_count(Case::Alt, &sig(&[1, 0])), poly(&[1, 1]));
        assert_eq!(coset_count(Case::Her, &sig(&[1, 0])), poly(&[1, 0, 1]));
        assert_eq!(coset_count(Case::Her, &sig(&[0, 0])), RationalFunction::one());
        assert_eq!(orbit_volume(Case::Alt, &sig(&[1])), RationalFunction::one());
        assert_eq!(orbit_volume(Case::Her, &sig(&[0, 0])), RationalFunction::one());
        assert_eq!(orbit_volume(Case::Her, &sig(&[1, 0])), poly(&[-1, 1]));
    }

    #[test]
    fn hecke_polynomials() {
        let g = hecke_g(Case::Alt, &sig(&[1, 0, 0, 0]), &sig(&[1, 0]), &sig(&[2, 0])).unwrap();
        assert_eq!(g.poly, IntPoly::from_i64s(&[1, 1]));
        let g = hecke_g(Case::Alt, &sig(&[1, 0, 0, 0]), &sig(&[1, 0]), &sig(&[3, 0])).unwrap();
        assert!(g.poly.is_zero());
        let a = hecke_g(Case::Alt, &sig(&[1, 0, 0, 0]), &sig(&[1, 0]), &sig(&[1, 1])).unwrap();
        let b = hecke_g(Case::Alt, &sig(&[1, 0, 0, 0]), &sig(&[2, 1]), &sig(&[2, 2])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hecke_route_matches_pieri_probability() {
        // q^{2n-2}(q^2 - 1)/(q^{2n} - 1) at n = 2, matching a direct count of
        // index-q sublattices for the alternating case.
        let want = poly(&[0, 0, -1, 0, 1]).over(&poly(&[-1, 0, 0, 0, 1])).unwrap();
        let p = product_prob_hecke(Case::Alt, &sig(&[1, 0, 0, 0]), &sig(&[1, 0]), &sig(&[2, 0])).unwrap();
        assert_eq!(p, want);
        let p = product_prob_hecke(Case::Her, &sig(&[1, 0]), &sig(&[1, 0]), &sig(&[3, 0])).unwrap();
        assert_eq!(p, want);
    }
}
