//! The laws themselves, generic over the coefficient field so that one code
//! path serves rational `t` and symbolic `t`.

use crate::exactnum::{eval_in, q_pochhammer, rat, Field, Interval};
use crate::heckecoeff::{lr_table, Case};
use crate::hlpoly::{cauchy_exact, cauchy_numeric, principal, skew_eval1, skew_q_numeric, Count, Kind, Specialization};
use crate::sigcore::{between, enumerate, enumerate_guarded, interlace, InterlaceKind, Signature};
use crate::{Error, Result};
use num_rational::BigRational;
use std::cmp::Ordering;

use super::LawCase;

/// `P_λ(x, x s, ..., x s^{len-1}; s)`.
pub(crate) fn p_geo<F: Field>(lambda: &Signature, x: &F, s: &F) -> Result<F> {
    if lambda.is_empty() {
        return Ok(F::one());
    }
    principal(Kind::P, lambda, x, Count::Finite(lambda.len()), s)
}

fn theta<F: Field>(s: &F, n: usize) -> Specialization<F> {
    Specialization::geometric(&F::one(), s, n)
}

fn need_len(sig: &Signature, n: usize, what: &str) -> Result<()> {
    if sig.len() != n {
        return Err(Error::Dimension(format!("{what}={sig} must have length {n}")));
    }
    Ok(())
}

fn need_nonneg(sig: &Signature) -> Result<()> {
    if !sig.is_nonnegative() {
        return Err(Error::InvalidSignature(format!("{sig} has a negative part")));
    }
    Ok(())
}

/// Law of `SN(B^T A B)` (alt) or `SN(B^* A B)` (her) given `SN(A) = ν` and
/// `SN(B) = μ`, with `A` invariant and `B` bi-invariant.
///
/// alt: `c^{alt,λ}_{μ,ν}(t) P_λ(1,…,t^{2n-2}; t²) / (P_μ(1,…,t^{2n-1}; t) P_ν(1,…,t^{2n-2}; t²))`;
/// her: `c^{her,λ}_{μ,ν}(t) P_λ(1,…,(-t)^{n-1}; -t) / (P_μ(1,…,t^{2n-2}; t²) P_ν(1,…,(-t)^{n-1}; -t))`.
pub fn product_prob<F: Field>(case: Case, mu: &Signature, nu: &Signature, lambda: &Signature, t: &F) -> Result<F> {
    let n = nu.len();
    need_len(lambda, n, "lambda")?;
    need_len(mu, if case == Case::Alt { 2 * n } else { n }, "mu")?;
    let c = lr_table(case.into(), mu, nu)?.get(lambda);
    if c.is_zero() {
        return Ok(F::zero());
    }
    let c = eval_in(&c, t)?;
    let one = F::one();
    let (s_mu, s) = match case {
        Case::Alt => (t.clone(), t.times(t)),
        Case::Her => (t.times(t), t.negate()),
    };
    c.times(&p_geo(lambda, &one, &s)?)
        .over(&p_geo(mu, &one, &s_mu)?.times(&p_geo(nu, &one, &s)?))
}

/// All nonzero values of [`product_prob`]; the support is finite by homogeneity.
pub fn product_support<F: Field>(case: Case, mu: &Signature, nu: &Signature, t: &F) -> Result<Vec<(Signature, F)>> {
    let table = lr_table(case.into(), mu, nu)?;
    let mut out = Vec::new();
    for lam in table.entries.keys() {
        let p = product_prob(case, mu, nu, lam, t)?;
        if !p.is_zero() {
            out.push((lam.clone(), p));
        }
    }
    Ok(out)
}

/// Summands `κ ↦ P_{λ/κ}(1; -t) Q_{ν/κ}(-1; -t) P_ν(-t, …; -t) / (P_λ(1, …; -t) Π_{-t}(1; t, …, -(-t)^{n-1}))`
/// of the Hermitian corner law. Individual terms may be negative.
pub fn her_corner_summands<F: Field>(given: &Signature, target: &Signature, t: &F) -> Result<Vec<(Signature, F)>> {
    let n = given.len();
    if n == 0 {
        return Err(Error::Dimension("corner of a 0x0 matrix".into()));
    }
    need_len(target, n - 1, "target")?;
    let s = t.negate();
    let (lam, nu) = (given.parts(), target.parts());
    // κ ≺_P λ and κ ≺_Q ν.
    let lo: Vec<i64> = (0..n - 1).map(|i| lam[i + 1].max(nu.get(i + 1).copied().unwrap_or(i64::MIN))).collect();
    let hi: Vec<i64> = (0..n - 1).map(|i| lam[i].min(nu[i])).collect();
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Ok(Vec::new());
    }
    let ys: Vec<F> = (1..n).map(|k| s.powi(k as i64).map(|v| v.negate())).collect::<Result<_>>()?;
    let norm = p_geo(given, &F::one(), &s)?.times(&cauchy_exact(
        &Specialization::finite(vec![F::one()]),
        &Specialization::finite(ys),
        &s,
    )?);
    let p_nu = if n == 1 { F::one() } else { p_geo(target, &s, &s)? };
    let scale = p_nu.over(&norm)?;
    let mut out = Vec::new();
    for kappa in between(&Signature::new(lo)?, &Signature::new(hi)?)? {
        let a = skew_eval1(Kind::P, given, &kappa, &F::one(), &s)?;
        if a.is_zero() {
            continue;
        }
        let b = skew_eval1(Kind::Q, target, &kappa, &F::one().negate(), &s)?;
        let v = a.times(&b).times(&scale);
        if !v.is_zero() {
            out.push((kappa, v));
        }
    }
    Ok(out)
}

/// One step of the corners process.
///
/// `AltOdd`: `given = SN(A_{2n+1}) ∈ Sig_n`, `target = SN(A_{2n}) ∈ Sig_n`.
/// `AltEven`: `given = SN(A_{2n}) ∈ Sig_n`, `target = SN(A_{2n-1}) ∈ Sig_{n-1}`.
/// `Her`: `given = SN(A_n) ∈ Sig_n`, `target = SN(A_{n-1}) ∈ Sig_{n-1}`.
pub fn corner_prob<F: Field>(case: LawCase, given: &Signature, target: &Signature, t: &F) -> Result<F> {
    let n = given.len();
    let s = t.times(t);
    match case {
        LawCase::AltOdd => {
            need_len(target, n, "target")?;
            if !interlace(InterlaceKind::Q, given, target)? {
                return Ok(F::zero());
            }
            let th = theta(&s, n);
            let pi = cauchy_exact(&Specialization::finite(vec![t.clone()]), &th, &s)?;
            skew_eval1(Kind::Q, target, given, t, &s)?
                .times(&p_geo(target, &F::one(), &s)?)
                .over(&p_geo(given, &F::one(), &s)?.times(&pi))
        }
        LawCase::AltEven | LawCase::Alt => {
            if n == 0 {
                return Err(Error::Dimension("corner of a 0x0 matrix".into()));
            }
            need_len(target, n - 1, "target")?;
            if !interlace(InterlaceKind::P, target, given)? {
                return Ok(F::zero());
            }
            let p_nu = if n == 1 { F::one() } else { p_geo(target, &s, &s)? };
            skew_eval1(Kind::P, given, target, &F::one(), &s)?
                .times(&p_nu)
                .over(&p_geo(given, &F::one(), &s)?)
        }
        LawCase::Her => {
            let total = her_corner_summands(given, target, t)?
                .into_iter()
                .fold(F::zero(), |acc, (_, v)| acc.plus(&v));
            let below = total.sign_hint() == Some(Ordering::Less);
            let above = F::one().minus(&total).sign_hint() == Some(Ordering::Less);
            if below || above {
                return Err(Error::NegativeMass(format!(
                    "Hermitian corner law for {given} -> {target} gave {total}"
                )));
            }
            Ok(total)
        }
    }
}

/// Weights `a_i` of `t^{Σ a_i λ_i}` in the closed Haar forms, `i ≥ 1`.
fn haar_weight(case: LawCase, i: usize) -> i64 {
    let i = i as i64;
    match case {
        LawCase::AltEven | LawCase::Alt => 4 * i - 3,
        LawCase::AltOdd => 4 * i - 1,
        LawCase::Her => 2 * i - 1,
    }
}

/// `C_n` in the closed Haar forms.
fn haar_constant<F: Field>(case: LawCase, n: usize, t: &F) -> Result<F> {
    match case {
        LawCase::AltEven | LawCase::Alt => Ok(q_pochhammer(t, 2 * n)),
        LawCase::AltOdd => q_pochhammer(t, 2 * n + 1).over(&F::one().minus(t)),
        LawCase::Her => Ok(q_pochhammer(&t.times(t), n)),
    }
}

fn haar_mult_factor<F: Field>(case: LawCase, m: usize, t: &F) -> F {
    match case {
        LawCase::Her => q_pochhammer(&t.negate(), m),
        _ => q_pochhammer(&t.times(t), m),
    }
}

/// `t^{Σ a_{i+offset} ρ_i} / Π_{v≥0} g(m_v(ρ))`, the λ-dependent part of a closed Haar form.
fn haar_kernel<F: Field>(case: LawCase, rho: &Signature, offset: usize, t: &F) -> Result<F> {
    let e: i64 = rho.parts().iter().enumerate().map(|(i, &x)| haar_weight(case, i + 1 + offset) * x).sum();
    let den = rho
        .mults()
        .values()
        .fold(F::one(), |acc, &m| acc.times(&haar_mult_factor(case, m, t)));
    t.powi(e)?.over(&den)
}

fn check_haar(case: LawCase, n: usize, lambda: &Signature) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension("Haar law needs n >= 1".into()));
    }
    need_len(lambda, n, "lambda")?;
    need_nonneg(lambda)?;
    if case == LawCase::Alt {
        return Err(Error::Domain("Haar law needs alt_even, alt_odd or her".into()));
    }
    Ok(())
}

/// Closed form of the law of `SN` of a matrix with i.i.d. Haar entries:
/// `Alt_{2n}` (`AltEven`), `Alt_{2n+1}` (`AltOdd`) or `Her_n`.
pub fn haar_sn_prob<F: Field>(case: LawCase, n: usize, lambda: &Signature, t: &F) -> Result<F> {
    let case = if case == LawCase::Alt { LawCase::AltEven } else { case };
    check_haar(case, n, lambda)?;
    Ok(haar_constant(case, n, t)?.times(&haar_kernel(case, lambda, 0, t)?))
}

/// The specializations `(θ, s, first, ratio)` of the Hall-Littlewood form of a Haar law.
fn haar_specs<F: Field>(case: LawCase, n: usize, t: &F) -> (Specialization<F>, F, F, F) {
    let t2 = t.times(t);
    match case {
        LawCase::Her => (theta(&t.negate(), n), t.negate(), t.clone(), t.negate()),
        LawCase::AltOdd => (theta(&t2, n), t2.clone(), t2.times(t), t2),
        _ => (theta(&t2, n), t2.clone(), t.clone(), t2),
    }
}

/// The same law as `P_λ(θ; s) Q_λ(ψ; s) / Π_s(θ; ψ)` with the infinite `ψ`
/// summed exactly: the principal `Q` closed form and the telescoped kernel.
pub fn haar_sn_prob_hl<F: Field>(case: LawCase, n: usize, lambda: &Signature, t: &F) -> Result<F> {
    let case = if case == LawCase::Alt { LawCase::AltEven } else { case };
    check_haar(case, n, lambda)?;
    let (th, s, first, ratio) = haar_specs(case, n, t);
    let q = principal(Kind::Q, lambda, &first, Count::Infinite, &s)?;
    let pi = cauchy_exact(&th, &Specialization::geometric_tail(&first, &ratio), &s)?;
    p_geo(lambda, &F::one(), &s)?.times(&q).over(&pi)
}

/// Certified enclosure of the Hall-Littlewood form, with `Q_λ(ψ)` and `Π`
/// both evaluated by truncating `ψ` with explicit error bounds.
pub fn haar_sn_prob_numeric(case: LawCase, n: usize, lambda: &Signature, t: &BigRational, tol: &BigRational) -> Result<Interval> {
    let case = if case == LawCase::Alt { LawCase::AltEven } else { case };
    check_haar(case, n, lambda)?;
    let (th, s, first, ratio) = haar_specs(case, n, t);
    let psi = Specialization::geometric_tail(&first, &ratio);
    let p = p_geo(lambda, &rat(1, 1), &s)?;
    let mut part = tol / BigRational::from_integer(8.into());
    for _ in 0..6 {
        let q = skew_q_numeric(lambda, &Signature::zeros(n), &psi, &s, &part)?;
        let pi = cauchy_numeric(&th, &psi, &s, &part)?;
        let inv = pi
            .recip()
            .ok_or_else(|| Error::Divergence("kernel enclosure contains 0".into()))?;
        let iv = Interval::point(p.clone()).mul(&q).mul(&inv);
        if &iv.width() <= tol {
            return Ok(iv);
        }
        part = part / BigRational::from_integer(64.into());
    }
    Err(Error::Divergence(format!("Haar law did not reach tolerance {tol}")))
}

/// Tail `Σ_{λ ∈ Sig_n^+, λ_1 > c}` of a closed Haar law, summed exactly.
///
/// Splitting `λ` into its `j` parts above `c` and a remainder `ρ` bounded by `c`,
/// the parts above `c` sum to `1/C_j` by normalization in size `j`.
pub fn haar_tail<F: Field>(case: LawCase, n: usize, cutoff: i64, t: &F) -> Result<F> {
    let case = if case == LawCase::Alt { LawCase::AltEven } else { case };
    let cn = haar_constant(case, n, t)?;
    let mut acc = F::zero();
    for j in 1..=n {
        let a_j: i64 = (1..=j).map(|i| haar_weight(case, i)).sum();
        let head = t.powi(a_j * (cutoff + 1))?.times(&cn).over(&haar_constant(case, j, t)?)?;
        let mut rest = F::zero();
        for rho in enumerate(n - j, 0, cutoff.max(0), None)? {
            rest = rest.plus(&haar_kernel(case, &rho, j, t)?);
        }
        acc = acc.plus(&head.times(&rest));
    }
    Ok(acc)
}

/// Law of `SN` of the top-left corner of a Haar element of `Alt_{2m} ∩ GL` or
/// `Her_m ∩ GL`: corner size `2n` (`AltEven`), `2n+1` (`AltOdd`) or `n` (`Her`).
pub fn corner_invertible_prob<F: Field>(case: LawCase, n: usize, m: usize, lambda: &Signature, t: &F) -> Result<F> {
    if m <= n {
        return Err(Error::Domain(format!("corner of an invertible matrix needs m > n, got m={m}, n={n}")));
    }
    let case = if case == LawCase::Alt { LawCase::AltEven } else { case };
    check_haar(case, n, lambda)?;
    let (th, s, first, _) = haar_specs(case, n, t);
    let count = match case {
        LawCase::AltOdd => m - n - 1,
        _ => m - n,
    };
    let psi = Specialization::geometric(&first, &s, count);
    let q = principal(Kind::Q, lambda, &first, Count::Finite(count), &s)?;
    p_geo(lambda, &F::one(), &s)?.times(&q).over(&cauchy_exact(&th, &psi, &s)?)
}

/// `Q_{outer/inner}(ψ_1; s)` for the Haar multiplier `B`, through the coproduct:
/// alt `Σ_μ c^{alt,outer}_{μ,inner}(t) Q_μ(t, t², …; t)`,
/// her `Σ_μ c^{her,outer}_{μ,inner}(t) Q_μ(t², t⁴, …; t²)`.
pub fn multiplier_skew_q<F: Field>(case: Case, outer: &Signature, inner: &Signature, t: &F) -> Result<F> {
    let n = inner.len();
    need_len(outer, n, "outer")?;
    if !inner.contained_in(outer) {
        return Ok(F::zero());
    }
    let d = outer.size() - inner.size();
    let (len, size, x, s) = match case {
        Case::Alt => (2 * n, d, t.clone(), t.clone()),
        Case::Her => {
            if d % 2 != 0 {
                return Ok(F::zero());
            }
            (n, d / 2, t.times(t), t.times(t))
        }
    };
    let mut acc = F::zero();
    // A fixed size keeps the enumeration to the partitions of `size`.
    let guard = (len as i64) * size.max(1);
    for mu in enumerate_guarded(len, 0, size, Some(size), guard)? {
        let c = lr_table(case.into(), &mu, inner)?.get(outer);
        if c.is_zero() {
            continue;
        }
        let q = principal(Kind::Q, &mu, &x, Count::Infinite, &s)?;
        acc = acc.plus(&eval_in(&c, t)?.times(&q));
    }
    Ok(acc)
}

/// The multiplier specialization `ψ_1` as tails: alt `t, t², …`; her `t, -t, t², -t², …`.
pub fn multiplier_spec<F: Field>(case: Case, t: &F) -> Specialization<F> {
    match case {
        Case::Alt => Specialization::geometric_tail(t, t),
        Case::Her => Specialization::geometric_tail(t, t).with_tail(t.negate(), t.clone()),
    }
}

/// One step `λ → λ'` of the product chain with `B` Haar in `M(𝔬)`.
pub fn product_step<F: Field>(case: Case, from: &Signature, to: &Signature, t: &F) -> Result<F> {
    let n = from.len();
    let s = match case {
        Case::Alt => t.times(t),
        Case::Her => t.negate(),
    };
    let q = multiplier_skew_q(case, to, from, t)?;
    if q.is_zero() {
        return Ok(F::zero());
    }
    let pi = cauchy_exact(&theta(&s, n), &multiplier_spec(case, t), &s)?;
    q.times(&p_geo(to, &F::one(), &s)?)
        .over(&p_geo(from, &F::one(), &s)?.times(&pi))
}

/// Joint law of singular numbers along the corners of a Haar matrix.
///
/// alt: `chain = [λ^{(2)}, ν^{(3)}, λ^{(4)}, …, λ^{(2n)}]` with lengths `1, 1, 2, 2, …, n`;
/// her: `chain = [λ^{(1)}, …, λ^{(n)}]` with lengths `1, …, n`.
pub fn joint_corners_weight<F: Field>(case: Case, chain: &[Signature], t: &F) -> Result<F> {
    let top = chain.last().ok_or_else(|| Error::Dimension("empty chain".into()))?;
    match case {
        Case::Alt => {
            if chain.len() % 2 == 0 {
                return Err(Error::Dimension("alternating corner chain must have odd length".into()));
            }
            for (j, sig) in chain.iter().enumerate() {
                need_len(sig, j / 2 + 1, "chain entry")?;
            }
            let n = top.len();
            let mut w = haar_sn_prob(LawCase::AltEven, n, top, t)?;
            for j in (1..chain.len()).rev() {
                let step = if j % 2 == 0 { LawCase::AltEven } else { LawCase::AltOdd };
                let p = corner_prob(step, &chain[j], &chain[j - 1], t)?;
                w = w.times(&p);
                if w.is_zero() {
                    break;
                }
            }
            Ok(w)
        }
        Case::Her => {
            for (j, sig) in chain.iter().enumerate() {
                need_len(sig, j + 1, "chain entry")?;
            }
            let mut w = haar_sn_prob(LawCase::Her, chain.len(), top, t)?;
            for j in (1..chain.len()).rev() {
                w = w.times(&corner_prob(LawCase::Her, &chain[j], &chain[j - 1], t)?);
                if w.is_zero() {
                    break;
                }
            }
            Ok(w)
        }
    }
}

/// Joint law of `SN(A), SN(B_1^T A B_1), …` with `A` Haar in `Alt_{2n}` (or
/// `Her_n`) and `B_i` Haar in `M(𝔬)`; `chain = [λ, λ^{(1)}, …, λ^{(k)}]`.
pub fn joint_product_weight<F: Field>(case: Case, chain: &[Signature], t: &F) -> Result<F> {
    let first = chain.first().ok_or_else(|| Error::Dimension("empty chain".into()))?;
    let n = first.len();
    for sig in chain {
        need_len(sig, n, "chain entry")?;
        need_nonneg(sig)?;
    }
    let haar_case = match case {
        Case::Alt => LawCase::AltEven,
        Case::Her => LawCase::Her,
    };
    let mut w = haar_sn_prob(haar_case, n, first, t)?;
    for pair in chain.windows(2) {
        w = w.times(&product_step(case, &pair[0], &pair[1], t)?);
        if w.is_zero() {
            break;
        }
    }
    Ok(w)
}

/// Probability that a Haar element of `Alt_size(𝔬)` or `Her_size(𝔬)` is
/// invertible, as a function of the residue field size `q` of the base.
pub fn invertible_prob<F: Field>(case: Case, size: usize, q: &F) -> Result<F> {
    if size == 0 {
        return Err(Error::Domain("size must be at least 1".into()));
    }
    let inv = q.recip()?;
    let mut acc = F::one();
    match case {
        Case::Alt => {
            if size % 2 == 1 {
                return Ok(F::zero());
            }
            for j in 1..=size / 2 {
                acc = acc.times(&F::one().minus(&inv.powi(2 * j as i64 - 1)?));
            }
        }
        Case::Her => {
            let neg = inv.negate();
            for j in 1..=size {
                acc = acc.times(&F::one().plus(&neg.powi(j as i64)?));
            }
        }
    }
    Ok(acc)
}
