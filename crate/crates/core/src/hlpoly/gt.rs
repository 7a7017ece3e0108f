//! Branching coefficients and Gelfand-Tsetlin evaluation of skew P and Q.
//!
//! Skew polynomials are evaluated level by level: a map from the signatures
//! reachable at level `j` to the accumulated weight, with each level pruned
//! to the signatures that can still reach the outer signature.

use super::laurent::LaurentPoly;
use crate::exactnum::Field;
use crate::sigcore::{interlace, InterlaceKind, Signature};
use crate::{Error, Result};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchKind {
    Psi,
    Phi,
}

/// Default cap on level-to-level transitions in one evaluation.
pub const DEFAULT_TRANSITION_GUARD: usize = 1_000_000;

/// `1 - t^k` for `k = 0..=max`.
struct OneMinus<F>(Vec<F>);

impl<F: Field> OneMinus<F> {
    fn new(t: &F, max: usize) -> Self {
        let mut v = Vec::with_capacity(max + 1);
        let mut pw = F::one();
        for _ in 0..=max {
            v.push(F::one().minus(&pw));
            pw = pw.times(t);
        }
        OneMinus(v)
    }

    /// `1 + s^k`, an upper bound for `|1 - t^k|` when `s = |t|`.
    fn upper(s: &F, max: usize) -> Self {
        let mut v = Vec::with_capacity(max + 1);
        let mut pw = F::one();
        for _ in 0..=max {
            v.push(F::one().plus(&pw));
            pw = pw.times(s);
        }
        OneMinus(v)
    }

    fn get(&self, k: usize) -> &F {
        &self.0[k]
    }
}

fn count_of(parts: &[i64], v: i64) -> usize {
    parts.iter().filter(|&&x| x == v).count()
}

/// psi: product over values `i` with `m_i(small) = m_i(big) + 1` of `1 - t^{m_i(small)}`.
/// phi: product over values `i` with `m_i(big) = m_i(small) + 1` of `1 - t^{m_i(big)}`.
fn branch_raw<F: Field>(kind: BranchKind, big: &[i64], small: &[i64], om: &OneMinus<F>) -> F {
    let (rich, poor) = match kind {
        BranchKind::Psi => (small, big),
        BranchKind::Phi => (big, small),
    };
    let mut acc = F::one();
    let mut i = 0;
    while i < rich.len() {
        let v = rich[i];
        let mut j = i;
        while j < rich.len() && rich[j] == v {
            j += 1;
        }
        let m = j - i;
        if m == count_of(poor, v) + 1 {
            acc = acc.times(om.get(m));
        }
        i = j;
    }
    acc
}

/// Branching coefficient `psi_{outer/inner}` or `phi_{outer/inner}`.
pub fn branch_coeff<F: Field>(
    kind: BranchKind,
    outer: &Signature,
    inner: &Signature,
    t: &F,
) -> Result<F> {
    let ik = match kind {
        BranchKind::Psi => InterlaceKind::P,
        BranchKind::Phi => InterlaceKind::Q,
    };
    if !interlace(ik, inner, outer)? {
        return Err(Error::Interlacing(format!("{inner} does not interlace {outer}")));
    }
    let om = OneMinus::new(t, outer.len().max(inner.len()) + 1);
    Ok(branch_raw(kind, outer.parts(), inner.parts(), &om))
}

fn check_shapes(kind: Kind, outer: &Signature, inner: &Signature, k: usize) -> Result<()> {
    match kind {
        Kind::P if outer.len() != inner.len() + k => Err(Error::Dimension(format!(
            "skew P of {outer}/{inner} needs {} variables, got {k}",
            outer.len().saturating_sub(inner.len())
        ))),
        Kind::Q if outer.len() != inner.len() => Err(Error::Dimension(format!(
            "skew Q needs equal lengths, got {outer} and {inner}"
        ))),
        _ => Ok(()),
    }
}

/// All one-step successors of `cur` that can still reach `outer` in `rem` further steps.
fn successors(kind: Kind, cur: &[i64], outer: &[i64], rem: usize, out: &mut Vec<Vec<i64>>) {
    let len = match kind {
        Kind::P => cur.len() + 1,
        Kind::Q => cur.len(),
    };
    let mut lo = Vec::with_capacity(len);
    let mut hi = Vec::with_capacity(len);
    for a in 0..len {
        let mut u = outer[a];
        if a >= 1 {
            u = u.min(cur[a - 1]);
        }
        let mut l = i64::MIN;
        if a < cur.len() {
            l = cur[a];
        }
        if a + rem < outer.len() {
            l = l.max(outer[a + rem]);
        }
        if l > u {
            return;
        }
        lo.push(l);
        hi.push(u);
    }
    let mut s = hi.clone();
    loop {
        out.push(s.clone());
        // Odometer over the box, least significant at the end.
        let mut a = len;
        loop {
            if a == 0 {
                return;
            }
            a -= 1;
            if s[a] > lo[a] {
                s[a] -= 1;
                for b in a + 1..len {
                    s[b] = hi[b];
                }
                break;
            }
        }
    }
}

fn step_coeff<F: Field>(kind: Kind, next: &[i64], cur: &[i64], om: &OneMinus<F>) -> F {
    match kind {
        Kind::P => branch_raw(BranchKind::Psi, next, cur, om),
        Kind::Q => branch_raw(BranchKind::Phi, next, cur, om),
    }
}

/// Generic level-by-level driver. `combine(value, coeff, step, delta)` folds one
/// branching step, whose variable is raised to the size increase `delta`.
fn level_dp<F: Field, V: Clone>(
    kind: Kind,
    outer: &Signature,
    inner: &Signature,
    steps: usize,
    t: &F,
    init: V,
    mut combine: impl FnMut(&V, &F, usize, i64) -> Result<V>,
    mut accumulate: impl FnMut(&mut V, V),
    guard: usize,
    bound: bool,
) -> Result<Option<V>> {
    check_shapes(kind, outer, inner, steps)?;
    let om = if bound {
        OneMinus::upper(t, outer.len() + 1)
    } else {
        OneMinus::new(t, outer.len() + 1)
    };
    let mut level: HashMap<Vec<i64>, V> = HashMap::new();
    level.insert(inner.parts().to_vec(), init);
    let mut transitions = 0usize;
    let mut buf = Vec::new();
    for j in 0..steps {
        let rem = steps - j - 1;
        let mut next: HashMap<Vec<i64>, V> = HashMap::new();
        let mut keys: Vec<_> = level.keys().cloned().collect();
        keys.sort();
        for cur in keys {
            let val = &level[&cur];
            buf.clear();
            successors(kind, &cur, outer.parts(), rem, &mut buf);
            transitions += buf.len();
            if transitions > guard {
                return Err(Error::Guard(format!(
                    "more than {guard} branching transitions for {outer}/{inner}"
                )));
            }
            let cur_size: i64 = cur.iter().sum();
            for s in buf.drain(..) {
                let c = step_coeff(kind, &s, &cur, &om);
                if c.is_zero() {
                    continue;
                }
                let delta = s.iter().sum::<i64>() - cur_size;
                let v = combine(val, &c, j, delta)?;
                match next.get_mut(&s) {
                    Some(slot) => accumulate(slot, v),
                    None => {
                        next.insert(s, v);
                    }
                }
            }
        }
        level = next;
        if level.is_empty() {
            return Ok(None);
        }
    }
    Ok(level.remove(outer.parts()))
}

/// `P_{outer/inner}(vars; t)` or `Q_{outer/inner}(vars; t)` for finitely many values.
pub fn skew_eval<F: Field>(
    kind: Kind,
    outer: &Signature,
    inner: &Signature,
    vars: &[F],
    t: &F,
) -> Result<F> {
    skew_eval_guarded(kind, outer, inner, vars, t, DEFAULT_TRANSITION_GUARD)
}

pub fn skew_eval_guarded<F: Field>(
    kind: Kind,
    outer: &Signature,
    inner: &Signature,
    vars: &[F],
    t: &F,
    guard: usize,
) -> Result<F> {
    let r = level_dp(
        kind,
        outer,
        inner,
        vars.len(),
        t,
        F::one(),
        |v, c, j, d| Ok(v.times(c).times(&vars[j].powi(d)?)),
        |slot, v| *slot = slot.plus(&v),
        guard,
        false,
    )?;
    Ok(r.unwrap_or_else(F::zero))
}

/// Upper bound for `|skew(vars; t)|`: the same sum with every branching factor
/// `1 - t^m` replaced by `1 + |t|^m` and every variable by its absolute value.
pub fn skew_eval_abs(
    kind: Kind,
    outer: &Signature,
    inner: &Signature,
    vars: &[num_rational::BigRational],
    t: &num_rational::BigRational,
) -> Result<num_rational::BigRational> {
    use num_traits::Signed;
    let abs: Vec<_> = vars.iter().map(|x| x.abs()).collect();
    let r = level_dp(
        kind,
        outer,
        inner,
        abs.len(),
        &t.abs(),
        Field::one(),
        |v: &num_rational::BigRational, c, j, d| Ok(v.times(c).times(&abs[j].powi(d)?)),
        |slot, v| *slot = slot.plus(&v),
        DEFAULT_TRANSITION_GUARD,
        true,
    )?;
    Ok(r.unwrap_or_else(Field::zero))
}

/// Skew polynomial value at `(a; t)`, the single-variable case used by corner laws.
pub fn skew_eval1<F: Field>(kind: Kind, outer: &Signature, inner: &Signature, a: &F, t: &F) -> Result<F> {
    skew_eval(kind, outer, inner, std::slice::from_ref(a), t)
}

/// A branching variable that stands for `coeff * x_var` in the output ring.
#[derive(Clone, Debug)]
pub struct MonoVar<F> {
    pub var: usize,
    pub coeff: F,
}

impl<F: Field> MonoVar<F> {
    pub fn plain(var: usize) -> Self {
        MonoVar { var, coeff: F::one() }
    }
}

/// Skew polynomial as a Laurent polynomial in `nvars` output variables, where
/// branching step `j` uses `vars[j]`.
pub fn skew_poly<F: Field>(
    kind: Kind,
    outer: &Signature,
    inner: &Signature,
    vars: &[MonoVar<F>],
    nvars: usize,
    t: &F,
) -> Result<LaurentPoly<F>> {
    let r = level_dp(
        kind,
        outer,
        inner,
        vars.len(),
        t,
        LaurentPoly::one(nvars),
        |v, c, j, d| {
            let mv = &vars[j];
            let mut e = vec![0; nvars];
            e[mv.var] = d;
            let mono = LaurentPoly::monomial(e, c.times(&mv.coeff.powi(d)?));
            Ok(v.mul(&mono))
        },
        |slot, v| *slot = slot.add(&v),
        DEFAULT_TRANSITION_GUARD,
        false,
    )?;
    Ok(r.unwrap_or_else(|| LaurentPoly::zero(nvars)))
}

/// Straight `P_λ(x_1, ..., x_n; t)` with `n = len(λ)`, via branching.
pub fn p_poly<F: Field>(lambda: &Signature, t: &F) -> Result<LaurentPoly<F>> {
    let n = lambda.len();
    let vars: Vec<_> = (0..n).map(MonoVar::plain).collect();
    skew_poly(Kind::P, lambda, &Signature::empty(), &vars, n, t)
}

/// A Gelfand-Tsetlin pattern: a chain of consecutively interlacing signatures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtPattern {
    pub kind: Kind,
    pub chain: Vec<Signature>,
}

impl GtPattern {
    /// Product of the branching coefficients along the chain.
    pub fn coefficient<F: Field>(&self, t: &F) -> F {
        let max = self.chain.iter().map(|s| s.len()).max().unwrap_or(0);
        let om = OneMinus::new(t, max + 1);
        self.chain.windows(2).fold(F::one(), |acc, w| {
            acc.times(&step_coeff(self.kind, w[1].parts(), w[0].parts(), &om))
        })
    }

    /// Size increments `|λ^{(j)}| - |λ^{(j-1)}|`.
    pub fn wt(&self) -> Vec<i64> {
        self.chain.windows(2).map(|w| w[1].size() - w[0].size()).collect()
    }

    pub fn weight<F: Field>(&self, vars: &[F], t: &F) -> Result<F> {
        let mut acc = self.coefficient(t);
        for (x, d) in vars.iter().zip(self.wt()) {
            acc = acc.times(&x.powi(d)?);
        }
        Ok(acc)
    }
}

/// All patterns from `inner` to `outer` in `steps` steps, by depth-first search.
pub fn gt_patterns(
    kind: Kind,
    outer: &Signature,
    inner: &Signature,
    steps: usize,
    guard: usize,
) -> Result<Vec<GtPattern>> {
    check_shapes(kind, outer, inner, steps)?;
    let ik = match kind {
        Kind::P => InterlaceKind::P,
        Kind::Q => InterlaceKind::Q,
    };
    let lo = outer.parts().iter().chain(inner.parts()).copied().min().unwrap_or(0);
    let mut out = Vec::new();
    let mut chain = vec![inner.clone()];
    fn dfs(
        ik: InterlaceKind,
        kind: Kind,
        outer: &Signature,
        steps: usize,
        lo: i64,
        chain: &mut Vec<Signature>,
        out: &mut Vec<GtPattern>,
        guard: usize,
    ) -> Result<()> {
        let cur = chain.last().unwrap().clone();
        if chain.len() == steps + 1 {
            if &cur == outer {
                if out.len() >= guard {
                    return Err(Error::Guard(format!("more than {guard} patterns")));
                }
                out.push(GtPattern {
                    kind,
                    chain: chain.clone(),
                });
            }
            return Ok(());
        }
        let len = match kind {
            Kind::P => cur.len() + 1,
            Kind::Q => cur.len(),
        };
        let hi = outer.first().unwrap_or(0);
        for cand in crate::sigcore::enumerate_guarded(len, lo, hi, None, i64::MAX)? {
            if interlace(ik, &cur, &cand)? {
                chain.push(cand);
                dfs(ik, kind, outer, steps, lo, chain, out, guard)?;
                chain.pop();
            }
        }
        Ok(())
    }
    dfs(ik, kind, outer, steps, lo, &mut chain, &mut out, guard)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RationalFunction;
    use crate::sigcore::enumerate;
    use num_rational::BigRational;

    fn sig(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    fn t() -> RationalFunction {
        RationalFunction::t()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn branch_examples() {
        let one = RationalFunction::one();
        // m_1 rises from 0 to 1, matching the x1 x2 coefficient of P_(2,0).
        let p20 = p_poly(&sig(&[2, 0]), &t()).unwrap();
        assert_eq!(branch_coeff(BranchKind::Psi, &sig(&[2, 0]), &sig(&[1]), &t()).unwrap(), p20.coeff(&[1, 1]));
        assert_eq!(branch_coeff(BranchKind::Psi, &sig(&[1, 0]), &sig(&[0]), &t()).unwrap(), one);
        assert_eq!(branch_coeff(BranchKind::Phi, &sig(&[2, 1]), &sig(&[2, 1]), &t()).unwrap(), one);
        // m_1 drops from 2 to 1 between (1,1) and (2,1,0).
        let expect = RationalFunction::one().minus(&t().times(&t()));
        assert_eq!(branch_coeff(BranchKind::Psi, &sig(&[2, 1, 0]), &sig(&[1, 1]), &t()).unwrap(), expect);
        assert!(branch_coeff(BranchKind::Psi, &sig(&[2, 0]), &sig(&[3]), &t()).is_err());
    }

    #[test]
    fn skew_eval_examples() {
        let x = q(2, 7);
        let tt = q(1, 3);
        assert_eq!(skew_eval(Kind::P, &sig(&[2, 0]), &sig(&[1]), &[x.clone()], &tt).unwrap(), q(4, 21));
        assert_eq!(skew_eval(Kind::Q, &sig(&[3, 1]), &sig(&[3, 1]), &[x.clone()], &tt).unwrap(), q(1, 1));
        assert_eq!(skew_eval(Kind::P, &sig(&[0, 0]), &sig(&[1]), &[x.clone()], &tt).unwrap(), q(0, 1));
        assert!(skew_eval(Kind::P, &sig(&[0, 0]), &sig(&[1]), &[x.clone(), x], &tt).is_err());
    }

    #[test]
    fn p_two_zero() {
        let p = p_poly(&sig(&[2, 0]), &t()).unwrap();
        assert_eq!(p.coeff(&[2, 0]), RationalFunction::one());
        assert_eq!(p.coeff(&[0, 2]), RationalFunction::one());
        assert_eq!(p.coeff(&[1, 1]), RationalFunction::one().minus(&t()));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn dp_matches_pattern_enumeration() {
        let tt = q(-2, 5);
        let xs = [q(1, 2), q(3, 1), q(-1, 3)];
        for kind in [Kind::P, Kind::Q] {
            for n in 1..=3usize {
                for outer in enumerate(n, -1, 2, None).unwrap() {
                    let inners: Vec<_> = match kind {
                        Kind::P => enumerate(n - 1, -1, 2, None).unwrap().collect(),
                        Kind::Q => enumerate(n, -1, 2, None).unwrap().collect(),
                    };
                    for inner in inners {
                        let k = match kind {
                            Kind::P => 1,
                            Kind::Q => 2,
                        };
                        let vars = &xs[..k];
                        let pats = gt_patterns(kind, &outer, &inner, k, 1_000_000).unwrap();
                        let brute = pats
                            .iter()
                            .map(|p| p.weight(vars, &tt).unwrap())
                            .fold(q(0, 1), |a, b| a + b);
                        assert_eq!(skew_eval(kind, &outer, &inner, vars, &tt).unwrap(), brute);
                    }
                }
            }
        }
    }

    #[test]
    fn guard_trips() {
        let big = sig(&[30, 0, 0]);
        let xs = vec![q(1, 2); 3];
        assert!(matches!(
            skew_eval_guarded(Kind::P, &big, &Signature::empty(), &xs, &q(1, 3), 10),
            Err(Error::Guard(_))
        ));
    }
}
