//! Exhaustive grid checks of the exact engine, each returning a report with
//! every failing case spelled out.

use super::run_experiment;
use crate::exactnum::{rat, Field, RationalFunction};
use crate::heckecoeff::{hecke_g, lr_table, Case};
use crate::hlpoly::{hl_p_sym, p_poly, principal, skew_eval, Count, Kind};
use crate::lawbook::{
    closed_tail, corner_invertible_prob, corner_prob, exact_distribution, haar_sn_prob, joint_corners_weight,
    joint_product_weight, product_support, LawCase, LawSpec,
};
use crate::padicring::RingCfg;
use crate::sigcore::{enumerate, Signature};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Names accepted by [`run_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    HlConsistency,
    HeckeIntegrality,
    Normalization,
    Marginalization,
    Reproducibility,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::HlConsistency,
        Suite::HeckeIntegrality,
        Suite::Normalization,
        Suite::Marginalization,
        Suite::Reproducibility,
    ];
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hl_consistency" => Suite::HlConsistency,
            "hecke_integrality" => Suite::HeckeIntegrality,
            "normalization" => Suite::Normalization,
            "marginalization" => Suite::Marginalization,
            "reproducibility" => Suite::Reproducibility,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::HlConsistency => "hl_consistency",
            Suite::HeckeIntegrality => "hecke_integrality",
            Suite::Normalization => "normalization",
            Suite::Marginalization => "marginalization",
            Suite::Reproducibility => "reproducibility",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: u64,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: Suite, results: Vec<Option<String>>) -> Self {
        let checked = results.len() as u64;
        let failures: Vec<String> = results.into_iter().flatten().collect();
        SuiteReport { suite, checked, pass: failures.is_empty(), failures }
    }
}

/// Settings for the one suite that samples matrices.
#[derive(Clone, Copy, Debug)]
pub struct SamplingOpts {
    pub p: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for SamplingOpts {
    fn default() -> Self {
        SamplingOpts { p: 3, samples: 20_000, seed: 7 }
    }
}

pub fn run_suite(suite: Suite, opts: SamplingOpts) -> Result<SuiteReport> {
    match suite {
        Suite::HlConsistency => hl_consistency(),
        Suite::HeckeIntegrality => hecke_integrality(),
        Suite::Normalization => normalization(),
        Suite::Marginalization => marginalization(),
        Suite::Reproducibility => reproducibility(opts),
    }
}

fn check(ok: Result<bool>, what: impl FnOnce() -> String) -> Option<String> {
    match ok {
        Ok(true) => None,
        Ok(false) => Some(what()),
        Err(e) => Some(format!("{}: {e}", what())),
    }
}

fn sigs(n: usize, low: i64, high: i64) -> Result<Vec<Signature>> {
    Ok(enumerate(n, low, high, None)?.collect())
}

fn partitions_up_to(n: usize, size: i64) -> Result<Vec<Signature>> {
    Ok(enumerate(n, 0, size, None)?.filter(|l| l.size() <= size).collect())
}

/// Symmetrization against branching, principal closed forms against direct
/// evaluation, and the skew Cauchy identity compared degree by degree.
pub fn hl_consistency() -> Result<SuiteReport> {
    enum Job {
        Sym(Signature),
        PrincipalP(Signature),
        PrincipalQ(Signature, usize),
        Cauchy(Signature, Signature, i64),
    }
    let mut jobs = Vec::new();
    for n in 1..=3usize {
        jobs.extend(sigs(n, 0, 3)?.into_iter().map(Job::Sym));
    }
    for n in 1..=4usize {
        for lam in partitions_up_to(n, 6)? {
            jobs.extend((1..=3).map(|j| Job::PrincipalQ(lam.clone(), j)));
            jobs.push(Job::PrincipalP(lam));
        }
    }
    for nu in sigs(2, 0, 2)? {
        for mu in sigs(3, 0, 2)? {
            let lo = mu.size().max(nu.size());
            jobs.extend((lo..=lo + 4).map(|d| Job::Cauchy(nu.clone(), mu.clone(), d)));
        }
    }

    let t = RationalFunction::t();
    // x = 2 keeps the powers of x visible next to the powers of t.
    let x = RationalFunction::from_int(2);
    let geometric = |count: usize| -> Result<Vec<RationalFunction>> {
        (0..count).map(|i| Ok(x.times(&t.powi(i as i64)?))).collect()
    };
    let results: Vec<Option<String>> = jobs
        .par_iter()
        .map(|job| match job {
            Job::Sym(lam) => {
                let ok = (|| Ok(hl_p_sym(lam, lam.len(), &t)? == p_poly(lam, &t)?))();
                check(ok, || format!("symmetrization vs branching at {lam}"))
            }
            Job::PrincipalP(lam) => {
                let n = lam.len();
                let ok = (|| {
                    let direct = hl_p_sym(lam, n, &t)?.eval(&geometric(n)?)?;
                    Ok(direct == principal(Kind::P, lam, &x, Count::Finite(n), &t)?)
                })();
                check(ok, || format!("principal P at {lam}"))
            }
            Job::PrincipalQ(lam, j) => {
                let ok = (|| {
                    let direct = skew_eval(Kind::Q, lam, &Signature::zeros(lam.len()), &geometric(*j)?, &t)?;
                    Ok(direct == principal(Kind::Q, lam, &x, Count::Finite(*j), &t)?)
                })();
                check(ok, || format!("principal Q at {lam} with {j} variables"))
            }
            Job::Cauchy(nu, mu, d) => {
                let ok = skew_cauchy_sides(nu, mu, *d, &t, &RationalFunction::one().minus(&t)).map(|(l, r)| l == r);
                check(ok, || format!("skew Cauchy nu={nu} mu={mu} |kappa|={d}"))
            }
        })
        .collect();
    Ok(SuiteReport::new(Suite::HlConsistency, results))
}

/// One bihomogeneous component of
/// `Σ_κ Q_{κ/μ}(y) P_{κ/ν}(x) = Π_t(x; y) Σ_λ Q_{ν/λ}(y) P_{μ/λ}(x)`
/// with one `x` and one `y`: the coefficient of `x^{d-|ν|} y^{d-|μ|}`.
/// Each one-variable skew function is homogeneous, so its coefficient is its
/// value at 1, and `Π_t(x; y) = 1 + Σ_{m≥1} c (xy)^m` with `c = 1 - t`.
fn skew_cauchy_sides(
    nu: &Signature,
    mu: &Signature,
    d: i64,
    t: &RationalFunction,
    c: &RationalFunction,
) -> Result<(RationalFunction, RationalFunction)> {
    let one = RationalFunction::one();
    let mut lhs = RationalFunction::zero();
    for kappa in enumerate(3, 0, d, Some(d))? {
        let q = skew_eval(Kind::Q, &kappa, mu, std::slice::from_ref(&one), t)?;
        if q.is_zero() {
            continue;
        }
        lhs = lhs.plus(&q.times(&skew_eval(Kind::P, &kappa, nu, std::slice::from_ref(&one), t)?));
    }
    let mut rhs = RationalFunction::zero();
    let top = mu.first().unwrap_or(0);
    for lam in enumerate(2, 0, top, None)? {
        let m = d - nu.size() - mu.size() + lam.size();
        if m < 0 {
            continue;
        }
        let kernel = if m == 0 { one.clone() } else { c.clone() };
        let q = skew_eval(Kind::Q, nu, &lam, std::slice::from_ref(&one), t)?;
        if q.is_zero() {
            continue;
        }
        let p = skew_eval(Kind::P, mu, &lam, std::slice::from_ref(&one), t)?;
        rhs = rhs.plus(&kernel.times(&q).times(&p));
    }
    Ok((lhs, rhs))
}

/// `(μ, ν)` pairs with parts in `[0, 2]`, `len ν ∈ {1, 2}` and
/// `len μ = 2 len ν` (alt) or `len ν` (her).
fn product_grid() -> Result<Vec<(Case, Signature, Signature)>> {
    let mut out = Vec::new();
    for case in [Case::Alt, Case::Her] {
        for n in 1..=2usize {
            let mu_len = if case == Case::Alt { 2 * n } else { n };
            for mu in sigs(mu_len, 0, 2)? {
                for nu in sigs(n, 0, 2)? {
                    out.push((case, mu.clone(), nu));
                }
            }
        }
    }
    Ok(out)
}

/// Every `g^λ_{μ,ν}` on the product grid lies in `Z[q]` and is nonnegative at
/// `q = 2, …, 5`. `λ` runs over the whole support of the coefficient table.
pub fn hecke_integrality() -> Result<SuiteReport> {
    let grid = product_grid()?;
    let results: Vec<Vec<Option<String>>> = grid
        .par_iter()
        .map(|(case, mu, nu)| {
            let table = match lr_table((*case).into(), mu, nu) {
                Ok(t) => t,
                Err(e) => return vec![Some(format!("{case} mu={mu} nu={nu}: {e}"))],
            };
            table
                .entries
                .keys()
                .map(|lam| match hecke_g(*case, mu, nu, lam) {
                    Err(e) => Some(format!("{case} mu={mu} nu={nu} lambda={lam}: {e}")),
                    Ok(g) => {
                        let neg: Vec<i64> = (2..=5).filter(|&q| g.eval(q).is_negative()).collect();
                        (!neg.is_empty()).then(|| {
                            format!("{case} mu={mu} nu={nu} lambda={lam}: g={} negative at q={neg:?}", g.poly.render("q"))
                        })
                    }
                })
                .collect()
        })
        .collect();
    Ok(SuiteReport::new(Suite::HeckeIntegrality, results.into_iter().flatten().collect()))
}

fn params() -> [BigRational; 3] {
    [rat(1, 2), rat(1, 3), rat(1, 5)]
}

/// Product laws sum to exactly 1 over the product grid, and Hermitian corner
/// tables have every atom and their total in `[0, 1]`.
pub fn normalization() -> Result<SuiteReport> {
    let grid = product_grid()?;
    let mut results: Vec<Option<String>> = grid
        .par_iter()
        .flat_map_iter(|(case, mu, nu)| {
            params().into_iter().map(move |t| {
                let ok = product_support(*case, mu, nu, &t).map(|s| s.into_iter().map(|(_, p)| p).sum::<BigRational>() == rat(1, 1));
                check(ok, || format!("{case} mu={mu} nu={nu} t={t}: product law does not sum to 1"))
            })
        })
        .collect();
    let mut corners = Vec::new();
    for n in 1..=3usize {
        for given in sigs(n, 0, 2)? {
            for t in params() {
                corners.push((given.clone(), t));
            }
        }
    }
    let corner_results: Vec<Option<String>> = corners.par_iter().map(|(given, t)| {
        let spec = LawSpec::Corner { case: LawCase::Her, given: given.clone() };
        let ok = exact_distribution(&spec, t, 8).map(|d| {
            let unit = |x: &BigRational| !x.is_negative() && x <= &rat(1, 1);
            d.atoms.values().all(unit) && unit(&(rat(1, 1) - &d.tail_mass))
        });
        check(ok, || format!("her corner given={given} t={t}: mass outside [0, 1]"))
    }).collect();
    results.extend(corner_results);
    Ok(SuiteReport::new(Suite::Normalization, results))
}

/// Chains of corners sum out to the Haar law of the top matrix (exactly, with
/// closed geometric tails), product chains sum out to the Haar law of the
/// first matrix (up to a certified-small truncation gap), and corners of large
/// invertible matrices approach the Haar law.
pub fn marginalization() -> Result<SuiteReport> {
    let t = rat(1, 3);
    let mut results = Vec::new();

    // her: [λ^(1), λ^(2)]; λ^(1) has one part and a closed tail.
    let cutoff = 8;
    for top in sigs(2, 0, 2)? {
        let ok = (|| {
            let haar = haar_sn_prob(LawCase::Her, 2, &top, &t)?;
            let mut s = rat(0, 1);
            for a in 0..=cutoff {
                s += joint_corners_weight(Case::Her, &[Signature::new(vec![a])?, top.clone()], &t)?;
            }
            let spec = LawSpec::Corner { case: LawCase::Her, given: top.clone() };
            let tail = closed_tail(&spec, &t, cutoff)?.ok_or_else(|| Error::Domain("no closed tail".into()))?;
            Ok(s + &haar * tail == haar)
        })();
        results.push(check(ok, || format!("her corner chain below {top}")));
    }
    for a in 0..=2i64 {
        let top = Signature::new(vec![a])?;
        let ok = Ok(joint_corners_weight(Case::Her, std::slice::from_ref(&top), &t)? == haar_sn_prob(LawCase::Her, 1, &top, &t)?);
        results.push(check(ok, || format!("her chain of length one at {top}")));
    }

    // alt: [λ^(2), ν^(3), λ^(4)]; the even-to-odd corner step has finite
    // support, the odd-to-even step one part and a closed tail.
    for top in sigs(2, 0, 2)? {
        let ok = (|| {
            let haar = haar_sn_prob(LawCase::AltEven, 2, &top, &t)?;
            let mut s = rat(0, 1);
            for mid in sigs(1, 0, top.part(0))? {
                if corner_prob(LawCase::AltEven, &top, &mid, &t)?.is_zero() {
                    continue;
                }
                for a in 0..=cutoff {
                    s += joint_corners_weight(Case::Alt, &[Signature::new(vec![a])?, mid.clone(), top.clone()], &t)?;
                }
                let spec = LawSpec::Corner { case: LawCase::AltOdd, given: mid.clone() };
                let tail = closed_tail(&spec, &t, cutoff)?.ok_or_else(|| Error::Domain("no closed tail".into()))?;
                s += &haar * corner_prob(LawCase::AltEven, &top, &mid, &t)? * tail;
            }
            Ok(s == haar)
        })();
        results.push(check(ok, || format!("alt corner chain below {top}")));
    }

    // Product chains: each step has unbounded support, so sum to cutoffs 6 and
    // 8 above the start and require a nonnegative gap that shrinks and ends
    // below 10^-3 of the mass.
    let eps = rat(1, 1000);
    for case in [Case::Alt, Case::Her] {
        let haar_case = if case == Case::Alt { LawCase::AltEven } else { LawCase::Her };
        for n in 1..=2usize {
            for lam in sigs(n, 0, 2)? {
                let ok = (|| {
                    let haar = haar_sn_prob(haar_case, n, &lam, &t)?;
                    let gap = |extra: i64| -> Result<BigRational> {
                        let next = sigs(n, 0, lam.part(0) + extra)?;
                        let s: Vec<BigRational> = next
                            .par_iter()
                            .map(|nx| joint_product_weight(case, &[lam.clone(), nx.clone()], &t))
                            .collect::<Result<_>>()?;
                        Ok(&haar - s.into_iter().sum::<BigRational>())
                    };
                    let (near, far) = (gap(6)?, gap(8)?);
                    Ok(!far.is_negative() && far < near && far <= &haar * &eps)
                })();
                results.push(check(ok, || format!("{case} product chain from {lam}")));
            }
        }
    }

    let eps = rat(1, 100_000_000);
    for case in [LawCase::AltEven, LawCase::AltOdd, LawCase::Her] {
        for n in 1..=2usize {
            for lam in partitions_up_to(n, 4)? {
                let ok = (|| {
                    let lim = haar_sn_prob(case, n, &lam, &t)?;
                    let far = corner_invertible_prob(case, n, n + 30, &lam, &t)?;
                    Ok((lim - far).abs() < eps)
                })();
                results.push(check(ok, || format!("{case} corner of invertible at {lam}, m = n + 30")));
            }
        }
    }
    Ok(SuiteReport::new(Suite::Marginalization, results))
}

/// Histograms of several experiments are identical for 1, 4 and 8 workers.
pub fn reproducibility(opts: SamplingOpts) -> Result<SuiteReport> {
    let ring = RingCfg::new(opts.p, 8)?;
    let specs = [
        LawSpec::Haar { case: LawCase::Her, n: 2 },
        LawSpec::Haar { case: LawCase::AltEven, n: 2 },
        LawSpec::Corner { case: LawCase::Her, given: Signature::new(vec![1, 0])? },
        LawSpec::Product { case: Case::Her, mu: Signature::new(vec![1, 0])?, nu: Signature::new(vec![1, 0])? },
    ];
    let mut results = Vec::new();
    for spec in &specs {
        let runs: Vec<_> = [1usize, 4, 8]
            .iter()
            .map(|&w| run_experiment(spec, &ring, opts.samples, opts.seed, w, 4))
            .collect::<Result<_>>()?;
        let same = runs.windows(2).all(|w| w[0] == w[1]);
        results.push((!same).then(|| format!("{:?}: histograms differ across worker counts", spec.family())));
    }
    Ok(SuiteReport::new(Suite::Reproducibility, results))
}
