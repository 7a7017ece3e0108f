//! Monte Carlo experiments for each law, goodness-of-fit comparison against
//! the exact distributions, and exhaustive oracles over the residue field.
//!
//! Sample `i` of an experiment draws from a ChaCha8 stream keyed by
//! `(seed, i)`, so histograms do not depend on the number of workers.

use crate::exactnum::rat;
use crate::heckecoeff::Case;
use crate::lawbook::{ExactDistribution, LawCase, LawSpec};
use crate::padicring::{BaseElem, ExtElem, RingCfg};
use crate::randmat::{
    bi_invariant, haar_alt, haar_her, haar_m, invariant_alt, invariant_her, sn_elim, LocalMatrix, SnResult,
};
use crate::sigcore::Signature;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::BTreeMap;

/// Default p-value threshold of [`compare`].
pub const P_THRESHOLD: f64 = 1e-3;
/// Default cap on the fraction of discarded (precision-censored) samples.
pub const DISCARD_CAP: f64 = 1e-2;
/// Cap on exhaustive enumerations.
pub const SPACE_BOUND: u64 = 10_000_000;
/// Required gap between the precision and the cutoff.
pub const PRECISION_MARGIN: i64 = 4;
/// Resampling cap when conditioning a Haar matrix on invertibility.
const INVERTIBLE_RETRIES: usize = 100_000;

fn ser_counts<K: Serialize, S: Serializer>(m: &BTreeMap<K, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter())
}

/// Counts of singular-number outcomes. Outcomes with a part above `cutoff`
/// go to `tail_bin`; precision-censored samples are discarded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Histogram {
    #[serde(serialize_with = "ser_counts")]
    pub counts: BTreeMap<Signature, u64>,
    pub discarded: u64,
    pub total: u64,
    pub tail_bin: u64,
    pub cutoff: i64,
}

impl Histogram {
    pub fn new(cutoff: i64) -> Self {
        Histogram { counts: BTreeMap::new(), discarded: 0, total: 0, tail_bin: 0, cutoff }
    }

    pub fn record(&mut self, outcome: Outcome) {
        self.total += 1;
        match outcome {
            Outcome::Discard => self.discarded += 1,
            Outcome::Tail => self.tail_bin += 1,
            Outcome::Atom(l) => {
                if l.first().map_or(false, |x| x > self.cutoff) {
                    self.tail_bin += 1;
                } else {
                    *self.counts.entry(l).or_insert(0) += 1;
                }
            }
        }
    }

    fn merge(mut self, o: Histogram) -> Histogram {
        for (k, v) in o.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.discarded += o.discarded;
        self.total += o.total;
        self.tail_bin += o.tail_bin;
        self
    }

    /// Samples kept after discarding.
    pub fn kept(&self) -> u64 {
        self.total - self.discarded
    }

    pub fn count(&self, l: &Signature) -> u64 {
        self.counts.get(l).copied().unwrap_or(0)
    }

    pub fn discard_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.discarded as f64 / self.total as f64
        }
    }
}

/// Chain-valued counts for the joint laws.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainHistogram {
    #[serde(serialize_with = "ser_counts")]
    pub counts: BTreeMap<Vec<Signature>, u64>,
    pub discarded: u64,
    pub total: u64,
    pub tail_bin: u64,
    pub cutoff: i64,
}

/// One sample's outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Atom(Signature),
    Tail,
    Discard,
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))
}

fn keep(r: SnResult) -> Outcome {
    if r.reliable {
        Outcome::Atom(r.signature)
    } else {
        Outcome::Discard
    }
}

fn check_precision(ring: &RingCfg, cutoff: i64) -> Result<()> {
    if (ring.precision() as i64) < cutoff + PRECISION_MARGIN {
        return Err(Error::Precision(format!(
            "precision K = {} must be at least cutoff + {PRECISION_MARGIN} = {}",
            ring.precision(),
            cutoff + PRECISION_MARGIN
        )));
    }
    Ok(())
}

fn alt_size(case: LawCase, n: usize) -> usize {
    match case {
        LawCase::AltOdd => 2 * n + 1,
        _ => 2 * n,
    }
}

/// Haar element of `Alt_{size}` or `Her_{size}` resampled until invertible.
fn invertible_alt<R: Rng>(ring: &RingCfg, size: usize, rng: &mut R) -> Result<LocalMatrix<BaseElem>> {
    for _ in 0..INVERTIBLE_RETRIES {
        let a = haar_alt(ring, size, rng);
        let sn = sn_elim(&a)?;
        if sn.reliable && sn.signature.parts().iter().all(|&x| x == 0) && size % 2 == 0 {
            return Ok(a);
        }
    }
    Err(Error::Unresolved("no invertible alternating sample".into()))
}

fn invertible_her<R: Rng>(ring: &RingCfg, size: usize, rng: &mut R) -> Result<LocalMatrix<ExtElem>> {
    for _ in 0..INVERTIBLE_RETRIES {
        let a = haar_her(ring, size, rng);
        let sn = sn_elim(&a)?;
        if sn.reliable && sn.signature.parts().iter().all(|&x| x == 0) {
            return Ok(a);
        }
    }
    Err(Error::Unresolved("no invertible Hermitian sample".into()))
}

/// The matrix experiment of a single-outcome law.
pub fn sample_outcome<R: Rng>(spec: &LawSpec, ring: &RingCfg, rng: &mut R) -> Result<Outcome> {
    let out = match spec {
        LawSpec::Haar { case: LawCase::Her, n } => keep(sn_elim(&haar_her(ring, *n, rng))?),
        LawSpec::Haar { case, n } => keep(sn_elim(&haar_alt(ring, alt_size(*case, *n), rng))?),
        LawSpec::Product { case: Case::Alt, mu, nu } => {
            let a = invariant_alt(ring, nu, 2 * nu.len(), rng)?;
            let b: LocalMatrix<BaseElem> = bi_invariant(ring, mu, rng)?;
            keep(sn_elim(&a.sandwich(&b)?)?)
        }
        LawSpec::Product { case: Case::Her, mu, nu } => {
            let a = invariant_her(ring, nu, rng)?;
            let b: LocalMatrix<ExtElem> = bi_invariant(ring, mu, rng)?;
            keep(sn_elim(&a.sandwich(&b)?)?)
        }
        LawSpec::Corner { case: LawCase::Her, given } => {
            let a = invariant_her(ring, given, rng)?;
            keep(sn_elim(&a.corner(given.len() - 1)?)?)
        }
        LawSpec::Corner { case, given } => {
            let size = alt_size(*case, given.len());
            let a = invariant_alt(ring, given, size, rng)?;
            keep(sn_elim(&a.corner(size - 1)?)?)
        }
        LawSpec::CornerInvertible { case: LawCase::Her, n, m } => {
            keep(sn_elim(&invertible_her(ring, *m, rng)?.corner(*n)?)?)
        }
        LawSpec::CornerInvertible { case, n, m } => {
            let a = invertible_alt(ring, 2 * m, rng)?;
            keep(sn_elim(&a.corner(alt_size(*case, *n))?)?)
        }
        LawSpec::Invertible { case, size } => {
            let sn = match case {
                Case::Alt => sn_elim(&haar_alt(ring, *size, rng))?,
                Case::Her => sn_elim(&haar_her(ring, *size, rng))?,
            };
            let full_rank = *case == Case::Her || size % 2 == 0;
            if full_rank && sn.reliable && sn.signature.parts().iter().all(|&x| x == 0) {
                Outcome::Atom(sn.signature)
            } else {
                Outcome::Tail
            }
        }
        LawSpec::JointCorners { .. } | LawSpec::JointProduct { .. } => {
            return Err(Error::Domain("joint laws have chain-valued outcomes; use run_chain_experiment".into()))
        }
    };
    Ok(out)
}

/// Histogram of `samples` draws of the experiment matching `spec`.
pub fn run_experiment(
    spec: &LawSpec,
    ring: &RingCfg,
    samples: u64,
    seed: u64,
    workers: usize,
    cutoff: i64,
) -> Result<Histogram> {
    spec.validate()?;
    check_precision(ring, cutoff)?;
    if matches!(spec, LawSpec::JointCorners { .. } | LawSpec::JointProduct { .. }) {
        return Err(Error::Domain("joint laws have chain-valued outcomes; use run_chain_experiment".into()));
    }
    pool(workers)?.install(|| {
        (0..samples)
            .into_par_iter()
            .try_fold(
                || Histogram::new(cutoff),
                |mut h, i| {
                    h.record(sample_outcome(spec, ring, &mut stream(seed, i))?);
                    Ok(h)
                },
            )
            .try_reduce(|| Histogram::new(cutoff), |a, b| Ok(a.merge(b)))
    })
}

fn chain_outcome<R: Rng>(spec: &LawSpec, ring: &RingCfg, rng: &mut R) -> Result<Option<Vec<Signature>>> {
    let mut chain = Vec::new();
    match spec {
        LawSpec::JointCorners { case: Case::Alt, n } => {
            let a = haar_alt(ring, 2 * n, rng);
            for size in 2..=2 * n {
                let r = sn_elim(&a.corner(size)?)?;
                if !r.reliable {
                    return Ok(None);
                }
                chain.push(r.signature);
            }
        }
        LawSpec::JointCorners { case: Case::Her, n } => {
            let a = haar_her(ring, *n, rng);
            for size in 1..=*n {
                let r = sn_elim(&a.corner(size)?)?;
                if !r.reliable {
                    return Ok(None);
                }
                chain.push(r.signature);
            }
        }
        LawSpec::JointProduct { case: Case::Alt, n, k } => {
            let mut a = haar_alt(ring, 2 * n, rng);
            for step in 0..=*k {
                if step > 0 {
                    a = a.sandwich(&haar_m(ring, 2 * n, 2 * n, rng))?;
                }
                let r = sn_elim(&a)?;
                if !r.reliable {
                    return Ok(None);
                }
                chain.push(r.signature);
            }
        }
        LawSpec::JointProduct { case: Case::Her, n, k } => {
            let mut a = haar_her(ring, *n, rng);
            for step in 0..=*k {
                if step > 0 {
                    a = a.sandwich(&haar_m(ring, *n, *n, rng))?;
                }
                let r = sn_elim(&a)?;
                if !r.reliable {
                    return Ok(None);
                }
                chain.push(r.signature);
            }
        }
        _ => return Err(Error::Domain("chain experiments exist for the joint laws only".into())),
    }
    Ok(Some(chain))
}

/// Histogram of chains for the joint laws. A chain goes to the tail bin when
/// any of its signatures has a part above `cutoff`.
pub fn run_chain_experiment(
    spec: &LawSpec,
    ring: &RingCfg,
    samples: u64,
    seed: u64,
    workers: usize,
    cutoff: i64,
) -> Result<ChainHistogram> {
    spec.validate()?;
    check_precision(ring, cutoff)?;
    let outcomes: Vec<Option<Vec<Signature>>> = pool(workers)?
        .install(|| (0..samples).into_par_iter().map(|i| chain_outcome(spec, ring, &mut stream(seed, i))).collect::<Result<_>>())?;
    let mut h = ChainHistogram { counts: BTreeMap::new(), discarded: 0, total: samples, tail_bin: 0, cutoff };
    for o in outcomes {
        match o {
            None => h.discarded += 1,
            Some(c) if c.iter().any(|l| l.first().map_or(false, |x| x > cutoff)) => h.tail_bin += 1,
            Some(c) => *h.counts.entry(c).or_insert(0) += 1,
        }
    }
    Ok(h)
}

/// Histogram drawn directly from an exact law (multinomial sampling).
pub fn sample_exact(reference: &ExactDistribution, samples: u64, seed: u64) -> Histogram {
    let cells: Vec<(&Signature, f64)> = reference.atoms.iter().map(|(k, v)| (k, v.to_f64().unwrap_or(0.0))).collect();
    let mut h = Histogram::new(reference.support_cutoff);
    for i in 0..samples {
        let mut u: f64 = stream(seed, i).gen();
        let mut out = Outcome::Tail;
        for (k, p) in &cells {
            if u < *p {
                out = Outcome::Atom((*k).clone());
                break;
            }
            u -= p;
        }
        h.record(out);
    }
    h
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub tv_distance: f64,
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
    pub pass: bool,
    pub discard_fraction: f64,
    pub samples: u64,
}

/// Pearson chi-square of `h` against `reference`. Atoms with expected count
/// below 5, observed outcomes outside the reference support and the tail bin
/// form one merged cell.
pub fn compare(h: &Histogram, reference: &ExactDistribution, p_threshold: f64, discard_cap: f64) -> Result<ComparisonReport> {
    if h.cutoff != reference.support_cutoff {
        return Err(Error::Dimension(format!(
            "histogram cutoff {} differs from reference cutoff {}",
            h.cutoff, reference.support_cutoff
        )));
    }
    let n = h.kept();
    if n == 0 || h.tail_bin == n {
        return Err(Error::Degenerate("no sample lands below the cutoff".into()));
    }
    if reference.atoms.is_empty() {
        return Err(Error::Degenerate("reference puts all mass in the tail".into()));
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut merged = (h.tail_bin as f64, (&reference.tail_mass * &nn).to_f64().unwrap_or(0.0));
    let mut tv = (BigRational::new(BigInt::from(h.tail_bin), BigInt::from(n)) - &reference.tail_mass).abs();
    for (l, p) in &reference.atoms {
        let obs = h.count(l);
        let exp = (p * &nn).to_f64().unwrap_or(0.0);
        tv += (BigRational::new(BigInt::from(obs), BigInt::from(n)) - p).abs();
        if exp >= 5.0 {
            cells.push((obs as f64, exp));
        } else {
            merged.0 += obs as f64;
            merged.1 += exp;
        }
    }
    for (l, c) in &h.counts {
        if !reference.atoms.contains_key(l) {
            merged.0 += *c as f64;
            tv += BigRational::new(BigInt::from(*c), BigInt::from(n));
        }
    }
    if merged.1 >= 5.0 || cells.is_empty() {
        cells.push(merged);
    } else if merged.0 > 0.0 || merged.1 > 0.0 {
        let (i, _) = cells
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .expect("nonempty");
        cells[i].0 += merged.0;
        cells[i].1 += merged.1;
    }
    let mut chi = 0.0;
    for (o, e) in &cells {
        if *e > 0.0 {
            chi += (o - e).powi(2) / e;
        } else if *o > 0.0 {
            chi = f64::INFINITY;
        }
    }
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 {
        if chi == 0.0 || chi.is_nan() {
            1.0
        } else {
            0.0
        }
    } else if chi.is_infinite() {
        0.0
    } else {
        let d = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(format!("chi-square: {e}")))?;
        1.0 - d.cdf(chi)
    };
    let discard_fraction = h.discard_fraction();
    let tv_distance = (tv / rat(2, 1)).to_f64().unwrap_or(f64::NAN);
    Ok(ComparisonReport {
        tv_distance,
        chi_square: chi,
        dof,
        p_value,
        pass: p_value > p_threshold && discard_fraction < discard_cap,
        discard_fraction,
        samples: h.total,
    })
}

fn check_space(space: u64) -> Result<()> {
    if space > SPACE_BOUND {
        return Err(Error::SpaceTooLarge(format!("{space} states exceed {SPACE_BOUND}")));
    }
    Ok(())
}

/// `𝔽_q` for prime `q`; the Hermitian class also needs `q` odd.
fn field(case: Case, q: u64) -> Result<RingCfg> {
    match case {
        Case::Alt => RingCfg::base_ring(q, 1),
        Case::Her => RingCfg::new(q, 1),
    }
    .map_err(|_| Error::Domain(format!("residue field size {q} is not supported for {case}")))
}

/// Number of free residue-field coordinates of `Alt_size` or `Her_size`.
fn coordinates(case: Case, size: usize) -> usize {
    match case {
        Case::Alt => size * (size.saturating_sub(1)) / 2,
        Case::Her => size * size,
    }
}

/// Every matrix of the class over the residue field, in a fixed order.
fn for_each_residue_matrix(case: Case, size: usize, f: &RingCfg, mut visit: impl FnMut(SnResult)) -> Result<()> {
    let q = f.p();
    let coords = coordinates(case, size);
    let space = q.checked_pow(coords as u32).unwrap_or(u64::MAX);
    check_space(space)?;
    let mut digits = vec![0i64; coords];
    for _ in 0..space {
        let sn = match case {
            Case::Alt => {
                let mut m = LocalMatrix::<BaseElem>::zeros(f, size, size, crate::randmat::Symmetry::Alternating);
                let mut it = digits.iter();
                for i in 0..size {
                    for j in i + 1..size {
                        let x = f.base(*it.next().expect("coordinate"));
                        m.set(i, j, x);
                        m.set(j, i, -x);
                    }
                }
                sn_elim(&m)?
            }
            Case::Her => {
                let mut m = LocalMatrix::<ExtElem>::zeros(f, size, size, crate::randmat::Symmetry::Hermitian);
                let mut it = digits.iter();
                for i in 0..size {
                    m.set(i, i, f.ext(*it.next().expect("coordinate"), 0));
                    for j in i + 1..size {
                        let x = f.ext(*it.next().expect("coordinate"), *it.next().expect("coordinate"));
                        m.set(i, j, x);
                        m.set(j, i, x.conj());
                    }
                }
                sn_elim(&m)?
            }
        };
        visit(sn);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < q as i64 {
                break;
            }
            *d = 0;
        }
    }
    Ok(())
}

/// Fraction of invertible matrices of the class over `𝔽_q`, by enumeration.
pub fn invertible_fraction(case: Case, size: usize, q: u64) -> Result<BigRational> {
    let dist = residue_distribution(case, size, q)?;
    Ok(dist.get(&size).cloned().unwrap_or_else(|| rat(0, 1)))
}

/// Law of the rank over `𝔽_q` of a uniform matrix of the class, by enumeration.
pub fn residue_distribution(case: Case, size: usize, q: u64) -> Result<BTreeMap<usize, BigRational>> {
    let f = field(case, q)?;
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut total = 0u64;
    for_each_residue_matrix(case, size, &f, |sn| {
        let units = sn.signature.parts().iter().filter(|&&x| x == 0).count();
        let rank = match case {
            Case::Alt => 2 * units,
            Case::Her => units,
        };
        *counts.entry(rank).or_insert(0) += 1;
        total += 1;
    })?;
    Ok(counts
        .into_iter()
        .map(|(k, c)| (k, BigRational::new(BigInt::from(c), BigInt::from(total))))
        .collect())
}

/// Number of left cosets `g GL_n(ℤ_p)` in `GL_n(ℤ_p) diag(p^{μ_i}) GL_n(ℤ_p)`,
/// counted over lower-triangular representatives: diagonal `p^{a_i}`, entries
/// below it in row `i` reduced mod `p^{a_i}`.
pub fn coset_count(mu: &Signature, p: u64) -> Result<u64> {
    let n = mu.len();
    if mu.last().map_or(false, |x| x < 0) {
        return Err(Error::Domain(format!("coset count needs nonnegative parts, got {mu}")));
    }
    let top = mu.first().unwrap_or(0) as u32;
    let total = mu.size() as u32;
    let ring = RingCfg::base_ring(p, total + 2)?;
    // Diagonal exponent vectors with the right determinant and parts ≤ μ_1.
    let mut diags: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        diags = diags
            .into_iter()
            .flat_map(|d| (0..=top).map(move |a| [d.clone(), vec![a]].concat()))
            .filter(|d| d.iter().sum::<u32>() <= total)
            .collect();
    }
    diags.retain(|d| d.iter().sum::<u32>() == total);
    let space: u64 = diags
        .iter()
        .map(|d| d.iter().enumerate().map(|(i, &a)| p.saturating_pow(a * i as u32)).product::<u64>())
        .sum();
    check_space(space)?;
    let mut count = 0u64;
    for d in &diags {
        let slots: Vec<(usize, usize, u64)> = (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, p.pow(d[i])))
            .collect();
        let mut digits = vec![0u64; slots.len()];
        loop {
            let mut m = LocalMatrix::<BaseElem>::zeros(&ring, n, n, crate::randmat::Symmetry::None);
            for (i, &a) in d.iter().enumerate() {
                m.set(i, i, ring.p_pow(a));
            }
            for (s, &(i, j, _)) in slots.iter().enumerate() {
                m.set(i, j, ring.base(digits[s] as i64));
            }
            let sn = sn_elim(&m)?;
            if sn.reliable && sn.signature == *mu {
                count += 1;
            }
            let mut carry = true;
            for (s, dgt) in digits.iter_mut().enumerate() {
                *dgt += 1;
                if *dgt < slots[s].2 {
                    carry = false;
                    break;
                }
                *dgt = 0;
            }
            if carry {
                break;
            }
        }
    }
    Ok(count)
}

pub mod suites;

#[cfg(test)]
mod tests;
