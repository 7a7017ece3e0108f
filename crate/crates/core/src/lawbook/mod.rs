//! Singular-number laws of alternating and Hermitian p-adic random matrices
//! as exact formulas, plus exact finite-support tables of those laws.

mod laws;

pub use laws::{
    corner_invertible_prob, corner_prob, haar_sn_prob, haar_sn_prob_hl, haar_sn_prob_numeric, haar_tail,
    her_corner_summands, invertible_prob, joint_corners_weight, joint_product_weight, multiplier_skew_q,
    multiplier_spec, product_prob, product_step, product_support,
};

use crate::exactnum::{rat, Field, RationalFunction};
use crate::heckecoeff::Case;
use crate::sigcore::{enumerate, Signature};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Product,
    Corner,
    Haar,
    CornerInvertible,
    JointCorners,
    JointProduct,
    Invertible,
}

/// Symmetry class, with the parity of an alternating size where it matters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawCase {
    Alt,
    AltOdd,
    AltEven,
    Her,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "product" => Family::Product,
            "corner" => Family::Corner,
            "haar" => Family::Haar,
            "corner_invertible" => Family::CornerInvertible,
            "joint_corners" => Family::JointCorners,
            "joint_product" => Family::JointProduct,
            "invertible" => Family::Invertible,
            _ => return Err(Error::Parse(format!("unknown family {s:?}"))),
        })
    }
}

impl FromStr for LawCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alt" => LawCase::Alt,
            "alt_odd" | "alt_odd_to_even" => LawCase::AltOdd,
            "alt_even" | "alt_even_to_odd" => LawCase::AltEven,
            "her" => LawCase::Her,
            _ => return Err(Error::Parse(format!("unknown case {s:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Product => "product",
            Family::Corner => "corner",
            Family::Haar => "haar",
            Family::CornerInvertible => "corner_invertible",
            Family::JointCorners => "joint_corners",
            Family::JointProduct => "joint_product",
            Family::Invertible => "invertible",
        })
    }
}

impl fmt::Display for LawCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LawCase::Alt => "alt",
            LawCase::AltOdd => "alt_odd",
            LawCase::AltEven => "alt_even",
            LawCase::Her => "her",
        })
    }
}

impl LawCase {
    /// The matrix class, forgetting parity.
    pub fn class(self) -> Case {
        match self {
            LawCase::Her => Case::Her,
            _ => Case::Alt,
        }
    }
}

/// A law with everything but the parameter fixed. Dimensions follow the
/// conventions of the individual law functions.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LawSpec {
    Product { case: Case, mu: Signature, nu: Signature },
    Corner { case: LawCase, given: Signature },
    Haar { case: LawCase, n: usize },
    CornerInvertible { case: LawCase, n: usize, m: usize },
    JointCorners { case: Case, n: usize },
    JointProduct { case: Case, n: usize, k: usize },
    Invertible { case: Case, size: usize },
}

impl LawSpec {
    pub fn family(&self) -> Family {
        match self {
            LawSpec::Product { .. } => Family::Product,
            LawSpec::Corner { .. } => Family::Corner,
            LawSpec::Haar { .. } => Family::Haar,
            LawSpec::CornerInvertible { .. } => Family::CornerInvertible,
            LawSpec::JointCorners { .. } => Family::JointCorners,
            LawSpec::JointProduct { .. } => Family::JointProduct,
            LawSpec::Invertible { .. } => Family::Invertible,
        }
    }

    /// Checks the dimension conventions of the family.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Dimension(m));
        match self {
            LawSpec::Product { case, mu, nu } => {
                let want = if *case == Case::Alt { 2 * nu.len() } else { nu.len() };
                if nu.is_empty() || mu.len() != want {
                    return bad(format!("product {case}: mu={mu} needs length {want} for nu={nu}"));
                }
            }
            LawSpec::Corner { case, given } => {
                if given.is_empty() && *case != LawCase::AltOdd {
                    return bad("corner of a 0x0 matrix".into());
                }
                if *case == LawCase::Alt {
                    return Err(Error::Domain("corner needs alt_odd, alt_even or her".into()));
                }
            }
            LawSpec::Haar { case, n } | LawSpec::CornerInvertible { case, n, .. } => {
                if *n == 0 {
                    return bad("n must be at least 1".into());
                }
                if *case == LawCase::Alt {
                    return Err(Error::Domain("needs alt_even, alt_odd or her".into()));
                }
                if let LawSpec::CornerInvertible { m, .. } = self {
                    if m <= n {
                        return Err(Error::Domain(format!("needs m > n, got m={m}, n={n}")));
                    }
                }
            }
            LawSpec::JointCorners { n, .. } | LawSpec::JointProduct { n, .. } | LawSpec::Invertible { size: n, .. } => {
                if *n == 0 {
                    return bad("size must be at least 1".into());
                }
            }
        }
        Ok(())
    }

    /// Length of the outcome signature.
    pub fn outcome_len(&self) -> usize {
        match self {
            LawSpec::Product { nu, .. } => nu.len(),
            LawSpec::Corner { case: LawCase::AltOdd, given } => given.len(),
            LawSpec::Corner { given, .. } => given.len().saturating_sub(1),
            LawSpec::Haar { n, .. } | LawSpec::CornerInvertible { n, .. } => *n,
            LawSpec::JointCorners { n, .. } | LawSpec::JointProduct { n, .. } => *n,
            LawSpec::Invertible { case: Case::Alt, size } => size / 2,
            LawSpec::Invertible { size, .. } => *size,
        }
    }

    /// Probability of the outcome `lambda` at parameter `t`.
    pub fn prob<F: Field>(&self, lambda: &Signature, t: &F) -> Result<F> {
        match self {
            LawSpec::Product { case, mu, nu } => product_prob(*case, mu, nu, lambda, t),
            LawSpec::Corner { case, given } => corner_prob(*case, given, lambda, t),
            LawSpec::Haar { case, n } => haar_sn_prob(*case, *n, lambda, t),
            LawSpec::CornerInvertible { case, n, m } => corner_invertible_prob(*case, *n, *m, lambda, t),
            LawSpec::Invertible { case, size } => {
                if lambda.parts().iter().any(|&x| x != 0) || lambda.len() != self.outcome_len() {
                    return Err(Error::Domain("the invertible law has the single atom 0".into()));
                }
                invertible_prob(*case, *size, &t.recip()?)
            }
            LawSpec::JointCorners { .. } | LawSpec::JointProduct { .. } => Err(Error::Domain(
                "joint laws are indexed by chains; use joint_corners_weight or joint_product_weight".into(),
            )),
        }
    }
}

/// Atoms of a law up to a part cutoff, with the remaining mass.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    pub atoms: BTreeMap<Signature, BigRational>,
    pub tail_mass: BigRational,
    pub support_cutoff: i64,
}

impl ExactDistribution {
    pub fn mass(&self, lambda: &Signature) -> BigRational {
        self.atoms.get(lambda).cloned().unwrap_or_else(|| rat(0, 1))
    }

    pub fn total(&self) -> BigRational {
        self.atoms.values().sum::<BigRational>() + &self.tail_mass
    }
}

impl Serialize for ExactDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            atoms: Vec<(&'a Signature, String)>,
            tail: String,
            cutoff: i64,
        }
        Repr {
            atoms: self.atoms.iter().map(|(k, v)| (k, v.to_string())).collect(),
            tail: self.tail_mass.to_string(),
            cutoff: self.support_cutoff,
        }
        .serialize(s)
    }
}

/// Candidate outcomes with all parts in `[low, cutoff]`.
fn candidates(spec: &LawSpec, cutoff: i64) -> Result<Vec<Signature>> {
    let low = match spec {
        LawSpec::Corner { given, .. } => given.last().unwrap_or(0).min(0),
        _ => 0,
    };
    if cutoff < low {
        return Ok(Vec::new());
    }
    Ok(enumerate(spec.outcome_len(), low, cutoff, None)?.collect())
}

/// Smallest cutoff the law accepts: every conditioning part must be covered.
pub fn min_cutoff(spec: &LawSpec) -> i64 {
    match spec {
        LawSpec::Corner { given, .. } => given.first().unwrap_or(0),
        LawSpec::Product { .. } => 0,
        _ => 0,
    }
}

/// Atoms of `spec` at rational `t` for every outcome with parts at most
/// `cutoff`, and `tail_mass = 1 - Σ atoms`. The product law is returned on its
/// whole (finite) support.
pub fn exact_distribution(spec: &LawSpec, t: &BigRational, cutoff: i64) -> Result<ExactDistribution> {
    spec.validate()?;
    if cutoff < min_cutoff(spec) {
        return Err(Error::Domain(format!("cutoff {cutoff} is below the conditioning part {}", min_cutoff(spec))));
    }
    let atoms: BTreeMap<Signature, BigRational> = match spec {
        LawSpec::Product { case, mu, nu } => product_support(*case, mu, nu, t)?.into_iter().collect(),
        LawSpec::Invertible { .. } => {
            let z = Signature::zeros(spec.outcome_len());
            let p = spec.prob(&z, t)?;
            BTreeMap::from([(z, p)])
        }
        LawSpec::JointCorners { .. } | LawSpec::JointProduct { .. } => {
            return Err(Error::Domain("joint laws have chain-valued outcomes".into()))
        }
        _ => {
            let cands = candidates(spec, cutoff)?;
            let vals: Vec<Result<(Signature, BigRational)>> =
                cands.into_par_iter().map(|l| spec.prob(&l, t).map(|p| (l, p))).collect();
            let mut out = BTreeMap::new();
            for r in vals {
                let (l, p) = r?;
                if p.is_negative() {
                    return Err(Error::NegativeMass(format!("atom {l} has mass {p}")));
                }
                if !Field::is_zero(&p) {
                    out.insert(l, p);
                }
            }
            out
        }
    };
    let support_cutoff = match spec {
        LawSpec::Product { .. } => atoms.keys().filter_map(|l| l.first()).max().unwrap_or(0),
        _ => cutoff,
    };
    let tail_mass = rat(1, 1) - atoms.values().sum::<BigRational>();
    if tail_mass.is_negative() {
        return Err(Error::NegativeMass(format!("atoms sum to more than 1 (tail {tail_mass})")));
    }
    Ok(ExactDistribution { atoms, tail_mass, support_cutoff })
}

/// Mass beyond `cutoff` summed in closed form where one is available:
/// Haar laws (see [`haar_tail`]), product laws (no tail) and corner laws whose
/// outcome is a single part, where the weights past the conditioning parts
/// form a geometric series. Returns `None` otherwise.
pub fn closed_tail(spec: &LawSpec, t: &BigRational, cutoff: i64) -> Result<Option<BigRational>> {
    match spec {
        LawSpec::Haar { case, n } => Ok(Some(haar_tail(*case, *n, cutoff, t)?)),
        LawSpec::Product { .. } => Ok(Some(rat(0, 1))),
        LawSpec::Corner { given, .. } if spec.outcome_len() == 1 => {
            let start = cutoff.max(given.first().unwrap_or(0)) + 1;
            let w: Vec<BigRational> =
                (0..3).map(|k| spec.prob(&Signature::new(vec![start + k])?, t)).collect::<Result<_>>()?;
            if w.iter().all(|x| Field::is_zero(x)) {
                return Ok(Some(rat(0, 1)));
            }
            if Field::is_zero(&w[0]) || &w[1] * &w[1] != &w[0] * &w[2] {
                return Ok(None);
            }
            let r = &w[1] / &w[0];
            let mut head = rat(0, 1);
            for m in cutoff + 1..start {
                head += spec.prob(&Signature::new(vec![m])?, t)?;
            }
            Ok(Some(head + &w[0] / (rat(1, 1) - r)))
        }
        _ => Ok(None),
    }
}

/// Symbolic value of a law in `q = 1/t`.
pub fn prob_in_q(spec: &LawSpec, lambda: &Signature) -> Result<RationalFunction> {
    spec.prob(lambda, &RationalFunction::t_pow(-1))
}
